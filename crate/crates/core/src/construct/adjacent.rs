use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::isogonal::close_with_isogram;
use super::{isogram_k, Candidate, ConstructError, Constructed, Draws, ParamKind, Recipe, Reject, Seed, Sign, Signs};
use crate::bricard::{HingeParam, MeshCoeffs, QuadCoeffs};
use crate::mobius::{hinge_forward, ProjMap};
use crate::polyalg::BiPoly;
use crate::verify::{coupling_r, MeshClass};

/// Coefficient system for the two deltoids sharing hinge 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum AdjacentSystem {
    /// `b1 = -a1, c2 = -a2`.
    One,
    /// `a1 c2 = a2 b1, f1 = 0`.
    Two,
    /// `a1 a2 = b1 c2, f1 = 1`.
    Three,
    /// Deltoids in the other order, `a1 c1 = a2 b2, f1 = 0`.
    Four,
}

impl AdjacentSystem {
    pub const ALL: [AdjacentSystem; 4] =
        [AdjacentSystem::One, AdjacentSystem::Two, AdjacentSystem::Three, AdjacentSystem::Four];

    pub fn from_index(i: usize) -> Option<Self> {
        Self::ALL.get(i.wrapping_sub(1)).copied()
    }

    pub fn index(self) -> usize {
        Self::ALL.iter().position(|s| *s == self).unwrap() + 1
    }

    pub(crate) fn params(self) -> Vec<(&'static str, ParamKind)> {
        use ParamKind::*;
        match self {
            AdjacentSystem::One => vec![("a1", Real), ("a2", Real), ("f1", Hinge)],
            AdjacentSystem::Two | AdjacentSystem::Four => vec![("a1", Real), ("a2", Real), ("k", Real)],
            AdjacentSystem::Three => vec![("a1", Real), ("c2", Real), ("k", Real)],
        }
    }

    pub(crate) fn signs(self) -> Vec<&'static str> {
        match self {
            AdjacentSystem::Four => vec!["factor"],
            _ => vec![],
        }
    }

    /// Selectors of quads 1 and 2.
    pub fn selectors(self) -> (u8, u8) {
        match self {
            AdjacentSystem::Four => (5, 3),
            _ => (3, 5),
        }
    }
}

/// A factor `(p x + q) y - (m x + n)`, read as the map `y = N x` with
/// `N = [[m, n], [p, q]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LinearFactor {
    pub m: f64,
    pub n: f64,
    pub p: f64,
    pub q: f64,
}

impl LinearFactor {
    pub fn map(&self) -> ProjMap {
        ProjMap::from_real([[self.m, self.n], [self.p, self.q]])
    }

    pub fn poly(&self) -> BiPoly {
        BiPoly::from_real(&[&[-self.n, self.q], &[-self.m, self.p]])
    }

    /// Largest `|r(x, N x)|` relative to the evaluation scale over `count`
    /// random complex points.
    pub fn residual_on(&self, r: &BiPoly, count: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        for _ in 0..count {
            let x = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let y = (x * self.m + self.n) / (x * self.p + self.q);
            let scale = r.eval_abs(x.norm(), y.norm()).max(f64::MIN_POSITIVE);
            worst = worst.max(r.eval(x, y).norm() / scale);
        }
        worst
    }
}

/// Quads 1, 2, hinge 1 and the factor carrying the flexion.
#[derive(Clone, Copy, Debug)]
pub(crate) struct FirstPair {
    pub q1: QuadCoeffs,
    pub q2: QuadCoeffs,
    pub f1: f64,
    pub k: f64,
    pub a1: f64,
    pub a2: f64,
}

pub(crate) fn draw_pair(system: AdjacentSystem, d: &mut Draws) -> Result<FirstPair, Reject> {
    let z = 0.0;
    let pair = match system {
        AdjacentSystem::One => {
            let (a1, a2, f1) = (d.real("a1"), d.real("a2"), d.hinge("f1"));
            FirstPair {
                q1: QuadCoeffs::new_unchecked(a1, -a1, z, z),
                q2: QuadCoeffs::new_unchecked(a2, z, -a2, z),
                f1,
                k: f64::NAN,
                a1,
                a2,
            }
        }
        AdjacentSystem::Two => {
            let (a1, a2, k) = (d.real("a1"), d.real("a2"), d.real("k"));
            FirstPair {
                q1: QuadCoeffs::new_unchecked(a1, k * a1, z, z),
                q2: QuadCoeffs::new_unchecked(a2, z, k * a2, z),
                f1: 0.0,
                k,
                a1,
                a2,
            }
        }
        AdjacentSystem::Three => {
            let (a1, c2, k) = (d.real("a1"), d.real("c2"), d.real("k"));
            FirstPair {
                q1: QuadCoeffs::new_unchecked(a1, k * a1, z, z),
                q2: QuadCoeffs::new_unchecked(k * c2, z, c2, z),
                f1: 1.0,
                k,
                a1,
                a2: k * c2,
            }
        }
        AdjacentSystem::Four => {
            let (a1, a2, k) = (d.real("a1"), d.real("a2"), d.real("k"));
            FirstPair {
                q1: QuadCoeffs::new_unchecked(a1, z, k * a2, z),
                q2: QuadCoeffs::new_unchecked(a2, k * a1, z, z),
                f1: 0.0,
                k,
                a1,
                a2,
            }
        }
    };
    pair.q1.validate(0).map_err(|x| x.to_string())?;
    pair.q2.validate(1).map_err(|x| x.to_string())?;
    Ok(pair)
}

/// The factor of `r` for the chosen system, checked against `r` itself.
pub(crate) fn pair_factor(system: AdjacentSystem, pair: &FirstPair, signs: &Signs) -> Result<LinearFactor, Reject> {
    let (a1, a2) = (pair.a1, pair.a2);
    let lf = |m, n, p, q| LinearFactor { m, n, p, q };
    let factor = match system {
        AdjacentSystem::One => {
            let f = pair.f1;
            let s = f * f - 1.0;
            let u = 2.0 * f * s;
            let w = s * s - 4.0 * f * f;
            lf(-w * a1, -u, 4.0 * u * a1 * a2, -w * a2)
        }
        AdjacentSystem::Two => lf(a1, 0.0, 0.0, a2),
        AdjacentSystem::Three => lf(-a1, 0.0, 0.0, pair.q2.c),
        AdjacentSystem::Four => match signs["factor"] {
            Sign::Plus => lf(a1, 0.0, 0.0, a2),
            Sign::Minus => lf(0.0, pair.k, 1.0, 0.0),
        },
    };
    let f1 = HingeParam::new(pair.f1).map_err(|x| x.to_string())?;
    let r = coupling_r(&pair.q1, &pair.q2, f1, system.selectors()).map_err(|x| x.to_string())?;
    let res = factor.residual_on(&r, 50, 0xfac7);
    if res > 1e-8 {
        return Err(ConstructError::FactorExtractionFailed(res).to_string());
    }
    Ok(factor)
}

struct Draw {
    pair: FirstPair,
    f2: f64,
    a3: f64,
    e3: f64,
    a4: f64,
}

/// Two adjacent deltoids followed by two isograms.
pub fn adjacent_singular(seed: &Seed, system: AdjacentSystem) -> Result<Constructed, ConstructError> {
    use ParamKind::*;
    let mut params = system.params();
    params.extend([("f2", Hinge), ("a3", Real), ("e3", Real), ("a4", Real)]);
    let mut signs = system.signs();
    signs.extend(["k3", "F3"]);
    let recipe = Recipe {
        name: "adjacent",
        class: MeshClass::Adjacent,
        params,
        signs,
        config: vec![("system", system.index().to_string())],
    };
    let draw = |d: &mut Draws| -> Result<Draw, Reject> {
        let pair = draw_pair(system, d)?;
        let (f2, a3, e3, a4) = (d.hinge("f2"), d.real("a3"), d.real("e3"), d.real("a4"));
        QuadCoeffs::new_unchecked(a3, 0.0, 0.0, e3).validate(2).map_err(|x| x.to_string())?;
        Ok(Draw { pair, f2, a3, e3, a4 })
    };
    let build = |d: &Draw, signs: &Signs| -> Result<Candidate, Reject> {
        let factor = pair_factor(system, &d.pair, signs)?;
        let k3 = isogram_k(d.a3, d.e3, signs["k3"]).ok_or("complex k3")?;
        let p = crate::mobius::isogram_swap(k3).mul(&hinge_forward(d.f2)).mul(&factor.map());
        let (tail, e4) = close_with_isogram(&p, d.a4, signs["F3"])?;
        let quads = [
            d.pair.q1,
            d.pair.q2,
            QuadCoeffs::new_unchecked(d.a3, 0.0, 0.0, d.e3),
            QuadCoeffs::new_unchecked(d.a4, 0.0, 0.0, e4),
        ];
        let mesh = MeshCoeffs::new(quads, [d.pair.f1, d.f2, tail.f3, tail.f4]).map_err(|x| x.to_string())?;
        Ok(Candidate::new(mesh).note("k4", tail.k4))
    };
    recipe.run(seed, draw, build)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn each_system_constructs() {
        for s in AdjacentSystem::ALL {
            let out = adjacent_singular(&Seed::new(11), s).unwrap();
            assert_eq!(out.mesh.class.as_deref(), Some("adjacent"));
            assert_eq!(out.mesh.meta.as_ref().unwrap().config["system"], s.index().to_string());
        }
    }

    #[test]
    fn system_indices_round_trip() {
        for s in AdjacentSystem::ALL {
            assert_eq!(AdjacentSystem::from_index(s.index()), Some(s));
        }
        assert_eq!(AdjacentSystem::from_index(0), None);
        assert_eq!(AdjacentSystem::from_index(5), None);
    }
}
