use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::adjacent::{draw_pair, pair_factor, FirstPair};
use super::isogonal::isogonal_tail;
use super::{AdjacentSystem, Candidate, ConstructError, Constructed, Draws, ParamKind, Recipe, Reject, Seed, Sign, Signs};
use crate::bricard::{MeshCoeffs, QuadCoeffs};
use crate::mobius::{hinge_forward, solve_half_angle};
use crate::verify::{coupling_r, ratio_constancy, MeshClass, RatioReport, ReducedCoupling};

/// How the second pair of deltoids is completed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DeltoidalOption {
    /// Second pair couples through `x_3 y_4 = k_4`.
    One,
    /// Second pair of the `b = -a` kind, coupled through a Moebius factor.
    Two,
}

impl DeltoidalOption {
    pub fn from_index(i: usize) -> Option<Self> {
        match i {
            1 => Some(DeltoidalOption::One),
            2 => Some(DeltoidalOption::Two),
            _ => None,
        }
    }

    pub fn index(self) -> usize {
        match self {
            DeltoidalOption::One => 1,
            DeltoidalOption::Two => 2,
        }
    }
}

struct Draw {
    pair: FirstPair,
    x: f64,
    y: f64,
}

/// Four deltoids whose two couplings share a factor of double degree (1, 1).
pub fn deltoidal_reducible(
    seed: &Seed,
    option: DeltoidalOption,
    system: AdjacentSystem,
) -> Result<Constructed, ConstructError> {
    use ParamKind::*;
    let mut params = system.params();
    let mut signs = system.signs();
    match option {
        DeltoidalOption::One => {
            params.extend([("a3", Real), ("a4", Real)]);
            signs.push("F3");
        }
        DeltoidalOption::Two => {
            params.extend([("f2", Hinge), ("f4", Hinge)]);
            signs.extend(["Z", "z"]);
        }
    }
    let recipe = Recipe {
        name: "deltoidal-reducible",
        class: MeshClass::DeltoidalReducible,
        params,
        signs,
        config: vec![("option", option.index().to_string()), ("system", system.index().to_string())],
    };
    let draw = |d: &mut Draws| -> Result<Draw, Reject> {
        let pair = draw_pair(system, d)?;
        let (x, y) = match option {
            DeltoidalOption::One => (d.real("a3"), d.real("a4")),
            DeltoidalOption::Two => (d.hinge("f2"), d.hinge("f4")),
        };
        Ok(Draw { pair, x, y })
    };
    let build = |d: &Draw, signs: &Signs| -> Result<Candidate, Reject> {
        let factor = pair_factor(system, &d.pair, signs)?;
        let (q1, q2, f1) = (d.pair.q1, d.pair.q2, d.pair.f1);
        match option {
            DeltoidalOption::One => {
                let (a3, a4) = (d.x, d.y);
                let tail = isogonal_tail(&factor.map(), signs["F3"])?;
                let quads = [
                    q1,
                    q2,
                    QuadCoeffs::new_unchecked(a3, 0.0, tail.k4 * a4, 0.0),
                    QuadCoeffs::new_unchecked(a4, tail.k4 * a3, 0.0, 0.0),
                ];
                let mesh = MeshCoeffs::new(quads, [f1, tail.f3, 0.0, tail.f4]).map_err(|x| x.to_string())?;
                Ok(Candidate::new(mesh).note("k4", tail.k4))
            }
            DeltoidalOption::Two => {
                let (f2, f4) = (d.x, d.y);
                let p = hinge_forward(f2).mul(&factor.map()).mul(&hinge_forward(f4));
                let [[u, v], [s, t]] = [0, 1].map(|i| [0, 1].map(|j| p.m[i][j].re));
                let z = second_pair_z(u, v, s, t, signs["Z"], signs["z"])?;
                let zv = z * v;
                let a3 = z * t / (1.0 - zv * zv);
                let a4 = s * (zv * zv - 1.0) / (4.0 * zv * t);
                if !(a3.is_finite() && a4.is_finite()) || a3 == 0.0 || a4 == 0.0 {
                    return Err("degenerate second pair".into());
                }
                let f3 = solve_half_angle(zv);
                let quads = [
                    q1,
                    q2,
                    QuadCoeffs::new_unchecked(a3, -a3, 0.0, 0.0),
                    QuadCoeffs::new_unchecked(a4, 0.0, -a4, 0.0),
                ];
                let mesh = MeshCoeffs::new(quads, [f1, f2, f3, f4]).map_err(|x| x.to_string())?;
                let r2 = coupling_r(&quads[2], &quads[3], mesh.f[2], (3, 5)).map_err(|x| x.to_string())?;
                let res = moebius_factor_residual(&r2, [u, v, s, t], 50);
                if res > 1e-8 {
                    return Err(format!("second coupling misses the transported factor ({res:e})"));
                }
                Ok(Candidate::new(mesh).note("z", z).note("factor_residual", res))
            }
        }
    };
    recipe.run(seed, draw, build)
}

/// Real `z` with `s v^4 z^4 + (4 u v t - 2 s v^2) z^2 + s = 0`. `big` picks
/// the larger (`+`) or smaller root in `z^2`, `sign` the sign of `z`.
fn second_pair_z(u: f64, v: f64, s: f64, t: f64, big: Sign, sign: Sign) -> Result<f64, Reject> {
    let a = s * v.powi(4);
    let b = 4.0 * u * v * t - 2.0 * s * v * v;
    let disc = b * b - 4.0 * a * s;
    if a == 0.0 || disc < 0.0 {
        return Err("no real z".into());
    }
    let roots = [(-b - disc.sqrt()) / (2.0 * a), (-b + disc.sqrt()) / (2.0 * a)];
    let (lo, hi) = (roots[0].min(roots[1]), roots[0].max(roots[1]));
    let z2 = match big {
        Sign::Plus => hi,
        Sign::Minus => lo,
    };
    if z2 <= 0.0 {
        return Err("no real z".into());
    }
    Ok(sign.value() * z2.sqrt())
}

/// Largest relative `|r(x, y)|` on the locus `x = (u y + v) / (s y + t)`.
fn moebius_factor_residual(r: &crate::BiPoly, [u, v, s, t]: [f64; 4], count: usize) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0b2);
    let mut worst = 0.0f64;
    for _ in 0..count {
        let y = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let x = (y * u + v) / (y * s + t);
        let scale = r.eval_abs(x.norm(), y.norm()).max(f64::MIN_POSITIVE);
        worst = worst.max(r.eval(x, y).norm() / scale);
    }
    worst
}

/// Which expression was used under the square root for `a_4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Radicand {
    /// `a1 (4 a2^2 + 1) / (a2 (4 a1^2 + 1))`.
    AsPrinted,
    /// The same with opposite sign, real when `a1 a2 < 0`.
    Negated,
}

impl Radicand {
    pub fn name(self) -> &'static str {
        match self {
            Radicand::AsPrinted => "as-printed",
            Radicand::Negated => "negated",
        }
    }

    fn from_sign(s: Sign) -> Self {
        match s {
            Sign::Plus => Radicand::AsPrinted,
            Sign::Minus => Radicand::Negated,
        }
    }
}

/// The special irreducible deltoidal mesh for given `(a1, a2, a3)`, before
/// the realizability inequalities are applied.
#[derive(Clone, Debug)]
pub struct SpecialMesh {
    pub mesh: MeshCoeffs,
    pub radicand: Radicand,
    pub ratio: RatioReport,
}

/// `f2 = f4` in the special irreducible mesh.
pub fn special_hinge() -> f64 {
    std::f64::consts::SQRT_2 - 1.0
}

/// Builds the special irreducible deltoidal mesh and tests whether its two
/// coupling resultants differ by a constant on a 20 x 20 grid.
pub fn irreducible_special_mesh(
    a1: f64,
    a2: f64,
    a3: f64,
    radicand: Radicand,
    sign: Sign,
) -> Result<SpecialMesh, Reject> {
    let den = 4.0 * a1 * a2 - 1.0;
    if den.abs() < 1e-9 {
        return Err("4 a1 a2 = 1".into());
    }
    let f1 = solve_half_angle(2.0 * (a1 + a2) / den);
    if f1.abs() < 1e-6 || (f1 - 1.0).abs() < 1e-6 {
        return Err(format!("f1 = {f1} makes the first coupling reducible"));
    }
    let b3 = (a1 + a2) * (1.0 - 4.0 * a1 * a2) / (4.0 * a1 * a3 * (4.0 * a2 * a2 + 1.0));
    let rho = a1 * (4.0 * a2 * a2 + 1.0) / (a2 * (4.0 * a1 * a1 + 1.0));
    let rho = match radicand {
        Radicand::AsPrinted => rho,
        Radicand::Negated => -rho,
    };
    if rho < 0.0 {
        return Err(format!("a4 is not real for the {} radicand", radicand.name()));
    }
    let a4 = sign.value() * a3 * rho.sqrt();
    let c4 = -b3 * a4 / a3;
    let quads = [
        QuadCoeffs::new_unchecked(a1, 0.0, a1, 0.0),
        QuadCoeffs::new_unchecked(a2, a2, 0.0, 0.0),
        QuadCoeffs::new_unchecked(a3, b3, 0.0, 0.0),
        QuadCoeffs::new_unchecked(a4, 0.0, c4, 0.0),
    ];
    let h = special_hinge();
    let mesh = MeshCoeffs::new_unchecked(quads, [f1, h, 0.0, h]).map_err(|x| x.to_string())?;
    let r1 = ReducedCoupling::new(&mesh, 0, (5, 3), (0, 0)).and_then(|c| c.big_r()).map_err(|x| x.to_string())?;
    let r2 = ReducedCoupling::new(&mesh, 2, (3, 5), (0, 0)).and_then(|c| c.big_r()).map_err(|x| x.to_string())?;
    let ratio = ratio_constancy(&r1, &r2.transpose(), 20);
    Ok(SpecialMesh { mesh, radicand, ratio })
}

/// The special irreducible deltoidal mesh with random `(a1, a2, a3)`; both
/// readings of the `a4` radicand are tried and the ratio test decides.
pub fn deltoidal_irreducible_special(seed: &Seed) -> Result<Constructed, ConstructError> {
    use ParamKind::*;
    let recipe = Recipe {
        name: "deltoidal-irreducible",
        class: MeshClass::DeltoidalIrreducible,
        params: vec![("a1", Real), ("a2", Real), ("a3", Real)],
        signs: vec!["radicand", "a4"],
        config: vec![],
    };
    let draw = |d: &mut Draws| -> Result<[f64; 3], Reject> { Ok([d.real("a1"), d.real("a2"), d.real("a3")]) };
    let build = |a: &[f64; 3], signs: &Signs| -> Result<Candidate, Reject> {
        let radicand = Radicand::from_sign(signs["radicand"]);
        let sm = irreducible_special_mesh(a[0], a[1], a[2], radicand, signs["a4"])?;
        sm.mesh.validate().map_err(|x| x.to_string())?;
        if !sm.ratio.constant {
            return Err(format!("resultant ratio not constant (spread {:e})", sm.ratio.modulus_spread));
        }
        Ok(Candidate::new(sm.mesh)
            .note("ratio_modulus_spread", sm.ratio.modulus_spread)
            .note("ratio_phase_spread", sm.ratio.phase_spread))
    };
    recipe.run(seed, draw, build)
}
