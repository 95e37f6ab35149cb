use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::VerifyError;
use crate::bricard::{HingeParam, MeshCoeffs, QuadCoeffs, QuadShape, ZERO_TOL};
use crate::polyalg::{resultant, BiPoly};

/// Two consecutive quads reduced to one factor each, together with the
/// hinge between them.
#[derive(Clone, Debug)]
pub struct ReducedCoupling {
    pub first: usize,
    pub selectors: (u8, u8),
    /// `g_j` of each quad, in `(x_i, y_i)`.
    pub factors: [BiPoly; 2],
    /// `G_j = Res(g_j, h; y)`, in `(x_i, x_{i+1})`.
    pub big_g: [BiPoly; 2],
    pub hinge: HingeParam,
}

impl ReducedCoupling {
    /// Coupling of quads `first` and `first + 1`. `ks` picks the isogram
    /// root where a selector is 1.
    pub fn new(m: &MeshCoeffs, first: usize, selectors: (u8, u8), ks: (usize, usize)) -> Result<Self, VerifyError> {
        let second = (first + 1) % 4;
        let f1 = m.quads[first].reduced_factor(selectors.0, ks.0)?;
        let f2 = m.quads[second].reduced_factor(selectors.1, ks.1)?;
        let g1 = resultant(&f1, &m.f[first].poly())?;
        let g2 = resultant(&f2, &m.f[second].poly())?;
        Ok(ReducedCoupling {
            first,
            selectors,
            factors: [f1, f2],
            big_g: [g1, g2],
            hinge: m.f[first],
        })
    }

    /// `r = Res(G_j(x_i, x_{i+1}), g_j(x_{i+1}, y_{i+1}); x_{i+1})`.
    pub fn r(&self) -> Result<BiPoly, VerifyError> {
        Ok(resultant(&self.big_g[0], &self.factors[1])?.with_vars("x_i", "y_i+1"))
    }

    /// `R = Res(G_j(x_i, x_{i+1}), G_j(x_{i+1}, x_{i+2}); x_{i+1})`.
    pub fn big_r(&self) -> Result<BiPoly, VerifyError> {
        Ok(resultant(&self.big_g[0], &self.big_g[1])?.with_vars("x_i", "x_i+2"))
    }
}

/// Closed-form factorization `scalar * prod factor^power`.
#[derive(Clone, Debug)]
pub struct ClosedForm {
    pub scalar: f64,
    pub factors: Vec<(BiPoly, u32)>,
}

impl ClosedForm {
    pub fn eval(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.factors
            .iter()
            .fold(Complex64::new(self.scalar, 0.0), |acc, (p, k)| acc * p.eval(x, y).powu(*k))
    }

    /// Largest residual `|r - closed|` over `n` random points, relative to
    /// the absolute evaluation scale of `r`.
    pub fn residual_against(&self, r: &BiPoly, n: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut worst = 0.0f64;
        for _ in 0..n {
            let x = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let y = Complex64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
            let scale = r.eval_abs(x.norm(), y.norm()).max(f64::MIN_POSITIVE);
            worst = worst.max((r.eval(x, y) - self.eval(x, y)).norm() / scale);
        }
        worst
    }
}

/// Which reducibility system a coupling satisfies.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CouplingSystem {
    Irreducible,
    System1,
    System2,
    System3,
}

#[derive(Clone, Debug)]
pub struct Reducibility {
    pub system: CouplingSystem,
    pub factorization: Option<ClosedForm>,
    /// Largest factorization residual found at the check points.
    pub residual: f64,
    /// The factor exists over the complex numbers only.
    pub real_infeasible: bool,
}

impl Reducibility {
    pub fn is_reducible(&self) -> bool {
        self.system != CouplingSystem::Irreducible
    }
}

const FACTOR_POINTS: usize = 50;
const FACTOR_TOL: f64 = 1e-9;

fn close(a: f64, b: f64) -> bool {
    (a - b).abs() <= ZERO_TOL * (1.0 + a.abs().max(b.abs()))
}

fn lin(c00: f64, c10: f64, c01: f64, c11: f64) -> BiPoly {
    BiPoly::from_real(&[&[c00, c01], &[c10, c11]]).with_vars("x_i", "y_i+1")
}

fn check_shapes(q1: &QuadCoeffs, q2: &QuadCoeffs, s1: QuadShape, s2: QuadShape) -> Result<(), VerifyError> {
    let nonzero = |v: f64| v.abs() > ZERO_TOL;
    let ok1 = q1.shape() == s1;
    let ok2 = q2.shape() == s2;
    let coeffs_ok = [q1, q2].iter().zip([s1, s2]).all(|(q, s)| match s {
        QuadShape::DeltoidIII => nonzero(q.a) && nonzero(q.b),
        QuadShape::DeltoidV => nonzero(q.a) && nonzero(q.c),
        _ => false,
    });
    if ok1 && ok2 && coeffs_ok {
        Ok(())
    } else {
        Err(VerifyError::ShapeMismatch(format!(
            "expected ({}, {}), found ({}, {})",
            s1.name(),
            s2.name(),
            q1.shape().name(),
            q2.shape().name()
        )))
    }
}

fn verified(system: CouplingSystem, form: ClosedForm, r: &BiPoly) -> Result<Reducibility, VerifyError> {
    let residual = form.residual_against(r, FACTOR_POINTS, 0x35);
    if residual > FACTOR_TOL {
        return Err(VerifyError::FactorizationMismatch(residual));
    }
    Ok(Reducibility { system, factorization: Some(form), residual, real_infeasible: false })
}

/// Reducibility of `r` for a coupling of a type iii deltoid followed by a
/// type v deltoid.
pub fn reducibility_35(q1: &QuadCoeffs, q2: &QuadCoeffs, f1: HingeParam) -> Result<Reducibility, VerifyError> {
    check_shapes(q1, q2, QuadShape::DeltoidIII, QuadShape::DeltoidV)?;
    let (a1, b1, a2, c2) = (q1.a, q1.b, q2.a, q2.c);
    let f = f1.value();
    let r = coupling_r(q1, q2, f1, (3, 5))?;
    if close(b1, -a1) && close(c2, -a2) {
        let s = f * f - 1.0;
        let u = 2.0 * f * s;
        let w = s * s - 4.0 * f * f;
        // u (4 a1 a2 x y + 1) + w (a1 x - a2 y)
        let l = lin(u, w * a1, -w * a2, 4.0 * u * a1 * a2);
        return verified(CouplingSystem::System1, ClosedForm { scalar: -1.0, factors: vec![(l, 2)] }, &r);
    }
    if close(a1 * c2, a2 * b1) && close(f, 0.0) {
        let k = b1 / a1;
        let l = lin(0.0, a1, -a2, 0.0);
        return verified(CouplingSystem::System2, ClosedForm { scalar: k, factors: vec![(l, 2)] }, &r);
    }
    if close(a1 * a2, b1 * c2) && close(f, 1.0) {
        let k = b1 / a1;
        let l = lin(0.0, a1, c2, 0.0);
        return verified(CouplingSystem::System3, ClosedForm { scalar: 16.0 * k, factors: vec![(l, 2)] }, &r);
    }
    Ok(Reducibility { system: CouplingSystem::Irreducible, factorization: None, residual: 0.0, real_infeasible: false })
}

/// Reducibility of `r` for a coupling of a type v deltoid followed by a
/// type iii deltoid.
pub fn reducibility_53(q1: &QuadCoeffs, q2: &QuadCoeffs, f1: HingeParam) -> Result<Reducibility, VerifyError> {
    check_shapes(q1, q2, QuadShape::DeltoidV, QuadShape::DeltoidIII)?;
    let (a1, c1, a2, b2) = (q1.a, q1.c, q2.a, q2.b);
    let f = f1.value();
    if close(a1 * c1, a2 * b2) && close(f, 0.0) {
        let r = coupling_r(q1, q2, f1, (5, 3))?;
        let k = b2 / a1;
        let p1 = lin(0.0, -a1, a2, 0.0);
        let p2 = lin(-k, 0.0, 0.0, 1.0);
        return verified(CouplingSystem::System1, ClosedForm { scalar: 1.0, factors: vec![(p1, 1), (p2, 1)] }, &r);
    }
    if close(16.0 * a1 * c1 * a2 * b2, 1.0) && close(f, 1.0) {
        return Ok(Reducibility {
            system: CouplingSystem::System2,
            factorization: None,
            residual: 0.0,
            real_infeasible: true,
        });
    }
    Ok(Reducibility { system: CouplingSystem::Irreducible, factorization: None, residual: 0.0, real_infeasible: false })
}

/// `r` for a pair of quads with the given selectors.
pub fn coupling_r(q1: &QuadCoeffs, q2: &QuadCoeffs, f1: HingeParam, sel: (u8, u8)) -> Result<BiPoly, VerifyError> {
    let g1 = q1.reduced_factor(sel.0, 0)?;
    let g2 = q2.reduced_factor(sel.1, 0)?;
    let big_g = resultant(&g1, &f1.poly())?;
    Ok(resultant(&big_g, &g2)?.with_vars("x_i", "y_i+1"))
}

/// Whether selectors `(j_1, j_2, j_3, j_4)` form one of the combinations
/// that admit a non-constant flexion, up to cyclic relabeling.
pub fn combination_check(sel: [u8; 4]) -> bool {
    combination_kind(sel).is_some()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Combination {
    /// `({1,3},{1,5})`, isograms next to each other.
    Adjacent,
    /// `({1,3},{1,5})`, isograms across the central face.
    Opposite,
    /// `({3,5},{3,5})`.
    Deltoidal,
}

pub fn combination_kind(sel: [u8; 4]) -> Option<Combination> {
    let pair = |a: u8, b: u8| if a <= b { (a, b) } else { (b, a) };
    for r in 0..4 {
        let s = [0, 1, 2, 3].map(|i| sel[(i + r) % 4]);
        let (p, q) = (pair(s[0], s[1]), pair(s[2], s[3]));
        if (p == (1, 3) && q == (1, 5)) || (p == (1, 5) && q == (1, 3)) {
            let ones: Vec<usize> = (0..4).filter(|&i| sel[i] == 1).collect();
            let gap = (ones[1] + 4 - ones[0]) % 4;
            return Some(if gap == 2 { Combination::Opposite } else { Combination::Adjacent });
        }
        if p == (3, 5) && q == (3, 5) {
            return Some(Combination::Deltoidal);
        }
    }
    None
}

/// Result of comparing `R_1 / R_2` over a grid.
#[derive(Clone, Copy, Debug)]
pub struct RatioReport {
    pub constant: bool,
    pub ratio: Complex64,
    pub modulus_spread: f64,
    pub phase_spread: f64,
}

/// Checks that `r1 / r2` is constant on an `n x n` grid of complex points.
pub fn ratio_constancy(r1: &BiPoly, r2: &BiPoly, n: usize) -> RatioReport {
    let mut ratios = Vec::with_capacity(n * n);
    let pt = |i: usize, shift: f64| {
        Complex64::new(-1.5 + 3.0 * i as f64 / (n.max(2) - 1) as f64, 0.25 + shift)
    };
    for i in 0..n {
        for j in 0..n {
            let (x, y) = (pt(i, 0.0), pt(j, 0.1));
            let (v1, v2) = (r1.eval(x, y), r2.eval(x, y));
            let tiny = 1e-8;
            if v1.norm() <= tiny * r1.eval_abs(x.norm(), y.norm())
                || v2.norm() <= tiny * r2.eval_abs(x.norm(), y.norm())
            {
                continue;
            }
            ratios.push(v1 / v2);
        }
    }
    if ratios.is_empty() {
        return RatioReport {
            constant: false,
            ratio: Complex64::new(f64::NAN, 0.0),
            modulus_spread: f64::INFINITY,
            phase_spread: f64::INFINITY,
        };
    }
    let first = ratios[0];
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    let mut phase = 0.0f64;
    for q in &ratios {
        lo = lo.min(q.norm());
        hi = hi.max(q.norm());
        phase = phase.max((q / first).arg().abs());
    }
    let modulus_spread = (hi - lo) / hi;
    RatioReport {
        constant: modulus_spread < 1e-8 && phase < 1e-8,
        ratio: first,
        modulus_spread,
        phase_spread: phase,
    }
}
