//! Polynomial algebra over the complex numbers: dense bivariate polynomials,
//! Sylvester resultants, discriminants and a numerical common-factor test.

mod bipoly;
mod resultant;
mod univariate;

pub use bipoly::{BiPoly, Var};
pub use resultant::{determinant, discriminant_in, resultant};
pub use univariate::{aberth, quadratic, UniPoly, TRIM_REL};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::mobius::ProjPoint;

#[derive(Debug, Error, PartialEq)]
pub enum PolyError {
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("eliminated variable must appear with positive degree")]
    NotPositiveDegree,
    #[error("expected a quadratic, found degree {0}")]
    NotQuadratic(usize),
}

/// Outcome of [`common_factor_heuristic`].
#[derive(Clone, Debug)]
pub struct CommonFactorReport {
    pub shared: bool,
    /// Fraction of usable slices on which the two polynomials share a root.
    pub fraction: f64,
    pub usable: usize,
    pub skipped: usize,
}

/// Tests whether `r1(x, y)` and `r3(x, y)` share a factor that involves `y`.
///
/// Both are sliced at random complex `x`; a slice counts as sharing when some
/// root in `y` of one lies within chordal distance `tol` of a root of the
/// other. Slices where a leading coefficient collapses are skipped. The
/// verdict is positive when at least 95% of usable slices share a root.
pub fn common_factor_heuristic(
    r1: &BiPoly,
    r3: &BiPoly,
    samples: usize,
    tol: f64,
    seed: u64,
) -> CommonFactorReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut usable, mut hits, mut skipped) = (0usize, 0usize, 0usize);
    if r1.degree_y().unwrap_or(0) == 0 || r3.degree_y().unwrap_or(0) == 0 {
        return CommonFactorReport { shared: false, fraction: 0.0, usable: 0, skipped: samples };
    }
    for _ in 0..samples {
        let x = Complex64::from_polar(rng.gen_range(0.5..2.0), rng.gen_range(0.0..std::f64::consts::TAU));
        let (s1, s3) = (r1.slice_x(x), r3.slice_x(x));
        if collapsed(&s1) || collapsed(&s3) {
            log::debug!("skipping slice at x = {x}: leading coefficient collapsed");
            skipped += 1;
            continue;
        }
        usable += 1;
        let roots1 = s1.projective_roots();
        let roots3 = s3.projective_roots();
        if roots1.iter().any(|a| roots3.iter().any(|b| a.chordal_distance(b) < tol)) {
            hits += 1;
        }
    }
    let fraction = if usable == 0 { 0.0 } else { hits as f64 / usable as f64 };
    CommonFactorReport { shared: usable > 0 && fraction >= 0.95, fraction, usable, skipped }
}

fn collapsed(s: &UniPoly) -> bool {
    let lead = s.coeffs.last().map_or(0.0, |c| c.norm());
    lead <= 1e-10 * s.max_abs()
}

/// Roots shared by every coefficient polynomial of `v^k`, i.e. the roots of
/// the content of `p` in the other variable.
pub fn content_roots(p: &BiPoly, v: Var, tol: f64) -> Vec<Complex64> {
    let Some(d) = p.degree_in(v) else { return vec![] };
    let mut polys: Vec<UniPoly> = (0..=d).map(|k| p.coeff_in(v, k)).filter(|u| !u.is_zero()).collect();
    polys.sort_by_key(|u| u.degree_rel(TRIM_REL).unwrap_or(0));
    let Some(base) = polys.first() else { return vec![] };
    base.roots()
        .into_iter()
        .filter(|&r| {
            polys[1..].iter().all(|q| q.eval(r).norm() <= tol * q.eval_abs(r.norm()).max(f64::MIN_POSITIVE))
        })
        .collect()
}

/// Divides out every factor of `p` that depends on a single variable.
pub fn strip_single_variable_factors(p: &BiPoly) -> BiPoly {
    let mut out = p.clone();
    for v in [Var::X, Var::Y] {
        // Factors in the variable *other* than v show up as common roots of
        // the coefficients of v^k.
        loop {
            let roots = content_roots(&out, v, 1e-8);
            let Some(&r) = roots.first() else { break };
            out = divide_linear(&out, v, r);
        }
    }
    out.with_vars(p.vars[0], p.vars[1])
}

fn divide_linear(p: &BiPoly, v: Var, r: Complex64) -> BiPoly {
    let d = p.degree_in(v).unwrap_or(0);
    let parts: Vec<UniPoly> = (0..=d).map(|k| p.coeff_in(v, k).deflate(r)).collect();
    let width = parts.iter().map(|u| u.coeffs.len()).max().unwrap_or(0);
    let zero = Complex64::new(0.0, 0.0);
    let rows: Vec<Vec<Complex64>> = match v {
        // coefficient of x^k is a polynomial in y
        Var::X => parts.iter().map(|u| {
            let mut c = u.coeffs.clone();
            c.resize(width, zero);
            c
        }).collect(),
        Var::Y => (0..width)
            .map(|i| parts.iter().map(|u| u.coeffs.get(i).copied().unwrap_or(zero)).collect())
            .collect(),
    };
    BiPoly::new(rows)
}

/// Projective roots in `y` of `p(x0, y)`, padded with infinity up to the
/// nominal degree in `y`.
pub fn slice_roots(p: &BiPoly, x0: Complex64) -> Vec<ProjPoint> {
    p.slice_x(x0).projective_roots()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strips_content() {
        // (x - 2)(y + 1)(x y - 3)
        let a = BiPoly::from_real(&[&[-2.0], &[1.0]]);
        let b = BiPoly::from_real(&[&[1.0, 1.0]]);
        let c = BiPoly::from_real(&[&[-3.0, 0.0], &[0.0, 1.0]]);
        let p = &(&a * &b) * &c;
        let s = strip_single_variable_factors(&p);
        assert_eq!(s.bidegree().unwrap(), (1, 1));
        let ratio = s.coeff(1, 1) / s.coeff(0, 0);
        assert!((ratio + Complex64::new(1.0 / 3.0, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn shared_factor_detected() {
        let f = BiPoly::from_real(&[&[1.0, 2.0], &[0.5, -1.0]]);
        let g1 = BiPoly::from_real(&[&[0.3, 1.0], &[2.0, 0.0]]);
        let g2 = BiPoly::from_real(&[&[-1.0, 0.0, 1.0], &[0.0, 1.5, 0.0]]);
        let yes = common_factor_heuristic(&(&f * &g1), &(&f * &g2), 64, 1e-6, 7);
        assert!(yes.shared);
        let no = common_factor_heuristic(&g1, &g2, 64, 1e-6, 7);
        assert!(!no.shared);
        assert!(no.fraction < 0.05);
    }
}
