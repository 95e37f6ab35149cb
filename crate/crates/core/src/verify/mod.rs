//! Three independent flexibility tests and the reducibility predicates used
//! to classify singular meshes.
//!
//! * [`trace_oracle`] chases every branch of the vertex cycle numerically.
//! * [`resultant_gcd_check`] looks for a shared factor of the two resultants
//!   obtained by eliminating `x_2` and `x_4`.
//! * [`scalar_check`] multiplies the isogram maps and tests for a scalar.

mod classify;
mod coupling;
mod trace;

pub use classify::{classify_mesh, Classification, MeshClass};
pub use coupling::{
    combination_check, combination_kind, coupling_r, ratio_constancy, reducibility_35, reducibility_53,
    ClosedForm, Combination, CouplingSystem, RatioReport, ReducedCoupling, Reducibility,
};
pub use trace::{
    alpha_grid, closing_configurations, projective_quadratic_roots, trace_oracle, FrozenCoord, TraceConfig,
    TraceReport, FLEX_THRESHOLD,
};

use thiserror::Error;

use crate::bricard::{BricardError, MeshCoeffs, QuadShape, ZERO_TOL};
use crate::mobius::{compose, isogram_map, ProjMap, SCALAR_TOL};
use crate::polyalg::{common_factor_heuristic, resultant, strip_single_variable_factors, BiPoly, PolyError};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error("quad {0} is not an isogram with a e != 0")]
    NotIsogonal(usize),
    #[error("a constant branch was found; the resultant test does not apply, use the trace test")]
    HypothesisViolated,
    #[error("coupling shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("closed-form factorization disagrees with the resultant (residual {0:e})")]
    FactorizationMismatch(f64),
    #[error(transparent)]
    Bricard(#[from] BricardError),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

/// Witness of [`scalar_check`].
#[derive(Clone, Debug)]
pub struct ScalarCheck {
    pub scalar: bool,
    /// Root index chosen per quad and the corresponding `k_i`.
    pub choice: [usize; 4],
    pub ks: [f64; 4],
    /// Plain product `N_4 N_3 N_2 N_1` for the witness.
    pub product: ProjMap,
    pub defect: f64,
}

/// Flexibility of a mesh of four isograms: some choice of components
/// `x_i y_i = k_i` makes `N_4 N_3 N_2 N_1` a scalar matrix.
pub fn scalar_check(m: &MeshCoeffs) -> Result<ScalarCheck, VerifyError> {
    let mut ks_all = Vec::with_capacity(4);
    for (i, q) in m.quads.iter().enumerate() {
        if q.shape() != QuadShape::Isogram || (q.a * q.e).abs() <= ZERO_TOL {
            return Err(VerifyError::NotIsogonal(i));
        }
        ks_all.push(q.isogram_ks());
    }
    let mut best: Option<ScalarCheck> = None;
    for bits in 0..16usize {
        let choice = [0, 1, 2, 3].map(|i| (bits >> i) & 1);
        if (0..4).any(|i| choice[i] >= ks_all[i].len()) {
            continue;
        }
        let ks = [0, 1, 2, 3].map(|i| ks_all[i][choice[i]]);
        let maps: Vec<ProjMap> = (0..4).map(|i| isogram_map(ks[i], m.f[i].value())).collect();
        let defect = compose(&maps).scalar_defect();
        if best.as_ref().map_or(true, |b| defect < b.defect) {
            let product = maps[3].mul(&maps[2]).mul(&maps[1]).mul(&maps[0]);
            best = Some(ScalarCheck { scalar: defect <= SCALAR_TOL, choice, ks, product, defect });
        }
        if defect <= SCALAR_TOL {
            break;
        }
    }
    Ok(best.expect("at least one sign choice"))
}

#[derive(Clone, Debug)]
pub struct GcdCheck {
    pub shared: bool,
    pub fraction: f64,
    pub r1: BiPoly,
    pub r3: BiPoly,
}

/// Resultants `R_1 = Res(G_1, G_2; x_2)` and `R_3 = Res(G_3, G_4; x_4)`,
/// both written in `(x_1, x_3)`.
pub fn cycle_resultants(m: &MeshCoeffs) -> Result<(BiPoly, BiPoly), VerifyError> {
    let g = [0, 1, 2, 3].map(|i| m.big_g(i));
    let r1 = resultant(&g[0], &g[1])?.with_vars("x1", "x3");
    let r3 = resultant(&g[2], &g[3])?.transpose().with_vars("x1", "x3");
    Ok((r1, r3))
}

/// Flexibility through a common factor of `R_1` and `R_3`. Only meaningful
/// when the zero set has no constant branch, which `trace` must confirm.
pub fn resultant_gcd_check(m: &MeshCoeffs, trace: &TraceReport) -> Result<GcdCheck, VerifyError> {
    if trace.has_constant_branch() {
        return Err(VerifyError::HypothesisViolated);
    }
    let (r1, r3) = cycle_resultants(m)?;
    let (s1, s3) = (strip_single_variable_factors(&r1), strip_single_variable_factors(&r3));
    let rep = common_factor_heuristic(&s1, &s3, 64, 1e-6, 0x5eed);
    Ok(GcdCheck { shared: rep.shared, fraction: rep.fraction, r1: s1, r3: s3 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bricard::QuadCoeffs;

    #[test]
    fn symmetric_scalar_product_is_4i() {
        let sc = scalar_check(&MeshCoeffs::symmetric()).unwrap();
        assert!(sc.scalar);
        let p = sc.product.m;
        let want = [[4.0, 0.0], [0.0, 4.0]];
        for i in 0..2 {
            for j in 0..2 {
                assert!((p[i][j].re - want[i][j]).abs() < 1e-12 && p[i][j].im == 0.0);
            }
        }
    }

    #[test]
    fn scalar_check_rejects_deltoid() {
        let mut m = MeshCoeffs::symmetric();
        m.quads[2] = QuadCoeffs::new(0.5, 0.3, 0.0, 0.0).unwrap();
        assert!(matches!(scalar_check(&m), Err(VerifyError::NotIsogonal(2))));
    }

    #[test]
    fn gcd_agrees_on_symmetric_and_perturbed() {
        let m = MeshCoeffs::symmetric();
        let t = trace_oracle(&m, &TraceConfig::default());
        assert!(resultant_gcd_check(&m, &t).unwrap().shared);
        let mut p = m.clone();
        p.quads[1] = QuadCoeffs::new(-0.6, 0.1, 0.0, 2.0 / 3.0).unwrap();
        let t = trace_oracle(&p, &TraceConfig::default());
        assert!(!t.is_flexible());
        assert!(!resultant_gcd_check(&p, &t).unwrap().shared);
    }
}
