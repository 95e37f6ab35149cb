//! Bricard quadratics, hinge parameters and the mesh they assemble.
//!
//! A quad is the biquadratic `g(x, y) = a x^2 y^2 + b x^2 + c y^2 + x y + e`
//! relating the half-angle tangents of the two flexible dihedral angles at a
//! vertex of the central face. Consecutive quads are glued by the hinge
//! relation `h(y, z) = (1 - f^2)(y - z) - 2 f (y z + 1)`.

mod angles;
mod mesh;

pub use angles::SphericalQuad;
pub use mesh::{
    flip_x, flip_y, normalize, MeshCoeffs, MeshFile, MeshIoError, MeshMeta, QuadRecord, QuadSubstitution,
    TransformRecord,
};

use num_complex::Complex64;
use thiserror::Error;

use crate::mobius::ProjPoint;
use crate::polyalg::{quadratic, BiPoly};

/// Absolute tolerance for treating a coefficient as zero when labelling.
pub const ZERO_TOL: f64 = 1e-10;

#[derive(Debug, Error, PartialEq)]
pub enum BricardError {
    #[error("quad {}: violates {inequality}", index + 1)]
    InvalidQuad { index: usize, inequality: &'static str },
    #[error("hinge {}: f = {value} is outside (-1, 1]", index + 1)]
    InvalidHinge { index: usize, value: f64 },
    #[error("angles out of range: {0}")]
    InvalidAngles(&'static str),
    #[error("coefficient {name} must be finite")]
    NonFinite { name: &'static str },
    #[error("quad is not of the requested shape: {0}")]
    WrongShape(&'static str),
}

pub const DISCRIMINANT_INEQ: &str = "(1-4ae-4bc)^2 > 64abce";
pub const SPAN_INEQ: &str = "|b+c-a-e| < 1";

/// Coefficients `(a, b, c, e)` of one Bricard quadratic.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadCoeffs {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub e: f64,
}

/// Zero pattern of a quad, following the usual names for singular vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum QuadShape {
    General,
    /// `b = c = 0`
    Isogram,
    /// `a = e = 0`
    AntiIsogram,
    /// `c = e = 0`, `g = x (a x y^2 + b x + y)`
    DeltoidIII,
    /// `a = b = 0`
    AntiDeltoidIV,
    /// `b = e = 0`, `g = y (a x^2 y + c y + x)`
    DeltoidV,
    /// `a = c = 0`
    AntiDeltoidVI,
}

impl QuadShape {
    /// Selector `j` used in the degree tables: 0, 1, 3 or 5 once normalized.
    pub fn selector(self) -> Option<u8> {
        match self {
            QuadShape::General => Some(0),
            QuadShape::Isogram => Some(1),
            QuadShape::DeltoidIII => Some(3),
            QuadShape::DeltoidV => Some(5),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            QuadShape::General => "general",
            QuadShape::Isogram => "isogram",
            QuadShape::AntiIsogram => "antiisogram",
            QuadShape::DeltoidIII => "deltoid-iii",
            QuadShape::AntiDeltoidIV => "antideltoid-iv",
            QuadShape::DeltoidV => "deltoid-v",
            QuadShape::AntiDeltoidVI => "antideltoid-vi",
        }
    }
}

fn is_zero(v: f64) -> bool {
    v.abs() <= ZERO_TOL
}

impl QuadCoeffs {
    /// Validated constructor; `index` only labels the error.
    pub fn new(a: f64, b: f64, c: f64, e: f64) -> Result<Self, BricardError> {
        let q = QuadCoeffs { a, b, c, e };
        q.validate(0)?;
        Ok(q)
    }

    /// Skips the realizability inequalities.
    pub fn new_unchecked(a: f64, b: f64, c: f64, e: f64) -> Self {
        QuadCoeffs { a, b, c, e }
    }

    pub fn validate(&self, index: usize) -> Result<(), BricardError> {
        for (name, v) in [("a", self.a), ("b", self.b), ("c", self.c), ("e", self.e)] {
            if !v.is_finite() {
                return Err(BricardError::NonFinite { name });
            }
        }
        let QuadCoeffs { a, b, c, e } = *self;
        let lhs = (1.0 - 4.0 * a * e - 4.0 * b * c).powi(2);
        if !(lhs > 64.0 * a * b * c * e) {
            return Err(BricardError::InvalidQuad { index, inequality: DISCRIMINANT_INEQ });
        }
        if !((b + c - a - e).abs() < 1.0) {
            return Err(BricardError::InvalidQuad { index, inequality: SPAN_INEQ });
        }
        Ok(())
    }

    pub fn is_valid(&self) -> bool {
        self.validate(0).is_ok()
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.e]
    }

    /// `g(x, y)` as a polynomial in `(x_i, y_i)`.
    pub fn poly(&self) -> BiPoly {
        BiPoly::from_real(&[&[self.e, 0.0, self.c], &[0.0, 1.0, 0.0], &[self.b, 0.0, self.a]])
            .with_vars("x", "y")
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        let (x2, y2) = (x * x, y * y);
        self.a * x2 * y2 + self.b * x2 + self.c * y2 + x * y + self.e
    }

    /// Coefficients `(A, B, C)` of `g(x, .)` as `A y^2 + B y w + C w^2`,
    /// evaluated at the homogeneous point `x = [s : t]`.
    pub fn slice_at(&self, x: &ProjPoint) -> [Complex64; 3] {
        let (s, t) = x.coords();
        [
            s * s * self.a + t * t * self.c,
            s * t,
            s * s * self.b + t * t * self.e,
        ]
    }

    /// Coefficients of `g(., y)` at the homogeneous point `y = [s : t]`.
    pub fn slice_at_y(&self, y: &ProjPoint) -> [Complex64; 3] {
        let (s, t) = y.coords();
        [
            s * s * self.a + t * t * self.b,
            s * t,
            s * s * self.c + t * t * self.e,
        ]
    }

    pub fn is_singular(&self) -> bool {
        is_zero(self.a * self.e) && is_zero(self.b * self.c)
    }

    /// Reducibility of `g` over the complex numbers.
    pub fn is_reducible(&self) -> bool {
        let z = |v: f64| is_zero(v);
        (z(self.e) && (z(self.a) || z(self.b) || z(self.c)))
            || (z(self.b) && z(self.c) && !z(self.a) && !z(self.e))
    }

    pub fn shape(&self) -> QuadShape {
        let z = |v: f64| is_zero(v);
        let QuadCoeffs { a, b, c, e } = *self;
        if z(b) && z(c) {
            QuadShape::Isogram
        } else if z(a) && z(e) {
            QuadShape::AntiIsogram
        } else if z(c) && z(e) {
            QuadShape::DeltoidIII
        } else if z(b) && z(e) {
            QuadShape::DeltoidV
        } else if z(a) && z(b) {
            QuadShape::AntiDeltoidIV
        } else if z(a) && z(c) {
            QuadShape::AntiDeltoidVI
        } else {
            QuadShape::General
        }
    }

    /// Roots `k` of `a k^2 + k + e = 0`; an isogram splits as
    /// `a (x y - k_1)(x y - k_2)`.
    pub fn isogram_ks(&self) -> Vec<f64> {
        if is_zero(self.a) {
            return vec![-self.e];
        }
        quadratic(Complex64::new(self.a, 0.0), Complex64::new(1.0, 0.0), Complex64::new(self.e, 0.0))
            .into_iter()
            .map(|k| k.re)
            .collect()
    }

    /// The factor `g_j` that carries the flexion: `g` itself for `j = 0`,
    /// `x y - k` for an isogram, `a x y^2 + b x + y` for a deltoid of type
    /// iii and `a x^2 y + c y + x` for type v. `k` picks the isogram root.
    pub fn reduced_factor(&self, j: u8, k: usize) -> Result<BiPoly, BricardError> {
        let shape = self.shape();
        let p = match j {
            0 => self.poly(),
            1 if shape == QuadShape::Isogram => {
                let ks = self.isogram_ks();
                let kv = ks[k.min(ks.len() - 1)];
                BiPoly::from_real(&[&[-kv, 0.0], &[0.0, 1.0]])
            }
            3 if shape == QuadShape::DeltoidIII => {
                BiPoly::from_real(&[&[0.0, 1.0, 0.0], &[self.b, 0.0, self.a]])
            }
            5 if shape == QuadShape::DeltoidV => {
                BiPoly::from_real(&[&[0.0, self.c], &[1.0, 0.0], &[0.0, self.a]])
            }
            1 => return Err(BricardError::WrongShape("isogram")),
            3 => return Err(BricardError::WrongShape("deltoid iii")),
            5 => return Err(BricardError::WrongShape("deltoid v")),
            _ => return Err(BricardError::WrongShape("selector must be 0, 1, 3 or 5")),
        };
        Ok(p.with_vars("x", "y"))
    }
}

/// Half-angle parameter `f = tan(theta / 4)` of a hinge, in `(-1, 1]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HingeParam(f64);

impl HingeParam {
    pub fn new(f: f64) -> Result<Self, BricardError> {
        Self::checked(f, 0)
    }

    pub fn checked(f: f64, index: usize) -> Result<Self, BricardError> {
        if f.is_finite() && f > -1.0 && f <= 1.0 {
            Ok(HingeParam(f))
        } else {
            Err(BricardError::InvalidHinge { index, value: f })
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// Total fixed offset `tau + zeta = 4 atan f` between `beta_i` and `alpha_{i+1}`.
    pub fn offset(self) -> f64 {
        4.0 * self.0.atan()
    }

    /// `h(y_i, x_{i+1})`.
    pub fn poly(self) -> BiPoly {
        let f = self.0;
        let s = 1.0 - f * f;
        BiPoly::from_real(&[&[-2.0 * f, -s], &[s, -2.0 * f]]).with_vars("y", "z")
    }

    /// Shift of the hinge angle by a half turn, kept inside `(-1, 1]`.
    pub fn half_turn(self) -> HingeParam {
        let f = self.0;
        if f <= 0.0 {
            HingeParam((f + 1.0) / (1.0 - f))
        } else {
            HingeParam((f - 1.0) / (1.0 + f))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn symmetric_quad_is_valid_isogram() {
        let q = QuadCoeffs::new(-2.0 / 3.0, 0.0, 0.0, 2.0 / 3.0).unwrap();
        assert_eq!(q.shape(), QuadShape::Isogram);
        let mut ks = q.isogram_ks();
        ks.sort_by(|a, b| a.partial_cmp(b).unwrap());
        assert!((ks[0] + 0.5).abs() < 1e-15 && (ks[1] - 2.0).abs() < 1e-15);
        assert!(q.eval(1.0, 2.0).abs() < 1e-15);
    }

    #[test]
    fn violated_inequality_is_named() {
        let err = QuadCoeffs::new(0.0, 1.0, 1.0, 0.0).unwrap_err();
        assert_eq!(err, BricardError::InvalidQuad { index: 0, inequality: SPAN_INEQ });
        let err = QuadCoeffs::new(1.0, 1.0, 1.0, 1.0).unwrap_err();
        assert_eq!(err, BricardError::InvalidQuad { index: 0, inequality: DISCRIMINANT_INEQ });
    }

    #[test]
    fn hinge_range() {
        assert!(HingeParam::new(1.0).is_ok());
        assert!(HingeParam::new(-1.0).is_err());
        assert!(HingeParam::new(f64::NAN).is_err());
    }

    #[test]
    fn deltoid_factors() {
        let q3 = QuadCoeffs::new_unchecked(0.7, -1.2, 0.0, 0.0);
        let g3 = q3.reduced_factor(3, 0).unwrap();
        let (x, y) = (Complex64::new(0.3, 0.1), Complex64::new(-1.4, 0.5));
        assert!((q3.poly().eval(x, y) - x * g3.eval(x, y)).norm() < 1e-14);
        let q5 = QuadCoeffs::new_unchecked(0.7, 0.0, 2.1, 0.0);
        let g5 = q5.reduced_factor(5, 0).unwrap();
        assert!((q5.poly().eval(x, y) - y * g5.eval(x, y)).norm() < 1e-14);
        assert!(q5.reduced_factor(3, 0).is_err());
    }

    #[test]
    fn reducibility_table() {
        assert!(QuadCoeffs::new_unchecked(1.0, 0.0, 0.0, 0.5).is_reducible());
        assert!(QuadCoeffs::new_unchecked(1.0, 2.0, 0.0, 0.0).is_reducible());
        // homogeneous quadratic: splits into two lines
        assert!(QuadCoeffs::new_unchecked(0.0, 2.0, 3.0, 0.0).is_reducible());
        assert!(!QuadCoeffs::new_unchecked(0.0, 2.0, 3.0, 0.5).is_reducible());
        assert!(!QuadCoeffs::new_unchecked(1.0, 2.0, 3.0, 0.5).is_reducible());
    }

    proptest! {
        #[test]
        fn half_turn_stays_in_range(f in -0.999f64..=1.0) {
            let g = HingeParam::new(f).unwrap().half_turn();
            prop_assert!(g.value() > -1.0 && g.value() <= 1.0);
            // tan(theta/4) moves by a quarter turn
            let d = (g.value().atan() - f.atan()).abs();
            prop_assert!((d - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
        }

        #[test]
        fn hinge_poly_matches_rotation(f in -0.99f64..1.0, a in -1.5f64..1.5) {
            // beta = alpha + 4 atan f
            let y = (0.5 * (a + 4.0 * f.atan())).tan();
            let z = (0.5 * a).tan();
            let h = HingeParam::new(f).unwrap().poly();
            let v = h.eval(Complex64::new(y, 0.0), Complex64::new(z, 0.0)).norm();
            prop_assert!(v < 1e-9 * (1.0 + y.abs() * z.abs() + y.abs() + z.abs()));
        }
    }
}
