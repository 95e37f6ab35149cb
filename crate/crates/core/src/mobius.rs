//! Points of the complex projective line and linear fractional maps on it.
//!
//! A [`ProjPoint`] stores homogeneous coordinates `[z : w]`, so the point at
//! infinity `[1 : 0]` is an ordinary value. Maps are 2x2 complex matrices up to
//! scale; composition renormalizes to unit Frobenius norm.

use num_complex::Complex64;
use std::fmt;
use thiserror::Error;

/// Default tolerance for deciding that a product of maps is a scalar matrix.
pub const SCALAR_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum MobiusError {
    #[error("map is singular (determinant {0:e})")]
    Singular(f64),
    #[error("homogeneous coordinates are both zero")]
    ZeroPoint,
}

/// A point `[z : w]` of the complex projective line.
#[derive(Clone, Copy, Debug)]
pub struct ProjPoint {
    z: Complex64,
    w: Complex64,
}

impl ProjPoint {
    /// Builds a point from homogeneous coordinates, normalized to unit length.
    pub fn new(z: Complex64, w: Complex64) -> Result<Self, MobiusError> {
        let n = (z.norm_sqr() + w.norm_sqr()).sqrt();
        if !(n > 0.0) || !n.is_finite() {
            return Err(MobiusError::ZeroPoint);
        }
        Ok(ProjPoint { z: z / n, w: w / n })
    }

    pub fn finite(z: Complex64) -> Self {
        Self::new(z, Complex64::new(1.0, 0.0)).expect("finite value")
    }

    pub fn real(x: f64) -> Self {
        Self::finite(Complex64::new(x, 0.0))
    }

    pub fn infinity() -> Self {
        ProjPoint { z: Complex64::new(1.0, 0.0), w: Complex64::new(0.0, 0.0) }
    }

    /// Homogeneous pair, scaled to unit length.
    pub fn coords(&self) -> (Complex64, Complex64) {
        (self.z, self.w)
    }

    /// Affine value `z / w`, or `None` at infinity.
    pub fn value(&self) -> Option<Complex64> {
        if self.w.norm() == 0.0 {
            None
        } else {
            Some(self.z / self.w)
        }
    }

    /// True when the chordal distance to `[1 : 0]` is at most `tol`.
    pub fn is_infinite(&self, tol: f64) -> bool {
        self.w.norm() <= tol
    }

    /// True when the point lies on the real projective line.
    pub fn is_real(&self, tol: f64) -> bool {
        (self.z * self.w.conj()).im.abs() <= tol
    }

    /// Chordal distance `|z w' - z' w|`, which lies in `[0, 1]`.
    pub fn chordal_distance(&self, other: &ProjPoint) -> f64 {
        (self.z * other.w - other.z * self.w).norm()
    }

    /// `-1/p`, the image under a half turn of the angle.
    pub fn negated_reciprocal(&self) -> ProjPoint {
        ProjPoint { z: -self.w, w: self.z }
    }

    /// Real value `tan(angle/2)` read as an angle in `(-pi, pi]`.
    pub fn half_angle(&self) -> f64 {
        let ph = if self.w.norm() >= self.z.norm() {
            self.w.conj() / self.w.norm()
        } else {
            self.z.conj() / self.z.norm()
        };
        let (mut zr, mut wr) = ((self.z * ph).re, (self.w * ph).re);
        if wr < 0.0 || (wr == 0.0 && zr < 0.0) {
            zr = -zr;
            wr = -wr;
        }
        2.0 * zr.atan2(wr)
    }

    /// Point `tan(angle/2)` as a projective value.
    pub fn from_angle(angle: f64) -> ProjPoint {
        let h = 0.5 * angle;
        Self::new(Complex64::new(h.sin(), 0.0), Complex64::new(h.cos(), 0.0))
            .expect("unit vector")
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.value() {
            None => write!(f, "inf"),
            Some(v) if v.im == 0.0 => write!(f, "{}", v.re),
            Some(v) => write!(f, "{}", v),
        }
    }
}

/// A linear fractional map `z -> (m00 z + m01) / (m10 z + m11)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProjMap {
    pub m: [[Complex64; 2]; 2],
}

impl ProjMap {
    pub fn new(m: [[Complex64; 2]; 2]) -> Self {
        ProjMap { m }
    }

    pub fn from_real(m: [[f64; 2]; 2]) -> Self {
        let c = |x: f64| Complex64::new(x, 0.0);
        ProjMap::new([[c(m[0][0]), c(m[0][1])], [c(m[1][0]), c(m[1][1])]])
    }

    pub fn identity() -> Self {
        Self::from_real([[1.0, 0.0], [0.0, 1.0]])
    }

    pub fn det(&self) -> Complex64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    pub fn frobenius(&self) -> f64 {
        self.m.iter().flatten().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Copy scaled to unit Frobenius norm.
    pub fn normalized(&self) -> Self {
        let n = self.frobenius();
        if n == 0.0 {
            return *self;
        }
        let mut out = *self;
        for v in out.m.iter_mut().flatten() {
            *v /= n;
        }
        out
    }

    /// Plain matrix product `self * rhs`, no rescaling.
    pub fn mul(&self, rhs: &ProjMap) -> ProjMap {
        let a = &self.m;
        let b = &rhs.m;
        let mut m = [[Complex64::new(0.0, 0.0); 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        ProjMap { m }
    }

    /// Inverse as a projective map (the adjugate).
    pub fn inverse(&self) -> Result<ProjMap, MobiusError> {
        let d = self.det();
        if d.norm() <= 1e-14 * self.frobenius().powi(2) {
            return Err(MobiusError::Singular(d.norm()));
        }
        let m = &self.m;
        Ok(ProjMap::new([[m[1][1], -m[0][1]], [-m[1][0], m[0][0]]]))
    }

    pub fn apply(&self, p: &ProjPoint) -> ProjPoint {
        let (z, w) = p.coords();
        let nz = self.m[0][0] * z + self.m[0][1] * w;
        let nw = self.m[1][0] * z + self.m[1][1] * w;
        ProjPoint::new(nz, nw).unwrap_or_else(|_| ProjPoint::infinity())
    }

    /// Scalar multiple `c I` within `tol` relative to the Frobenius norm.
    pub fn is_scalar(&self, tol: f64) -> bool {
        self.scalar_defect() <= tol
    }

    /// Relative distance to the nearest scalar matrix.
    pub fn scalar_defect(&self) -> f64 {
        let n = self.frobenius();
        if n == 0.0 {
            return 0.0;
        }
        let m = &self.m;
        let avg = (m[0][0] + m[1][1]) * 0.5;
        let off = (m[0][0] - avg).norm_sqr()
            + (m[1][1] - avg).norm_sqr()
            + m[0][1].norm_sqr()
            + m[1][0].norm_sqr();
        off.sqrt() / n
    }
}

/// Composition `maps[n-1] * ... * maps[0]`, renormalized after each step.
pub fn compose(maps: &[ProjMap]) -> ProjMap {
    maps.iter()
        .fold(ProjMap::identity(), |acc, m| m.mul(&acc).normalized())
}

/// Hinge map from `tan(beta_i/2)` to `tan(alpha_{i+1}/2)` for parameter `f`.
pub fn hinge_forward(f: f64) -> ProjMap {
    let s = 1.0 - f * f;
    ProjMap::from_real([[s, -2.0 * f], [2.0 * f, s]])
}

/// Inverse of [`hinge_forward`].
pub fn hinge_backward(f: f64) -> ProjMap {
    let s = 1.0 - f * f;
    ProjMap::from_real([[s, 2.0 * f], [-2.0 * f, s]])
}

/// Rotation matrix `[[1, -F], [F, 1]]`, with `F = inf` giving `[[0, -1], [1, 0]]`.
pub fn rotation_f(big_f: f64) -> ProjMap {
    if big_f.is_infinite() {
        ProjMap::from_real([[0.0, -1.0], [1.0, 0.0]])
    } else {
        ProjMap::from_real([[1.0, -big_f], [big_f, 1.0]])
    }
}

/// The swap `[[0, k], [1, 0]]` carrying `x` to `k / x` on an isogram.
pub fn isogram_swap(k: f64) -> ProjMap {
    ProjMap::from_real([[0.0, k], [1.0, 0.0]])
}

/// Map from `x_i` to `x_{i+1}` along the component `x y = k` of an isogram.
pub fn isogram_map(k: f64, f: f64) -> ProjMap {
    hinge_forward(f).mul(&isogram_swap(k))
}

/// Half-angle parameter `f` with `2f / (1 - f^2) = F`, taken in `(-1, 1]`.
pub fn solve_half_angle(big_f: f64) -> f64 {
    if big_f.is_infinite() {
        1.0
    } else {
        big_f / (1.0 + (1.0 + big_f * big_f).sqrt())
    }
}

/// `F = 2f / (1 - f^2)`, infinite at `f = 1`.
pub fn f_from_half(f: f64) -> f64 {
    let d = 1.0 - f * f;
    if d == 0.0 {
        f64::INFINITY
    } else {
        2.0 * f / d
    }
}
