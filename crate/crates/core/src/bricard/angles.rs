use std::f64::consts::PI;

use super::{BricardError, QuadCoeffs};

/// Arc lengths of a spherical quadrilateral: `lambda` and `gamma` meet at
/// the vertex carrying `alpha`, `lambda` and `delta` at the one carrying
/// `beta`, and `mu` closes the loop.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SphericalQuad {
    pub lambda: f64,
    pub gamma: f64,
    pub mu: f64,
    pub delta: f64,
}

fn arccot(x: f64) -> f64 {
    PI / 2.0 - x.atan()
}

impl SphericalQuad {
    pub fn new(lambda: f64, gamma: f64, mu: f64, delta: f64) -> Result<Self, BricardError> {
        let s = SphericalQuad { lambda, gamma, mu, delta };
        for v in [lambda, gamma, mu, delta] {
            if !(v > 0.0 && v < PI) {
                return Err(BricardError::InvalidAngles("every arc must lie in (0, pi)"));
            }
        }
        Ok(s)
    }

    /// Bricard coefficients of the quad.
    pub fn coeffs(&self) -> QuadCoeffs {
        let SphericalQuad { lambda: l, gamma: g, mu: m, delta: d } = *self;
        let cm = m.cos();
        let den = 4.0 * g.sin() * d.sin();
        QuadCoeffs::new_unchecked(
            ((l + g + d).cos() - cm) / den,
            ((l + g - d).cos() - cm) / den,
            ((l - g + d).cos() - cm) / den,
            ((l - g - d).cos() - cm) / den,
        )
    }

    /// Inverse of [`SphericalQuad::coeffs`] on valid quads.
    pub fn recover(q: &QuadCoeffs) -> Result<Self, BricardError> {
        q.validate(0)?;
        let QuadCoeffs { a, b, c, e } = *q;
        let lambda = (b + c - a - e).acos();
        let sl = lambda.sin();
        let gamma = arccot((b - c - a + e) / sl);
        let delta = arccot((c + e - a - b) / sl);
        let big_a = a * 4.0 * gamma.sin() * delta.sin();
        let cm = ((lambda + gamma + delta).cos() - big_a).clamp(-1.0, 1.0);
        Ok(SphericalQuad { lambda, gamma, mu: cm.acos(), delta })
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.lambda, self.gamma, self.mu, self.delta]
    }
}

/// `sin^2 mu` written in the Bricard coefficients alone.
pub fn sin2_mu(q: &QuadCoeffs) -> f64 {
    let QuadCoeffs { a, b, c, e } = *q;
    let num = ((1.0 - 4.0 * a * e - 4.0 * b * c).powi(2) - 64.0 * a * b * c * e)
        * (1.0 - (b + c - a - e).powi(2));
    let den = (1.0 - 4.0 * (b - a) * (c - e)) * (1.0 - 4.0 * (c - a) * (b - e));
    num / den
}

impl SphericalQuad {
    /// Residual of the closed form for `sin^2 mu` against the recovered arc.
    pub fn sin2_mu_residual(q: &QuadCoeffs) -> Result<f64, BricardError> {
        let s = Self::recover(q)?;
        Ok((sin2_mu(q) - s.mu.sin().powi(2)).abs())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn symmetric_quad_angles() {
        let q = QuadCoeffs::new(-2.0 / 3.0, 0.0, 0.0, 2.0 / 3.0).unwrap();
        let s = SphericalQuad::recover(&q).unwrap();
        let t = (0.75f64).atan();
        // (lambda, gamma, mu, delta)
        let want = [PI / 2.0, t, PI / 2.0, t];
        for (g, w) in s.as_array().iter().zip(want) {
            assert!((g - w).abs() < 1e-12, "{:?}", s);
        }
    }

    #[test]
    fn right_angled_quad_is_xy() {
        let q = SphericalQuad::new(PI / 2.0, PI / 2.0, PI / 2.0, PI / 2.0).unwrap().coeffs();
        for v in [q.a, q.b, q.c, q.e] {
            assert!(v.abs() < 1e-15);
        }
    }

    proptest! {
        #[test]
        fn angle_round_trip(l in 0.05f64..3.09, g in 0.05f64..3.09, m in 0.05f64..3.09, d in 0.05f64..3.09) {
            let s = SphericalQuad::new(l, g, m, d).unwrap();
            let q = s.coeffs();
            prop_assert!(q.is_valid());
            let r = SphericalQuad::recover(&q).unwrap();
            for (x, y) in r.as_array().iter().zip(s.as_array()) {
                prop_assert!((x - y).abs() < 1e-9);
            }
        }

        #[test]
        fn span_is_cos_lambda(l in 0.05f64..3.09, g in 0.05f64..3.09, m in 0.05f64..3.09, d in 0.05f64..3.09) {
            let q = SphericalQuad::new(l, g, m, d).unwrap().coeffs();
            prop_assert!((q.b + q.c - q.a - q.e - l.cos()).abs() < 1e-12);
        }
    }
}
