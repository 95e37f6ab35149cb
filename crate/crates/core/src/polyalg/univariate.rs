use num_complex::Complex64;

use crate::mobius::ProjPoint;

/// Relative threshold below which trailing coefficients are dropped.
pub const TRIM_REL: f64 = 1e-12;

/// Dense univariate polynomial, coefficients in ascending order.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly {
    pub coeffs: Vec<Complex64>,
}

impl UniPoly {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        UniPoly { coeffs }
    }

    pub fn from_real(c: &[f64]) -> Self {
        UniPoly::new(c.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.max_abs() == 0.0
    }

    /// Degree after dropping trailing coefficients below `rel * max|c|`.
    pub fn degree_rel(&self, rel: f64) -> Option<usize> {
        let m = self.max_abs();
        if m == 0.0 {
            return None;
        }
        self.coeffs.iter().rposition(|c| c.norm() > rel * m)
    }

    pub fn eval(&self, x: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * x + c)
    }

    /// `sum |c_k| |x|^k`, the natural scale for evaluation error at `x`.
    pub fn eval_abs(&self, x: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c.norm())
    }

    /// Divide by `(t - r)`, discarding the remainder.
    pub fn deflate(&self, r: Complex64) -> UniPoly {
        let n = self.coeffs.len();
        if n <= 1 {
            return UniPoly::new(vec![]);
        }
        let mut q = vec![Complex64::new(0.0, 0.0); n - 1];
        let mut acc = Complex64::new(0.0, 0.0);
        for k in (1..n).rev() {
            acc = acc * r + self.coeffs[k];
            q[k - 1] = acc;
        }
        UniPoly::new(q)
    }

    /// Finite roots of the trimmed polynomial.
    pub fn roots(&self) -> Vec<Complex64> {
        match self.degree_rel(TRIM_REL) {
            None | Some(0) => vec![],
            Some(d) => aberth(&self.coeffs[..=d]),
        }
    }

    /// Roots on the projective line counted up to the nominal degree
    /// `len - 1`; missing roots sit at infinity.
    pub fn projective_roots(&self) -> Vec<ProjPoint> {
        let nominal = self.coeffs.len().saturating_sub(1);
        let mut out: Vec<ProjPoint> = self.roots().into_iter().map(ProjPoint::finite).collect();
        while out.len() < nominal {
            out.push(ProjPoint::infinity());
        }
        out
    }
}

/// Aberth-Ehrlich iteration on a polynomial with nonzero leading coefficient.
pub fn aberth(c: &[Complex64]) -> Vec<Complex64> {
    let d = c.len() - 1;
    let lead = c[d];
    let monic: Vec<Complex64> = c.iter().map(|&v| v / lead).collect();
    if d == 1 {
        return vec![-monic[0]];
    }
    if d == 2 {
        return quadratic(monic[2], monic[1], monic[0]);
    }
    let bound = 1.0 + monic[..d].iter().map(|v| v.norm()).fold(0.0, f64::max);
    let radius = bound.min(
        // geometric mean of the roots is a better starting scale when tiny
        monic[0].norm().powf(1.0 / d as f64).max(1e-3),
    );
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| {
            let t = 2.0 * std::f64::consts::PI * (k as f64 + 0.25) / d as f64 + 0.4;
            Complex64::from_polar(radius, t)
        })
        .collect();
    let p = UniPoly::new(monic.clone());
    let dp = UniPoly::new((1..=d).map(|k| monic[k] * k as f64).collect());
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..d {
            let pv = p.eval(z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / dp.eval(z[i]);
            let s: Complex64 = (0..d)
                .filter(|&j| j != i)
                .map(|j| {
                    let diff = z[i] - z[j];
                    if diff.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        diff.inv()
                    }
                })
                .sum();
            let denom = Complex64::new(1.0, 0.0) - ratio * s;
            let step = if denom.norm() == 0.0 || !ratio.is_finite() {
                Complex64::new(1e-8, 1e-8)
            } else {
                ratio / denom
            };
            z[i] -= step;
            moved = moved.max(step.norm() / z[i].norm().max(1.0));
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Roots of `a t^2 + b t + c` with the cancellation-free formula.
pub fn quadratic(a: Complex64, b: Complex64, c: Complex64) -> Vec<Complex64> {
    let disc = (b * b - a * c * 4.0).sqrt();
    let q1 = -(b + disc) * 0.5;
    let q2 = -(b - disc) * 0.5;
    let q = if q1.norm() >= q2.norm() { q1 } else { q2 };
    if q.norm() == 0.0 {
        return vec![Complex64::new(0.0, 0.0); 2];
    }
    vec![q / a, c / q]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn cubic_roots() {
        // (t - 1)(t + 2)(t - 3)
        let p = UniPoly::from_real(&[6.0, -5.0, -2.0, 1.0]);
        let mut r: Vec<f64> = p.roots().iter().map(|z| z.re).collect();
        r.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (got, want) in r.iter().zip([-2.0, 1.0, 3.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn degree_drop_gives_infinity() {
        let p = UniPoly::new(vec![c(1.0), c(1.0), c(0.0)]);
        let r = p.projective_roots();
        assert_eq!(r.len(), 2);
        assert!(r.iter().any(|z| z.is_infinite(1e-12)));
    }

    #[test]
    fn deflation_is_exact_on_a_root() {
        let p = UniPoly::from_real(&[-2.0, 1.0, 1.0]);
        let q = p.deflate(c(1.0));
        assert_eq!(q.coeffs, vec![c(2.0), c(1.0)]);
    }

    #[test]
    fn quartic_with_double_root() {
        // (t - 0.5)^2 (t^2 + 1)
        let p = UniPoly::from_real(&[0.25, -1.0, 1.25, -1.0, 1.0]);
        let r = p.roots();
        let near = r.iter().filter(|z| (**z - c(0.5)).norm() < 1e-6).count();
        assert_eq!(near, 2);
    }
}
