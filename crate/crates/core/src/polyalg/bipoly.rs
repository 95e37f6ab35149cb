use num_complex::Complex64;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::univariate::{UniPoly, TRIM_REL};
use super::PolyError;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

/// Which variable of a [`BiPoly`] an operation acts on.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

/// Dense polynomial in two variables; `coeffs[i][j]` multiplies `x^i y^j`.
///
/// The table is rectangular and trimmed: trailing rows and columns whose
/// entries are all below `1e-12` of the largest coefficient are removed.
#[derive(Clone, Debug, PartialEq)]
pub struct BiPoly {
    coeffs: Vec<Vec<Complex64>>,
    pub vars: [&'static str; 2],
}

impl BiPoly {
    pub fn new(coeffs: Vec<Vec<Complex64>>) -> Self {
        let mut p = BiPoly { coeffs, vars: ["x", "y"] };
        p.normalize_shape();
        p
    }

    pub fn from_real(rows: &[&[f64]]) -> Self {
        BiPoly::new(
            rows.iter()
                .map(|r| r.iter().map(|&v| Complex64::new(v, 0.0)).collect())
                .collect(),
        )
    }

    pub fn zero() -> Self {
        BiPoly { coeffs: vec![], vars: ["x", "y"] }
    }

    pub fn constant(c: Complex64) -> Self {
        BiPoly::new(vec![vec![c]])
    }

    pub fn monomial(i: usize, j: usize, c: Complex64) -> Self {
        let mut rows = vec![vec![ZERO; j + 1]; i + 1];
        rows[i][j] = c;
        BiPoly::new(rows)
    }

    /// Polynomial in `x` alone.
    pub fn from_x(u: &UniPoly) -> Self {
        BiPoly::new(u.coeffs.iter().map(|&c| vec![c]).collect())
    }

    /// Polynomial in `y` alone.
    pub fn from_y(u: &UniPoly) -> Self {
        BiPoly::new(vec![u.coeffs.clone()])
    }

    pub fn with_vars(mut self, x: &'static str, y: &'static str) -> Self {
        self.vars = [x, y];
        self
    }

    fn normalize_shape(&mut self) {
        let width = self.coeffs.iter().map(|r| r.len()).max().unwrap_or(0);
        for r in &mut self.coeffs {
            r.resize(width, ZERO);
        }
        let m = self.max_abs();
        if m == 0.0 {
            self.coeffs.clear();
            return;
        }
        let thr = TRIM_REL * m;
        while let Some(last) = self.coeffs.last() {
            if last.iter().all(|c| c.norm() <= thr) {
                self.coeffs.pop();
            } else {
                break;
            }
        }
        let mut w = width;
        while w > 0 && self.coeffs.iter().all(|r| r[w - 1].norm() <= thr) {
            w -= 1;
        }
        for r in &mut self.coeffs {
            r.truncate(w);
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().flatten().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize, j: usize) -> Complex64 {
        self.coeffs.get(i).and_then(|r| r.get(j)).copied().unwrap_or(ZERO)
    }

    pub fn rows(&self) -> &[Vec<Complex64>] {
        &self.coeffs
    }

    pub fn degree_x(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn degree_y(&self) -> Option<usize> {
        self.coeffs.first().and_then(|r| r.len().checked_sub(1))
    }

    /// Degrees in `x` and `y` separately.
    pub fn bidegree(&self) -> Result<(usize, usize), PolyError> {
        match (self.degree_x(), self.degree_y()) {
            (Some(a), Some(b)) => Ok((a, b)),
            _ => Err(PolyError::ZeroPolynomial),
        }
    }

    pub fn degree_in(&self, v: Var) -> Option<usize> {
        match v {
            Var::X => self.degree_x(),
            Var::Y => self.degree_y(),
        }
    }

    pub fn eval(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, row| {
            acc * x + row.iter().rev().fold(ZERO, |a, &c| a * y + c)
        })
    }

    /// `sum |c_ij| |x|^i |y|^j`, the scale used for relative residuals.
    pub fn eval_abs(&self, x: f64, y: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, row| {
            acc * x + row.iter().rev().fold(0.0, |a, c| a * y + c.norm())
        })
    }

    /// Homogeneous evaluation at projective points, using the nominal
    /// degrees `(dx, dy)`.
    pub fn eval_projective(
        &self,
        x: (Complex64, Complex64),
        y: (Complex64, Complex64),
        dx: usize,
        dy: usize,
    ) -> Complex64 {
        let mut acc = ZERO;
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                if c == ZERO {
                    continue;
                }
                acc += c
                    * x.0.powu(i as u32)
                    * x.1.powu((dx - i) as u32)
                    * y.0.powu(j as u32)
                    * y.1.powu((dy - j) as u32);
            }
        }
        acc
    }

    /// Same polynomial with the variables exchanged.
    pub fn transpose(&self) -> Self {
        let (nx, ny) = (self.coeffs.len(), self.coeffs.first().map_or(0, |r| r.len()));
        let mut rows = vec![vec![ZERO; nx]; ny];
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, &c) in row.iter().enumerate() {
                rows[j][i] = c;
            }
        }
        BiPoly { coeffs: rows, vars: [self.vars[1], self.vars[0]] }
    }

    /// Coefficient of `v^k`, as a polynomial in the other variable.
    pub fn coeff_in(&self, v: Var, k: usize) -> UniPoly {
        match v {
            Var::X => UniPoly::new(self.coeffs.get(k).cloned().unwrap_or_default()),
            Var::Y => UniPoly::new(self.coeffs.iter().map(|r| r.get(k).copied().unwrap_or(ZERO)).collect()),
        }
    }

    /// Univariate polynomial in `y` obtained by fixing `x = x0`.
    pub fn slice_x(&self, x0: Complex64) -> UniPoly {
        let w = self.coeffs.first().map_or(0, |r| r.len());
        UniPoly::new((0..w).map(|j| self.coeff_in(Var::Y, j).eval(x0)).collect())
    }

    /// Univariate polynomial in `x` obtained by fixing `y = y0`.
    pub fn slice_y(&self, y0: Complex64) -> UniPoly {
        UniPoly::new(self.coeffs.iter().map(|r| UniPoly::new(r.clone()).eval(y0)).collect())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        BiPoly::new(self.coeffs.iter().map(|r| r.iter().map(|&c| c * s).collect()).collect())
            .with_vars(self.vars[0], self.vars[1])
    }

    /// Coefficient-wise distance to `other`, relative to the larger norm.
    pub fn relative_distance(&self, other: &BiPoly) -> f64 {
        let d = (self - other).max_abs();
        let s = self.max_abs().max(other.max_abs());
        if s == 0.0 {
            0.0
        } else {
            d / s
        }
    }

    /// Raw combination without trimming, used by arithmetic.
    fn combine(&self, other: &BiPoly, sign: f64) -> BiPoly {
        let nx = self.coeffs.len().max(other.coeffs.len());
        let ny = self.degree_y().map_or(0, |d| d + 1).max(other.degree_y().map_or(0, |d| d + 1));
        let rows = (0..nx)
            .map(|i| (0..ny).map(|j| self.coeff(i, j) + other.coeff(i, j) * sign).collect())
            .collect();
        BiPoly::new(rows).with_vars(self.vars[0], self.vars[1])
    }
}

impl Add for &BiPoly {
    type Output = BiPoly;
    fn add(self, rhs: &BiPoly) -> BiPoly {
        self.combine(rhs, 1.0)
    }
}

impl Sub for &BiPoly {
    type Output = BiPoly;
    fn sub(self, rhs: &BiPoly) -> BiPoly {
        self.combine(rhs, -1.0)
    }
}

impl Neg for &BiPoly {
    type Output = BiPoly;
    fn neg(self) -> BiPoly {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for &BiPoly {
    type Output = BiPoly;
    fn mul(self, rhs: &BiPoly) -> BiPoly {
        if self.is_zero() || rhs.is_zero() {
            return BiPoly::zero();
        }
        let (ax, ay) = (self.coeffs.len(), self.coeffs[0].len());
        let (bx, by) = (rhs.coeffs.len(), rhs.coeffs[0].len());
        let mut rows = vec![vec![ZERO; ay + by - 1]; ax + bx - 1];
        for (i, ra) in self.coeffs.iter().enumerate() {
            for (j, &ca) in ra.iter().enumerate() {
                if ca == ZERO {
                    continue;
                }
                for (k, rb) in rhs.coeffs.iter().enumerate() {
                    for (l, &cb) in rb.iter().enumerate() {
                        rows[i + k][j + l] += ca * cb;
                    }
                }
            }
        }
        BiPoly::new(rows).with_vars(self.vars[0], self.vars[1])
    }
}

impl fmt::Display for BiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, c) in row.iter().enumerate() {
                if c.norm() == 0.0 {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                if c.im == 0.0 {
                    write!(f, "{}", c.re)?;
                } else {
                    write!(f, "({})", c)?;
                }
                if i > 0 {
                    write!(f, "*{}^{}", self.vars[0], i)?;
                }
                if j > 0 {
                    write!(f, "*{}^{}", self.vars[1], j)?;
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trims_tiny_trailing_terms() {
        let p = BiPoly::from_real(&[&[1.0, 2.0, 1e-20], &[0.0, 3.0, 0.0], &[1e-19, 0.0, 0.0]]);
        assert_eq!(p.bidegree().unwrap(), (1, 1));
    }

    #[test]
    fn zero_has_no_bidegree() {
        assert!(matches!(BiPoly::zero().bidegree(), Err(PolyError::ZeroPolynomial)));
    }

    #[test]
    fn product_and_eval_agree() {
        let p = BiPoly::from_real(&[&[1.0, 2.0], &[3.0, 0.0]]);
        let q = BiPoly::from_real(&[&[0.5], &[0.0], &[-1.0]]);
        let (x, y) = (Complex64::new(0.3, -0.7), Complex64::new(1.1, 0.2));
        let lhs = (&p * &q).eval(x, y);
        let rhs = p.eval(x, y) * q.eval(x, y);
        assert!((lhs - rhs).norm() < 1e-14);
        assert!(((&p - &p).is_zero()));
    }

    #[test]
    fn transpose_swaps_degrees() {
        let p = BiPoly::from_real(&[&[0.0, 0.0, 1.0], &[1.0, 0.0, 0.0]]);
        assert_eq!(p.transpose().bidegree().unwrap(), (2, 1));
    }
}
