use num_complex::Complex64;

use super::bipoly::{BiPoly, Var};
use super::PolyError;

/// Resultant of `p(x, y)` and `q(y, z)` with respect to the shared `y`.
///
/// The Sylvester matrix has the `deg_y q` shifted rows of `p` on top and the
/// `deg_y p` rows of `q` below, coefficients in descending powers of `y`. Its
/// determinant is expanded over the polynomial ring, so the result is a
/// polynomial in `(x, z)`.
pub fn resultant(p: &BiPoly, q: &BiPoly) -> Result<BiPoly, PolyError> {
    let m = p.degree_y().filter(|&d| d > 0).ok_or(PolyError::NotPositiveDegree)?;
    let n = q.degree_x().filter(|&d| d > 0).ok_or(PolyError::NotPositiveDegree)?;
    // p_k(x) and q_k(z), each embedded in the ring of (x, z).
    let pk: Vec<BiPoly> = (0..=m).map(|k| BiPoly::from_x(&p.coeff_in(Var::Y, k))).collect();
    let qk: Vec<BiPoly> = (0..=n).map(|k| BiPoly::from_y(&q.coeff_in(Var::X, k))).collect();
    let size = m + n;
    let mut mat: Vec<Vec<BiPoly>> = vec![vec![BiPoly::zero(); size]; size];
    for r in 0..n {
        for k in 0..=m {
            mat[r][r + k] = pk[m - k].clone();
        }
    }
    for r in 0..m {
        for k in 0..=n {
            mat[n + r][r + k] = qk[n - k].clone();
        }
    }
    Ok(determinant(&mat).with_vars(p.vars[0], q.vars[1]))
}

/// Determinant over the ring of bivariate polynomials by cofactor expansion.
pub fn determinant(mat: &[Vec<BiPoly>]) -> BiPoly {
    let n = mat.len();
    if n == 0 {
        return BiPoly::constant(Complex64::new(1.0, 0.0));
    }
    if n == 1 {
        return mat[0][0].clone();
    }
    let mut acc = BiPoly::zero();
    for (r, row) in mat.iter().enumerate() {
        if row[0].is_zero() {
            continue;
        }
        let minor: Vec<Vec<BiPoly>> = mat
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != r)
            .map(|(_, rw)| rw[1..].to_vec())
            .collect();
        let term = &row[0] * &determinant(&minor);
        acc = if r % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Discriminant `b^2 - 4ac` of a polynomial quadratic in `var`.
pub fn discriminant_in(p: &BiPoly, var: Var) -> Result<BiPoly, PolyError> {
    let d = p.degree_in(var).ok_or(PolyError::ZeroPolynomial)?;
    if d != 2 {
        return Err(PolyError::NotQuadratic(d));
    }
    let embed = |k: usize| {
        let u = p.coeff_in(var, k);
        match var {
            Var::Y => BiPoly::from_x(&u),
            Var::X => BiPoly::from_y(&u),
        }
    };
    let (a, b, c) = (embed(2), embed(1), embed(0));
    let four = BiPoly::constant(Complex64::new(4.0, 0.0));
    let disc = &(&b * &b) - &(&four * &(&a * &c));
    Ok(disc.with_vars(p.vars[0], p.vars[1]))
}
