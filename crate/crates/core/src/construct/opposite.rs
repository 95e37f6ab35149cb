use super::{Candidate, ConstructError, Constructed, Draws, ParamKind, Recipe, Reject, Seed, Signs};
use crate::bricard::{MeshCoeffs, QuadCoeffs};
use crate::mobius::solve_half_angle;
use crate::verify::MeshClass;

struct Draw {
    a1: f64,
    a2: f64,
    b2: f64,
    a3: f64,
    big_u: f64,
    big_s: f64,
    n: f64,
}

fn matmul<const R: usize, const K: usize, const C: usize>(x: &[[f64; K]; R], y: &[[f64; C]; K]) -> [[f64; C]; R] {
    let mut out = [[0.0; C]; R];
    for i in 0..R {
        for j in 0..C {
            out[i][j] = (0..K).map(|k| x[i][k] * y[k][j]).sum();
        }
    }
    out
}

/// Half-angle parameter of `num / den`, with a vanishing denominator read
/// as the point at infinity.
fn hinge_of(num: f64, den: f64) -> Result<f64, Reject> {
    if num == 0.0 && den == 0.0 {
        return Err("indeterminate hinge".into());
    }
    let big_f = if den == 0.0 { f64::INFINITY } else { num / den };
    Ok(solve_half_angle(big_f))
}

/// Isograms at quads 1 and 3, deltoids at quads 2 and 4.
///
/// The isogram maps are built around the map `[[u, v], [s, t]]` that makes
/// the image of the quad 2 deltoid a multiple of the quad 4 deltoid.
pub fn opposite_singular(seed: &Seed) -> Result<Constructed, ConstructError> {
    use ParamKind::*;
    let recipe = Recipe {
        name: "opposite",
        class: MeshClass::Opposite,
        params: vec![
            ("a1", Real),
            ("a2", Real),
            ("b2", Real),
            ("a3", Real),
            ("U", Real),
            ("S", Real),
            ("n", Real),
        ],
        signs: vec!["d", "D", "p", "q"],
        config: vec![],
    };
    let draw = |d: &mut Draws| -> Result<Draw, Reject> {
        let out = Draw {
            a1: d.real("a1"),
            a2: d.real("a2"),
            b2: d.real("b2"),
            a3: d.real("a3"),
            big_u: d.real("U"),
            big_s: d.real("S"),
            n: d.real("n"),
        };
        QuadCoeffs::new_unchecked(out.a2, out.b2, 0.0, 0.0).validate(1).map_err(|x| x.to_string())?;
        Ok(out)
    };
    let build = |w: &Draw, signs: &Signs| -> Result<Candidate, Reject> {
        let (a2, b2, uu, ss, n) = (w.a2, w.b2, w.big_u, w.big_s, w.n);
        let d = signs["d"].value();
        let dd = signs["D"].value();
        let k = uu * uu * a2 - ss * ss * b2;
        if k.abs() <= 1e-9 * (uu * uu * a2.abs() + ss * ss * b2.abs()) {
            return Err("degenerate parameterization: U^2 a2 = S^2 b2".into());
        }
        let tt = dd * uu * a2 / k;
        let vv = dd * ss * b2 / k;
        let v = -n * ss * uu;
        let t = n * (ss * ss * b2 + uu * uu * a2);
        let u = d * (ss * vv + tt * uu) / (n * dd * k);
        let s = -2.0 * d * (ss * tt * b2 + uu * vv * a2) / (n * dd * k);
        let sigma = u * u + v * v + s * s + t * t;
        let big_sigma = uu * uu + vv * vv + ss * ss + tt * tt;
        let root = |c: f64, lead: f64, sign: f64| {
            let disc = (c * c - 4.0).max(0.0);
            (-c + sign * disc.sqrt()) / (2.0 * lead)
        };
        let p = root(sigma, d, signs["p"].value());
        let q = root(big_sigma, dd, signs["q"].value());
        let f = [
            hinge_of(-(d * p + u * u + v * v), s * u + t * v)?,
            hinge_of(dd * q + uu * uu + vv * vv, ss * uu + tt * vv)?,
            hinge_of(-(uu * q + tt), vv * q - ss)?,
            hinge_of(u * p + t, v * p - s)?,
        ];
        let e1 = -w.a1 * p * p - p;
        let e3 = -w.a3 * q * q - q;
        if e1.abs() <= 1e-9 || e3.abs() <= 1e-9 {
            return Err("vanishing e1 or e3".into());
        }
        let sym = [
            [uu * uu, ss * uu, ss * ss],
            [2.0 * uu * vv, ss * vv + uu * tt, 2.0 * ss * tt],
            [vv * vv, vv * tt, tt * tt],
        ];
        let m = matmul(&matmul(&sym, &[[a2, 0.0], [0.0, 1.0], [b2, 0.0]]), &[[u, v], [s, t]]);
        let norm = m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
        let off = m[0][1].abs().max(m[1][0].abs()).max(m[2][1].abs()) / norm;
        if off > 1e-9 {
            return Err(format!("off-diagonal entries of M not zero ({off:e})"));
        }
        let quads = [
            QuadCoeffs::new_unchecked(w.a1, 0.0, 0.0, e1),
            QuadCoeffs::new_unchecked(a2, b2, 0.0, 0.0),
            QuadCoeffs::new_unchecked(w.a3, 0.0, 0.0, e3),
            QuadCoeffs::new_unchecked(m[0][0] / m[1][1], 0.0, m[2][0] / m[1][1], 0.0),
        ];
        let mesh = MeshCoeffs::new(quads, f).map_err(|x| x.to_string())?;
        Ok(Candidate::new(mesh).note("m_offdiag", off).note("k1", p).note("k3", q))
    };
    recipe.run(seed, draw, build)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructs_with_vanishing_offdiagonal() {
        let out = opposite_singular(&Seed::new(4)).unwrap();
        assert!(out.report.notes["m_offdiag"] <= 1e-9);
        assert_eq!(out.mesh.class.as_deref(), Some("opposite"));
    }

    #[test]
    fn p_and_q_solve_their_quadratics() {
        let out = opposite_singular(&Seed::new(9)).unwrap();
        let m = &out.mesh;
        for (i, key) in [(0, "k1"), (2, "k3")] {
            let k = out.report.notes[key];
            let q = m.quads[i];
            assert!((q.a * k * k + k + q.e).abs() < 1e-9);
        }
    }
}
