use super::{Candidate, ConstructError, Constructed, Draws, ParamKind, Recipe, Reject, Seed, Signs};
use crate::bricard::{MeshCoeffs, QuadCoeffs};
use crate::mobius::solve_half_angle;
use crate::verify::MeshClass;

const COEFF: [[&str; 4]; 4] = [
    ["a1", "b1", "c1", "e1"],
    ["a2", "b2", "c2", "e2"],
    ["a3", "b3", "c3", "e3"],
    ["a4", "b4", "c4", "e4"],
];
const HINGE: [&str; 4] = ["f1", "f2", "f3", "f4"];
const CHAIN_SIGNS: [&str; 2] = ["Y2", "Y3"];

struct Draw {
    quads: [QuadCoeffs; 4],
    f: [f64; 4],
}

/// Mesh with a constant branch on which `x_j` stays at zero.
///
/// Quad 1 is a deltoid with `b = e = 0`, quad `j` one with `c = e = 0`; the
/// quads in between carry the frozen values `x_k = X_k` forward and the
/// hinge `f_{j-1}` sends the last of them to `x_j = 0`.
pub fn constant(seed: &Seed, j: usize) -> Result<Constructed, ConstructError> {
    if !(2..=4).contains(&j) {
        return Err(ConstructError::InvalidParam { name: "j".into(), value: j as f64, reason: "must be 2, 3 or 4" });
    }
    let jj = j - 1;
    let mut params = vec![(COEFF[0][0], ParamKind::Real), (COEFF[0][2], ParamKind::Real)];
    params.push((COEFF[jj][0], ParamKind::Real));
    params.push((COEFF[jj][1], ParamKind::Real));
    for i in (1..4).filter(|&i| i != jj) {
        params.extend(COEFF[i].iter().map(|n| (*n, ParamKind::Real)));
    }
    params.extend((0..4).filter(|&i| i != jj - 1).map(|i| (HINGE[i], ParamKind::Hinge)));
    let recipe = Recipe {
        name: "constant",
        class: MeshClass::Constant,
        params,
        signs: CHAIN_SIGNS[..jj - 1].to_vec(),
        config: vec![("j", j.to_string())],
    };
    let draw = |d: &mut Draws| -> Result<Draw, Reject> {
        let mut quads = [QuadCoeffs::new_unchecked(0.0, 0.0, 0.0, 0.0); 4];
        quads[0] = QuadCoeffs::new_unchecked(d.real("a1"), 0.0, d.real("c1"), 0.0);
        quads[jj] = QuadCoeffs::new_unchecked(d.real(COEFF[jj][0]), d.real(COEFF[jj][1]), 0.0, 0.0);
        for i in (1..4).filter(|&i| i != jj) {
            let [a, b, c, e] = COEFF[i].map(|n| d.real(n));
            quads[i] = QuadCoeffs::new_unchecked(a, b, c, e);
        }
        let mut f = [0.0; 4];
        for i in (0..4).filter(|&i| i != jj - 1) {
            f[i] = d.hinge(HINGE[i]);
        }
        for (i, q) in quads.iter().enumerate() {
            q.validate(i).map_err(|x| x.to_string())?;
        }
        Ok(Draw { quads, f })
    };
    let build = |d: &Draw, signs: &Signs| -> Result<Candidate, Reject> {
        let mut f = d.f;
        let mut y = 0.0;
        for k in 1..jj {
            let fk = f[k - 1];
            let s = 1.0 - fk * fk;
            let x = (s * y - 2.0 * fk) / (s + 2.0 * fk * y);
            let q = d.quads[k];
            let big_a = q.a * x * x + q.c;
            let big_c = q.b * x * x + q.e;
            // root of g_k(X_k, y) = A y^2 + X_k y + C
            let disc = x * x - 4.0 * big_a * big_c;
            if !x.is_finite() || disc < 0.0 || big_a.abs() < 1e-12 {
                return Err(format!("chain value Y{} is not a finite real", k + 1));
            }
            y = (-x + signs[CHAIN_SIGNS[k - 1]].value() * disc.sqrt()) / (2.0 * big_a);
        }
        f[jj - 1] = solve_half_angle(y);
        let mesh = MeshCoeffs::new(d.quads, f).map_err(|x| x.to_string())?;
        Ok(Candidate::new(mesh).note("Y_last", y))
    };
    recipe.run(seed, draw, build)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verify::{trace_oracle, TraceConfig};

    #[test]
    fn j2_freezes_x2_at_zero() {
        let out = constant(&Seed::new(3), 2).unwrap();
        assert_eq!(out.mesh.f[0].value(), 0.0);
        let t = &out.report.trace;
        assert!(t.frozen.iter().any(|c| c.index == 1 && c.value.chordal_distance(&crate::ProjPoint::real(0.0)) < 1e-6));
    }

    #[test]
    fn perturbed_e_j_loses_the_branch() {
        let out = constant(&Seed::new(5), 3).unwrap();
        let mut m = out.mesh.clone();
        m.quads[2].e = 0.01;
        let t = trace_oracle(&m, &TraceConfig::default());
        assert!(t.closure_fraction < 0.01, "{}", t.closure_fraction);
    }

    #[test]
    fn bad_j_is_rejected() {
        assert!(matches!(constant(&Seed::new(0), 5), Err(ConstructError::InvalidParam { .. })));
    }
}
