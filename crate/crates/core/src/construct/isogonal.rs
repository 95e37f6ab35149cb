use super::{isogram_k, Candidate, ConstructError, Constructed, Draws, ParamKind, Recipe, Reject, Seed, Sign, Signs};
use crate::bricard::{MeshCoeffs, QuadCoeffs};
use crate::mobius::{hinge_forward, isogram_map, isogram_swap, solve_half_angle, ProjMap};
use crate::verify::MeshClass;

/// Closing data for a partial product `P = [[u, v], [s, t]]`: the hinge
/// `f_3` and the last isogram `x y = k_4` with hinge `f_4` that make the
/// full product scalar.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tail {
    pub big_f3: f64,
    pub f3: f64,
    pub k4: f64,
    pub big_f4: f64,
    pub f4: f64,
}

fn real(p: &ProjMap) -> [[f64; 2]; 2] {
    [[p.m[0][0].re, p.m[0][1].re], [p.m[1][0].re, p.m[1][1].re]]
}

/// Solves for the closing tail of a real product `P`. `sign` picks between
/// the two values of `F_3` with `2 F_3 / (1 - F_3^2) = A`.
pub fn isogonal_tail(p: &ProjMap, sign: Sign) -> Result<Tail, Reject> {
    let [[u, v], [s, t]] = real(p);
    let num = 2.0 * (u * s + v * t);
    let den = s * s + t * t - u * u - v * v;
    let scale = u.abs().max(v.abs()).max(s.abs()).max(t.abs()).powi(2);
    let big_f3 = if den.abs() <= 1e-14 * scale {
        // A is infinite: F_3 = +-1
        sign.value()
    } else {
        let a = num / den;
        if a.abs() <= 1e-14 * scale {
            match sign {
                Sign::Plus => 0.0,
                Sign::Minus => f64::INFINITY,
            }
        } else {
            let r = a / (1.0 + (1.0 + a * a).sqrt());
            match sign {
                Sign::Plus => r,
                Sign::Minus => -1.0 / r,
            }
        }
    };
    let f3 = solve_half_angle(big_f3);
    let [[u2, v2], [s2, t2]] = real(&hinge_forward(f3).mul(p));
    let scale2 = u2.abs().max(v2.abs()).max(s2.abs()).max(t2.abs());
    let (k4, big_f4) = if s2.abs() > 1e-12 * scale2 {
        (v2 / s2, t2 / s2)
    } else {
        (-u2 / t2, f64::INFINITY)
    };
    if !k4.is_finite() || k4 == 0.0 {
        return Err(format!("degenerate k4 = {k4}"));
    }
    Ok(Tail { big_f3, f3, k4, big_f4, f4: solve_half_angle(big_f4) })
}

/// Completes a mesh whose first three maps compose to `p` with a last
/// isogram of parameter `a4`.
pub(crate) fn close_with_isogram(p: &ProjMap, a4: f64, sign: Sign) -> Result<(Tail, f64), Reject> {
    let tail = isogonal_tail(p, sign)?;
    let e4 = -a4 * tail.k4 * tail.k4 - tail.k4;
    if e4.abs() <= 1e-9 {
        return Err("e4 vanishes".into());
    }
    Ok((tail, e4))
}

struct Draw {
    a: [f64; 4],
    e: [f64; 3],
    f: [f64; 2],
}

/// Mesh of four isograms whose isogram maps compose to a scalar matrix.
pub fn isogonal(seed: &Seed) -> Result<Constructed, ConstructError> {
    use ParamKind::*;
    let recipe = Recipe {
        name: "isogonal",
        class: MeshClass::Isogonal,
        params: vec![
            ("a1", Real),
            ("e1", Real),
            ("a2", Real),
            ("e2", Real),
            ("a3", Real),
            ("e3", Real),
            ("a4", Real),
            ("f1", Hinge),
            ("f2", Hinge),
        ],
        signs: vec!["k1", "k2", "k3", "F3"],
        config: vec![],
    };
    let draw = |d: &mut Draws| -> Result<Draw, Reject> {
        let mut a = [0.0; 4];
        let mut e = [0.0; 3];
        for i in 0..3 {
            a[i] = d.real(&format!("a{}", i + 1));
            e[i] = d.real(&format!("e{}", i + 1));
        }
        a[3] = d.real("a4");
        let f = [d.hinge("f1"), d.hinge("f2")];
        for i in 0..3 {
            QuadCoeffs::new_unchecked(a[i], 0.0, 0.0, e[i]).validate(i).map_err(|x| x.to_string())?;
        }
        Ok(Draw { a, e, f })
    };
    let build = |d: &Draw, signs: &Signs| -> Result<Candidate, Reject> {
        let mut k = [0.0; 3];
        for i in 0..3 {
            k[i] = isogram_k(d.a[i], d.e[i], signs[&format!("k{}", i + 1)]).ok_or("complex k")?;
        }
        let p = isogram_swap(k[2]).mul(&isogram_map(k[1], d.f[1])).mul(&isogram_map(k[0], d.f[0]));
        let (tail, e4) = close_with_isogram(&p, d.a[3], signs["F3"])?;
        let mut quads = [QuadCoeffs::new_unchecked(0.0, 0.0, 0.0, 0.0); 4];
        for i in 0..3 {
            quads[i] = QuadCoeffs::new_unchecked(d.a[i], 0.0, 0.0, d.e[i]);
        }
        quads[3] = QuadCoeffs::new_unchecked(d.a[3], 0.0, 0.0, e4);
        let mesh = MeshCoeffs::new(quads, [d.f[0], d.f[1], tail.f3, tail.f4]).map_err(|x| x.to_string())?;
        Ok(Candidate::new(mesh).note("k4", tail.k4))
    };
    recipe.run(seed, draw, build)
}
