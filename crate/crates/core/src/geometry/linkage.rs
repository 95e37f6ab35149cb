use super::{arc, circle_meet, quad_beta, tangent, turn, walk, wrap, CentralFace, GeometryError, V3};
use crate::bricard::{MeshCoeffs, SphericalQuad};
use crate::mobius::ProjPoint;
use crate::verify::closing_configurations;

/// How to pick one of the closing configurations at a given `alpha_1`.
#[derive(Clone, Debug)]
pub enum Choice {
    /// The `n`-th real configuration in branch order.
    Index(usize),
    /// The real configuration chordally closest to the given one.
    Nearest([ProjPoint; 4]),
    /// No closure is imposed: quad `k` takes intersection point `bits >> k & 1`
    /// and the chain is simply carried around. The residual then measures how
    /// far the open chain is from closing.
    Open(u8),
}

/// One position of the spherical linkage.
#[derive(Clone, Debug)]
pub struct LinkageFrame {
    /// `quads[k]` holds `V0..V3` of quad `k`; `V0 = dirs[k-1]`, `V1 = dirs[k]`.
    pub quads: [[V3; 4]; 4],
    pub alpha: [f64; 4],
    /// `beta` read off the geometry.
    pub beta: [f64; 4],
    /// The algebraic configuration this frame realizes.
    pub x: [ProjPoint; 4],
    /// `|alpha_1|` mismatch after carrying the geometric angles around the cycle.
    pub residual: f64,
    /// Largest gap between geometric and algebraic `beta`.
    pub beta_gap: f64,
    /// Largest deviation of a realized arc from its prescribed length.
    pub arc_drift: f64,
}

fn real_configs(m: &MeshCoeffs, alpha1: f64, tol: f64) -> Vec<[ProjPoint; 4]> {
    closing_configurations(m, &ProjPoint::from_angle(alpha1), tol)
        .into_iter()
        .filter(|xs| xs.iter().all(|x| x.is_real(1e-9)))
        .collect()
}

fn distance(a: &[ProjPoint; 4], b: &[ProjPoint; 4]) -> f64 {
    (0..4).map(|k| a[k].chordal_distance(&b[k])).sum()
}

/// Realizes the closing configuration selected by `choice` at `alpha_1`.
pub fn realize_linkage(m: &MeshCoeffs, face: &CentralFace, alpha1: f64, choice: &Choice) -> Result<LinkageFrame, GeometryError> {
    let configs = if let Choice::Open(_) = choice { vec![] } else { real_configs(m, alpha1, 1e-7) };
    let x = match choice {
        Choice::Index(n) => configs.get(*n).copied(),
        Choice::Nearest(prev) => configs
            .iter()
            .min_by(|a, b| distance(a, prev).total_cmp(&distance(b, prev)))
            .copied(),
        Choice::Open(_) => None,
    };
    let x = match (x, choice) {
        (Some(x), _) => Some(x),
        (None, Choice::Open(_)) => None,
        (None, _) => {
            return Err(GeometryError::NoRealConfiguration(format!(
                "{} real closing configurations at alpha_1 = {alpha1}",
                configs.len()
            )))
        }
    };

    let s: Vec<SphericalQuad> = m.quads.iter().map(SphericalQuad::recover).collect::<Result<_, _>>()?;
    let mut quads = [[V3::zeros(); 4]; 4];
    let (mut alpha, mut beta) = ([0.0; 4], [0.0; 4]);
    let (mut beta_gap, mut arc_drift) = (0.0f64, 0.0f64);
    let mut a = wrap(alpha1);
    for k in 0..4 {
        let mirrored = k % 2 == 1;
        let (v0, v1) = (face.dirs[(k + 3) % 4], face.dirs[k]);
        let sk = &s[k];
        let sense = if mirrored { -1.0 } else { 1.0 };
        let v3 = walk(&v0, &turn(&v0, &tangent(&v0, &v1), sense * a), sk.gamma);
        let [p, q] = circle_meet(&v1, sk.delta, &v3, sk.mu)?;
        let (bp, bq) = (quad_beta(&v0, &v1, &p, mirrored), quad_beta(&v0, &v1, &q, mirrored));
        let (v2, b) = match (&x, choice) {
            (Some(x), _) => {
                let target = wrap(x[(k + 1) % 4].half_angle() + m.f[k].offset());
                let pick = if wrap(bp - target).abs() <= wrap(bq - target).abs() { (p, bp) } else { (q, bq) };
                beta_gap = beta_gap.max(wrap(pick.1 - target).abs());
                pick
            }
            (None, Choice::Open(bits)) if bits >> k & 1 == 1 => (q, bq),
            _ => (p, bp),
        };
        for (got, want) in [(arc(&v0, &v1), sk.lambda), (arc(&v0, &v3), sk.gamma), (arc(&v1, &v2), sk.delta), (arc(&v2, &v3), sk.mu)] {
            arc_drift = arc_drift.max((got - want).abs());
        }
        quads[k] = [v0, v1, v2, v3];
        alpha[k] = a;
        beta[k] = b;
        a = wrap(b - m.f[k].offset());
    }
    let residual = wrap(a - alpha[0]).abs();
    let x = x.unwrap_or_else(|| alpha.map(ProjPoint::from_angle));
    Ok(LinkageFrame { quads, alpha, beta, x, residual, beta_gap, arc_drift })
}

/// Real closing configuration per `alpha_1`, each the one closest to the
/// previous found configuration; the first is the `first`-th in branch order.
pub fn algebraic_sweep(m: &MeshCoeffs, alphas: &[f64], first: usize, tol: f64) -> Vec<Option<[ProjPoint; 4]>> {
    let mut prev: Option<[ProjPoint; 4]> = None;
    alphas
        .iter()
        .map(|&a| {
            let configs = real_configs(m, a, tol);
            let pick = match prev {
                Some(p) => configs.iter().min_by(|x, y| distance(x, &p).total_cmp(&distance(y, &p))).copied(),
                None => configs.get(first).copied(),
            };
            if pick.is_some() {
                prev = pick;
            }
            pick
        })
        .collect()
}

/// Realizes one frame per `alpha_1`, following the configuration closest to
/// the previous frame. Frames without a real configuration are `Err`.
pub fn sweep(m: &MeshCoeffs, face: &CentralFace, alphas: &[f64], first: &Choice) -> Vec<Result<LinkageFrame, GeometryError>> {
    let mut prev: Option<[ProjPoint; 4]> = None;
    alphas
        .iter()
        .map(|&a| {
            let choice = match prev {
                Some(x) => Choice::Nearest(x),
                None => first.clone(),
            };
            let out = realize_linkage(m, face, a, &choice);
            if let Ok(fr) = &out {
                prev = Some(fr.x);
            }
            out
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::super::Branch;
    use super::*;
    use crate::construct::{isogonal, Seed};
    use std::f64::consts::FRAC_PI_2;

    #[test]
    fn symmetric_frame_closes() {
        let m = MeshCoeffs::symmetric();
        let face = CentralFace::for_mesh(&m, 0.0, Branch::Plus).unwrap();
        let target = [ProjPoint::real(1.0), ProjPoint::real(2.0), ProjPoint::real(1.0), ProjPoint::real(2.0)];
        let fr = realize_linkage(&m, &face, FRAC_PI_2, &Choice::Nearest(target)).unwrap();
        assert!(fr.x[1].chordal_distance(&ProjPoint::real(2.0)) < 1e-9, "{:?}", fr.x);
        assert!(fr.residual < 1e-7 && fr.beta_gap < 1e-8 && fr.arc_drift < 1e-8, "{fr:?}");
    }

    #[test]
    fn zeta_holds_on_every_hinge() {
        let m = MeshCoeffs::symmetric();
        let face = CentralFace::for_mesh(&m, 0.0, Branch::Plus).unwrap();
        let zeta = face.zeta(&m);
        let fr = realize_linkage(&m, &face, 0.4, &Choice::Index(0)).unwrap();
        for k in 0..4 {
            let l = (k + 1) % 4;
            let got = wrap(fr.beta[k] - fr.alpha[l] - face.tau[k] - zeta[k]);
            assert!(got.abs() < 1e-8, "hinge {k}: {got}");
        }
    }

    #[test]
    fn perturbed_mesh_stays_open() {
        let mut m = MeshCoeffs::symmetric();
        m.quads[3].e += 0.1;
        let face = CentralFace::for_mesh(&MeshCoeffs::symmetric(), 0.0, Branch::Plus).unwrap();
        assert!(realize_linkage(&m, &face, 0.7, &Choice::Index(0)).is_err());
        let best = (0..16u8)
            .filter_map(|b| realize_linkage(&m, &face, 0.7, &Choice::Open(b)).ok())
            .map(|f| f.residual)
            .fold(f64::INFINITY, f64::min);
        assert!(best > 1e-3, "{best}");
    }

    #[test]
    fn sweep_is_continuous() {
        let m = isogonal(&Seed::new(3)).unwrap().mesh;
        let (_, _, face) = CentralFace::search(&m, 64).expect("seed 3 embeds");
        let alphas: Vec<f64> = (0..200).map(|i| -3.0 + 0.03 * i as f64).collect();
        let frames = sweep(&m, &face, &alphas, &Choice::Index(0));
        let ok: Vec<&LinkageFrame> = frames.iter().filter_map(|f| f.as_ref().ok()).collect();
        assert!(!ok.is_empty());
        for f in &ok {
            assert!(f.residual < 1e-7 && f.arc_drift < 1e-8, "{f:?}");
        }
        for w in ok.windows(2) {
            assert!(distance(&w[0].x, &w[1].x) < 0.5);
        }
    }
}
