//! Realizations on the unit sphere and in space.
//!
//! A flexion is first realized as a spherical linkage: the four edge
//! directions `d_0..d_3` of the central face form a fixed spherical polygon,
//! and each quad `k` hangs off the arc from `d_{k-1}` to `d_k`. Odd quads are
//! mirror images, so all angles are read with alternating orientation. A
//! linkage frame then lifts to a 3D mesh around a fixed central face.

mod embed;
mod export;
mod linkage;

pub use embed::{embed_mesh, Mesh3D};
pub use export::{write_obj, Infinity, TraceRecord, XValue};
pub use linkage::{algebraic_sweep, realize_linkage, sweep, Choice, LinkageFrame};

use nalgebra::{Matrix3, Matrix3x2, Vector3};
use std::f64::consts::PI;
use thiserror::Error;

use crate::bricard::{BricardError, MeshCoeffs, SphericalQuad};

pub type V3 = Vector3<f64>;

#[derive(Debug, Error)]
pub enum GeometryError {
    #[error("no real configuration: {0}")]
    NoRealConfiguration(String),
    #[error("infeasible embedding: {0}")]
    InfeasibleEmbedding(String),
    #[error(transparent)]
    Bricard(#[from] BricardError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Which of two intersection points to take.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Branch {
    #[default]
    Plus,
    Minus,
}

/// Angle in `(-pi, pi]`.
pub fn wrap(a: f64) -> f64 {
    let r = (a + PI).rem_euclid(2.0 * PI) - PI;
    if r <= -PI {
        r + 2.0 * PI
    } else {
        r
    }
}

/// Unit tangent at `p` pointing along the great circle toward `q`.
pub(crate) fn tangent(p: &V3, q: &V3) -> V3 {
    (q - p * p.dot(q)).normalize()
}

/// `t` turned by `phi` about the outward normal `p`.
pub(crate) fn turn(p: &V3, t: &V3, phi: f64) -> V3 {
    t * phi.cos() + p.cross(t) * phi.sin()
}

/// Counterclockwise angle at `p` from tangent `a` to tangent `b`.
pub(crate) fn ccw(p: &V3, a: &V3, b: &V3) -> f64 {
    p.cross(a).dot(b).atan2(a.dot(b))
}

/// Point at arc length `arc` from `p` in direction `t`.
pub(crate) fn walk(p: &V3, t: &V3, arc: f64) -> V3 {
    p * arc.cos() + t * arc.sin()
}

pub(crate) fn arc(p: &V3, q: &V3) -> f64 {
    p.cross(q).norm().atan2(p.dot(q))
}

/// The two unit vectors at arc `ra` from `a` and `rb` from `b`, the first
/// on the side of `a x b`.
pub(crate) fn circle_meet(a: &V3, ra: f64, b: &V3, rb: f64) -> Result<[V3; 2], GeometryError> {
    let n = a.cross(b);
    let nn = n.norm_squared();
    if nn < 1e-24 {
        return Err(GeometryError::NoRealConfiguration("circle centers coincide or are antipodal".into()));
    }
    let d = a.dot(b);
    let (ca, cb) = (ra.cos(), rb.cos());
    let x = (ca - d * cb) / nn;
    let y = (cb - d * ca) / nn;
    let p0 = a * x + b * y;
    let h2 = 1.0 - p0.norm_squared();
    if h2 < -1e-12 {
        return Err(GeometryError::NoRealConfiguration(format!("circles miss each other by {:.3e}", -h2)));
    }
    let h = h2.max(0.0).sqrt() / nn.sqrt();
    Ok([p0 + n * h, p0 - n * h])
}

/// A single spherical quad in its reference frame.
#[derive(Clone, Copy, Debug)]
pub struct QuadFrame {
    pub v: [V3; 4],
    pub alpha: f64,
    pub beta: f64,
}

/// Places a quad with `V0` at the north pole, `V1` in the `xz` half plane
/// with positive `x`, and `V3` at angle `alpha` from the arc `V0 V1`. `V2`
/// is one of the two points at arc `delta` from `V1` and `mu` from `V3`.
pub fn realize_quad(s: &SphericalQuad, alpha: f64, branch: Branch) -> Result<QuadFrame, GeometryError> {
    let v0 = V3::z();
    let v1 = V3::new(s.lambda.sin(), 0.0, s.lambda.cos());
    let v3 = walk(&v0, &turn(&v0, &V3::x(), alpha), s.gamma);
    let c = circle_meet(&v1, s.delta, &v3, s.mu)?;
    let v2 = if branch == Branch::Plus { c[0] } else { c[1] };
    let beta = quad_beta(&v0, &v1, &v2, false);
    Ok(QuadFrame { v: [v0, v1, v2, v3], alpha, beta })
}

/// `beta` at `V1`, from the arc toward `V2` to the arc toward `V0`, reversed
/// on mirrored quads.
pub(crate) fn quad_beta(v0: &V3, v1: &V3, v2: &V3, mirrored: bool) -> f64 {
    let (tl, td) = (tangent(v1, v0), tangent(v1, v2));
    if mirrored {
        ccw(v1, &tl, &td)
    } else {
        ccw(v1, &td, &tl)
    }
}

/// Edge directions of the central face as a spherical polygon.
///
/// `dirs[k]` is the direction of the edge from `P_k` to `P_{k+1}`; the arc
/// from `dirs[k-1]` to `dirs[k]` has length `lambda_k`, so the interior
/// angle of the face at `P_k` is `pi - lambda_k`.
#[derive(Clone, Debug)]
pub struct CentralFace {
    pub dirs: [V3; 4],
    pub lambda: [f64; 4],
    /// Turn at `dirs[k]` away from the great circle through `dirs[k-1]`.
    pub tau: [f64; 4],
    /// Edge lengths with `len[0] = 1`.
    pub len: [f64; 4],
    /// Vertices `P_0..P_3` with `P_0` at the origin.
    pub points: [V3; 4],
    pub planar: bool,
}

impl CentralFace {
    /// Central face of `m` with turn `tau0` at `dirs[0]`; `branch` picks
    /// `dirs[2]` among the two candidates.
    pub fn for_mesh(m: &MeshCoeffs, tau0: f64, branch: Branch) -> Result<Self, GeometryError> {
        let mut lambda = [0.0; 4];
        for k in 0..4 {
            lambda[k] = SphericalQuad::recover(&m.quads[k])?.lambda;
        }
        Self::new(lambda, tau0, branch)
    }

    pub fn new(lambda: [f64; 4], tau0: f64, branch: Branch) -> Result<Self, GeometryError> {
        let d3 = V3::z();
        let d0 = V3::new(lambda[0].sin(), 0.0, lambda[0].cos());
        let d1 = walk(&d0, &turn(&d0, &-tangent(&d0, &d3), -tau0), lambda[1]);
        let planar = d1.dot(&d3) < -1.0 + 1e-12;
        let d2 = if planar {
            walk(&d1, &-tangent(&d1, &d0), lambda[2])
        } else {
            let c = circle_meet(&d1, lambda[2], &d3, lambda[3])
                .map_err(|e| GeometryError::InfeasibleEmbedding(format!("central polygon does not close: {e}")))?;
            if branch == Branch::Plus {
                c[0]
            } else {
                c[1]
            }
        };
        let dirs = [d0, d1, d2, d3];
        let gap = (arc(&d2, &d3) - lambda[3]).abs();
        if gap > 1e-9 {
            return Err(GeometryError::InfeasibleEmbedding(format!("central polygon misses by {gap:.3e}")));
        }
        let mut tau = [0.0; 4];
        for k in 0..4 {
            let p = dirs[k];
            let back = -tangent(&p, &dirs[(k + 3) % 4]);
            let next = tangent(&p, &dirs[(k + 1) % 4]);
            tau[k] = if k % 2 == 0 { ccw(&p, &next, &back) } else { ccw(&p, &back, &next) };
        }
        let len = edge_lengths(&dirs)?;
        let mut points = [V3::zeros(); 4];
        for k in 1..4 {
            points[k] = points[k - 1] + dirs[k - 1] * len[k - 1];
        }
        let coplanar = Matrix3::from_columns(&[d1, d2, d3]).determinant().abs() < 1e-10;
        Ok(CentralFace { dirs, lambda, tau, len, points, planar: planar || coplanar })
    }

    /// First feasible face over a grid of `n` turns `tau0` in `(-pi, pi)`,
    /// trying both branches at each.
    pub fn search(m: &MeshCoeffs, n: usize) -> Option<(f64, Branch, Self)> {
        crate::verify::alpha_grid(n).into_iter().find_map(|t| {
            [Branch::Plus, Branch::Minus]
                .into_iter()
                .find_map(|b| Self::for_mesh(m, t, b).ok().map(|f| (t, b, f)))
        })
    }

    /// Fixed part `zeta_k = 4 atan f_k - tau_k` of the turn across hinge `k`.
    pub fn zeta(&self, m: &MeshCoeffs) -> [f64; 4] {
        [0, 1, 2, 3].map(|k| wrap(m.f[k].offset() - self.tau[k]))
    }
}

/// Positive lengths with `sum len_k dirs_k = 0` and `len_0 = 1`. A planar
/// polygon leaves one degree of freedom, fixed by `len_1 = 1`.
fn edge_lengths(d: &[V3; 4]) -> Result<[f64; 4], GeometryError> {
    let a = Matrix3::from_columns(&[d[1], d[2], d[3]]);
    let len = if a.determinant().abs() >= 1e-10 {
        let l = a.lu().solve(&-d[0]).expect("nonsingular");
        [1.0, l[0], l[1], l[2]]
    } else {
        let b = Matrix3x2::from_columns(&[d[2], d[3]]);
        let rhs = -d[0] - d[1];
        let l = (b.transpose() * b)
            .try_inverse()
            .ok_or_else(|| GeometryError::InfeasibleEmbedding("degenerate edge directions".into()))?
            * b.transpose()
            * rhs;
        let res = (b * l - rhs).norm();
        if res > 1e-9 {
            return Err(GeometryError::InfeasibleEmbedding(format!("planar face does not close ({res:.3e})")));
        }
        [1.0, 1.0, l[0], l[1]]
    };
    if let Some(k) = (0..4).find(|&k| !(len[k] > 1e-9)) {
        return Err(GeometryError::InfeasibleEmbedding(format!("edge {k} has length {:.3e}", len[k])));
    }
    Ok(len)
}
