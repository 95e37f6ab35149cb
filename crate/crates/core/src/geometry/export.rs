use serde::{Deserialize, Serialize};
use std::io::{self, Write};

use super::{wrap, LinkageFrame, Mesh3D};
use crate::bricard::MeshCoeffs;
use crate::mobius::ProjPoint;

/// A real projective coordinate as written to JSON: a number, or `"inf"`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum XValue {
    Finite(f64),
    Inf(Infinity),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Infinity {
    #[serde(rename = "inf")]
    Inf,
}

impl XValue {
    pub fn from_point(p: &ProjPoint) -> XValue {
        match p.value() {
            Some(v) if v.re.abs() < 1e12 => XValue::Finite(v.re),
            _ => XValue::Inf(Infinity::Inf),
        }
    }

    pub fn to_point(self) -> ProjPoint {
        match self {
            XValue::Finite(v) => ProjPoint::real(v),
            XValue::Inf(_) => ProjPoint::infinity(),
        }
    }
}

/// One line of a JSON-lines trace. A frame at which no real configuration
/// closes keeps only `frame`, `alpha1` and `closed: false`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub frame: usize,
    pub alpha1: f64,
    pub closed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<[f64; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<[XValue; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub vertices: Option<Vec<[f64; 3]>>,
}

impl TraceRecord {
    pub fn open(frame: usize, alpha1: f64) -> Self {
        TraceRecord { frame, alpha1, closed: false, alpha: None, beta: None, x: None, residual: None, vertices: None }
    }

    /// Record of an algebraic configuration; `beta_k = alpha_{k+1} + 4 atan f_k`.
    pub fn from_config(frame: usize, alpha1: f64, m: &MeshCoeffs, xs: &[ProjPoint; 4]) -> Self {
        let alpha = xs.map(|p| p.half_angle());
        let beta = [0, 1, 2, 3].map(|k| wrap(alpha[(k + 1) % 4] + m.f[k].offset()));
        TraceRecord {
            closed: true,
            alpha: Some(alpha),
            beta: Some(beta),
            x: Some(xs.map(|p| XValue::from_point(&p))),
            residual: Some(m.config_residual(xs)),
            ..Self::open(frame, alpha1)
        }
    }

    pub fn from_frame(frame: usize, f: &LinkageFrame, mesh: Option<&Mesh3D>) -> Self {
        TraceRecord {
            closed: true,
            alpha: Some(f.alpha),
            beta: Some(f.beta),
            x: Some(f.x.map(|p| XValue::from_point(&p))),
            residual: Some(f.residual),
            vertices: mesh.map(|m| m.vertices.iter().map(|v| [v.x, v.y, v.z]).collect()),
            ..Self::open(frame, f.alpha[0])
        }
    }

    pub fn to_line(&self) -> String {
        crate::json::to_string_line(self).expect("finite floats")
    }
}

/// Writes `mesh` as Wavefront OBJ, each header line as a comment.
pub fn write_obj<W: Write>(mesh: &Mesh3D, header: &[String], w: &mut W) -> io::Result<()> {
    for h in header {
        writeln!(w, "# {h}")?;
    }
    for v in &mesh.vertices {
        writeln!(w, "v {:.17e} {:.17e} {:.17e}", v.x, v.y, v.z)?;
    }
    for t in &mesh.triangles {
        writeln!(w, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1)?;
    }
    Ok(())
}
