use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;
use std::path::Path;
use thiserror::Error;

use super::{BricardError, HingeParam, QuadCoeffs, QuadShape};
use crate::mobius::ProjPoint;
use crate::polyalg::{resultant, BiPoly};

/// Four quads around the central face, glued by four hinges. Quad `i`
/// relates `x_i` and `y_i`; hinge `i` relates `y_i` and `x_{i+1}`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeshCoeffs {
    pub quads: [QuadCoeffs; 4],
    pub f: [HingeParam; 4],
    pub class: Option<String>,
    pub meta: Option<MeshMeta>,
}

/// Provenance stored next to a mesh.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MeshMeta {
    pub tool: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub constructor: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub signs: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub config: BTreeMap<String, String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadRecord {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub e: f64,
}

/// On-disk form of a mesh.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeshFile {
    pub quads: Vec<QuadRecord>,
    pub f: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub class: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<MeshMeta>,
}

#[derive(Debug, Error)]
pub enum MeshIoError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("malformed mesh JSON: {0}")]
    Parse(String),
    #[error("expected 4 quads and 4 hinges, found {quads} and {hinges}")]
    Arity { quads: usize, hinges: usize },
    #[error(transparent)]
    Invalid(#[from] BricardError),
}

impl MeshCoeffs {
    pub fn new(quads: [QuadCoeffs; 4], f: [f64; 4]) -> Result<Self, BricardError> {
        for (i, q) in quads.iter().enumerate() {
            q.validate(i)?;
        }
        let mut h = [HingeParam::new(0.0)?; 4];
        for i in 0..4 {
            h[i] = HingeParam::checked(f[i], i)?;
        }
        Ok(MeshCoeffs { quads, f: h, class: None, meta: None })
    }

    /// Skips the quad inequalities but still requires hinges in `(-1, 1]`.
    pub fn new_unchecked(quads: [QuadCoeffs; 4], f: [f64; 4]) -> Result<Self, BricardError> {
        let mut h = [HingeParam::new(0.0)?; 4];
        for i in 0..4 {
            h[i] = HingeParam::checked(f[i], i)?;
        }
        Ok(MeshCoeffs { quads, f: h, class: None, meta: None })
    }

    pub fn validate(&self) -> Result<(), BricardError> {
        for (i, q) in self.quads.iter().enumerate() {
            q.validate(i)?;
        }
        Ok(())
    }

    /// Every quad `(-2/3, 0, 0, 2/3)` with all hinges flat.
    pub fn symmetric() -> Self {
        let q = QuadCoeffs::new_unchecked(-2.0 / 3.0, 0.0, 0.0, 2.0 / 3.0);
        MeshCoeffs::new([q; 4], [0.0; 4]).expect("valid mesh")
    }

    pub fn f_values(&self) -> [f64; 4] {
        [self.f[0].value(), self.f[1].value(), self.f[2].value(), self.f[3].value()]
    }

    pub fn shapes(&self) -> [QuadShape; 4] {
        [0, 1, 2, 3].map(|i| self.quads[i].shape())
    }

    /// Relabeling that makes quad `k` the first one.
    pub fn rotate(&self, k: usize) -> MeshCoeffs {
        let quads = [0, 1, 2, 3].map(|i| self.quads[(i + k) % 4]);
        let f = [0, 1, 2, 3].map(|i| self.f[(i + k) % 4]);
        MeshCoeffs { quads, f, class: self.class.clone(), meta: self.meta.clone() }
    }

    pub fn with_class(mut self, class: &str) -> Self {
        self.class = Some(class.to_string());
        self
    }

    /// `G_i(x_i, x_{i+1}) = Res(g_i, h_i; y_i)`.
    pub fn big_g(&self, i: usize) -> BiPoly {
        resultant(&self.quads[i].poly(), &self.f[i].poly())
            .expect("g and h are quadratic and linear in y")
            .with_vars("x_i", "x_i+1")
    }

    /// Largest relative residual of `G_i(x_i, x_{i+1})` over the cycle,
    /// evaluated homogeneously so infinite coordinates are allowed.
    pub fn config_residual(&self, xs: &[ProjPoint; 4]) -> f64 {
        (0..4)
            .map(|i| {
                let g = self.big_g(i);
                let (dx, dy) = (2, 2);
                let v = g.eval_projective(xs[i].coords(), xs[(i + 1) % 4].coords(), dx, dy);
                v.norm() / g.max_abs()
            })
            .fold(0.0, f64::max)
    }

    pub fn to_file(&self) -> MeshFile {
        MeshFile {
            quads: self.quads.iter().map(|q| QuadRecord { a: q.a, b: q.b, c: q.c, e: q.e }).collect(),
            f: self.f_values().to_vec(),
            class: self.class.clone(),
            meta: self.meta.clone(),
        }
    }

    pub fn from_file(file: &MeshFile) -> Result<Self, MeshIoError> {
        Self::from_file_inner(file, true)
    }

    /// Reads a mesh without checking the quad inequalities.
    pub fn from_file_unchecked(file: &MeshFile) -> Result<Self, MeshIoError> {
        Self::from_file_inner(file, false)
    }

    fn from_file_inner(file: &MeshFile, check: bool) -> Result<Self, MeshIoError> {
        if file.quads.len() != 4 || file.f.len() != 4 {
            return Err(MeshIoError::Arity { quads: file.quads.len(), hinges: file.f.len() });
        }
        let q = |i: usize| {
            let r = file.quads[i];
            QuadCoeffs::new_unchecked(r.a, r.b, r.c, r.e)
        };
        let quads = [q(0), q(1), q(2), q(3)];
        let f = [file.f[0], file.f[1], file.f[2], file.f[3]];
        let mut m = if check { MeshCoeffs::new(quads, f)? } else { MeshCoeffs::new_unchecked(quads, f)? };
        m.class = file.class.clone();
        m.meta = file.meta.clone();
        Ok(m)
    }

    pub fn to_json(&self) -> String {
        crate::json::to_string_pretty(&self.to_file()).expect("mesh serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, MeshIoError> {
        let file: MeshFile = serde_json::from_str(s).map_err(|e| MeshIoError::Parse(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn load(path: &Path) -> Result<Self, MeshIoError> {
        let s = std::fs::read_to_string(path)
            .map_err(|source| MeshIoError::Io { path: path.display().to_string(), source })?;
        Self::from_json(&s)
    }
}

/// Substitution applied to one quad during normalization.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuadSubstitution {
    None,
    /// `y -> -1/y`, shifting the quad's own hinge by a half turn.
    FlipY,
    /// `x -> -1/x`, shifting the previous hinge by a half turn.
    FlipX,
}

/// Record of the substitutions made by [`normalize`].
#[derive(Clone, Debug, PartialEq)]
pub struct TransformRecord {
    pub subs: [QuadSubstitution; 4],
}

impl TransformRecord {
    pub fn is_identity(&self) -> bool {
        self.subs.iter().all(|s| *s == QuadSubstitution::None)
    }

    /// Carries a configuration `(x_1..x_4)` of the original mesh to the
    /// normalized one.
    pub fn map_config(&self, xs: &[ProjPoint; 4]) -> [ProjPoint; 4] {
        let mut out = *xs;
        for i in 0..4 {
            if self.subs[i] == QuadSubstitution::FlipX {
                out[i] = xs[i].negated_reciprocal();
            }
        }
        out
    }
}

/// Replaces `y_i` by `-1/y_i`: `(a, b, c, e) -> (-b, -a, -e, -c)` and
/// hinge `i` turns by a half turn.
pub fn flip_y(m: &MeshCoeffs, i: usize) -> MeshCoeffs {
    let mut out = m.clone();
    let q = m.quads[i];
    out.quads[i] = QuadCoeffs::new_unchecked(-q.b, -q.a, -q.e, -q.c);
    out.f[i] = m.f[i].half_turn();
    out
}

/// Replaces `x_i` by `-1/x_i`: `(a, b, c, e) -> (-c, -e, -a, -b)` and
/// hinge `i - 1` turns by a half turn.
pub fn flip_x(m: &MeshCoeffs, i: usize) -> MeshCoeffs {
    let mut out = m.clone();
    let q = m.quads[i];
    out.quads[i] = QuadCoeffs::new_unchecked(-q.c, -q.e, -q.a, -q.b);
    let p = (i + 3) % 4;
    out.f[p] = m.f[p].half_turn();
    out
}

/// Rewrites antiisograms and antideltoids as isograms and deltoids.
pub fn normalize(m: &MeshCoeffs) -> (MeshCoeffs, TransformRecord) {
    let mut out = m.clone();
    let mut subs = [QuadSubstitution::None; 4];
    for i in 0..4 {
        match out.quads[i].shape() {
            QuadShape::AntiIsogram | QuadShape::AntiDeltoidVI => {
                out = flip_y(&out, i);
                subs[i] = QuadSubstitution::FlipY;
            }
            QuadShape::AntiDeltoidIV => {
                out = flip_x(&out, i);
                subs[i] = QuadSubstitution::FlipX;
            }
            _ => {}
        }
    }
    (out, TransformRecord { subs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip_is_exact() {
        let mut m = MeshCoeffs::symmetric().with_class("isogonal");
        m.meta = Some(MeshMeta { tool: "t".into(), seed: Some(3), ..Default::default() });
        let s = m.to_json();
        assert!(s.contains("-6.6666666666666663e-1"));
        let back = MeshCoeffs::from_json(&s).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.to_json(), s);
    }

    #[test]
    fn invalid_quad_is_rejected_on_load() {
        let mut f = MeshCoeffs::symmetric().to_file();
        f.quads[2] = QuadRecord { a: 0.0, b: 1.0, c: 1.0, e: 0.0 };
        let s = serde_json::to_string(&f).unwrap();
        match MeshCoeffs::from_json(&s) {
            Err(MeshIoError::Invalid(BricardError::InvalidQuad { index: 2, .. })) => {}
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn antiisogram_normalizes_to_isogram() {
        let q = QuadCoeffs::new(0.0, 0.3, -0.4, 0.0).unwrap();
        let mut m = MeshCoeffs::symmetric();
        m.quads[1] = q;
        m.f[1] = HingeParam::new(-0.2).unwrap();
        let (n, rec) = normalize(&m);
        assert_eq!(n.quads[1], QuadCoeffs::new_unchecked(-0.3, 0.0, 0.0, 0.4));
        assert_eq!(rec.subs[1], QuadSubstitution::FlipY);
        assert!((n.f[1].value() - 0.8 / 1.2).abs() < 1e-15);
        assert_eq!(n.quads[1].shape(), QuadShape::Isogram);
    }

    #[test]
    fn antideltoid_iv_moves_previous_hinge() {
        let mut m = MeshCoeffs::symmetric();
        m.quads[0] = QuadCoeffs::new(0.0, 0.0, 0.5, -0.2).unwrap();
        m.f[3] = HingeParam::new(0.4).unwrap();
        let (n, rec) = normalize(&m);
        assert_eq!(n.quads[0].shape(), QuadShape::DeltoidIII);
        assert_eq!(rec.subs[0], QuadSubstitution::FlipX);
        assert!((n.f[3].value() - (0.4 - 1.0) / 1.4).abs() < 1e-15);
        assert_eq!(n.f[0], m.f[0]);
    }

    #[test]
    fn symmetric_big_g_vanishes_on_flexion() {
        let m = MeshCoeffs::symmetric();
        let xs = [0.3, 2.0 / 0.3, 0.3, 2.0 / 0.3].map(ProjPoint::real);
        assert!(m.config_residual(&xs) < 1e-14);
        let ys = [0.3, 0.4, 0.3, 2.0 / 0.3].map(ProjPoint::real);
        assert!(m.config_residual(&ys) > 1e-3);
    }
}
