use std::fmt;
use std::str::FromStr;

use super::coupling::{combination_kind, reducibility_35, reducibility_53, Combination};
use super::trace::{trace_oracle, TraceConfig, TraceReport, FLEX_THRESHOLD};
use crate::bricard::{normalize, MeshCoeffs, QuadShape, TransformRecord};

/// The classes of flexible meshes with reducible quads.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MeshClass {
    Isogonal,
    Constant,
    Adjacent,
    Opposite,
    DeltoidalReducible,
    DeltoidalIrreducible,
    OutsideScope,
}

impl MeshClass {
    pub const CONSTRUCTIBLE: [MeshClass; 6] = [
        MeshClass::Isogonal,
        MeshClass::Constant,
        MeshClass::Adjacent,
        MeshClass::Opposite,
        MeshClass::DeltoidalReducible,
        MeshClass::DeltoidalIrreducible,
    ];

    pub fn name(self) -> &'static str {
        match self {
            MeshClass::Isogonal => "isogonal",
            MeshClass::Constant => "constant",
            MeshClass::Adjacent => "adjacent",
            MeshClass::Opposite => "opposite",
            MeshClass::DeltoidalReducible => "deltoidal-reducible",
            MeshClass::DeltoidalIrreducible => "deltoidal-irreducible",
            MeshClass::OutsideScope => "outside-scope",
        }
    }

    /// Position in the class diagram, e.g. `singular non-constant: opposite-isogonal`.
    pub fn label(self) -> &'static str {
        match self {
            MeshClass::Isogonal => "non-singular: isogonal",
            MeshClass::Constant => "singular: constant",
            MeshClass::Adjacent => "singular non-constant: adjacent-isogonal",
            MeshClass::Opposite => "singular non-constant: opposite-isogonal",
            MeshClass::DeltoidalReducible => "singular non-constant: reducible-deltoidal",
            MeshClass::DeltoidalIrreducible => "singular non-constant: irreducible-deltoidal",
            MeshClass::OutsideScope => "outside the reducible classes",
        }
    }
}

impl fmt::Display for MeshClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MeshClass {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        [MeshClass::OutsideScope]
            .into_iter()
            .chain(MeshClass::CONSTRUCTIBLE)
            .find(|c| c.name() == s)
            .ok_or_else(|| format!("unknown class '{s}'"))
    }
}

#[derive(Clone, Debug)]
pub struct Classification {
    pub class: MeshClass,
    pub shapes: [QuadShape; 4],
    pub transform: TransformRecord,
    /// Oracle report when one was needed to decide.
    pub trace: Option<TraceReport>,
}

fn deltoids_split(shapes: &[QuadShape; 4]) -> bool {
    (0..4).any(|i| shapes[i] == QuadShape::DeltoidV)
        && (0..4).any(|j| shapes[j] == QuadShape::DeltoidIII)
}

/// Places the mesh in the class diagram after normalizing anti-quads.
///
/// A mesh carrying both a constant branch and a non-constant flexion is
/// labelled by its non-constant class.
pub fn classify_mesh(m: &MeshCoeffs, cfg: &TraceConfig) -> Classification {
    let (n, transform) = normalize(m);
    let shapes = n.shapes();
    let mut out = Classification { class: MeshClass::OutsideScope, shapes, transform, trace: None };
    if shapes.iter().all(|s| *s == QuadShape::Isogram) {
        out.class = MeshClass::Isogonal;
        return out;
    }
    let sel: Option<Vec<u8>> = shapes.iter().map(|s| s.selector()).collect();
    let kind = sel
        .as_ref()
        .filter(|s| s.iter().all(|&j| j != 0))
        .and_then(|s| combination_kind([s[0], s[1], s[2], s[3]]));
    if deltoids_split(&shapes) {
        let rep = trace_oracle(&n, cfg);
        let constant = rep.has_constant_branch()
            && (kind.is_none() || rep.nonconstant_fraction < FLEX_THRESHOLD);
        out.trace = Some(rep);
        if constant {
            out.class = MeshClass::Constant;
            return out;
        }
    }
    out.class = match kind {
        Some(Combination::Adjacent) => MeshClass::Adjacent,
        Some(Combination::Opposite) => MeshClass::Opposite,
        Some(Combination::Deltoidal) => {
            if deltoidal_reducible(&n) {
                MeshClass::DeltoidalReducible
            } else {
                MeshClass::DeltoidalIrreducible
            }
        }
        None => MeshClass::OutsideScope,
    };
    out
}

/// Some consecutive pair of deltoids satisfies a reducibility system.
fn deltoidal_reducible(n: &MeshCoeffs) -> bool {
    (0..4).any(|i| {
        let (q1, q2) = (&n.quads[i], &n.quads[(i + 1) % 4]);
        let f = n.f[i];
        match (q1.shape(), q2.shape()) {
            (QuadShape::DeltoidIII, QuadShape::DeltoidV) => {
                reducibility_35(q1, q2, f).map(|r| r.is_reducible()).unwrap_or(false)
            }
            (QuadShape::DeltoidV, QuadShape::DeltoidIII) => {
                reducibility_53(q1, q2, f).map(|r| r.is_reducible()).unwrap_or(false)
            }
            _ => false,
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bricard::QuadCoeffs;

    #[test]
    fn symmetric_is_isogonal() {
        let c = classify_mesh(&MeshCoeffs::symmetric(), &TraceConfig::default());
        assert_eq!(c.class, MeshClass::Isogonal);
        assert!(c.transform.is_identity());
    }

    #[test]
    fn names_round_trip() {
        for c in MeshClass::CONSTRUCTIBLE {
            assert_eq!(c.name().parse::<MeshClass>().unwrap(), c);
        }
        assert!("nonsense".parse::<MeshClass>().is_err());
    }

    #[test]
    fn generic_mesh_is_outside_scope() {
        let q = QuadCoeffs::new(0.3, -0.2, 0.4, 0.1).unwrap();
        let m = MeshCoeffs::new([q; 4], [0.1, 0.2, 0.3, 0.4]).unwrap();
        assert_eq!(classify_mesh(&m, &TraceConfig::default()).class, MeshClass::OutsideScope);
    }
}
