//! Flexible Kokotsakis meshes with a quadrangular base.
//!
//! A 3x3 quad mesh is encoded by four Bricard quadratics, one per vertex of
//! the central face, glued by four half-angle hinge parameters. The crate
//! builds flexible meshes of each known class, decides flexibility of a given
//! mesh three independent ways, and realizes flexions as spherical linkages
//! and 3D meshes.

pub mod bricard;
pub mod cli;
pub mod construct;
pub mod geometry;
pub mod json;
pub mod mobius;
pub mod polyalg;
pub mod verify;

pub use bricard::{HingeParam, MeshCoeffs, QuadCoeffs, SphericalQuad};
pub use mobius::{ProjMap, ProjPoint};
pub use polyalg::BiPoly;

/// Version string embedded in every file the tools write.
pub const TOOL_VERSION: &str = concat!("kokotsakis ", env!("CARGO_PKG_VERSION"));
