//! Generalized chain geometries over small finite rings.
//!
//! The crate builds the projective line over a finite ring `R` holding a
//! subfield `F`, enumerates its chains, maps everything into a projective
//! space over a field `K` through a ring representation, and decides by
//! exhaustive computation whether chains become reguli, spreads or neither.
//! Point maps between chain geometries over 2×2 matrix rings are checked
//! the same way.
//!
//! All arithmetic is exact and every enumeration is deterministic.

pub mod algebra;
pub mod descriptor;
pub mod linalg;
pub mod morphisms;
pub mod pline;
pub mod representation;
pub mod rings;

pub use algebra::{homomorphisms, make_field, FieldAut, FieldElem, FieldHom, FiniteField};
pub use linalg::{Mat, Subspace};
pub use morphisms::{MorphismReport, MorphismSpec, OmegaTranspose};
pub use pline::{Chain, ChainGeometry, PointId, ProjectiveLine};
pub use representation::{
    RegulusCertificate, RegulusVerdict, Representation, SpreadClass, TransversalKind, TransversalRecord,
};
pub use rings::{EmbedMode, FiniteRing, RingElem, RingKind, RingMat2, SubfieldEmbedding};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u32),

    #[error("{what} cap exceeded: requested {requested}, limit {limit}")]
    CapExceeded { what: &'static str, limit: usize, requested: usize },

    #[error("orbit enumeration of {what} stopped at the cap of {limit} ({found} found so far)")]
    PartialOrbit { what: &'static str, limit: usize, found: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid descriptor: {0:?}")]
    InvalidDescriptor(String),

    #[error("incompatible fields: {0}")]
    IncompatibleFields(String),

    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),

    #[error("not a subring: {0}")]
    NotSubring(String),

    #[error("matrix is not invertible over the ring")]
    NotInvertible,

    #[error("points are not pairwise distant")]
    NotDistant,

    #[error("subspaces are not pairwise complementary")]
    NotSkew,

    #[error("transversal records belong to different representations")]
    ForeignTransversal,

    #[error("inclusion condition fails: {0}")]
    InclusionCondition(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
