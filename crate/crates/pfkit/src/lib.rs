//! Exact-arithmetic polytope toolkit.
//!
//! Everything is computed over arbitrary-precision rationals: double
//! description conversion between H- and V-representations, face lattice
//! enumeration, projections and fibers, the projected-faces property with
//! Radon counterexample certificates, affine generators of polyhedral
//! relations, and two-polytope composition with full hypothesis checking.

pub mod bitset;
pub mod caps;
pub mod compose;
pub mod dd;
pub mod io;
pub mod linalg;
pub mod models;
pub mod num;
pub mod pfp;
pub mod polytope;

pub use linalg::{AffineSubspace, LinearConstraint, QMatrix, QVector};
pub use num::Rational;
pub use polytope::{Face, HRep, Polytope, VRep};

use thiserror::Error as ThisError;

#[derive(ThisError, Debug)]
pub enum Error {
    #[error("empty point set")]
    EmptyPointSet,
    #[error("no dependence exists")]
    NoAffineDependence,
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("unbounded")]
    Unbounded,
    #[error("empty polytope")]
    EmptyPolytope,
    #[error("empty fiber")]
    EmptyFiber,
    #[error("point not in polytope")]
    PointNotInPolytope,
    #[error("coordinate out of range")]
    CoordOutOfRange,
    #[error("intermediate ray count exceeded cap {0}")]
    RayCapExceeded(usize),
    #[error("vertex count exceeded cap {0}")]
    VertexCapExceeded(usize),
    #[error("oracle cap exceeded: projection has {0} vertices, cap {1}")]
    OracleCapExceeded(usize, usize),
    #[error("PF holds")]
    PfHolds,
    #[error("PF fails")]
    PfFails(Box<pfp::PfReport>),
    #[error("maximal failing face does not project full-dimensionally")]
    DegenerateWitness,
    #[error("S must be a subset of projection vertices")]
    NotProjectionVertices,
    #[error("f table is empty")]
    EmptyFTable,
    #[error("invalid composition input: {0}")]
    InvalidComposition(String),
    #[error("theorem violated — implementation bug: {0}")]
    TheoremViolated(String),
    #[error("chain step {0} failed: {1}")]
    ChainStep(usize, String),
    #[error("model cap exceeded: {0}")]
    ModelCap(String),
    #[error("empty TSP polytope")]
    EmptyTspPolytope,
    #[error("not a cutset")]
    NotACutset,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
