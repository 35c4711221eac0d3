//! Simplicial complexes stratified over posets, exhaustions by finite
//! subcomplexes, and piecewise-linear exit simplices.

mod exhaustion;
mod exit;
mod simplicial;
mod stratified;

pub use exhaustion::{build_exhaustion, verify_exhaustion, EdgeEnumeration, Exhaustion, ExhaustionReport};
pub use exit::{
    nerve_chain_simplex, reentering_path, validate_exit_simplex, ExitVerdict, ExitWitness, PlPiece, PlSimplexFile,
    PlSimplexMap, PlVertex, PlVertexFile, WitnessKind, MAX_EXIT_DIM,
};
pub use simplicial::{cone_complex, face_poset, ComplexFile, SimplicialComplex, MAX_FACE_SIZE};
pub use stratified::{StratifiedComplex, StratifiedFile};

use thiserror::Error;

use crate::poset::PosetError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ComplexError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("duplicate vertex {0}")]
    DuplicateVertex(String),
    #[error("invalid vertex id {0:?}: must be nonempty and free of ','")]
    InvalidVertexId(String),
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("empty face")]
    EmptyFace,
    #[error("face with {0} vertices exceeds the limit of {MAX_FACE_SIZE}")]
    FaceTooLarge(usize),
    #[error("unknown face {0}")]
    UnknownFace(String),
    #[error("face {0} is listed without all of its facets")]
    NotClosed(String),
    #[error("apex {0} already names a vertex")]
    ApexCollision(String),
    #[error("face {0} is assigned twice")]
    DuplicateFace(String),
    #[error("edge {edge} at vertex {vertex} is missing from its enumeration")]
    IncompleteEnumeration { vertex: String, edge: String },
    #[error("{edge} is not an edge at vertex {vertex}")]
    UnknownEdge { vertex: String, edge: String },
    #[error("malformed subdivision: {0}")]
    MalformedSubdivision(String),
}
