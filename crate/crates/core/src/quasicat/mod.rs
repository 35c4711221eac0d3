//! Finite truncations of simplicial sets, nerves of posets, and the
//! quasi-category checks run on them.

mod checks;
mod fragment;
mod nerve;

pub use checks::{
    idempotent_check, inner_horn_check, union_colimit, HornFailure, HornReport, IdempotentReport, LevelAssignment,
    UnionReport,
};
pub use fragment::{Generator, SimplexEntry, SimplicialMap, FragmentFile, SimplicialSetFragment, MAX_SIMPLICES};
pub use nerve::{chain_name, nerve, nerve_map};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QuasiError {
    #[error("bound {bound} is below the required dimension {need}")]
    BoundTooLow { need: usize, bound: usize },
    #[error("malformed fragment: {0}")]
    Malformed(String),
    #[error("simplicial identity fails: {0}")]
    IdentityViolated(String),
    #[error("unknown simplex {0}")]
    UnknownSimplex(String),
    #[error("fragment would hold more than {0} simplices")]
    TooLarge(usize),
}
