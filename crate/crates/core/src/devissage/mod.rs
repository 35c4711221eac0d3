//! Sheaves over an ω-filtered poset as compatible towers of sheaves over the
//! levels: restriction, gluing, and a seeded verifier for both round trips
//! and for bijectivity on morphisms.

mod tower;
mod verify;

pub use tower::{glue_hom, glue_tower, restrict_hom, restrict_tower, SheafTower, TowerHom};
pub use verify::{random_tower, verify_devissage, CheckSummary, DevissageConfig, DevissageReport, SampleFailure};

use thiserror::Error;

use crate::poset::PosetError;
use crate::sheaf::SheafError;

#[derive(Debug, Error)]
pub enum DevissageError {
    #[error(transparent)]
    Sheaf(#[from] SheafError),
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("functor does not live over the top level")]
    BaseMismatch,
    #[error("stage {level} does not live over level {level}")]
    StageMismatch { level: usize },
    #[error("comparison {level} -> {} at {element}: {reason}", level + 1)]
    InvalidComparison { level: usize, element: String, reason: String },
}
