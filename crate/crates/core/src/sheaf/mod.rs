//! Functors from finite posets into finite sets or finite-dimensional
//! rational vector spaces, with limits, Kan extensions and the comparison
//! to sheaves on the Alexandrov topology.

pub mod adjunction;
pub mod alexandrov;
pub mod base_change;
pub mod functor;
pub mod grothendieck;
pub mod hom;
pub mod kan;
pub mod limits;
pub mod value;

pub use alexandrov::{
    functor_from_sheaf, functor_round_trip, sheaf_from_functor, sheaf_round_trip, sheafiness_check, AlexandrovFile,
    AlexandrovSheaf, SheafinessReport,
};
pub use base_change::{proper_base_change_check, BaseChangeReport};
pub use adjunction::{verify_adjunction, AdjunctionReport, AdjunctionViolation, Side};
pub use functor::{
    check_functoriality, FunctorialityReport, FunctorialityViolation, SheafBuilder, SheafFile, SheafFunctor,
};
pub use grothendieck::{
    fibration_round_trip, functor_fibration_round_trip, grothendieck, straighten, ElementFibration, FibrationFile,
};
pub use hom::{enumerate_homs, hom_space, span_rank, NatTrans, RoundTripReport, DEFAULT_HOM_CAP};
pub use kan::{
    extension_open, extension_open_ext, left_kan_extension, pullback, pushforward_closed,
    pushforward_closed_ext, restrict, restrict_nat, right_kan_extension, KanExtension,
};
pub use limits::{colimit_over, limit_over, Colimit, Limit};
pub use value::{Morphism, Value, ValueKind};

use thiserror::Error;

use crate::poset::PosetError;

#[derive(Debug, Error)]
pub enum SheafError {
    #[error(transparent)]
    Poset(#[from] PosetError),
    #[error("kind mismatch: {0}")]
    KindMismatch(String),
    #[error("duplicate label in {0}")]
    DuplicateLabel(String),
    #[error("no transition given for the cover {from} < {to}")]
    MissingTransition { from: String, to: String },
    #[error("{from} < {to} is not a cover")]
    NotACover { from: String, to: String },
    #[error("transition {from} -> {to} has the wrong shape")]
    ShapeMismatch { from: String, to: String },
    #[error("functoriality fails on {} <= {}", .0.from, .0.to)]
    Functoriality(Box<FunctorialityViolation>),
    #[error("unknown label {label:?} at {element}")]
    UnknownLabel { element: String, label: String },
    #[error("no value given for {0}")]
    MissingValue(String),
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("functors live over different posets")]
    BaseMismatch,
    #[error("inclusion is not downward closed")]
    NotDownwardClosed,
    #[error("inclusion is not upward closed")]
    NotUpwardClosed,
    #[error("legs do not form a cone")]
    NotACone,
    #[error("more than {0} morphisms")]
    TooManyMorphisms(usize),
    #[error("operation needs {0:?} values")]
    WrongKind(ValueKind),
    #[error("sheaf condition fails on open {open}: {reason}")]
    SheafConditionViolated { open: String, reason: String },
    #[error("not a left fibration at {element} over {over}")]
    NotLeftFibration { element: String, over: String },
}
