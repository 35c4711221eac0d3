//! Exact, desk-scale computations on stratified spaces: finite posets with
//! their Alexandrov topology, stratified simplicial complexes and exit
//! simplices, nerves with quasi-category checks, constructible sheaves as
//! functors with Kan extensions, dévissage along ω-filtrations, and the
//! exponential and cone metrics.

pub mod complex;
pub mod devissage;
pub mod linalg;
pub mod metric;
pub mod poset;
pub mod quasicat;
pub mod random;
pub mod rational;
pub mod sheaf;

pub use linalg::Matrix;
pub use poset::{Inclusion, MonotoneMap, OmegaFiltration, Poset, PosetError, UpwardClosedSet};
pub use rational::Rational;
