//! Finite categories, fibered categories, and Reedy model structures on
//! categories of sections, all at a scale where every universal property can
//! be checked by exhaustive search.
//!
//! The crate is organized bottom-up:
//!
//! - [`fincat`]: finite categories, functors, natural transformations, comma
//!   categories, and elementary universal-object detection.
//! - [`setfun`]: finite-set-valued diagrams with computable limits, colimits
//!   and natural-transformation counting.
//! - [`reedy`]: factorization systems, Reedy structures, Noether degree
//!   theory, latching/matching categories, immersions, good filtrations.
//! - [`fib`]: (op)cartesian morphisms, the fibration zoo, Grothendieck
//!   constructions, semifibrations, transition functors and mate squares.
//! - [`model`]: model-structure data on finite categories and its validation.
//! - [`sect`]: sections of a semifibration over a Reedy base, latching and
//!   matching objects, Reedy classification, factorization and lifting, and
//!   explicit generating (trivial) cofibrations.
//! - [`kan`]: pushforwards, matching systems, right Kan extensions along
//!   closed immersions, base change, and limits of sections.
//! - [`simplex`]: truncated simplex categories, simplicial sets as discrete
//!   opfibrations, Segal/anchor systems, and the normalized section theory.
//!
//! All values are immutable after construction and safe to share across
//! threads; every operation is a pure function of its inputs.

pub mod fincat;
pub mod setfun;
pub mod reedy;
pub mod fib;
pub mod model;
pub mod sect;
pub mod kan;
pub mod simplex;
pub mod sample;
pub mod fixtures;

/// Crate-wide error type for operations that can fail outright.
///
/// Validators do not return errors; they return report values listing
/// violations with witnesses. `Error` is reserved for malformed references,
/// missing structure that an operation needs to even start, and budget
/// exhaustion in brute-force phases.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("unknown object id `{0}`")]
    UnknownObject(String),
    #[error("unknown morphism id `{0}`")]
    UnknownMorphism(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("structural error: {0}")]
    Structural(String),
    #[error("missing (co)limit: {0}")]
    MissingLimit(String),
    #[error("budget exceeded: {0}")]
    Budget(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

pub type Result<T> = std::result::Result<T, Error>;
