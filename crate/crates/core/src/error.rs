//! Error type shared by all modules.

use thiserror::Error;

/// Everything that can go wrong when building or combining finite structures.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The given order pairs do not describe a partial order.
    #[error("not a partial order: {0}")]
    NotAPartialOrder(String),

    /// Some pair of elements lacks a meet or a join.
    #[error("not a lattice: {0}")]
    NotALattice(String),

    /// The order has no least or no greatest element (only possible when empty).
    #[error("not a bounded lattice")]
    NotBounded,

    /// An operator table does not match the declared arity or lattice size.
    #[error("arity mismatch: {0}")]
    ArityMismatch(String),

    /// A size parameter is outside the supported range.
    #[error("bad size: {0}")]
    BadSize(String),

    /// An element or point index is out of range for its carrier.
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),

    /// A point, set, or tuple has the wrong sort for the operation.
    #[error("sort mismatch: {0}")]
    SortMismatch(String),

    /// A set that must be closure-fixed is not.
    #[error("not a Galois set: {0}")]
    NotGalois(String),

    /// The operation needs a separated frame.
    #[error("frame is not separated")]
    NotSeparated,

    /// A relation whose Galois dual must have stable sections does not.
    #[error("sections not stable: {0}")]
    SectionsNotStable(String),

    /// The restricted residual is not closure-fixed or its defining forms disagree.
    #[error("not residuated: {0}")]
    NotResiduated(String),

    /// A canonical-frame operation was called although a frame lemma fails.
    #[error("lemma precondition failed: {0}")]
    LemmaPreconditionFailed(String),

    /// An exhaustive check would exceed the configured size guard.
    #[error("size guard exceeded: {0} (set POLARITYKIT_GUARD to raise the limit)")]
    GuardExceeded(String),

    /// Random generation did not produce a valid structure within the retry budget.
    #[error("generation failed after {0} attempts")]
    GenerationFailed(usize),
}
