//! Finite polarities with sorted relations, and the lattices they complete.
//!
//! The crate works with four layers of structure, bottom up:
//!
//! * [`lattice`]: finite bounded lattices given by their order, normal
//!   operators with distribution types over the two sorts `1` and `d`
//!   (a lattice and its order dual), and enumeration of filters and ideals.
//! * [`polarity`]: two-sorted frames `(X, |=, Y)`, the Galois connection
//!   induced by the incidence relation, stable and co-stable set lattices,
//!   separation and reducedness, and the Dedekind-MacNeille structure.
//! * [`relation`]: sorted `(n+1)`-ary relations on a polarity, their Galois
//!   duals and sections, image operators with residuals and conjugates, and
//!   complex algebras.
//! * [`canonical`]: the canonical frame of a lattice expansion over its
//!   filters and ideals, point operators, canonical relations, representation
//!   maps, and sigma/pi extensions.
//!
//! Everything is finite and explicit: carriers are index ranges, subsets are
//! bitmasks, relations are tuple sets, and the structural theorems connecting
//! the layers are checkable by exhaustive enumeration at desk scale.

pub mod canonical;
pub mod error;
pub mod guard;
pub mod lattice;
pub mod polarity;
pub mod relation;
pub mod report;
pub mod set;

pub use error::Error;
pub use lattice::{
    DistributionType, FlewKind, Lattice, LatticeExpansion, NormalOperator, Sort, ValidationReport,
};
pub use polarity::{GaloisSet, Polarity, Preorder, StableLattice, ZOrder};
pub use relation::{HoleTuple, SortType, SortedRelation};
pub use report::{Check, Report};
pub use set::IndexSet;

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
