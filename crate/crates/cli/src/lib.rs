//! Text formats, random generators, and the command-line driver.
//!
//! The [`doc`] module reads and writes the lattice and frame document
//! formats, [`random`] provides seed-deterministic structure generators,
//! and [`run`] implements the `polaritykit` subcommands on top of them.

pub mod doc;
pub mod random;
pub mod run;
