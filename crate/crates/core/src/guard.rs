//! Size guards for exhaustive checks.
//!
//! Several operations enumerate powersets of a carrier or of a stable-set
//! lattice. Each call site has a default limit chosen so that the whole test
//! corpus runs in seconds; the environment variable `POLARITYKIT_GUARD`
//! overrides every default at once, either raising or lowering it.

use std::env;

/// Name of the override variable.
pub const GUARD_ENV: &str = "POLARITYKIT_GUARD";

/// Default cap on a carrier whose powerset is enumerated (cost `2^n`).
pub const POWERSET_DEFAULT: usize = 12;

/// Default cap on the number of stable sets when enumerating families of them.
pub const FAMILY_DEFAULT: usize = 12;

/// Default cap on lattice size for canonical-frame constructions over
/// operator tuples (cost `size^(arity+1)` per relation).
pub const CANONICAL_DEFAULT: usize = 8;

/// The effective limit for a call site: the override if set, else `default`.
pub fn limit(default: usize) -> usize {
    match env::var(GUARD_ENV) {
        Ok(v) => v.parse().unwrap_or(default),
        Err(_) => default,
    }
}
