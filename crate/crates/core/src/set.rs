//! Subsets of a finite carrier as bitmasks.
//!
//! Carriers are index ranges `0..n` with `n <= 64`, so a subset fits in one
//! word. The numeric value of the mask doubles as the canonical ordering of
//! subsets used everywhere a deterministic enumeration order is required.

use std::fmt;

/// Hard cap on carrier sizes; everything in this crate is desk scale.
pub const MAX_CARRIER: usize = 64;

/// A subset of `{0, ..., n-1}` stored as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct IndexSet(u64);

impl IndexSet {
    /// The empty set.
    pub const EMPTY: IndexSet = IndexSet(0);

    pub fn from_bits(bits: u64) -> IndexSet {
        IndexSet(bits)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    /// The full carrier `{0, ..., n-1}`.
    pub fn full(n: usize) -> IndexSet {
        assert!(n <= MAX_CARRIER, "carrier too large: {n}");
        if n == MAX_CARRIER {
            IndexSet(u64::MAX)
        } else {
            IndexSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> IndexSet {
        assert!(i < MAX_CARRIER);
        IndexSet(1u64 << i)
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_CARRIER && self.0 & (1u64 << i) != 0
    }

    #[must_use]
    pub fn with(self, i: usize) -> IndexSet {
        assert!(i < MAX_CARRIER);
        IndexSet(self.0 | (1u64 << i))
    }

    #[must_use]
    pub fn without(self, i: usize) -> IndexSet {
        IndexSet(self.0 & !(1u64 << i))
    }

    pub fn union(self, other: IndexSet) -> IndexSet {
        IndexSet(self.0 | other.0)
    }

    pub fn inter(self, other: IndexSet) -> IndexSet {
        IndexSet(self.0 & other.0)
    }

    pub fn minus(self, other: IndexSet) -> IndexSet {
        IndexSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: IndexSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Members in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// All `2^n` subsets of the carrier `0..n`, in ascending mask order.
    pub fn subsets(n: usize) -> impl Iterator<Item = IndexSet> {
        assert!(n < MAX_CARRIER, "powerset of carrier {n} is too large");
        (0u64..(1u64 << n)).map(IndexSet)
    }
}

impl FromIterator<usize> for IndexSet {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> IndexSet {
        let mut s = IndexSet::EMPTY;
        for i in iter {
            s = s.with(i);
        }
        s
    }
}

impl fmt::Debug for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IndexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_enumeration_is_mask_ordered() {
        let all: Vec<IndexSet> = IndexSet::subsets(2).collect();
        assert_eq!(all.len(), 4);
        assert_eq!(all[0], IndexSet::EMPTY);
        assert_eq!(all[1], IndexSet::singleton(0));
        assert_eq!(all[2], IndexSet::singleton(1));
        assert_eq!(all[3], IndexSet::full(2));
    }

    #[test]
    fn set_algebra() {
        let a = IndexSet::from_iter([0, 2, 5]);
        let b = IndexSet::from_iter([2, 3]);
        assert_eq!(a.inter(b), IndexSet::singleton(2));
        assert_eq!(a.union(b), IndexSet::from_iter([0, 2, 3, 5]));
        assert_eq!(a.minus(b), IndexSet::from_iter([0, 5]));
        assert!(IndexSet::EMPTY.is_subset(a));
        assert!(!a.is_subset(b));
        assert_eq!(a.len(), 3);
        assert_eq!(format!("{a}"), "{0,2,5}");
    }
}
