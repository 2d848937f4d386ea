//! Seeded random structures.
//!
//! Generation uses a small hand-rolled splitmix generator so that a seed
//! produces the same structure on every platform and toolchain, which the
//! byte-identical report guarantee depends on.

use polaritykit::lattice::Lattice;
use polaritykit::relation::{SortType, SortedRelation};
use polaritykit::{Error, Polarity, Sort};

/// splitmix64: tiny, full-period, and stable across platforms.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> SplitMix64 {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` with 53 bits of precision.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in `0..n`.
    pub fn below(&mut self, n: usize) -> usize {
        (self.next_u64() % n as u64) as usize
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.next_f64() < p
    }
}

/// A random polarity: each incidence pair is present with probability
/// `density`. Deterministic in the seed.
pub fn random_polarity(seed: u64, nx: usize, ny: usize, density: f64) -> Result<Polarity, Error> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::BadSize(format!("density {density} outside [0,1]")));
    }
    let mut rng = SplitMix64::new(seed);
    let mut pairs = Vec::new();
    for x in 0..nx {
        for y in 0..ny {
            if rng.chance(density) {
                pairs.push((x, y));
            }
        }
    }
    Polarity::new(nx, ny, &pairs)
}

/// A random bounded lattice of `n` elements.
///
/// Method: fix a bottom and a top, draw a random order on the middle
/// elements (edges oriented along a random priority to stay acyclic), close
/// transitively, and keep the result if every pair has a meet and a join;
/// otherwise reseed and retry, failing after a bounded number of attempts.
pub fn random_lattice(seed: u64, n: usize) -> Result<Lattice, Error> {
    if n == 0 {
        return Err(Error::BadSize("lattice needs at least one element".into()));
    }
    if n <= 2 {
        return Ok(Lattice::chain(n));
    }
    const ATTEMPTS: usize = 200;
    let mut rng = SplitMix64::new(seed);
    for _ in 0..ATTEMPTS {
        let mid = n - 2;
        let mut priority: Vec<usize> = (0..mid).collect();
        // Fisher-Yates with the local generator.
        for i in (1..mid).rev() {
            priority.swap(i, rng.below(i + 1));
        }
        let mut pairs = Vec::new();
        for i in 0..mid {
            for j in 0..mid {
                if priority[i] < priority[j] && rng.chance(0.3) {
                    pairs.push((i + 1, j + 1));
                }
            }
        }
        for m in 1..=mid {
            pairs.push((0, m));
            pairs.push((m, n - 1));
        }
        pairs.push((0, n - 1));
        if let Ok(lattice) = Lattice::from_order_pairs(n, &pairs) {
            return Ok(lattice);
        }
    }
    Err(Error::GenerationFailed(ATTEMPTS))
}

/// A random relation on a polarity: a random sort type of the given arity
/// and each well-sorted tuple present with probability `density`.
pub fn random_relation(
    seed: u64,
    p: &Polarity,
    arity: usize,
    density: f64,
) -> Result<SortedRelation, Error> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::BadSize(format!("density {density} outside [0,1]")));
    }
    let mut rng = SplitMix64::new(seed);
    let pick = |rng: &mut SplitMix64| {
        if rng.chance(0.5) {
            Sort::One
        } else {
            Sort::Dual
        }
    };
    let out = pick(&mut rng);
    let args: Vec<Sort> = (0..arity).map(|_| pick(&mut rng)).collect();
    let stype = SortType::new(out, args);

    let mut tuples = Vec::new();
    let mut stack = vec![Vec::new()];
    for &s in &stype.args {
        let mut next = Vec::new();
        for t in &stack {
            for u in 0..p.carrier_size(s) {
                let mut t2 = t.clone();
                t2.push(u);
                next.push(t2);
            }
        }
        stack = next;
    }
    for t in stack {
        for w in 0..p.carrier_size(stype.out) {
            if rng.chance(density) {
                tuples.push((w, t.clone()));
            }
        }
    }
    SortedRelation::new(p, format!("r{seed}"), stype, tuples)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polarity_generation_is_deterministic() {
        let a = random_polarity(0, 3, 3, 0.5).unwrap();
        let b = random_polarity(0, 3, 3, 0.5).unwrap();
        assert_eq!(a, b);
        let c = random_polarity(1, 3, 3, 0.5).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn density_extremes() {
        let empty = random_polarity(7, 3, 4, 0.0).unwrap();
        assert!(empty.incidence_pairs().is_empty());
        let total = random_polarity(7, 3, 4, 1.0).unwrap();
        assert_eq!(total.incidence_pairs().len(), 12);
        assert!(random_polarity(0, 2, 2, 1.5).is_err());
    }

    #[test]
    fn lattices_generate_and_validate() {
        for seed in 0..40u64 {
            let l = random_lattice(seed, 2 + (seed as usize % 5)).unwrap();
            // Construction validates; spot-check the bounds.
            for e in 0..l.size() {
                assert!(l.leq(l.bottom(), e));
                assert!(l.leq(e, l.top()));
            }
        }
        assert_eq!(random_lattice(3, 1).unwrap().size(), 1);
        assert!(random_lattice(0, 0).is_err());
    }

    #[test]
    fn relations_are_reproducible() {
        let p = random_polarity(11, 3, 3, 0.4).unwrap();
        let a = random_relation(5, &p, 2, 0.3).unwrap();
        let b = random_relation(5, &p, 2, 0.3).unwrap();
        assert_eq!(a, b);
    }
}
