//! Finite bounded lattices and normal operators on them.
//!
//! A lattice is given by its order relation over indices `0..size`; meets,
//! joins and bounds are derived and total. Operators carry a distribution
//! type over the two sorts `1` and `d`: sort `1` reads an argument place (or
//! the output) in the lattice order, sort `d` in the dual order. An n-ary
//! operator is normal for its type when it turns finite joins of each sorted
//! argument place into joins of the sorted output, the empty join included.

use std::fmt;

use crate::error::Error;
use crate::guard;
use crate::set::IndexSet;
use crate::Result;

/// The two sorts: a lattice seen straight, or order-dualized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sort {
    /// The lattice itself; on a polarity, the left carrier `X`.
    One,
    /// The order dual; on a polarity, the right carrier `Y`.
    Dual,
}

impl Sort {
    /// The other sort.
    pub fn bar(self) -> Sort {
        match self {
            Sort::One => Sort::Dual,
            Sort::Dual => Sort::One,
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::One => write!(f, "1"),
            Sort::Dual => write!(f, "d"),
        }
    }
}

/// Distribution type of an operator: one sort per argument place, one for the
/// output. Displayed as `(i1,...,in;out)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DistributionType {
    pub args: Vec<Sort>,
    pub out: Sort,
}

impl DistributionType {
    pub fn new(args: Vec<Sort>, out: Sort) -> DistributionType {
        DistributionType { args, out }
    }

    pub fn arity(&self) -> usize {
        self.args.len()
    }
}

impl fmt::Display for DistributionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (j, s) in self.args.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ";{})", self.out)
    }
}

/// A finite bounded lattice over element indices `0..size`.
///
/// Construction validates the order and derives total meet/join tables, so
/// every instance satisfies the lattice axioms by construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    size: usize,
    leq: Vec<bool>,
    meet: Vec<usize>,
    join: Vec<usize>,
    bottom: usize,
    top: usize,
}

impl Lattice {
    /// Build a lattice from order pairs `(a, b)` meaning `a <= b`.
    ///
    /// The reflexive-transitive closure is taken first, so a Hasse covering
    /// relation is enough.
    pub fn from_order_pairs(size: usize, pairs: &[(usize, usize)]) -> Result<Lattice> {
        for &(a, b) in pairs {
            if a >= size || b >= size {
                return Err(Error::IndexOutOfRange(format!(
                    "order pair ({a},{b}) outside 0..{size}"
                )));
            }
        }
        let mut leq = vec![false; size * size];
        for e in 0..size {
            leq[e * size + e] = true;
        }
        for &(a, b) in pairs {
            leq[a * size + b] = true;
        }
        // Warshall closure.
        for m in 0..size {
            for a in 0..size {
                if leq[a * size + m] {
                    for b in 0..size {
                        if leq[m * size + b] {
                            leq[a * size + b] = true;
                        }
                    }
                }
            }
        }
        Lattice::from_leq_matrix(size, leq)
    }

    /// Build a lattice from a full `size x size` order matrix (row-major,
    /// `leq[a*size+b]` meaning `a <= b`). The matrix must already be a
    /// partial order.
    pub fn from_leq_matrix(size: usize, leq: Vec<bool>) -> Result<Lattice> {
        if size == 0 {
            return Err(Error::NotBounded);
        }
        if leq.len() != size * size {
            return Err(Error::BadSize(format!(
                "order matrix has {} entries, expected {}",
                leq.len(),
                size * size
            )));
        }
        let le = |a: usize, b: usize| leq[a * size + b];
        for a in 0..size {
            if !le(a, a) {
                return Err(Error::NotAPartialOrder(format!("{a} <= {a} fails")));
            }
            for b in 0..size {
                if a != b && le(a, b) && le(b, a) {
                    return Err(Error::NotAPartialOrder(format!(
                        "antisymmetry fails on {a}, {b}"
                    )));
                }
                for c in 0..size {
                    if le(a, b) && le(b, c) && !le(a, c) {
                        return Err(Error::NotAPartialOrder(format!(
                            "transitivity fails on {a} <= {b} <= {c}"
                        )));
                    }
                }
            }
        }
        let mut meet = vec![0usize; size * size];
        let mut join = vec![0usize; size * size];
        for a in 0..size {
            for b in 0..size {
                meet[a * size + b] = bound_of(size, &leq, a, b, true)
                    .ok_or_else(|| Error::NotALattice(format!("{a} and {b} have no meet")))?;
                join[a * size + b] = bound_of(size, &leq, a, b, false)
                    .ok_or_else(|| Error::NotALattice(format!("{a} and {b} have no join")))?;
            }
        }
        let mut bottom = 0;
        let mut top = 0;
        for e in 1..size {
            bottom = meet[bottom * size + e];
            top = join[top * size + e];
        }
        Ok(Lattice {
            size,
            leq,
            meet,
            join,
            bottom,
            top,
        })
    }

    /// The `n`-element chain `0 < 1 < ... < n-1`.
    pub fn chain(n: usize) -> Lattice {
        assert!(n >= 1);
        let pairs: Vec<(usize, usize)> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
        Lattice::from_order_pairs(n, &pairs).expect("a chain is a lattice")
    }

    /// Height-two modular lattice with `atoms` pairwise incomparable atoms:
    /// bottom `0`, atoms `1..=atoms`, top `atoms+1`. Two atoms give the
    /// 2x2 square, three give the diamond M3.
    pub fn diamond(atoms: usize) -> Lattice {
        let n = atoms + 2;
        let mut pairs = Vec::new();
        for a in 1..=atoms {
            pairs.push((0, a));
            pairs.push((a, n - 1));
        }
        if atoms == 0 {
            pairs.push((0, n - 1));
        }
        Lattice::from_order_pairs(n, &pairs).expect("diamond is a lattice")
    }

    /// The pentagon N5: `0 < a < c < 1` and `0 < b < 1` with `b` incomparable
    /// to both `a` and `c`. Elements `0, a, b, c, 1` are indices `0..5`.
    pub fn pentagon() -> Lattice {
        Lattice::from_order_pairs(5, &[(0, 1), (1, 3), (3, 4), (0, 2), (2, 4)])
            .expect("pentagon is a lattice")
    }

    /// Boolean cube `2^k`: elements are bitmasks over `k` generators, ordered
    /// by inclusion.
    pub fn boolean(k: usize) -> Result<Lattice> {
        if k > 6 {
            return Err(Error::BadSize(format!("boolean cube 2^{k} is too large")));
        }
        let n = 1usize << k;
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[a * n + b] = a & !b == 0;
            }
        }
        Lattice::from_leq_matrix(n, leq)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn bottom(&self) -> usize {
        self.bottom
    }

    pub fn top(&self) -> usize {
        self.top
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.size + b]
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.meet[a * self.size + b]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.join[a * self.size + b]
    }

    /// Meet of a finite set of elements; the empty meet is the top.
    pub fn meet_all(&self, elems: impl IntoIterator<Item = usize>) -> usize {
        elems.into_iter().fold(self.top, |acc, e| self.meet(acc, e))
    }

    /// Join of a finite set of elements; the empty join is the bottom.
    pub fn join_all(&self, elems: impl IntoIterator<Item = usize>) -> usize {
        elems
            .into_iter()
            .fold(self.bottom, |acc, e| self.join(acc, e))
    }

    /// All elements above `a`, as a set.
    pub fn upset(&self, a: usize) -> IndexSet {
        (0..self.size).filter(|&b| self.leq(a, b)).collect()
    }

    /// All elements below `a`, as a set.
    pub fn downset(&self, a: usize) -> IndexSet {
        (0..self.size).filter(|&b| self.leq(b, a)).collect()
    }

    /// Join as seen by a sort: ordinary join for sort `1`, meet for sort `d`.
    pub fn sorted_join(&self, sort: Sort, a: usize, b: usize) -> usize {
        match sort {
            Sort::One => self.join(a, b),
            Sort::Dual => self.meet(a, b),
        }
    }

    /// The least element as seen by a sort: bottom for `1`, top for `d`.
    pub fn sorted_zero(&self, sort: Sort) -> usize {
        match sort {
            Sort::One => self.bottom,
            Sort::Dual => self.top,
        }
    }

    /// Order as seen by a sort.
    pub fn sorted_leq(&self, sort: Sort, a: usize, b: usize) -> bool {
        match sort {
            Sort::One => self.leq(a, b),
            Sort::Dual => self.leq(b, a),
        }
    }

    /// All `size^len` tuples over the element range, lexicographically.
    pub fn tuples(&self, len: usize) -> Tuples {
        Tuples::new(self.size, len)
    }
}

/// Greatest lower (`lower = true`) or least upper bound of `a, b`, if any.
fn bound_of(size: usize, leq: &[bool], a: usize, b: usize, lower: bool) -> Option<usize> {
    let le = |x: usize, y: usize| leq[x * size + y];
    let cmp = |x: usize, y: usize| if lower { le(x, y) } else { le(y, x) };
    let candidates: Vec<usize> = (0..size).filter(|&c| cmp(c, a) && cmp(c, b)).collect();
    candidates
        .iter()
        .copied()
        .find(|&g| candidates.iter().all(|&c| cmp(c, g)))
}

/// Lexicographic enumeration of fixed-length tuples over `0..base`.
pub struct Tuples {
    base: usize,
    current: Option<Vec<usize>>,
}

impl Tuples {
    pub fn new(base: usize, len: usize) -> Tuples {
        let current = if base == 0 && len > 0 {
            None
        } else {
            Some(vec![0; len])
        };
        Tuples { base, current }
    }
}

impl Iterator for Tuples {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let out = self.current.clone()?;
        let t = self.current.as_mut().unwrap();
        // Increment from the rightmost position.
        let mut pos = t.len();
        loop {
            if pos == 0 {
                self.current = None;
                break;
            }
            pos -= 1;
            t[pos] += 1;
            if t[pos] < self.base {
                break;
            }
            t[pos] = 0;
        }
        Some(out)
    }
}

/// A total n-ary operation table together with its declared distribution type.
///
/// The table is row-major over lexicographic argument tuples: for arity 2 on
/// a lattice of size `s`, entry for `(a, b)` sits at `a*s + b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalOperator {
    pub name: String,
    pub dtype: DistributionType,
    pub table: Vec<usize>,
}

impl NormalOperator {
    pub fn new(
        name: impl Into<String>,
        dtype: DistributionType,
        table: Vec<usize>,
    ) -> NormalOperator {
        NormalOperator {
            name: name.into(),
            dtype,
            table,
        }
    }

    pub fn arity(&self) -> usize {
        self.dtype.arity()
    }

    /// Table position of an argument tuple.
    fn table_index(&self, size: usize, args: &[usize]) -> usize {
        args.iter().fold(0, |acc, &a| acc * size + a)
    }

    /// Apply the operator to an argument tuple.
    pub fn apply(&self, size: usize, args: &[usize]) -> usize {
        debug_assert_eq!(args.len(), self.arity());
        self.table[self.table_index(size, args)]
    }
}

/// Per-argument-place outcome of the normality check.
#[derive(Debug, Clone)]
pub struct PlaceReport {
    /// 1-based argument place.
    pub place: usize,
    /// Counterexample to binary-join distribution at this place, if any.
    pub distribution_counterexample: Option<String>,
    /// Counterexample to preservation of the sorted zero, if any.
    pub bound_counterexample: Option<String>,
}

impl PlaceReport {
    pub fn passed(&self) -> bool {
        self.distribution_counterexample.is_none() && self.bound_counterexample.is_none()
    }
}

/// Result of validating an operator against its declared distribution type.
#[derive(Debug, Clone)]
pub struct ValidationReport {
    pub operator: String,
    pub places: Vec<PlaceReport>,
}

impl ValidationReport {
    pub fn accepted(&self) -> bool {
        self.places.iter().all(PlaceReport::passed)
    }

    /// 1-based places that fail, for error messages.
    pub fn failing_places(&self) -> Vec<usize> {
        self.places
            .iter()
            .filter(|p| !p.passed())
            .map(|p| p.place)
            .collect()
    }
}

/// Check that `op` distributes over binary joins of the sorted argument at
/// every place, delivering joins of the sorted output, and that it sends the
/// sorted zero of each place to the sorted zero of the output.
pub fn validate_normal_operator(
    lattice: &Lattice,
    op: &NormalOperator,
) -> Result<ValidationReport> {
    let n = op.arity();
    let size = lattice.size();
    let expected = size.checked_pow(n as u32).ok_or_else(|| {
        Error::ArityMismatch(format!("table for arity {n} on size {size} overflows"))
    })?;
    if op.table.len() != expected {
        return Err(Error::ArityMismatch(format!(
            "operator {} has {} table entries, expected {}",
            op.name,
            op.table.len(),
            expected
        )));
    }
    if let Some(&bad) = op.table.iter().find(|&&v| v >= size) {
        return Err(Error::IndexOutOfRange(format!(
            "operator {} table value {bad} outside 0..{size}",
            op.name
        )));
    }

    let mut places = Vec::with_capacity(n);
    for j in 0..n {
        let arg_sort = op.dtype.args[j];
        let out_sort = op.dtype.out;
        let mut distribution = None;
        let mut bound = None;

        for rest in Tuples::new(size, n - 1) {
            let mut args = rest.clone();
            args.insert(j, 0);

            // Empty join: the sorted zero must map to the sorted zero.
            args[j] = lattice.sorted_zero(arg_sort);
            let at_zero = op.apply(size, &args);
            if at_zero != lattice.sorted_zero(out_sort) && bound.is_none() {
                bound = Some(format!(
                    "args {:?} with zero at place {} give {} instead of {}",
                    args,
                    j + 1,
                    at_zero,
                    lattice.sorted_zero(out_sort)
                ));
            }

            // Binary joins.
            'pairs: for x in 0..size {
                for y in 0..size {
                    args[j] = lattice.sorted_join(arg_sort, x, y);
                    let lhs = op.apply(size, &args);
                    args[j] = x;
                    let fx = op.apply(size, &args);
                    args[j] = y;
                    let fy = op.apply(size, &args);
                    let rhs = lattice.sorted_join(out_sort, fx, fy);
                    if lhs != rhs {
                        distribution = Some(format!(
                            "at place {} with rest {:?}: f(..{}..) = {} but {} v {} = {}",
                            j + 1,
                            rest,
                            lattice.sorted_join(arg_sort, x, y),
                            lhs,
                            fx,
                            fy,
                            rhs
                        ));
                        break 'pairs;
                    }
                }
            }
            if distribution.is_some() && bound.is_some() {
                break;
            }
        }
        places.push(PlaceReport {
            place: j + 1,
            distribution_counterexample: distribution,
            bound_counterexample: bound,
        });
    }
    Ok(ValidationReport {
        operator: op.name.clone(),
        places,
    })
}

/// A lattice with a family of validated normal operators.
#[derive(Debug, Clone)]
pub struct LatticeExpansion {
    pub lattice: Lattice,
    pub operators: Vec<NormalOperator>,
}

impl LatticeExpansion {
    /// Build an expansion, rejecting any operator that fails its type.
    pub fn new(lattice: Lattice, operators: Vec<NormalOperator>) -> Result<LatticeExpansion> {
        for op in &operators {
            let report = validate_normal_operator(&lattice, op)?;
            if !report.accepted() {
                return Err(Error::ArityMismatch(format!(
                    "operator {} is not normal for {} at place(s) {:?}",
                    op.name,
                    op.dtype,
                    report.failing_places()
                )));
            }
        }
        Ok(LatticeExpansion { lattice, operators })
    }

    /// An expansion with no operators.
    pub fn bare(lattice: Lattice) -> LatticeExpansion {
        LatticeExpansion {
            lattice,
            operators: Vec::new(),
        }
    }
}

/// All filters of the lattice: nonempty, upward-closed, meet-closed subsets,
/// the improper filter included, in ascending bitmask order.
pub fn enumerate_filters(lattice: &Lattice) -> Result<Vec<IndexSet>> {
    enumerate_closed_updown(lattice, true)
}

/// All ideals, dually.
pub fn enumerate_ideals(lattice: &Lattice) -> Result<Vec<IndexSet>> {
    enumerate_closed_updown(lattice, false)
}

fn enumerate_closed_updown(lattice: &Lattice, filters: bool) -> Result<Vec<IndexSet>> {
    let n = lattice.size();
    let limit = guard::limit(guard::POWERSET_DEFAULT);
    if n > limit {
        return Err(Error::GuardExceeded(format!(
            "filter/ideal enumeration over 2^{n} subsets exceeds guard {limit}"
        )));
    }
    let le = |a: usize, b: usize| {
        if filters {
            lattice.leq(a, b)
        } else {
            lattice.leq(b, a)
        }
    };
    let glb = |a: usize, b: usize| {
        if filters {
            lattice.meet(a, b)
        } else {
            lattice.join(a, b)
        }
    };
    let mut out = Vec::new();
    'subset: for s in IndexSet::subsets(n) {
        if s.is_empty() {
            continue;
        }
        for a in s.iter() {
            for b in 0..n {
                if le(a, b) && !s.contains(b) {
                    continue 'subset;
                }
            }
            for b in s.iter() {
                if !s.contains(glb(a, b)) {
                    continue 'subset;
                }
            }
        }
        out.push(s);
    }
    Ok(out)
}

/// The two bundled FL-algebra chains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlewKind {
    Godel,
    Lukasiewicz,
}

/// An `n`-element chain with a product `circ` of type `(1,1;1)` and its
/// residuum `imp` of type `(1,d;d)`, so that `a circ c <= b` iff
/// `c <= a imp b` holds for all triples.
pub fn flew_chain(n: usize, kind: FlewKind) -> Result<LatticeExpansion> {
    if n < 2 {
        return Err(Error::BadSize(format!(
            "residuated chain needs at least 2 elements, got {n}"
        )));
    }
    let lattice = Lattice::chain(n);
    let top = n - 1;
    let circ = |a: usize, c: usize| match kind {
        FlewKind::Godel => a.min(c),
        FlewKind::Lukasiewicz => (a + c).saturating_sub(top),
    };
    let imp = |a: usize, b: usize| match kind {
        FlewKind::Godel => {
            if a <= b {
                top
            } else {
                b
            }
        }
        FlewKind::Lukasiewicz => (top - a + b).min(top),
    };
    let mut circ_table = Vec::with_capacity(n * n);
    let mut imp_table = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            circ_table.push(circ(a, b));
            imp_table.push(imp(a, b));
        }
    }
    let ops = vec![
        NormalOperator::new(
            "circ",
            DistributionType::new(vec![Sort::One, Sort::One], Sort::One),
            circ_table,
        ),
        NormalOperator::new(
            "imp",
            DistributionType::new(vec![Sort::One, Sort::Dual], Sort::Dual),
            imp_table,
        ),
    ];
    LatticeExpansion::new(lattice, ops)
}

/// An `n`-element chain with its order-reversing involution declared twice,
/// once with each of the two types a De Morgan negation admits.
pub fn demorgan_chain(n: usize) -> Result<LatticeExpansion> {
    if n < 2 {
        return Err(Error::BadSize(format!(
            "negation chain needs at least 2 elements, got {n}"
        )));
    }
    let lattice = Lattice::chain(n);
    let table: Vec<usize> = (0..n).map(|a| n - 1 - a).collect();
    let ops = vec![
        NormalOperator::new(
            "neg_d",
            DistributionType::new(vec![Sort::One], Sort::Dual),
            table.clone(),
        ),
        NormalOperator::new(
            "neg_1",
            DistributionType::new(vec![Sort::Dual], Sort::One),
            table,
        ),
    ];
    LatticeExpansion::new(lattice, ops)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent glb/lub search straight from the order, used as the oracle
    /// for the derived tables.
    fn brute_bound(l: &Lattice, a: usize, b: usize, lower: bool) -> Option<usize> {
        let n = l.size();
        let le = |x: usize, y: usize| if lower { l.leq(x, y) } else { l.leq(y, x) };
        let cand: Vec<usize> = (0..n).filter(|&c| le(c, a) && le(c, b)).collect();
        cand.iter()
            .copied()
            .find(|&g| cand.iter().all(|&c| le(c, g)))
    }

    #[test]
    fn one_element_lattice() {
        let l = Lattice::from_order_pairs(1, &[(0, 0)]).unwrap();
        assert_eq!(l.bottom(), 0);
        assert_eq!(l.top(), 0);
    }

    #[test]
    fn two_chain() {
        let l = Lattice::from_order_pairs(2, &[(0, 1)]).unwrap();
        assert_eq!(l.bottom(), 0);
        assert_eq!(l.top(), 1);
        assert_eq!(l.meet(0, 1), 0);
        assert_eq!(l.join(0, 1), 1);
    }

    #[test]
    fn diamond_m3_meets_and_joins() {
        let l = Lattice::diamond(3);
        assert_eq!(l.size(), 5);
        for a in 0..5 {
            for b in 0..5 {
                assert_eq!(Some(l.meet(a, b)), brute_bound(&l, a, b, true));
                assert_eq!(Some(l.join(a, b)), brute_bound(&l, a, b, false));
            }
        }
        // Distinct atoms meet at bottom and join at top.
        assert_eq!(l.meet(1, 2), 0);
        assert_eq!(l.join(1, 2), 4);
        assert_eq!(l.meet(1, l.top()), 1);
    }

    #[test]
    fn lattice_algebra_laws_hold_on_corpus() {
        let corpus = [
            Lattice::chain(2),
            Lattice::chain(5),
            Lattice::diamond(2),
            Lattice::diamond(3),
            Lattice::pentagon(),
            Lattice::boolean(3).unwrap(),
        ];
        for l in &corpus {
            let n = l.size();
            for a in 0..n {
                assert_eq!(l.meet(a, a), a);
                assert_eq!(l.join(a, a), a);
                assert_eq!(l.meet(a, l.top()), a);
                assert_eq!(l.join(a, l.bottom()), a);
                for b in 0..n {
                    assert_eq!(l.meet(a, b), l.meet(b, a));
                    assert_eq!(l.join(a, b), l.join(b, a));
                    assert_eq!(l.meet(a, l.join(a, b)), a);
                    assert_eq!(l.join(a, l.meet(a, b)), a);
                    assert_eq!(l.leq(a, b), l.meet(a, b) == a);
                    for c in 0..n {
                        assert_eq!(l.meet(l.meet(a, b), c), l.meet(a, l.meet(b, c)));
                        assert_eq!(l.join(l.join(a, b), c), l.join(a, l.join(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn rejects_cycles_and_unlatticed_orders() {
        assert!(matches!(
            Lattice::from_order_pairs(2, &[(0, 1), (1, 0)]),
            Err(Error::NotAPartialOrder(_))
        ));
        // Two incomparable upper bounds for {1, 2} and no least one.
        let bowtie = Lattice::from_order_pairs(
            6,
            &[
                (0, 1),
                (0, 2),
                (1, 3),
                (2, 3),
                (1, 4),
                (2, 4),
                (3, 5),
                (4, 5),
            ],
        );
        assert!(matches!(bowtie, Err(Error::NotALattice(_))));
        assert!(matches!(
            Lattice::from_leq_matrix(0, vec![]),
            Err(Error::NotBounded)
        ));
    }

    #[test]
    fn filters_and_ideals_of_small_lattices() {
        let c2 = Lattice::chain(2);
        let filters = enumerate_filters(&c2).unwrap();
        assert_eq!(
            filters,
            vec![IndexSet::from_iter([1]), IndexSet::from_iter([0, 1])]
        );
        let ideals = enumerate_ideals(&c2).unwrap();
        assert_eq!(
            ideals,
            vec![IndexSet::from_iter([0]), IndexSet::from_iter([0, 1])]
        );

        let m3 = Lattice::diamond(3);
        let filters = enumerate_filters(&m3).unwrap();
        assert_eq!(filters.len(), 5);
        for f in &filters {
            // Every filter of a finite lattice is a principal upset.
            let generator = m3.meet_all(f.iter());
            assert_eq!(*f, m3.upset(generator));
        }
    }

    #[test]
    fn filters_are_principal_and_antitone_in_the_generator() {
        for l in [
            Lattice::chain(4),
            Lattice::diamond(3),
            Lattice::pentagon(),
            Lattice::boolean(3).unwrap(),
        ] {
            let filters = enumerate_filters(&l).unwrap();
            assert_eq!(filters.len(), l.size());
            for a in 0..l.size() {
                for b in 0..l.size() {
                    // a <= b iff upset(b) included in upset(a).
                    assert_eq!(l.leq(a, b), l.upset(b).is_subset(l.upset(a)));
                }
            }
        }
    }

    #[test]
    fn validator_accepts_min_on_chain() {
        let c3 = Lattice::chain(3);
        let table: Vec<usize> = (0..3).flat_map(|a| (0..3).map(move |b| a.min(b))).collect();
        let op = NormalOperator::new(
            "min",
            DistributionType::new(vec![Sort::One, Sort::One], Sort::One),
            table,
        );
        let report = validate_normal_operator(&c3, &op).unwrap();
        assert!(report.accepted(), "{report:?}");
        // Cross-check the distribution law against the direct statement.
        for x in 0..3 {
            for y in 0..3 {
                for z in 0..3 {
                    assert_eq!(x.min(c3.join(y, z)), c3.join(x.min(y), x.min(z)));
                }
            }
        }
    }

    #[test]
    fn validator_accepts_godel_residuum() {
        let exp = flew_chain(3, FlewKind::Godel).unwrap();
        let imp = &exp.operators[1];
        let report = validate_normal_operator(&exp.lattice, imp).unwrap();
        assert!(report.accepted(), "{report:?}");
    }

    #[test]
    fn validator_rejects_identity_declared_dual() {
        let c2 = Lattice::chain(2);
        let op = NormalOperator::new(
            "id",
            DistributionType::new(vec![Sort::Dual], Sort::One),
            vec![0, 1],
        );
        let report = validate_normal_operator(&c2, &op).unwrap();
        assert!(!report.accepted());
        assert_eq!(report.failing_places(), vec![1]);
    }

    #[test]
    fn validator_agrees_with_independent_characterization() {
        // Acceptance decomposed the other way round: sorted monotonicity,
        // one-sided subdistribution (the other side follows from
        // monotonicity), and zero preservation.
        fn oracle(l: &Lattice, op: &NormalOperator) -> bool {
            let size = l.size();
            let n = op.arity();
            (0..n).all(|j| {
                let arg = op.dtype.args[j];
                let out = op.dtype.out;
                Tuples::new(size, n - 1).all(|rest| {
                    let mut args = rest.clone();
                    args.insert(j, 0);
                    let mut at = |v: usize| {
                        args[j] = v;
                        op.apply(size, &args)
                    };
                    let zero = at(l.sorted_zero(arg)) == l.sorted_zero(out);
                    let mono_and_sub = (0..size).all(|x| {
                        (0..size).all(|y| {
                            let mono = !l.sorted_leq(arg, x, y) || l.sorted_leq(out, at(x), at(y));
                            let joined = at(l.sorted_join(arg, x, y));
                            let sub = l.sorted_leq(out, joined, l.sorted_join(out, at(x), at(y)));
                            mono && sub
                        })
                    });
                    zero && mono_and_sub
                })
            })
        }

        let c3 = Lattice::chain(3);
        for args in [Sort::One, Sort::Dual] {
            for out in [Sort::One, Sort::Dual] {
                let dtype = DistributionType::new(vec![args], out);
                for table in Tuples::new(3, 3) {
                    let op = NormalOperator::new("t", dtype.clone(), table);
                    assert_eq!(
                        validate_normal_operator(&c3, &op).unwrap().accepted(),
                        oracle(&c3, &op),
                        "{op:?}"
                    );
                }
            }
        }
        let c2 = Lattice::chain(2);
        for bits in 0..(1u32 << 3) {
            let dtype = DistributionType::new(
                vec![
                    if bits & 1 == 0 { Sort::One } else { Sort::Dual },
                    if bits & 2 == 0 { Sort::One } else { Sort::Dual },
                ],
                if bits & 4 == 0 { Sort::One } else { Sort::Dual },
            );
            for table in Tuples::new(2, 4) {
                let op = NormalOperator::new("t", dtype.clone(), table);
                assert_eq!(
                    validate_normal_operator(&c2, &op).unwrap().accepted(),
                    oracle(&c2, &op),
                    "{op:?}"
                );
            }
        }
    }

    #[test]
    fn validator_flags_arity_mismatch() {
        let c2 = Lattice::chain(2);
        let op = NormalOperator::new(
            "broken",
            DistributionType::new(vec![Sort::One], Sort::One),
            vec![0, 1, 1],
        );
        assert!(matches!(
            validate_normal_operator(&c2, &op),
            Err(Error::ArityMismatch(_))
        ));
    }

    #[test]
    fn nullary_operators_are_vacuously_normal() {
        let c3 = Lattice::chain(3);
        let op = NormalOperator::new("unit", DistributionType::new(vec![], Sort::One), vec![2]);
        let report = validate_normal_operator(&c3, &op).unwrap();
        assert!(report.accepted());
        assert_eq!(op.apply(3, &[]), 2);
    }

    #[test]
    fn flew_chain_tables() {
        let g2 = flew_chain(2, FlewKind::Godel).unwrap();
        // On the two-chain the product is meet and imp is classical implication.
        assert_eq!(g2.operators[0].table, vec![0, 0, 0, 1]);
        assert_eq!(g2.operators[1].table, vec![1, 1, 0, 1]);

        let g3 = flew_chain(3, FlewKind::Godel).unwrap();
        assert_eq!(g3.operators[0].apply(3, &[1, 1]), 1);
        assert_eq!(g3.operators[1].apply(3, &[1, 0]), 0);

        let l3 = flew_chain(3, FlewKind::Lukasiewicz).unwrap();
        assert_eq!(l3.operators[0].apply(3, &[1, 1]), 0);

        assert!(matches!(
            flew_chain(1, FlewKind::Godel),
            Err(Error::BadSize(_))
        ));
    }

    #[test]
    fn flew_chains_satisfy_residuation() {
        for kind in [FlewKind::Godel, FlewKind::Lukasiewicz] {
            for n in 2..=6 {
                let exp = flew_chain(n, kind).unwrap();
                let (circ, imp) = (&exp.operators[0], &exp.operators[1]);
                for a in 0..n {
                    for b in 0..n {
                        for c in 0..n {
                            let prod_le = exp.lattice.leq(circ.apply(n, &[a, c]), b);
                            let res_le = exp.lattice.leq(c, imp.apply(n, &[a, b]));
                            assert_eq!(prod_le, res_le, "kind {kind:?} n {n} a {a} b {b} c {c}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn demorgan_chain_is_normal_both_ways() {
        let exp = demorgan_chain(3).unwrap();
        assert_eq!(exp.operators.len(), 2);
        for op in &exp.operators {
            assert!(validate_normal_operator(&exp.lattice, op)
                .unwrap()
                .accepted());
        }
    }
}
