//! Two-sorted frames and the Galois connection of their incidence relation.
//!
//! A polarity is a pair of carriers `X` (sort `1`) and `Y` (sort `d`) with an
//! incidence relation between them. Taking all points incident to every
//! member of a subset gives the two polar maps, an antitone Galois
//! connection; its fixed points are the stable (over `X`) and co-stable
//! (over `Y`) sets, each family a complete lattice under inclusion with
//! meets given by intersection and joins by closure of union.

use crate::error::Error;
use crate::guard;
use crate::lattice::{Lattice, Sort};
use crate::report::{Check, Report};
use crate::set::{IndexSet, MAX_CARRIER};
use crate::Result;

/// Carriers `X`, `Y` and an incidence relation between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Polarity {
    nx: usize,
    ny: usize,
    /// For each `x`, the set of incident `y`.
    rows: Vec<IndexSet>,
    /// For each `y`, the set of incident `x`.
    cols: Vec<IndexSet>,
}

impl Polarity {
    pub fn new(nx: usize, ny: usize, incidence: &[(usize, usize)]) -> Result<Polarity> {
        if nx > MAX_CARRIER || ny > MAX_CARRIER {
            return Err(Error::BadSize(format!(
                "carriers {nx}x{ny} exceed {MAX_CARRIER}"
            )));
        }
        let mut rows = vec![IndexSet::EMPTY; nx];
        let mut cols = vec![IndexSet::EMPTY; ny];
        for &(x, y) in incidence {
            if x >= nx || y >= ny {
                return Err(Error::IndexOutOfRange(format!(
                    "incidence pair ({x},{y}) outside {nx}x{ny}"
                )));
            }
            rows[x] = rows[x].with(y);
            cols[y] = cols[y].with(x);
        }
        Ok(Polarity { nx, ny, rows, cols })
    }

    /// Carrier size for a sort (`1` is `X`, `d` is `Y`).
    pub fn carrier_size(&self, sort: Sort) -> usize {
        match sort {
            Sort::One => self.nx,
            Sort::Dual => self.ny,
        }
    }

    /// The full carrier of a sort.
    pub fn carrier(&self, sort: Sort) -> IndexSet {
        IndexSet::full(self.carrier_size(sort))
    }

    pub fn incident(&self, x: usize, y: usize) -> bool {
        self.rows[x].contains(y)
    }

    /// Incidence between two points of opposite sorts: `u | v`.
    pub fn incident_sorted(&self, u_sort: Sort, u: usize, v: usize) -> bool {
        match u_sort {
            Sort::One => self.incident(u, v),
            Sort::Dual => self.incident(v, u),
        }
    }

    /// All incidence pairs `(x, y)`, lexicographically.
    pub fn incidence_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.nx {
            for y in self.rows[x].iter() {
                out.push((x, y));
            }
        }
        out
    }

    /// The polar of a subset: all opposite-sort points incident to every
    /// member. The polar of the empty set is the full opposite carrier.
    pub fn polar(&self, sort: Sort, set: IndexSet) -> IndexSet {
        let (lines, acc0) = match sort {
            Sort::One => (&self.rows, self.carrier(Sort::Dual)),
            Sort::Dual => (&self.cols, self.carrier(Sort::One)),
        };
        set.iter().fold(acc0, |acc, i| acc.inter(lines[i]))
    }

    /// Range-checked polar, for inputs that come from outside.
    pub fn polar_checked(&self, sort: Sort, set: IndexSet) -> Result<IndexSet> {
        if !set.is_subset(self.carrier(sort)) {
            return Err(Error::IndexOutOfRange(format!(
                "set {set} not within carrier of sort {sort}"
            )));
        }
        Ok(self.polar(sort, set))
    }

    /// Double polar: the least Galois set of the same sort containing `set`.
    pub fn closure_mask(&self, sort: Sort, set: IndexSet) -> IndexSet {
        self.polar(sort.bar(), self.polar(sort, set))
    }

    pub fn is_stable(&self, sort: Sort, set: IndexSet) -> bool {
        self.closure_mask(sort, set) == set
    }

    /// Closure packaged as a [`GaloisSet`].
    pub fn closure(&self, sort: Sort, set: IndexSet) -> Result<GaloisSet> {
        if !set.is_subset(self.carrier(sort)) {
            return Err(Error::IndexOutOfRange(format!(
                "set {set} not within carrier of sort {sort}"
            )));
        }
        Ok(GaloisSet {
            sort,
            members: self.closure_mask(sort, set),
        })
    }

    /// The least Galois set of a sort (closure of the empty set).
    pub fn bottom_galois(&self, sort: Sort) -> GaloisSet {
        GaloisSet {
            sort,
            members: self.closure_mask(sort, IndexSet::EMPTY),
        }
    }

    /// The full carrier as a Galois set.
    pub fn top_galois(&self, sort: Sort) -> GaloisSet {
        GaloisSet {
            sort,
            members: self.carrier(sort),
        }
    }
}

/// A closure-fixed subset of one carrier, tagged with its sort.
///
/// Values are only handed out by operations that guarantee stability, so a
/// `GaloisSet` is closure-fixed by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GaloisSet {
    sort: Sort,
    members: IndexSet,
}

impl GaloisSet {
    /// Wrap a set after verifying it is closure-fixed.
    pub fn checked(p: &Polarity, sort: Sort, members: IndexSet) -> Result<GaloisSet> {
        if !members.is_subset(p.carrier(sort)) {
            return Err(Error::IndexOutOfRange(format!(
                "set {members} not within carrier of sort {sort}"
            )));
        }
        if !p.is_stable(sort, members) {
            return Err(Error::NotGalois(format!(
                "{members} of sort {sort} closes to {}",
                p.closure_mask(sort, members)
            )));
        }
        Ok(GaloisSet { sort, members })
    }

    pub fn sort(&self) -> Sort {
        self.sort
    }

    pub fn members(&self) -> IndexSet {
        self.members
    }

    /// The polar, itself always a Galois set of the opposite sort.
    pub fn polar(&self, p: &Polarity) -> GaloisSet {
        GaloisSet {
            sort: self.sort.bar(),
            members: p.polar(self.sort, self.members),
        }
    }
}

/// The points of one sort under `u <= w` iff every point incident to `u`'s
/// side... concretely: polar of `{u}` included in polar of `{w}`.
#[derive(Debug, Clone)]
pub struct Preorder {
    pub n: usize,
    le: Vec<bool>,
}

impl Preorder {
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.le[a * self.n + b]
    }

    pub fn is_antisymmetric(&self) -> bool {
        for a in 0..self.n {
            for b in 0..self.n {
                if a != b && self.le(a, b) && self.le(b, a) {
                    return false;
                }
            }
        }
        true
    }
}

/// The induced preorder on a carrier: `u` precedes `w` iff the polar of
/// `{u}` is included in the polar of `{w}`.
pub fn preorder(p: &Polarity, sort: Sort) -> Preorder {
    let n = p.carrier_size(sort);
    let mut le = vec![false; n * n];
    for a in 0..n {
        let pa = p.polar(sort, IndexSet::singleton(a));
        for b in 0..n {
            let pb = p.polar(sort, IndexSet::singleton(b));
            le[a * n + b] = pa.is_subset(pb);
        }
    }
    Preorder { n, le }
}

/// A frame is separated when both induced preorders are partial orders.
pub fn is_separated(p: &Polarity) -> bool {
    preorder(p, Sort::One).is_antisymmetric() && preorder(p, Sort::Dual).is_antisymmetric()
}

/// The principal closed element of a point: closure of the singleton, which
/// coincides with the preorder-upset of the point.
pub fn closed_element(p: &Polarity, sort: Sort, u: usize) -> Result<GaloisSet> {
    if u >= p.carrier_size(sort) {
        return Err(Error::IndexOutOfRange(format!("point {u} of sort {sort}")));
    }
    p.closure(sort, IndexSet::singleton(u))
}

/// The open element determined by a point of the opposite sort: the polar of
/// the singleton `{v}`.
pub fn open_element(p: &Polarity, v_sort: Sort, v: usize) -> Result<GaloisSet> {
    if v >= p.carrier_size(v_sort) {
        return Err(Error::IndexOutOfRange(format!(
            "point {v} of sort {v_sort}"
        )));
    }
    Ok(GaloisSet {
        sort: v_sort.bar(),
        members: p.polar(v_sort, IndexSet::singleton(v)),
    })
}

/// If `g` is a closed element `closure({u})` that is also open with an
/// incident witness `v`, return such a pair `(u, v)`.
pub fn clopen_witness(p: &Polarity, g: &GaloisSet) -> Option<(usize, usize)> {
    let sort = g.sort();
    for u in 0..p.carrier_size(sort) {
        if p.closure_mask(sort, IndexSet::singleton(u)) != g.members() {
            continue;
        }
        for v in 0..p.carrier_size(sort.bar()) {
            if p.incident_sorted(sort, u, v)
                && p.polar(sort.bar(), IndexSet::singleton(v)) == g.members()
            {
                return Some((u, v));
            }
        }
    }
    None
}

pub fn is_clopen(p: &Polarity, g: &GaloisSet) -> bool {
    clopen_witness(p, g).is_some()
}

/// All Galois sets of one sort, in ascending bitmask order.
#[derive(Debug, Clone)]
pub struct StableLattice {
    pub sort: Sort,
    pub sets: Vec<IndexSet>,
}

impl StableLattice {
    pub fn len(&self) -> usize {
        self.sets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.is_empty()
    }

    /// Position of a member set, if it is one.
    pub fn index_of(&self, set: IndexSet) -> Option<usize> {
        self.sets.binary_search(&set).ok()
    }

    pub fn galois(&self, i: usize) -> GaloisSet {
        GaloisSet {
            sort: self.sort,
            members: self.sets[i],
        }
    }

    /// The family as an abstract lattice under inclusion.
    pub fn to_lattice(&self) -> Result<Lattice> {
        let n = self.sets.len();
        let mut leq = vec![false; n * n];
        for (i, a) in self.sets.iter().enumerate() {
            for (j, b) in self.sets.iter().enumerate() {
                leq[i * n + j] = a.is_subset(*b);
            }
        }
        Lattice::from_leq_matrix(n, leq)
    }
}

/// Enumerate every closure-fixed subset of one carrier.
///
/// Small carriers filter the full powerset; larger ones intersect the open
/// elements instead, which is output-sensitive. The two paths agree.
pub fn all_stable_sets(p: &Polarity, sort: Sort) -> StableLattice {
    let n = p.carrier_size(sort);
    let sets = if n <= guard::limit(guard::POWERSET_DEFAULT) {
        stable_sets_powerset(p, sort)
    } else {
        stable_sets_by_intersection(p, sort)
    };
    StableLattice { sort, sets }
}

fn stable_sets_powerset(p: &Polarity, sort: Sort) -> Vec<IndexSet> {
    IndexSet::subsets(p.carrier_size(sort))
        .filter(|&s| p.is_stable(sort, s))
        .collect()
}

fn stable_sets_by_intersection(p: &Polarity, sort: Sort) -> Vec<IndexSet> {
    // Galois sets are exactly the intersections of open elements, the empty
    // intersection (the full carrier) included.
    let mut family: Vec<IndexSet> = vec![p.carrier(sort)];
    let opposite = sort.bar();
    for v in 0..p.carrier_size(opposite) {
        let open = p.polar(opposite, IndexSet::singleton(v));
        if !family.contains(&open) {
            family.push(open);
        }
    }
    let mut frontier = family.clone();
    while let Some(a) = frontier.pop() {
        let mut fresh = Vec::new();
        for &b in &family {
            let c = a.inter(b);
            if !family.contains(&c) && !fresh.contains(&c) {
                fresh.push(c);
            }
        }
        family.extend(fresh.iter().copied());
        frontier.extend(fresh);
    }
    family.sort();
    family
}

/// The disjoint union of the carriers, ordered by inclusion of the stable
/// sets the points stand for: `X`-points by their principal closed element,
/// `Y`-points by their open element. Points of `X` come first.
#[derive(Debug, Clone)]
pub struct ZOrder {
    pub nx: usize,
    pub ny: usize,
    le: Vec<bool>,
}

impl ZOrder {
    pub fn len(&self) -> usize {
        self.nx + self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Order between combined indices (`X` points are `0..nx`, `Y` points
    /// follow).
    pub fn le(&self, a: usize, b: usize) -> bool {
        self.le[a * self.len() + b]
    }

    pub fn le_xy(&self, x: usize, y: usize) -> bool {
        self.le(x, self.nx + y)
    }

    pub fn le_yx(&self, y: usize, x: usize) -> bool {
        self.le(self.nx + y, x)
    }

    pub fn le_xx(&self, x: usize, z: usize) -> bool {
        self.le(x, z)
    }

    pub fn le_yy(&self, y: usize, v: usize) -> bool {
        self.le(self.nx + y, self.nx + v)
    }
}

/// Build the combined order of a separated frame.
///
/// Same-sort antisymmetry is exactly separation; a cross-sort pair may be
/// below each other, which marks the two points as one clopen element.
pub fn z_order(p: &Polarity) -> Result<ZOrder> {
    if !is_separated(p) {
        return Err(Error::NotSeparated);
    }
    let n = p.nx + p.ny;
    let assoc: Vec<IndexSet> = (0..p.nx)
        .map(|x| p.closure_mask(Sort::One, IndexSet::singleton(x)))
        .chain((0..p.ny).map(|y| p.polar(Sort::Dual, IndexSet::singleton(y))))
        .collect();
    let mut le = vec![false; n * n];
    for a in 0..n {
        for b in 0..n {
            le[a * n + b] = assoc[a].is_subset(assoc[b]);
        }
    }
    let z = ZOrder {
        nx: p.nx,
        ny: p.ny,
        le,
    };
    // Cross-sort comparisons collapse to incidence.
    for x in 0..p.nx {
        for y in 0..p.ny {
            debug_assert_eq!(z.le_xy(x, y), p.incident(x, y));
        }
    }
    Ok(z)
}

/// The two irreducibility conditions: every `X`-point misses some `Y`-point
/// that all strictly lower `X`-points hit, and dually.
pub fn is_reduced(p: &Polarity) -> Result<bool> {
    let z = z_order(p)?;
    let cond1 = (0..p.nx).all(|x| {
        (0..p.ny).any(|y| {
            !z.le_xy(x, y)
                && (0..p.nx).all(|w| {
                    if z.le_xx(w, x) && w != x {
                        z.le_xy(w, y)
                    } else {
                        true
                    }
                })
        })
    });
    let cond2 = (0..p.ny).all(|y| {
        (0..p.nx).any(|x| {
            !z.le_xy(x, y)
                && (0..p.ny).all(|v| {
                    if z.le_yy(y, v) && y != v {
                        z.le_xy(x, v)
                    } else {
                        true
                    }
                })
        })
    });
    Ok(cond1 && cond2)
}

/// Join of a family of same-sort Galois sets: closure of the union.
pub fn galois_join(
    p: &Polarity,
    sort: Sort,
    members: impl IntoIterator<Item = IndexSet>,
) -> IndexSet {
    let union = members.into_iter().fold(IndexSet::EMPTY, IndexSet::union);
    p.closure_mask(sort, union)
}

/// Verify that the stable-set lattice of a separated frame completes the
/// combined point order: the point images are stable, the embedding is an
/// order embedding, closed elements are join-dense, open elements are
/// meet-dense, and meets/joins agree with a brute-force bound search.
pub fn dm_completion_check(p: &Polarity) -> Result<Report> {
    let z = z_order(p)?;
    let mut report = Report::new("dedekind-macneille-completion");

    for sort in [Sort::One, Sort::Dual] {
        let label = match sort {
            Sort::One => "left",
            Sort::Dual => "right",
        };
        let stable = all_stable_sets(p, sort);

        // Point images land in the stable lattice.
        let mut witness = None;
        let assoc: Vec<IndexSet> = (0..p.carrier_size(sort))
            .map(|u| p.closure_mask(sort, IndexSet::singleton(u)))
            .chain(
                (0..p.carrier_size(sort.bar()))
                    .map(|v| p.polar(sort.bar(), IndexSet::singleton(v))),
            )
            .collect();
        for (i, s) in assoc.iter().enumerate() {
            if stable.index_of(*s).is_none() {
                witness = Some(format!("point {i} maps to non-stable {s}"));
                break;
            }
        }
        report.push(Check::leaf(format!("point-images-stable-{label}"), witness));

        // Join-density from the carrier of this sort, meet-density from the
        // other: every Galois set is the join of the closed elements of its
        // points and the intersection of the open elements above it.
        let mut join_witness = None;
        let mut meet_witness = None;
        for &g in &stable.sets {
            let join = galois_join(
                p,
                sort,
                g.iter()
                    .map(|u| p.closure_mask(sort, IndexSet::singleton(u))),
            );
            if join != g {
                join_witness = Some(format!("{g} is not the join of its closed points ({join})"));
            }
            let polar = p.polar(sort, g);
            let meet = polar.iter().fold(p.carrier(sort), |acc, v| {
                acc.inter(p.polar(sort.bar(), IndexSet::singleton(v)))
            });
            if meet != g {
                meet_witness = Some(format!("{g} is not the meet of its open covers ({meet})"));
            }
        }
        report.push(Check::leaf(
            format!("closed-join-dense-{label}"),
            join_witness,
        ));
        report.push(Check::leaf(
            format!("open-meet-dense-{label}"),
            meet_witness,
        ));

        // Complete-lattice structure against a brute-force oracle.
        report.push(complete_lattice_check(p, &stable, label));
    }

    // The combined order embeds: comparisons coincide with containment of
    // the associated stable sets (same and cross sort).
    let assoc: Vec<IndexSet> = (0..p.nx)
        .map(|x| p.closure_mask(Sort::One, IndexSet::singleton(x)))
        .chain((0..p.ny).map(|y| p.polar(Sort::Dual, IndexSet::singleton(y))))
        .collect();
    let mut emb_witness = None;
    'emb: for a in 0..z.len() {
        for b in 0..z.len() {
            if z.le(a, b) != assoc[a].is_subset(assoc[b]) {
                emb_witness = Some(format!("points {a},{b} disagree with set containment"));
                break 'emb;
            }
        }
    }
    report.push(Check::leaf("order-embedding", emb_witness));

    report.sort_by_name();
    Ok(report)
}

/// Meets must be intersections and joins closures of unions, matching the
/// greatest-lower/least-upper bounds found by brute force over the family.
fn complete_lattice_check(p: &Polarity, stable: &StableLattice, label: &str) -> Check {
    let n = stable.len();
    let mut witness = None;
    let family_guard = guard::limit(guard::FAMILY_DEFAULT);
    if n <= family_guard {
        'fam: for fam in IndexSet::subsets(n) {
            let members: Vec<IndexSet> = fam.iter().map(|i| stable.sets[i]).collect();
            let meet = members
                .iter()
                .fold(p.carrier(stable.sort), |acc, s| acc.inter(*s));
            let join = galois_join(p, stable.sort, members.iter().copied());
            // Oracle: scan the family for the actual bounds.
            let glb = stable
                .sets
                .iter()
                .filter(|c| members.iter().all(|m| c.is_subset(*m)))
                .max_by_key(|c| c.len())
                .copied();
            let lub = stable
                .sets
                .iter()
                .filter(|c| members.iter().all(|m| m.is_subset(**c)))
                .min_by_key(|c| c.len())
                .copied();
            if stable.index_of(meet).is_none() || glb != Some(meet) {
                witness = Some(format!("meet of family {fam} is not the intersection"));
                break 'fam;
            }
            if stable.index_of(join).is_none() || lub != Some(join) {
                witness = Some(format!("join of family {fam} is not the closed union"));
                break 'fam;
            }
        }
    } else {
        // Too many members for full family enumeration; check pairs.
        'pairs: for i in 0..n {
            for j in 0..n {
                let meet = stable.sets[i].inter(stable.sets[j]);
                let join = galois_join(p, stable.sort, [stable.sets[i], stable.sets[j]]);
                if stable.index_of(meet).is_none() || stable.index_of(join).is_none() {
                    witness = Some(format!("pair {i},{j} escapes the family"));
                    break 'pairs;
                }
            }
        }
    }
    Check::leaf(format!("complete-lattice-{label}"), witness)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Two points per side, incidence on the diagonal.
    fn p2() -> Polarity {
        Polarity::new(2, 2, &[(0, 0), (1, 1)]).unwrap()
    }

    /// One point per side, empty incidence.
    fn p1() -> Polarity {
        Polarity::new(1, 1, &[]).unwrap()
    }

    /// The filter/ideal polarity of the two-chain, written out by hand:
    /// X = {0: the top filter, 1: the improper filter},
    /// Y = {0: the bottom ideal, 1: the improper ideal}.
    fn chain2_frame() -> Polarity {
        Polarity::new(2, 2, &[(0, 1), (1, 0), (1, 1)]).unwrap()
    }

    #[test]
    fn polar_maps() {
        let p = p2();
        assert_eq!(p.polar(Sort::One, IndexSet::EMPTY), IndexSet::full(2));
        assert_eq!(
            p.polar(Sort::One, IndexSet::singleton(0)),
            IndexSet::singleton(0)
        );
        assert_eq!(p.polar(Sort::One, IndexSet::full(2)), IndexSet::EMPTY);
        assert!(p
            .polar_checked(Sort::One, IndexSet::from_iter([5]))
            .is_err());
    }

    #[test]
    fn closure_examples() {
        let p = p2();
        let c = p.closure(Sort::One, IndexSet::singleton(0)).unwrap();
        assert_eq!(c.members(), IndexSet::singleton(0));
        // Idempotence.
        for s in IndexSet::subsets(2) {
            let once = p.closure_mask(Sort::One, s);
            assert_eq!(p.closure_mask(Sort::One, once), once);
            assert!(s.is_subset(once));
        }
        // In the chain frame the empty closure is the improper-filter point.
        let cf = chain2_frame();
        assert_eq!(
            cf.closure_mask(Sort::One, IndexSet::EMPTY),
            IndexSet::singleton(1)
        );
    }

    #[test]
    fn galois_connection_law_small() {
        let frames = [
            p2(),
            p1(),
            chain2_frame(),
            Polarity::new(3, 2, &[(0, 0), (2, 1)]).unwrap(),
        ];
        for p in &frames {
            for u in IndexSet::subsets(p.carrier_size(Sort::One)) {
                for v in IndexSet::subsets(p.carrier_size(Sort::Dual)) {
                    let lhs = v.is_subset(p.polar(Sort::One, u));
                    let rhs = u.is_subset(p.polar(Sort::Dual, v));
                    assert_eq!(lhs, rhs, "galois law fails at {u}, {v}");
                }
            }
        }
    }

    #[test]
    fn stable_set_families() {
        let p = p2();
        let g = all_stable_sets(&p, Sort::One);
        assert_eq!(g.sets.len(), 4);
        assert_eq!(
            g.sets,
            vec![
                IndexSet::EMPTY,
                IndexSet::singleton(0),
                IndexSet::singleton(1),
                IndexSet::full(2)
            ]
        );

        let g1 = all_stable_sets(&p1(), Sort::One);
        assert_eq!(g1.sets, vec![IndexSet::EMPTY, IndexSet::singleton(0)]);

        let gc = all_stable_sets(&chain2_frame(), Sort::One);
        assert_eq!(gc.sets, vec![IndexSet::singleton(1), IndexSet::full(2)]);
        let lat = gc.to_lattice().unwrap();
        assert_eq!(lat.size(), 2);
    }

    #[test]
    fn enumeration_paths_agree() {
        let frames = [
            p2(),
            p1(),
            chain2_frame(),
            Polarity::new(4, 3, &[(0, 0), (0, 2), (1, 1), (3, 0), (3, 1)]).unwrap(),
        ];
        for p in &frames {
            for sort in [Sort::One, Sort::Dual] {
                assert_eq!(
                    stable_sets_powerset(p, sort),
                    stable_sets_by_intersection(p, sort)
                );
            }
        }
    }

    #[test]
    fn preorder_and_separation() {
        let p = p2();
        let pre = preorder(&p, Sort::One);
        assert!(pre.le(0, 0));
        assert!(!pre.le(0, 1));
        assert!(is_separated(&p));

        // Duplicate rows collapse the preorder.
        let dup = Polarity::new(2, 1, &[(0, 0), (1, 0)]).unwrap();
        let pre = preorder(&dup, Sort::One);
        assert!(pre.le(0, 1) && pre.le(1, 0));
        assert!(!is_separated(&dup));
        assert!(matches!(is_reduced(&dup), Err(Error::NotSeparated)));
    }

    #[test]
    fn reducedness() {
        assert!(is_reduced(&p2()).unwrap());
    }

    #[test]
    fn z_order_cases() {
        let p = p2();
        let z = z_order(&p).unwrap();
        assert!(z.le_xy(0, 0));
        assert!(!z.le_xy(0, 1));
        assert!(z.le_yx(0, 0));
        // Case four is equivalent to its quantifier form.
        for y in 0..2 {
            for x in 0..2 {
                let quantified = (0..2).all(|u| {
                    (0..2).all(|w| {
                        if p.incident(u, y) && p.incident(x, w) {
                            p.incident(u, w)
                        } else {
                            true
                        }
                    })
                });
                assert_eq!(z.le_yx(y, x), quantified);
            }
        }
        // Transitivity over the whole combined carrier.
        let n = z.len();
        for a in 0..n {
            assert!(z.le(a, a));
            for b in 0..n {
                for c in 0..n {
                    if z.le(a, b) && z.le(b, c) {
                        assert!(z.le(a, c));
                    }
                }
            }
        }
    }

    #[test]
    fn z_order_merges_clopen_pairs_across_sorts_only() {
        // One point each side, total incidence: the two points stand for the
        // same stable set, so they sit below each other across sorts.
        let p = Polarity::new(1, 1, &[(0, 0)]).unwrap();
        let z = z_order(&p).unwrap();
        assert!(z.le_xy(0, 0));
        assert!(z.le_yx(0, 0));
        // Same-sort antisymmetry still holds.
        assert!(z.le_xx(0, 0) && z.le_yy(0, 0));
    }

    #[test]
    fn closed_open_clopen() {
        let p = p2();
        assert_eq!(
            closed_element(&p, Sort::One, 0).unwrap().members(),
            IndexSet::singleton(0)
        );
        assert_eq!(open_element(&p, Sort::Dual, 0).unwrap().sort(), Sort::One);

        // Empty incidence: the closed point is not open via any witness.
        let lone = p1();
        let g = closed_element(&lone, Sort::One, 0).unwrap();
        assert_eq!(g.members(), IndexSet::singleton(0));
        assert!(!is_clopen(&lone, &g));

        // In the chain frame the closure of the top filter is clopen with
        // the improper ideal as witness.
        let cf = chain2_frame();
        let g = closed_element(&cf, Sort::One, 0).unwrap();
        assert_eq!(g.members(), IndexSet::full(2));
        assert_eq!(clopen_witness(&cf, &g), Some((0, 1)));
    }

    #[test]
    fn dm_check_passes_on_fixtures() {
        for p in [p2(), p1(), chain2_frame()] {
            let report = dm_completion_check(&p).unwrap();
            assert!(report.passed(), "failures: {:?}", report.failures());
        }
    }

    #[test]
    fn galois_set_checked_rejects_unstable() {
        let cf = chain2_frame();
        assert!(GaloisSet::checked(&cf, Sort::One, IndexSet::singleton(1)).is_ok());
        assert!(matches!(
            GaloisSet::checked(&cf, Sort::One, IndexSet::EMPTY),
            Err(Error::NotGalois(_))
        ));
    }
}
