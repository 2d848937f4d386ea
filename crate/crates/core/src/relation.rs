//! Sorted relations on a polarity and the operators they generate.
//!
//! An `(n+1)`-ary relation relates one output point to an n-tuple of
//! argument points, each coordinate living in the carrier its sort type
//! names. Unions of sections give the image operator of the relation; on
//! Galois sets its closure is the operator the relation models. When all
//! sections of the Galois dual relation are themselves Galois sets, that
//! operator distributes over arbitrary joins place by place, has a residual
//! at every place, and pairs with a conjugate relation. Each of these is
//! computed here explicitly so the equivalences can be checked exhaustively.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::Error;
use crate::guard;
use crate::lattice::{DistributionType, LatticeExpansion, NormalOperator, Sort, Tuples};
use crate::polarity::{all_stable_sets, GaloisSet, Polarity};
use crate::set::IndexSet;
use crate::Result;

/// Sort type of a relation: output sort first, then one sort per argument.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SortType {
    pub out: Sort,
    pub args: Vec<Sort>,
}

impl SortType {
    pub fn new(out: Sort, args: Vec<Sort>) -> SortType {
        SortType { out, args }
    }

    /// Number of argument places.
    pub fn arity(&self) -> usize {
        self.args.len()
    }

    /// Sort type of the Galois dual: output flipped, arguments kept.
    pub fn dual(&self) -> SortType {
        SortType {
            out: self.out.bar(),
            args: self.args.clone(),
        }
    }

    /// Sort type of the conjugate relation at place `k`: the output moves to
    /// place `k` flipped, and place `k`'s sort becomes the flipped output.
    pub fn conjugate(&self, k: usize) -> SortType {
        let mut args = self.args.clone();
        args[k] = self.out.bar();
        SortType {
            out: self.args[k].bar(),
            args,
        }
    }

    /// The distribution type of the operator this relation models.
    pub fn to_distribution(&self) -> DistributionType {
        DistributionType::new(self.args.clone(), self.out)
    }
}

impl fmt::Display for SortType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({};", self.out)?;
        for (j, s) in self.args.iter().enumerate() {
            if j > 0 {
                write!(f, " ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

/// An extensionally stored sorted relation: a set of `(out, args)` tuples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SortedRelation {
    pub name: String,
    stype: SortType,
    tuples: BTreeSet<(usize, Vec<usize>)>,
}

impl SortedRelation {
    pub fn new(
        p: &Polarity,
        name: impl Into<String>,
        stype: SortType,
        tuples: impl IntoIterator<Item = (usize, Vec<usize>)>,
    ) -> Result<SortedRelation> {
        let name = name.into();
        let mut set = BTreeSet::new();
        for (w, args) in tuples {
            if args.len() != stype.arity() {
                return Err(Error::SortMismatch(format!(
                    "relation {name}: tuple has {} arguments, sort type {stype} wants {}",
                    args.len(),
                    stype.arity()
                )));
            }
            if w >= p.carrier_size(stype.out) {
                return Err(Error::IndexOutOfRange(format!(
                    "relation {name}: output point {w} outside carrier of sort {}",
                    stype.out
                )));
            }
            for (j, &u) in args.iter().enumerate() {
                if u >= p.carrier_size(stype.args[j]) {
                    return Err(Error::IndexOutOfRange(format!(
                        "relation {name}: argument {u} at place {} outside carrier of sort {}",
                        j + 1,
                        stype.args[j]
                    )));
                }
            }
            set.insert((w, args));
        }
        Ok(SortedRelation {
            name,
            stype,
            tuples: set,
        })
    }

    pub fn empty(name: impl Into<String>, stype: SortType) -> SortedRelation {
        SortedRelation {
            name: name.into(),
            stype,
            tuples: BTreeSet::new(),
        }
    }

    pub fn stype(&self) -> &SortType {
        &self.stype
    }

    pub fn arity(&self) -> usize {
        self.stype.arity()
    }

    pub fn tuples(&self) -> impl Iterator<Item = &(usize, Vec<usize>)> {
        self.tuples.iter()
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    pub fn contains(&self, w: usize, args: &[usize]) -> bool {
        self.tuples.contains(&(w, args.to_vec()))
    }

    fn check_point_args(&self, p: &Polarity, args: &[usize]) -> Result<()> {
        if args.len() != self.arity() {
            return Err(Error::SortMismatch(format!(
                "expected {} arguments for {}, got {}",
                self.arity(),
                self.stype,
                args.len()
            )));
        }
        for (j, &u) in args.iter().enumerate() {
            if u >= p.carrier_size(self.stype.args[j]) {
                return Err(Error::IndexOutOfRange(format!(
                    "argument {u} at place {} outside carrier of sort {}",
                    j + 1,
                    self.stype.args[j]
                )));
            }
        }
        Ok(())
    }
}

/// An argument tuple with exactly one unfilled place.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HoleTuple {
    entries: Vec<Option<usize>>,
    hole: usize,
}

impl HoleTuple {
    pub fn new(entries: Vec<Option<usize>>) -> Result<HoleTuple> {
        let holes: Vec<usize> = entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.is_none())
            .map(|(i, _)| i)
            .collect();
        match holes.as_slice() {
            [k] => Ok(HoleTuple { entries, hole: *k }),
            _ => Err(Error::SortMismatch(format!(
                "tuple must have exactly one hole, has {}",
                holes.len()
            ))),
        }
    }

    /// Build from a full tuple by punching a hole at place `k`.
    pub fn punch(args: &[usize], k: usize) -> Result<HoleTuple> {
        if k >= args.len() {
            return Err(Error::IndexOutOfRange(format!(
                "hole {k} outside arity {}",
                args.len()
            )));
        }
        let entries = args
            .iter()
            .enumerate()
            .map(|(j, &u)| if j == k { None } else { Some(u) })
            .collect();
        Ok(HoleTuple { entries, hole: k })
    }

    pub fn hole_index(&self) -> usize {
        self.hole
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The full tuple with `v` plugged into the hole.
    pub fn fill(&self, v: usize) -> Vec<usize> {
        self.entries
            .iter()
            .enumerate()
            .map(|(j, e)| if j == self.hole { v } else { e.unwrap() })
            .collect()
    }
}

/// The full section determined by an argument tuple: all outputs related to it.
pub fn full_section(p: &Polarity, r: &SortedRelation, args: &[usize]) -> Result<IndexSet> {
    r.check_point_args(p, args)?;
    Ok(r.tuples
        .iter()
        .filter(|(_, a)| a == args)
        .map(|(w, _)| *w)
        .collect())
}

/// The section at the hole: all points that complete the tuple for output `w`.
pub fn hole_section(p: &Polarity, r: &SortedRelation, w: usize, t: &HoleTuple) -> Result<IndexSet> {
    if t.len() != r.arity() {
        return Err(Error::SortMismatch(format!(
            "hole tuple of length {} against arity {}",
            t.len(),
            r.arity()
        )));
    }
    if w >= p.carrier_size(r.stype.out) {
        return Err(Error::IndexOutOfRange(format!("output point {w}")));
    }
    let k = t.hole_index();
    let mut out = IndexSet::EMPTY;
    for v in 0..p.carrier_size(r.stype.args[k]) {
        if r.contains(w, &t.fill(v)) {
            out = out.with(v);
        }
    }
    Ok(out)
}

/// Tuples over the argument carriers of a sort list, lexicographically.
fn carrier_tuples(p: &Polarity, sorts: &[Sort]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &s in sorts {
        let n = p.carrier_size(s);
        let mut next = Vec::with_capacity(out.len() * n);
        for t in &out {
            for u in 0..n {
                let mut t2 = t.clone();
                t2.push(u);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// The Galois dual relation: every full section replaced by its polar.
pub fn galois_dual(p: &Polarity, r: &SortedRelation) -> SortedRelation {
    let stype = r.stype.dual();
    let mut tuples = BTreeSet::new();
    for args in carrier_tuples(p, &r.stype.args) {
        let section: IndexSet = r
            .tuples
            .iter()
            .filter(|(_, a)| *a == args)
            .map(|(w, _)| *w)
            .collect();
        let polar = p.polar(r.stype.out, section);
        for u in polar.iter() {
            tuples.insert((u, args.clone()));
        }
    }
    SortedRelation {
        name: format!("{}'", r.name),
        stype,
        tuples,
    }
}

/// Outcome of the section-stability test on the Galois dual.
#[derive(Debug, Clone)]
pub struct SectionStability {
    pub stable: bool,
    /// Description of the first offending section, if any.
    pub witness: Option<String>,
}

/// Check that every full section and every one-place section of the Galois
/// dual of `r` is a Galois set. This is the hypothesis under which the image
/// operator of `r` restricts to a completely additive operator on Galois sets.
pub fn sections_all_stable(p: &Polarity, r: &SortedRelation) -> SectionStability {
    let dual = galois_dual(p, r);
    let n = r.arity();

    for args in carrier_tuples(p, &dual.stype.args) {
        let section: IndexSet = dual
            .tuples
            .iter()
            .filter(|(_, a)| *a == args)
            .map(|(w, _)| *w)
            .collect();
        if !p.is_stable(dual.stype.out, section) {
            return SectionStability {
                stable: false,
                witness: Some(format!(
                    "full section at {args:?} = {section} is not stable"
                )),
            };
        }
    }

    for k in 0..n {
        let rest_sorts: Vec<Sort> = dual
            .stype
            .args
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .map(|(_, s)| *s)
            .collect();
        for rest in carrier_tuples(p, &rest_sorts) {
            let mut full = rest.clone();
            full.insert(k, 0);
            let hole = HoleTuple::punch(&full, k).expect("valid hole");
            for w in 0..p.carrier_size(dual.stype.out) {
                let section = hole_section(p, &dual, w, &hole).expect("well-sorted");
                if !p.is_stable(dual.stype.args[k], section) {
                    return SectionStability {
                        stable: false,
                        witness: Some(format!(
                            "section at output {w}, place {}, rest {rest:?} = {section} is not stable",
                            k + 1
                        )),
                    };
                }
            }
        }
    }
    SectionStability {
        stable: true,
        witness: None,
    }
}

fn check_subset_args(p: &Polarity, sorts: &[Sort], args: &[IndexSet]) -> Result<()> {
    if args.len() != sorts.len() {
        return Err(Error::SortMismatch(format!(
            "expected {} set arguments, got {}",
            sorts.len(),
            args.len()
        )));
    }
    for (j, (&s, &a)) in sorts.iter().zip(args.iter()).enumerate() {
        if !a.is_subset(p.carrier(s)) {
            return Err(Error::IndexOutOfRange(format!(
                "set {a} at place {} escapes carrier of sort {s}",
                j + 1
            )));
        }
    }
    Ok(())
}

fn check_galois_args(expected: &[Sort], args: &[GaloisSet]) -> Result<()> {
    if args.len() != expected.len() {
        return Err(Error::SortMismatch(format!(
            "expected {} Galois arguments, got {}",
            expected.len(),
            args.len()
        )));
    }
    for (j, (&s, a)) in expected.iter().zip(args.iter()).enumerate() {
        if a.sort() != s {
            return Err(Error::SortMismatch(format!(
                "argument at place {} has sort {}, expected {s}",
                j + 1,
                a.sort()
            )));
        }
    }
    Ok(())
}

/// The image operator: the union of all sections over tuples drawn from the
/// argument sets. Completely additive in every place and normal (an empty
/// argument gives the empty set).
pub fn image_operator(p: &Polarity, r: &SortedRelation, args: &[IndexSet]) -> Result<IndexSet> {
    check_subset_args(p, &r.stype.args, args)?;
    let mut out = IndexSet::EMPTY;
    for (w, t) in &r.tuples {
        if t.iter().zip(args.iter()).all(|(&u, a)| a.contains(u)) {
            out = out.with(*w);
        }
    }
    Ok(out)
}

/// The set-level residual at place `k`: the largest set that can replace
/// place `k` while keeping the image inside the target `args[k]`.
pub fn residual_sets(
    p: &Polarity,
    r: &SortedRelation,
    k: usize,
    args: &[IndexSet],
) -> Result<IndexSet> {
    if k >= r.arity() {
        return Err(Error::IndexOutOfRange(format!(
            "place {k} of arity {}",
            r.arity()
        )));
    }
    let mut sorts = r.stype.args.clone();
    sorts[k] = r.stype.out;
    check_subset_args(p, &sorts, args)?;
    let target = args[k];
    let mut out = p.carrier(r.stype.args[k]);
    for (w, t) in &r.tuples {
        let rest_in = t
            .iter()
            .zip(args.iter())
            .enumerate()
            .all(|(j, (&u, a))| j == k || a.contains(u));
        if rest_in && !target.contains(*w) {
            out = out.without(t[k]);
        }
    }
    Ok(out)
}

/// The closure of the image of Galois sets: the operator a relation models.
pub fn closed_image(p: &Polarity, r: &SortedRelation, args: &[GaloisSet]) -> Result<GaloisSet> {
    check_galois_args(&r.stype.args, args)?;
    let masks: Vec<IndexSet> = args.iter().map(|a| a.members()).collect();
    let image = image_operator(p, r, &masks)?;
    p.closure(r.stype.out, image)
}

/// The residual restricted to Galois sets, computed three equivalent ways:
/// as the union of all Galois sets whose image stays inside the target, as
/// the union of such principal closed elements, and pointwise. The forms
/// must agree and the result must be closure-fixed.
pub fn residual_galois(
    p: &Polarity,
    r: &SortedRelation,
    k: usize,
    args: &[GaloisSet],
) -> Result<GaloisSet> {
    if k >= r.arity() {
        return Err(Error::IndexOutOfRange(format!(
            "place {k} of arity {}",
            r.arity()
        )));
    }
    let mut sorts = r.stype.args.clone();
    sorts[k] = r.stype.out;
    check_galois_args(&sorts, args)?;
    let place_sort = r.stype.args[k];
    let target = args[k].members();
    let masks: Vec<IndexSet> = args.iter().map(|a| a.members()).collect();

    let image_with = |candidate: IndexSet| -> IndexSet {
        let mut m = masks.clone();
        m[k] = candidate;
        image_operator(p, r, &m).expect("validated above")
    };

    let mut by_galois = IndexSet::EMPTY;
    for f in all_stable_sets(p, place_sort).sets {
        if image_with(f).is_subset(target) {
            by_galois = by_galois.union(f);
        }
    }

    let mut by_closed = IndexSet::EMPTY;
    let mut pointwise = IndexSet::EMPTY;
    for u in 0..p.carrier_size(place_sort) {
        let principal = p.closure_mask(place_sort, IndexSet::singleton(u));
        if image_with(principal).is_subset(target) {
            by_closed = by_closed.union(principal);
            pointwise = pointwise.with(u);
        }
    }

    if by_galois != by_closed || by_closed != pointwise {
        return Err(Error::NotResiduated(format!(
            "defining forms disagree: {by_galois} / {by_closed} / {pointwise}"
        )));
    }
    if !p.is_stable(place_sort, by_galois) {
        return Err(Error::NotResiduated(format!(
            "residual {by_galois} is not closure-fixed (closes to {})",
            p.closure_mask(place_sort, by_galois)
        )));
    }
    GaloisSet::checked(p, place_sort, by_galois)
}

/// The conjugate operator at place `k`: the intersection of all Galois sets
/// `G` whose polar, fed into place `k`, keeps the image inside the polar of
/// the `k`-th argument. The argument at place `k` carries the flipped output
/// sort; the result carries the flipped sort of place `k`.
pub fn conjugate_operator(
    p: &Polarity,
    r: &SortedRelation,
    k: usize,
    args: &[GaloisSet],
) -> Result<GaloisSet> {
    if k >= r.arity() {
        return Err(Error::IndexOutOfRange(format!(
            "place {k} of arity {}",
            r.arity()
        )));
    }
    let ctype = r.stype.conjugate(k);
    check_galois_args(&ctype.args, args)?;
    let result_sort = ctype.out;
    let target = args[k].polar(p).members();
    let masks: Vec<IndexSet> = args.iter().map(|a| a.members()).collect();

    let mut out = p.carrier(result_sort);
    for g in all_stable_sets(p, result_sort).sets {
        let mut m = masks.clone();
        m[k] = p.polar(result_sort, g);
        let image = image_operator(p, r, &m)?;
        let closed = p.closure_mask(r.stype.out, image);
        if closed.is_subset(target) {
            out = out.inter(g);
        }
    }
    GaloisSet::checked(p, result_sort, out)
}

/// Derive the conjugate relation at place `k`: relate `w` to the tuple with
/// `v` at place `k` exactly when `w` lies in the polar of the dual relation's
/// section there. Requires all sections of the Galois dual to be stable.
pub fn conjugate_relation_from(
    p: &Polarity,
    r: &SortedRelation,
    k: usize,
) -> Result<SortedRelation> {
    if k >= r.arity() {
        return Err(Error::IndexOutOfRange(format!(
            "place {k} of arity {}",
            r.arity()
        )));
    }
    let stability = sections_all_stable(p, r);
    if !stability.stable {
        return Err(Error::SectionsNotStable(
            stability.witness.unwrap_or_default(),
        ));
    }
    let dual = galois_dual(p, r);
    let stype = r.stype.conjugate(k);
    let place_sort = r.stype.args[k];

    let rest_sorts: Vec<Sort> = r
        .stype
        .args
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != k)
        .map(|(_, s)| *s)
        .collect();
    let mut tuples = BTreeSet::new();
    for rest in carrier_tuples(p, &rest_sorts) {
        let mut full = rest.clone();
        full.insert(k, 0);
        let hole = HoleTuple::punch(&full, k)?;
        for v in 0..p.carrier_size(dual.stype.out) {
            let section = hole_section(p, &dual, v, &hole)?;
            let ws = p.polar(place_sort, section);
            for w in ws.iter() {
                let mut args = rest.clone();
                args.insert(k, v);
                tuples.insert((w, args));
            }
        }
    }
    Ok(SortedRelation {
        name: format!("{}^{}", r.name, k + 1),
        stype,
        tuples,
    })
}

/// All Galois tuples over a list of sorts (cartesian product of the stable
/// families), lexicographic in the family orders.
pub fn galois_tuples(p: &Polarity, sorts: &[Sort]) -> Vec<Vec<GaloisSet>> {
    let mut out: Vec<Vec<GaloisSet>> = vec![vec![]];
    for &s in sorts {
        let family = all_stable_sets(p, s);
        let mut next = Vec::with_capacity(out.len() * family.len());
        for t in &out {
            for i in 0..family.len() {
                let mut t2 = t.clone();
                t2.push(family.galois(i));
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// Exhaustively decide whether two relations are conjugate at place `k`:
/// for all Galois tuples and all Galois targets, the image of one stays
/// inside the target exactly when the image of the other, with the polar of
/// the target at place `k`, stays inside the polar of the `k`-th argument.
pub fn is_conjugate_pair(
    p: &Polarity,
    r: &SortedRelation,
    s: &SortedRelation,
    k: usize,
) -> Result<bool> {
    if k >= r.arity() {
        return Err(Error::IndexOutOfRange(format!(
            "place {k} of arity {}",
            r.arity()
        )));
    }
    if *s.stype() != r.stype.conjugate(k) {
        return Err(Error::SortMismatch(format!(
            "conjugate at place {} of {} must have sort type {}, got {}",
            k + 1,
            r.stype,
            r.stype.conjugate(k),
            s.stype
        )));
    }
    let out_family = all_stable_sets(p, r.stype.out);
    for tuple in galois_tuples(p, &r.stype.args) {
        let masks: Vec<IndexSet> = tuple.iter().map(|a| a.members()).collect();
        let alpha = image_operator(p, r, &masks)?;
        let fk_polar = tuple[k].polar(p).members();
        for gi in 0..out_family.len() {
            let g = out_family.galois(gi);
            let mut smasks = masks.clone();
            smasks[k] = g.polar(p).members();
            let eta = image_operator(p, s, &smasks)?;
            if alpha.is_subset(g.members()) != eta.is_subset(fk_polar) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Outcome of the complete-additivity check at one argument place.
#[derive(Debug, Clone)]
pub struct AdditivityCheck {
    pub holds: bool,
    pub witness: Option<String>,
}

/// Check that the closed image operator distributes over the join of every
/// family of Galois sets at place `k`, for every fixed Galois tuple at the
/// other places. Enumerates all `2^m` families, so the stable family size is
/// guarded (default [`guard::FAMILY_DEFAULT`], env-adjustable).
pub fn check_complete_additivity(
    p: &Polarity,
    r: &SortedRelation,
    k: usize,
) -> Result<AdditivityCheck> {
    check_complete_additivity_with_guard(p, r, k, guard::limit(guard::FAMILY_DEFAULT))
}

/// Same as [`check_complete_additivity`] with an explicit family-size cap.
pub fn check_complete_additivity_with_guard(
    p: &Polarity,
    r: &SortedRelation,
    k: usize,
    max_members: usize,
) -> Result<AdditivityCheck> {
    if k >= r.arity() {
        return Err(Error::IndexOutOfRange(format!(
            "place {k} of arity {}",
            r.arity()
        )));
    }
    let place_sort = r.stype.args[k];
    let family = all_stable_sets(p, place_sort);
    let m = family.len();
    if m > max_members || m >= 32 {
        return Err(Error::GuardExceeded(format!(
            "additivity check over 2^{m} families of stable sets (limit {max_members})"
        )));
    }

    let rest_sorts: Vec<Sort> = r
        .stype
        .args
        .iter()
        .enumerate()
        .filter(|(j, _)| *j != k)
        .map(|(_, s)| *s)
        .collect();
    for rest in galois_tuple_masks(p, &rest_sorts) {
        // Image of each family member with the rest of the tuple fixed.
        let alpha_of: Vec<IndexSet> = (0..m)
            .map(|i| {
                let mut masks = rest.clone();
                masks.insert(k, family.sets[i]);
                image_operator(p, r, &masks).expect("validated sorts")
            })
            .collect();

        for fam in IndexSet::subsets(m) {
            let union = fam
                .iter()
                .fold(IndexSet::EMPTY, |acc, i| acc.union(family.sets[i]));
            let joined = p.closure_mask(place_sort, union);
            let mut masks = rest.clone();
            masks.insert(k, joined);
            let lhs = p.closure_mask(r.stype.out, image_operator(p, r, &masks)?);
            let rhs_union = fam
                .iter()
                .fold(IndexSet::EMPTY, |acc, i| acc.union(alpha_of[i]));
            let rhs = p.closure_mask(r.stype.out, rhs_union);
            if lhs != rhs {
                return Ok(AdditivityCheck {
                    holds: false,
                    witness: Some(format!(
                        "family {fam} at place {} with rest {rest:?}: image of join {lhs} != join of images {rhs}",
                        k + 1
                    )),
                });
            }
        }
    }
    Ok(AdditivityCheck {
        holds: true,
        witness: None,
    })
}

/// Galois tuples as raw masks, used by the exhaustive loops.
fn galois_tuple_masks(p: &Polarity, sorts: &[Sort]) -> Vec<Vec<IndexSet>> {
    let mut out: Vec<Vec<IndexSet>> = vec![vec![]];
    for &s in sorts {
        let family = all_stable_sets(p, s);
        let mut next = Vec::with_capacity(out.len() * family.sets.len());
        for t in &out {
            for &g in &family.sets {
                let mut t2 = t.clone();
                t2.push(g);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// The complex algebra of a frame: the stable-set lattice of the left sort
/// together with one normal operator per relation, obtained by dualizing
/// `d`-sorted argument places and outputs through the Galois connection.
pub fn complex_algebra(p: &Polarity, relations: &[SortedRelation]) -> Result<LatticeExpansion> {
    for r in relations {
        let st = sections_all_stable(p, r);
        if !st.stable {
            return Err(Error::SectionsNotStable(format!(
                "relation {}: {}",
                r.name,
                st.witness.unwrap_or_default()
            )));
        }
    }
    let stable = all_stable_sets(p, Sort::One);
    let lattice = stable.to_lattice()?;
    let m = stable.len();

    let mut operators = Vec::with_capacity(relations.len());
    for r in relations {
        let n = r.arity();
        let mut table = Vec::with_capacity(m.pow(n as u32));
        for idx in Tuples::new(m, n) {
            let masks: Vec<IndexSet> = idx
                .iter()
                .enumerate()
                .map(|(j, &i)| match r.stype.args[j] {
                    Sort::One => stable.sets[i],
                    Sort::Dual => p.polar(Sort::One, stable.sets[i]),
                })
                .collect();
            let image = image_operator(p, r, &masks)?;
            let closed = p.closure_mask(r.stype.out, image);
            let value = match r.stype.out {
                Sort::One => closed,
                Sort::Dual => p.polar(Sort::Dual, closed),
            };
            let vi = stable.index_of(value).ok_or_else(|| {
                Error::NotGalois(format!("complex value {value} escaped the stable family"))
            })?;
            table.push(vi);
        }
        operators.push(NormalOperator::new(
            r.name.clone(),
            r.stype.to_distribution(),
            table,
        ));
    }
    LatticeExpansion::new(lattice, operators)
}

/// The meet-then-polar image operator: intersect the sections over all
/// tuples from the arguments, then take the polar. With the Galois dual of
/// a relation this recovers the closed image of the relation itself.
pub fn goldblatt_operator(
    p: &Polarity,
    s: &SortedRelation,
    args: &[GaloisSet],
) -> Result<GaloisSet> {
    check_galois_args(&s.stype.args, args)?;
    let mut inter = p.carrier(s.stype.out);
    for tuple in member_tuples(args) {
        let section: IndexSet = s
            .tuples
            .iter()
            .filter(|(_, a)| *a == tuple)
            .map(|(w, _)| *w)
            .collect();
        inter = inter.inter(section);
    }
    GaloisSet::checked(p, s.stype.out.bar(), p.polar(s.stype.out, inter))
}

/// Cartesian product of the member sets of a Galois tuple.
fn member_tuples(args: &[GaloisSet]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for a in args {
        let mut next = Vec::new();
        for t in &out {
            for u in a.members().iter() {
                let mut t2 = t.clone();
                t2.push(u);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}
