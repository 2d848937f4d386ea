//! The canonical frame of a lattice expansion.
//!
//! The left carrier collects the filters of the lattice, the right carrier
//! its ideals, and a filter is incident to an ideal when they intersect.
//! Lattice elements embed as the stable set of filters containing them, and
//! every normal operator induces a relation through its point operator: the
//! filter (or ideal, for output sort `d`) generated by the operator's image
//! on tuples of members. The module builds these structures and verifies,
//! by exhaustive checking, the structural facts connecting them: separation,
//! closedness of sections, the two characterizations of the Galois dual
//! relation, stability of its sections, the representation identity, the
//! sigma/pi extension formulas, and density/compactness of the extension.

use crate::error::Error;
use crate::guard;
use crate::lattice::{
    enumerate_filters, enumerate_ideals, Lattice, LatticeExpansion, NormalOperator, Sort,
};
use crate::polarity::{
    all_stable_sets, clopen_witness, galois_join, is_separated, GaloisSet, Polarity,
};
use crate::relation::{
    complex_algebra, galois_dual, image_operator, sections_all_stable, SortType, SortedRelation,
};
use crate::report::{Check, Report};
use crate::set::IndexSet;
use crate::Result;

/// Canonical polarity of a lattice: filters against ideals, incident when
/// they meet. Returns the polarity with both carrier enumerations.
pub fn canonical_polarity(lattice: &Lattice) -> Result<(Polarity, Vec<IndexSet>, Vec<IndexSet>)> {
    let filters = enumerate_filters(lattice)?;
    let ideals = enumerate_ideals(lattice)?;
    let mut pairs = Vec::new();
    for (x, f) in filters.iter().enumerate() {
        for (y, i) in ideals.iter().enumerate() {
            if !f.inter(*i).is_empty() {
                pairs.push((x, y));
            }
        }
    }
    let p = Polarity::new(filters.len(), ideals.len(), &pairs)?;
    Ok((p, filters, ideals))
}

/// The canonical frame: polarity over filters/ideals plus one relation per
/// operator of the source expansion.
#[derive(Debug, Clone)]
pub struct CanonicalFrame {
    expansion: LatticeExpansion,
    polarity: Polarity,
    filters: Vec<IndexSet>,
    ideals: Vec<IndexSet>,
    relations: Vec<SortedRelation>,
    principal_filter: Vec<usize>,
    principal_ideal: Vec<usize>,
}

impl CanonicalFrame {
    pub fn new(expansion: LatticeExpansion) -> Result<CanonicalFrame> {
        let size = expansion.lattice.size();
        let limit = guard::limit(guard::CANONICAL_DEFAULT);
        for op in &expansion.operators {
            if op.arity() > 0 && size > limit {
                return Err(Error::GuardExceeded(format!(
                    "canonical relations for {}-ary operators on a size-{size} lattice (limit {limit})",
                    op.arity()
                )));
            }
            if op.arity() > 3 {
                return Err(Error::GuardExceeded(format!(
                    "operator {} has arity {} (limit 3)",
                    op.name,
                    op.arity()
                )));
            }
        }

        let (polarity, filters, ideals) = canonical_polarity(&expansion.lattice)?;
        debug_assert!(is_separated(&polarity));

        let index_of = |family: &[IndexSet], set: IndexSet| family.binary_search(&set).ok();
        let principal_filter: Vec<usize> = (0..size)
            .map(|a| index_of(&filters, expansion.lattice.upset(a)).expect("principal filter"))
            .collect();
        let principal_ideal: Vec<usize> = (0..size)
            .map(|a| index_of(&ideals, expansion.lattice.downset(a)).expect("principal ideal"))
            .collect();

        let mut frame = CanonicalFrame {
            expansion,
            polarity,
            filters,
            ideals,
            relations: Vec::new(),
            principal_filter,
            principal_ideal,
        };
        for idx in 0..frame.expansion.operators.len() {
            let r = frame.build_relation(idx)?;
            frame.relations.push(r);
        }
        Ok(frame)
    }

    pub fn expansion(&self) -> &LatticeExpansion {
        &self.expansion
    }

    pub fn polarity(&self) -> &Polarity {
        &self.polarity
    }

    pub fn relations(&self) -> &[SortedRelation] {
        &self.relations
    }

    pub fn relation(&self, op_idx: usize) -> &SortedRelation {
        &self.relations[op_idx]
    }

    pub fn filters(&self) -> &[IndexSet] {
        &self.filters
    }

    pub fn ideals(&self) -> &[IndexSet] {
        &self.ideals
    }

    /// Carrier index of the principal filter of an element.
    pub fn principal_filter(&self, a: usize) -> usize {
        self.principal_filter[a]
    }

    pub fn principal_ideal(&self, a: usize) -> usize {
        self.principal_ideal[a]
    }

    /// Member set of a carrier point: a filter for sort `1`, an ideal for `d`.
    pub fn point_members(&self, sort: Sort, u: usize) -> IndexSet {
        match sort {
            Sort::One => self.filters[u],
            Sort::Dual => self.ideals[u],
        }
    }

    fn carrier_index(&self, sort: Sort, members: IndexSet) -> Option<usize> {
        match sort {
            Sort::One => self.filters.binary_search(&members).ok(),
            Sort::Dual => self.ideals.binary_search(&members).ok(),
        }
    }

    /// The representation map: all filters containing the element.
    pub fn stable_image(&self, a: usize) -> Result<GaloisSet> {
        self.zeta(Sort::One, a)
    }

    /// The co-representation map: all ideals containing the element.
    pub fn costable_image(&self, a: usize) -> Result<GaloisSet> {
        self.zeta(Sort::Dual, a)
    }

    fn zeta(&self, sort: Sort, a: usize) -> Result<GaloisSet> {
        if a >= self.expansion.lattice.size() {
            return Err(Error::IndexOutOfRange(format!("lattice element {a}")));
        }
        let family = match sort {
            Sort::One => &self.filters,
            Sort::Dual => &self.ideals,
        };
        let members: IndexSet = family
            .iter()
            .enumerate()
            .filter(|(_, s)| s.contains(a))
            .map(|(i, _)| i)
            .collect();
        GaloisSet::checked(&self.polarity, sort, members)
    }

    /// Apply an operator to a tuple of carrier points: take its image over
    /// all member tuples and generate the filter (output sort `1`) or ideal
    /// (output sort `d`) from that image. Returns the carrier index.
    pub fn point_operator(&self, op_idx: usize, args: &[usize]) -> Result<usize> {
        let op = &self.expansion.operators[op_idx];
        let lattice = &self.expansion.lattice;
        if args.len() != op.arity() {
            return Err(Error::SortMismatch(format!(
                "operator {} wants {} arguments, got {}",
                op.name,
                op.arity(),
                args.len()
            )));
        }
        let member_sets: Vec<IndexSet> = args
            .iter()
            .zip(op.dtype.args.iter())
            .map(|(&u, &s)| {
                let family = match s {
                    Sort::One => &self.filters,
                    Sort::Dual => &self.ideals,
                };
                if u >= family.len() {
                    return Err(Error::IndexOutOfRange(format!(
                        "carrier point {u} of sort {s}"
                    )));
                }
                Ok(family[u])
            })
            .collect::<Result<_>>()?;

        let mut image = Vec::new();
        let mut tuple_stack = vec![Vec::new()];
        for ms in &member_sets {
            let mut next = Vec::with_capacity(tuple_stack.len() * ms.len());
            for t in &tuple_stack {
                for e in ms.iter() {
                    let mut t2 = t.clone();
                    t2.push(e);
                    next.push(t2);
                }
            }
            tuple_stack = next;
        }
        for t in &tuple_stack {
            image.push(op.apply(lattice.size(), t));
        }

        let (generated, sort) = match op.dtype.out {
            Sort::One => (lattice.upset(lattice.meet_all(image)), Sort::One),
            Sort::Dual => (lattice.downset(lattice.join_all(image)), Sort::Dual),
        };
        self.carrier_index(sort, generated)
            .ok_or_else(|| Error::NotGalois(format!("generated set {generated} is not enumerated")))
    }

    /// The canonical relation of one operator: output point related to an
    /// argument tuple when the point operator's value is contained in it.
    fn build_relation(&self, op_idx: usize) -> Result<SortedRelation> {
        let op = &self.expansion.operators[op_idx];
        let stype = SortType::new(op.dtype.out, op.dtype.args.clone());
        let out_n = self.polarity.carrier_size(stype.out);

        let mut tuples = Vec::new();
        let arg_sizes: Vec<usize> = stype
            .args
            .iter()
            .map(|&s| self.polarity.carrier_size(s))
            .collect();
        for args in mixed_radix(&arg_sizes) {
            let value = self.point_operator(op_idx, &args)?;
            let value_members = self.point_members(stype.out, value);
            for w in 0..out_n {
                if value_members.is_subset(self.point_members(stype.out, w)) {
                    tuples.push((w, args.clone()));
                }
            }
        }
        SortedRelation::new(&self.polarity, op.name.clone(), stype, tuples)
    }

    /// Exhaustive verification of the structural facts of the canonical
    /// frame; every check is expected to pass on any valid expansion.
    pub fn verify_lemmas(&self) -> Report {
        let mut report = Report::new("canonical-frame-lemmas");
        let lattice = &self.expansion.lattice;
        let p = &self.polarity;

        report.push(Check::leaf(
            "frame-separated",
            if is_separated(p) {
                None
            } else {
                Some("preorders are not antisymmetric".into())
            },
        ));

        // The point preorder is containment of filters (and of ideals).
        let mut witness = None;
        for sort in [Sort::One, Sort::Dual] {
            let pre = crate::polarity::preorder(p, sort);
            for a in 0..p.carrier_size(sort) {
                for b in 0..p.carrier_size(sort) {
                    let incl = self
                        .point_members(sort, a)
                        .is_subset(self.point_members(sort, b));
                    if pre.le(a, b) != incl {
                        witness = Some(format!("points {a},{b} of sort {sort}"));
                    }
                }
            }
        }
        report.push(Check::leaf("preorder-is-containment", witness));

        // Representation images and their polars.
        let mut zeta_witness = None;
        let mut clopen_check = None;
        for a in 0..lattice.size() {
            let s = self.stable_image(a).expect("valid element");
            let c = self.costable_image(a).expect("valid element");
            if s.polar(p) != c || c.polar(p) != s {
                zeta_witness = Some(format!("element {a}: polar images disagree"));
            }
            let open = p.polar(Sort::Dual, IndexSet::singleton(self.principal_ideal[a]));
            if s.members() != open || clopen_witness(p, &s).is_none() {
                clopen_check = Some(format!("element {a}: image is not clopen via its ideal"));
            }
        }
        report.push(Check::leaf("representation-polar-swap", zeta_witness));
        report.push(Check::leaf("representation-images-clopen", clopen_check));

        // Conversely, every clopen element is a representation image.
        let images: Vec<IndexSet> = (0..lattice.size())
            .map(|a| self.stable_image(a).expect("valid").members())
            .collect();
        let mut converse = None;
        for sort in [Sort::One, Sort::Dual] {
            for u in 0..p.carrier_size(sort) {
                for v in 0..p.carrier_size(sort.bar()) {
                    let closed = p.closure_mask(sort, IndexSet::singleton(u));
                    let open = p.polar(sort.bar(), IndexSet::singleton(v));
                    if p.incident_sorted(sort, u, v) && closed == open {
                        let hit = match sort {
                            Sort::One => images.contains(&closed),
                            Sort::Dual => images.contains(&p.polar(Sort::Dual, closed)),
                        };
                        if !hit {
                            converse = Some(format!("clopen at point {u} of sort {sort}"));
                        }
                    }
                }
            }
        }
        report.push(Check::leaf("clopens-are-representation-images", converse));

        for (idx, r) in self.relations.iter().enumerate() {
            let op = &self.expansion.operators[idx];
            let mut children = Vec::new();
            let stype = r.stype().clone();
            let arg_sizes: Vec<usize> = stype.args.iter().map(|&s| p.carrier_size(s)).collect();

            // Sort-type law: output sort first, argument sorts in order.
            children.push(Check::leaf(
                "sort-type-from-distribution",
                if stype.out == op.dtype.out && stype.args == op.dtype.args {
                    None
                } else {
                    Some(format!("{} vs {}", stype, op.dtype))
                },
            ));

            // Full sections are the principal closed elements of the point
            // operator's value.
            let mut closed_witness = None;
            let mut unified_witness = None;
            let mut decreasing_witness = None;
            for args in mixed_radix(&arg_sizes) {
                let value = self.point_operator(idx, &args).expect("validated");
                let section: IndexSet = (0..p.carrier_size(stype.out))
                    .filter(|&w| r.contains(w, &args))
                    .collect();
                let principal = p.closure_mask(stype.out, IndexSet::singleton(value));
                if section != principal {
                    closed_witness = Some(format!(
                        "section at {args:?} is {section}, expected {principal}"
                    ));
                }

                // Membership matches the elementwise quantifier.
                let member_sets: Vec<IndexSet> = args
                    .iter()
                    .zip(stype.args.iter())
                    .map(|(&u, &s)| self.point_members(s, u))
                    .collect();
                for w in 0..p.carrier_size(stype.out) {
                    let target = self.point_members(stype.out, w);
                    let pointwise = element_tuples(&member_sets)
                        .into_iter()
                        .all(|t| target.contains(op.apply(lattice.size(), &t)));
                    if r.contains(w, &args) != pointwise {
                        unified_witness = Some(format!("output {w} at {args:?}"));
                    }
                }

                // Shrinking any argument point keeps the relation.
                for k in 0..args.len() {
                    for u in 0..p.carrier_size(stype.args[k]) {
                        if self
                            .point_members(stype.args[k], u)
                            .is_subset(self.point_members(stype.args[k], args[k]))
                        {
                            let mut smaller = args.clone();
                            smaller[k] = u;
                            for w in 0..p.carrier_size(stype.out) {
                                if r.contains(w, &args) && !r.contains(w, &smaller) {
                                    decreasing_witness = Some(format!(
                                        "output {w}, tuple {args:?}, place {}",
                                        k + 1
                                    ));
                                }
                            }
                        }
                    }
                }
            }
            children.push(Check::leaf("sections-are-closed-elements", closed_witness));
            children.push(Check::leaf("membership-elementwise", unified_witness));
            children.push(Check::leaf(
                "decreasing-in-argument-points",
                decreasing_witness,
            ));

            // Galois dual: incidence with the point value, and existence of a
            // member tuple hitting the opposite point.
            let dual = galois_dual(p, r);
            let mut dual_witness = None;
            for args in mixed_radix(&arg_sizes) {
                let value = self.point_operator(idx, &args).expect("validated");
                let member_sets: Vec<IndexSet> = args
                    .iter()
                    .zip(stype.args.iter())
                    .map(|(&u, &s)| self.point_members(s, u))
                    .collect();
                for u in 0..p.carrier_size(stype.out.bar()) {
                    let in_dual = dual.contains(u, &args);
                    let by_incidence = p.incident_sorted(stype.out, value, u);
                    let opposite = self.point_members(stype.out.bar(), u);
                    let by_member = element_tuples(&member_sets)
                        .into_iter()
                        .any(|t| opposite.contains(op.apply(lattice.size(), &t)));
                    if in_dual != by_incidence || in_dual != by_member {
                        dual_witness = Some(format!("opposite point {u} at {args:?}"));
                    }
                }
            }
            children.push(Check::leaf("dual-two-characterizations", dual_witness));

            let stability = sections_all_stable(p, r);
            children.push(Check::leaf("dual-sections-stable", stability.witness));

            report.push(Check::group(format!("relation-{}", r.name), children));
        }

        report.sort_by_name();
        report
    }

    /// The complex algebra of the frame: stable-set lattice plus one
    /// operator per canonical relation.
    pub fn complex_algebra(&self) -> Result<LatticeExpansion> {
        complex_algebra(&self.polarity, &self.relations)
    }

    /// Check that the representation map is a lattice isomorphism onto the
    /// stable-set family: injective, surjective, order-exact, preserving
    /// meets, joins and bounds.
    pub fn representation_report(&self) -> Report {
        let mut report = Report::new("lattice-representation");
        let lattice = &self.expansion.lattice;
        let stable = all_stable_sets(&self.polarity, Sort::One);

        let images: Vec<IndexSet> = (0..lattice.size())
            .map(|a| self.stable_image(a).expect("valid").members())
            .collect();

        let mut inj = None;
        for a in 0..lattice.size() {
            for b in 0..lattice.size() {
                if a != b && images[a] == images[b] {
                    inj = Some(format!("elements {a} and {b} share an image"));
                }
            }
        }
        report.push(Check::leaf("injective", inj));

        let surj = if images.len() == stable.len()
            && images.iter().all(|i| stable.index_of(*i).is_some())
        {
            None
        } else {
            Some(format!(
                "{} images against {} stable sets",
                images.len(),
                stable.len()
            ))
        };
        report.push(Check::leaf("surjective-onto-stable-sets", surj));

        let mut order = None;
        let mut ops = None;
        for a in 0..lattice.size() {
            for b in 0..lattice.size() {
                if lattice.leq(a, b) != images[a].is_subset(images[b]) {
                    order = Some(format!("pair ({a},{b})"));
                }
                let meet_img = images[lattice.meet(a, b)];
                if meet_img != images[a].inter(images[b]) {
                    ops = Some(format!("meet of ({a},{b})"));
                }
                let join_img = images[lattice.join(a, b)];
                if join_img != galois_join(&self.polarity, Sort::One, [images[a], images[b]]) {
                    ops = Some(format!("join of ({a},{b})"));
                }
            }
        }
        report.push(Check::leaf("order-tables-equal", order));
        report.push(Check::leaf("meets-joins-transported", ops));

        let bounds = if images[lattice.bottom()]
            == self.polarity.closure_mask(Sort::One, IndexSet::EMPTY)
            && images[lattice.top()] == self.polarity.carrier(Sort::One)
        {
            None
        } else {
            Some("bounds do not map to the stable bounds".to_string())
        };
        report.push(Check::leaf("bounds-preserved", bounds));

        report.sort_by_name();
        report
    }

    /// Build the operator the relation induces on the stable-set lattice and
    /// check the representation identity on every element tuple, on both the
    /// stable and the co-stable side.
    pub fn represented_operator(&self, op_idx: usize) -> Result<(NormalOperator, Report)> {
        let op = &self.expansion.operators[op_idx];
        let r = &self.relations[op_idx];
        let p = &self.polarity;
        let lattice = &self.expansion.lattice;

        let stability = sections_all_stable(p, r);
        if !stability.stable {
            return Err(Error::LemmaPreconditionFailed(format!(
                "relation {}: {}",
                r.name,
                stability.witness.unwrap_or_default()
            )));
        }

        let algebra = complex_algebra(p, std::slice::from_ref(r))?;
        let represented = algebra.operators.into_iter().next().expect("one operator");

        let mut report = Report::new(format!("representation-of-{}", op.name));
        let stable = all_stable_sets(p, Sort::One);
        let mut identity = None;
        let mut transport = None;
        for t in lattice.tuples(op.arity()) {
            // Sorted arguments: representation image at sort-1 places,
            // co-representation image at sort-d places.
            let masks: Vec<IndexSet> = t
                .iter()
                .zip(op.dtype.args.iter())
                .map(|(&a, &s)| match s {
                    Sort::One => self.stable_image(a).expect("valid").members(),
                    Sort::Dual => self.costable_image(a).expect("valid").members(),
                })
                .collect();
            let image = image_operator(p, r, &masks)?;
            let sorted_value = p.closure_mask(r.stype().out, image);
            let result = op.apply(lattice.size(), &t);
            let expected = match r.stype().out {
                Sort::One => self.stable_image(result)?.members(),
                Sort::Dual => self.costable_image(result)?.members(),
            };
            if sorted_value != expected {
                identity = Some(format!("tuple {t:?}: {sorted_value} vs {expected}"));
            }
            // The single-sorted operator computes the same element through
            // the stable-set indices.
            let arg_indices: Vec<usize> = t
                .iter()
                .map(|&a| {
                    stable
                        .index_of(self.stable_image(a).expect("valid").members())
                        .expect("image is stable")
                })
                .collect();
            let got = represented.apply(stable.len(), &arg_indices);
            let want = stable
                .index_of(self.stable_image(result)?.members())
                .expect("image is stable");
            if got != want {
                transport = Some(format!("tuple {t:?}: index {got} vs {want}"));
            }
        }
        report.push(Check::leaf("identity-on-all-tuples", identity));
        report.push(Check::leaf("transport-through-complex-algebra", transport));
        report.sort_by_name();
        Ok((represented, report))
    }

    /// Sigma extension of an output-sort-`1` operator on a tuple of closed
    /// elements, computed by the meet formula over the representation images
    /// and cross-checked against the principal closed element of the point
    /// operator's value.
    pub fn sigma_extension(&self, op_idx: usize, points: &[usize]) -> Result<GaloisSet> {
        self.extension(op_idx, points, Sort::One)
    }

    /// Dual sigma extension of an output-sort-`d` operator; its polar image
    /// is the pi extension on the stable side.
    pub fn pi_extension(&self, op_idx: usize, points: &[usize]) -> Result<GaloisSet> {
        self.extension(op_idx, points, Sort::Dual)
    }

    fn extension(&self, op_idx: usize, points: &[usize], expect_out: Sort) -> Result<GaloisSet> {
        let op = &self.expansion.operators[op_idx];
        if op.dtype.out != expect_out {
            return Err(Error::SortMismatch(format!(
                "operator {} has output sort {}, expected {}",
                op.name, op.dtype.out, expect_out
            )));
        }
        if points.len() != op.arity() {
            return Err(Error::SortMismatch(format!(
                "operator {} wants {} points, got {}",
                op.name,
                op.arity(),
                points.len()
            )));
        }
        let p = &self.polarity;
        let lattice = &self.expansion.lattice;
        let member_sets: Vec<IndexSet> = points
            .iter()
            .zip(op.dtype.args.iter())
            .map(|(&u, &s)| {
                if u >= p.carrier_size(s) {
                    return Err(Error::IndexOutOfRange(format!("point {u} of sort {s}")));
                }
                Ok(self.point_members(s, u))
            })
            .collect::<Result<_>>()?;

        // Meet formula: intersect the images of the operator's values over
        // all member tuples.
        let mut value = p.carrier(expect_out);
        for t in element_tuples(&member_sets) {
            let e = op.apply(lattice.size(), &t);
            value = value.inter(self.zeta(expect_out, e)?.members());
        }

        // The same closed element through the point operator.
        let point = self.point_operator(op_idx, points)?;
        let principal = p.closure_mask(expect_out, IndexSet::singleton(point));
        if value != principal {
            return Err(Error::LemmaPreconditionFailed(format!(
                "extension at {points:?} is {value}, point route gives {principal}"
            )));
        }
        GaloisSet::checked(p, expect_out, value)
    }

    /// Density and compactness of the stable-set lattice over the
    /// representation images.
    pub fn canonical_extension_check(&self) -> Report {
        let mut report = Report::new("canonical-extension");
        let p = &self.polarity;
        let stable = all_stable_sets(p, Sort::One);

        // Closed elements are meets of images, open elements joins of them.
        let mut closed_witness = None;
        for (x, f) in self.filters.iter().enumerate() {
            let meet = f.iter().fold(p.carrier(Sort::One), |acc, a| {
                acc.inter(self.stable_image(a).expect("valid").members())
            });
            if meet != p.closure_mask(Sort::One, IndexSet::singleton(x)) {
                closed_witness = Some(format!("filter point {x}"));
            }
        }
        report.push(Check::leaf(
            "closed-elements-are-meets-of-images",
            closed_witness,
        ));

        let mut open_witness = None;
        for (y, i) in self.ideals.iter().enumerate() {
            let join = galois_join(
                p,
                Sort::One,
                i.iter()
                    .map(|a| self.stable_image(a).expect("valid").members()),
            );
            if join != p.polar(Sort::Dual, IndexSet::singleton(y)) {
                open_witness = Some(format!("ideal point {y}"));
            }
        }
        report.push(Check::leaf(
            "open-elements-are-joins-of-images",
            open_witness,
        ));

        // Density: every stable set is a join of closed and a meet of open
        // elements, hence a join of meets and a meet of joins of images.
        let mut density = None;
        for &g in &stable.sets {
            let join = galois_join(
                p,
                Sort::One,
                g.iter()
                    .map(|x| p.closure_mask(Sort::One, IndexSet::singleton(x))),
            );
            let meet = p
                .polar(Sort::One, g)
                .iter()
                .fold(p.carrier(Sort::One), |acc, y| {
                    acc.inter(p.polar(Sort::Dual, IndexSet::singleton(y)))
                });
            if join != g || meet != g {
                density = Some(format!("stable set {g}"));
            }
        }
        report.push(Check::leaf("density", density));

        // Compactness. With finite carriers every subcollection is already
        // finite, so the literal finite-subcover reading holds by taking the
        // whole collection; the substantive finite content is that a meet of
        // closed elements lands under a join of open ones exactly when the
        // generated filter meets the generated ideal.
        let lattice = &self.expansion.lattice;
        let mut compactness = None;
        'outer: for fa in IndexSet::subsets(self.filters.len()) {
            let meet_closed = fa.iter().fold(p.carrier(Sort::One), |acc, x| {
                acc.inter(p.closure_mask(Sort::One, IndexSet::singleton(x)))
            });
            let union_f: Vec<usize> = fa.iter().flat_map(|x| self.filters[x].iter()).collect();
            let gen_filter = lattice.upset(lattice.meet_all(union_f));
            for ib in IndexSet::subsets(self.ideals.len()) {
                let join_open = galois_join(
                    p,
                    Sort::One,
                    ib.iter()
                        .map(|y| p.polar(Sort::Dual, IndexSet::singleton(y))),
                );
                let union_i: Vec<usize> = ib.iter().flat_map(|y| self.ideals[y].iter()).collect();
                let gen_ideal = lattice.downset(lattice.join_all(union_i));
                let lhs = meet_closed.is_subset(join_open);
                let rhs = !gen_filter.inter(gen_ideal).is_empty();
                if lhs != rhs {
                    compactness = Some(format!("closed family {fa}, open family {ib}"));
                    break 'outer;
                }
            }
        }
        report.push(Check::leaf("compactness", compactness));

        report.sort_by_name();
        report
    }
}

/// All tuples over mixed carrier sizes, lexicographically.
fn mixed_radix(sizes: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for &n in sizes {
        let mut next = Vec::with_capacity(out.len() * n);
        for t in &out {
            for v in 0..n {
                let mut t2 = t.clone();
                t2.push(v);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// Cartesian product of member sets as element tuples.
fn element_tuples(member_sets: &[IndexSet]) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for ms in member_sets {
        let mut next = Vec::with_capacity(out.len() * ms.len());
        for t in &out {
            for e in ms.iter() {
                let mut t2 = t.clone();
                t2.push(e);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}
