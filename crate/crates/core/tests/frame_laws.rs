//! Property tests for the Galois-connection laws every polarity satisfies.

use polaritykit::polarity::{all_stable_sets, galois_join, preorder};
use polaritykit::set::IndexSet;
use polaritykit::{Polarity, Sort};
use proptest::prelude::*;

/// Random polarities with carriers up to 5x5.
fn polarity_strategy() -> impl Strategy<Value = Polarity> {
    (1usize..=5, 1usize..=5).prop_flat_map(|(nx, ny)| {
        proptest::collection::vec(proptest::bool::ANY, nx * ny).prop_map(move |bits| {
            let pairs: Vec<(usize, usize)> = bits
                .iter()
                .enumerate()
                .filter(|(_, b)| **b)
                .map(|(i, _)| (i / ny, i % ny))
                .collect();
            Polarity::new(nx, ny, &pairs).expect("pairs in range")
        })
    })
}

proptest! {
    #[test]
    fn galois_connection_law(p in polarity_strategy()) {
        let nx = p.carrier_size(Sort::One);
        let ny = p.carrier_size(Sort::Dual);
        for u in IndexSet::subsets(nx) {
            for v in IndexSet::subsets(ny) {
                prop_assert_eq!(
                    v.is_subset(p.polar(Sort::One, u)),
                    u.is_subset(p.polar(Sort::Dual, v))
                );
            }
        }
    }

    #[test]
    fn closure_is_a_closure_operator(p in polarity_strategy()) {
        for sort in [Sort::One, Sort::Dual] {
            let n = p.carrier_size(sort);
            for u in IndexSet::subsets(n) {
                let c = p.closure_mask(sort, u);
                prop_assert!(u.is_subset(c));
                prop_assert_eq!(p.closure_mask(sort, c), c);
                for w in IndexSet::subsets(n) {
                    if u.is_subset(w) {
                        prop_assert!(c.is_subset(p.closure_mask(sort, w)));
                    }
                }
            }
        }
    }

    #[test]
    fn incidence_is_increasing_in_the_preorders(p in polarity_strategy()) {
        // Replacing either coordinate of an incident pair by a preorder-larger
        // point keeps it incident.
        let pre_x = preorder(&p, Sort::One);
        let pre_y = preorder(&p, Sort::Dual);
        for x in 0..p.carrier_size(Sort::One) {
            for y in 0..p.carrier_size(Sort::Dual) {
                if !p.incident(x, y) {
                    continue;
                }
                for x2 in 0..p.carrier_size(Sort::One) {
                    if pre_x.le(x, x2) {
                        prop_assert!(p.incident(x2, y));
                    }
                }
                for y2 in 0..p.carrier_size(Sort::Dual) {
                    if pre_y.le(y, y2) {
                        prop_assert!(p.incident(x, y2));
                    }
                }
            }
        }
    }

    #[test]
    fn galois_sets_are_upsets_and_meets_of_opens(p in polarity_strategy()) {
        for sort in [Sort::One, Sort::Dual] {
            let pre = preorder(&p, sort);
            let family = all_stable_sets(&p, sort);
            for &g in &family.sets {
                // Upward closed in the preorder.
                for u in g.iter() {
                    for w in 0..p.carrier_size(sort) {
                        if pre.le(u, w) {
                            prop_assert!(g.contains(w));
                        }
                    }
                }
                // Join of the closed elements of its points.
                let join = galois_join(
                    &p,
                    sort,
                    g.iter().map(|u| p.closure_mask(sort, IndexSet::singleton(u))),
                );
                prop_assert_eq!(join, g);
                // Intersection of the open elements above it.
                let meet = p.polar(sort, g).iter().fold(p.carrier(sort), |acc, v| {
                    acc.inter(p.polar(sort.bar(), IndexSet::singleton(v)))
                });
                prop_assert_eq!(meet, g);
            }
        }
    }

    #[test]
    fn closure_respects_galois_set_containment(p in polarity_strategy()) {
        // A set sits inside a Galois set exactly when its closure does.
        for sort in [Sort::One, Sort::Dual] {
            let n = p.carrier_size(sort);
            let family = all_stable_sets(&p, sort);
            for w in IndexSet::subsets(n) {
                let c = p.closure_mask(sort, w);
                for &g in &family.sets {
                    prop_assert_eq!(c.is_subset(g), w.is_subset(g));
                }
            }
        }
    }

    #[test]
    fn polar_maps_are_a_dual_isomorphism(p in polarity_strategy()) {
        let left = all_stable_sets(&p, Sort::One);
        let right = all_stable_sets(&p, Sort::Dual);
        prop_assert_eq!(left.len(), right.len());
        for &g in &left.sets {
            let image = p.polar(Sort::One, g);
            prop_assert!(right.index_of(image).is_some());
            prop_assert_eq!(p.polar(Sort::Dual, image), g);
            for &h in &left.sets {
                // Containment reverses through the connection.
                prop_assert_eq!(
                    g.is_subset(h),
                    p.polar(Sort::One, h).is_subset(p.polar(Sort::One, g))
                );
            }
        }
    }

    #[test]
    fn stable_meets_are_intersections_and_joins_closures(p in polarity_strategy()) {
        for sort in [Sort::One, Sort::Dual] {
            let family = all_stable_sets(&p, sort);
            for &a in &family.sets {
                for &b in &family.sets {
                    let meet = a.inter(b);
                    prop_assert!(family.index_of(meet).is_some());
                    let join = galois_join(&p, sort, [a, b]);
                    prop_assert!(family.index_of(join).is_some());
                    // Least upper bound: contains both, inside any other bound.
                    prop_assert!(a.is_subset(join) && b.is_subset(join));
                    for &c in &family.sets {
                        if a.is_subset(c) && b.is_subset(c) {
                            prop_assert!(join.is_subset(c));
                        }
                    }
                }
            }
        }
    }
}
