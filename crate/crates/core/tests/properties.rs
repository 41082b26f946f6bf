use std::collections::BTreeSet;

use num_rational::BigRational;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use cwpoints::construct::{collinear_plus_d_expression, collinear_triples, convex_expression, convex_plus_one_expression};
use cwpoints::dp::gps_dp;
use cwpoints::expr::unary::{evaluate_unary, random_unary};
use cwpoints::expr::{parse_expression, validate};
use cwpoints::geometry::is_convex_order_type;
use cwpoints::mso::{
    formula_library, library_macros, parse_with_macros, AnnotatedStructure, Annotations, Assignment, Checker,
    Direction,
};
use cwpoints::{gen, order_type, orient, Point, PointSet};

fn point() -> impl Strategy<Value = Point> {
    prop_oneof![
        (-4i64..=4, -4i64..=4).prop_map(|(x, y)| Point::from_ints(x, y)),
        (-50i64..=50, 1i64..=9, -50i64..=50, 1i64..=9).prop_map(|(a, b, c, d)| Point::from_fracs(a, b, c, d)),
    ]
}

fn point_set(max: usize) -> impl Strategy<Value = PointSet> {
    proptest::collection::btree_set((-3i64..=3, -3i64..=3), 3..=max)
        .prop_map(|s| PointSet::from_ints(&s.into_iter().collect::<Vec<_>>()).expect("distinct"))
}

fn brute_force_gps(p: &PointSet) -> usize {
    let masks: Vec<u32> = collinear_triples(p).iter().map(|t| t.iter().map(|&i| 1u32 << i).sum()).collect();
    (0..1u32 << p.len())
        .filter(|&m| masks.iter().all(|&t| m & t != t))
        .map(|m| m.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

fn genpos_optimum(p: &PointSet) -> usize {
    let f = formula_library("genpos", None).unwrap();
    let s = AnnotatedStructure::from_points(p);
    Checker::new(&s, &f).unwrap().optimize(Direction::Max).unwrap().map_or(0, |b| b.1)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn orientation_is_antisymmetric_cyclic_and_scale_invariant(
        a in point(), b in point(), c in point(), num in 1i64..1000, den in 1i64..1000,
    ) {
        let o = orient(&a, &b, &c);
        prop_assert_eq!(orient(&b, &a, &c), o.reversed());
        prop_assert_eq!(orient(&b, &c, &a), o);
        let f = BigRational::new(num.into(), den.into());
        prop_assert_eq!(orient(&a.scaled(&f), &b.scaled(&f), &c.scaled(&f)), o);
        prop_assert_eq!(orient(&a.mirrored(), &b.mirrored(), &c.mirrored()), o.reversed());
    }

    #[test]
    fn mirrored_points_give_mirrored_order_type(p in point_set(9)) {
        prop_assert_eq!(order_type(&p.mirrored()), order_type(&p).mirrored());
    }

    #[test]
    fn point_files_round_trip(p in point_set(12)) {
        let q = PointSet::parse(&p.to_text()).unwrap();
        prop_assert_eq!(q.points(), p.points());
    }

    #[test]
    fn mso_mirror_duality(p in point_set(7), x in 0usize..7, y in 0usize..7) {
        let s = AnnotatedStructure::from_points(&p);
        let m = s.mirrored();
        let (x, y) = (x % p.len(), y % p.len());
        let f = formula_library("hulledge", None).unwrap();
        let a = Assignment::new().element("x", x).element("y", y);
        let direct = Checker::new(&m, &f).unwrap().eval(&a).unwrap();
        let dual = Checker::new(&s, &f.mirror_ordccw()).unwrap().eval(&a).unwrap();
        prop_assert_eq!(direct, dual);
        // Hull edges flip direction under reflection.
        let reversed = Assignment::new().element("x", y).element("y", x);
        prop_assert_eq!(direct, Checker::new(&s, &f).unwrap().eval(&reversed).unwrap());
    }

    #[test]
    fn genpos_optimum_is_monotone(p in point_set(8), extra in (-3i64..=3, -3i64..=3)) {
        let before = genpos_optimum(&p);
        prop_assert_eq!(before, brute_force_gps(&p));
        let extra = Point::from_ints(extra.0, extra.1);
        if !p.points().contains(&extra) {
            let mut more = p.points().to_vec();
            more.push(extra);
            let q = PointSet::new(more).unwrap();
            prop_assert!(genpos_optimum(&q) >= before);
        }
    }

    #[test]
    fn transitive_closure_matches_reachability(
        n in 2usize..7,
        edges in proptest::collection::btree_set((0usize..7, 0usize..7), 0..12),
    ) {
        let edges: BTreeSet<(usize, usize)> = edges.into_iter().filter(|&(a, b)| a < n && b < n).collect();
        let points = gen::convex(&mut ChaCha8Rng::seed_from_u64(n as u64), n);
        let s = AnnotatedStructure::from_points(&points).with_binary("r", edges.iter().copied()).unwrap();
        let sig = s.signature();
        let f = parse_with_macros(
            "free x, y; ALL X. ((x in X & (all u. all v. ((u in X & r(u,v)) -> v in X))) -> y in X)",
            &sig,
            library_macros(),
        )
        .unwrap();
        let checker = Checker::new(&s, &f).unwrap();
        for x in 0..n {
            let mut reach = vec![false; n];
            let mut stack = vec![x];
            reach[x] = true;
            while let Some(u) = stack.pop() {
                for &(a, b) in &edges {
                    if a == u && !reach[b] {
                        reach[b] = true;
                        stack.push(b);
                    }
                }
            }
            for (y, &r) in reach.iter().enumerate() {
                let a = Assignment::new().element("x", x).element("y", y);
                prop_assert_eq!(checker.eval(&a).unwrap(), r);
            }
        }
    }

    #[test]
    fn dp_matches_brute_force(seed in any::<u64>(), family in 0u8..3, size in 3usize..=11) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (p, rep) = match family {
            0 => {
                let p = gen::convex(&mut rng, size);
                let r = convex_expression(&p).unwrap();
                (p, r)
            }
            1 => {
                let d = size % 4;
                let (p, line) = gen::collinear_plus(&mut rng, (size - d).max(2), d);
                let r = collinear_plus_d_expression(&p, &line).unwrap();
                (p, r)
            }
            _ => {
                let (p, m) = gen::convex_plus_one(&mut rng, size.max(4));
                let r = convex_plus_one_expression(&p, m).unwrap();
                (p, r)
            }
        };
        let ordered = rep.ordered_points(&p);
        let v = validate(&rep.expression, &ordered).unwrap();
        let out = gps_dp(&v, 0).unwrap();
        prop_assert_eq!(out.objective, brute_force_gps(&ordered));
        prop_assert_eq!(parse_expression(&rep.expression.to_string()).unwrap(), rep.expression);
    }

    #[test]
    fn few_unary_labels_cannot_build_large_convex_sets(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let e = random_unary(&mut rng, 4, 12);
        if e.point_count() > 2 * e.width() {
            prop_assert!(!is_convex_order_type(&evaluate_unary(&e).triples));
        }
    }

    #[test]
    fn annotations_round_trip(
        unary in proptest::collection::btree_set(0usize..20, 0..8),
        binary in proptest::collection::btree_set((0usize..20, 0usize..20), 0..8),
    ) {
        let ann = Annotations {
            unary: [("mark".to_string(), unary)].into_iter().collect(),
            binary: [("link".to_string(), binary)].into_iter().collect(),
        };
        prop_assert_eq!(Annotations::parse(&ann.to_text()).unwrap(), ann);
    }
}

#[test]
fn library_formulas_print_and_reparse() {
    let s = AnnotatedStructure::from_points(&PointSet::from_ints(&[(0, 0), (1, 0), (0, 1)]).unwrap())
        .with_unary("canguard", [0])
        .and_then(|s| s.with_unary("grid", [0]))
        .and_then(|s| s.with_unary("rowend", [0]))
        .and_then(|s| s.with_binary("terredge", [(0, 1), (1, 2)]))
        .and_then(|s| s.with_binary("poledge", [(0, 1), (1, 2), (2, 0)]))
        .unwrap();
    for name in cwpoints::mso::LIBRARY_NAMES {
        let f = formula_library(name, Some(2)).unwrap();
        let again = parse_with_macros(&f.to_string(), &s.signature(), Vec::new()).unwrap();
        assert_eq!(again, f, "{name}");
    }
}
