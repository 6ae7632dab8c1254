use std::collections::BTreeMap;

use amenable_core::folner::reiter::{
    canonical_defect, kappa_verify, partition_defect, reiter_defect, KappaVerdict, ReiterFunction, SupportPartition,
};
use amenable_core::folner::word_problem::{decide_mult_from_folner, BoxOracle};
use amenable_core::folner::{defects, folner_function, is_n_folner, is_n_folner_complement, search_folner};
use amenable_core::group::zd;
use amenable_core::rational::{q, reciprocal};
use amenable_core::{Budget, FiniteSubset, GroupCode, GroupOracle, Outcome, Q};
use proptest::prelude::*;
use proptest::strategy::ValueTree;

const FAMILIES: [&str; 4] = ["zd:1", "zd:2", "cyclic:12", "lamplighter"];

fn family() -> impl Strategy<Value = GroupOracle> {
    prop::sample::select(FAMILIES.to_vec()).prop_map(|s| GroupOracle::from_spec(s).unwrap())
}

/// A group with a non-empty `F` and a `D` drawn from small codes.
fn instance() -> impl Strategy<Value = (GroupOracle, FiniteSubset, FiniteSubset, u64)> {
    (
        family(),
        prop::collection::btree_set(0u64..40, 1..10),
        prop::collection::btree_set(0u64..12, 1..4),
        1u64..6,
    )
        .prop_map(|(g, f, d, n)| {
            let valid = |c: &u64| g.is_valid_code(GroupCode(*c));
            let f: Vec<u64> = f.into_iter().filter(valid).collect();
            let f = if f.is_empty() { vec![0] } else { f };
            let d: Vec<u64> = d.into_iter().filter(valid).collect();
            (g, FiniteSubset::from_raw(f), FiniteSubset::from_raw(d), n)
        })
}

fn translate(g: &GroupOracle, f: &FiniteSubset, t: GroupCode) -> Option<FiniteSubset> {
    f.iter().map(|x| g.try_mult(x, t)).collect::<Option<Vec<_>>>().map(FiniteSubset::new)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn complement_form_agrees_off_the_boundary((g, f, d, n) in instance()) {
        let check = is_n_folner(&g, &f, &d, n).unwrap();
        let on_boundary = check.defects.values().any(|v| *v == reciprocal(n));
        let complement = is_n_folner_complement(&g, &f, &d, n).unwrap();
        if on_boundary {
            prop_assert!(check.holds && !complement || !check.holds);
        } else {
            prop_assert_eq!(check.holds, complement);
        }
    }

    #[test]
    fn right_translation_keeps_defects((g, f, d, n) in instance(), shifts in prop::collection::vec(0u64..30, 20)) {
        let base = is_n_folner(&g, &f, &d, n).unwrap();
        for t in shifts.into_iter().map(GroupCode).filter(|&t| g.is_valid_code(t)) {
            let Some(ft) = translate(&g, &f, t) else { continue };
            let moved = is_n_folner(&g, &ft, &d, n).unwrap();
            prop_assert_eq!(&moved.defects, &base.defects);
            prop_assert_eq!(moved.holds, base.holds);
        }
    }

    #[test]
    fn indicator_defect_is_twice_the_set_defect((g, f, d, n) in instance()) {
        let chi = ReiterFunction::indicator(&f).unwrap();
        let r = reiter_defect(&g, &chi, &d).unwrap();
        let s = defects(&g, &f, &d).unwrap();
        for (x, v) in &s {
            prop_assert_eq!(r[x], q(2, 1) * *v);
        }
        let off_boundary = r.values().all(|v| *v != reciprocal(n));
        if off_boundary {
            let reiter_ok = r.values().all(|v| *v < reciprocal(n));
            prop_assert_eq!(is_n_folner(&g, &f, &d, 2 * n).unwrap().holds, reiter_ok);
        }
    }

    #[test]
    fn coarsening_never_increases_partition_defect(
        spec in prop::sample::select(vec!["zd:2", "redundant-z"]),
        support in prop::collection::btree_map(0u64..30, 1i128..5, 1..8),
        labels in prop::collection::vec(0usize..4, 8),
        merge in prop::collection::vec(0usize..2, 4),
        x in 0u64..10,
    ) {
        let g = GroupOracle::from_spec(spec).unwrap();
        let values: BTreeMap<GroupCode, Q> = support.iter().map(|(&c, &v)| (GroupCode(c), q(v, 1))).collect();
        let f = ReiterFunction::new(values).unwrap();
        let codes: Vec<GroupCode> = f.support().iter().collect();
        let fine = blocks(&codes, |i| labels[i]);
        let coarse = blocks(&codes, |i| merge[labels[i]]);
        prop_assert!(fine.refines(&coarse));
        let a = partition_defect(&g, &f, &fine, GroupCode(x)).unwrap();
        let b = partition_defect(&g, &f, &coarse, GroupCode(x)).unwrap();
        prop_assert!(b <= a, "coarse {} > fine {}", b, a);
    }
}

fn blocks(codes: &[GroupCode], label: impl Fn(usize) -> usize) -> SupportPartition {
    let mut by: BTreeMap<usize, Vec<GroupCode>> = BTreeMap::new();
    for (i, &c) in codes.iter().enumerate() {
        by.entry(label(i)).or_default().push(c);
    }
    SupportPartition::new(by.into_values().map(FiniteSubset::new).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]

    #[test]
    fn kappa_matches_canonical_forms(
        support in prop::collection::btree_map(0u64..20, 1i128..4, 1..5),
        d in prop::collection::btree_set(1u64..6, 1..3),
        n in 1u64..5,
    ) {
        let g = GroupOracle::from_spec("redundant-z").unwrap().as_ce();
        let values = support.iter().map(|(&c, &v)| (GroupCode(c), q(v, 1))).collect();
        let f = ReiterFunction::new(values).unwrap();
        let d = FiniteSubset::from_raw(d);
        let truth = canonical_defect(&g, &f, &d).values().all(|v| *v <= reciprocal(n));
        let report = kappa_verify(&g, n, &d, &f, Budget::new(50_000_000).unwrap()).unwrap();
        let expect = if truth { KappaVerdict::Invariant } else { KappaVerdict::NotInvariant };
        prop_assert_eq!(report.verdict, expect);
    }
}

#[test]
fn word_problem_matches_multiplication_in_the_plane() {
    let g = GroupOracle::from_spec("zd:2").unwrap();
    let ce = g.as_ce();
    let mut oracle = BoxOracle::new(g).unwrap();
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let point = (-3i64..=3, -3i64..=3).prop_map(|(x, y)| GroupCode(zd::encode(&[x, y])));
    let mut equal = 0;
    for _ in 0..100 {
        let (a, b, c, hit) = (point.clone(), point.clone(), point.clone(), any::<bool>())
            .new_tree(&mut runner)
            .unwrap()
            .current();
        // half the triples are true products so both answers get exercised
        let c = if hit { g.mult(a, b) } else { c };
        let decision = decide_mult_from_folner(&ce, &mut oracle, a, b, c, Budget::new(50_000_000).unwrap())
            .unwrap()
            .expect_done("box oracle");
        assert_eq!(decision.equal, g.same_element(g.mult(a, b), c), "{a} {b} {c}");
        equal += decision.equal as u32;
    }
    assert!(equal >= 30, "{equal}");
}

#[test]
fn search_and_minimum_agree_with_exhaustive_scan() {
    for (spec, d, n) in [("zd:1", "+1", 3u64), ("zd:2", "(1,0),(0,1)", 2), ("cyclic:12", "a", 4), ("lamplighter", "t,a", 1)] {
        let g = GroupOracle::from_spec(spec).unwrap();
        let d = FiniteSubset::new(g.parse_elements(d).unwrap());
        let cert = search_folner(&g, &d, n, Budget::new(50_000_000).unwrap()).unwrap().expect_done(spec);
        assert!(is_n_folner(&g, &cert.f, &d, n).unwrap().holds, "{spec}");
        assert!(cert.verify(&g).unwrap());

        let best = folner_function(&g, &d, n, Budget::new(50_000_000).unwrap()).unwrap();
        let Outcome::Done(best) = best else { panic!("{spec}: folner function ran out") };
        let scan = min_in_window(&g, &d, n, 16);
        if let Some(s) = scan {
            assert!(best.size <= s, "{spec}: {} > {s}", best.size);
        }
        assert!(best.size <= cert.f.len());
    }
}

/// Smallest `n`-Følner set among subsets of the first `w` valid codes.
fn min_in_window(g: &GroupOracle, d: &FiniteSubset, n: u64, w: u64) -> Option<usize> {
    let codes: Vec<GroupCode> = (0..w).map(GroupCode).filter(|&c| g.is_valid_code(c)).collect();
    (1u32..1 << codes.len())
        .map(|mask| FiniteSubset::new(codes.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &c)| c)))
        .filter(|f| is_n_folner(g, f, d, n).unwrap().holds)
        .map(|f| f.len())
        .min()
}
