use std::collections::BTreeMap;

use proptest::prelude::*;
use seqwit::corpus::{self, rng_for, SetKind, SetParams};
use seqwit::fan::{accumulates_at_apex, excluding_neighborhood, AccumulationCertificate, Ramp};
use seqwit::functions::WitnessCertificate;
use seqwit::oracle::{self, TRUNC_DEPTH, TRUNC_SPOKES};
use seqwit::sequences::{ConvergenceCertificate, Disagreement};
use seqwit::sets::{Cardinality, InIpCertificate, SpokeSupport};
use seqwit::{DefinableSet, FanPoint, NeighborhoodSpec, SequenceDescriptor, TestSetDescriptor};

fn kind(i: u8) -> SetKind {
    [SetKind::Ip, SetKind::Finite, SetKind::Rows, SetKind::Mixed][i as usize % 4]
}

fn set(seed: u64, k: u8) -> DefinableSet {
    corpus::random_set(&mut rng_for(seed, "invariants/set"), kind(k), &SetParams::default())
}

fn arb_neighborhood() -> impl Strategy<Value = NeighborhoodSpec> {
    (
        1u64..40,
        prop::collection::btree_map(1u64..20, 1u64..80, 0..4),
        prop::option::of((1u64..4, -5i64..10)),
    )
        .prop_map(|(d, o, r)| NeighborhoodSpec::new(d, o, r.map(|(slope, intercept)| Ramp { slope, intercept })).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn excluding_neighborhood_separates(n in 1u64..10_000, m in 1u64..100_000) {
        let x = FanPoint::at(n, m);
        let u = excluding_neighborhood(&x).unwrap();
        prop_assert!(!u.contains(&x));
        prop_assert!(u.contains(&FanPoint::Apex));
    }

    #[test]
    fn larger_thresholds_shrink_neighborhoods(u in arb_neighborhood(), delta in 0u64..20, n in 1u64..30, d in 1u64..200) {
        let overrides: BTreeMap<u64, u64> = u.overrides().iter().map(|(&k, &t)| (k, t + delta)).collect();
        let ramp = u.ramp().map(|r| Ramp { slope: r.slope, intercept: r.intercept + delta as i64 });
        let bigger = NeighborhoodSpec::new(u.default_threshold() + delta, overrides, ramp).unwrap();
        prop_assert!(bigger.threshold(n) >= u.threshold(n));
        let x = FanPoint::at(n, d);
        prop_assert!(!bigger.contains(&x) || u.contains(&x));
    }

    #[test]
    fn separated_sets_miss_their_neighborhood(seed in any::<u64>(), k in 0u8..4) {
        let m = set(seed, k);
        let acc = accumulates_at_apex(&m);
        if let AccumulationCertificate::Separated { neighborhood } = &acc.certificate {
            prop_assert!(!acc.accumulates);
            let depth = (10 * neighborhood.max_threshold(TRUNC_SPOKES)).min(TRUNC_DEPTH);
            for (n, d) in oracle::truncation_points(&m, TRUNC_SPOKES, depth) {
                prop_assert!(!neighborhood.contains(&FanPoint::at(n, d)), "x({n},{d}) in U");
            }
        } else {
            prop_assert!(acc.accumulates);
        }
    }

    #[test]
    fn almost_disjointness_is_symmetric(s1 in any::<u64>(), s2 in any::<u64>(), k1 in 0u8..4, k2 in 0u8..4) {
        let a = set(s1, k1);
        let b = set(s2, k2);
        prop_assert_eq!(a.almost_disjoint(&b), b.almost_disjoint(&a));
        prop_assert_eq!(a.almost_disjoint(&a), !a.cardinality_class().is_infinite());
    }

    #[test]
    fn ip_decisions_hold_on_truncation(seed in any::<u64>(), k in 0u8..4) {
        let m = set(seed, k);
        let d = m.in_ip();
        if d.in_ip {
            prop_assert!(matches!(m.spoke_support(), SpokeSupport::Spokes(_)));
            prop_assert_eq!(m.cardinality_class(), Cardinality::Infinite);
        } else if let InIpCertificate::Escape { neighborhood, .. } = &d.certificate {
            prop_assert!(oracle::escaping_points(&m, neighborhood, 100).len() == 100);
        }
        if !m.rows().is_empty() {
            let rows_only = DefinableSet::from_rows(m.rows().to_vec());
            prop_assert!(!accumulates_at_apex(&rows_only).accumulates);
        }
    }

    #[test]
    fn absorption_indices_are_sound(seed in any::<u64>()) {
        let t = corpus::random_sequence(&mut rng_for(seed, "invariants/seq"), true);
        let c = t.converges_to_apex();
        prop_assert_eq!(c.converges, matches!(c.certificate, ConvergenceCertificate::Absorbing { .. }));
        if c.converges {
            for u in oracle::sampled_neighborhoods() {
                let n = t.absorption_index(&u).expect("convergent");
                prop_assert!(oracle::absorbed_on(&t, &u, n, n + 500));
                if n > 1 {
                    prop_assert!(!u.contains(&t.term(n - 1)));
                }
            }
        }
    }

    #[test]
    fn witness_certificates_are_sound(seed in any::<u64>()) {
        let mut rng = rng_for(seed, "invariants/witness");
        let f = corpus::random_function(&mut rng);
        let t = corpus::random_sequence(&mut rng, false);
        let w = f.in_witness_family(&t).unwrap();
        let v0 = f.apex_value();
        if let WitnessCertificate::Recurring { epsilon, .. } = &w.certificate {
            prop_assert!(w.member);
            for k in w.certificate.witness_indices(100) {
                prop_assert!(f.eval(&t.term(k)).gap(v0) >= *epsilon);
            }
        } else {
            prop_assert!(!w.member);
            prop_assert_eq!(oracle::late_deviations(&f, &t), 0);
        }
        if !f.discontinuous_at_apex().unwrap().discontinuous {
            prop_assert!(!w.member);
        }
    }

    #[test]
    fn discontinuity_iff_canonical_witness(seed in any::<u64>()) {
        let f = corpus::random_function(&mut rng_for(seed, "invariants/lemma"));
        let disc = f.discontinuous_at_apex().unwrap().discontinuous;
        let canonical = (1..=f.scan_bound())
            .any(|n| f.in_witness_family(&SequenceDescriptor::canonical(n)).unwrap().member);
        prop_assert_eq!(disc, canonical);
    }

    #[test]
    fn finite_modification_is_invisible(seed in any::<u64>()) {
        let mut rng = rng_for(seed, "invariants/modify");
        let t = corpus::random_sequence(&mut rng, true);
        let p = corpus::random_prefix(&mut rng, 12);
        let f = corpus::random_function(&mut rng);
        let (s, _) = t.modify_prefix(&p);
        prop_assert_eq!(s.converges_to_apex().converges, t.converges_to_apex().converges);
        match (f.in_witness_family(&t), f.in_witness_family(&s)) {
            (Ok(a), Ok(b)) => prop_assert_eq!(a.member, b.member),
            (a, b) => prop_assert_eq!(a.is_err(), b.is_err()),
        }
    }

    #[test]
    fn empty_intersection_of_prefix_families(seed in any::<u64>(), spoke in 1u64..5) {
        let a = SequenceDescriptor::canonical(spoke);
        let t = corpus::random_probe(&mut rng_for(seed, "invariants/probe"), &a);
        match t.first_disagreement(&a, 10_000) {
            Disagreement::Equal => prop_assert!(!TestSetDescriptor::b_n(a.clone(), 1).member_of(&t)),
            Disagreement::At(k) => {
                prop_assert!((1..=k).any(|n| !TestSetDescriptor::b_n(a.clone(), n).member_of(&t)));
            }
            Disagreement::AgreeUpTo(b) => prop_assert!(false, "agree up to {b}"),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn enumeration_round_trips(seed in any::<u64>()) {
        let m = corpus::ip_corpus(seed, 1, 8).remove(0);
        let t = SequenceDescriptor::enumerate_set(&m).unwrap();
        prop_assert!(t.is_injective().injective);
        prop_assert!(t.converges_to_apex().converges);
        let r = t.range_set();
        prop_assert!(!r.contains_apex);
        prop_assert_eq!(
            oracle::truncation_points(&r.set, TRUNC_SPOKES, TRUNC_DEPTH),
            oracle::truncation_points(&m, TRUNC_SPOKES, TRUNC_DEPTH)
        );
    }
}

#[test]
fn distinct_index_maps_give_distinct_sequences() {
    let mut rng = rng_for(11, "invariants/maps");
    let mut separated = 0;
    while separated < 1000 {
        let a = corpus::random_index_map(&mut rng);
        let b = corpus::random_index_map(&mut rng);
        if a == b {
            continue;
        }
        let ta = SequenceDescriptor::build_spoke_subsequence(&a).unwrap();
        let tb = SequenceDescriptor::build_spoke_subsequence(&b).unwrap();
        let brute = (1..=10_000).find(|&k| a.value(k) != b.value(k));
        match ta.first_disagreement(&tb, 10_000) {
            Disagreement::At(k) => assert_eq!(Some(k), brute),
            Disagreement::Equal => assert_eq!(brute, None, "{a:?} {b:?}"),
            d => panic!("{d:?}"),
        }
        separated += usize::from(brute.is_some());
    }
}
