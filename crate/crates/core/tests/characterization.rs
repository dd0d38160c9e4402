mod common;

use bv_core::analysis::ldc::{ldc, ldc_via_equivalence};
use bv_core::analysis::periodicity::{k_coding_periodicity, PeriodicityOptions, Verdict};
use bv_core::analysis::rank_one::{rank_one_structure, RankOneOutcome};
use bv_core::analysis::words::{certified_period, least_period};
use bv_core::coding::minimal_orbit_prefix;
use bv_core::corpus::{
    perturb_deficit, random_ldc_stationary, random_rank_one, random_stationary, RankOneShape, SpacerPolicy,
};
use bv_core::corpus;
use bv_core::{Alphabet, OrderedDiagram, RecursionTable};
use common::naive_least_period;
use proptest::prelude::*;

const LIMIT: u64 = 1_000_000;

fn agree(d: &OrderedDiagram, label: &str) {
    for n in 1..=6 {
        if !d.has_level(n + 1) {
            break;
        }
        for k in 1..=n.min(3) {
            if Alphabet::new(d, k).is_err() {
                continue;
            }
            let direct = ldc(d, n, k, LIMIT);
            let via = ldc_via_equivalence(d, n, k, LIMIT);
            match (direct, via) {
                (Ok(a), Ok(b)) => assert_eq!(a.pass(), b, "{} n={} k={}", label, n, k),
                (Err(_), Err(_)) => {}
                (a, b) => panic!("{} n={} k={}: {:?} vs {:?}", label, n, k, a.map(|r| r.pass()), b),
            }
        }
    }
}

#[test]
fn ldc_matches_its_equivalent_form_on_the_corpus() {
    for f in corpus::all() {
        if let Ok(d) = f.diagram() {
            agree(&d, f.name);
        }
    }
}

/// Two levels past the repeating row: deep enough for the structure, shallow
/// enough that the prefix is not clipped by the length cap.
fn horizon(table: &RecursionTable) -> usize {
    table.stationary_from.unwrap() + 2
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn ldc_matches_its_equivalent_form_on_random_diagrams(seed in any::<u64>(), k in 1usize..=3, branching in any::<bool>()) {
        let policy = if branching { SpacerPolicy::Branching } else { SpacerPolicy::Isolated };
        let d = random_stationary(seed, k, 4, policy).unwrap();
        agree(&d, &format!("seed {}", seed));
    }

    #[test]
    fn ldc_diagrams_code_periodically(seed in any::<u64>(), k in 1usize..=3) {
        let d = random_ldc_stationary(seed, k).unwrap();
        let report = k_coding_periodicity(&d, 1, &PeriodicityOptions::default()).unwrap();
        let Verdict::Periodic { period, .. } = &report.verdict else {
            panic!("seed {}: {:?}", seed, report.verdict);
        };
        let cert = ldc(&d, 2, 1, LIMIT).unwrap().certificate().cloned().unwrap();
        let prefix = minimal_orbit_prefix(&d, 1, 10_000, 64).unwrap();
        let p = least_period(prefix.letters()).unwrap();
        let w = cert.period_word();
        prop_assert_eq!(w.len() % p, 0);
        prop_assert_eq!(p, period.len());
        for (i, l) in prefix.letters().iter().enumerate() {
            prop_assert_eq!(*l, w.letters()[i % w.len()]);
        }
    }

    #[test]
    fn one_broken_deficit_breaks_periodicity(seed in any::<u64>(), k in 1usize..=3) {
        let d = random_ldc_stationary(seed, k).unwrap();
        let Some(p) = perturb_deficit(&d, seed) else { return Ok(()) };
        for n in 2..=6 {
            prop_assert!(!ldc(&p, n, 1, LIMIT).unwrap().pass(), "n={}", n);
        }
        let report = k_coding_periodicity(&p, 1, &PeriodicityOptions::default()).unwrap();
        prop_assert_eq!(&report.verdict, &Verdict::Aperiodic);
        let prefix = minimal_orbit_prefix(&p, 1, 10_000, 64).unwrap();
        prop_assert!(least_period(prefix.letters()).unwrap() > 5_000);
    }

    #[test]
    fn settled_rank_one_recursions_are_periodic(seed in any::<u64>()) {
        let table = random_rank_one(seed, RankOneShape::Periodic);
        let RankOneOutcome::Structure(s) = rank_one_structure(&table, horizon(&table)).unwrap() else {
            panic!("seed {}", seed);
        };
        let d = OrderedDiagram::from_recursion(&table).unwrap();
        for k in 1..=3 {
            if !d.has_level(k) {
                continue;
            }
            let report = k_coding_periodicity(&d, k, &PeriodicityOptions::default()).unwrap();
            prop_assert_eq!(report.verdict.name(), "periodic", "k={}", k);
            let prefix = minimal_orbit_prefix(&d, k, 10_000, 64).unwrap();
            prop_assert!(certified_period(prefix.letters()).is_some(), "k={}", k);
        }
        let prefix = minimal_orbit_prefix(&d, 1, 10_000, 64).unwrap();
        prop_assert_eq!(naive_least_period(prefix.letters()), s.period.len());
    }

    #[test]
    fn unsettled_rank_one_recursions_are_refuted(seed in any::<u64>()) {
        let table = random_rank_one(seed, RankOneShape::Broken);
        let outcome = rank_one_structure(&table, horizon(&table)).unwrap();
        prop_assert!(matches!(outcome, RankOneOutcome::Refutation { .. }), "{:?}", outcome);
        let d = OrderedDiagram::from_recursion(&table).unwrap();
        let prefix = minimal_orbit_prefix(&d, 1, 10_000, 64).unwrap();
        prop_assert_eq!(certified_period(prefix.letters()), None);
    }
}
