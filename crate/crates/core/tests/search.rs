mod common;

use std::collections::BTreeSet;

use common::{h_tree, rng};
use mtree_embed::enumerate::{enumerate_topologies, enumerate_trees};
use mtree_embed::random::random_tree;
use mtree_embed::rational::{int, ratio};
use mtree_embed::search::{PairScope, SearchConfig, SearchOutcome};
use mtree_embed::sweep::{SweepConfig, SweepError, SweepOutcome};
use mtree_embed::{
    check_certificate, conjecture_sweep, search_embed_linf, search_embed_linf_with,
    verify_isometry, MetricTree, StarTree,
};
use proptest::prelude::*;

fn star(k: usize) -> MetricTree {
    StarTree::uniform(k, int(1)).to_tree().unwrap()
}

#[test]
fn search_examples() {
    let t = star(3);
    let (emb, cert) = search_embed_linf(&t, 2).unwrap().unwrap();
    assert!(check_certificate(&t, &cert));
    assert!(verify_isometry(&t, &emb).unwrap().passed());
    assert_eq!(search_embed_linf(&star(5), 2).unwrap(), None);
    assert_eq!(search_embed_linf(&star(3), 1).unwrap(), None);
    assert!(search_embed_linf(&star(3), 0).is_err());
}

#[test]
fn stars_match_the_cube_bound() {
    for n in 1..=2 {
        for k in 2..=6 {
            let t = star(k);
            let found = search_embed_linf(&t, n).unwrap();
            assert_eq!(found.is_some(), k <= 1 << n, "k={k} n={n}");
            if let Some((emb, cert)) = found {
                assert!(check_certificate(&t, &cert));
                assert!(verify_isometry(&t, &emb).unwrap().passed());
            }
        }
    }
}

#[test]
fn tampered_certificates_are_rejected() {
    let h = h_tree();
    let (_, cert) = search_embed_linf(&h, 2).unwrap().unwrap();
    assert!(check_certificate(&h, &cert));

    let (&(a, b), w) = cert.witnesses.iter().next().unwrap();
    let (edge, _) = h.vertex_path(a, b)[0];
    let mut bent = cert.clone();
    bent.slopes.insert((edge, w.coordinate), ratio(1, 2));
    assert!(!check_certificate(&h, &bent));

    let mut missing = cert.clone();
    missing.witnesses.remove(&(a, b));
    assert!(!check_certificate(&h, &missing));

    let mut steep = cert.clone();
    let key = *steep.slopes.keys().next().unwrap();
    steep.slopes.insert(key, int(2));
    assert!(!check_certificate(&h, &steep));
}

#[test]
fn budget_exhaustion_is_inconclusive() {
    let config = SearchConfig {
        node_budget: 1,
        scope: PairScope::Leaves,
    };
    let r = search_embed_linf_with(&star(5), 2, &config).unwrap();
    assert_eq!(r.outcome, SearchOutcome::Inconclusive);
    assert!(search_embed_linf(&star(5), 2).unwrap().is_none());
}

#[test]
fn search_is_deterministic() {
    let h = h_tree();
    let a = search_embed_linf(&h, 2).unwrap();
    let b = search_embed_linf(&h, 2).unwrap();
    assert_eq!(a, b);
}

#[test]
fn leaf_witnesses_suffice() {
    let mut r = rng(41);
    for trial in 0..40 {
        let tree = random_tree(&mut r, 3 + trial % 4, 4);
        for n in 1..=3 {
            let leaves_only = search_embed_linf_with(&tree, n, &SearchConfig::default()).unwrap();
            let all = search_embed_linf_with(
                &tree,
                n,
                &SearchConfig {
                    scope: PairScope::AllVertices,
                    ..SearchConfig::default()
                },
            )
            .unwrap();
            let sat = |o: &SearchOutcome| match o {
                SearchOutcome::Found(..) => Some(true),
                SearchOutcome::Exhausted => Some(false),
                SearchOutcome::Inconclusive => None,
            };
            assert_eq!(sat(&leaves_only.outcome), sat(&all.outcome), "trial {trial} n={n}");
            assert!(sat(&leaves_only.outcome).is_some());
        }
    }
}

#[test]
fn sweep_examples() {
    let cfg = SweepConfig::default();
    let report = conjecture_sweep(2, 4, &[int(1)], &cfg).unwrap();
    assert_eq!(report.records.len(), 4);
    assert!(report.all_found_and_verified());

    let report = conjecture_sweep(1, 2, &[int(1), ratio(5, 2)], &cfg).unwrap();
    assert!(report.all_found_and_verified());
    assert_eq!(report.records.len(), 2);

    assert!(matches!(
        conjecture_sweep(2, 5, &[int(1)], &cfg),
        Err(SweepError::TooManyLeaves { .. })
    ));
}

#[test]
fn sweep_flags_exhausted_instances() {
    // Forcing dimension 1 on a star is impossible, which exercises the
    // counterexample path without breaking the leaf guard.
    let report = conjecture_sweep(1, 2, &[int(1)], &SweepConfig::default()).unwrap();
    assert_eq!(report.counterexample_candidates().count(), 0);
    let tight = SweepConfig {
        search: SearchConfig {
            node_budget: 0,
            scope: PairScope::Leaves,
        },
        ..SweepConfig::default()
    };
    let report = conjecture_sweep(2, 4, &[int(1)], &tight).unwrap();
    assert!(report
        .records
        .iter()
        .all(|r| r.outcome == SweepOutcome::Inconclusive && !r.counterexample_candidate));
}

#[test]
fn sweep_is_independent_of_worker_count() {
    let grid = [int(1), int(2)];
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| conjecture_sweep(2, 4, &grid, &SweepConfig::default()).unwrap())
    };
    let one = run(1);
    let four = run(4);
    assert_eq!(one, four);
    assert_eq!(one.to_jsonl(), four.to_jsonl());
}

#[test]
fn sweep_records_are_complete() {
    let report = conjecture_sweep(2, 3, &[int(1), int(2)], &SweepConfig::default()).unwrap();
    let first = report.to_jsonl().lines().next().unwrap().to_string();
    let v: serde_json::Value = serde_json::from_str(&first).unwrap();
    for key in ["topology_id", "weights", "dimension", "outcome", "nodes", "tree", "verified"] {
        assert!(v.get(key).is_some(), "{key}");
    }
    assert_eq!(v["weights"], serde_json::json!(["1"]));
    let rebuilt = mtree_embed::tree::parse_edge_list(v["tree"].as_str().unwrap()).unwrap();
    assert_eq!(rebuilt.leaf_count(), 2);
}

#[test]
fn enumerated_instances_are_distinct_topologies() {
    let mut seen = BTreeSet::new();
    for t in enumerate_topologies(6) {
        assert!(seen.insert(t.canonical.clone()));
    }
    assert_eq!(enumerate_trees(4, &[int(1)]).count(), 4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn search_results_are_sound(leaves in 2usize..6, n in 1usize..4, seed in any::<u64>()) {
        let tree = random_tree(&mut rng(seed), leaves, 6);
        let r = search_embed_linf_with(&tree, n, &SearchConfig::default()).unwrap();
        match r.outcome {
            SearchOutcome::Found(emb, cert) => {
                prop_assert!(check_certificate(&tree, &cert));
                prop_assert!(verify_isometry(&tree, &emb).unwrap().passed());
                prop_assert_eq!(emb, cert.embedding(&tree));
            }
            SearchOutcome::Exhausted => prop_assert!(leaves > 1 << n),
            SearchOutcome::Inconclusive => prop_assert!(false, "budget exhausted"),
        }
    }
}
