//! Randomized invariants checked with proptest.

mod common;

use common::{dense_block, dense_top_eigenvalue, nmi_oracle};
use gsbm::preference::all_community_preferences;
use gsbm::{gsbm_objective, nmi, power_iterate, Graph, Partition};
use proptest::prelude::*;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = Graph> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(proptest::option::weighted(0.5, 0.1f64..3.0), n * (n - 1) / 2).prop_map(move |ws| {
            let mut edges = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if let Some(w) = ws[k] {
                        edges.push((u, v, w));
                    }
                    k += 1;
                }
            }
            Graph::from_edges(n, edges).unwrap()
        })
    })
}

fn labels_strategy(n: usize, k: usize) -> impl Strategy<Value = Vec<usize>> {
    proptest::collection::vec(0..k, n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn objective_is_invariant_under_label_renaming(
        (g, labels, shift) in graph_strategy(9).prop_flat_map(|g| {
            let n = g.vertex_count();
            (Just(g), labels_strategy(n, 4), 1usize..50)
        })
    ) {
        let a = Partition::new(labels.clone());
        let b = Partition::new(labels.iter().map(|&z| (3 - z) * 7 + shift).collect());
        let qa = gsbm_objective(&g, &a, 1e-12).unwrap();
        let qb = gsbm_objective(&g, &b, 1e-12).unwrap();
        prop_assert!((qa - qb).abs() <= 1e-9 * qa.max(1.0));
        prop_assert_eq!(nmi(&a, &a).unwrap(), 1.0);
        let c = Partition::new(labels.iter().map(|&z| z * 11 + 2).collect());
        prop_assert_eq!(nmi(&b, &c).unwrap(), 1.0);
    }

    #[test]
    fn nmi_is_symmetric_and_bounded(a in labels_strategy(12, 4), b in labels_strategy(12, 5)) {
        let (pa, pb) = (Partition::new(a), Partition::new(b));
        let ab = nmi(&pa, &pb).unwrap();
        let ba = nmi(&pb, &pa).unwrap();
        prop_assert!((ab - ba).abs() < 1e-15);
        prop_assert!((0.0..=1.0).contains(&ab));
    }

    #[test]
    fn nmi_matches_contingency_oracle(a in labels_strategy(10, 4), b in labels_strategy(10, 4)) {
        let (pa, pb) = (Partition::new(a).normalized(), Partition::new(b).normalized());
        let got = nmi(&pa, &pb).unwrap();
        let want = nmi_oracle(pa.labels(), pb.labels()).clamp(0.0, 1.0);
        prop_assert!((got - want).abs() < 1e-12, "{} vs {}", got, want);
    }

    #[test]
    fn power_iteration_matches_dense_eigensolve(g in graph_strategy(12)) {
        let members: Vec<usize> = (0..g.vertex_count()).collect();
        let eig = power_iterate(&g, &members, 1e-12, 5000).unwrap();
        let want = dense_top_eigenvalue(&dense_block(&g, &members)).max(0.0);
        if eig.fallback {
            prop_assert_eq!(want, 0.0);
        } else {
            prop_assert!(eig.converged);
            prop_assert!((eig.eigenvalue - want).abs() <= 1e-8 * want.max(1.0), "{} vs {}", eig.eigenvalue, want);
            prop_assert!(eig.vector.iter().all(|&x| x >= 0.0));
        }
    }

    #[test]
    fn preferences_satisfy_both_eigen_identities(
        (g, labels) in graph_strategy(10).prop_flat_map(|g| {
            let n = g.vertex_count();
            (Just(g), labels_strategy(n, 3))
        })
    ) {
        let part = Partition::new(labels);
        for pv in all_community_preferences(&g, &part, 1e-12, 5000).unwrap() {
            if pv.fallback {
                continue;
            }
            let lambda = pv.eigenvalue;
            let norm_sq: f64 = pv.values.iter().map(|x| x * x).sum();
            let mut quad = 0.0;
            for (a, &u) in pv.members.iter().enumerate() {
                for &(v, w) in g.neighbors(u) {
                    if let Some(b) = pv.members.iter().position(|&x| x == v) {
                        quad += pv.values[a] * pv.values[b] * w;
                    }
                }
            }
            let target = lambda * lambda;
            prop_assert!((quad - target).abs() <= 1e-8 * target);
            prop_assert!((norm_sq * norm_sq - target).abs() <= 1e-8 * target);
        }
    }
}
