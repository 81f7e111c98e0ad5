mod common;

use std::collections::{BTreeMap, HashMap};

use common::{edge_set, random_hypergraph, region_sizes, Oracle};
use hmotif::exact::{collect_instances, count_exact_with, overlap_stats, per_hyperedge_features, DEFAULT_OVERLAP_CAP};
use hmotif::motif::{classify_triple, region_cardinalities};
use hmotif::{count_exact, project, EdgeId, Hypergraph, NUM_MOTIFS};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

#[test]
fn exact_counts_match_brute_force() {
    let oracle = Oracle::new();
    for seed in 0..40 {
        let g = random_hypergraph(seed, 10 + (seed as usize % 40), 6 + seed % 30, 5);
        let p = project(&g);
        assert_eq!(count_exact(&g, &p).counts, oracle.counts(&g), "seed {seed}");
    }
}

#[test]
fn enumeration_lists_each_instance_once() {
    let oracle = Oracle::new();
    let g = random_hypergraph(7, 35, 20, 4);
    let p = project(&g);
    let mut got: Vec<([EdgeId; 3], usize)> = collect_instances(&g, &p).iter().map(|i| (i.sorted_edges(), i.motif.index())).collect();
    got.sort_unstable();
    let mut want = oracle.instances(&g);
    want.sort_unstable();
    assert_eq!(got, want);
}

#[test]
fn region_cardinalities_match_set_arithmetic() {
    let mut r = common::rng(99);
    let mut checked = 0;
    for seed in 0..20 {
        let g = random_hypergraph(seed, 40, 15, 6);
        let p = project(&g);
        let n = g.num_edges() as EdgeId;
        for _ in 0..1500 {
            let i = r.random_range(0..n);
            let j = r.random_range(0..n);
            let k = r.random_range(0..n);
            if i == j || j == k || i == k {
                continue;
            }
            let (a, b, c) = (edge_set(&g, i), edge_set(&g, j), edge_set(&g, k));
            let overlapping = [(&a, &b), (&b, &c), (&c, &a)].iter().filter(|(x, y)| !x.is_disjoint(y)).count();
            if overlapping < 2 {
                assert!(region_cardinalities(&g, &p, i, j, k).is_err());
                continue;
            }
            assert_eq!(region_cardinalities(&g, &p, i, j, k).unwrap().0, region_sizes(&a, &b, &c));
            checked += 1;
        }
    }
    assert!(checked >= 10_000, "only {checked} triples checked");
}

#[test]
fn classification_is_permutation_invariant() {
    let oracle = Oracle::new();
    let g = random_hypergraph(3, 30, 12, 5);
    let p = project(&g);
    for ([i, j, k], t) in oracle.instances(&g) {
        for [x, y, z] in [[i, j, k], [i, k, j], [j, i, k], [j, k, i], [k, i, j], [k, j, i]] {
            assert_eq!(classify_triple(&g, &p, x, y, z).unwrap().index(), t);
        }
    }
}

#[test]
fn counts_do_not_depend_on_workers() {
    let g = random_hypergraph(11, 120, 40, 6);
    let p = project(&g);
    let base = count_exact_with(&g, &p, 1);
    for w in [2, 4, 8] {
        assert_eq!(count_exact_with(&g, &p, w), base);
    }
}

#[test]
fn counts_do_not_depend_on_input_order() {
    let mut r = common::rng(5);
    let g = random_hypergraph(21, 60, 25, 5);
    let p = project(&g);
    let base = count_exact(&g, &p);
    let mut edges: Vec<Vec<u64>> = g.edges().iter().map(|e| e.iter().map(|&v| g.label(v).parse().unwrap()).collect()).collect();
    for _ in 0..5 {
        edges.shuffle(&mut r);
        for e in edges.iter_mut() {
            e.shuffle(&mut r);
        }
        let h = Hypergraph::from_edges(edges.clone()).unwrap();
        assert_eq!(count_exact(&h, &project(&h)), base);
    }
}

#[test]
fn features_sum_to_three_times_counts() {
    for seed in 0..10 {
        let g = random_hypergraph(seed, 50, 20, 5);
        let p = project(&g);
        let m = count_exact(&g, &p);
        let f = per_hyperedge_features(&g, &p);
        for t in 0..NUM_MOTIFS {
            assert_eq!(f.iter().map(|row| row[t]).sum::<u64>(), 3 * m.counts[t]);
        }
    }
}

fn choose2(x: u64) -> u64 {
    x * x.saturating_sub(1) / 2
}

/// Pair statistics from per-hyperedge and per-pair instance incidence counts.
#[test]
fn overlap_stats_match_incidence_counting() {
    let oracle = Oracle::new();
    for seed in 0..6 {
        let g = random_hypergraph(100 + seed, 25, 12, 4);
        let p = project(&g);
        let stats = overlap_stats(&g, &p, DEFAULT_OVERLAP_CAP).unwrap();
        let instances = oracle.instances(&g);
        for t in 0..NUM_MOTIFS {
            let mine: Vec<[EdgeId; 3]> = instances.iter().filter(|x| x.1 == t).map(|x| x.0).collect();
            let m = mine.len() as u64;
            let mut per_edge: HashMap<EdgeId, u64> = HashMap::new();
            let mut per_pair: BTreeMap<(EdgeId, EdgeId), u64> = BTreeMap::new();
            for [a, b, c] in &mine {
                for e in [a, b, c] {
                    *per_edge.entry(*e).or_default() += 1;
                }
                for pair in [(*a, *b), (*b, *c), (*a, *c)] {
                    *per_pair.entry(pair).or_default() += 1;
                }
            }
            let p2: u64 = per_pair.values().map(|&c| choose2(c)).sum();
            let p1 = per_edge.values().map(|&c| choose2(c)).sum::<u64>() - 2 * p2;
            let p0 = choose2(m) - p1 - p2;
            let q1: u64 = per_pair
                .iter()
                .filter(|((a, b), _)| !edge_set(&g, *a).is_disjoint(&edge_set(&g, *b)))
                .map(|(_, &c)| choose2(c))
                .sum();
            assert_eq!(stats.p[t], [p0, p1, p2], "seed {seed} motif {}", t + 1);
            assert_eq!(stats.q[t], [choose2(m) - q1, q1], "seed {seed} motif {}", t + 1);
        }
    }
}

fn arb_hypergraph() -> impl Strategy<Value = Vec<Vec<u64>>> {
    prop::collection::vec(prop::collection::vec(0u64..12, 1..5), 3..18)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prop_exact_matches_oracle(edges in arb_hypergraph()) {
        let g = Hypergraph::from_edges(edges).unwrap();
        let p = project(&g);
        prop_assert_eq!(count_exact(&g, &p).counts, Oracle::new().counts(&g));
    }

    // Motifs depend only on which regions are empty, so cloning every node
    // into several copies leaves every count unchanged.
    #[test]
    fn prop_counts_ignore_region_sizes(edges in arb_hypergraph(), copies in 2u64..4) {
        let g = Hypergraph::from_edges(edges.clone()).unwrap();
        let base = count_exact(&g, &project(&g));
        let blown: Vec<Vec<u64>> = edges
            .iter()
            .map(|e| e.iter().flat_map(|&v| (0..copies).map(move |c| v + 100 * c)).collect())
            .collect();
        let h = Hypergraph::from_edges(blown).unwrap();
        prop_assert_eq!(count_exact(&h, &project(&h)), base);
    }
}
