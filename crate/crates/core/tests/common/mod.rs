//! Shared generators and brute-force oracles for the integration tests.
//!
//! The oracle classifier works on explicit node sets: regions come from set
//! differences and intersections, and motif numbers are reassigned from
//! scratch by relabeling concrete set triples.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap};

use hmotif::{EdgeId, Hypergraph, NUM_MOTIFS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Set = BTreeSet<u32>;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Up to `num_edges` hyperedges over `num_nodes` nodes, sizes in `1..=max_size`.
pub fn random_hypergraph(seed: u64, num_edges: usize, num_nodes: u64, max_size: usize) -> Hypergraph {
    let mut r = rng(seed);
    let edges: Vec<Vec<u64>> = (0..num_edges)
        .map(|_| {
            let size = r.random_range(1..=max_size);
            (0..size).map(|_| r.random_range(0..num_nodes)).collect()
        })
        .collect();
    Hypergraph::from_edges(edges).unwrap()
}

/// Node popularity decays like `1 / (v+1)^1.3`, giving a few hub
/// hyperedges with large projected degree and a long tail.
pub fn skewed_hypergraph(seed: u64, num_edges: usize, num_nodes: u64) -> Hypergraph {
    let mut r = rng(seed);
    let weights: Vec<f64> = (0..num_nodes).map(|v| 1.0 / ((v + 1) as f64).powf(1.3)).collect();
    let total: f64 = weights.iter().sum();
    let pick = |r: &mut ChaCha8Rng| {
        let mut x = r.random::<f64>() * total;
        for (v, w) in weights.iter().enumerate() {
            if x < *w {
                return v as u64;
            }
            x -= w;
        }
        num_nodes - 1
    };
    let edges: Vec<Vec<u64>> = (0..num_edges)
        .map(|_| {
            let size = r.random_range(2..=5);
            (0..size).map(|_| pick(&mut r)).collect()
        })
        .collect();
    Hypergraph::from_edges(edges).unwrap()
}

pub fn edge_set(g: &Hypergraph, i: EdgeId) -> Set {
    g.edge(i).iter().copied().collect()
}

fn diff(a: &Set, b: &Set) -> Set {
    a.difference(b).copied().collect()
}

fn inter(a: &Set, b: &Set) -> Set {
    a.intersection(b).copied().collect()
}

/// The seven regions of `(a, b, c)` as explicit sets.
pub fn regions(a: &Set, b: &Set, c: &Set) -> [Set; 7] {
    let ab = inter(a, b);
    let bc = inter(b, c);
    let ca = inter(c, a);
    let abc = inter(&ab, c);
    [
        diff(&diff(a, b), c),
        diff(&diff(b, c), a),
        diff(&diff(c, a), b),
        diff(&ab, c),
        diff(&bc, a),
        diff(&ca, b),
        abc,
    ]
}

pub fn region_sizes(a: &Set, b: &Set, c: &Set) -> [u64; 7] {
    regions(a, b, c).map(|s| s.len() as u64)
}

fn pattern(a: &Set, b: &Set, c: &Set) -> u8 {
    regions(a, b, c).iter().enumerate().fold(0, |acc, (r, s)| acc | ((!s.is_empty() as u8) << r))
}

fn overlapping_pairs(a: &Set, b: &Set, c: &Set) -> usize {
    [(a, b), (b, c), (c, a)].iter().filter(|(x, y)| !x.is_disjoint(y)).count()
}

fn valid(a: &Set, b: &Set, c: &Set) -> bool {
    !a.is_empty() && !b.is_empty() && !c.is_empty() && a != b && b != c && c != a && overlapping_pairs(a, b, c) >= 2
}

fn canonical(a: &Set, b: &Set, c: &Set) -> u8 {
    [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)]
        .iter()
        .map(|(x, y, z)| pattern(x, y, z))
        .min()
        .unwrap()
}

/// Independent motif classifier over explicit node sets.
pub struct Oracle {
    index_of: HashMap<u8, usize>,
    open: [bool; NUM_MOTIFS],
}

impl Oracle {
    pub fn new() -> Self {
        // Pattern bits -> concrete sets: region r holds the single node r.
        const MEMBERS: [[bool; 3]; 7] = [
            [true, false, false],
            [false, true, false],
            [false, false, true],
            [true, true, false],
            [false, true, true],
            [true, false, true],
            [true, true, true],
        ];
        let mut canon: BTreeSet<(u8, bool)> = BTreeSet::new();
        for bits in 0u8..128 {
            let mut sets: [Set; 3] = Default::default();
            for (r, m) in MEMBERS.iter().enumerate() {
                if bits >> r & 1 == 1 {
                    for x in 0..3 {
                        if m[x] {
                            sets[x].insert(r as u32);
                        }
                    }
                }
            }
            let [a, b, c] = &sets;
            if valid(a, b, c) {
                canon.insert((canonical(a, b, c), overlapping_pairs(a, b, c) == 2));
            }
        }
        let closed: Vec<u8> = canon.iter().filter(|c| !c.1).map(|c| c.0).collect();
        let open: Vec<u8> = canon.iter().filter(|c| c.1).map(|c| c.0).collect();
        assert_eq!(closed.len(), 20);
        assert_eq!(open.len(), 6);
        let mut index_of = HashMap::new();
        let mut is_open = [false; NUM_MOTIFS];
        let closed_ids = (1..=16).chain(23..=26);
        for (id, c) in closed_ids.zip(&closed) {
            index_of.insert(*c, id - 1);
        }
        for (id, c) in (17..=22).zip(&open) {
            index_of.insert(*c, id - 1);
            is_open[id - 1] = true;
        }
        Oracle { index_of, open: is_open }
    }

    /// 0-based motif index, or `None` for an invalid triple.
    pub fn classify(&self, a: &Set, b: &Set, c: &Set) -> Option<usize> {
        valid(a, b, c).then(|| self.index_of[&canonical(a, b, c)])
    }

    pub fn is_open(&self, t: usize) -> bool {
        self.open[t]
    }

    /// Every connected triple with its motif index, `i < j < k`.
    pub fn instances(&self, g: &Hypergraph) -> Vec<([EdgeId; 3], usize)> {
        let sets: Vec<Set> = (0..g.num_edges() as EdgeId).map(|i| edge_set(g, i)).collect();
        let n = sets.len();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                for k in j + 1..n {
                    if let Some(t) = self.classify(&sets[i], &sets[j], &sets[k]) {
                        out.push(([i as EdgeId, j as EdgeId, k as EdgeId], t));
                    }
                }
            }
        }
        out
    }

    pub fn counts(&self, g: &Hypergraph) -> [u64; NUM_MOTIFS] {
        let mut c = [0; NUM_MOTIFS];
        for (_, t) in self.instances(g) {
            c[t] += 1;
        }
        c
    }
}

/// Sample mean and standard error of the mean.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

pub fn sample_variance(xs: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
}
