//! Exact motif counting, instance enumeration, per-hyperedge motif features
//! and pairwise overlap statistics of instances.
//!
//! Every instance `{e_i, e_j, e_k}` is discovered from a hyperedge `e_i`
//! adjacent to both others. An open instance has exactly one such center; a
//! closed one has three and is kept only from its smallest-id hyperedge.

use std::convert::Infallible;
use std::io;
use std::ops::{Index, IndexMut};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::hypergraph::{EdgeId, Hypergraph};
use crate::motif::{triple_intersection, MotifId, MotifTable, PatternClass, NUM_MOTIFS};
use crate::parallel;
use crate::projection::ProjectedGraph;

/// Exact per-motif instance counts, indexed by [`MotifId`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CountVector {
    pub counts: [u64; NUM_MOTIFS],
}

impl Default for CountVector {
    fn default() -> Self {
        CountVector { counts: [0; NUM_MOTIFS] }
    }
}

impl CountVector {
    pub fn new(counts: [u64; NUM_MOTIFS]) -> Self {
        CountVector { counts }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn to_f64(&self) -> [f64; NUM_MOTIFS] {
        self.counts.map(|c| c as f64)
    }

    pub fn iter(&self) -> impl Iterator<Item = (MotifId, u64)> + '_ {
        self.counts.iter().enumerate().map(|(t, &c)| (MotifId::from_index(t), c))
    }

    fn merge(mut self, other: CountVector) -> CountVector {
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self
    }
}

impl Index<MotifId> for CountVector {
    type Output = u64;

    fn index(&self, id: MotifId) -> &u64 {
        &self.counts[id.index()]
    }
}

impl IndexMut<MotifId> for CountVector {
    fn index_mut(&mut self, id: MotifId) -> &mut u64 {
        &mut self.counts[id.index()]
    }
}

/// One motif instance. `edges` are listed as discovered: `edges[0]` is the
/// hyperedge the instance was found from and `edges[1] < edges[2]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Instance {
    pub edges: [EdgeId; 3],
    pub motif: MotifId,
}

impl Instance {
    pub fn sorted_edges(&self) -> [EdgeId; 3] {
        let mut e = self.edges;
        e.sort_unstable();
        e
    }
}

/// Visits every instance centered at `e_i` that passes the
/// "`e_j ∩ e_k = ∅` or `i < min(j, k)`" rule. `scratch` must be all zero and
/// `|E|` long; it is left all zero.
fn visit_instances_at<E>(
    g: &Hypergraph,
    p: &ProjectedGraph,
    table: &MotifTable,
    i: EdgeId,
    scratch: &mut [u32],
    mut visit: impl FnMut(Instance) -> std::result::Result<(), E>,
) -> std::result::Result<(), E> {
    let ni = p.neighbors(i);
    let si = g.edge_size(i) as u32;
    for (a, &(j, w_ij)) in ni.iter().enumerate() {
        let nj = p.neighbors(j);
        for &(k, w) in nj {
            scratch[k as usize] = w;
        }
        let sj = g.edge_size(j) as u32;
        let mut result = Ok(());
        for &(k, w_ki) in &ni[a + 1..] {
            let w_jk = scratch[k as usize];
            // neighbors are sorted, so j < k and min(j, k) = j
            if w_jk != 0 && i > j {
                continue;
            }
            let triple = if w_jk != 0 { triple_intersection(g.edge(i), g.edge(j), g.edge(k)) } else { 0 };
            let sk = g.edge_size(k) as u32;
            match table.classify_overlaps([si, sj, sk], [w_ij, w_jk, w_ki], triple) {
                PatternClass::Motif(motif) => {
                    if let Err(e) = visit(Instance { edges: [i, j, k], motif }) {
                        result = Err(e);
                        break;
                    }
                }
                PatternClass::Invalid(reason) => unreachable!("connected distinct triple classified as {reason}"),
            }
        }
        for &(k, _) in nj {
            scratch[k as usize] = 0;
        }
        result?;
    }
    Ok(())
}

pub fn count_exact(g: &Hypergraph, p: &ProjectedGraph) -> CountVector {
    count_exact_with(g, p, 1)
}

/// Exact counts with the outer hyperedge loop spread over `workers` threads.
/// Each worker keeps private counters that are summed once at the end, so the
/// result does not depend on `workers`.
pub fn count_exact_with(g: &Hypergraph, p: &ProjectedGraph, workers: usize) -> CountVector {
    let table = MotifTable::global();
    let n = g.num_edges();
    let count_at = |scratch: &mut Vec<u32>, counts: &mut CountVector, i: EdgeId| {
        let _ = visit_instances_at::<Infallible>(g, p, table, i, scratch, |inst| {
            counts[inst.motif] += 1;
            Ok(())
        });
    };

    if workers <= 1 {
        let mut scratch = vec![0u32; n];
        let mut counts = CountVector::default();
        for i in 0..n as EdgeId {
            count_at(&mut scratch, &mut counts, i);
        }
        return counts;
    }

    parallel::run(workers, || {
        (0..n as EdgeId)
            .into_par_iter()
            .fold(
                || (vec![0u32; n], CountVector::default()),
                |(mut scratch, mut counts), i| {
                    count_at(&mut scratch, &mut counts, i);
                    (scratch, counts)
                },
            )
            .map(|(_, counts)| counts)
            .reduce(CountVector::default, CountVector::merge)
    })
}

/// Streams every instance exactly once, in hyperedge-id order of the
/// discovering hyperedge. Returns the number of instances emitted; a sink
/// error stops the enumeration and reports how many were emitted before it.
pub fn enumerate_instances<F>(g: &Hypergraph, p: &ProjectedGraph, mut sink: F) -> Result<u64>
where
    F: FnMut(Instance) -> io::Result<()>,
{
    let table = MotifTable::global();
    let mut scratch = vec![0u32; g.num_edges()];
    let mut emitted = 0u64;
    for i in 0..g.num_edges() as EdgeId {
        visit_instances_at(g, p, table, i, &mut scratch, |inst| {
            sink(inst)?;
            emitted += 1;
            Ok(())
        })
        .map_err(|source| Error::Sink { emitted, source })?;
    }
    Ok(emitted)
}

/// Collects all instances into memory.
pub fn collect_instances(g: &Hypergraph, p: &ProjectedGraph) -> Vec<Instance> {
    let mut out = Vec::new();
    enumerate_instances(g, p, |inst| {
        out.push(inst);
        Ok(())
    })
    .expect("collecting into a Vec cannot fail");
    out
}

/// Number of each motif's instances containing each hyperedge (26 features
/// per hyperedge).
pub fn per_hyperedge_features(g: &Hypergraph, p: &ProjectedGraph) -> Vec<[u64; NUM_MOTIFS]> {
    let mut features = vec![[0u64; NUM_MOTIFS]; g.num_edges()];
    let table = MotifTable::global();
    let mut scratch = vec![0u32; g.num_edges()];
    for i in 0..g.num_edges() as EdgeId {
        let _ = visit_instances_at::<Infallible>(g, p, table, i, &mut scratch, |inst| {
            for e in inst.edges {
                features[e as usize][inst.motif.index()] += 1;
            }
            Ok(())
        });
    }
    features
}

/// Indices of the `k` feature columns with the largest variance across rows,
/// ordered by decreasing variance (ties by column index).
pub fn top_variance_features(features: &[[u64; NUM_MOTIFS]], k: usize) -> Vec<usize> {
    let n = features.len().max(1) as f64;
    let mut variance: Vec<(usize, f64)> = (0..NUM_MOTIFS)
        .map(|t| {
            let mean = features.iter().map(|f| f[t] as f64).sum::<f64>() / n;
            let var = features.iter().map(|f| (f[t] as f64 - mean).powi(2)).sum::<f64>() / n;
            (t, var)
        })
        .collect();
    variance.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
    variance.into_iter().take(k).map(|(t, _)| t).collect()
}

/// Pairwise overlap statistics of the instances of each motif.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OverlapStats {
    /// `p[t][l]`: unordered instance pairs of motif t sharing l hyperedges.
    pub p: [[u64; 3]; NUM_MOTIFS],
    /// `q[t][n]`: unordered instance pairs of motif t sharing n hyperwedges.
    pub q: [[u64; 2]; NUM_MOTIFS],
}

pub const DEFAULT_OVERLAP_CAP: u64 = 20_000;

/// Compares every pair of same-motif instances. Quadratic in the instance
/// count; refuses to run when the total exceeds `cap`.
pub fn overlap_stats(g: &Hypergraph, p: &ProjectedGraph, cap: u64) -> Result<OverlapStats> {
    let total = count_exact(g, p).total();
    if total > cap {
        return Err(Error::TooManyInstances { count: total, cap });
    }
    let mut by_motif: Vec<Vec<[EdgeId; 3]>> = vec![Vec::new(); NUM_MOTIFS];
    for inst in collect_instances(g, p) {
        by_motif[inst.motif.index()].push(inst.sorted_edges());
    }

    let mut stats = OverlapStats { p: [[0; 3]; NUM_MOTIFS], q: [[0; 2]; NUM_MOTIFS] };
    for (t, instances) in by_motif.iter().enumerate() {
        for (a, x) in instances.iter().enumerate() {
            for y in &instances[a + 1..] {
                let shared: Vec<EdgeId> = x.iter().copied().filter(|e| y.contains(e)).collect();
                stats.p[t][shared.len()] += 1;
                let shares_wedge = shared.len() == 2 && p.overlap(shared[0], shared[1]) > 0;
                stats.q[t][shares_wedge as usize] += 1;
            }
        }
    }
    Ok(stats)
}
