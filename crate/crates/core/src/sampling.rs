//! Approximate counting by sampling hyperedges or hyperwedges uniformly with
//! replacement, and the closed-form variances of both estimators.
//!
//! Samples are split into one quota per worker: worker `w` takes
//! `s / W` samples (plus one while `w < s % W`) drawn from
//! [`rng::stream(seed, w)`](crate::rng::stream). Raw tallies are integers and
//! are summed before scaling, so a fixed `(seed, workers)` pair always gives
//! the same estimate regardless of thread scheduling.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{CountVector, OverlapStats};
use crate::hypergraph::{EdgeId, Hypergraph};
use crate::motif::{triple_intersection, MotifId, MotifTable, PatternClass, NUM_MOTIFS};
use crate::parallel;
use crate::projection::{Hyperwedge, NeighborSource, ProjectedGraph};
use crate::rng;

pub type Tallies = [u64; NUM_MOTIFS];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SamplerConfig {
    /// `s` for hyperedge sampling, `r` for hyperwedge sampling.
    pub samples: u64,
    pub seed: u64,
    pub workers: usize,
}

impl SamplerConfig {
    pub fn new(samples: u64, seed: u64) -> Self {
        SamplerConfig { samples, seed, workers: 1 }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = workers;
        self
    }

    /// Number of samples taken by worker `w`.
    pub fn quota(&self, w: usize) -> u64 {
        let workers = self.workers.max(1) as u64;
        let w = w as u64;
        self.samples / workers + u64::from(w < self.samples % workers)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SamplerKind {
    Hyperedge,
    Hyperwedge,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EstimateVector {
    pub estimates: [f64; NUM_MOTIFS],
    pub kind: SamplerKind,
    pub samples: u64,
    /// `s / |E|` or `r / |∧|`; 0 when there was nothing to sample.
    pub alpha: f64,
}

impl EstimateVector {
    pub fn get(&self, id: MotifId) -> f64 {
        self.estimates[id.index()]
    }

    pub fn total(&self) -> f64 {
        self.estimates.iter().sum()
    }
}

fn classify(g: &Hypergraph, table: &MotifTable, [i, j, k]: [EdgeId; 3], pairs: [u32; 3]) -> MotifId {
    let sizes = [g.edge_size(i) as u32, g.edge_size(j) as u32, g.edge_size(k) as u32];
    let triple = if pairs.iter().all(|&w| w > 0) { triple_intersection(g.edge(i), g.edge(j), g.edge(k)) } else { 0 };
    match table.classify_overlaps(sizes, pairs, triple) {
        PatternClass::Motif(id) => id,
        PatternClass::Invalid(reason) => unreachable!("connected distinct triple classified as {reason}"),
    }
}

/// Per-worker dense overlap arrays, all zero between samples.
struct Scratch {
    a: Vec<u32>,
    b: Vec<u32>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        Scratch { a: vec![0; n], b: vec![0; n] }
    }
}

/// Tallies every instance containing `e_i`, each exactly once.
fn tally_hyperedge<S: NeighborSource + ?Sized>(
    g: &Hypergraph,
    src: &S,
    table: &MotifTable,
    i: EdgeId,
    scratch: &mut Scratch,
    tallies: &mut Tallies,
) {
    let ni = src.neighbors_of(i);
    let mark_i = &mut scratch.a;
    let mark_j = &mut scratch.b;
    for &(k, w) in ni.iter() {
        mark_i[k as usize] = w;
    }
    for (a, &(j, w_ij)) in ni.iter().enumerate() {
        let nj = src.neighbors_of(j);
        for &(k, w) in nj.iter() {
            mark_j[k as usize] = w;
        }
        // both j and k adjacent to e_i: take each pair once with j < k
        for &(k, w_ki) in &ni[a + 1..] {
            let w_jk = mark_j[k as usize];
            tallies[classify(g, table, [i, j, k], [w_ij, w_jk, w_ki]).index()] += 1;
        }
        // k adjacent to e_j only
        for &(k, w_jk) in nj.iter() {
            if k != i && mark_i[k as usize] == 0 {
                tallies[classify(g, table, [i, j, k], [w_ij, w_jk, 0]).index()] += 1;
            }
        }
        for &(k, _) in nj.iter() {
            mark_j[k as usize] = 0;
        }
    }
    for &(k, _) in ni.iter() {
        mark_i[k as usize] = 0;
    }
}

/// Tallies every instance containing both `e_i` and `e_j`: one per
/// `e_k ∈ N_i ∪ N_j \ {e_i, e_j}`.
fn tally_hyperwedge<S: NeighborSource + ?Sized>(
    g: &Hypergraph,
    src: &S,
    table: &MotifTable,
    Hyperwedge { i, j }: Hyperwedge,
    scratch: &mut Scratch,
    tallies: &mut Tallies,
) {
    let ni = src.neighbors_of(i);
    let nj = src.neighbors_of(j);
    let mark = &mut scratch.a;
    for &(k, w) in ni.iter() {
        mark[k as usize] = w;
    }
    let w_ij = mark[j as usize];
    for &(k, w_jk) in nj.iter() {
        if k == i {
            continue;
        }
        let w_ki = mark[k as usize];
        tallies[classify(g, table, [i, j, k], [w_ij, w_jk, w_ki]).index()] += 1;
        mark[k as usize] = 0;
    }
    for &(k, w_ki) in ni.iter() {
        if k != j && mark[k as usize] != 0 {
            tallies[classify(g, table, [i, j, k], [w_ij, 0, w_ki]).index()] += 1;
        }
    }
    for &(k, _) in ni.iter() {
        mark[k as usize] = 0;
    }
}

/// Runs each worker's quota of uniform draws from `0..population` and sums
/// the tallies.
fn drive<F>(cfg: &SamplerConfig, num_edges: usize, population: u64, step: F) -> Tallies
where
    F: Fn(u64, &mut Scratch, &mut Tallies) + Sync,
{
    let worker = |w: usize| {
        let mut rng = rng::stream(cfg.seed, w as u64);
        let mut scratch = Scratch::new(num_edges);
        let mut tallies = [0u64; NUM_MOTIFS];
        for _ in 0..cfg.quota(w) {
            step(rng.random_range(0..population), &mut scratch, &mut tallies);
        }
        tallies
    };
    let add = |mut a: Tallies, b: Tallies| {
        for (x, y) in a.iter_mut().zip(b) {
            *x += y;
        }
        a
    };
    if cfg.workers <= 1 {
        return worker(0);
    }
    parallel::run(cfg.workers, || (0..cfg.workers).into_par_iter().map(worker).reduce(|| [0; NUM_MOTIFS], add))
}

/// Raw tallies for an explicit list of sampled hyperedges.
pub fn hyperedge_tallies<S: NeighborSource + ?Sized>(g: &Hypergraph, src: &S, samples: &[EdgeId]) -> Tallies {
    let table = MotifTable::global();
    let mut scratch = Scratch::new(g.num_edges());
    let mut tallies = [0; NUM_MOTIFS];
    for &i in samples {
        tally_hyperedge(g, src, table, i, &mut scratch, &mut tallies);
    }
    tallies
}

/// Raw tallies for an explicit list of sampled hyperwedges.
pub fn hyperwedge_tallies<S: NeighborSource + ?Sized>(g: &Hypergraph, src: &S, samples: &[Hyperwedge]) -> Tallies {
    let table = MotifTable::global();
    let mut scratch = Scratch::new(g.num_edges());
    let mut tallies = [0; NUM_MOTIFS];
    for &w in samples {
        tally_hyperwedge(g, src, table, w, &mut scratch, &mut tallies);
    }
    tallies
}

/// `M̄[t] = tally[t] · |E| / (3s)`
pub fn scale_hyperedge_tallies(tallies: &Tallies, samples: u64, num_edges: usize) -> EstimateVector {
    let factor = num_edges as f64 / (3.0 * samples as f64);
    EstimateVector {
        estimates: tallies.map(|c| c as f64 * factor),
        kind: SamplerKind::Hyperedge,
        samples,
        alpha: samples as f64 / num_edges as f64,
    }
}

/// `M̂[t] = tally[t] · |∧| / (2r)` for open motifs, `· |∧| / (3r)` for closed.
pub fn scale_hyperwedge_tallies(tallies: &Tallies, samples: u64, num_wedges: usize) -> EstimateVector {
    let mut estimates = [0.0; NUM_MOTIFS];
    if num_wedges > 0 {
        for id in MotifId::all() {
            let per = if id.is_open() { 2.0 } else { 3.0 };
            estimates[id.index()] = tallies[id.index()] as f64 * num_wedges as f64 / (per * samples as f64);
        }
    }
    let alpha = if num_wedges > 0 { samples as f64 / num_wedges as f64 } else { 0.0 };
    EstimateVector { estimates, kind: SamplerKind::Hyperwedge, samples, alpha }
}

/// Hyperedge sampling over any neighborhood source.
pub fn count_approx_edge_from<S: NeighborSource + ?Sized>(g: &Hypergraph, src: &S, cfg: &SamplerConfig) -> Result<EstimateVector> {
    if cfg.samples == 0 {
        return Err(Error::ZeroSamples);
    }
    if g.num_edges() == 0 {
        return Err(Error::EmptyHypergraph);
    }
    let table = MotifTable::global();
    let tallies = drive(cfg, g.num_edges(), g.num_edges() as u64, |i, scratch, tallies| {
        tally_hyperedge(g, src, table, i as EdgeId, scratch, tallies)
    });
    Ok(scale_hyperedge_tallies(&tallies, cfg.samples, g.num_edges()))
}

pub fn count_approx_edge(g: &Hypergraph, p: &ProjectedGraph, cfg: &SamplerConfig) -> Result<EstimateVector> {
    count_approx_edge_from(g, p, cfg)
}

/// Hyperwedge sampling: uniform draws from `wedges`, neighborhoods from `src`.
pub fn count_approx_wedge_from<S: NeighborSource + ?Sized>(
    g: &Hypergraph,
    src: &S,
    wedges: &[Hyperwedge],
    cfg: &SamplerConfig,
) -> Result<EstimateVector> {
    if cfg.samples == 0 {
        return Err(Error::ZeroSamples);
    }
    if wedges.is_empty() {
        log::warn!("no hyperwedges to sample; every estimate is 0");
        return Ok(scale_hyperwedge_tallies(&[0; NUM_MOTIFS], cfg.samples, 0));
    }
    let table = MotifTable::global();
    let tallies = drive(cfg, g.num_edges(), wedges.len() as u64, |x, scratch, tallies| {
        tally_hyperwedge(g, src, table, wedges[x as usize], scratch, tallies)
    });
    Ok(scale_hyperwedge_tallies(&tallies, cfg.samples, wedges.len()))
}

pub fn count_approx_wedge(g: &Hypergraph, p: &ProjectedGraph, cfg: &SamplerConfig) -> Result<EstimateVector> {
    count_approx_wedge_from(g, p, p.wedges(), cfg)
}

/// Variance of the hyperedge-sampling estimate with `s` samples:
/// `M(|E|−3)/(3s) + 2/(9s) · Σ_l p_l (l|E| − 9)`, with `p_l` counting
/// unordered instance pairs.
pub fn theoretical_variance_edge(m: &CountVector, stats: &OverlapStats, samples: u64, num_edges: usize) -> Result<[f64; NUM_MOTIFS]> {
    if samples == 0 {
        return Err(Error::ZeroSamples);
    }
    let s = samples as f64;
    let e = num_edges as f64;
    Ok(std::array::from_fn(|t| {
        let pairs: f64 = (0..3).map(|l| stats.p[t][l] as f64 * (l as f64 * e - 9.0)).sum();
        m.counts[t] as f64 * (e - 3.0) / (3.0 * s) + 2.0 * pairs / (9.0 * s)
    }))
}

/// Variance of the hyperwedge-sampling estimate with `r` samples. With
/// `w = 2` for open motifs and `w = 3` for closed ones:
/// `M(|∧|−w)/(w·r) + 2/(w²·r) · Σ_n q_n (n|∧| − w²)`.
pub fn theoretical_variance_wedge(
    m: &CountVector,
    stats: &OverlapStats,
    samples: u64,
    num_wedges: usize,
    table: &MotifTable,
) -> Result<[f64; NUM_MOTIFS]> {
    if samples == 0 {
        return Err(Error::ZeroSamples);
    }
    let r = samples as f64;
    let h = num_wedges as f64;
    Ok(std::array::from_fn(|t| {
        let w = table.wedges_per_instance(MotifId::from_index(t)) as f64;
        let pairs: f64 = (0..2).map(|n| stats.q[t][n] as f64 * (n as f64 * h - w * w)).sum();
        m.counts[t] as f64 * (h - w) / (w * r) + 2.0 * pairs / (w * w * r)
    }))
}

/// `Σ_t |M[t] − est[t]| / Σ_t M[t]`
pub fn relative_error(exact: &CountVector, est: &EstimateVector) -> Result<f64> {
    let total = exact.total();
    if total == 0 {
        return Err(Error::ZeroReference);
    }
    let diff: f64 = exact.counts.iter().zip(&est.estimates).map(|(&m, &x)| (m as f64 - x).abs()).sum();
    Ok(diff / total as f64)
}
