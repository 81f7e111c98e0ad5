//! Null-model hypergraphs from the Chung–Lu model on the star expansion.
//!
//! The hypergraph is viewed as a bipartite graph between nodes and
//! hyperedges. A random copy draws `m = Σ_i |e_i|` incidences, picking the
//! node side with probability proportional to `|E_v|` and the hyperedge side
//! proportional to `|e_i|`, independently. Repeated incidences collapse,
//! hyperedges that received no node vanish, and identical hyperedges merge.

use rand::distr::Distribution;
use rand::Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::count_exact;
use crate::hypergraph::{EdgeId, Hypergraph, NodeId};
use crate::motif::NUM_MOTIFS;
use crate::parallel;
use crate::projection::project;
use crate::rng;
use crate::sampling::{count_approx_edge, count_approx_wedge, SamplerConfig};

/// Star expansion of a hypergraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BipartiteView {
    /// `(v, e)` for every `v ∈ e`, sorted.
    pub edges: Vec<(NodeId, EdgeId)>,
    /// `d_v = |E_v|`
    pub left_degrees: Vec<u64>,
    /// `d_e = |e|`
    pub right_degrees: Vec<u64>,
}

pub fn to_bipartite(g: &Hypergraph) -> BipartiteView {
    let mut edges = Vec::with_capacity(g.total_incidences());
    for (e, members) in g.edges().iter().enumerate() {
        edges.extend(members.iter().map(|&v| (v, e as EdgeId)));
    }
    edges.sort_unstable();
    BipartiteView {
        edges,
        left_degrees: (0..g.num_nodes() as NodeId).map(|v| g.degree(v) as u64).collect(),
        right_degrees: (0..g.num_edges() as EdgeId).map(|e| g.edge_size(e) as u64).collect(),
    }
}

/// Groups incidences by their right endpoint; right nodes without any
/// incidence are dropped.
fn group_incidences(num_right: usize, incidences: &[(NodeId, EdgeId)]) -> Vec<Vec<NodeId>> {
    let mut members = vec![Vec::new(); num_right];
    for &(v, e) in incidences {
        members[e as usize].push(v);
    }
    members.retain(|m| !m.is_empty());
    members
}

impl BipartiteView {
    /// Converts back to a hypergraph whose node `v` is labelled `labels[v]`.
    pub fn to_hypergraph(&self, labels: &[String]) -> Result<Hypergraph> {
        Hypergraph::from_labeled_edges(labels, group_incidences(self.right_degrees.len(), &self.edges))
    }
}

/// Degree-proportional endpoint sampler backed by alias tables.
#[derive(Debug, Clone)]
pub struct ChungLu {
    left: WeightedAliasIndex<u64>,
    right: WeightedAliasIndex<u64>,
    draws: u64,
}

impl ChungLu {
    pub fn new(view: &BipartiteView) -> Result<Self> {
        let table = |w: &[u64]| {
            WeightedAliasIndex::new(w.to_vec()).map_err(|e| Error::InvalidArgument(format!("degree sequence: {e}")))
        };
        Ok(ChungLu {
            left: table(&view.left_degrees)?,
            right: table(&view.right_degrees)?,
            draws: view.edges.len() as u64,
        })
    }

    /// One candidate incidence.
    pub fn draw_pair<R: Rng + ?Sized>(&self, rng: &mut R) -> (NodeId, EdgeId) {
        (self.left.sample(rng) as NodeId, self.right.sample(rng) as EdgeId)
    }

    /// `m` candidate incidences with repeats removed, sorted.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<(NodeId, EdgeId)> {
        let mut out: Vec<(NodeId, EdgeId)> = (0..self.draws).map(|_| self.draw_pair(rng)).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn num_draws(&self) -> u64 {
        self.draws
    }
}

/// The random incidence set behind [`randomize_hypergraph`] for `seed`.
pub fn sample_bipartite(g: &Hypergraph, seed: u64) -> Result<Vec<(NodeId, EdgeId)>> {
    let model = ChungLu::new(&to_bipartite(g))?;
    Ok(model.sample(&mut rng::stream(seed, 0)))
}

pub fn randomize_hypergraph(g: &Hypergraph, seed: u64) -> Result<Hypergraph> {
    let incidences = sample_bipartite(g, seed)?;
    Hypergraph::from_labeled_edges(g.labels(), group_incidences(g.num_edges(), &incidences))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomizationConfig {
    pub trials: usize,
    pub seed: u64,
    pub workers: usize,
}

impl Default for RandomizationConfig {
    fn default() -> Self {
        RandomizationConfig { trials: 5, seed: 0, workers: 1 }
    }
}

impl RandomizationConfig {
    /// Seed of trial `t`.
    pub fn trial_seeds(&self) -> Vec<u64> {
        (0..self.trials as u64).map(|t| rng::child_seed(self.seed, t)).collect()
    }
}

/// How motifs are counted in each randomized hypergraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountingStrategy {
    Exact,
    ApproxEdge { samples: u64 },
    ApproxWedge { samples: u64 },
}

impl CountingStrategy {
    pub fn is_approximate(self) -> bool {
        !matches!(self, CountingStrategy::Exact)
    }

    /// Counts of `g`; sampler randomness comes from `seed`.
    pub fn count(self, g: &Hypergraph, seed: u64) -> Result<[f64; NUM_MOTIFS]> {
        let p = project(g);
        Ok(match self {
            CountingStrategy::Exact => count_exact(g, &p).to_f64(),
            CountingStrategy::ApproxEdge { samples } => count_approx_edge(g, &p, &SamplerConfig::new(samples, seed))?.estimates,
            CountingStrategy::ApproxWedge { samples } => count_approx_wedge(g, &p, &SamplerConfig::new(samples, seed))?.estimates,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NullCounts {
    pub mean: [f64; NUM_MOTIFS],
    pub seeds: Vec<u64>,
    pub per_trial: Vec<[f64; NUM_MOTIFS]>,
    pub strategy: CountingStrategy,
}

/// Per-motif mean counts over one randomized hypergraph per seed. Trials run
/// in parallel; the mean does not depend on the order of `seeds`.
pub fn null_counts_from_seeds(g: &Hypergraph, seeds: &[u64], strategy: CountingStrategy, workers: usize) -> Result<NullCounts> {
    if seeds.is_empty() {
        return Err(Error::InvalidArgument("at least one randomization trial is required".into()));
    }
    let trial = |&seed: &u64| -> Result<[f64; NUM_MOTIFS]> {
        let r = randomize_hypergraph(g, seed)?;
        strategy.count(&r, rng::child_seed(seed, u64::MAX))
    };
    let per_trial: Vec<[f64; NUM_MOTIFS]> = if workers <= 1 {
        seeds.iter().map(trial).collect::<Result<_>>()?
    } else {
        parallel::run(workers, || seeds.par_iter().map(trial).collect::<Result<_>>())?
    };

    let mean = std::array::from_fn(|t| {
        let mut column: Vec<f64> = per_trial.iter().map(|c| c[t]).collect();
        column.sort_by(f64::total_cmp);
        column.iter().sum::<f64>() / column.len() as f64
    });
    Ok(NullCounts { mean, seeds: seeds.to_vec(), per_trial, strategy })
}

pub fn null_counts(g: &Hypergraph, cfg: &RandomizationConfig, strategy: CountingStrategy) -> Result<NullCounts> {
    if cfg.trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    null_counts_from_seeds(g, &cfg.trial_seeds(), strategy, cfg.workers)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> Hypergraph {
        Hypergraph::from_edges([vec![1, 2, 3], vec![2, 3], vec![3, 4, 5], vec![1, 5]]).unwrap()
    }

    #[test]
    fn bipartite_round_trip() {
        let g = small();
        let b = to_bipartite(&g);
        assert_eq!(b.edges.len(), 10);
        assert_eq!(b.left_degrees.iter().sum::<u64>(), b.right_degrees.iter().sum::<u64>());
        let back = b.to_hypergraph(g.labels()).unwrap();
        assert_eq!(back.edges(), g.edges());
        assert_eq!(back.labels(), g.labels());
    }

    #[test]
    fn single_edge_star() {
        let g = Hypergraph::from_edges([vec![1, 2, 3]]).unwrap();
        assert_eq!(to_bipartite(&g).edges.len(), 3);
    }

    #[test]
    fn single_node_is_forced() {
        let g = Hypergraph::from_edges([vec![7]]).unwrap();
        let r = randomize_hypergraph(&g, 3).unwrap();
        assert_eq!(r.num_edges(), 1);
        assert_eq!(r.label(r.edge(0)[0]), "7");
    }

    #[test]
    fn randomization_is_seeded() {
        let g = small();
        assert_eq!(randomize_hypergraph(&g, 11).unwrap().edges(), randomize_hypergraph(&g, 11).unwrap().edges());
        let r = randomize_hypergraph(&g, 12).unwrap();
        assert!(r.total_incidences() <= g.total_incidences());
    }

    #[test]
    fn single_trial_mean_is_that_trial() {
        let g = small();
        let cfg = RandomizationConfig { trials: 1, seed: 4, workers: 1 };
        let null = null_counts(&g, &cfg, CountingStrategy::Exact).unwrap();
        assert_eq!(null.mean, null.per_trial[0]);
        assert_eq!(null.seeds.len(), 1);
    }

    #[test]
    fn zero_trials_rejected() {
        let cfg = RandomizationConfig { trials: 0, ..Default::default() };
        assert!(null_counts(&small(), &cfg, CountingStrategy::Exact).is_err());
    }
}
