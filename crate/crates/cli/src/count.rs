//! Counting back ends selected from the command line.

use std::str::FromStr;

use anyhow::{bail, Result};
use hmotif::exact::count_exact_with;
use hmotif::memo::{MemoBudget, NeighborhoodProvider, PinPolicy};
use hmotif::projection::{project_with, wedge_index, ProjectionOptions};
use hmotif::rng::child_seed;
use hmotif::sampling::{count_approx_edge_from, count_approx_wedge_from, SamplerKind};
use hmotif::{
    CountVector, Error, EstimateVector, Hypergraph, ProjectedGraph, SamplerConfig, NUM_MOTIFS,
};

use crate::UsageError;

/// A sample count, or a percentage of |E| (hyperedge sampling) or |∧|
/// (hyperwedge sampling). Accepts `N`, `s=N`, `r=N` and `x%`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SampleSpec {
    Count(u64),
    Percent(f64),
}

impl FromStr for SampleSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let body = s
            .strip_prefix("s=")
            .or_else(|| s.strip_prefix("r="))
            .unwrap_or(s)
            .trim();
        if let Some(p) = body.strip_suffix('%') {
            match p.trim().parse::<f64>() {
                Ok(x) if x > 0.0 && x.is_finite() => Ok(SampleSpec::Percent(x)),
                _ => Err(format!("invalid sample percentage `{s}`")),
            }
        } else {
            match body.parse::<u64>() {
                Ok(n) if n > 0 => Ok(SampleSpec::Count(n)),
                _ => Err(format!(
                    "sample count must be a positive integer or a percentage, got `{s}`"
                )),
            }
        }
    }
}

impl SampleSpec {
    pub fn resolve(self, population: usize) -> u64 {
        match self {
            SampleSpec::Count(n) => n,
            SampleSpec::Percent(p) => ((p / 100.0 * population as f64).ceil() as u64).max(1),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Method {
    Exact,
    Edge(SampleSpec),
    Wedge(SampleSpec),
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Exact => "exact",
            Method::Edge(_) => "hyperedge",
            Method::Wedge(_) => "hyperwedge",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Memo {
    pub budget: MemoBudget,
    pub policy: PinPolicy,
}

#[derive(Debug, Clone, Copy)]
pub struct CountOptions {
    pub seed: u64,
    pub workers: usize,
    pub trials: usize,
    pub memo: Option<Memo>,
    pub max_wedges: Option<usize>,
}

#[derive(Debug, Clone)]
pub enum Counted {
    Exact(CountVector),
    /// Mean over the trials.
    Estimate(EstimateVector),
}

#[derive(Debug, Clone)]
pub struct CountOutcome {
    pub counts: Counted,
    pub neighborhoods_constructed: Option<u64>,
}

impl CountOutcome {
    pub fn samples(&self) -> Option<u64> {
        match &self.counts {
            Counted::Exact(_) => None,
            Counted::Estimate(e) => Some(e.samples),
        }
    }
}

pub fn projection(
    g: &Hypergraph,
    workers: usize,
    max_wedges: Option<usize>,
) -> Result<ProjectedGraph> {
    Ok(project_with(
        g,
        ProjectionOptions {
            workers,
            max_wedges,
        },
    )?)
}

/// Runs `trials` independent estimates (trial t seeded with
/// `child_seed(seed, t)`) and averages them per motif, in trial order.
fn average<F>(
    kind: SamplerKind,
    samples: u64,
    opts: &CountOptions,
    mut run: F,
) -> Result<EstimateVector>
where
    F: FnMut(&SamplerConfig) -> hmotif::Result<EstimateVector>,
{
    if opts.trials == 0 {
        bail!(UsageError("--trials must be at least 1".into()));
    }
    let mut sum = [0.0; NUM_MOTIFS];
    let mut alpha = 0.0;
    for t in 0..opts.trials as u64 {
        let cfg = SamplerConfig::new(samples, child_seed(opts.seed, t)).with_workers(opts.workers);
        let est = run(&cfg)?;
        for (s, x) in sum.iter_mut().zip(est.estimates) {
            *s += x;
        }
        alpha = est.alpha;
    }
    Ok(EstimateVector {
        estimates: sum.map(|s| s / opts.trials as f64),
        kind,
        samples,
        alpha,
    })
}

pub fn count(g: &Hypergraph, method: Method, opts: &CountOptions) -> Result<CountOutcome> {
    if let (Method::Exact, Some(_)) = (method, opts.memo) {
        bail!(UsageError(
            "--memo-budget only applies to the samplers".into()
        ));
    }
    if let Some(memo) = opts.memo {
        let wedges = wedge_index(g, opts.workers);
        if let Some(budget) = opts.max_wedges.filter(|&b| wedges.len() > b) {
            return Err(Error::MemoryBudget {
                budget,
                reached: wedges.len(),
            }
            .into());
        }
        let np = NeighborhoodProvider::with_budget(g, &wedges, memo.budget, memo.policy, opts.seed);
        let est = match method {
            Method::Edge(spec) => average(
                SamplerKind::Hyperedge,
                spec.resolve(g.num_edges()),
                opts,
                |cfg| count_approx_edge_from(g, &np, cfg),
            )?,
            Method::Wedge(spec) => average(
                SamplerKind::Hyperwedge,
                spec.resolve(wedges.len()),
                opts,
                |cfg| count_approx_wedge_from(g, &np, &wedges, cfg),
            )?,
            Method::Exact => unreachable!(),
        };
        return Ok(CountOutcome {
            counts: Counted::Estimate(est),
            neighborhoods_constructed: Some(np.stats().neighborhoods_constructed),
        });
    }

    let p = projection(g, opts.workers, opts.max_wedges)?;
    let counts = match method {
        Method::Exact => Counted::Exact(count_exact_with(g, &p, opts.workers)),
        Method::Edge(spec) => Counted::Estimate(average(
            SamplerKind::Hyperedge,
            spec.resolve(g.num_edges()),
            opts,
            |cfg| count_approx_edge_from(g, &p, cfg),
        )?),
        Method::Wedge(spec) => Counted::Estimate(average(
            SamplerKind::Hyperwedge,
            spec.resolve(p.num_wedges()),
            opts,
            |cfg| count_approx_wedge_from(g, &p, p.wedges(), cfg),
        )?),
    };
    Ok(CountOutcome {
        counts,
        neighborhoods_constructed: None,
    })
}
