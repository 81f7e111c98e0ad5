//! Speed/accuracy sweeps written as CSV rows.
//!
//! Three sweeps share one exact reference count: sample fractions
//! 2.5%, 5%, ..., 25% of |E| or |∧|; worker counts at a fixed fraction; and
//! memo budgets for hyperwedge sampling at a fixed fraction.

use std::io::Write;
use std::time::Instant;

use anyhow::Result;
use hmotif::exact::count_exact_with;
use hmotif::memo::{MemoBudget, PinPolicy};
use hmotif::rng::child_seed;
use hmotif::sampling::relative_error;
use hmotif::Hypergraph;

use crate::count::{count, projection, CountOptions, Counted, Memo, Method, SampleSpec};

pub const FRACTIONS: [f64; 10] = [2.5, 5.0, 7.5, 10.0, 12.5, 15.0, 17.5, 20.0, 22.5, 25.0];
pub const MEMO_BUDGETS: [f64; 5] = [0.0, 0.1, 1.0, 10.0, 100.0];

pub const HEADER: &str = "sweep,sampler,sample_pct,samples,workers,memo_budget_pct,trial,seconds,relative_error,neighborhoods_constructed";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sampler {
    Edge,
    Wedge,
}

impl Sampler {
    fn method(self, pct: f64) -> Method {
        match self {
            Sampler::Edge => Method::Edge(SampleSpec::Percent(pct)),
            Sampler::Wedge => Method::Wedge(SampleSpec::Percent(pct)),
        }
    }
}

#[derive(Debug, Clone)]
pub struct BenchOptions {
    pub samplers: Vec<Sampler>,
    pub trials: usize,
    pub seed: u64,
    pub workers: usize,
    pub worker_sweep: Vec<usize>,
    pub memo_budgets: Vec<f64>,
    pub memo_policy: PinPolicy,
    /// Sample percentage used by the worker and memo sweeps.
    pub fraction: f64,
    pub max_wedges: Option<usize>,
}

struct Point {
    sweep: &'static str,
    sampler: Sampler,
    pct: f64,
    workers: usize,
    memo: Option<f64>,
}

pub fn run(g: &Hypergraph, opts: &BenchOptions, out: &mut dyn Write) -> Result<()> {
    let start = Instant::now();
    let p = projection(g, opts.workers, opts.max_wedges)?;
    let exact = count_exact_with(g, &p, opts.workers);
    writeln!(
        out,
        "exact,exact,,,{},,0,{:.6},0,",
        opts.workers,
        start.elapsed().as_secs_f64()
    )?;
    drop(p);

    let mut points = Vec::new();
    for &sampler in &opts.samplers {
        for pct in FRACTIONS {
            points.push(Point {
                sweep: "fraction",
                sampler,
                pct,
                workers: opts.workers,
                memo: None,
            });
        }
        for &workers in &opts.worker_sweep {
            points.push(Point {
                sweep: "workers",
                sampler,
                pct: opts.fraction,
                workers,
                memo: None,
            });
        }
        if sampler == Sampler::Wedge {
            for &b in &opts.memo_budgets {
                points.push(Point {
                    sweep: "memo",
                    sampler,
                    pct: opts.fraction,
                    workers: opts.workers,
                    memo: Some(b),
                });
            }
        }
    }

    for pt in points {
        for trial in 0..opts.trials {
            let copts = CountOptions {
                seed: child_seed(opts.seed, trial as u64),
                workers: pt.workers,
                trials: 1,
                memo: pt.memo.map(|b| Memo {
                    budget: MemoBudget::Percent(b),
                    policy: opts.memo_policy,
                }),
                max_wedges: opts.max_wedges,
            };
            let t0 = Instant::now();
            let outcome = count(g, pt.sampler.method(pt.pct), &copts)?;
            let secs = t0.elapsed().as_secs_f64();
            let Counted::Estimate(est) = &outcome.counts else {
                unreachable!("samplers return estimates")
            };
            let err = relative_error(&exact, est)?;
            writeln!(
                out,
                "{},{},{},{},{},{},{},{:.6},{},{}",
                pt.sweep,
                match pt.sampler {
                    Sampler::Edge => "hyperedge",
                    Sampler::Wedge => "hyperwedge",
                },
                pt.pct,
                est.samples,
                pt.workers,
                pt.memo.map(|b| b.to_string()).unwrap_or_default(),
                trial,
                secs,
                err,
                outcome
                    .neighborhoods_constructed
                    .map(|c| c.to_string())
                    .unwrap_or_default(),
            )?;
        }
    }
    out.flush()?;
    Ok(())
}
