//! `hmotif`: command-line driver for hypergraph motif counting.
//!
//! Randomness comes from the single `--seed`. Trial `t` of any subcommand
//! (a repeated estimate, a randomized hypergraph, a benchmark repetition)
//! uses `child_seed(seed, t)`; inside a trial, sampler worker `w` draws from
//! ChaCha8 stream `w` of that seed. A sampler run inside a randomization
//! trial with seed `u` is seeded with `child_seed(u, u64::MAX)`.
//!
//! Exit codes: 0 ok, 1 usage, 2 input, 3 resource limit.

mod bench;
mod count;
mod manifest;
mod table;

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use hmotif::exact::{enumerate_instances, per_hyperedge_features, top_variance_features};
use hmotif::memo::{MemoBudget, PinPolicy};
use hmotif::profile::{
    characteristic_profile, cp_similarity_matrix, rank_difference, relative_count, significance,
    CharacteristicProfile,
};
use hmotif::randomize::{null_counts, randomize_hypergraph, CountingStrategy, RandomizationConfig};
use hmotif::sampling::{relative_error, SamplerKind};
use hmotif::{
    degree_stats, load_hypergraph, parallel, CountVector, EstimateVector, Hypergraph, InputFormat,
    MotifTable, NUM_MOTIFS,
};
use serde_json::json;

use crate::count::{CountOptions, Counted, Memo, Method, SampleSpec};
use crate::manifest::{ManifestConfig, RunManifest};
use crate::table::{open_output, Column, MotifTableOut};

/// A problem with the command line itself (exit code 1).
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Parser, Debug)]
#[command(
    name = "hmotif",
    version,
    about = "Count, estimate and profile hypergraph motifs"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// Worker threads for every parallel stage [default: available cores]
    #[arg(long, global = true, env = parallel::WORKERS_ENV, value_parser = clap::value_parser!(u64).range(1..))]
    workers: Option<u64>,
    /// Top-level seed for all randomness
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Token separator of input hypergraph files
    #[arg(long, global = true, value_enum, default_value_t = Format::Whitespace)]
    format: Format,
    /// Write JSON instead of TSV
    #[arg(long, global = true)]
    json: bool,
    /// Output file [default: stdout]
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,
    /// Also write the full run manifest (with timing) to this file
    #[arg(long, global = true)]
    manifest: Option<PathBuf>,
    /// Abort with exit code 3 when the projection exceeds this many hyperwedges
    #[arg(long, global = true)]
    max_wedges: Option<usize>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum Format {
    Whitespace,
    Csv,
}

#[derive(Args, Debug, Clone)]
#[group(multiple = false)]
struct MethodArgs {
    /// Count every instance exactly (default)
    #[arg(long)]
    exact: bool,
    /// Hyperedge sampling with N samples or x% of |E|
    #[arg(long, value_name = "N|x%")]
    approx_edge: Option<SampleSpec>,
    /// Hyperwedge sampling with N samples or x% of the hyperwedges
    #[arg(long, value_name = "N|x%")]
    approx_wedge: Option<SampleSpec>,
}

impl MethodArgs {
    fn method(&self) -> Method {
        match (self.approx_edge, self.approx_wedge) {
            (Some(s), _) => Method::Edge(s),
            (_, Some(r)) => Method::Wedge(r),
            _ => Method::Exact,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Size, degree and hyperwedge statistics
    Stats { input: PathBuf },
    /// Hyperwedges of the projected graph as `i j omega` (1-based)
    Project { input: PathBuf },
    /// The 26 h-motifs with their open/closed flag and canonical pattern
    MotifTable,
    /// Exact or sampled per-motif counts
    Count {
        input: PathBuf,
        #[command(flatten)]
        method: MethodArgs,
        /// Independent sampler runs to average
        #[arg(long, default_value_t = 1)]
        trials: usize,
        /// Exact counts to report the relative error against
        #[arg(long)]
        reference: Option<PathBuf>,
        /// Cache budget for lazily built neighborhoods: entries, or x% of all adjacency entries
        #[arg(long)]
        memo_budget: Option<MemoBudget>,
        /// Which neighborhoods the cache keeps
        #[arg(long, default_value = "degree", requires = "memo_budget")]
        memo_policy: PinPolicy,
    },
    /// Every instance as `i j k motif` with 1-based hyperedge ids
    Enumerate { input: PathBuf },
    /// Per-hyperedge motif participation counts
    Features {
        input: PathBuf,
        /// Keep only the 7 highest-variance features
        #[arg(long)]
        hm7: bool,
    },
    /// Chung-Lu randomized hypergraphs and their mean motif counts
    Randomize {
        input: PathBuf,
        #[command(flatten)]
        method: MethodArgs,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        /// Write each randomized hypergraph into this directory
        #[arg(long)]
        emit_dir: Option<PathBuf>,
        /// Write the mean counts here instead of the main output
        #[arg(long)]
        counts_out: Option<PathBuf>,
    },
    /// Significance vector and characteristic profile from real and null counts
    Cp {
        #[arg(long)]
        real: PathBuf,
        #[arg(long)]
        null: PathBuf,
        #[arg(long, default_value_t = hmotif::profile::DEFAULT_EPSILON)]
        epsilon: f64,
    },
    /// Correlation matrix of characteristic profiles written by `cp`
    Compare {
        #[arg(required = true, num_args = 2..)]
        profiles: Vec<PathBuf>,
    },
    /// Time and relative error over sample fractions, worker counts and memo budgets (CSV)
    Bench {
        input: PathBuf,
        /// Sweep hyperedge sampling (default: both samplers)
        #[arg(long)]
        approx_edge: bool,
        /// Sweep hyperwedge sampling (default: both samplers)
        #[arg(long)]
        approx_wedge: bool,
        /// Repetitions per point
        #[arg(long, default_value_t = 3)]
        trials: usize,
        /// Worker counts for the worker sweep [default: 1 and --workers]
        #[arg(long, value_delimiter = ',')]
        worker_sweep: Vec<usize>,
        /// Memo budgets in percent for the memo sweep
        #[arg(long, value_delimiter = ',', default_values_t = bench::MEMO_BUDGETS)]
        memo_budgets: Vec<f64>,
        #[arg(long, default_value = "degree")]
        memo_policy: PinPolicy,
        /// Sample percentage for the worker and memo sweeps
        #[arg(long, default_value_t = 10.0)]
        fraction: f64,
    },
    /// Re-run the command recorded in a manifest
    Replay { manifest_file: PathBuf },
}

struct Run {
    config: ManifestConfig,
    constructed: Option<u64>,
}

fn load(path: &Path, format: Format) -> Result<Hypergraph> {
    let format = match format {
        Format::Whitespace => InputFormat::Whitespace,
        Format::Csv => InputFormat::Csv,
    };
    let (g, report) = load_hypergraph(path, format)?;
    log::info!(
        "{}: {} hyperedges, {} nodes, {:?}",
        path.display(),
        g.num_edges(),
        g.num_nodes(),
        report
    );
    Ok(g)
}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn integral_counts(v: &[f64; NUM_MOTIFS], path: &Path) -> Result<CountVector> {
    if let Some(t) = v.iter().position(|x| *x < 0.0 || x.fract() != 0.0) {
        bail!(
            "{}: reference count of motif {} is not a non-negative integer",
            path.display(),
            t + 1
        );
    }
    Ok(CountVector::new(v.map(|x| x as u64)))
}

fn execute(cli: Cli, args: &[String]) -> Result<Run> {
    let g = &cli.global;
    let workers = g
        .workers
        .map(|w| w as usize)
        .unwrap_or_else(parallel::default_workers);
    let mut cfg = ManifestConfig {
        args: manifest::strip_manifest_flag(args),
        workers,
        ..Default::default()
    };
    if let Some(o) = &g.output {
        cfg.outputs.push(o.display().to_string());
    }
    let mut constructed = None;

    match &cli.command {
        Command::Stats { input } => {
            cfg.subcommand = "stats".into();
            cfg.add_input(input)?;
            let hg = load(input, g.format)?;
            let stats = degree_stats(&hg);
            let wedges = count::projection(&hg, workers, g.max_wedges)?.num_wedges();
            let mut out = open_output(g.output.as_deref())?;
            if g.json {
                serde_json::to_writer_pretty(
                    &mut out,
                    &json!({ "manifest": { "hash": cfg.hash(), "config": &cfg }, "stats": stats, "hyperwedges": wedges }),
                )?;
                writeln!(out)?;
            } else {
                writeln!(out, "# manifest={}", cfg.hash())?;
                writeln!(out, "stat\tvalue")?;
                for (k, v) in [
                    ("nodes", stats.num_nodes),
                    ("hyperedges", stats.num_edges),
                    ("max_hyperedge_size", stats.max_edge_size),
                    ("incidences", stats.total_incidences),
                    ("hyperwedges", wedges),
                ] {
                    writeln!(out, "{k}\t{v}")?;
                }
            }
            out.flush()?;
        }

        Command::Project { input } => {
            cfg.subcommand = "project".into();
            cfg.add_input(input)?;
            let hg = load(input, g.format)?;
            let p = count::projection(&hg, workers, g.max_wedges)?;
            let mut out = open_output(g.output.as_deref())?;
            if g.json {
                let wedges: Vec<[u32; 3]> = p
                    .wedges()
                    .iter()
                    .map(|w| [w.i + 1, w.j + 1, p.overlap(w.i, w.j)])
                    .collect();
                serde_json::to_writer_pretty(
                    &mut out,
                    &json!({ "manifest": { "hash": cfg.hash(), "config": &cfg }, "wedges": wedges }),
                )?;
                writeln!(out)?;
            } else {
                writeln!(out, "# manifest={}", cfg.hash())?;
                writeln!(out, "i\tj\tomega")?;
                for w in p.wedges() {
                    writeln!(out, "{}\t{}\t{}", w.i + 1, w.j + 1, p.overlap(w.i, w.j))?;
                }
            }
            out.flush()?;
        }

        Command::MotifTable => {
            cfg.subcommand = "motif-table".into();
            let table = MotifTable::global();
            let mut out = open_output(g.output.as_deref())?;
            if g.json {
                serde_json::to_writer_pretty(
                    &mut out,
                    &json!({ "manifest": { "hash": cfg.hash(), "config": &cfg }, "motifs": table.classes() }),
                )?;
                writeln!(out)?;
            } else {
                writeln!(out, "# manifest={}", cfg.hash())?;
                writeln!(out, "motif\ttype\tpattern\torbit_size")?;
                for c in table.classes() {
                    // region r of the canonical pattern, left to right
                    let pattern: String = (0..7)
                        .map(|r| if c.canonical.region(r) { '1' } else { '0' })
                        .collect();
                    writeln!(
                        out,
                        "{}\t{}\t{}\t{}",
                        c.id,
                        if c.open { "open" } else { "closed" },
                        pattern,
                        c.members.len()
                    )?;
                }
            }
            out.flush()?;
        }

        Command::Count {
            input,
            method,
            trials,
            reference,
            memo_budget,
            memo_policy,
        } => {
            cfg.subcommand = "count".into();
            cfg.add_input(input)?;
            let method = method.method();
            if *trials == 0 {
                return Err(usage("--trials must be at least 1"));
            }
            if matches!(method, Method::Exact) && (memo_budget.is_some() || *trials != 1) {
                return Err(usage(
                    "--trials and --memo-budget only apply to --approx-edge / --approx-wedge",
                ));
            }
            let memo = memo_budget.map(|budget| Memo {
                budget,
                policy: *memo_policy,
            });
            cfg.sampler = Some(method.name().into());
            if !matches!(method, Method::Exact) {
                cfg.seed = Some(g.seed);
                cfg.trials = Some(*trials);
            }
            if let Some(m) = memo {
                cfg.memo_budget = memo_budget.map(|b| format!("{b:?}"));
                cfg.memo_policy = Some(format!("{:?}", m.policy).to_lowercase());
            }
            if let Some(r) = reference {
                cfg.add_input(r)?;
            }
            let hg = load(input, g.format)?;
            let opts = CountOptions {
                seed: g.seed,
                workers,
                trials: *trials,
                memo,
                max_wedges: g.max_wedges,
            };
            let outcome = count::count(&hg, method, &opts)?;
            cfg.samples = outcome.samples();
            constructed = outcome.neighborhoods_constructed;

            let mut comments = vec![("method".to_string(), method.name().to_string())];
            let (column, as_estimate) = match &outcome.counts {
                Counted::Exact(c) => {
                    let est = EstimateVector {
                        estimates: c.to_f64(),
                        kind: SamplerKind::Hyperedge,
                        samples: 0,
                        alpha: 1.0,
                    };
                    (Column::Int(c.counts), est)
                }
                Counted::Estimate(e) => {
                    comments.push(("samples".into(), e.samples.to_string()));
                    comments.push(("alpha".into(), e.alpha.to_string()));
                    (Column::Float(e.estimates), e.clone())
                }
            };
            if let Some(r) = reference {
                let exact = integral_counts(&table::read_column(r, "count")?, r)?;
                comments.push((
                    "relative_error".into(),
                    relative_error(&exact, &as_estimate)?.to_string(),
                ));
            }
            let mut out = open_output(g.output.as_deref())?;
            MotifTableOut {
                config: &cfg,
                comments,
                columns: vec![("count", column)],
            }
            .write(&mut out, g.json)?;
        }

        Command::Enumerate { input } => {
            cfg.subcommand = "enumerate".into();
            cfg.add_input(input)?;
            let hg = load(input, g.format)?;
            let p = count::projection(&hg, workers, g.max_wedges)?;
            let mut out = open_output(g.output.as_deref())?;
            let json = g.json;
            if json {
                write!(
                    out,
                    "{{\"manifest\":{},\"instances\":[",
                    json!({ "hash": cfg.hash(), "config": &cfg })
                )?;
            } else {
                writeln!(out, "# manifest={}", cfg.hash())?;
                writeln!(out, "i\tj\tk\tmotif")?;
            }
            let mut first = true;
            enumerate_instances(&hg, &p, |inst| {
                let [i, j, k] = inst.sorted_edges();
                if json {
                    let sep = if first { "" } else { "," };
                    first = false;
                    write!(out, "{sep}[{},{},{},{}]", i + 1, j + 1, k + 1, inst.motif)
                } else {
                    writeln!(out, "{}\t{}\t{}\t{}", i + 1, j + 1, k + 1, inst.motif)
                }
            })?;
            if json {
                writeln!(out, "]}}")?;
            }
            out.flush()?;
        }

        Command::Features { input, hm7 } => {
            cfg.subcommand = "features".into();
            cfg.add_input(input)?;
            let hg = load(input, g.format)?;
            let p = count::projection(&hg, workers, g.max_wedges)?;
            let features = per_hyperedge_features(&hg, &p);
            let cols: Vec<usize> = if *hm7 {
                top_variance_features(&features, 7)
            } else {
                (0..NUM_MOTIFS).collect()
            };
            let mut out = open_output(g.output.as_deref())?;
            if g.json {
                let rows: Vec<Vec<u64>> = features
                    .iter()
                    .map(|f| cols.iter().map(|&t| f[t]).collect())
                    .collect();
                let ids: Vec<usize> = cols.iter().map(|t| t + 1).collect();
                serde_json::to_writer(
                    &mut out,
                    &json!({ "manifest": { "hash": cfg.hash(), "config": &cfg }, "motifs": ids, "features": rows }),
                )?;
                writeln!(out)?;
            } else {
                writeln!(out, "# manifest={}", cfg.hash())?;
                write!(out, "hyperedge")?;
                for t in &cols {
                    write!(out, "\t{}", t + 1)?;
                }
                writeln!(out)?;
                for (e, f) in features.iter().enumerate() {
                    write!(out, "{}", e + 1)?;
                    for &t in &cols {
                        write!(out, "\t{}", f[t])?;
                    }
                    writeln!(out)?;
                }
            }
            out.flush()?;
        }

        Command::Randomize {
            input,
            method,
            trials,
            emit_dir,
            counts_out,
        } => {
            cfg.subcommand = "randomize".into();
            cfg.add_input(input)?;
            if *trials == 0 {
                return Err(usage("--trials must be at least 1"));
            }
            let method = method.method();
            cfg.seed = Some(g.seed);
            cfg.trials = Some(*trials);
            cfg.sampler = Some(method.name().into());
            if let Some(d) = emit_dir {
                cfg.outputs.push(d.display().to_string());
            }
            if let Some(c) = counts_out {
                cfg.outputs.push(c.display().to_string());
            }
            let hg = load(input, g.format)?;
            // Percentages resolve against the input hypergraph.
            let strategy = match method {
                Method::Exact => CountingStrategy::Exact,
                Method::Edge(s) => CountingStrategy::ApproxEdge {
                    samples: s.resolve(hg.num_edges()),
                },
                Method::Wedge(r @ SampleSpec::Percent(_)) => CountingStrategy::ApproxWedge {
                    samples: r.resolve(count::projection(&hg, workers, g.max_wedges)?.num_wedges()),
                },
                Method::Wedge(r) => CountingStrategy::ApproxWedge {
                    samples: r.resolve(0),
                },
            };
            if let CountingStrategy::ApproxEdge { samples }
            | CountingStrategy::ApproxWedge { samples } = strategy
            {
                cfg.samples = Some(samples);
            }
            let rc = RandomizationConfig {
                trials: *trials,
                seed: g.seed,
                workers,
            };
            if let Some(dir) = emit_dir {
                fs::create_dir_all(dir)
                    .with_context(|| format!("cannot create {}", dir.display()))?;
                for (t, seed) in rc.trial_seeds().into_iter().enumerate() {
                    let r = randomize_hypergraph(&hg, seed)?;
                    let path = dir.join(format!("random_{t:03}.txt"));
                    let mut f = open_output(Some(&path))?;
                    writeln!(f, "# manifest={}", cfg.hash())?;
                    writeln!(f, "# trial={t} seed={seed}")?;
                    r.write_to(&mut f)?;
                    f.flush()?;
                }
            }
            let null = null_counts(&hg, &rc, strategy)?;
            let comments = vec![
                ("method".to_string(), method.name().to_string()),
                ("trials".to_string(), trials.to_string()),
            ];
            let mut out = open_output(counts_out.as_deref().or(g.output.as_deref()))?;
            MotifTableOut {
                config: &cfg,
                comments,
                columns: vec![("count", Column::Float(null.mean))],
            }
            .write(&mut out, g.json)?;
        }

        Command::Cp {
            real,
            null,
            epsilon,
        } => {
            cfg.subcommand = "cp".into();
            cfg.add_input(real)?;
            cfg.add_input(null)?;
            if !(*epsilon > 0.0 && epsilon.is_finite()) {
                return Err(usage(format!("--epsilon must be positive, got {epsilon}")));
            }
            let (rv, nv) = (
                table::read_column(real, "count")?,
                table::read_column(null, "count")?,
            );
            let sig = significance(&rv, &nv, *epsilon)?;
            let cp = characteristic_profile(&sig.delta);
            let rd = rank_difference(&rv, &nv);
            let columns = vec![
                ("real", Column::Float(rv)),
                ("null", Column::Float(nv)),
                ("delta", Column::Float(sig.delta)),
                ("cp", Column::Float(cp.cp)),
                ("relative_count", Column::Float(relative_count(&rv, &nv))),
                (
                    "rank_difference",
                    Column::Float(std::array::from_fn(|t| rd[t] as f64)),
                ),
            ];
            let comments = vec![("epsilon".to_string(), epsilon.to_string())];
            let mut out = open_output(g.output.as_deref())?;
            MotifTableOut {
                config: &cfg,
                comments,
                columns,
            }
            .write(&mut out, g.json)?;
        }

        Command::Compare { profiles } => {
            cfg.subcommand = "compare".into();
            let mut cps = Vec::with_capacity(profiles.len());
            let mut names = Vec::with_capacity(profiles.len());
            for path in profiles {
                cfg.add_input(path)?;
                cps.push(CharacteristicProfile {
                    cp: table::read_column(path, "cp")?,
                });
                names.push(
                    path.file_stem()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_else(|| path.display().to_string()),
                );
            }
            let matrix = cp_similarity_matrix(&cps)?;
            let mut out = open_output(g.output.as_deref())?;
            if g.json {
                serde_json::to_writer_pretty(
                    &mut out,
                    &json!({ "manifest": { "hash": cfg.hash(), "config": &cfg }, "profiles": names, "matrix": matrix }),
                )?;
                writeln!(out)?;
            } else {
                writeln!(out, "# manifest={}", cfg.hash())?;
                writeln!(out, "profile\t{}", names.join("\t"))?;
                for (name, row) in names.iter().zip(&matrix) {
                    let cells: Vec<String> = row.iter().map(f64::to_string).collect();
                    writeln!(out, "{name}\t{}", cells.join("\t"))?;
                }
            }
            out.flush()?;
        }

        Command::Bench {
            input,
            approx_edge,
            approx_wedge,
            trials,
            worker_sweep,
            memo_budgets,
            memo_policy,
            fraction,
        } => {
            cfg.subcommand = "bench".into();
            cfg.add_input(input)?;
            if g.json {
                return Err(usage("bench writes CSV only"));
            }
            if *trials == 0 || !(*fraction > 0.0 && *fraction <= 100.0) {
                return Err(usage("bench needs --trials >= 1 and 0 < --fraction <= 100"));
            }
            if let Some(b) = memo_budgets.iter().find(|b| !(0.0..=100.0).contains(*b)) {
                return Err(usage(format!("memo budget {b}% is outside 0..=100")));
            }
            if worker_sweep.contains(&0) {
                return Err(usage("worker counts must be positive"));
            }
            let samplers = match (approx_edge, approx_wedge) {
                (true, false) => vec![bench::Sampler::Edge],
                (false, true) => vec![bench::Sampler::Wedge],
                _ => vec![bench::Sampler::Edge, bench::Sampler::Wedge],
            };
            let mut sweep = worker_sweep.clone();
            if sweep.is_empty() {
                sweep.push(1);
                if workers > 1 {
                    sweep.push(workers);
                }
            }
            cfg.seed = Some(g.seed);
            cfg.trials = Some(*trials);
            cfg.memo_policy = Some(format!("{memo_policy:?}").to_lowercase());
            let hg = load(input, g.format)?;
            let opts = bench::BenchOptions {
                samplers,
                trials: *trials,
                seed: g.seed,
                workers,
                worker_sweep: sweep,
                memo_budgets: memo_budgets.clone(),
                memo_policy: *memo_policy,
                fraction: *fraction,
                max_wedges: g.max_wedges,
            };
            let mut out = open_output(g.output.as_deref())?;
            writeln!(out, "# manifest={}", cfg.hash())?;
            writeln!(out, "{}", bench::HEADER)?;
            bench::run(&hg, &opts, &mut out)?;
        }

        Command::Replay { .. } => unreachable!("handled before dispatch"),
    }
    Ok(Run {
        config: cfg,
        constructed,
    })
}

/// Parses and runs one command line (without the binary name).
fn run(args: Vec<String>) -> Result<()> {
    let cli = match Cli::try_parse_from(
        std::iter::once("hmotif".to_string()).chain(args.iter().cloned()),
    ) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                e.print()?;
                return Ok(());
            }
            return Err(usage(e.render().to_string()));
        }
    };

    if let Command::Replay { manifest_file } = &cli.command {
        let m = manifest::read(manifest_file).map_err(|e| usage(format!("{e:#}")))?;
        for input in &m.config.inputs {
            let mut check = ManifestConfig::default();
            check.add_input(Path::new(&input.path))?;
            if check.inputs[0].sha256 != input.sha256 {
                bail!("{} changed since the manifest was written", input.path);
            }
        }
        log::info!("replaying {}", m.config.args.join(" "));
        return run(m.config.args);
    }

    let manifest_path = cli.global.manifest.clone();
    let start = Instant::now();
    let done = execute(cli, &args)?;
    if let Some(path) = manifest_path {
        let m = RunManifest {
            hash: done.config.hash(),
            config: done.config,
            wall_clock_secs: start.elapsed().as_secs_f64(),
            neighborhoods_constructed: done.constructed,
        };
        let mut f = open_output(Some(&path))?;
        serde_json::to_writer_pretty(&mut f, &m)?;
        writeln!(f)?;
        f.flush()?;
    }
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if cause.is::<UsageError>() {
            return 1;
        }
        if let Some(e) = cause.downcast_ref::<hmotif::Error>() {
            return match e {
                _ if e.is_resource_limit() => 3,
                hmotif::Error::ZeroSamples => 1,
                _ => 2,
            };
        }
        if let Some(e) = cause.downcast_ref::<io::Error>() {
            return match e.kind() {
                io::ErrorKind::OutOfMemory | io::ErrorKind::StorageFull => 3,
                _ => 2,
            };
        }
    }
    2
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(std::env::args().skip(1).collect()) {
        Ok(()) => ExitCode::SUCCESS,
        // downstream closed the pipe (`| head`): not an error
        Err(e)
            if e.chain().any(|c| {
                c.downcast_ref::<io::Error>()
                    .is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe)
            }) =>
        {
            ExitCode::SUCCESS
        }
        Err(e) => {
            let code = exit_code(&e);
            if code == 1 && e.chain().count() == 1 {
                eprint!("{e}");
                if !e.to_string().ends_with('\n') {
                    eprintln!();
                }
            } else {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(code)
        }
    }
}
