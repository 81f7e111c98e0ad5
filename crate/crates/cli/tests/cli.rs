use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const TOY: &str = "1 2 3\n2 3 4\n3 4 5\n";

fn hmotif(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hmotif"))
        .args(args)
        .env_remove("HMOTIF_WORKERS")
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = hmotif(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    hmotif(args).status.code().unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

/// Deterministic pseudo-random hypergraph text (xorshift, no extra deps).
fn random_text(seed: u64, edges: usize, nodes: u64, max_size: u64) -> String {
    let mut x = seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) | 1;
    let mut next = move || {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        x
    };
    let mut out = String::new();
    for _ in 0..edges {
        let size = 2 + next() % (max_size - 1);
        let line: Vec<String> = (0..size).map(|_| (next() % nodes).to_string()).collect();
        out += &line.join(" ");
        out.push('\n');
    }
    out
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// `motif -> value` rows of a per-motif TSV table.
fn rows(tsv: &str, column: &str) -> BTreeMap<usize, f64> {
    let mut lines = tsv.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = lines.next().unwrap().split('\t').collect();
    let c = header.iter().position(|h| *h == column).unwrap();
    lines
        .map(|l| {
            let cells: Vec<&str> = l.split('\t').collect();
            (cells[0].parse().unwrap(), cells[c].parse().unwrap())
        })
        .collect()
}

fn manifest_line(text: &str) -> &str {
    text.lines()
        .next()
        .unwrap()
        .strip_prefix("# manifest=")
        .expect("manifest header")
}

#[test]
fn motif_table_lists_26_motifs_6_open() {
    let out = ok(&["motif-table"]);
    let body: Vec<&str> = out
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .collect();
    assert_eq!(body.len(), 26);
    let open: Vec<&str> = body
        .iter()
        .filter(|l| l.split('\t').nth(1) == Some("open"))
        .map(|l| l.split('\t').next().unwrap())
        .collect();
    assert_eq!(open, ["17", "18", "19", "20", "21", "22"]);
}

#[test]
fn exact_count_of_toy_has_one_nonzero_row() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "toy.txt", TOY);
    let out = ok(&["count", "--exact", s(&input)]);
    assert_eq!(manifest_line(&out).len(), 64);
    let counts = rows(&out, "count");
    assert_eq!(counts.len(), 26);
    let nonzero: Vec<_> = counts.iter().filter(|(_, &c)| c != 0.0).collect();
    assert_eq!(nonzero.len(), 1);
    assert_eq!(*nonzero[0].1, 1.0);
    assert!(
        *nonzero[0].0 < 17 || *nonzero[0].0 > 22,
        "toy triple is closed"
    );
    // exact counts are printed as integers
    assert!(out.lines().any(|l| l.ends_with("\t1")));
}

#[test]
fn enumerate_aggregates_to_exact_count() {
    let dir = TempDir::new().unwrap();
    for seed in 1..4 {
        let input = write(&dir, "g.txt", &random_text(seed, 40, 30, 5));
        let counts = rows(&ok(&["count", s(&input)]), "count");
        let listed = ok(&["enumerate", s(&input)]);
        let mut agg: BTreeMap<usize, f64> = (1..=26).map(|t| (t, 0.0)).collect();
        for line in listed.lines().filter(|l| !l.starts_with('#')).skip(1) {
            let cells: Vec<usize> = line.split('\t').map(|c| c.parse().unwrap()).collect();
            assert!(cells[0] < cells[1] && cells[1] < cells[2] && cells[0] >= 1);
            *agg.get_mut(&cells[3]).unwrap() += 1.0;
        }
        assert_eq!(agg, counts);
    }
}

#[test]
fn features_sum_to_three_times_the_counts() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "g.txt", &random_text(9, 50, 30, 5));
    let total: f64 = rows(&ok(&["count", s(&input)]), "count").values().sum();
    let feats = ok(&["features", s(&input)]);
    let mut lines = feats.lines().filter(|l| !l.starts_with('#'));
    assert_eq!(lines.next().unwrap().split('\t').count(), 27);
    let sum: u64 = lines
        .flat_map(|l| {
            l.split('\t')
                .skip(1)
                .map(|c| c.parse::<u64>().unwrap())
                .collect::<Vec<_>>()
        })
        .sum();
    assert_eq!(sum as f64, 3.0 * total);
    let hm7 = ok(&["features", "--hm7", s(&input)]);
    assert_eq!(
        hm7.lines()
            .find(|l| !l.starts_with('#'))
            .unwrap()
            .split('\t')
            .count(),
        8
    );
}

#[test]
fn fixed_seed_runs_replay_bit_for_bit() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "g.txt", &random_text(4, 60, 30, 5));
    let out = dir.path().join("est.tsv");
    let manifest = dir.path().join("m.json");
    let args = [
        "count",
        "--approx-wedge",
        "5%",
        "--seed",
        "11",
        "--workers",
        "2",
        "-o",
        s(&out),
        "--manifest",
        s(&manifest),
        s(&input),
    ];
    ok(&args);
    let first = fs::read(&out).unwrap();
    let m: Value = serde_json::from_str(&fs::read_to_string(&manifest).unwrap()).unwrap();
    assert_eq!(
        m["hash"].as_str().unwrap(),
        manifest_line(std::str::from_utf8(&first).unwrap())
    );
    assert_eq!(m["config"]["workers"], 2);
    assert_eq!(m["config"]["seed"], 11);
    assert!(m["wall_clock_secs"].as_f64().unwrap() >= 0.0);

    fs::remove_file(&out).unwrap();
    ok(&["replay", s(&manifest)]);
    assert_eq!(fs::read(&out).unwrap(), first);

    // a different seed changes the estimate
    let other = ok(&[
        "count",
        "--approx-wedge",
        "5%",
        "--seed",
        "12",
        "--workers",
        "2",
        s(&input),
    ]);
    assert_ne!(
        rows(&other, "count"),
        rows(std::str::from_utf8(&first).unwrap(), "count")
    );

    // replay refuses a modified input
    fs::write(&input, TOY).unwrap();
    assert_eq!(code(&["replay", s(&manifest)]), 2);
}

#[test]
fn exact_counts_do_not_depend_on_workers() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "g.txt", &random_text(5, 60, 30, 6));
    let base = rows(&ok(&["count", "--workers", "1", s(&input)]), "count");
    for w in ["2", "4", "8"] {
        assert_eq!(
            rows(&ok(&["count", "--workers", w, s(&input)]), "count"),
            base
        );
    }
}

#[test]
fn workers_default_comes_from_the_environment() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "toy.txt", TOY);
    let out = Command::new(env!("CARGO_BIN_EXE_hmotif"))
        .args(["count", "--json", s(&input)])
        .env("HMOTIF_WORKERS", "3")
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["manifest"]["config"]["workers"], 3);
    assert_eq!(v["count"].as_array().unwrap().len(), 26);
    assert_eq!(v["type"][16], "open");
}

#[test]
fn cached_sampling_matches_full_projection() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "g.txt", &random_text(6, 80, 40, 5));
    let plain = ok(&[
        "count",
        "--approx-wedge",
        "40",
        "--seed",
        "3",
        "--workers",
        "1",
        s(&input),
    ]);
    for (budget, policy) in [
        ("0", "degree"),
        ("1%", "degree"),
        ("50", "random"),
        ("100%", "lru"),
    ] {
        let manifest = dir.path().join("m.json");
        let cached = ok(&[
            "count",
            "--approx-wedge",
            "40",
            "--seed",
            "3",
            "--workers",
            "1",
            "--memo-budget",
            budget,
            "--memo-policy",
            policy,
            "--manifest",
            s(&manifest),
            s(&input),
        ]);
        assert_eq!(rows(&cached, "count"), rows(&plain, "count"));
        let m: Value = serde_json::from_str(&fs::read_to_string(&manifest).unwrap()).unwrap();
        assert!(m["neighborhoods_constructed"].as_u64().unwrap() > 0);
    }
}

#[test]
fn reference_reports_relative_error() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "g.txt", &random_text(7, 60, 30, 5));
    let exact = dir.path().join("exact.tsv");
    ok(&["count", "-o", s(&exact), s(&input)]);
    let est = ok(&[
        "count",
        "--approx-edge",
        "s=20",
        "--reference",
        s(&exact),
        s(&input),
    ]);
    let err: f64 = est
        .lines()
        .find_map(|l| l.strip_prefix("# relative_error="))
        .unwrap()
        .parse()
        .unwrap();
    assert!(err.is_finite() && err >= 0.0);
    let same = ok(&["count", "--reference", s(&exact), s(&input)]);
    assert!(same.contains("# relative_error=0\n"));
}

#[test]
fn randomize_cp_compare_pipeline() {
    let dir = TempDir::new().unwrap();
    let mut cps = Vec::new();
    for (i, seed) in [1u64, 2].into_iter().enumerate() {
        let input = write(&dir, &format!("g{i}.txt"), &random_text(seed, 50, 40, 5));
        let real = dir.path().join(format!("real{i}.tsv"));
        let null = dir.path().join(format!("null{i}.tsv"));
        let emit = dir.path().join(format!("random{i}"));
        ok(&["count", "-o", s(&real), s(&input)]);
        ok(&[
            "randomize",
            "--trials",
            "3",
            "--seed",
            "5",
            "--emit-dir",
            s(&emit),
            "--counts-out",
            s(&null),
            s(&input),
        ]);
        let emitted: Vec<_> = fs::read_dir(&emit).unwrap().collect();
        assert_eq!(emitted.len(), 3);
        // emitted hypergraphs load back
        ok(&["stats", s(&emit.join("random_000.txt"))]);

        let cp = dir.path().join(format!("cp{i}.tsv"));
        ok(&["cp", "--real", s(&real), "--null", s(&null), "-o", s(&cp)]);
        let text = fs::read_to_string(&cp).unwrap();
        let norm: f64 = rows(&text, "cp")
            .values()
            .map(|x| x * x)
            .sum::<f64>()
            .sqrt();
        assert!((norm - 1.0).abs() < 1e-9);
        assert!(rows(&text, "delta").values().all(|d| *d > -1.0 && *d < 1.0));
        cps.push(cp);
    }
    let matrix = ok(&["compare", s(&cps[0]), s(&cps[1])]);
    let body: Vec<Vec<&str>> = matrix
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split('\t').collect())
        .collect();
    assert_eq!(body.len(), 2);
    assert_eq!(body[0][1], "1");
    assert_eq!(body[1][2], "1");
    assert_eq!(body[0][2], body[1][1]);
}

#[test]
fn stats_and_project_agree() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "toy.csv", "1,2,3\n2,3,4\n3,4,5\n3,2,1\n");
    let stats = ok(&["stats", "--format", "csv", s(&input)]);
    assert!(stats.contains("hyperedges\t3\n"));
    assert!(stats.contains("nodes\t5\n"));
    assert!(stats.contains("hyperwedges\t3\n"));
    let wedges = ok(&["project", "--format", "csv", s(&input)]);
    let body: Vec<&str> = wedges.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body, ["i\tj\tomega", "1\t2\t2", "1\t3\t1", "2\t3\t2"]);
}

#[test]
fn bench_error_falls_with_sample_fraction() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "g.txt", &random_text(8, 200, 80, 5));
    let csv = ok(&[
        "bench",
        "--approx-wedge",
        "--trials",
        "4",
        "--workers",
        "1",
        "--seed",
        "2",
        s(&input),
    ]);
    let mut lines = csv.lines().filter(|l| !l.starts_with('#'));
    assert!(lines.next().unwrap().starts_with("sweep,sampler"));
    let mut by_pct: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    let mut memo_rows = 0;
    for line in lines {
        let cells: Vec<&str> = line.split(',').collect();
        match cells[0] {
            "fraction" => by_pct
                .entry(cells[2].to_string())
                .or_default()
                .push(cells[8].parse().unwrap()),
            "memo" => memo_rows += 1,
            _ => {}
        }
    }
    assert_eq!(by_pct.len(), 10);
    assert_eq!(memo_rows, 5 * 4);
    let mean = |k: &str| by_pct[k].iter().sum::<f64>() / by_pct[k].len() as f64;
    let low = (mean("2.5") + mean("5") + mean("7.5")) / 3.0;
    let high = (mean("20") + mean("22.5") + mean("25")) / 3.0;
    assert!(
        high < low,
        "error at 20-25% ({high}) not below 2.5-7.5% ({low})"
    );
}

#[test]
fn exit_codes() {
    let dir = TempDir::new().unwrap();
    let input = write(&dir, "toy.txt", TOY);
    let empty = write(&dir, "empty.txt", "# nothing\n");
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["count", "--bogus", s(&input)]), 1);
    assert_eq!(
        code(&["count", "--exact", "--approx-edge", "3", s(&input)]),
        1
    );
    assert_eq!(code(&["count", "--approx-edge", "0", s(&input)]), 1);
    assert_eq!(code(&["count", "--workers", "0", s(&input)]), 1);
    assert_eq!(
        code(&[
            "cp",
            "--real",
            s(&input),
            "--null",
            s(&input),
            "--epsilon",
            "0"
        ]),
        1
    );
    assert_eq!(code(&["count", s(&dir.path().join("missing.txt"))]), 2);
    assert_eq!(code(&["count", s(&empty)]), 2);
    assert_eq!(code(&["cp", "--real", s(&input), "--null", s(&input)]), 2);
    assert_eq!(code(&["count", "--max-wedges", "1", s(&input)]), 3);
    assert_eq!(
        code(&[
            "count",
            "--approx-wedge",
            "5",
            "--memo-budget",
            "0",
            "--max-wedges",
            "2",
            s(&input)
        ]),
        3
    );
}
