//! Reading and writing the per-motif tables shared by several subcommands.
//!
//! TSV files start with `# manifest=<hash>` and any other `#` comments, then a
//! header row whose first two columns are `motif` and `type`, then 26 rows.
//! JSON files hold one 26-element array per column name.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use anyhow::{bail, Context, Result};
use hmotif::{MotifId, NUM_MOTIFS};
use serde_json::{json, Map, Value};

use crate::manifest::ManifestConfig;

pub type Vector = [f64; NUM_MOTIFS];

/// One column of a per-motif table.
#[derive(Debug, Clone)]
pub enum Column {
    Int([u64; NUM_MOTIFS]),
    Float(Vector),
}

impl Column {
    fn cell(&self, t: usize) -> String {
        match self {
            Column::Int(v) => v[t].to_string(),
            Column::Float(v) => v[t].to_string(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Column::Int(v) => json!(v),
            Column::Float(v) => json!(v),
        }
    }
}

pub fn motif_type(t: usize) -> &'static str {
    if MotifId::from_index(t).is_open() {
        "open"
    } else {
        "closed"
    }
}

/// Output file, or stdout when `path` is `None`.
pub fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot create {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub struct MotifTableOut<'a> {
    pub config: &'a ManifestConfig,
    pub comments: Vec<(String, String)>,
    pub columns: Vec<(&'static str, Column)>,
}

impl MotifTableOut<'_> {
    pub fn write(&self, out: &mut dyn Write, as_json: bool) -> Result<()> {
        if as_json {
            let mut obj = Map::new();
            obj.insert(
                "manifest".into(),
                json!({ "hash": self.config.hash(), "config": self.config }),
            );
            for (k, v) in &self.comments {
                obj.insert(
                    k.clone(),
                    v.parse::<f64>()
                        .map(Value::from)
                        .unwrap_or_else(|_| Value::from(v.clone())),
                );
            }
            obj.insert("motif".into(), json!((1..=NUM_MOTIFS).collect::<Vec<_>>()));
            obj.insert(
                "type".into(),
                json!((0..NUM_MOTIFS).map(motif_type).collect::<Vec<_>>()),
            );
            for (name, col) in &self.columns {
                obj.insert((*name).into(), col.json());
            }
            serde_json::to_writer_pretty(&mut *out, &Value::Object(obj))?;
            writeln!(out)?;
        } else {
            writeln!(out, "# manifest={}", self.config.hash())?;
            for (k, v) in &self.comments {
                writeln!(out, "# {k}={v}")?;
            }
            write!(out, "motif\ttype")?;
            for (name, _) in &self.columns {
                write!(out, "\t{name}")?;
            }
            writeln!(out)?;
            for t in 0..NUM_MOTIFS {
                write!(out, "{}\t{}", t + 1, motif_type(t))?;
                for (_, col) in &self.columns {
                    write!(out, "\t{}", col.cell(t))?;
                }
                writeln!(out)?;
            }
        }
        out.flush()?;
        Ok(())
    }
}

/// Reads column `name` of a per-motif table written by this tool.
pub fn read_column(path: &Path, name: &str) -> Result<Vector> {
    let text =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let parsed = if text.trim_start().starts_with('{') {
        parse_json(&text, name)
    } else {
        parse_tsv(&text, name)
    };
    parsed.with_context(|| format!("{}: no usable `{name}` column", path.display()))
}

fn parse_json(text: &str, name: &str) -> Result<Vector> {
    let v: Value = serde_json::from_str(text)?;
    let Some(arr) = v.get(name).and_then(Value::as_array) else {
        bail!("missing array `{name}`")
    };
    if arr.len() != NUM_MOTIFS {
        bail!("expected {NUM_MOTIFS} values, found {}", arr.len());
    }
    let mut out = [0.0; NUM_MOTIFS];
    for (t, x) in arr.iter().enumerate() {
        out[t] = x
            .as_f64()
            .with_context(|| format!("motif {}: not a number", t + 1))?;
    }
    Ok(out)
}

fn parse_tsv(text: &str, name: &str) -> Result<Vector> {
    let mut lines = text
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'));
    let header: Vec<&str> = lines.next().context("empty table")?.split('\t').collect();
    if header.first() != Some(&"motif") {
        bail!("header must start with `motif`");
    }
    let col = header
        .iter()
        .position(|h| *h == name)
        .with_context(|| format!("no column `{name}`"))?;
    let mut out = [f64::NAN; NUM_MOTIFS];
    for line in lines {
        let cells: Vec<&str> = line.split('\t').collect();
        let id: usize = cells[0]
            .parse()
            .with_context(|| format!("bad motif id `{}`", cells[0]))?;
        if !(1..=NUM_MOTIFS).contains(&id) {
            bail!("motif id {id} out of range");
        }
        let cell = cells
            .get(col)
            .with_context(|| format!("motif {id}: row too short"))?;
        out[id - 1] = cell
            .parse()
            .with_context(|| format!("motif {id}: bad value `{cell}`"))?;
    }
    if let Some(t) = out.iter().position(|x| x.is_nan()) {
        bail!("motif {} missing", t + 1);
    }
    Ok(out)
}
