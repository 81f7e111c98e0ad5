//! In-memory hypergraph with a node → incident-hyperedge index.
//!
//! Node tokens from input files are opaque strings; they are remapped to
//! dense ids `0..|V|` in order of first appearance and the original token is
//! kept as the node label. Hyperedge ids follow file order after identical
//! node sets have been dropped.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::File;
use std::io::{self, BufRead, BufReader, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};

pub type NodeId = u32;
pub type EdgeId = u32;

/// Token separator used when reading a hypergraph file.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InputFormat {
    /// Whitespace and/or commas separate tokens.
    #[default]
    Whitespace,
    /// Commas only; surrounding whitespace is trimmed from each token.
    Csv,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct LoadReport {
    pub lines_read: usize,
    pub duplicate_edges_dropped: usize,
    pub duplicate_nodes_collapsed: usize,
}

#[derive(Debug, Clone)]
pub struct Hypergraph {
    edges: Vec<Vec<NodeId>>,
    incidence: Vec<Vec<EdgeId>>,
    labels: Vec<String>,
}

/// Accumulates hyperedges over string tokens, deduplicating as it goes.
#[derive(Debug, Default)]
pub struct HypergraphBuilder {
    ids: HashMap<String, NodeId>,
    labels: Vec<String>,
    edges: Vec<Vec<NodeId>>,
    seen: HashSet<Vec<NodeId>>,
    report: LoadReport,
}

impl HypergraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn intern(&mut self, token: &str) -> Result<NodeId> {
        if let Some(&id) = self.ids.get(token) {
            return Ok(id);
        }
        let id = NodeId::try_from(self.labels.len()).map_err(|_| Error::IdOverflow { what: "node count" })?;
        self.ids.insert(token.to_owned(), id);
        self.labels.push(token.to_owned());
        Ok(id)
    }

    /// Adds one hyperedge. Empty token lists are ignored; returns whether a
    /// new hyperedge was stored.
    pub fn add_edge<I, S>(&mut self, tokens: I) -> Result<bool>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut members = Vec::new();
        for token in tokens {
            members.push(self.intern(token.as_ref())?);
        }
        if members.is_empty() {
            return Ok(false);
        }
        let raw = members.len();
        members.sort_unstable();
        members.dedup();
        self.report.duplicate_nodes_collapsed += raw - members.len();
        if self.seen.contains(&members) {
            self.report.duplicate_edges_dropped += 1;
            return Ok(false);
        }
        EdgeId::try_from(self.edges.len()).map_err(|_| Error::IdOverflow { what: "hyperedge count" })?;
        self.seen.insert(members.clone());
        self.edges.push(members);
        Ok(true)
    }

    pub fn finish(self) -> Result<(Hypergraph, LoadReport)> {
        if self.edges.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let graph = Hypergraph::from_parts(self.labels, self.edges);
        Ok((graph, self.report))
    }
}

impl Hypergraph {
    fn from_parts(labels: Vec<String>, edges: Vec<Vec<NodeId>>) -> Self {
        let mut incidence = vec![Vec::new(); labels.len()];
        for (i, edge) in edges.iter().enumerate() {
            for &v in edge {
                incidence[v as usize].push(i as EdgeId);
            }
        }
        Hypergraph { edges, incidence, labels }
    }

    /// Builds a hypergraph from integer node sets. Node ids are remapped to
    /// dense ids by first appearance; labels keep the original integers.
    pub fn from_edges<E, I>(edges: E) -> Result<Self>
    where
        E: IntoIterator<Item = I>,
        I: IntoIterator<Item = u64>,
    {
        let mut builder = HypergraphBuilder::new();
        for edge in edges {
            builder.add_edge(edge.into_iter().map(|v| v.to_string()))?;
        }
        builder.finish().map(|(g, _)| g)
    }

    /// Builds a hypergraph over an existing node universe. Empty and
    /// duplicate node sets are dropped; nodes not covered by any hyperedge
    /// are removed and the rest renumbered in order of first appearance.
    pub fn from_labeled_edges(labels: &[String], edges: impl IntoIterator<Item = Vec<NodeId>>) -> Result<Self> {
        let mut builder = HypergraphBuilder::new();
        for edge in edges {
            builder.add_edge(edge.iter().map(|&v| labels[v as usize].as_str()))?;
        }
        builder.finish().map(|(g, _)| g)
    }

    pub fn num_nodes(&self) -> usize {
        self.labels.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Sorted members of hyperedge `i`.
    pub fn edge(&self, i: EdgeId) -> &[NodeId] {
        &self.edges[i as usize]
    }

    pub fn edges(&self) -> &[Vec<NodeId>] {
        &self.edges
    }

    pub fn edge_size(&self, i: EdgeId) -> usize {
        self.edges[i as usize].len()
    }

    /// Sorted ids of the hyperedges containing `v` (E_v).
    pub fn incident(&self, v: NodeId) -> &[EdgeId] {
        &self.incidence[v as usize]
    }

    pub fn degree(&self, v: NodeId) -> usize {
        self.incidence[v as usize].len()
    }

    pub fn label(&self, v: NodeId) -> &str {
        &self.labels[v as usize]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn check_edge(&self, i: EdgeId) -> Result<()> {
        if (i as usize) < self.edges.len() {
            Ok(())
        } else {
            Err(Error::InvalidEdgeId { id: i as usize, num_edges: self.edges.len() })
        }
    }

    /// Σ_i |e_i|, which equals Σ_v |E_v|.
    pub fn total_incidences(&self) -> usize {
        self.edges.iter().map(Vec::len).sum()
    }

    /// Writes one hyperedge per line using node labels, in hyperedge id order.
    pub fn write_to<W: Write>(&self, mut out: W) -> io::Result<()> {
        for edge in &self.edges {
            let mut first = true;
            for &v in edge {
                if !first {
                    out.write_all(b" ")?;
                }
                first = false;
                out.write_all(self.labels[v as usize].as_bytes())?;
            }
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

fn split_line(line: &str, format: InputFormat) -> Vec<&str> {
    match format {
        InputFormat::Whitespace => line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect(),
        InputFormat::Csv => line.split(',').map(str::trim).filter(|t| !t.is_empty()).collect(),
    }
}

/// Reads hyperedges from any buffered reader. Blank lines and lines whose
/// first non-space character is `#` are skipped.
pub fn read_hypergraph<R: BufRead>(reader: R, format: InputFormat) -> Result<(Hypergraph, LoadReport)> {
    let mut builder = HypergraphBuilder::new();
    for line in reader.lines() {
        let line = line.map_err(|source| Error::Io { path: "<input>".into(), source })?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        builder.report.lines_read += 1;
        builder.add_edge(split_line(trimmed, format))?;
    }
    builder.finish()
}

pub fn load_hypergraph(path: impl AsRef<Path>, format: InputFormat) -> Result<(Hypergraph, LoadReport)> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
    read_hypergraph(BufReader::new(file), format).map_err(|e| match e {
        Error::Io { source, .. } => Error::Io { path: path.to_owned(), source },
        other => other,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeStats {
    pub num_nodes: usize,
    pub num_edges: usize,
    pub max_edge_size: usize,
    pub total_incidences: usize,
    /// node degree |E_v| → number of nodes
    pub degree_distribution: BTreeMap<usize, usize>,
    /// hyperedge size |e_i| → number of hyperedges
    pub size_distribution: BTreeMap<usize, usize>,
}

pub fn degree_stats(g: &Hypergraph) -> DegreeStats {
    let mut degree_distribution = BTreeMap::new();
    for v in 0..g.num_nodes() {
        *degree_distribution.entry(g.degree(v as NodeId)).or_insert(0) += 1;
    }
    let mut size_distribution = BTreeMap::new();
    for e in g.edges() {
        *size_distribution.entry(e.len()).or_insert(0) += 1;
    }
    DegreeStats {
        num_nodes: g.num_nodes(),
        num_edges: g.num_edges(),
        max_edge_size: g.edges().iter().map(Vec::len).max().unwrap_or(0),
        total_incidences: g.total_incidences(),
        degree_distribution,
        size_distribution,
    }
}
