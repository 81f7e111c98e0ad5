//! Weighted projected graph: hyperedges become vertices, and two hyperedges
//! are joined by a hyperwedge weighted by the size of their intersection.

use std::io::{self, Write};
use std::ops::Deref;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hypergraph::{EdgeId, Hypergraph};
use crate::parallel;

/// `(neighbor id, overlap)` entry of an adjacency list.
pub type Neighbor = (EdgeId, u32);

/// An unordered pair of overlapping hyperedges, stored with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Hyperwedge {
    pub i: EdgeId,
    pub j: EdgeId,
}

/// Reusable dense counters indexed by hyperedge id. Only touched slots are
/// reset, so one instance can be reused across many neighborhoods.
#[derive(Debug, Clone)]
pub struct OverlapScratch {
    counts: Vec<u32>,
    touched: Vec<EdgeId>,
}

impl OverlapScratch {
    pub fn new(num_edges: usize) -> Self {
        OverlapScratch { counts: vec![0; num_edges], touched: Vec::new() }
    }

    /// Full neighborhood N_{e_i} with overlaps, sorted by neighbor id.
    pub fn neighborhood(&mut self, g: &Hypergraph, i: EdgeId) -> Vec<Neighbor> {
        self.accumulate(g, i, |j| j != i)
    }

    /// Neighbors with id greater than `i` (the inner loops of the projection).
    fn upper_neighborhood(&mut self, g: &Hypergraph, i: EdgeId) -> Vec<Neighbor> {
        self.accumulate(g, i, |j| j > i)
    }

    fn accumulate(&mut self, g: &Hypergraph, i: EdgeId, keep: impl Fn(EdgeId) -> bool) -> Vec<Neighbor> {
        for &v in g.edge(i) {
            for &j in g.incident(v) {
                if keep(j) {
                    let slot = &mut self.counts[j as usize];
                    if *slot == 0 {
                        self.touched.push(j);
                    }
                    *slot += 1;
                }
            }
        }
        self.touched.sort_unstable();
        let out = self.touched.iter().map(|&j| (j, self.counts[j as usize])).collect();
        for &j in &self.touched {
            self.counts[j as usize] = 0;
        }
        self.touched.clear();
        out
    }
}

/// Computes N_{e_i} directly from the incidence index.
pub fn compute_neighborhood(g: &Hypergraph, i: EdgeId) -> Vec<Neighbor> {
    OverlapScratch::new(g.num_edges()).neighborhood(g, i)
}

#[derive(Debug, Clone)]
pub struct ProjectedGraph {
    offsets: Vec<usize>,
    adjacency: Vec<Neighbor>,
    wedges: Vec<Hyperwedge>,
}

#[derive(Debug, Clone, Copy)]
pub struct ProjectionOptions {
    pub workers: usize,
    /// Abort once more than this many hyperwedges have been found.
    pub max_wedges: Option<usize>,
}

impl Default for ProjectionOptions {
    fn default() -> Self {
        ProjectionOptions { workers: 1, max_wedges: None }
    }
}

/// Builds the projected graph with default options (single worker, no budget).
pub fn project(g: &Hypergraph) -> ProjectedGraph {
    project_with(g, ProjectionOptions::default()).expect("unbounded projection cannot fail")
}

pub fn project_with(g: &Hypergraph, opts: ProjectionOptions) -> Result<ProjectedGraph> {
    let n = g.num_edges();
    let upper: Vec<Vec<Neighbor>> = parallel::run(opts.workers, || {
        (0..n as EdgeId)
            .into_par_iter()
            .map_init(|| OverlapScratch::new(n), |scratch, i| scratch.upper_neighborhood(g, i))
            .collect()
    });

    let num_wedges: usize = upper.iter().map(Vec::len).sum();
    if let Some(budget) = opts.max_wedges {
        if num_wedges > budget {
            return Err(Error::MemoryBudget { budget, reached: num_wedges });
        }
    }

    let mut degree = vec![0usize; n];
    for (i, list) in upper.iter().enumerate() {
        degree[i] += list.len();
        for &(j, _) in list {
            degree[j as usize] += 1;
        }
    }
    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0);
    for d in &degree {
        offsets.push(offsets.last().unwrap() + d);
    }

    // Lower neighbors (j < i) are filled first in increasing j, then the
    // upper list, which keeps every adjacency list sorted.
    let mut adjacency = vec![(0, 0); offsets[n]];
    let mut cursor = offsets[..n].to_vec();
    let mut wedges = Vec::with_capacity(num_wedges);
    for (i, list) in upper.iter().enumerate() {
        for &(j, w) in list {
            let slot = &mut cursor[j as usize];
            adjacency[*slot] = (i as EdgeId, w);
            *slot += 1;
            wedges.push(Hyperwedge { i: i as EdgeId, j });
        }
    }
    for (i, list) in upper.iter().enumerate() {
        let start = cursor[i];
        adjacency[start..start + list.len()].copy_from_slice(list);
    }

    Ok(ProjectedGraph { offsets, adjacency, wedges })
}

impl ProjectedGraph {
    pub fn num_edges(&self) -> usize {
        self.offsets.len() - 1
    }

    /// |∧|
    pub fn num_wedges(&self) -> usize {
        self.wedges.len()
    }

    /// Hyperwedges in lexicographic `(i, j)` order.
    pub fn wedges(&self) -> &[Hyperwedge] {
        &self.wedges
    }

    /// Sorted adjacency of hyperedge `i`.
    pub fn neighbors(&self, i: EdgeId) -> &[Neighbor] {
        &self.adjacency[self.offsets[i as usize]..self.offsets[i as usize + 1]]
    }

    pub fn neighborhood(&self, i: EdgeId) -> Result<&[Neighbor]> {
        if (i as usize) < self.num_edges() {
            Ok(self.neighbors(i))
        } else {
            Err(Error::InvalidEdgeId { id: i as usize, num_edges: self.num_edges() })
        }
    }

    pub fn degree(&self, i: EdgeId) -> usize {
        self.offsets[i as usize + 1] - self.offsets[i as usize]
    }

    /// Σ_i |N_{e_i}| = 2|∧|
    pub fn total_adjacency(&self) -> usize {
        self.adjacency.len()
    }

    /// ω(∧_ij), or 0 when the hyperedges are disjoint.
    pub fn overlap(&self, i: EdgeId, j: EdgeId) -> u32 {
        let list = self.neighbors(i);
        match list.binary_search_by_key(&j, |&(k, _)| k) {
            Ok(pos) => list[pos].1,
            Err(_) => 0,
        }
    }

    /// Writes `i j ω` per hyperwedge with 1-based hyperedge ids.
    pub fn write_wedges<W: Write>(&self, mut out: W) -> io::Result<()> {
        for w in &self.wedges {
            writeln!(out, "{} {} {}", w.i + 1, w.j + 1, self.overlap(w.i, w.j))?;
        }
        Ok(())
    }
}

/// Adjacency list handed out by a [`NeighborSource`].
#[derive(Debug, Clone)]
pub enum NeighborList<'a> {
    Borrowed(&'a [Neighbor]),
    Shared(Arc<[Neighbor]>),
}

impl Deref for NeighborList<'_> {
    type Target = [Neighbor];

    fn deref(&self) -> &[Neighbor] {
        match self {
            NeighborList::Borrowed(s) => s,
            NeighborList::Shared(a) => a,
        }
    }
}

/// Anything that can produce exact neighborhoods N_{e_i} of the projected
/// graph: the precomputed projection or a lazily memoized one.
pub trait NeighborSource: Sync {
    fn neighbors_of(&self, i: EdgeId) -> NeighborList<'_>;
}

impl NeighborSource for ProjectedGraph {
    fn neighbors_of(&self, i: EdgeId) -> NeighborList<'_> {
        NeighborList::Borrowed(self.neighbors(i))
    }
}

/// Lists every hyperwedge without storing neighborhoods, in the same order
/// as [`ProjectedGraph::wedges`]. Peak extra memory is one `|E|` counter array
/// plus the pair list itself.
pub fn wedge_index(g: &Hypergraph, workers: usize) -> Vec<Hyperwedge> {
    let n = g.num_edges();
    let per_edge: Vec<Vec<Hyperwedge>> = parallel::run(workers, || {
        (0..n as EdgeId)
            .into_par_iter()
            .map_init(
                || OverlapScratch::new(n),
                |scratch, i| scratch.upper_neighborhood(g, i).into_iter().map(|(j, _)| Hyperwedge { i, j }).collect(),
            )
            .collect()
    });
    per_edge.concat()
}
