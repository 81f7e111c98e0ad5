use std::io;
use std::path::PathBuf;

use thiserror::Error;

use crate::motif::InvalidReason;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("dataset contains no hyperedges")]
    EmptyDataset,

    #[error("{what} exceeds the 32-bit id range")]
    IdOverflow { what: &'static str },

    #[error("hyperedge id {id} out of range (|E| = {num_edges})")]
    InvalidEdgeId { id: usize, num_edges: usize },

    #[error("projection exceeded the budget of {budget} hyperwedges ({reached} reached)")]
    MemoryBudget { budget: usize, reached: usize },

    #[error("triple is not a valid h-motif instance: {0}")]
    NotAnInstance(InvalidReason),

    #[error("sample count must be positive")]
    ZeroSamples,

    #[error("hypergraph has no hyperedges")]
    EmptyHypergraph,

    #[error("instance sink failed after {emitted} instances: {source}")]
    Sink {
        emitted: u64,
        #[source]
        source: io::Error,
    },

    #[error("{count} instances exceed the pairwise-statistics cap of {cap}")]
    TooManyInstances { count: u64, cap: u64 },

    #[error("all exact counts are zero")]
    ZeroReference,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// True for errors caused by a configured resource limit.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::MemoryBudget { .. } | Error::TooManyInstances { .. })
    }
}
