//! Counting, enumeration and estimation of hypergraph motifs (h-motifs):
//! the 26 connectivity patterns of three connected hyperedges.
//!
//! The pipeline is: load a [`Hypergraph`], build its [`ProjectedGraph`],
//! then count motif instances exactly ([`exact`]) or estimate them by
//! hyperedge / hyperwedge sampling ([`sampling`]). Counts are compared
//! against Chung–Lu null models ([`randomize`]) to obtain significance
//! vectors and characteristic profiles ([`profile`]).

pub mod error;
pub mod exact;
pub mod hypergraph;
pub mod memo;
pub mod motif;
pub mod parallel;
pub mod profile;
pub mod projection;
pub mod randomize;
pub mod rng;
pub mod sampling;

pub use error::{Error, Result};
pub use exact::{count_exact, CountVector};
pub use hypergraph::{degree_stats, load_hypergraph, EdgeId, Hypergraph, InputFormat, NodeId};
pub use motif::{MotifId, MotifTable, NUM_MOTIFS};
pub use projection::{project, ProjectedGraph};
pub use sampling::{EstimateVector, SamplerConfig};
