//! Temporal motif densest subnetwork discovery.
//!
//! Given a temporal network, a temporal motif, a duration bound `delta` and a
//! weighting of motif instances, find the vertex set maximizing total instance
//! weight per vertex. The crate provides:
//!
//! - [`exactflow`]: exact solver based on repeated min-cuts;
//! - [`peel`]: deterministic greedy and batch peeling;
//! - [`randpeel`]: sampling-based batch peeling (`ProbPeel`) and its hybrid
//!   variant that finishes with exact greedy peeling (`HybridPeel`);
//! - [`oracle`]: brute-force ground truth for small inputs.

pub mod error;
pub mod exactflow;
pub mod kcis;
pub mod matching;
pub mod motif;
pub mod oracle;
pub mod peel;
pub mod randpeel;
pub mod result;
pub mod sample;
pub mod tgraph;

pub use error::{Error, Result};
pub use matching::{DeltaInstance, WeightFunction};
pub use motif::TemporalMotif;
pub use result::{DensityResult, PeelStep, PeelTrace};
pub use tgraph::{TemporalEdge, TemporalNetwork, VertexId};
