//! Ground-truth evaluation tests for post-hoc explainers.
//!
//! A select-then-predict target model only looks at the tokens its
//! generator selects. After pruning instances where that guarantee could
//! leak (handshakes, unsafe deletions) and keeping only instances with a
//! clearly relevant selected token, any explainer that ranks a
//! non-selected token above a clearly relevant one has provably erred.
//!
//! * [`model`]: target models and masking.
//! * [`harness`]: verification and pruning statistics.
//! * [`explain`]: reference explainers and rankings.
//! * [`metrics`]: `%_first`, `%_misrnk`, `avg_misrnk`.
//! * [`corpus`], [`pipeline`], [`heatmap`]: ingestion, orchestration, output.

pub mod coalition;
pub mod corpus;
pub mod error;
pub mod explain;
pub mod fixtures;
pub mod harness;
pub mod heatmap;
pub mod io;
pub mod metrics;
pub mod model;
pub mod pipeline;
pub mod seed;

pub use coalition::Coalition;
pub use error::{Error, Result};
pub use harness::{HarnessConfig, SelectionPartition, VerifiedInstance};
pub use model::{Instance, Selection, TargetModel, Token};
