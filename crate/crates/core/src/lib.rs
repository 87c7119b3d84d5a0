//! Local membership queries into a sparse connected subgraph of a large graph.
//!
//! Each edge query estimates the edge's Benczúr–Karger strong connectivity by
//! testing a halving ladder of guesses on lazily sampled random skeletons, then
//! keeps the edge with probability inversely proportional to the estimate.
//! All randomness comes from keyed deterministic streams, so every query answers
//! consistently with one global subgraph.
//!
//! Module map:
//! - [`graph`]: the probe interface (degree / neighbor / adjacency) with accounting.
//! - [`keyed`]: hierarchically keyed random streams.
//! - [`skeleton`]: lazy next-neighbor access to a random skeleton.
//! - [`tester`]: the strong-connectivity guess tester.
//! - [`engine`]: per-edge membership decisions.
//! - [`oracle`]: exact offline strong connectivities, min cuts and cut checks.
//! - [`generate`], [`suites`], [`report`]: experiment harness support.

// `!(x > 0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod engine;
pub mod error;
pub mod generate;
pub mod graph;
pub mod keyed;
pub mod oracle;
pub mod report;
pub mod scalar;
pub mod skeleton;
pub mod suites;
pub mod tester;

pub use engine::{is_connected, lambda, materialize_subgraph, query_edge, EdgeDecision, LscgConfig, MaterializeOutcome};
pub use error::{Error, Result};
pub use graph::{EdgeRef, Graph, ProbeStats, ProbedView};
pub use keyed::{Label, RandomStream, StreamKey};
pub use oracle::{CutResult, StrongConnMap};
pub use scalar::Real;
pub use skeleton::{SkeletonState, SkeletonTrace};
pub use tester::{lambda_prime, test_guess, TesterConfig, TesterOutcome, Verdict};

/// Double-precision engine configuration.
pub type Config = LscgConfig<f64>;
/// Single-precision engine configuration.
pub type ConfigF32 = LscgConfig<f32>;
/// Double-precision tester configuration.
pub type Tester = TesterConfig<f64>;
/// Double-precision edge decision.
pub type Decision = EdgeDecision<f64>;
