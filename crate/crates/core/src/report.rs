//! JSON experiment reports and the probe-scaling sweep.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{query_edge, EdgeDecision, LscgConfig, MaterializeOutcome};
use crate::error::{Error, Result};
use crate::generate::GeneratorKind;
use crate::graph::{EdgeRef, Graph, ProbeStats};
use crate::keyed::StreamKey;
use crate::scalar::Real;
use crate::suites::CriterionResult;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "source", rename_all = "snake_case")]
pub enum GraphSource {
    File { path: String },
    Generated { generator: GeneratorKind, seed: u64 },
}

/// Every parameter that feeds randomness or decisions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub seed: u64,
    #[serde(rename = "T")]
    pub threshold: f64,
    pub d: f64,
    pub c_scale: f64,
    pub log_base: f64,
    pub rounds_override: Option<usize>,
    pub graph: Option<GraphSource>,
}

impl ConfigEcho {
    pub fn new<F: Real>(config: &LscgConfig<F>, graph: Option<GraphSource>) -> Self {
        ConfigEcho {
            seed: config.seed,
            threshold: config.threshold.as_f64(),
            d: config.tester.d.as_f64(),
            c_scale: config.tester.c_scale.as_f64(),
            log_base: config.tester.log_base.as_f64(),
            rounds_override: config.tester.rounds_override,
            graph,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GraphSummary {
    pub n: usize,
    pub m: usize,
    pub connected: bool,
}

impl GraphSummary {
    pub fn of(graph: &Graph) -> Self {
        GraphSummary { n: graph.n(), m: graph.m(), connected: graph.is_connected() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeSummary {
    pub total: u64,
    pub by_type: ProbeStats,
    pub mean_per_query: f64,
    pub max_per_query: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaterializeSummary {
    pub e_star: usize,
    pub output_connected: bool,
    pub accepted_below_threshold: usize,
    pub accepted_by_coin: usize,
    pub rejected: usize,
    pub tester_calls: usize,
    pub tester_accepts: usize,
    pub tester_rejects: usize,
    pub threshold_in_regime: bool,
    pub probes: ProbeSummary,
}

impl MaterializeSummary {
    pub fn new<F: Real>(graph: &Graph, config: &LscgConfig<F>, out: &MaterializeOutcome) -> Self {
        let m = graph.m();
        MaterializeSummary {
            e_star: out.edges.len(),
            output_connected: out.output_connected,
            accepted_below_threshold: out.below_threshold,
            accepted_by_coin: out.edges.len() - out.below_threshold,
            rejected: m - out.edges.len(),
            tester_calls: out.tester_calls,
            tester_accepts: out.tester_accepts,
            tester_rejects: out.tester_calls - out.tester_accepts,
            threshold_in_regime: config.threshold_in_regime(graph.n()),
            probes: ProbeSummary {
                total: out.total_probes.total(),
                by_type: out.total_probes,
                mean_per_query: if m == 0 { 0.0 } else { out.total_probes.total() as f64 / m as f64 },
                max_per_query: out.max_query_probes,
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuerySummary {
    pub edge: EdgeRef,
    pub accepted: bool,
    pub s_hat: f64,
    pub g_star: Option<f64>,
    pub below_threshold: bool,
    pub keep_probability: f64,
    pub tester_calls: usize,
    pub probes: ProbeStats,
}

impl<F: Real> From<&EdgeDecision<F>> for QuerySummary {
    fn from(d: &EdgeDecision<F>) -> Self {
        QuerySummary {
            edge: d.edge,
            accepted: d.accepted,
            s_hat: d.s_hat.as_f64(),
            g_star: d.g_star.map(|g| g.as_f64()),
            below_threshold: d.below_threshold,
            keep_probability: d.keep_probability.as_f64(),
            tester_calls: d.tester_calls,
            probes: d.probes,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRow {
    #[serde(rename = "T")]
    pub threshold: f64,
    pub queries: usize,
    pub mean_probes: f64,
    pub max_probes: u64,
    pub by_type: ProbeStats,
    pub below_threshold: usize,
    pub tester_calls: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum ReportBody {
    Query(QuerySummary),
    Materialize(MaterializeSummary),
    Scaling { rows: Vec<ScalingRow> },
    Verify { suite: String, criteria: Vec<CriterionResult> },
    Oracle { edges: usize, min_s: u64, max_s: u64, reciprocal_sum: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub schema: u32,
    pub config: ConfigEcho,
    pub graph: Option<GraphSummary>,
    pub result: ReportBody,
    pub wall_time_secs: f64,
}

impl ExperimentReport {
    pub fn new(config: ConfigEcho, graph: Option<GraphSummary>, result: ReportBody, wall_time_secs: f64) -> Self {
        ExperimentReport { schema: SCHEMA_VERSION, config, graph, result, wall_time_secs }
    }
}

/// `count` edges drawn uniformly with replacement from the stream keyed
/// `("sample", label)`.
pub fn sample_edges(graph: &Graph, count: usize, seed: u64, label: &str) -> Vec<EdgeRef> {
    let all: Vec<EdgeRef> = graph.edges().collect();
    if all.is_empty() {
        return Vec::new();
    }
    let mut s = StreamKey::new(seed).with("sample").with(label).derive();
    (0..count).map(|_| all[s.gen_range(0..all.len())]).collect()
}

/// Mean and max per-query probes for each threshold in `thresholds` (which
/// must be ascending), over the same `queries` random edges.
pub fn scaling_sweep<F: Real>(
    graph: &Graph,
    thresholds: &[F],
    base: &LscgConfig<F>,
    queries: usize,
) -> Result<Vec<ScalingRow>> {
    if thresholds.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::InvalidInput("threshold list must be strictly ascending".into()));
    }
    if queries == 0 || graph.m() == 0 {
        return Err(Error::InvalidInput("scaling needs at least one query on a graph with edges".into()));
    }
    let sample = sample_edges(graph, queries, base.seed, "scaling");
    thresholds
        .iter()
        .map(|&t| {
            let config = LscgConfig { threshold: t, ..*base };
            let decisions: Vec<EdgeDecision<F>> =
                sample.par_iter().map(|&e| query_edge(&graph.view(), e, &config)).collect::<Result<_>>()?;
            let by_type = decisions.iter().fold(ProbeStats::default(), |acc, d| acc + d.probes);
            Ok(ScalingRow {
                threshold: t.as_f64(),
                queries,
                mean_probes: by_type.total() as f64 / queries as f64,
                max_probes: decisions.iter().map(|d| d.probes.total()).max().unwrap_or(0),
                by_type,
                below_threshold: decisions.iter().filter(|d| d.below_threshold).count(),
                tester_calls: decisions.iter().map(|d| d.tester_calls).sum(),
            })
        })
        .collect()
}
