//! Per-edge membership in the sparse connected subgraph.
//!
//! A query on `e = (u, v)` walks a halving ladder of guesses from
//! `min(deg u, deg v)` down to the threshold `T`. The first accepted guess
//! `g*` yields the estimate `ŝ = g* / (2 λ')`, and the edge is kept with
//! probability `min(1, λ / ŝ)`. An edge whose guesses are all rejected is kept
//! unconditionally, which is what makes bridges and tree edges safe.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeRef, Graph, ProbeStats, ProbedView};
use crate::keyed::StreamKey;
use crate::scalar::Real;
use crate::tester::{lambda_prime, run_rounds, TesterConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LscgConfig<F: Real> {
    /// Threshold `T`: guesses at or below it are never tested.
    pub threshold: F,
    pub tester: TesterConfig<F>,
    pub seed: u64,
}

impl<F: Real> LscgConfig<F> {
    pub fn new(threshold: F, seed: u64) -> Self {
        LscgConfig { threshold, tester: TesterConfig::default(), seed }
    }

    pub fn with_scale(mut self, c_scale: F) -> Self {
        self.tester.c_scale = c_scale;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.threshold >= F::one()) || !self.threshold.is_finite() {
            return Err(Error::InvalidInput(format!("threshold T must be >= 1, got {}", self.threshold)));
        }
        self.tester.validate()
    }

    /// Whether `T` sits in the intended regime `T > log² n`. The engine runs
    /// for any `T >= 1`; this only informs reports.
    pub fn threshold_in_regime(&self, n: usize) -> bool {
        let l = self.tester.floored_log(n.max(2));
        self.threshold > l * l
    }
}

/// `λ(n) = c · 64 (d + 2) · max(1, log n)`, the keep-probability numerator.
pub fn lambda<F: Real>(config: &TesterConfig<F>, n: usize) -> Result<F> {
    if n < 2 {
        return Err(Error::DegenerateComponent(n));
    }
    Ok(config.c_scale * F::of(64.0) * (config.d + F::of(2.0)) * config.floored_log(n))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeDecision<F: Real> {
    pub edge: EdgeRef,
    pub accepted: bool,
    pub s_hat: F,
    pub g_star: Option<F>,
    pub below_threshold: bool,
    /// Probability the final coin was flipped with (1 on the below-threshold path).
    pub keep_probability: F,
    pub tester_calls: usize,
    pub probes: ProbeStats,
}

/// Stream key for the final keep coin of `e`.
pub fn accept_key(seed: u64, e: EdgeRef) -> StreamKey {
    StreamKey::new(seed).with("accept").with(e.a).with(e.b)
}

pub fn query_edge<F: Real>(view: &ProbedView<'_>, e: EdgeRef, config: &LscgConfig<F>) -> Result<EdgeDecision<F>> {
    config.validate()?;
    let start = view.probe_count();
    if view.adjacency(e.a, e.b)?.is_none() {
        return Err(Error::InvalidEdge(e.a, e.b));
    }
    let n = view.n();
    let mut g = F::of_count(view.degree(e.a)?.min(view.degree(e.b)?));

    let mut g_star = None;
    let mut tester_calls = 0;
    while g > config.threshold {
        tester_calls += 1;
        if run_rounds(view, e, g, &config.tester, config.seed)?.accepted() {
            g_star = Some(g);
            break;
        }
        g = g / F::of(2.0);
    }

    let (accepted, s_hat, keep_probability) = match g_star {
        None => (true, config.threshold, F::one()),
        Some(g) => {
            let s_hat = g / (F::of(2.0) * lambda_prime(&config.tester, n)?);
            let p = F::one().min(lambda(&config.tester, n)? / s_hat);
            let coin = accept_key(config.seed, e).derive().bernoulli(p)?;
            (coin, s_hat, p)
        }
    };
    Ok(EdgeDecision {
        edge: e,
        accepted,
        s_hat,
        g_star,
        below_threshold: g_star.is_none(),
        keep_probability,
        tester_calls,
        probes: view.probe_count() - start,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MaterializeOutcome {
    /// Accepted edges in canonical order.
    pub edges: Vec<EdgeRef>,
    pub input_connected: bool,
    pub output_connected: bool,
    pub total_probes: ProbeStats,
    pub max_query_probes: u64,
    pub below_threshold: usize,
    pub tester_calls: usize,
    /// Tester runs that accepted (at most one per query).
    pub tester_accepts: usize,
}

/// Queries every edge with its own probe view and collects the accepted set.
/// Edges are evaluated in parallel; the result does not depend on scheduling.
pub fn materialize_subgraph<F: Real>(graph: &Graph, config: &LscgConfig<F>) -> Result<MaterializeOutcome> {
    config.validate()?;
    let all: Vec<EdgeRef> = graph.edges().collect();
    let decisions: Vec<EdgeDecision<F>> =
        all.par_iter().map(|&e| query_edge(&graph.view(), e, config)).collect::<Result<_>>()?;

    let edges: Vec<EdgeRef> = decisions.iter().filter(|d| d.accepted).map(|d| d.edge).collect();
    let output_connected = is_connected(&edges, graph.n());
    Ok(MaterializeOutcome {
        input_connected: graph.is_connected(),
        output_connected,
        total_probes: decisions.iter().fold(ProbeStats::default(), |acc, d| acc + d.probes),
        max_query_probes: decisions.iter().map(|d| d.probes.total()).max().unwrap_or(0),
        below_threshold: decisions.iter().filter(|d| d.below_threshold).count(),
        tester_calls: decisions.iter().map(|d| d.tester_calls).sum(),
        tester_accepts: decisions.iter().filter(|d| d.g_star.is_some()).count(),
        edges,
    })
}

/// Union-find connectivity of the edge set over vertices `0..n`.
pub fn is_connected(edges: &[EdgeRef], n: usize) -> bool {
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    if n <= 1 {
        return true;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    let mut components = n;
    for e in edges {
        let (ra, rb) = (find(&mut parent, e.a), find(&mut parent, e.b));
        if ra != rb {
            parent[ra] = rb;
            components -= 1;
        }
    }
    components == 1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tester::TesterConfig;

    fn e(a: usize, b: usize) -> EdgeRef {
        EdgeRef::new(a, b).unwrap()
    }

    #[test]
    fn lambda_values() {
        let c: TesterConfig<f64> = TesterConfig::default();
        assert_eq!(lambda(&c, 1024).unwrap(), 2560.0);
        assert_eq!(lambda(&TesterConfig { d: 0.0, ..c }, 2).unwrap(), 128.0);
        assert_eq!(lambda(&c.with_scale(0.5), 1024).unwrap(), 1280.0);
        assert!(lambda(&c, 1).is_err());
    }

    #[test]
    fn connectivity_helper() {
        assert!(is_connected(&[e(0, 1), e(1, 2), e(1, 3)], 4));
        assert!(!is_connected(&[], 2));
        assert!(!is_connected(&[e(0, 1), e(1, 2), e(0, 2), e(3, 4), e(4, 5), e(3, 5)], 6));
    }

    #[test]
    fn low_degree_edge_skips_ladder() {
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        let view = g.view();
        let d = query_edge(&view, e(0, 1), &LscgConfig::new(2.0f64, 5)).unwrap();
        assert!(d.accepted && d.below_threshold);
        assert_eq!(d.tester_calls, 0);
        assert_eq!(d.s_hat, 2.0);
        // One adjacency check and two degree probes.
        assert_eq!(d.probes.total(), 3);
    }

    #[test]
    fn rejects_non_edge_and_bad_threshold() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let view = g.view();
        assert!(matches!(query_edge(&view, e(0, 2), &LscgConfig::new(2.0f64, 1)), Err(Error::InvalidEdge(0, 2))));
        assert!(query_edge(&view, e(0, 1), &LscgConfig::new(0.5f64, 1)).is_err());
    }

    #[test]
    fn path_materializes_to_itself() {
        let g = Graph::from_edges(6, (0..5).map(|i| (i, i + 1))).unwrap();
        let out = materialize_subgraph(&g, &LscgConfig::new(1.0f64, 3).with_scale(0.1)).unwrap();
        assert_eq!(out.edges, g.edges().collect::<Vec<_>>());
        assert!(out.output_connected);
    }

    #[test]
    fn regime_flag() {
        let c = LscgConfig::new(32.0f64, 0);
        assert!(!c.threshold_in_regime(256)); // log² 256 = 64
        assert!(LscgConfig::new(100.0f64, 0).threshold_in_regime(256));
    }
}
