//! Strong-connectivity guess tester.
//!
//! For an edge `(u, v)` and guess `g`, start from `S = V` and repeat for
//! `⌈log_{3/2} n⌉` rounds: sample a skeleton of `G[S]` keeping each edge with
//! probability `min(1, λ'(|S|) / g)`, replace `S` with the set reachable from
//! `u`, and reject as soon as `v` falls out. Guesses at most `s_e` are
//! accepted with high probability; guesses of at least `2 λ' s_e` are
//! rejected with high probability.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeRef, ProbeStats, ProbedView};
use crate::keyed::StreamKey;
use crate::scalar::Real;
use crate::skeleton::SkeletonState;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TesterConfig<F: Real> {
    /// Error exponent: failure probabilities are `O(n^-d)`.
    pub d: F,
    /// Multiplier on both λ and λ'.
    pub c_scale: F,
    /// Base of every logarithm.
    pub log_base: F,
    pub rounds_override: Option<usize>,
}

impl<F: Real> Default for TesterConfig<F> {
    fn default() -> Self {
        TesterConfig { d: F::of(2.0), c_scale: F::one(), log_base: F::of(2.0), rounds_override: None }
    }
}

impl<F: Real> TesterConfig<F> {
    pub fn with_scale(mut self, c_scale: F) -> Self {
        self.c_scale = c_scale;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.d >= F::zero()) {
            return Err(Error::InvalidInput(format!("error exponent d must be >= 0, got {}", self.d)));
        }
        if !(self.c_scale > F::zero()) || !self.c_scale.is_finite() {
            return Err(Error::InvalidInput(format!("c_scale must be positive, got {}", self.c_scale)));
        }
        if !(self.log_base > F::one()) || !self.log_base.is_finite() {
            return Err(Error::InvalidInput(format!("log base must exceed 1, got {}", self.log_base)));
        }
        if self.rounds_override == Some(0) {
            return Err(Error::InvalidInput("rounds override must be positive".into()));
        }
        Ok(())
    }

    /// `max(1, log_base(s))`.
    pub(crate) fn floored_log(&self, s: usize) -> F {
        F::one().max(F::of_count(s).ln() / self.log_base.ln())
    }

    /// `⌈log_{3/2} n⌉` unless overridden.
    pub fn round_budget(&self, n: usize) -> usize {
        self.rounds_override.unwrap_or_else(|| {
            let mut rounds = 0usize;
            let mut reach = 1.0f64;
            while reach < n as f64 {
                reach *= 1.5;
                rounds += 1;
            }
            rounds
        })
    }
}

/// `λ'(s) = c · 12 (d + 2) · max(1, log s)`, the per-round sampling constant.
pub fn lambda_prime<F: Real>(config: &TesterConfig<F>, s: usize) -> Result<F> {
    if s < 2 {
        return Err(Error::DegenerateComponent(s));
    }
    Ok(config.c_scale * F::of(12.0) * (config.d + F::of(2.0)) * config.floored_log(s))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accept,
    Reject,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TesterOutcome {
    pub verdict: Verdict,
    pub rounds_run: usize,
    pub final_s_size: usize,
    pub probes: ProbeStats,
    pub max_resample_iterations: u64,
    pub boundary_discards: u64,
}

impl TesterOutcome {
    pub fn accepted(&self) -> bool {
        self.verdict == Verdict::Accept
    }
}

enum Members {
    All,
    Set(Vec<bool>),
}

impl Members {
    fn contains(&self, x: usize) -> bool {
        match self {
            Members::All => true,
            Members::Set(s) => s[x],
        }
    }
}

/// Stream key for the skeleton of one tester round.
pub fn skeleton_key<F: Real>(seed: u64, e: EdgeRef, g: F, round: usize) -> StreamKey {
    StreamKey::new(seed).with("skel").with(e.a).with(e.b).with(g.as_f64().to_bits()).with(round)
}

/// Runs the tester for guess `g` on edge `e`. The search starts from the
/// smaller endpoint.
pub fn test_guess<F: Real>(
    view: &ProbedView<'_>,
    e: EdgeRef,
    g: F,
    config: &TesterConfig<F>,
    seed: u64,
) -> Result<TesterOutcome> {
    config.validate()?;
    if view.adjacency(e.a, e.b)?.is_none() {
        return Err(Error::InvalidEdge(e.a, e.b));
    }
    run_rounds(view, e, g, config, seed)
}

/// Tester body without the edge check; `e` must be an edge.
pub(crate) fn run_rounds<F: Real>(
    view: &ProbedView<'_>,
    e: EdgeRef,
    g: F,
    config: &TesterConfig<F>,
    seed: u64,
) -> Result<TesterOutcome> {
    if !(g > F::zero()) {
        return Err(Error::InvalidInput(format!("guess must be positive, got {g}")));
    }
    let start = view.probe_count();
    let n = view.n();
    let budget = config.round_budget(n);
    let (u, v) = (e.a, e.b);

    let mut members = Members::All;
    let mut size = n;
    let mut max_resample = 0;
    let mut boundary = 0;
    for round in 0..budget {
        let p = F::one().min(lambda_prime(config, size)? / g);
        let mut skel = SkeletonState::new(view, p, &skeleton_key(seed, e, g, round))?;
        let reached = skel.reachable(u, |x| members.contains(x))?;
        let trace = skel.trace();
        max_resample = max_resample.max(trace.max_resample_iterations);
        boundary += trace.boundary_discards;

        size = reached.len();
        let mut next = vec![false; n];
        for x in reached {
            next[x] = true;
        }
        let keeps_v = next[v];
        members = Members::Set(next);
        if !keeps_v {
            return Ok(TesterOutcome {
                verdict: Verdict::Reject,
                rounds_run: round + 1,
                final_s_size: size,
                probes: view.probe_count() - start,
                max_resample_iterations: max_resample,
                boundary_discards: boundary,
            });
        }
    }
    Ok(TesterOutcome {
        verdict: Verdict::Accept,
        rounds_run: budget,
        final_s_size: size,
        probes: view.probe_count() - start,
        max_resample_iterations: max_resample,
        boundary_discards: boundary,
    })
}
