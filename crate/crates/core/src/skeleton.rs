//! Lazy, consistent access to a random skeleton of the input graph.
//!
//! A skeleton keeps every edge independently with probability `p`. Nothing is
//! sampled up front: the state fills in the implicit adjacency matrix only as
//! far as next-neighbor queries require. For each touched vertex `u` it keeps
//!
//! - `last[u]`: the largest 1-based index into `N(u)` whose presence has been
//!   decided from `u`'s side (0 before the first query, `deg(u) + 1` once
//!   exhausted);
//! - `P[u]`: indices into `N(u)` of neighbors known to be present, discovered
//!   from either endpoint.
//!
//! A cell `(u, i)` is present iff `i ∈ P[u]`, absent iff `i <= last[u]` and
//! `i ∉ P[u]` (or symmetrically from the other endpoint), undecided otherwise.
//! Gaps between successive present cells are drawn with a geometric skip, so
//! each undecided cell is an independent Bernoulli(`p`) coin.

use std::collections::{BTreeSet, VecDeque};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{EdgeRef, ProbeStats, ProbedView};
use crate::keyed::{GeometricSkip, RandomStream, StreamKey};
use crate::scalar::Real;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SkeletonTrace {
    pub probes: ProbeStats,
    pub next_neighbor_calls: u64,
    pub resample_iterations: u64,
    pub max_resample_iterations: u64,
    /// Skeleton neighbors dropped by `reachable` because they fell outside
    /// the member set. Their probes are included in `probes`.
    pub boundary_discards: u64,
}

#[derive(Debug, Default, Clone)]
struct Slot {
    degree: Option<usize>,
    last: usize,
    /// `P[u]` as a bitset over 1-based neighbor indices, grown on demand.
    present: Vec<u64>,
}

impl Slot {
    fn contains(&self, i: usize) -> bool {
        self.present.get(i / 64).is_some_and(|w| w >> (i % 64) & 1 == 1)
    }

    fn insert(&mut self, i: usize) {
        let word = i / 64;
        if word >= self.present.len() {
            self.present.resize(word + 1, 0);
        }
        self.present[word] |= 1 << (i % 64);
    }

    /// Smallest known-present index strictly above `i`.
    fn present_after(&self, i: usize) -> Option<usize> {
        let i = i + 1;
        let mut word = i / 64;
        let mut bits = *self.present.get(word)? & (!0u64 << (i % 64));
        loop {
            if bits != 0 {
                return Some(word * 64 + bits.trailing_zeros() as usize);
            }
            word += 1;
            bits = *self.present.get(word)?;
        }
    }

    fn indices(&self) -> Vec<usize> {
        (0..self.present.len() * 64).filter(|&i| self.contains(i)).collect()
    }
}

#[derive(Debug)]
pub struct SkeletonState<'v, 'g, F: Real> {
    p: F,
    skip: Option<GeometricSkip>,
    view: &'v ProbedView<'g>,
    slots: Vec<Slot>,
    stream: RandomStream,
    start: ProbeStats,
    trace: SkeletonTrace,
}

impl<'v, 'g, F: Real> SkeletonState<'v, 'g, F> {
    pub fn new(view: &'v ProbedView<'g>, p: F, key: &StreamKey) -> Result<Self> {
        if !(p >= F::zero() && p <= F::one()) {
            return Err(Error::InvalidProbability(p.as_f64()));
        }
        Ok(SkeletonState {
            p,
            skip: if p > F::zero() { Some(GeometricSkip::new(p)?) } else { None },
            view,
            slots: vec![Slot::default(); view.n()],
            stream: key.derive(),
            start: view.probe_count(),
            trace: SkeletonTrace::default(),
        })
    }

    pub fn p(&self) -> F {
        self.p
    }

    pub fn trace(&self) -> SkeletonTrace {
        SkeletonTrace { probes: self.view.probe_count() - self.start, ..self.trace }
    }

    /// `last[u]` (0 if `u` was never touched).
    pub fn last(&self, u: usize) -> usize {
        self.slots.get(u).map_or(0, |s| s.last)
    }

    /// `P[u]` in ascending order.
    pub fn known_present(&self, u: usize) -> Vec<usize> {
        self.slots.get(u).map(Slot::indices).unwrap_or_default()
    }

    fn degree(&mut self, u: usize) -> Result<usize> {
        if let Some(d) = self.slots.get(u).and_then(|s| s.degree) {
            return Ok(d);
        }
        let d = self.view.degree(u)?;
        self.slots[u].degree = Some(d);
        Ok(d)
    }

    /// Draws the next candidate index strictly after `a`, or returns `b` when
    /// the geometric skip overshoots the open interval `(a, b)`.
    pub fn sample_next_index(&mut self, a: usize, b: usize) -> usize {
        let Some(skip) = self.skip else { return b };
        if a + 1 >= b {
            return b;
        }
        let k = skip.sample(&mut self.stream);
        match a.checked_add(usize::try_from(k).unwrap_or(usize::MAX)) {
            Some(i) if i < b => i,
            _ => b,
        }
    }

    /// Index of `u` in `N(v)` if the edge was already decided absent from
    /// `v`'s side; otherwise `Ok(None)` with the index when it was probed.
    fn absent_from_other_side(&mut self, v: usize, u: usize) -> Result<(bool, Option<usize>)> {
        let last_v = self.last(v);
        if last_v == 0 {
            return Ok((false, None));
        }
        let j = self.view.adjacency(v, u)?.expect("neighbor relation is symmetric");
        let decided_absent = j <= last_v && !self.slots[v].contains(j);
        Ok((decided_absent, Some(j)))
    }

    /// Next neighbor of `u` in the skeleton, in ascending index order; `None`
    /// once `u`'s skeleton neighborhood is exhausted.
    pub fn next_neighbor(&mut self, u: usize) -> Result<Option<usize>> {
        let deg = self.degree(u)?;
        self.trace.next_neighbor_calls += 1;
        let slot = &self.slots[u];
        let start = slot.last;
        if start > deg {
            return Ok(None);
        }
        let w = slot.present_after(start).unwrap_or(deg + 1);

        let mut idx = start;
        let mut iterations = 0u64;
        let mut found: Option<(usize, Option<usize>)> = None;
        loop {
            idx = self.sample_next_index(idx, w);
            iterations += 1;
            if idx == w {
                break;
            }
            let v = self.view.neighbor(u, idx)?;
            let (absent, j) = self.absent_from_other_side(v, u)?;
            if !absent {
                found = Some((v, j));
                break;
            }
        }
        self.trace.resample_iterations += iterations;
        self.trace.max_resample_iterations = self.trace.max_resample_iterations.max(iterations);

        let result = match found {
            Some((v, j)) => {
                let j = match j {
                    Some(j) => j,
                    None => self.view.adjacency(v, u)?.expect("neighbor relation is symmetric"),
                };
                self.slots[u].insert(idx);
                self.slots[v].insert(j);
                Some(v)
            }
            None if idx <= deg => Some(self.view.neighbor(u, idx)?),
            None => None,
        };
        self.slots[u].last = idx;
        Ok(result)
    }

    /// Skeleton neighbors of `u` not yet returned, in order.
    fn drain_neighbors(&mut self, u: usize) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        while let Some(v) = self.next_neighbor(u)? {
            out.push(v);
        }
        Ok(out)
    }

    /// FIFO breadth-first closure of `source` in the skeleton restricted to
    /// vertices satisfying `members`. Returned in discovery order.
    pub fn reachable(&mut self, source: usize, members: impl Fn(usize) -> bool) -> Result<Vec<usize>> {
        if source >= self.view.n() {
            return Err(Error::InvalidVertex { vertex: source, n: self.view.n() });
        }
        if !members(source) {
            return Err(Error::InvalidInput(format!("source {source} is not in the member set")));
        }
        let mut seen = vec![false; self.view.n()];
        seen[source] = true;
        let mut order = vec![source];
        let mut queue = VecDeque::from([source]);
        while let Some(x) = queue.pop_front() {
            while let Some(w) = self.next_neighbor(x)? {
                if !members(w) {
                    self.trace.boundary_discards += 1;
                    continue;
                }
                if !seen[w] {
                    seen[w] = true;
                    order.push(w);
                    queue.push_back(w);
                }
            }
        }
        Ok(order)
    }

    /// Realizes the whole skeleton by exhausting every vertex in ID order.
    /// Intended for test oracles on a fresh state.
    pub fn materialize(self) -> Result<BTreeSet<EdgeRef>> {
        self.materialize_in_order(std::iter::empty())
    }

    /// Like [`materialize`](Self::materialize), but exhausts the vertices of
    /// `first` before the rest. The realization under one stream depends on
    /// call order, so replaying a BFS discovery order here reproduces the
    /// skeleton that BFS saw.
    pub fn materialize_in_order(mut self, first: impl IntoIterator<Item = usize>) -> Result<BTreeSet<EdgeRef>> {
        let n = self.view.n();
        let mut done = vec![false; n];
        let mut edges = BTreeSet::new();
        let order: Vec<usize> = first.into_iter().chain(0..n).collect();
        for u in order {
            if u >= n {
                return Err(Error::InvalidVertex { vertex: u, n });
            }
            if std::mem::replace(&mut done[u], true) {
                continue;
            }
            for v in self.drain_neighbors(u)? {
                edges.insert(EdgeRef::new(u, v)?);
            }
        }
        Ok(edges)
    }
}
