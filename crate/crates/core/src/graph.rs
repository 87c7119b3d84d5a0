//! Immutable simple undirected graphs and the counted probe interface.
//!
//! Online algorithms see a [`Graph`] only through a [`ProbedView`], which
//! offers the three probe types (degree, i-th neighbor, adjacency) and counts
//! every call. Offline consumers (the exact oracle, the harness) use the
//! uncounted accessors on [`Graph`] directly.

use std::cell::Cell;
use std::fmt::Write as _;
use std::ops::{Add, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Canonical undirected edge key with `a < b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeRef {
    pub a: usize,
    pub b: usize,
}

impl EdgeRef {
    /// Builds the canonical form of `{u, v}`; self-loops are rejected.
    pub fn new(u: usize, v: usize) -> Result<Self> {
        if u == v {
            return Err(Error::InvalidInput(format!("self-loop at vertex {u}")));
        }
        Ok(EdgeRef { a: u.min(v), b: u.max(v) })
    }
}

/// Simple undirected graph in compressed sparse row form. Every neighbor
/// list is strictly ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<usize>,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting self-loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut canon = Vec::new();
        for (u, v) in edges {
            for x in [u, v] {
                if x >= n {
                    return Err(Error::InvalidVertex { vertex: x, n });
                }
            }
            canon.push(EdgeRef::new(u, v)?);
        }
        canon.sort_unstable();
        if let Some(w) = canon.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidInput(format!("duplicate edge ({}, {})", w[0].a, w[0].b)));
        }
        Ok(Self::from_canonical(n, &canon))
    }

    fn from_canonical(n: usize, edges: &[EdgeRef]) -> Self {
        let mut degree = vec![0usize; n];
        for e in edges {
            degree[e.a] += 1;
            degree[e.b] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0usize; offsets[n]];
        for e in edges {
            targets[fill[e.a]] = e.b;
            fill[e.a] += 1;
            targets[fill[e.b]] = e.a;
            fill[e.b] += 1;
        }
        for u in 0..n {
            targets[offsets[u]..offsets[u + 1]].sort_unstable();
        }
        Graph { offsets, targets }
    }

    /// Parses the edge-list text format: a header line `n m` followed by `m`
    /// lines `u v`. Blank lines are ignored.
    pub fn parse_edge_list(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());

        let (hline, header) = lines.next().ok_or(Error::Parse { line: 1, msg: "missing header `n m`".into() })?;
        let (n, m) = parse_pair(hline, header)?;

        let mut edges: Vec<(EdgeRef, usize)> = Vec::with_capacity(m);
        for (line, body) in lines {
            if edges.len() == m {
                return Err(Error::Parse { line, msg: format!("more than the declared {m} edges") });
            }
            let (u, v) = parse_pair(line, body)?;
            if u >= n || v >= n {
                return Err(Error::Parse { line, msg: format!("vertex id out of range 0..{n}") });
            }
            if u == v {
                return Err(Error::Parse { line, msg: format!("self-loop at vertex {u}") });
            }
            edges.push((EdgeRef::new(u, v)?, line));
        }
        if edges.len() != m {
            return Err(Error::Parse {
                line: text.lines().count().max(1),
                msg: format!("expected {m} edges, found {}", edges.len()),
            });
        }
        edges.sort_unstable();
        if let Some(w) = edges.windows(2).find(|w| w[0].0 == w[1].0) {
            let line = w[0].1.max(w[1].1);
            return Err(Error::Parse { line, msg: format!("duplicate edge ({}, {})", w[1].0.a, w[1].0.b) });
        }
        let canon: Vec<EdgeRef> = edges.into_iter().map(|(e, _)| e).collect();
        Ok(Self::from_canonical(n, &canon))
    }

    /// Serializes to the edge-list format with canonical edges in
    /// lexicographic order.
    pub fn to_edge_list(&self) -> String {
        write_edge_list(self.n(), self.edges())
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    /// Offline neighbor list (uncounted).
    #[inline]
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    /// Offline degree (uncounted).
    #[inline]
    pub fn deg(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Canonical edges in lexicographic order (uncounted).
    pub fn edges(&self) -> impl Iterator<Item = EdgeRef> + '_ {
        (0..self.n()).flat_map(move |a| {
            self.neighbors(a).iter().filter(move |&&b| b > a).map(move |&b| EdgeRef { a, b })
        })
    }

    /// Whether the graph is connected (a graph on fewer than two vertices is).
    pub fn is_connected(&self) -> bool {
        let n = self.n();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &w in self.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == n
    }

    /// Counted probe view over this graph.
    pub fn view(&self) -> ProbedView<'_> {
        ProbedView::new(self)
    }
}

/// Writes `n m` and canonical edges in the edge-list format. The edges are
/// sorted before writing.
pub fn write_edge_list(n: usize, edges: impl IntoIterator<Item = EdgeRef>) -> String {
    let mut edges: Vec<EdgeRef> = edges.into_iter().collect();
    edges.sort_unstable();
    let mut out = String::with_capacity(16 + edges.len() * 12);
    let _ = writeln!(out, "{} {}", n, edges.len());
    for e in edges {
        let _ = writeln!(out, "{} {}", e.a, e.b);
    }
    out
}

fn parse_pair(line: usize, body: &str) -> Result<(usize, usize)> {
    let mut it = body.split_whitespace();
    let mut next = |what: &str| -> Result<usize> {
        let tok = it.next().ok_or_else(|| Error::Parse { line, msg: format!("missing {what}") })?;
        tok.parse().map_err(|_| Error::Parse { line, msg: format!("`{tok}` is not a non-negative integer") })
    };
    let a = next("first field")?;
    let b = next("second field")?;
    if let Some(extra) = it.next() {
        return Err(Error::Parse { line, msg: format!("unexpected trailing field `{extra}`") });
    }
    Ok((a, b))
}

/// Probe counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProbeStats {
    pub degree_probes: u64,
    pub neighbor_probes: u64,
    pub adjacency_probes: u64,
}

impl ProbeStats {
    pub fn total(&self) -> u64 {
        self.degree_probes + self.neighbor_probes + self.adjacency_probes
    }
}

impl Add for ProbeStats {
    type Output = ProbeStats;
    fn add(self, o: ProbeStats) -> ProbeStats {
        ProbeStats {
            degree_probes: self.degree_probes + o.degree_probes,
            neighbor_probes: self.neighbor_probes + o.neighbor_probes,
            adjacency_probes: self.adjacency_probes + o.adjacency_probes,
        }
    }
}

impl Sub for ProbeStats {
    type Output = ProbeStats;
    fn sub(self, o: ProbeStats) -> ProbeStats {
        ProbeStats {
            degree_probes: self.degree_probes - o.degree_probes,
            neighbor_probes: self.neighbor_probes - o.neighbor_probes,
            adjacency_probes: self.adjacency_probes - o.adjacency_probes,
        }
    }
}

/// A graph handle that counts every probe. Single-owner: use one view per
/// concurrent computation.
#[derive(Debug)]
pub struct ProbedView<'g> {
    graph: &'g Graph,
    stats: Cell<ProbeStats>,
}

impl<'g> ProbedView<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        ProbedView { graph, stats: Cell::new(ProbeStats::default()) }
    }

    /// Number of vertices. Known to local algorithms up front; not a probe.
    #[inline]
    pub fn n(&self) -> usize {
        self.graph.n()
    }

    #[inline]
    fn check(&self, u: usize) -> Result<()> {
        if u < self.graph.n() {
            Ok(())
        } else {
            Err(Error::InvalidVertex { vertex: u, n: self.graph.n() })
        }
    }

    #[inline]
    fn bump(&self, f: impl FnOnce(&mut ProbeStats)) {
        let mut s = self.stats.get();
        f(&mut s);
        self.stats.set(s);
    }

    #[inline]
    pub fn degree(&self, u: usize) -> Result<usize> {
        self.check(u)?;
        self.bump(|s| s.degree_probes += 1);
        Ok(self.graph.deg(u))
    }

    /// The `i`-th smallest neighbor of `u`, with `1 <= i <= degree(u)`.
    #[inline]
    pub fn neighbor(&self, u: usize, i: usize) -> Result<usize> {
        self.check(u)?;
        self.bump(|s| s.neighbor_probes += 1);
        let nbrs = self.graph.neighbors(u);
        if i == 0 || i > nbrs.len() {
            return Err(Error::InvalidIndex { vertex: u, index: i, degree: nbrs.len() });
        }
        Ok(nbrs[i - 1])
    }

    /// The 1-based index of `v` in `u`'s neighbor list, or `None`.
    #[inline]
    pub fn adjacency(&self, u: usize, v: usize) -> Result<Option<usize>> {
        self.check(u)?;
        self.check(v)?;
        self.bump(|s| s.adjacency_probes += 1);
        Ok(self.graph.neighbors(u).binary_search(&v).ok().map(|i| i + 1))
    }

    #[inline]
    pub fn probe_count(&self) -> ProbeStats {
        self.stats.get()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path3() -> Graph {
        Graph::parse_edge_list("3 2\n0 1\n1 2").unwrap()
    }

    fn k4() -> Graph {
        Graph::parse_edge_list("4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3").unwrap()
    }

    #[test]
    fn parse_path_and_k4() {
        let g = path3();
        assert_eq!((0..3).map(|u| g.deg(u)).collect::<Vec<_>>(), vec![1, 2, 1]);
        let k = k4();
        assert!((0..4).all(|u| k.deg(u) == 3));
        assert_eq!(k.m(), 6);
    }

    #[test]
    fn parse_errors_name_the_line() {
        match Graph::parse_edge_list("2 1\n0 0") {
            Err(Error::Parse { line: 2, msg }) => assert!(msg.contains("self-loop")),
            other => panic!("{other:?}"),
        }
        assert!(matches!(Graph::parse_edge_list("3 2\n0 1\n1 0"), Err(Error::Parse { line: 3, .. })));
        assert!(matches!(Graph::parse_edge_list("3 1\n0 3"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(Graph::parse_edge_list("3 1\n0 x"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(Graph::parse_edge_list("3 2\n0 1"), Err(Error::Parse { .. })));
        assert!(matches!(Graph::parse_edge_list(""), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(Graph::parse_edge_list("3 1\n0 1 2"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn degree_probe() {
        let k = k4();
        let v = k.view();
        assert_eq!(v.degree(0).unwrap(), 3);
        let p = path3();
        assert_eq!(p.view().degree(1).unwrap(), 2);
        let iso = Graph::from_edges(3, [(0, 1)]).unwrap();
        assert_eq!(iso.view().degree(2).unwrap(), 0);
        assert!(matches!(v.degree(4), Err(Error::InvalidVertex { .. })));
    }

    #[test]
    fn neighbor_probe() {
        let p = path3();
        let v = p.view();
        assert_eq!(v.neighbor(1, 1).unwrap(), 0);
        assert_eq!(v.neighbor(1, 2).unwrap(), 2);
        assert_eq!(k4().view().neighbor(2, 3).unwrap(), 3);
        assert!(matches!(v.neighbor(1, 0), Err(Error::InvalidIndex { .. })));
        assert!(matches!(v.neighbor(1, 3), Err(Error::InvalidIndex { .. })));
    }

    #[test]
    fn adjacency_probe() {
        let p = path3();
        let v = p.view();
        assert_eq!(v.adjacency(0, 2).unwrap(), None);
        assert_eq!(v.adjacency(1, 2).unwrap(), Some(2));
        assert_eq!(k4().view().adjacency(3, 0).unwrap(), Some(1));
    }

    #[test]
    fn probe_counts() {
        let k = k4();
        let v = k.view();
        assert_eq!(v.probe_count(), ProbeStats::default());
        v.degree(0).unwrap();
        assert_eq!(v.probe_count(), ProbeStats { degree_probes: 1, neighbor_probes: 0, adjacency_probes: 0 });
        v.neighbor(0, 1).unwrap();
        v.neighbor(0, 2).unwrap();
        assert_eq!(v.probe_count().total(), 3);
    }

    #[test]
    fn serialization_is_canonical() {
        let g = Graph::from_edges(4, [(3, 2), (1, 0), (2, 0)]).unwrap();
        assert_eq!(g.to_edge_list(), "4 3\n0 1\n0 2\n2 3\n");
    }
}
