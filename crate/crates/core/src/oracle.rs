//! Offline ground truth: global min cuts, exact strong connectivities and
//! exhaustive cut checks for small graphs.
//!
//! Connectivity here is edge connectivity: a `k`-strong component is a maximal
//! vertex-induced subgraph whose min cut is at least `k`, and `s_e` is the
//! largest `k` such that `e` lies inside a `k`-strong component.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use num_traits::Num;

use crate::error::{Error, Result};
use crate::graph::{EdgeRef, Graph};
use crate::keyed::StreamKey;
use crate::scalar::Real;

/// Largest graph accepted by [`brute_force_strong_connectivities`].
pub const BRUTE_FORCE_LIMIT: usize = 12;
/// Largest graph accepted by [`enumerate_cut_values`].
pub const CUT_ENUMERATION_LIMIT: usize = 14;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutResult {
    pub value: u64,
    /// One side of the cut, ascending.
    pub side: Vec<usize>,
}

/// Exact strong connectivity of every edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StrongConnMap {
    pub n: usize,
    pub values: BTreeMap<EdgeRef, u64>,
}

impl StrongConnMap {
    pub fn get(&self, e: EdgeRef) -> Option<u64> {
        self.values.get(&e).copied()
    }

    /// `u v s_e` lines in canonical edge order.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (e, s) in &self.values {
            let _ = writeln!(out, "{} {} {}", e.a, e.b, s);
        }
        out
    }

    /// Every `t >= 1` satisfies `|{e : s_e <= t}| <= t (n - 1)`.
    pub fn edge_count_bound_holds(&self) -> bool {
        let mut sorted: Vec<u64> = self.values.values().copied().collect();
        sorted.sort_unstable();
        // Only thresholds equal to some s_e can be tight.
        sorted.iter().enumerate().all(|(i, &t)| {
            let count = sorted[i..].iter().take_while(|&&s| s == t).count() + i;
            count as u64 <= t * (self.n as u64).saturating_sub(1)
        })
    }

    pub fn reciprocal_sum(&self) -> f64 {
        self.values.values().map(|&s| 1.0 / s as f64).sum()
    }

    /// `1 <= s_e <= min(deg u, deg v)` for every edge.
    pub fn degree_bound_holds(&self, graph: &Graph) -> bool {
        self.values.iter().all(|(e, &s)| s >= 1 && s <= graph.deg(e.a).min(graph.deg(e.b)) as u64)
    }
}

/// Stoer–Wagner on a dense symmetric weight matrix. Returns the cut value and
/// the side containing the last merged group.
fn stoer_wagner(mut w: Vec<Vec<u64>>) -> (u64, Vec<usize>) {
    let n = w.len();
    debug_assert!(n >= 2);
    let mut groups: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut best = (u64::MAX, Vec::new());

    while active.len() > 1 {
        let mut key = vec![0u64; n];
        let mut added = vec![false; n];
        let (mut s, mut t) = (usize::MAX, usize::MAX);
        for _ in 0..active.len() {
            let next = *active
                .iter()
                .filter(|&&x| !added[x])
                .max_by(|&&x, &&y| key[x].cmp(&key[y]).then(y.cmp(&x)))
                .unwrap();
            added[next] = true;
            s = t;
            t = next;
            for &x in &active {
                if !added[x] {
                    key[x] += w[next][x];
                }
            }
        }
        if key[t] < best.0 {
            best = (key[t], groups[t].clone());
        }
        let moved = std::mem::take(&mut groups[t]);
        groups[s].extend(moved);
        for &x in &active {
            w[s][x] += w[t][x];
            w[x][s] = w[s][x];
        }
        w[s][s] = 0;
        active.retain(|&x| x != t);
    }
    best.1.sort_unstable();
    best
}

/// Connected components of `G[vertices]`, each ascending.
fn induced_components(graph: &Graph, vertices: &[usize], member: &mut [bool]) -> Vec<Vec<usize>> {
    for &v in vertices {
        member[v] = true;
    }
    let mut comps = Vec::new();
    for &root in vertices {
        if !member[root] {
            continue;
        }
        member[root] = false;
        let mut comp = vec![root];
        let mut k = 0;
        while k < comp.len() {
            let x = comp[k];
            k += 1;
            for &y in graph.neighbors(x) {
                if member[y] {
                    member[y] = false;
                    comp.push(y);
                }
            }
        }
        comp.sort_unstable();
        comps.push(comp);
    }
    comps
}

/// Min cut of the connected induced subgraph `G[vertices]` (`vertices` ascending).
fn min_cut_connected(graph: &Graph, vertices: &[usize]) -> CutResult {
    let k = vertices.len();
    let mut w = vec![vec![0u64; k]; k];
    for (i, &x) in vertices.iter().enumerate() {
        for &y in graph.neighbors(x) {
            if let Ok(j) = vertices.binary_search(&y) {
                w[i][j] = 1;
            }
        }
    }
    let (value, side) = stoer_wagner(w);
    CutResult { value, side: side.into_iter().map(|i| vertices[i]).collect() }
}

/// A global minimum edge cut. A disconnected graph yields value 0 with one
/// component as the side.
pub fn min_cut(graph: &Graph) -> Result<CutResult> {
    let n = graph.n();
    if n < 2 {
        return Err(Error::InvalidInput(format!("min cut needs at least 2 vertices, got {n}")));
    }
    let all: Vec<usize> = (0..n).collect();
    let comps = induced_components(graph, &all, &mut vec![false; n]);
    if comps.len() > 1 {
        return Ok(CutResult { value: 0, side: comps[0].clone() });
    }
    Ok(min_cut_connected(graph, &all))
}

/// Exact strong connectivities by recursive min-cut decomposition.
pub fn exact_strong_connectivities(graph: &Graph) -> Result<StrongConnMap> {
    let n = graph.n();
    if n < 2 {
        return Err(Error::InvalidInput(format!("need at least 2 vertices, got {n}")));
    }
    let mut values: BTreeMap<EdgeRef, u64> = graph.edges().map(|e| (e, 0)).collect();
    let mut member = vec![false; n];
    let mut inside = vec![false; n];
    let mut pending = vec![(0..n).collect::<Vec<_>>()];

    while let Some(piece) = pending.pop() {
        for comp in induced_components(graph, &piece, &mut member) {
            if comp.len() < 2 {
                continue;
            }
            let cut = min_cut_connected(graph, &comp);
            for &x in &comp {
                inside[x] = true;
            }
            for &x in &comp {
                for &y in graph.neighbors(x) {
                    if x < y && inside[y] {
                        let s = values.get_mut(&EdgeRef { a: x, b: y }).unwrap();
                        *s = (*s).max(cut.value);
                    }
                }
            }
            for &x in &comp {
                inside[x] = false;
            }
            let rest: Vec<usize> = comp.iter().copied().filter(|x| cut.side.binary_search(x).is_err()).collect();
            pending.push(cut.side);
            pending.push(rest);
        }
    }
    Ok(StrongConnMap { n, values })
}

/// Strong connectivities straight from the definition: maximize the min cut
/// of every connected induced subgraph containing each edge. Exponential in `n`.
pub fn brute_force_strong_connectivities(graph: &Graph) -> Result<StrongConnMap> {
    let n = graph.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(Error::TooLarge { n, limit: BRUTE_FORCE_LIMIT });
    }
    let mut values: BTreeMap<EdgeRef, u64> = graph.edges().map(|e| (e, 0)).collect();
    let mut member = vec![false; n];
    for mask in 1u32..(1u32 << n) {
        if mask.count_ones() < 2 {
            continue;
        }
        let subset: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let comps = induced_components(graph, &subset, &mut member);
        if comps.len() != 1 {
            continue;
        }
        let c = min_cut_connected(graph, &subset).value;
        for (e, s) in values.iter_mut() {
            if mask >> e.a & 1 == 1 && mask >> e.b & 1 == 1 {
                *s = (*s).max(c);
            }
        }
    }
    Ok(StrongConnMap { n, values })
}

/// Weighted value of every cut `(S, V \ S)`, keyed by the bitmask of `S`
/// over vertices `0..n-1` (vertex `n - 1` is always outside `S`).
/// `weights` is aligned with [`Graph::edges`].
pub fn enumerate_cut_values<W>(graph: &Graph, weights: &[W]) -> Result<BTreeMap<u32, W>>
where
    W: Num + Copy,
{
    let n = graph.n();
    if n > CUT_ENUMERATION_LIMIT {
        return Err(Error::TooLarge { n, limit: CUT_ENUMERATION_LIMIT });
    }
    if weights.len() != graph.m() {
        return Err(Error::InvalidInput(format!("{} weights for {} edges", weights.len(), graph.m())));
    }
    let mut out = BTreeMap::new();
    if n < 2 {
        return Ok(out);
    }
    // Incident weights per vertex, for incremental updates along a Gray code.
    let mut incident: Vec<Vec<(usize, W)>> = vec![Vec::new(); n];
    for (e, &w) in graph.edges().zip(weights) {
        incident[e.a].push((e.b, w));
        incident[e.b].push((e.a, w));
    }
    let mut mask = 0u32;
    let mut value = W::zero();
    for i in 1u32..(1u32 << (n - 1)) {
        let x = i.trailing_zeros() as usize;
        let x_in = mask >> x & 1 == 1;
        let (mut gain, mut loss) = (W::zero(), W::zero());
        for &(y, w) in &incident[x] {
            if (mask >> y & 1 == 1) == x_in {
                gain = gain + w;
            } else {
                loss = loss + w;
            }
        }
        value = value + gain - loss;
        mask ^= 1 << x;
        out.insert(mask, value);
    }
    Ok(out)
}

/// Keep probabilities `min(1, lambda / s_e)` aligned with [`Graph::edges`].
pub fn strong_connectivity_probabilities<F: Real>(map: &StrongConnMap, lambda: F) -> Vec<F> {
    map.values.values().map(|&s| F::one().min(lambda / F::of(s as f64))).collect()
}

/// Fraction of sampled weighted skeletons whose every cut lies within
/// `(1 ± eps)` of the original. Edge `e` is kept with probability `p_map[e]`
/// and weight `1 / p_map[e]`; `p_map` is aligned with [`Graph::edges`].
pub fn verify_sparsification<F: Real>(graph: &Graph, p_map: &[F], eps: F, trials: usize, seed: u64) -> Result<f64> {
    if let Some(&p) = p_map.iter().find(|&&p| !(p > F::zero() && p <= F::one())) {
        return Err(Error::InvalidProbability(p.as_f64()));
    }
    let ones = vec![F::one(); graph.m()];
    let original = enumerate_cut_values(graph, &ones)?;
    if trials == 0 {
        return Ok(1.0);
    }
    let mut passed = 0usize;
    for trial in 0..trials {
        let mut stream = StreamKey::new(seed).with("sparsify").with(trial).derive();
        let weights: Vec<F> = p_map
            .iter()
            .map(|&p| Ok(if stream.bernoulli(p)? { F::one() / p } else { F::zero() }))
            .collect::<Result<_>>()?;
        let sampled = enumerate_cut_values(graph, &weights)?;
        let tol = |orig: F| eps * orig + F::of(1e-9) * (F::one() + orig);
        if original.iter().all(|(mask, &orig)| (sampled[mask] - orig).abs() <= tol(orig)) {
            passed += 1;
        }
    }
    Ok(passed as f64 / trials as f64)
}
