//! Seeded graph generators for experiments and tests.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashSet};
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::keyed::StreamKey;

const GNP_ATTEMPTS: usize = 100;
const REGULAR_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorKind {
    /// Erdős–Rényi `G(n, p)`, resampled until connected.
    Gnp { n: usize, p: f64 },
    Complete { n: usize },
    /// Two `K_k` joined by the bridge `(k - 1, k)`.
    Barbell { k: usize },
    /// Uniform random labeled tree.
    RandomTree { n: usize },
    RandomRegular { n: usize, degree: usize },
    /// Star centered at vertex 0.
    Star { n: usize },
    Path { n: usize },
    Petersen,
}

impl GeneratorKind {
    /// Builds a kind from a name and positional arguments, e.g.
    /// `("gnp", ["256", "0.25"])`.
    pub fn from_args(name: &str, args: &[String]) -> Result<Self> {
        let want = |k: usize| -> Result<()> {
            if args.len() == k {
                Ok(())
            } else {
                Err(Error::InvalidInput(format!("generator `{name}` takes {k} argument(s), got {}", args.len())))
            }
        };
        let int = |i: usize| -> Result<usize> {
            args[i].parse().map_err(|_| Error::InvalidInput(format!("`{}` is not a non-negative integer", args[i])))
        };
        Ok(match name {
            "gnp" => {
                want(2)?;
                let p = args[1].parse().map_err(|_| Error::InvalidInput(format!("`{}` is not a number", args[1])))?;
                GeneratorKind::Gnp { n: int(0)?, p }
            }
            "complete" => {
                want(1)?;
                GeneratorKind::Complete { n: int(0)? }
            }
            "barbell" => {
                want(1)?;
                GeneratorKind::Barbell { k: int(0)? }
            }
            "random_tree" | "tree" => {
                want(1)?;
                GeneratorKind::RandomTree { n: int(0)? }
            }
            "random_regular" | "regular" => {
                want(2)?;
                GeneratorKind::RandomRegular { n: int(0)?, degree: int(1)? }
            }
            "star" => {
                want(1)?;
                GeneratorKind::Star { n: int(0)? }
            }
            "path" => {
                want(1)?;
                GeneratorKind::Path { n: int(0)? }
            }
            "petersen" => {
                want(0)?;
                GeneratorKind::Petersen
            }
            other => return Err(Error::InvalidInput(format!("unknown generator `{other}`"))),
        })
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeneratorKind::Gnp { n, p } => write!(f, "gnp({n}, {p})"),
            GeneratorKind::Complete { n } => write!(f, "complete({n})"),
            GeneratorKind::Barbell { k } => write!(f, "barbell({k})"),
            GeneratorKind::RandomTree { n } => write!(f, "random_tree({n})"),
            GeneratorKind::RandomRegular { n, degree } => write!(f, "random_regular({n}, {degree})"),
            GeneratorKind::Star { n } => write!(f, "star({n})"),
            GeneratorKind::Path { n } => write!(f, "path({n})"),
            GeneratorKind::Petersen => write!(f, "petersen"),
        }
    }
}

impl FromStr for GeneratorKind {
    type Err = Error;

    /// Parses `name:arg,arg`, e.g. `gnp:256,0.25`.
    fn from_str(s: &str) -> Result<Self> {
        let (name, rest) = s.split_once(':').unwrap_or((s, ""));
        let args: Vec<String> = rest.split(',').map(str::trim).filter(|a| !a.is_empty()).map(String::from).collect();
        GeneratorKind::from_args(name.trim(), &args)
    }
}

pub fn generate(kind: GeneratorKind, seed: u64) -> Result<Graph> {
    let key = StreamKey::new(seed).with("gen");
    match kind {
        GeneratorKind::Gnp { n, p } => gnp(n, p, &key),
        GeneratorKind::Complete { n } => complete(n),
        GeneratorKind::Barbell { k } => barbell(k),
        GeneratorKind::RandomTree { n } => random_tree(n, &key),
        GeneratorKind::RandomRegular { n, degree } => random_regular(n, degree, &key),
        GeneratorKind::Star { n } => Graph::from_edges(n, (1..n).map(|i| (0, i))),
        GeneratorKind::Path { n } => Graph::from_edges(n, (1..n).map(|i| (i - 1, i))),
        GeneratorKind::Petersen => petersen(),
    }
}

pub fn complete(n: usize) -> Result<Graph> {
    Graph::from_edges(n, (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))))
}

/// Outer 5-cycle `0..5`, inner pentagram `5..10`, spokes `i -- i + 5`.
pub fn petersen() -> Result<Graph> {
    let outer = (0..5).map(|i| (i, (i + 1) % 5));
    let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
    let spokes = (0..5).map(|i| (i, i + 5));
    Graph::from_edges(10, outer.chain(inner).chain(spokes))
}

pub fn barbell(k: usize) -> Result<Graph> {
    if k == 0 {
        return Err(Error::InfeasibleParams("barbell needs k >= 1".into()));
    }
    let clique = |off: usize| (0..k).flat_map(move |a| (a + 1..k).map(move |b| (off + a, off + b)));
    Graph::from_edges(2 * k, clique(0).chain(clique(k)).chain([(k - 1, k)]))
}

fn gnp(n: usize, p: f64, key: &StreamKey) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InfeasibleParams(format!("edge probability {p} outside [0, 1]")));
    }
    for attempt in 0..GNP_ATTEMPTS {
        let mut s = key.clone().with("gnp").with(attempt).derive();
        let mut edges = Vec::new();
        for a in 0..n {
            for b in a + 1..n {
                if s.bernoulli(p)? {
                    edges.push((a, b));
                }
            }
        }
        let g = Graph::from_edges(n, edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(Error::InfeasibleParams(format!("G({n}, {p}) not connected after {GNP_ATTEMPTS} attempts")))
}

/// Decodes a uniformly random Prüfer sequence.
fn random_tree(n: usize, key: &StreamKey) -> Result<Graph> {
    if n <= 2 {
        return Graph::from_edges(n, (1..n).map(|i| (0, i)));
    }
    let mut s = key.clone().with("tree").derive();
    let code: Vec<usize> = (0..n - 2).map(|_| s.gen_range(0..n)).collect();
    let mut degree = vec![1usize; n];
    for &c in &code {
        degree[c] += 1;
    }
    let mut leaves: BinaryHeap<Reverse<usize>> = (0..n).filter(|&v| degree[v] == 1).map(Reverse).collect();
    let mut edges = Vec::with_capacity(n - 1);
    for &c in &code {
        let Reverse(leaf) = leaves.pop().expect("a Prüfer sequence always leaves a leaf");
        edges.push((leaf, c));
        degree[c] -= 1;
        if degree[c] == 1 {
            leaves.push(Reverse(c));
        }
    }
    let Reverse(a) = leaves.pop().unwrap();
    let Reverse(b) = leaves.pop().unwrap();
    edges.push((a, b));
    Graph::from_edges(n, edges)
}

/// Configuration model, resampled until simple.
fn random_regular(n: usize, degree: usize, key: &StreamKey) -> Result<Graph> {
    if (n * degree) % 2 == 1 {
        return Err(Error::InfeasibleParams(format!("n * degree = {} is odd", n * degree)));
    }
    if degree >= n.max(1) && degree > 0 {
        return Err(Error::InfeasibleParams(format!("degree {degree} needs more than {n} vertices")));
    }
    let mut s = key.clone().with("regular").derive();
    let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, degree)).collect();
    'attempt: for _ in 0..REGULAR_ATTEMPTS {
        stubs.shuffle(&mut s);
        let mut seen = HashSet::new();
        let mut edges = Vec::with_capacity(stubs.len() / 2);
        for pair in stubs.chunks_exact(2) {
            let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if a == b || !seen.insert((a, b)) {
                continue 'attempt;
            }
            edges.push((a, b));
        }
        return Graph::from_edges(n, edges);
    }
    Err(Error::InfeasibleParams(format!("no simple {degree}-regular graph on {n} vertices found")))
}
