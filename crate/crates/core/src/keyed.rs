//! Hierarchically keyed deterministic random streams.
//!
//! A stream is a pure function of `(global_seed, path)`. The path is hashed
//! with SHA-256 into a ChaCha8 seed, so distinct paths give independent
//! streams and repeated derivations replay the same outputs.
//!
//! Label schema used by the algorithms:
//! - skeleton of a tester round: `["skel", a, b, guess_bits, round]`
//! - final keep coin of an edge: `["accept", a, b]`
//!
//! where `(a, b)` is the canonical edge and `guess_bits` the IEEE-754 bits of
//! the guess widened to `f64`.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::scalar::Real;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Label {
    Str(String),
    Int(u64),
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label::Str(s.to_owned())
    }
}

impl From<String> for Label {
    fn from(s: String) -> Self {
        Label::Str(s)
    }
}

impl From<u64> for Label {
    fn from(x: u64) -> Self {
        Label::Int(x)
    }
}

impl From<usize> for Label {
    fn from(x: usize) -> Self {
        Label::Int(x as u64)
    }
}

impl From<u32> for Label {
    fn from(x: u32) -> Self {
        Label::Int(x as u64)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StreamKey {
    pub global_seed: u64,
    pub path: Vec<Label>,
}

impl StreamKey {
    pub fn new(global_seed: u64) -> Self {
        StreamKey { global_seed, path: Vec::new() }
    }

    /// Extends the path by one label.
    pub fn with(mut self, label: impl Into<Label>) -> Self {
        self.path.push(label.into());
        self
    }

    fn digest(&self) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update(b"lscg.stream.v1");
        h.update(self.global_seed.to_le_bytes());
        for label in &self.path {
            match label {
                Label::Str(s) => {
                    h.update([0u8]);
                    h.update((s.len() as u64).to_le_bytes());
                    h.update(s.as_bytes());
                }
                Label::Int(x) => {
                    h.update([1u8]);
                    h.update(x.to_le_bytes());
                }
            }
        }
        h.finalize().into()
    }

    pub fn derive(&self) -> RandomStream {
        derive(self)
    }
}

/// Deterministic random stream derived from a [`StreamKey`].
#[derive(Debug, Clone)]
pub struct RandomStream {
    rng: ChaCha8Rng,
}

pub fn derive(key: &StreamKey) -> RandomStream {
    RandomStream { rng: ChaCha8Rng::from_seed(key.digest()) }
}

fn check_probability<F: Real>(p: F) -> Result<()> {
    if p >= F::zero() && p <= F::one() {
        Ok(())
    } else {
        Err(Error::InvalidProbability(p.as_f64()))
    }
}

impl RandomStream {
    /// Uniform on the open interval (0, 1).
    pub fn uniform_open(&mut self) -> f64 {
        ((self.rng.next_u64() >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
    }

    /// `true` with probability `p`.
    pub fn bernoulli<F: Real>(&mut self, p: F) -> Result<bool> {
        check_probability(p)?;
        Ok(self.uniform_open() < p.as_f64())
    }

    /// Number of Bernoulli(`p`) trials up to and including the first success:
    /// `P(k) = p (1 - p)^(k - 1)`, sampled by inverting the CDF.
    pub fn geometric_skip<F: Real>(&mut self, p: F) -> Result<u64> {
        Ok(GeometricSkip::new(p)?.sample(self))
    }
}

/// Geometric skip sampler with `1 / ln(1 - p)` precomputed.
#[derive(Debug, Clone, Copy)]
pub struct GeometricSkip {
    /// `None` when `p = 1`.
    inv_ln_q: Option<f64>,
}

impl GeometricSkip {
    /// Requires `0 < p <= 1`.
    pub fn new<F: Real>(p: F) -> Result<Self> {
        check_probability(p)?;
        let p = p.as_f64();
        if p == 0.0 {
            return Err(Error::InvalidProbability(p));
        }
        let inv_ln_q = (p < 1.0).then(|| 1.0 / (-p).ln_1p());
        Ok(GeometricSkip { inv_ln_q })
    }

    #[inline]
    pub fn sample(&self, stream: &mut RandomStream) -> u64 {
        let u = stream.uniform_open();
        match self.inv_ln_q {
            None => 1,
            // `as` saturates for huge skips.
            Some(inv) => ((u.ln() * inv).ceil() as u64).max(1),
        }
    }
}

impl RngCore for RandomStream {
    fn next_u32(&mut self) -> u32 {
        self.rng.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.rng.next_u64()
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.rng.fill_bytes(dest)
    }

    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> std::result::Result<(), rand::Error> {
        self.rng.try_fill_bytes(dest)
    }
}
