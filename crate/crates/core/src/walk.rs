//! Metropolis walk over dual codewords `d = u B⊥` targeting
//! `f(u) = K_b^{n-1}(|d| - 1)²`.
//!
//! A proposal flips one uniformly chosen free bit of `u`, which XORs one row
//! of `B⊥` into `d`. The walker caches `d` and its weight so each step costs
//! one row-length XOR-popcount. Rejected proposals still record the current
//! weight, so every post-burn-in step is a sample.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::bits::BitVector;
use crate::code::{encode, CodePair};
use crate::error::{Error, Result};
use crate::krawtchouk::kraw_table;
use crate::rng::{seeded, ChainRng, PRNG_ID};
use crate::spectrum::WeightHistogram;

pub const DEFAULT_BURN_IN: u64 = 10_000;

/// Draws of `u` allowed before giving up on finding `f(u) > 0`.
pub const INIT_RETRIES: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkConfig {
    pub b: usize,
    /// Total Metropolis steps, burn-in included.
    pub steps: u64,
    pub burn_in: u64,
    pub seed: u64,
    /// Fixed values of the leading coefficient bits `u_0..u_{p-1}`.
    pub frozen_prefix: Vec<bool>,
    /// Recompute `d` from scratch every this many steps and compare.
    pub audit_every: Option<u64>,
}

impl WalkConfig {
    pub fn new(b: usize, steps: u64, seed: u64) -> Self {
        Self {
            b,
            steps,
            burn_in: DEFAULT_BURN_IN,
            seed,
            frozen_prefix: Vec::new(),
            audit_every: None,
        }
    }

    pub fn with_burn_in(mut self, burn_in: u64) -> Self {
        self.burn_in = burn_in;
        self
    }

    pub fn with_prefix(mut self, prefix: Vec<bool>) -> Self {
        self.frozen_prefix = prefix;
        self
    }

    pub fn with_audit(mut self, every: u64) -> Self {
        self.audit_every = Some(every);
        self
    }
}

/// `2 ln |K_b^{n-1}(h-1)|` for each weight, `-∞` at the zeros.
pub fn log_target(n: usize, b: usize) -> Result<Vec<f64>> {
    let table = kraw_table(n, b)?;
    Ok(table
        .values()
        .iter()
        .map(|v| if v.is_zero() { f64::NEG_INFINITY } else { 2.0 * v.log_mag() })
        .collect())
}

/// Live chain state: coefficients `u`, cached codeword `d = u B⊥` and `|d|`.
#[derive(Clone, Debug)]
pub struct WalkerState {
    u: BitVector,
    d: Vec<u64>,
    weight: usize,
    log_f: f64,
}

impl WalkerState {
    pub fn coefficients(&self) -> &BitVector {
        &self.u
    }

    pub fn weight(&self) -> usize {
        self.weight
    }

    pub fn log_f(&self) -> f64 {
        self.log_f
    }

    pub fn codeword(&self, n: usize) -> BitVector {
        let mut out = BitVector::zeros(n);
        for i in 0..n {
            if (self.d[i / 64] >> (i % 64)) & 1 == 1 {
                out.set(i, true);
            }
        }
        out
    }
}

/// A chain bound to one code and radius. Rows of `B⊥` are stored in one
/// contiguous buffer for the inner loop.
pub struct Walker {
    n: usize,
    k_perp: usize,
    words: usize,
    rows: Vec<u64>,
    log_f: Vec<f64>,
    first_free: usize,
    state: WalkerState,
    rng: ChainRng,
}

impl Walker {
    /// Seeds the RNG, fixes the prefix and draws a starting `u` uniformly
    /// among the free bits, redrawing while `f(u) = 0`.
    pub fn new(pair: &CodePair, config: &WalkConfig) -> Result<Self> {
        let dual = pair.dual();
        let (n, k_perp) = (pair.n(), dual.k());
        let p = config.frozen_prefix.len();
        if p > k_perp {
            return Err(Error::LengthMismatch {
                expected: k_perp,
                got: p,
            });
        }
        if p == k_perp {
            return Err(Error::NoFreeBits);
        }
        let log_f = log_target(n, config.b)?;
        let words = n.div_ceil(64);
        let mut rows = Vec::with_capacity(k_perp * words);
        for r in dual.rows() {
            rows.extend_from_slice(r.words());
        }
        let mut rng = seeded(config.seed);
        for _ in 0..INIT_RETRIES {
            let mut u = BitVector::random(k_perp, &mut rng);
            for (i, &bit) in config.frozen_prefix.iter().enumerate() {
                u.set(i, bit);
            }
            let d = encode(&u, dual)?;
            let weight = d.weight();
            if log_f[weight] > f64::NEG_INFINITY {
                let state = WalkerState {
                    u,
                    d: d.words().to_vec(),
                    weight,
                    log_f: log_f[weight],
                };
                return Ok(Self {
                    n,
                    k_perp,
                    words,
                    rows,
                    log_f,
                    first_free: p,
                    state,
                    rng,
                });
            }
        }
        Err(Error::InitFailure {
            retries: INIT_RETRIES,
        })
    }

    pub fn state(&self) -> &WalkerState {
        &self.state
    }

    /// One Metropolis step. Returns whether the proposal was accepted.
    #[inline]
    pub fn step(&mut self) -> bool {
        let i = self.rng.gen_range(self.first_free..self.k_perp);
        let row = &self.rows[i * self.words..(i + 1) * self.words];
        let mut h = 0u32;
        for (a, b) in self.state.d.iter().zip(row) {
            h += (a ^ b).count_ones();
        }
        let proposed = self.log_f[h as usize];
        let diff = proposed - self.state.log_f;
        let accept = if diff >= 0.0 {
            true
        } else if proposed == f64::NEG_INFINITY {
            false
        } else {
            self.rng.gen::<f64>() < diff.exp()
        };
        if accept {
            for (a, b) in self.state.d.iter_mut().zip(row) {
                *a ^= b;
            }
            self.state.u.flip(i);
            self.state.weight = h as usize;
            self.state.log_f = proposed;
        }
        accept
    }

    /// Recomputes `d` from `u` and compares with the cache.
    pub fn audit(&self, pair: &CodePair) -> Result<bool> {
        let d = encode(&self.state.u, pair.dual())?;
        Ok(d.words() == self.state.d.as_slice() && d.weight() == self.state.weight)
    }

    pub fn n(&self) -> usize {
        self.n
    }
}

/// Outcome of [`run_walk`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkResult {
    /// Counts of `|d|` over the recorded (post-burn-in) steps.
    pub histogram: WeightHistogram,
    pub recorded: u64,
    pub accepted: u64,
    pub proposed: u64,
    /// Recorded steps with the first free coefficient bit equal to one.
    pub first_bit_ones: u64,
    pub seed: u64,
    pub prng: String,
}

impl WalkResult {
    pub fn acceptance_rate(&self) -> f64 {
        if self.proposed == 0 {
            0.0
        } else {
            self.accepted as f64 / self.proposed as f64
        }
    }

    /// Fraction of recorded samples with the first free bit set.
    pub fn first_bit_fraction(&self) -> f64 {
        self.first_bit_ones as f64 / self.recorded as f64
    }
}

/// Runs `config.steps` Metropolis steps and histograms `|d|` after burn-in.
pub fn run_walk(pair: &CodePair, config: &WalkConfig) -> Result<WalkResult> {
    if config.steps <= config.burn_in {
        return Err(Error::NoSamples);
    }
    let mut walker = Walker::new(pair, config)?;
    let n = pair.n();
    let j = walker.first_free;
    let mut counts = vec![0u64; n + 1];
    let (mut accepted, mut first_bit_ones) = (0u64, 0u64);
    for t in 0..config.steps {
        accepted += walker.step() as u64;
        if t >= config.burn_in {
            counts[walker.state.weight] += 1;
            first_bit_ones += walker.state.u.get(j) as u64;
        }
        if let Some(every) = config.audit_every {
            if every > 0 && (t + 1) % every == 0 && !walker.audit(pair)? {
                return Err(Error::CacheDrift(t + 1));
            }
        }
    }
    Ok(WalkResult {
        histogram: WeightHistogram::from_counts(&counts),
        recorded: config.steps - config.burn_in,
        accepted,
        proposed: config.steps,
        first_bit_ones,
        seed: config.seed,
        prng: PRNG_ID.to_string(),
    })
}

/// Estimate of `P(u_j = 1 | u_0..u_{j-1} = prefix)` under the target, where
/// `j = prefix.len()`.
pub fn conditional_marginal(pair: &CodePair, b: usize, prefix: &[bool], steps: u64, burn_in: u64, seed: u64) -> Result<f64> {
    let config = WalkConfig::new(b, steps, seed)
        .with_burn_in(burn_in)
        .with_prefix(prefix.to_vec());
    Ok(run_walk(pair, &config)?.first_bit_fraction())
}

/// Runs `burn_in` steps, then keeps every `thinning`-th state until `count`
/// codewords are collected. `config.steps` is not used.
pub fn sample_dual_codewords(pair: &CodePair, config: &WalkConfig, count: usize, thinning: u64) -> Result<Vec<BitVector>> {
    if thinning == 0 {
        return Err(Error::Domain("thinning must be at least 1".into()));
    }
    let mut walker = Walker::new(pair, config)?;
    for _ in 0..config.burn_in {
        walker.step();
    }
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        for _ in 0..thinning {
            walker.step();
        }
        out.push(walker.state.codeword(pair.n()));
    }
    Ok(out)
}
