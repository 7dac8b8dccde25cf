//! Bounded distance decoding: the translation-overlap profile of the ball
//! state, its dequantized estimator, runtime models for Hadamard-test
//! decoding and brute force, and basic information set decoding.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, ToPrimitive, Zero};
use rand::seq::{index, SliceRandom};
use rand::Rng;

use crate::bits::{BitMatrix, BitVector};
use crate::code::{encode, enumerate_span, CodePair};
use crate::error::{Error, Result};
use crate::krawtchouk::{binomial, kraw_all_degrees, kraw_table, vol};
use crate::logval::{ln_biguint, ratio_f64};
use crate::oracle::{build_psi_b, StateVector};
use crate::spectrum::WeightHistogram;

/// Asymptotic fraction of invertible square matrices over GF(2), rounded.
pub const INVERTIBLE_FRACTION: f64 = 0.29;

/// Largest dual dimension for exhaustive dequantized evaluation.
pub const MAX_DEQUANT_DIM: usize = 20;

/// A received word `v` promised to lie within `delta` of the code.
#[derive(Clone, Debug)]
pub struct BDDInstance<'a> {
    pub pair: &'a CodePair,
    pub v: BitVector,
    pub delta: usize,
}

impl<'a> BDDInstance<'a> {
    pub fn new(pair: &'a CodePair, v: BitVector, delta: usize) -> Result<Self> {
        if v.len() != pair.n() {
            return Err(Error::LengthMismatch {
                expected: pair.n(),
                got: v.len(),
            });
        }
        if delta > pair.n() {
            return Err(Error::Domain(format!("delta = {delta} exceeds n = {}", pair.n())));
        }
        Ok(Self { pair, v, delta })
    }

    /// A uniformly random codeword plus a uniformly random error of weight
    /// exactly `delta`. Returns the instance and the planted codeword.
    pub fn random<R: Rng + ?Sized>(pair: &'a CodePair, delta: usize, rng: &mut R) -> Result<(Self, BitVector)> {
        let n = pair.n();
        if delta > n {
            return Err(Error::Domain(format!("delta = {delta} exceeds n = {n}")));
        }
        let u = BitVector::random(pair.k(), rng);
        let c = encode(&u, pair.primal())?;
        let mut v = c.clone();
        for i in index::sample(rng, n, delta) {
            v.flip(i);
        }
        Ok((Self { pair, v, delta }, c))
    }
}

/// `⟨B_0|B_δ⟩ = |B_0 ∩ B_δ| / Vol(b)` for radius-`b` balls whose centres are
/// `δ` apart: `Σ_{s1+s2≤b, δ-s1+s2≤b} C(δ,s1) C(n-δ,s2) / Vol(b)`.
pub fn ball_overlap(n: usize, b: usize, delta: usize) -> Result<f64> {
    let num = ball_intersection(n, b, delta)?;
    Ok(ratio_f64(&num, &vol(n, b)?))
}

/// `|B_0 ∩ B_δ|` exactly.
pub fn ball_intersection(n: usize, b: usize, delta: usize) -> Result<BigUint> {
    if b > n || delta > n {
        return Err(Error::Domain(format!("need b, delta <= n (n = {n}, b = {b}, delta = {delta})")));
    }
    let mut num = BigUint::zero();
    // s1 ones of z inside the support of the shift, s2 outside.
    for s1 in 0..=delta.min(b) {
        for s2 in 0..=(b - s1).min(n - delta) {
            if delta - s1 + s2 <= b {
                num += binomial(delta as u64, s1 as u64) * binomial((n - delta) as u64, s2 as u64);
            }
        }
    }
    Ok(num)
}

/// Overlap as a function of distance, `values[δ]` for `δ = 0..=n`.
#[derive(Clone, Debug, PartialEq)]
pub struct OverlapProfile {
    pub n: usize,
    pub b: usize,
    pub values: Vec<f64>,
}

pub fn ball_overlap_profile(n: usize, b: usize) -> Result<OverlapProfile> {
    let values = (0..=n).map(|d| ball_overlap(n, b, d)).collect::<Result<_>>()?;
    Ok(OverlapProfile { n, b, values })
}

/// `K_h^n(δ) / C(n, h)` for `h = 0..=n`: the mean of `(-1)^{d·v}` over
/// weight-`h` strings `d` for a fixed weight-`δ` string `v`. Evaluated via
/// `K_h^n(δ)/C(n,h) = K_δ^n(h)/C(n,δ)`, which needs degree `δ` only.
pub fn character_averages(n: usize, delta: usize) -> Result<Vec<f64>> {
    if delta > n {
        return Err(Error::Domain(format!("delta = {delta} exceeds n = {n}")));
    }
    let c = binomial(n as u64, delta as u64);
    Ok((0..=n)
        .map(|h| {
            let k: BigInt = kraw_all_degrees(delta, n, h as i64).pop().unwrap();
            let r = ratio_f64(&k.abs().to_biguint().unwrap(), &c);
            if k.is_negative() {
                -r
            } else {
                r
            }
        })
        .collect())
}

/// `Σ_h p(h) K_h^n(δ)/C(n, h)`: the overlap implied by a weight histogram,
/// assuming dual codewords of equal weight are equiprobable.
pub fn sampled_overlap(hist: &WeightHistogram, delta: usize) -> Result<f64> {
    if !hist.is_normalized() {
        return Err(Error::Domain("histogram is not normalized".into()));
    }
    let chi = character_averages(hist.n(), delta)?;
    Ok(hist.entries().iter().zip(&chi).map(|(p, c)| p * c).sum())
}

/// [`sampled_overlap`] at each `δ` in `deltas`.
pub fn sampled_overlap_profile(hist: &WeightHistogram, deltas: &[usize]) -> Result<Vec<f64>> {
    deltas.iter().map(|&d| sampled_overlap(hist, d)).collect()
}

/// Mean and standard error of `(-1)^{d·v}` over sampled dual codewords.
pub fn dequantized_overlap(instance: &BDDInstance, samples: &[BitVector]) -> Result<(f64, f64)> {
    if samples.is_empty() {
        return Err(Error::EmptySamples);
    }
    let s = samples.len() as f64;
    let plus = samples.iter().filter(|d| !d.dot(&instance.v)).count() as f64;
    let mean = (2.0 * plus - s) / s;
    // ±1 values: sample variance is (1 - mean²) · S/(S-1).
    let var = if samples.len() > 1 {
        (1.0 - mean * mean).max(0.0) * s / (s - 1.0)
    } else {
        0.0
    };
    Ok((mean, (var / s).sqrt()))
}

/// Exact dequantized overlaps: all dual codewords with their normalized
/// weights `p_ideal(d) ∝ K_b^{n-1}(|d|-1)²`.
pub struct ExactDequantizer {
    duals: Vec<BitVector>,
    weights: Vec<f64>,
}

impl ExactDequantizer {
    pub fn new(pair: &CodePair, b: usize) -> Result<Self> {
        if pair.k_perp() > MAX_DEQUANT_DIM {
            return Err(Error::TooLarge(format!(
                "dual dimension {} exceeds {MAX_DEQUANT_DIM}",
                pair.k_perp()
            )));
        }
        let table = kraw_table(pair.n(), b)?;
        let duals = enumerate_span(pair.dual(), MAX_DEQUANT_DIM)?;
        let logs: Vec<f64> = duals
            .iter()
            .map(|d| {
                let v = table.value(d.weight());
                if v.is_zero() {
                    f64::NEG_INFINITY
                } else {
                    2.0 * v.log_mag()
                }
            })
            .collect();
        let top = logs.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let raw: Vec<f64> = logs.iter().map(|l| (l - top).exp()).collect();
        let total: f64 = raw.iter().sum();
        Ok(Self {
            duals,
            weights: raw.into_iter().map(|w| w / total).collect(),
        })
    }

    /// `Σ_{d∈C⊥} p_ideal(d) (-1)^{d·v}`.
    pub fn overlap(&self, v: &BitVector) -> f64 {
        self.duals
            .iter()
            .zip(&self.weights)
            .map(|(d, w)| if d.dot(v) { -w } else { *w })
            .sum()
    }
}

/// One-shot form of [`ExactDequantizer::overlap`].
pub fn dequantized_overlap_exact(pair: &CodePair, b: usize, v: &BitVector) -> Result<f64> {
    Ok(ExactDequantizer::new(pair, b)?.overlap(v))
}

/// Hadamard-test repetitions `1/overlap²` needed to resolve `overlap`.
pub fn hadamard_test_shots(overlap: f64) -> Result<f64> {
    if overlap == 0.0 || !overlap.is_finite() {
        return Err(Error::ZeroOverlap);
    }
    Ok(1.0 / (overlap * overlap))
}

/// `C(n, δ)` candidate error patterns.
pub fn brute_force_runtime(n: usize, delta: usize) -> Result<BigUint> {
    if delta > n {
        return Err(Error::Domain(format!("delta = {delta} exceeds n = {n}")));
    }
    Ok(binomial(n as u64, delta as u64))
}

/// `log10 C(n, δ)`.
pub fn log10_brute_force(n: usize, delta: usize) -> Result<f64> {
    Ok(ln_biguint(&brute_force_runtime(n, delta)?) / std::f64::consts::LN_10)
}

/// Basic information set decoding: guess `k` coordinates, solve for the
/// coefficients on them, and accept when the re-encoded word lies within
/// `delta` of `v`. Returns the codeword and the number of trials used.
pub fn isd_decode<R: Rng + ?Sized>(instance: &BDDInstance, rng: &mut R, max_trials: u64) -> Result<(BitVector, u64)> {
    let g = instance.pair.primal();
    let (n, k) = (g.n(), g.k());
    for trial in 1..=max_trials {
        let mut cols: Vec<usize> = index::sample(rng, n, k).into_vec();
        cols.sort_unstable();
        let sub = g.matrix().select_columns(&cols);
        if !sub.is_invertible() {
            continue;
        }
        let u = sub
            .solve_left(&instance.v.select(&cols))?
            .expect("invertible system has a solution");
        let c = encode(&u, g)?;
        if c.xor_weight(&instance.v) <= instance.delta {
            return Ok((c, trial));
        }
    }
    Err(Error::TrialsExhausted(max_trials))
}

/// Per-trial ISD success probability `0.29 · C(n-δ, k)/C(n, k)`, or the
/// approximation `0.29 (1 - k/n)^δ` when `approximate` is set.
pub fn isd_success_prob(n: usize, k: usize, delta: usize, approximate: bool) -> Result<f64> {
    if k > n || delta > n - k {
        return Err(Error::Domain(format!("need k <= n - delta (n = {n}, k = {k}, delta = {delta})")));
    }
    if approximate {
        return Ok(INVERTIBLE_FRACTION * (1.0 - k as f64 / n as f64).powi(delta as i32));
    }
    let r = ratio_f64(
        &binomial((n - delta) as u64, k as u64),
        &binomial(n as u64, k as u64),
    );
    Ok(INVERTIBLE_FRACTION * r)
}

/// `Π_{i=1}^{k} (1 - 2^{-i})`, the exact probability that a uniform k×k
/// matrix over GF(2) is invertible.
pub fn gf2_invertible_probability(k: usize) -> f64 {
    (1..=k).map(|i| 1.0 - 0.5f64.powi(i as i32)).product()
}

/// Monte Carlo estimate of the invertible fraction of random k×k matrices.
pub fn gf2_invertible_fraction<R: Rng + ?Sized>(k: usize, trials: u64, rng: &mut R) -> f64 {
    let hits = (0..trials)
        .filter(|_| BitMatrix::random(k, k, rng).is_invertible())
        .count();
    hits as f64 / trials as f64
}

/// Source of overlap estimates `⟨Ψ_b| T_v |Ψ_b⟩` for descent decoding.
pub trait OverlapEstimator {
    fn estimate(&mut self, v: &BitVector) -> Result<f64>;
}

/// Exact overlaps from the statevector oracle (`n ≤ 16`).
pub struct ExactOverlap {
    psi: StateVector,
}

impl ExactOverlap {
    pub fn new(pair: &CodePair, b: usize) -> Result<Self> {
        Ok(Self {
            psi: build_psi_b(pair, b)?,
        })
    }
}

impl OverlapEstimator for ExactOverlap {
    fn estimate(&mut self, v: &BitVector) -> Result<f64> {
        Ok(self.psi.translation_overlap(v.to_index() as usize))
    }
}

/// Averages of `(-1)^{d·v}` over a fixed list of sampled dual codewords.
pub struct DequantizedOverlap {
    samples: Vec<BitVector>,
}

impl DequantizedOverlap {
    pub fn new(samples: Vec<BitVector>) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::EmptySamples);
        }
        Ok(Self { samples })
    }
}

impl OverlapEstimator for DequantizedOverlap {
    fn estimate(&mut self, v: &BitVector) -> Result<f64> {
        let plus = self.samples.iter().filter(|d| !d.dot(v)).count() as f64;
        let s = self.samples.len() as f64;
        Ok((2.0 * plus - s) / s)
    }
}

/// Tuning for [`descent_decode`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DescentConfig {
    /// Stop once the estimated overlap reaches `1 - tolerance`.
    pub tolerance: f64,
    /// Estimates within this of the current one count as ties.
    pub slack: f64,
    /// Consecutive non-improving (tied) moves allowed before stalling.
    pub max_sideways: usize,
}

impl Default for DescentConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-9,
            slack: 1e-12,
            max_sideways: 2,
        }
    }
}

/// Greedy descent on distance-to-code: repeatedly apply the single-bit flip
/// with the largest estimated overlap, scanning coordinates in a random
/// order so ties break randomly. The overlap profile is flat between odd
/// `δ` and the next even `δ`, so tied moves are allowed (never undoing the
/// previous flip) up to `max_sideways` in a row. Stops at estimated overlap
/// `≥ 1 - tolerance`; errors with `Stalled` when no acceptable flip exists.
pub fn descent_decode<E: OverlapEstimator + ?Sized, R: Rng + ?Sized>(
    instance: &BDDInstance,
    estimator: &mut E,
    rng: &mut R,
    config: &DescentConfig,
) -> Result<BitVector> {
    let n = instance.v.len();
    let mut v = instance.v.clone();
    let mut current = estimator.estimate(&v)?;
    let mut order: Vec<usize> = (0..n).collect();
    let mut last: Option<usize> = None;
    let mut sideways = 0;
    while current < 1.0 - config.tolerance {
        order.shuffle(rng);
        let mut best: Option<(usize, f64)> = None;
        for &i in &order {
            if Some(i) == last {
                continue;
            }
            v.flip(i);
            let e = estimator.estimate(&v)?;
            v.flip(i);
            if best.is_none_or(|(_, b)| e > b) {
                best = Some((i, e));
            }
        }
        match best {
            Some((i, e)) if e > current + config.slack => {
                sideways = 0;
                v.flip(i);
                last = Some(i);
                current = e;
            }
            Some((i, e)) if e >= current - config.slack && sideways < config.max_sideways => {
                sideways += 1;
                v.flip(i);
                last = Some(i);
                current = e;
            }
            _ => return Err(Error::Stalled(current)),
        }
    }
    Ok(v)
}

/// `log10` of a positive `f64`, `+∞` for zero overlap shot counts.
pub fn log10_shots(overlap: f64) -> f64 {
    hadamard_test_shots(overlap).map_or(f64::INFINITY, f64::log10)
}

/// `log10 (1 / p_ISD)` with the exact-binomial success probability.
pub fn log10_isd(n: usize, k: usize, delta: usize) -> Result<f64> {
    Ok(-isd_success_prob(n, k, delta, false)?.log10())
}

/// Lossy conversion used when printing exact counts.
pub fn biguint_to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    #[test]
    fn overlap_edges() {
        for n in [4usize, 10, 50] {
            for b in 0..=3 {
                assert_eq!(ball_overlap(n, b, 0).unwrap(), 1.0);
                for d in 2 * b + 1..=n {
                    assert_eq!(ball_overlap(n, b, d).unwrap(), 0.0);
                }
            }
        }
        assert!((ball_overlap(4, 1, 1).unwrap() - 0.4).abs() < 1e-15);
    }

    #[test]
    fn profile_steps_down_in_pairs() {
        // Radius-1 balls at distance 1 share {x, y}; at distance 2 they
        // share the two midpoints. Values come in equal odd/even pairs.
        assert_eq!(ball_intersection(20, 1, 1).unwrap(), ball_intersection(20, 1, 2).unwrap());
        for n in [20usize, 100] {
            for b in [1usize, 3, 7] {
                let p = ball_overlap_profile(n, b).unwrap();
                for t in 0..b {
                    assert!(p.values[2 * t + 1] < p.values[2 * t], "n={n} b={b} t={t}");
                    assert_eq!(p.values[2 * t + 1], p.values[2 * t + 2]);
                }
            }
        }
    }

    #[test]
    fn character_averages_at_zero_are_one() {
        assert!(character_averages(30, 0).unwrap().iter().all(|&c| c == 1.0));
        // Weight-1 v: K_h(1)/C(n,h) = 1 - 2h/n.
        for (h, c) in character_averages(30, 1).unwrap().iter().enumerate() {
            assert!((c - (1.0 - 2.0 * h as f64 / 30.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn shots() {
        assert_eq!(hadamard_test_shots(1.0).unwrap(), 1.0);
        assert!((hadamard_test_shots(0.1).unwrap() - 100.0).abs() < 1e-9);
        assert!(matches!(hadamard_test_shots(0.0), Err(Error::ZeroOverlap)));
    }

    #[test]
    fn brute_force_counts() {
        assert_eq!(brute_force_runtime(1000, 0).unwrap(), BigUint::from(1u8));
        assert_eq!(brute_force_runtime(1000, 1).unwrap(), BigUint::from(1000u32));
    }

    #[test]
    fn isd_prob_edges() {
        assert_eq!(isd_success_prob(100, 30, 0, false).unwrap(), 0.29);
        assert!(isd_success_prob(10, 8, 3, false).is_err());
    }

    #[test]
    fn invertible_probabilities() {
        assert_eq!(gf2_invertible_probability(1), 0.5);
        assert_eq!(gf2_invertible_probability(2), 0.375);
        let mut rng = seeded(3);
        assert!((gf2_invertible_fraction(1, 20_000, &mut rng) - 0.5).abs() < 0.02);
    }

    #[test]
    fn dequantized_of_zero_shift() {
        let pair = crate::code::random_code(10, 4, 1).unwrap();
        let inst = BDDInstance::new(&pair, BitVector::zeros(10), 0).unwrap();
        let samples = vec![BitVector::parse("1010101010").unwrap(); 5];
        assert_eq!(dequantized_overlap(&inst, &samples).unwrap(), (1.0, 0.0));
        assert!(matches!(dequantized_overlap(&inst, &[]), Err(Error::EmptySamples)));
    }

    #[test]
    fn isd_zero_distance() {
        let pair = crate::code::random_code(30, 10, 2).unwrap();
        let mut rng = seeded(9);
        let (inst, c) = BDDInstance::random(&pair, 0, &mut rng).unwrap();
        let (got, _) = isd_decode(&inst, &mut rng, 1000).unwrap();
        assert_eq!(got, c);
    }
}
