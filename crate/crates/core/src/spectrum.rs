//! Hamming-weight distributions of the dual-code walk: the ideal target,
//! the entropic barrier that limits the walk, region prediction, and the
//! fidelity between weight distributions.

use std::fmt::{self, Write as _};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::code::{enumerate_span, gv_distance, CodePair};
use crate::error::{Error, Result};
use crate::krawtchouk::{binomial, kraw_table, support_interval, KrawtchoukTable};
use crate::logval::{ln_biguint, log_sum_exp, ratio_f64};

/// Largest dual dimension enumerated exactly (2^24 codewords).
pub const MAX_ENUMERATION_DIM: usize = 24;

/// Counts or probabilities indexed by Hamming weight `h = 0..=n`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeightHistogram {
    n: usize,
    entries: Vec<f64>,
    normalized: bool,
}

impl WeightHistogram {
    pub fn zeros(n: usize) -> Self {
        Self {
            n,
            entries: vec![0.0; n + 1],
            normalized: false,
        }
    }

    pub fn from_counts(counts: &[u64]) -> Self {
        assert!(!counts.is_empty(), "histogram needs at least h = 0");
        Self {
            n: counts.len() - 1,
            entries: counts.iter().map(|&c| c as f64).collect(),
            normalized: false,
        }
    }

    /// Wraps probabilities; they must be non-negative and sum to 1 within 1e-10.
    pub fn from_probabilities(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() || probs.iter().any(|&p| !(p >= 0.0)) {
            return Err(Error::Domain("probabilities must be non-negative".into()));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::Domain(format!("probabilities sum to {total}, not 1")));
        }
        Ok(Self {
            n: probs.len() - 1,
            entries: probs,
            normalized: true,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    pub fn get(&self, h: usize) -> f64 {
        self.entries[h]
    }

    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn total(&self) -> f64 {
        self.entries.iter().sum()
    }

    pub fn add_count(&mut self, h: usize, count: f64) {
        self.entries[h] += count;
        self.normalized = false;
    }

    /// Divides by the total. Errors on an empty histogram.
    pub fn normalized(&self) -> Result<Self> {
        let total = self.total();
        if total <= 0.0 {
            return Err(Error::NoSamples);
        }
        Ok(Self {
            n: self.n,
            entries: self.entries.iter().map(|&e| e / total).collect(),
            normalized: true,
        })
    }

    /// Elementwise sum; associative, so merge order does not matter.
    pub fn merge(&self, other: &Self) -> Result<Self> {
        self.check_same_n(other)?;
        Ok(Self {
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect(),
            normalized: false,
        })
    }

    /// Keeps `lo..=hi` and renormalizes over that window.
    pub fn window(&self, lo: usize, hi: usize) -> Result<Self> {
        let mut entries = vec![0.0; self.n + 1];
        let hi = hi.min(self.n);
        entries[lo..=hi].copy_from_slice(&self.entries[lo..=hi]);
        Self {
            n: self.n,
            entries,
            normalized: false,
        }
        .normalized()
    }

    /// Mass strictly below `lo` plus strictly above `hi`.
    pub fn mass_outside(&self, lo: f64, hi: f64) -> f64 {
        self.entries
            .iter()
            .enumerate()
            .filter(|(h, _)| (*h as f64) < lo || (*h as f64) > hi)
            .map(|(_, &e)| e)
            .sum()
    }

    fn check_same_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                expected: self.n + 1,
                got: other.n + 1,
            });
        }
        Ok(())
    }

    /// CSV with header `h,<column>`. Integer-valued histograms print as
    /// integers, probabilities in round-trippable exponent form.
    pub fn to_csv(&self, column: &str) -> String {
        let mut s = format!("h,{column}\n");
        for (h, &e) in self.entries.iter().enumerate() {
            if !self.normalized && e.fract() == 0.0 && e < 9.0e15 {
                let _ = writeln!(s, "{h},{}", e as u64);
            } else {
                let _ = writeln!(s, "{h},{e:.17e}");
            }
        }
        s
    }
}

fn normalize_logs(n: usize, logs: &[f64]) -> Result<WeightHistogram> {
    let lse = log_sum_exp(logs);
    if lse == f64::NEG_INFINITY {
        return Err(Error::Domain("all weights vanish".into()));
    }
    let probs: Vec<f64> = logs.iter().map(|&l| (l - lse).exp()).collect();
    let total: f64 = probs.iter().sum();
    Ok(WeightHistogram {
        n,
        entries: probs.into_iter().map(|p| p / total).collect(),
        normalized: true,
    })
}

/// `p_ideal(h) ∝ C(n, h) · K_b^{n-1}(h-1)²`: the target weight distribution
/// with the binomial approximation `W(h) ≈ 2^{k⊥-n} C(n, h)`.
pub fn ideal_weight_distribution(n: usize, k: usize, b: usize) -> Result<WeightHistogram> {
    if k == 0 || k >= n {
        return Err(Error::Domain(format!("need 1 <= k < n (n = {n}, k = {k})")));
    }
    let table = kraw_table(n, b)?;
    ideal_from_table(&table)
}

/// Same as [`ideal_weight_distribution`] for a precomputed table.
pub fn ideal_from_table(table: &KrawtchoukTable) -> Result<WeightHistogram> {
    let n = table.n();
    let mut logs = Vec::with_capacity(n + 1);
    let mut c = BigUint::one();
    for h in 0..=n {
        logs.push(ln_biguint(&c) + 2.0 * table.value(h).log_mag());
        c *= (n - h) as u64;
        c /= (h + 1) as u64;
    }
    normalize_logs(n, &logs)
}

/// Weight enumerator `W(h)` of the dual code by Gray-code enumeration.
pub fn dual_weight_enumerator(pair: &CodePair) -> Result<Vec<u64>> {
    let dual = pair.dual();
    let kp = dual.k();
    if kp > MAX_ENUMERATION_DIM {
        return Err(Error::TooLarge(format!(
            "dual dimension {kp} exceeds enumeration budget {MAX_ENUMERATION_DIM}"
        )));
    }
    let mut w = vec![0u64; pair.n() + 1];
    let mut cur = crate::bits::BitVector::zeros(pair.n());
    w[0] += 1;
    for i in 1u64..(1u64 << kp) {
        cur ^= &dual.rows()[i.trailing_zeros() as usize];
        w[cur.weight()] += 1;
    }
    Ok(w)
}

/// `p_ideal(h) ∝ W(h) · K_b^{n-1}(h-1)²` with the true dual weight enumerator.
pub fn ideal_distribution_exact(pair: &CodePair, b: usize) -> Result<WeightHistogram> {
    let w = dual_weight_enumerator(pair)?;
    let table = kraw_table(pair.n(), b)?;
    let logs: Vec<f64> = w
        .iter()
        .enumerate()
        .map(|(h, &c)| {
            if c == 0 {
                f64::NEG_INFINITY
            } else {
                (c as f64).ln() + 2.0 * table.value(h).log_mag()
            }
        })
        .collect();
    normalize_logs(pair.n(), &logs)
}

/// Inputs to the entropic-barrier model: a proposal flips `f` of `n` bits.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BarrierParams {
    n: usize,
    f: usize,
    epsilon: f64,
}

impl BarrierParams {
    pub fn new(n: usize, f: usize, epsilon: f64) -> Result<Self> {
        if f == 0 || f > n {
            return Err(Error::Domain(format!("step weight f = {f} must lie in [1, {n}]")));
        }
        if !(epsilon > 0.0 && epsilon < 1.0) {
            return Err(Error::Domain(format!("epsilon = {epsilon} must lie in (0, 1)")));
        }
        Ok(Self { n, f, epsilon })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn f(&self) -> usize {
        self.f
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }
}

/// Default barrier threshold.
pub const DEFAULT_EPSILON: f64 = 1e-6;

/// Probability that flipping `f` uniformly random bits of a weight-`h`
/// string lowers its weight:
/// `Σ_{j=⌈f/2⌉}^{f} C(h, j) C(n-h, f-j) / C(n, f)`.
pub fn p_down(params: &BarrierParams, h: usize) -> Result<f64> {
    let (n, f) = (params.n, params.f);
    if h > n {
        return Err(Error::Domain(format!("weight {h} exceeds n = {n}")));
    }
    let mut num = BigUint::zero();
    for j in f.div_ceil(2)..=f {
        num += binomial(h as u64, j as u64) * binomial((n - h) as u64, (f - j) as u64);
    }
    Ok(ratio_f64(&num, &binomial(n as u64, f as u64)))
}

/// Smallest `h` with `P_down(h) ≥ ε`, by bisection over the monotone `P_down`.
pub fn barrier_weight(params: &BarrierParams) -> Result<usize> {
    let eps = params.epsilon;
    if p_down(params, params.n)? < eps {
        return Err(Error::NoSolution(format!("P_down never reaches {eps}")));
    }
    let (mut lo, mut hi) = (0usize, params.n);
    // invariant: P_down(hi) >= eps; answer in [lo, hi]
    while lo < hi {
        let mid = lo + (hi - lo) / 2;
        if p_down(params, mid)? >= eps {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    Ok(lo)
}

/// Predicted behaviour of the walk at `(n, k, b)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RegionClass {
    Convergent,
    CutOff,
    OverlappingBalls,
}

impl fmt::Display for RegionClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegionClass::Convergent => "convergent",
            RegionClass::CutOff => "cutoff",
            RegionClass::OverlappingBalls => "overlapping",
        })
    }
}

/// Step weight used for prediction: the expected row weight `⌈k/2⌉` of a
/// systematic dual generator.
pub fn model_step_weight(k: usize) -> usize {
    k.div_ceil(2).max(1)
}

pub fn classify_region(n: usize, k: usize, b: usize, epsilon: f64) -> Result<RegionClass> {
    if k == 0 || k >= n || b > n {
        return Err(Error::Domain(format!("invalid (n, k, b) = ({n}, {k}, {b})")));
    }
    let d = gv_distance(n, k);
    let barrier = barrier_weight(&BarrierParams::new(n, model_step_weight(k), epsilon)?)?;
    Ok(classify_with(d, barrier, n, b))
}

fn classify_with(gv: usize, barrier: usize, n: usize, b: usize) -> RegionClass {
    if 2 * b > gv {
        RegionClass::OverlappingBalls
    } else if (barrier as f64) < support_interval(n, b).0 {
        RegionClass::Convergent
    } else {
        RegionClass::CutOff
    }
}

/// Region classification over a `(k, b)` grid at fixed `n`, computing the
/// GV distance and barrier once per `k`.
pub fn region_map(n: usize, ks: &[usize], bs: &[usize], epsilon: f64) -> Result<Vec<(usize, usize, RegionClass)>> {
    let mut out = Vec::with_capacity(ks.len() * bs.len());
    for &k in ks {
        if k == 0 || k >= n {
            return Err(Error::Domain(format!("grid k = {k} outside [1, {n})")));
        }
        let gv = gv_distance(n, k);
        let barrier = barrier_weight(&BarrierParams::new(n, model_step_weight(k), epsilon)?)?;
        for &b in bs {
            if b > n {
                return Err(Error::Domain(format!("grid b = {b} exceeds n = {n}")));
            }
            out.push((k, b, classify_with(gv, barrier, n, b)));
        }
    }
    Ok(out)
}

fn check_pair(p: &WeightHistogram, q: &WeightHistogram) -> Result<()> {
    p.check_same_n(q)?;
    for h in [p, q] {
        if !h.normalized {
            return Err(Error::Domain("histogram is not normalized".into()));
        }
    }
    Ok(())
}

/// Bhattacharyya coefficient `Σ_h √p(h) √q(h)`, which equals the overlap of
/// the corresponding states when amplitudes are uniform within each weight.
pub fn fidelity(p: &WeightHistogram, q: &WeightHistogram) -> Result<f64> {
    check_pair(p, q)?;
    let f: f64 = p
        .entries
        .iter()
        .zip(&q.entries)
        .map(|(a, b)| (a * b).sqrt())
        .sum();
    Ok(f.min(1.0))
}

/// `½ Σ |p - q|`.
pub fn total_variation(p: &WeightHistogram, q: &WeightHistogram) -> Result<f64> {
    check_pair(p, q)?;
    Ok(0.5 * p.entries.iter().zip(&q.entries).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// Enumerates the dual code of a small code and returns its codewords.
pub fn enumerate_dual(pair: &CodePair) -> Result<Vec<crate::bits::BitVector>> {
    enumerate_span(pair.dual(), MAX_ENUMERATION_DIM)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::random_code;

    #[test]
    fn ideal_is_normalized() {
        let p = ideal_weight_distribution(200, 40, 7).unwrap();
        assert!((p.total() - 1.0).abs() < 1e-12);
        assert!(p.entries().iter().all(|&e| e >= 0.0));
    }

    #[test]
    fn ideal_n4_b1_by_hand() {
        // K_1^3(x) = 3 - 2x at x = h - 1: 5, 3, 1, -1, -3
        let w: Vec<f64> = [(1.0, 5.0), (4.0, 3.0), (6.0, 1.0), (4.0, -1.0), (1.0, -3.0)]
            .iter()
            .map(|(c, k): &(f64, f64)| c * k * k)
            .collect();
        let total: f64 = w.iter().sum();
        let p = ideal_weight_distribution(4, 1, 1).unwrap();
        for h in 0..=4 {
            assert!((p.get(h) - w[h] / total).abs() < 1e-14);
        }
    }

    #[test]
    fn ideal_mass_concentrates_near_support_interval() {
        // The tail beyond the outermost zeros decays over tens of weights:
        // about 2e-2 lies more than 5 outside, about 4e-6 more than 30.
        let p = ideal_weight_distribution(1000, 100, 20).unwrap();
        let (lo, hi) = support_interval(1000, 20);
        assert!(p.mass_outside(lo - 5.0, hi + 5.0) > 1e-2);
        assert!(p.mass_outside(lo - 40.0, hi + 40.0) < 1e-6);
    }

    #[test]
    fn full_dimension_code_has_point_mass() {
        let b = crate::code::GeneratorMatrix::new(
            (0..5).map(|i| crate::bits::BitVector::unit(5, i)).collect(),
            5,
        )
        .unwrap();
        let pair = CodePair::from_generator(&b).unwrap();
        let p = ideal_distribution_exact(&pair, 2).unwrap();
        assert_eq!(p.get(0), 1.0);
    }

    #[test]
    fn exact_distribution_matches_brute_force() {
        let pair = random_code(20, 12, 11).unwrap();
        let table = kraw_table(20, 2).unwrap();
        // Brute force over all 2^8 dual codewords, with f64 weights.
        let mut w = vec![0.0f64; 21];
        for d in enumerate_dual(&pair).unwrap() {
            let k = table.value(d.weight()).to_f64();
            w[d.weight()] += k * k;
        }
        let total: f64 = w.iter().sum();
        let p = ideal_distribution_exact(&pair, 2).unwrap();
        for h in 0..=20 {
            assert!((p.get(h) - w[h] / total).abs() < 1e-12);
        }
    }

    #[test]
    fn exact_and_binomial_agree_for_random_codes() {
        for seed in 0..3 {
            let pair = random_code(24, 6, seed).unwrap();
            let exact = ideal_distribution_exact(&pair, 2).unwrap();
            let approx = ideal_weight_distribution(24, 6, 2).unwrap();
            assert!(total_variation(&exact, &approx).unwrap() < 0.05, "seed {seed}");
        }
    }

    #[test]
    fn enumeration_budget() {
        let pair = random_code(40, 10, 1).unwrap();
        assert!(matches!(ideal_distribution_exact(&pair, 1), Err(Error::TooLarge(_))));
    }

    #[test]
    fn p_down_edges() {
        let n = 50;
        let one = BarrierParams::new(n, 1, 1e-6).unwrap();
        for h in 0..=n {
            assert!((p_down(&one, h).unwrap() - h as f64 / n as f64).abs() < 1e-15);
        }
        for f in 1..=n {
            let p = BarrierParams::new(n, f, 1e-6).unwrap();
            assert_eq!(p_down(&p, n).unwrap(), 1.0);
            assert_eq!(p_down(&p, 0).unwrap(), 0.0);
        }
        assert!(p_down(&one, n + 1).is_err());
    }

    #[test]
    fn barrier_params_validation() {
        assert!(BarrierParams::new(10, 0, 0.1).is_err());
        assert!(BarrierParams::new(10, 11, 0.1).is_err());
        assert!(BarrierParams::new(10, 3, 1.5).is_err());
        assert!(BarrierParams::new(10, 3, 0.0).is_err());
    }

    #[test]
    fn barrier_for_single_flips() {
        for n in [9, 10, 101, 1000] {
            let p = BarrierParams::new(n, 1, 0.5).unwrap();
            assert_eq!(barrier_weight(&p).unwrap(), n.div_ceil(2));
        }
    }

    #[test]
    fn barrier_above_support_edge_in_cutoff_case() {
        let p = BarrierParams::new(1000, 150, 1e-6).unwrap();
        let h = barrier_weight(&p).unwrap();
        assert!(h as f64 > support_interval(1000, 60).0);
    }

    #[test]
    fn region_examples() {
        assert_eq!(classify_region(1000, 100, 20, 1e-6).unwrap(), RegionClass::Convergent);
        assert_eq!(classify_region(1000, 300, 60, 1e-6).unwrap(), RegionClass::CutOff);
        assert_eq!(classify_region(1000, 100, 200, 1e-6).unwrap(), RegionClass::OverlappingBalls);
    }

    #[test]
    fn fidelity_edges() {
        let p = ideal_weight_distribution(30, 5, 2).unwrap();
        assert!((fidelity(&p, &p).unwrap() - 1.0).abs() < 1e-12);
        let a = WeightHistogram::from_probabilities(vec![0.5, 0.5, 0.0, 0.0]).unwrap();
        let b = WeightHistogram::from_probabilities(vec![0.0, 0.0, 0.3, 0.7]).unwrap();
        assert_eq!(fidelity(&a, &b).unwrap(), 0.0);
        let c = WeightHistogram::from_probabilities(vec![1.0, 0.0]).unwrap();
        assert!(matches!(fidelity(&a, &c), Err(Error::LengthMismatch { .. })));
        assert!(fidelity(&a, &WeightHistogram::from_counts(&[1, 2, 3, 4])).is_err());
    }

    #[test]
    fn window_renormalizes() {
        let h = WeightHistogram::from_counts(&[1, 2, 3, 4, 10]);
        let w = h.window(1, 3).unwrap();
        assert_eq!(w.entries(), &[0.0, 2.0 / 9.0, 3.0 / 9.0, 4.0 / 9.0, 0.0]);
    }

    #[test]
    fn csv_formats() {
        let h = WeightHistogram::from_counts(&[3, 0, 5]);
        assert_eq!(h.to_csv("count"), "h,count\n0,3\n1,0\n2,5\n");
    }
}
