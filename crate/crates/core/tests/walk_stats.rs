use codeball::code::{encode, random_code, CodePair};
use codeball::krawtchouk::kraw_table;
use codeball::spectrum::{ideal_distribution_exact, total_variation, WeightHistogram};
use codeball::walk::{conditional_marginal, run_walk, sample_dual_codewords, WalkConfig, Walker};
use codeball::BitVector;

/// `f(u) = K_b^{n-1}(|u B⊥| - 1)²` for every `u`, as `f64`.
fn target_weights(pair: &CodePair, b: usize) -> Vec<f64> {
    let t = kraw_table(pair.n(), b).unwrap();
    (0..1u64 << pair.k_perp())
        .map(|u| {
            let d = encode(&BitVector::from_index(pair.k_perp(), u), pair.dual()).unwrap();
            t.value(d.weight()).square().to_f64()
        })
        .collect()
}

/// `P(u_m = 1 | u_<m = prefix)` by summing `f` over all completions.
fn exact_conditional(pair: &CodePair, b: usize, prefix: &[bool]) -> f64 {
    let f = target_weights(pair, b);
    let m = prefix.len();
    let (mut one, mut all) = (0.0, 0.0);
    for (u, w) in f.iter().enumerate() {
        if prefix.iter().enumerate().all(|(i, &p)| ((u >> i) & 1 == 1) == p) {
            all += w;
            if (u >> m) & 1 == 1 {
                one += w;
            }
        }
    }
    one / all
}

fn mean_and_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn small_code_matches_exact_enumeration() {
    let pair = random_code(16, 4, 1).unwrap();
    let exact = ideal_distribution_exact(&pair, 2).unwrap();
    let r = run_walk(&pair, &WalkConfig::new(2, 10_000_000, 7)).unwrap();
    let tv = total_variation(&r.histogram.normalized().unwrap(), &exact).unwrap();
    assert!(tv <= 0.02, "TV {tv}");
}

#[test]
fn conditional_marginals_match_enumeration() {
    let pair = random_code(14, 4, 5).unwrap();
    assert_eq!(pair.k_perp(), 10);
    for prefix in [vec![], vec![true], vec![false, true, true], vec![true, false, false, true, false]] {
        let exact = exact_conditional(&pair, 2, &prefix);
        let runs: Vec<f64> = (0..10)
            .map(|s| conditional_marginal(&pair, 2, &prefix, 200_000, 2_000, 100 + s).unwrap())
            .collect();
        let (mean, se) = mean_and_stderr(&runs);
        assert!((mean - exact).abs() <= 3.0 * se, "prefix {prefix:?}: {mean} ± {se} vs {exact}");
    }
}

#[test]
fn last_free_bit_is_a_two_point_ratio() {
    let pair = random_code(12, 4, 2).unwrap();
    let kp = pair.k_perp();
    let prefix: Vec<bool> = (0..kp - 1).map(|i| i % 3 == 0).collect();
    let f = target_weights(&pair, 1);
    let base: usize = prefix.iter().enumerate().map(|(i, &p)| (p as usize) << i).sum();
    let (f0, f1) = (f[base], f[base | 1 << (kp - 1)]);
    let exact = f1 / (f0 + f1);
    let q = conditional_marginal(&pair, 1, &prefix, 2_000_000, 1_000, 3).unwrap();
    assert!((q - exact).abs() < 0.01, "{q} vs {exact}");
}

#[test]
fn radius_zero_marginal_is_one_half() {
    let pair = random_code(20, 8, 4).unwrap();
    let q = conditional_marginal(&pair, 0, &[true, false], 1_000_000, 1_000, 5).unwrap();
    assert!((q - 0.5).abs() < 0.01, "{q}");
}

#[test]
fn codeword_frequencies_follow_the_target() {
    let pair = random_code(12, 4, 8).unwrap();
    let kp = pair.k_perp();
    let f = target_weights(&pair, 2);
    let total: f64 = f.iter().sum();
    let samples = sample_dual_codewords(&pair, &WalkConfig::new(2, 0, 11), 400_000, 4).unwrap();
    let mut counts = vec![0u64; 1 << kp];
    let m = codeball::code::right_inverse(pair.dual()).unwrap();
    for d in &samples {
        counts[m.left_mul(d).unwrap().to_index() as usize] += 1;
    }
    let tv: f64 = 0.5
        * counts
            .iter()
            .zip(&f)
            .map(|(&c, &w)| (c as f64 / samples.len() as f64 - w / total).abs())
            .sum::<f64>();
    assert!(tv < 0.03, "TV over codewords {tv}");
    for (u, &c) in counts.iter().enumerate() {
        if f[u] == 0.0 {
            assert_eq!(c, 0, "zero-target codeword {u} was visited");
        }
    }
}

#[test]
fn samples_lie_in_the_dual_code() {
    let pair = random_code(60, 20, 3).unwrap();
    let samples = sample_dual_codewords(&pair, &WalkConfig::new(4, 0, 1), 2_000, 3).unwrap();
    for d in &samples {
        assert!(pair.primal().rows().iter().all(|r| !r.dot(d)));
    }
}

#[test]
fn samples_replay_the_walk_histogram() {
    let pair = random_code(60, 20, 3).unwrap();
    let cfg = WalkConfig::new(4, 51_000, 21).with_burn_in(1_000);
    let samples = sample_dual_codewords(&pair, &cfg, 50_000, 1).unwrap();
    let mut hist = WeightHistogram::zeros(60);
    for d in &samples {
        hist.add_count(d.weight(), 1.0);
    }
    assert_eq!(hist, run_walk(&pair, &cfg).unwrap().histogram);
}

#[test]
fn initial_weight_is_central() {
    let pair = random_code(1000, 100, 1).unwrap();
    let weights: Vec<f64> = (0..40)
        .map(|s| Walker::new(&pair, &WalkConfig::new(20, 2, s)).unwrap().state().weight() as f64)
        .collect();
    assert!(weights.iter().all(|&w| (360.0..=640.0).contains(&w)));
    let (mean, _) = mean_and_stderr(&weights);
    assert!((mean - 500.0).abs() < 10.0, "{mean}");
}

#[test]
fn different_seeds_give_different_chains() {
    let pair = random_code(40, 10, 3).unwrap();
    let a = run_walk(&pair, &WalkConfig::new(3, 20_000, 1).with_burn_in(100)).unwrap();
    let b = run_walk(&pair, &WalkConfig::new(3, 20_000, 2).with_burn_in(100)).unwrap();
    assert_ne!(a.histogram, b.histogram);
    let c = run_walk(&pair, &WalkConfig::new(3, 20_000, 1).with_burn_in(100)).unwrap();
    assert_eq!(a.histogram, c.histogram);
    assert_eq!(a.accepted, c.accepted);
}
