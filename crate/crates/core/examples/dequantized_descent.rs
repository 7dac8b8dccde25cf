//! Overlaps estimated classically from sampled dual codewords, used to
//! drive greedy descent decoding.
//!
//! `cargo run --release --example dequantized_descent -- [samples]`

use codeball::code::{enumerated_min_distance, random_code};
use codeball::decode::{
    ball_overlap, dequantized_overlap, descent_decode, BDDInstance, DequantizedOverlap, DescentConfig, ExactOverlap,
};
use codeball::rng::seeded;
use codeball::walk::{sample_dual_codewords, WalkConfig};

fn main() -> codeball::Result<()> {
    let samples: usize = std::env::args().nth(1).map_or(5_000, |a| a.parse().expect("integer argument"));
    let (n, k, b, delta) = (14, 3, 2, 2);
    let pair = (0..)
        .map(|s| random_code(n, k, s).unwrap())
        .find(|p| enumerated_min_distance(p.primal(), 16).unwrap().unwrap_or(n + 1) > 2 * b + delta)
        .expect("some seed gives a separated code");
    let duals = sample_dual_codewords(&pair, &WalkConfig::new(b, 0, 1), samples, 20)?;

    let mut rng = seeded(3);
    let (inst, _) = BDDInstance::random(&pair, delta, &mut rng)?;
    let (mean, se) = dequantized_overlap(&inst, &duals)?;
    println!("overlap at delta = {delta}: sampled {mean:.4} ± {se:.4}, ideal {:.4}", ball_overlap(n, b, delta)?);

    let config = DescentConfig {
        tolerance: 0.05,
        slack: 0.02,
        max_sideways: 2,
    };
    let mut exact = ExactOverlap::new(&pair, b)?;
    let mut sampled = DequantizedOverlap::new(duals)?;
    let (mut ok_exact, mut ok_sampled) = (0, 0);
    for _ in 0..200 {
        let (inst, planted) = BDDInstance::random(&pair, delta, &mut rng)?;
        ok_exact += (descent_decode(&inst, &mut exact, &mut rng, &DescentConfig::default()).ok() == Some(planted.clone())) as usize;
        ok_sampled += (descent_decode(&inst, &mut sampled, &mut rng, &config).ok() == Some(planted)) as usize;
    }
    println!("descent successes out of 200: exact {ok_exact}, dequantized ({samples} samples) {ok_sampled}");
    Ok(())
}
