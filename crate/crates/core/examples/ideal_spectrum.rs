//! Ideal dual weight distribution, entropic barrier and region prediction.
//!
//! `cargo run --example ideal_spectrum -- [n] [k] [b]`

use codeball::code::{gv_distance, random_code};
use codeball::krawtchouk::support_interval;
use codeball::spectrum::{
    barrier_weight, classify_region, ideal_distribution_exact, ideal_weight_distribution, model_step_weight,
    total_variation, BarrierParams, DEFAULT_EPSILON,
};

fn main() -> codeball::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let n = *args.first().unwrap_or(&1000);
    let k = *args.get(1).unwrap_or(&300);
    let b = *args.get(2).unwrap_or(&60);

    let ideal = ideal_weight_distribution(n, k, b)?;
    let (lo, hi) = support_interval(n, b);
    let barrier = barrier_weight(&BarrierParams::new(n, model_step_weight(k), DEFAULT_EPSILON)?)?;
    println!("(n, k, b) = ({n}, {k}, {b})");
    println!("support [{lo:.1}, {hi:.1}], mass outside {:.3e}", ideal.mass_outside(lo, hi));
    println!("barrier {barrier}, ideal mass below it {:.3e}", (0..barrier).map(|h| ideal.get(h)).sum::<f64>());
    println!("GV distance {}, region {}", gv_distance(n, k), classify_region(n, k, b, DEFAULT_EPSILON)?);

    // A small code where the dual can be enumerated exactly.
    let pair = random_code(24, 6, 1)?;
    let exact = ideal_distribution_exact(&pair, 2)?;
    let binom = ideal_weight_distribution(24, 6, 2)?;
    println!("(24, 6, 2): TV(exact, binomial model) = {:.4}", total_variation(&exact, &binom)?);
    Ok(())
}
