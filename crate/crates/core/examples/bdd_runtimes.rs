//! Runtime models for bounded distance decoding: brute force, Hadamard-test
//! overlap estimation and information set decoding.
//!
//! `cargo run --release --example bdd_runtimes -- [n] [k] [b] [steps]`

use codeball::code::random_code;
use codeball::decode::ball_overlap_profile;
use codeball::experiments::commands::runtime_rows;
use codeball::walk::{run_walk, WalkConfig};

fn main() -> codeball::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse().expect("numeric argument")).collect();
    let arg = |i: usize, d: f64| *args.get(i).unwrap_or(&d);
    let (n, k, b) = (arg(0, 1000.0) as usize, arg(1, 100.0) as usize, arg(2, 20.0) as usize);
    let steps = arg(3, 1e7) as u64;

    let profile = ball_overlap_profile(n, b)?;
    println!("overlap profile, first values: {:?}", &profile.values[..6.min(profile.values.len())]);

    let pair = random_code(n, k, 1)?;
    let hist = run_walk(&pair, &WalkConfig::new(b, steps, 1))?.histogram.normalized()?;
    println!("{:>5} {:>12} {:>12} {:>12} {:>8}", "delta", "brute", "hadamard", "sampled", "isd");
    for r in runtime_rows(n, k, b, &[hist])? {
        println!(
            "{:>5} {:>12.2} {:>12.2} {:>12.2} {:>8.2}",
            r.delta, r.log10_bruteforce, r.log10_hadamard_ideal, r.log10_hadamard_sampled[0], r.log10_isd
        );
    }
    Ok(())
}
