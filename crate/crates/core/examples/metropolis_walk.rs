//! Metropolis walk over dual codewords and its fidelity to the ideal
//! weight distribution.
//!
//! `cargo run --release --example metropolis_walk -- [n] [k] [b] [steps] [seed]`

use std::time::Instant;

use codeball::code::random_code;
use codeball::spectrum::{fidelity, ideal_weight_distribution};
use codeball::walk::{run_walk, WalkConfig};

fn main() -> codeball::Result<()> {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse().expect("numeric argument")).collect();
    let arg = |i: usize, d: f64| *args.get(i).unwrap_or(&d);
    let (n, k, b) = (arg(0, 1000.0) as usize, arg(1, 100.0) as usize, arg(2, 20.0) as usize);
    let steps = arg(3, 1e7) as u64;
    let seed = arg(4, 1.0) as u64;

    let pair = random_code(n, k, seed)?;
    let start = Instant::now();
    let r = run_walk(&pair, &WalkConfig::new(b, steps, seed))?;
    let secs = start.elapsed().as_secs_f64();
    let sampled = r.histogram.normalized()?;
    let f = fidelity(&sampled, &ideal_weight_distribution(n, k, b)?)?;
    println!("(n, k, b) = ({n}, {k}, {b}), {steps} steps in {secs:.1} s");
    println!("acceptance rate {:.4}, fidelity {f:.6}", r.acceptance_rate());
    Ok(())
}
