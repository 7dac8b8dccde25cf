//! Information set decoding on random instances against its predicted
//! per-trial success probability.
//!
//! `cargo run --release --example isd_decoding -- [n] [k] [delta] [instances]`

use codeball::code::random_code;
use codeball::decode::{
    gf2_invertible_fraction, gf2_invertible_probability, isd_decode, isd_success_prob, BDDInstance,
};
use codeball::rng::seeded;

fn main() -> codeball::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let n = *args.first().unwrap_or(&60);
    let k = *args.get(1).unwrap_or(&20);
    let delta = *args.get(2).unwrap_or(&3);
    let instances = *args.get(3).unwrap_or(&2000);

    let pair = random_code(n, k, 1)?;
    let mut rng = seeded(2);
    let mut trials = 0;
    for _ in 0..instances {
        let (inst, _) = BDDInstance::random(&pair, delta, &mut rng)?;
        let (c, t) = isd_decode(&inst, &mut rng, 1_000_000)?;
        assert!(c.xor_weight(&inst.v) <= delta);
        trials += t;
    }
    let p = isd_success_prob(n, k, delta, false)?;
    println!("mean trials {:.2}, predicted {:.2}", trials as f64 / instances as f64, 1.0 / p);
    println!(
        "invertible 50x50 fraction {:.4} (exact {:.4})",
        gf2_invertible_fraction(50, 20_000, &mut rng),
        gf2_invertible_probability(50)
    );
    Ok(())
}
