//! Random code, systematic form, dual code and the right inverse.
//!
//! `cargo run --example code_basics -- [n] [k] [seed]`

use codeball::code::{encode, gv_distance, random_code, right_inverse, CodePair};
use codeball::rng::seeded;
use codeball::BitVector;

fn main() -> codeball::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let n = *args.first().unwrap_or(&12) as usize;
    let k = *args.get(1).unwrap_or(&4) as usize;
    let seed = *args.get(2).unwrap_or(&1);

    let pair = random_code(n, k, seed)?;
    println!("code ({n}, {k}), checksum {}", pair.checksum());
    println!("information set {:?}", pair.primal().info_set());
    println!("generator:\n{}", pair.to_text());
    println!("dual generator ({} rows):", pair.k_perp());
    for r in pair.dual().rows() {
        println!("  {r}");
    }

    let m = right_inverse(pair.dual())?;
    let mut rng = seeded(seed);
    let u = BitVector::random(pair.k_perp(), &mut rng);
    let d = encode(&u, pair.dual())?;
    println!("u = {u} encodes to d = {d}, recovered u = {}", m.left_mul(&d)?);
    println!("GV distance estimate {}", gv_distance(n, k));

    let back = CodePair::from_text(&pair.to_text())?;
    println!("text round trip preserves code: {}", back == pair);
    Ok(())
}
