//! Krawtchouk values, the ball-sum identity and the sign structure of the
//! Fourier transform of a Hamming ball.
//!
//! `cargo run --example krawtchouk_tables -- [n] [b]`

use codeball::krawtchouk::{kraw, kraw_all_degrees, kraw_table, support_interval, vol};

fn main() -> codeball::Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let n = *args.first().unwrap_or(&1000);
    let b = *args.get(1).unwrap_or(&60);

    println!("K_2^4(2) = {}", kraw(2, 4, 2)?);
    let x = 3;
    let sum: num_bigint::BigInt = (0..=5).map(|j| kraw(j, 12, x).unwrap()).sum();
    println!("sum_(j<=5) K_j^12(3) = {sum} = K_5^11(2) = {}", kraw_all_degrees(5, 11, x - 1)[5]);

    let t = kraw_table(n, b)?;
    println!("table (n = {n}, b = {b}): head equals Vol = {}", t.exact(0) == &num_bigint::BigInt::from(vol(n, b)?));
    println!("sign changes {}, exact zeros at {:?}", t.sign_changes(), t.zero_weights());
    let (lo, hi) = support_interval(n, b);
    println!("zeros lie in [{lo:.1}, {hi:.1}]");
    for h in (0..=n).step_by((n / 10).max(1)) {
        let v = t.value(h);
        println!("  h = {h:4}: sign {:+}, ln|K| = {:.3}", v.sign(), v.log_mag());
    }
    Ok(())
}
