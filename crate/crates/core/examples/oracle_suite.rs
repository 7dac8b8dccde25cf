//! The randomized oracle suite behind `codeball oracle-verify`, optionally
//! with one corrupted Krawtchouk sign.
//!
//! `cargo run --release --example oracle_suite -- [cases] [fault]`

use codeball::experiments::commands::oracle_checks;
use codeball::experiments::{Command, ExperimentConfig};

fn main() -> codeball::Result<()> {
    let mut args = std::env::args().skip(1);
    let mut config = ExperimentConfig::new(Command::OracleVerify);
    config.trials = args.next().map_or(100, |a| a.parse().expect("integer argument"));
    config.inject_fault = args.next().is_some_and(|a| a == "fault");
    for c in oracle_checks(&config)? {
        let status = if c.failures == 0 { "ok" } else { "FAILED" };
        println!("{:<42} {:>4} cases, max error {:.2e}  {status}", c.name, c.cases, c.max_error);
    }
    Ok(())
}
