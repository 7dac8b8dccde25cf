//! Statevector check of the state-preparation pipeline on a small code.
//!
//! `cargo run --release --example state_pipeline -- [n] [k] [b] [mcmc_steps]`

use codeball::code::random_code;
use codeball::oracle::{build_psi_b, build_psi_tilde, simulate_pipeline, state_fidelity, walsh_hadamard, MarginalSource};

fn main() -> codeball::Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).map(|a| a.parse().expect("integer argument")).collect();
    let n = *args.first().unwrap_or(&12) as usize;
    let k = *args.get(1).unwrap_or(&3) as usize;
    let b = *args.get(2).unwrap_or(&1) as usize;
    let steps = *args.get(3).unwrap_or(&200_000);

    let pair = random_code(n, k, 1)?;
    let psi = build_psi_b(&pair, b)?;
    let tilde = build_psi_tilde(&pair, b)?;
    println!("fidelity(H psi_b, psi_tilde) = {:.12}", state_fidelity(&walsh_hadamard(&psi), &tilde)?);

    let exact = simulate_pipeline(&pair, b, MarginalSource::Exact)?;
    println!("exact marginals: fidelity to psi_b = {:.12}", state_fidelity(&exact, &psi)?);
    let mcmc = simulate_pipeline(
        &pair,
        b,
        MarginalSource::Mcmc {
            steps,
            burn_in: 1_000,
            seed: 1,
        },
    )?;
    println!("MCMC marginals ({steps} steps per node): fidelity = {:.6}", state_fidelity(&mcmc, &psi)?);
    Ok(())
}
