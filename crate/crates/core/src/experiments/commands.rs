//! One function per CLI command. Each writes its data files through an
//! [`OutputDir`] and returns the JSON summary it also saved.

use std::fmt::Write as _;
use std::fs;
use std::time::Instant;

use num_bigint::BigInt;
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bits::BitVector;
use crate::code::{enumerated_min_distance, gv_distance, random_code, random_code_with, CodePair};
use crate::decode::{
    ball_overlap, dequantized_overlap_exact, log10_brute_force, log10_isd, log10_shots,
    sampled_overlap,
};
use crate::error::{Error, Result};
use crate::krawtchouk::{kraw_table, support_interval, vol};
use crate::oracle::{
    build_psi_b, build_psi_tilde_with_fault, dual_norm_squared, exact_overlap, simulate_pipeline_with_fault,
    state_fidelity, walsh_hadamard, walsh_hadamard_in_place, walsh_hadamard_int, xor_convolve, MarginalSource,
};
use crate::rng::{derive_seed, seeded, PRNG_ID};
use crate::spectrum::{
    barrier_weight, classify_region, fidelity, ideal_distribution_exact, ideal_weight_distribution,
    model_step_weight, region_map, total_variation, BarrierParams, WeightHistogram, MAX_ENUMERATION_DIM,
};
use crate::walk::{run_walk, WalkConfig, WalkResult};

use super::config::{Command, ExperimentConfig};
use super::output::{fmt_f64, Metadata, OutputDir};

/// Dispatches on `config.command`.
pub fn run(config: &ExperimentConfig) -> Result<Value> {
    config.validate()?;
    match config.command {
        Command::Spectrum => cmd_spectrum(config),
        Command::Walk => cmd_walk(config),
        Command::RegionMap => cmd_region_map(config),
        Command::FidelitySweep => cmd_fidelity_sweep(config),
        Command::RuntimeCompare => cmd_runtime_compare(config),
        Command::OracleVerify => cmd_oracle_verify(config),
    }
}

/// The configured code file, or `random_code(n, k, seed)`.
pub fn load_code(config: &ExperimentConfig) -> Result<CodePair> {
    match &config.code {
        Some(path) => CodePair::from_text(&fs::read_to_string(path)?),
        None => random_code(config.n, config.k, config.seed),
    }
}

fn metadata(config: &ExperimentConfig, n: usize, k: usize, b: usize, checksums: Vec<String>) -> Metadata {
    Metadata {
        command: config.command.name().to_string(),
        n,
        k,
        b,
        steps: config.steps,
        burn_in: config.burn_in,
        seed: config.seed,
        prng: PRNG_ID.to_string(),
        code_checksums: checksums,
    }
}

/// Walk seed for trial `t` on a code drawn from `code_seed`.
pub fn walk_seed(code_seed: u64, trial: usize) -> u64 {
    derive_seed(code_seed, 1 + trial as u64)
}

/// Code seed for sweep point `(b, trial)`.
pub fn sweep_code_seed(seed: u64, b: usize, trial: usize) -> u64 {
    derive_seed(seed, ((b as u64) << 20) | trial as u64)
}

#[derive(Serialize)]
struct WalkSidecar<'a> {
    metadata: &'a Metadata,
    walk_seed: u64,
    recorded: u64,
    accepted: u64,
    proposed: u64,
    acceptance_rate: f64,
    first_bit_ones: u64,
    runtime_seconds: f64,
}

fn write_walk(out: &mut OutputDir, stem: &str, meta: &Metadata, r: &WalkResult, seconds: f64) -> Result<()> {
    out.write_csv(&format!("{stem}.csv"), meta, &r.histogram.to_csv("count"))?;
    out.write_json(
        &format!("{stem}.json"),
        &WalkSidecar {
            metadata: meta,
            walk_seed: r.seed,
            recorded: r.recorded,
            accepted: r.accepted,
            proposed: r.proposed,
            acceptance_rate: r.acceptance_rate(),
            first_bit_ones: r.first_bit_ones,
            runtime_seconds: seconds,
        },
    )?;
    Ok(())
}

fn timed_walk(pair: &CodePair, cfg: &WalkConfig) -> Result<(WalkResult, f64)> {
    let t = Instant::now();
    let r = run_walk(pair, cfg)?;
    Ok((r, t.elapsed().as_secs_f64()))
}

/// Ideal vs sampled weight distributions, their fidelity, the barrier
/// analysis and the renormalized central window.
pub fn cmd_spectrum(config: &ExperimentConfig) -> Result<Value> {
    let start = Instant::now();
    let pair = load_code(config)?;
    let (n, k, b) = (pair.n(), pair.k(), config.b);
    let meta = metadata(config, n, k, b, vec![pair.checksum()]);
    let mut out = OutputDir::create(&config.output_dir)?;

    let ideal = ideal_weight_distribution(n, k, b)?;
    out.write_csv("ideal.csv", &meta, &ideal.to_csv("value"))?;
    let exact = if pair.k_perp() <= MAX_ENUMERATION_DIM {
        let e = ideal_distribution_exact(&pair, b)?;
        out.write_csv("ideal_exact.csv", &meta, &e.to_csv("value"))?;
        Some(e)
    } else {
        None
    };

    let runs: Vec<(WalkResult, f64)> = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let cfg = WalkConfig::new(b, config.steps, walk_seed(config.seed, t)).with_burn_in(config.burn_in);
            timed_walk(&pair, &cfg)
        })
        .collect::<Result<_>>()?;
    let mut merged = WeightHistogram::zeros(n);
    let mut trial_fidelities = Vec::new();
    for (t, (r, secs)) in runs.iter().enumerate() {
        write_walk(&mut out, &format!("walk_trial_{}", t + 1), &meta, r, *secs)?;
        trial_fidelities.push(fidelity(&r.histogram.normalized()?, &ideal)?);
        merged = merged.merge(&r.histogram)?;
    }
    let sampled = merged.normalized()?;
    out.write_csv("sampled.csv", &meta, &sampled.to_csv("value"))?;

    let (lo, hi) = config.window_for(n);
    let windows = ideal.window(lo, hi).and_then(|i| Ok((i, sampled.window(lo, hi)?)));
    let window_tv = match &windows {
        Ok((ideal_w, sampled_w)) => {
            let mut body = String::from("h,ideal,sampled\n");
            for h in lo..=hi {
                let _ = writeln!(body, "{h},{},{}", fmt_f64(ideal_w.get(h)), fmt_f64(sampled_w.get(h)));
            }
            out.write_csv("window.csv", &meta, &body)?;
            Some(total_variation(sampled_w, ideal_w)?)
        }
        // No sampled mass in the window: nothing to compare.
        Err(_) => None,
    };

    let barrier = barrier_weight(&BarrierParams::new(n, model_step_weight(k), config.epsilon)?)?;
    let support = support_interval(n, b);
    let summary = json!({
        "metadata": meta,
        "fidelity": fidelity(&sampled, &ideal)?,
        "trial_fidelities": trial_fidelities,
        "window": [lo, hi],
        "window_total_variation": window_tv,
        "barrier_weight": barrier,
        "barrier_interval": [barrier, n - barrier.min(n)],
        "sampled_mass_outside_barrier": sampled.mass_outside(barrier as f64, (n - barrier.min(n)) as f64),
        "support_interval": [support.0, support.1],
        "region": classify_region(n, k, b, config.epsilon)?.to_string(),
        "exact_total_variation": exact.as_ref().map(|e| total_variation(&sampled, e)).transpose()?,
        "exact_fidelity": exact.as_ref().map(|e| fidelity(&sampled, e)).transpose()?,
        "runtime_seconds": start.elapsed().as_secs_f64(),
    });
    out.write_json("spectrum.json", &summary)?;
    out.commit();
    Ok(summary)
}

/// A single walk: histogram CSV plus sidecar.
pub fn cmd_walk(config: &ExperimentConfig) -> Result<Value> {
    let pair = load_code(config)?;
    let meta = metadata(config, pair.n(), pair.k(), config.b, vec![pair.checksum()]);
    let mut out = OutputDir::create(&config.output_dir)?;
    let cfg = WalkConfig::new(config.b, config.steps, walk_seed(config.seed, 0)).with_burn_in(config.burn_in);
    let (r, secs) = timed_walk(&pair, &cfg)?;
    write_walk(&mut out, "walk", &meta, &r, secs)?;
    let summary = json!({
        "metadata": meta,
        "acceptance_rate": r.acceptance_rate(),
        "fidelity": fidelity(&r.histogram.normalized()?, &ideal_weight_distribution(pair.n(), pair.k(), config.b)?)?,
        "runtime_seconds": secs,
    });
    out.commit();
    Ok(summary)
}

/// Grid `k, b = 0, s, 2s, …` for the region map; `k` stays in `[1, n)`.
pub fn region_grid(n: usize, step: usize) -> (Vec<usize>, Vec<usize>) {
    let ks = (step..n).step_by(step).collect();
    let bs = (0..=n / 2).step_by(step).collect();
    (ks, bs)
}

/// Region classification over the `(k, b)` grid.
pub fn cmd_region_map(config: &ExperimentConfig) -> Result<Value> {
    let start = Instant::now();
    let n = config.n;
    let (ks, bs) = region_grid(n, config.grid_step);
    let map = region_map(n, &ks, &bs, config.epsilon)?;
    let meta = metadata(config, n, 0, 0, vec![]);
    let mut out = OutputDir::create(&config.output_dir)?;
    let mut body = String::from("k,b,class\n");
    for (k, b, c) in &map {
        let _ = writeln!(body, "{k},{b},{c}");
    }
    out.write_csv("region_map.csv", &meta, &body)?;
    let count = |name: &str| map.iter().filter(|(_, _, c)| c.to_string() == name).count();
    let summary = json!({
        "metadata": meta,
        "epsilon": config.epsilon,
        "grid_step": config.grid_step,
        "points": map.len(),
        "convergent": count("convergent"),
        "cutoff": count("cutoff"),
        "overlapping": count("overlapping"),
        "runtime_seconds": start.elapsed().as_secs_f64(),
    });
    out.write_json("region_map.json", &summary)?;
    out.commit();
    Ok(summary)
}

/// One row of the fidelity sweep.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub b: usize,
    pub k: usize,
    pub trial: usize,
    pub fidelity: f64,
    pub acceptance_rate: f64,
    pub code_checksum: String,
    pub region: String,
}

/// Runs every `(b, trial)` walk of the sweep; rows come back in
/// `(b, trial)` order regardless of scheduling.
pub fn fidelity_sweep_rows(config: &ExperimentConfig) -> Result<Vec<SweepRow>> {
    let n = config.n;
    let jobs: Vec<(usize, usize)> = config
        .b_values
        .iter()
        .flat_map(|&b| (0..config.trials).map(move |t| (b, t)))
        .collect();
    jobs.into_par_iter()
        .map(|(b, t)| {
            let k = config.k_per_b * b;
            let code_seed = sweep_code_seed(config.seed, b, t);
            let pair = random_code(n, k, code_seed)?;
            let cfg = WalkConfig::new(b, config.steps, walk_seed(code_seed, 0)).with_burn_in(config.burn_in);
            let r = run_walk(&pair, &cfg)?;
            Ok(SweepRow {
                b,
                k,
                trial: t + 1,
                fidelity: fidelity(&r.histogram.normalized()?, &ideal_weight_distribution(n, k, b)?)?,
                acceptance_rate: r.acceptance_rate(),
                code_checksum: pair.checksum(),
                region: classify_region(n, k, b, config.epsilon)?.to_string(),
            })
        })
        .collect()
}

/// Fidelity per `(b, trial)` along the line `k = k_per_b · b`.
pub fn cmd_fidelity_sweep(config: &ExperimentConfig) -> Result<Value> {
    let start = Instant::now();
    let rows = fidelity_sweep_rows(config)?;
    let meta = metadata(
        config,
        config.n,
        0,
        0,
        rows.iter().map(|r| r.code_checksum.clone()).collect(),
    );
    let mut out = OutputDir::create(&config.output_dir)?;
    let mut body = String::from("b,k,trial,fidelity,acceptance_rate,region,code_checksum\n");
    for r in &rows {
        let _ = writeln!(
            body,
            "{},{},{},{},{},{},{}",
            r.b,
            r.k,
            r.trial,
            fmt_f64(r.fidelity),
            fmt_f64(r.acceptance_rate),
            r.region,
            r.code_checksum
        );
    }
    out.write_csv("fidelity_sweep.csv", &meta, &body)?;
    let summary = json!({
        "metadata": meta,
        "k_per_b": config.k_per_b,
        "trials": config.trials,
        "rows": rows,
        "runtime_seconds": start.elapsed().as_secs_f64(),
    });
    out.write_json("fidelity_sweep.json", &summary)?;
    out.commit();
    Ok(summary)
}

/// One line of the runtime comparison, all in `log10` algorithm steps.
#[derive(Clone, Debug, Serialize)]
pub struct RuntimeRow {
    pub delta: usize,
    pub log10_bruteforce: f64,
    pub log10_hadamard_ideal: f64,
    pub log10_hadamard_sampled: Vec<f64>,
    pub log10_isd: f64,
}

/// Runtime curves for `δ = 1..=2b` from the given sampled histograms.
pub fn runtime_rows(n: usize, k: usize, b: usize, histograms: &[WeightHistogram]) -> Result<Vec<RuntimeRow>> {
    (1..=(2 * b).min(n))
        .map(|delta| {
            let sampled = histograms
                .iter()
                .map(|h| sampled_overlap(h, delta).map(log10_shots))
                .collect::<Result<_>>()?;
            let isd = if delta <= n - k {
                log10_isd(n, k, delta)?
            } else {
                f64::INFINITY
            };
            Ok(RuntimeRow {
                delta,
                log10_bruteforce: log10_brute_force(n, delta)?,
                log10_hadamard_ideal: log10_shots(ball_overlap(n, b, delta)?),
                log10_hadamard_sampled: sampled,
                log10_isd: isd,
            })
        })
        .collect()
}

/// Brute force vs Hadamard-test (ideal and per-trial sampled) vs ISD.
pub fn cmd_runtime_compare(config: &ExperimentConfig) -> Result<Value> {
    let start = Instant::now();
    let (n, k, b) = (config.n, config.k, config.b);
    let walks: Vec<(WeightHistogram, String)> = (0..config.trials)
        .into_par_iter()
        .map(|t| {
            let code_seed = sweep_code_seed(config.seed, b, t);
            let pair = random_code(n, k, code_seed)?;
            let cfg = WalkConfig::new(b, config.steps, walk_seed(code_seed, 0)).with_burn_in(config.burn_in);
            Ok((run_walk(&pair, &cfg)?.histogram.normalized()?, pair.checksum()))
        })
        .collect::<Result<_>>()?;
    let hists: Vec<WeightHistogram> = walks.iter().map(|(h, _)| h.clone()).collect();
    let rows = runtime_rows(n, k, b, &hists)?;
    let meta = metadata(config, n, k, b, walks.iter().map(|(_, c)| c.clone()).collect());
    let mut out = OutputDir::create(&config.output_dir)?;
    let mut body = String::from("delta,log10_bruteforce,log10_hadamard_ideal");
    for t in 1..=config.trials {
        let _ = write!(body, ",log10_hadamard_sampled_trial_{t}");
    }
    body += ",log10_isd,log10_bruteforce_grover,log10_isd_grover\n";
    for r in &rows {
        let _ = write!(body, "{},{},{}", r.delta, fmt_f64(r.log10_bruteforce), fmt_f64(r.log10_hadamard_ideal));
        for s in &r.log10_hadamard_sampled {
            let _ = write!(body, ",{}", fmt_f64(*s));
        }
        let _ = writeln!(
            body,
            ",{},{},{}",
            fmt_f64(r.log10_isd),
            fmt_f64(r.log10_bruteforce / 2.0),
            fmt_f64(r.log10_isd / 2.0)
        );
    }
    out.write_csv("runtime_compare.csv", &meta, &body)?;
    let summary = json!({
        "metadata": meta,
        "rows": rows,
        "runtime_seconds": start.elapsed().as_secs_f64(),
    });
    out.write_json("runtime_compare.json", &summary)?;
    out.commit();
    Ok(summary)
}

/// Tally for one oracle property.
#[derive(Clone, Debug, Default, Serialize)]
pub struct CheckTally {
    pub name: String,
    pub cases: usize,
    pub failures: usize,
    pub max_error: f64,
    pub first_failure: Option<String>,
}

impl CheckTally {
    fn new(name: &str) -> Self {
        Self {
            name: name.to_string(),
            ..Default::default()
        }
    }

    fn record(&mut self, error: f64, tolerance: f64, context: impl FnOnce() -> String) {
        self.cases += 1;
        self.max_error = self.max_error.max(error);
        if !(error <= tolerance) {
            self.failures += 1;
            if self.first_failure.is_none() {
                self.first_failure = Some(context());
            }
        }
    }
}

const ORACLE_TOL: f64 = 1e-10;

/// A weight carrying dual codewords with a nonzero table entry, if any.
fn fault_weight(pair: &CodePair, b: usize) -> Result<Option<usize>> {
    let t = kraw_table(pair.n(), b)?;
    Ok(pair
        .dual()
        .rows()
        .iter()
        .map(BitVector::weight)
        .find(|&h| t.value(h).sign() != 0))
}

/// Checks the oracle identities on `config.trials` random small codes.
pub fn oracle_checks(config: &ExperimentConfig) -> Result<Vec<CheckTally>> {
    let mut rng = seeded(config.seed);
    let mut psiperp = CheckTally::new("hadamard_of_psi_b_equals_psi_tilde");
    let mut pipeline = CheckTally::new("pipeline_exact_marginals_equals_psi_b");
    let mut normalizer = CheckTally::new("dual_norm_equals_2^(n-k)_vol");
    let mut overlap = CheckTally::new("exact_overlap_equals_ball_overlap");
    let mut dequant = CheckTally::new("dequantized_exact_equals_exact_overlap");
    let mut conv = CheckTally::new("convolution_theorem");
    let mut gtilde = CheckTally::new("ball_transform_equals_krawtchouk");

    for case in 0..config.trials {
        let n = rng.gen_range(4..=config.max_n);
        let k = rng.gen_range(1..n);
        let pair = random_code_with(n, k, &mut rng)?;
        let gv = gv_distance(n, k);
        let b = rng.gen_range(0..=gv.saturating_sub(1) / 2);
        let d_min = enumerated_min_distance(pair.primal(), 16)?.unwrap_or(n + 1);
        let ctx = || format!("case {case}: n={n} k={k} b={b} code={}", pair.to_text().replace('\n', "/"));
        let fault = if config.inject_fault { fault_weight(&pair, b)? } else { None };

        let psi = build_psi_b(&pair, b)?;
        let tilde = build_psi_tilde_with_fault(&pair, b, fault)?;
        psiperp.record(1.0 - state_fidelity(&walsh_hadamard(&psi), &tilde)?, ORACLE_TOL, ctx);

        let piped = simulate_pipeline_with_fault(&pair, b, MarginalSource::Exact, fault)?;
        let err = piped
            .amplitudes()
            .iter()
            .zip(psi.amplitudes())
            .map(|(a, c)| (a - c).abs())
            .fold(0.0, f64::max);
        pipeline.record(err, ORACLE_TOL, ctx);

        if 2 * b < d_min {
            let lhs = dual_norm_squared(&pair, b)?;
            let rhs = BigInt::from(vol(n, b)?) << (n - k);
            normalizer.record(if lhs == rhs { 0.0 } else { 1.0 }, 0.0, ctx);

            let v = BitVector::random(n, &mut rng);
            let e = (dequantized_overlap_exact(&pair, b, &v)? - exact_overlap(&pair, b, &v)?).abs();
            dequant.record(e, ORACLE_TOL, ctx);
        }
        for delta in 0..=n {
            if 2 * b + delta >= d_min {
                break;
            }
            let mut v = BitVector::zeros(n);
            for i in rand::seq::index::sample(&mut rng, n, delta) {
                v.set(i, true);
            }
            let e = (exact_overlap(&pair, b, &v)? - ball_overlap(n, b, delta)?).abs();
            overlap.record(e, ORACLE_TOL, ctx);
        }

        let m = n.min(10);
        let f: Vec<f64> = (0..1 << m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let g: Vec<f64> = (0..1 << m).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut lhs = xor_convolve(&f, &g);
        walsh_hadamard_in_place(&mut lhs);
        let (mut ft, mut gt) = (f, g);
        walsh_hadamard_in_place(&mut ft);
        walsh_hadamard_in_place(&mut gt);
        let scale = 2f64.powf(m as f64 / 2.0);
        let e = lhs
            .iter()
            .zip(ft.iter().zip(&gt))
            .map(|(l, (a, c))| (l - scale * a * c).abs())
            .fold(0.0, f64::max);
        conv.record(e, 1e-9 * scale, ctx);

        let mut ind: Vec<i64> = (0..1usize << n).map(|x| (x.count_ones() as usize <= b) as i64).collect();
        walsh_hadamard_int(&mut ind);
        let t = kraw_table(n, b)?;
        let ok = ind
            .iter()
            .enumerate()
            .all(|(x, &v)| BigInt::from(v) == *t.exact(x.count_ones() as usize));
        gtilde.record(if ok { 0.0 } else { 1.0 }, 0.0, ctx);
    }
    Ok(vec![psiperp, pipeline, normalizer, overlap, dequant, conv, gtilde])
}

/// Runs [`oracle_checks`], writes the report, and fails with
/// `VerificationFailure` naming every failed property.
pub fn cmd_oracle_verify(config: &ExperimentConfig) -> Result<Value> {
    let start = Instant::now();
    let checks = oracle_checks(config)?;
    let failed: Vec<String> = checks
        .iter()
        .filter(|c| c.failures > 0)
        .map(|c| c.name.clone())
        .collect();
    let meta = metadata(config, config.max_n, 0, 0, vec![]);
    let summary = json!({
        "metadata": meta,
        "inject_fault": config.inject_fault,
        "checks": checks,
        "passed": failed.is_empty(),
        "runtime_seconds": start.elapsed().as_secs_f64(),
    });
    let mut out = OutputDir::create(&config.output_dir)?;
    out.write_json("oracle_verify.json", &summary)?;
    out.commit();
    if failed.is_empty() {
        Ok(summary)
    } else {
        Err(Error::VerificationFailure(failed.join(", ")))
    }
}
