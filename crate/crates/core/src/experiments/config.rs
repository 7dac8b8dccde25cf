use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectrum::DEFAULT_EPSILON;
use crate::walk::DEFAULT_BURN_IN;

/// Desk-scale chain length.
pub const DEFAULT_STEPS: u64 = 100_000_000;

/// Chain length for full-scale runs, selected by `--full-scale`.
pub const FULL_SCALE_STEPS: u64 = 10_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Spectrum,
    Walk,
    RegionMap,
    FidelitySweep,
    RuntimeCompare,
    OracleVerify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Spectrum => "spectrum",
            Command::Walk => "walk",
            Command::RegionMap => "region-map",
            Command::FidelitySweep => "fidelity-sweep",
            Command::RuntimeCompare => "runtime-compare",
            Command::OracleVerify => "oracle-verify",
        }
    }

    fn default_trials(self) -> usize {
        match self {
            Command::Spectrum | Command::Walk | Command::RegionMap => 1,
            Command::FidelitySweep | Command::RuntimeCompare => 10,
            Command::OracleVerify => 100,
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            Command::Spectrum,
            Command::Walk,
            Command::RegionMap,
            Command::FidelitySweep,
            Command::RuntimeCompare,
            Command::OracleVerify,
        ]
        .into_iter()
        .find(|c| c.name() == s)
        .ok_or_else(|| Error::Parse(format!("unknown command {s:?}")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub command: Command,
    pub n: usize,
    pub k: usize,
    pub b: usize,
    pub steps: u64,
    pub burn_in: u64,
    pub trials: usize,
    pub seed: u64,
    pub epsilon: f64,
    pub output_dir: PathBuf,
    /// Code file (`CodePair::to_text` format) used instead of a random code.
    pub code: Option<PathBuf>,
    /// Grid spacing in both `k` and `b` for `region-map`.
    pub grid_step: usize,
    /// Radii for `fidelity-sweep`; `k = k_per_b · b`.
    pub b_values: Vec<usize>,
    pub k_per_b: usize,
    /// Central comparison window for `spectrum`; defaults to
    /// `[0.45 n, 0.55 n]`.
    pub window: Option<(usize, usize)>,
    /// Largest code length drawn by `oracle-verify`.
    pub max_n: usize,
    /// Corrupt one Krawtchouk sign in `oracle-verify` to exercise detection.
    pub inject_fault: bool,
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            n: 1000,
            k: 100,
            b: 20,
            steps: DEFAULT_STEPS,
            burn_in: DEFAULT_BURN_IN,
            trials: command.default_trials(),
            seed: 1,
            epsilon: DEFAULT_EPSILON,
            output_dir: PathBuf::from("results"),
            code: None,
            grid_step: 10,
            b_values: vec![10, 20, 30, 40, 50, 60, 70],
            k_per_b: 5,
            window: None,
            max_n: 14,
            inject_fault: false,
        }
    }

    /// The central window clipped to `0..=n`.
    pub fn window_for(&self, n: usize) -> (usize, usize) {
        let (lo, hi) = self
            .window
            .unwrap_or(((0.45 * n as f64).round() as usize, (0.55 * n as f64).round() as usize));
        (lo.min(n), hi.min(n))
    }

    /// Applies one `key = value` setting.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let bad = |what: &str| Error::Parse(format!("invalid {what} {value:?}"));
        match key {
            "command" => self.command = value.parse()?,
            "n" => self.n = value.parse().map_err(|_| bad("n"))?,
            "k" => self.k = value.parse().map_err(|_| bad("k"))?,
            "b" => self.b = value.parse().map_err(|_| bad("b"))?,
            "steps" => self.steps = parse_count(value)?,
            "burn_in" | "burn-in" => self.burn_in = parse_count(value)?,
            "trials" => self.trials = parse_count(value)? as usize,
            "seed" => self.seed = value.parse().map_err(|_| bad("seed"))?,
            "epsilon" => self.epsilon = value.parse().map_err(|_| bad("epsilon"))?,
            "out" | "output_dir" => self.output_dir = PathBuf::from(value),
            "code" => self.code = Some(PathBuf::from(value)),
            "grid_step" | "grid-step" => self.grid_step = value.parse().map_err(|_| bad("grid step"))?,
            "b_values" | "b-values" => {
                self.b_values = value
                    .split(',')
                    .map(|s| s.trim().parse().map_err(|_| bad("b list")))
                    .collect::<Result<_>>()?
            }
            "k_per_b" | "k-per-b" => self.k_per_b = value.parse().map_err(|_| bad("k per b"))?,
            "window" => {
                let (lo, hi) = value.split_once(',').ok_or_else(|| bad("window"))?;
                self.window = Some((
                    lo.trim().parse().map_err(|_| bad("window"))?,
                    hi.trim().parse().map_err(|_| bad("window"))?,
                ));
            }
            "max_n" | "max-n" => self.max_n = value.parse().map_err(|_| bad("max n"))?,
            "inject_fault" | "inject-fault" => self.inject_fault = value.parse().map_err(|_| bad("flag"))?,
            other => return Err(Error::Parse(format!("unknown config key {other:?}"))),
        }
        Ok(())
    }

    /// Applies a `key = value` file; `#` starts a comment.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("line {}: expected key = value", lineno + 1)))?;
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Domain(msg));
        if self.command == Command::OracleVerify {
            if !(4..=crate::oracle::MAX_QUBITS).contains(&self.max_n) {
                return fail(format!("max_n = {} must lie in [4, 16]", self.max_n));
            }
        } else if self.command == Command::FidelitySweep {
            if self.b_values.is_empty() || self.b_values.iter().any(|&b| b == 0 || self.k_per_b * b >= self.n) {
                return fail("every sweep radius needs 1 <= k_per_b * b < n".into());
            }
        } else if self.command == Command::RegionMap {
            if self.grid_step == 0 || self.grid_step >= self.n {
                return fail(format!("grid step {} must lie in [1, n)", self.grid_step));
            }
        } else if self.code.is_none() && (self.k == 0 || self.k >= self.n || self.b > self.n) {
            return fail(format!("need 1 <= k < n and b <= n (n = {}, k = {}, b = {})", self.n, self.k, self.b));
        }
        if matches!(self.command, Command::Spectrum | Command::Walk | Command::FidelitySweep | Command::RuntimeCompare)
            && self.steps <= self.burn_in
        {
            return fail(format!("steps = {} must exceed burn_in = {}", self.steps, self.burn_in));
        }
        if self.trials == 0 {
            return fail("trials must be at least 1".into());
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return fail(format!("epsilon = {} must lie in (0, 1)", self.epsilon));
        }
        if let Some((lo, hi)) = self.window {
            if lo > hi {
                return fail("window bounds are reversed".into());
            }
        }
        Ok(())
    }
}

/// Integer counts, also accepting exponent forms such as `1e8`.
pub fn parse_count(value: &str) -> Result<u64> {
    if let Ok(v) = value.parse::<u64>() {
        return Ok(v);
    }
    let f: f64 = value
        .parse()
        .map_err(|_| Error::Parse(format!("invalid count {value:?}")))?;
    if f < 0.0 || f.fract() != 0.0 || f > u64::MAX as f64 {
        return Err(Error::Parse(format!("invalid count {value:?}")));
    }
    Ok(f as u64)
}
