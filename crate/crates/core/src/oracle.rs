//! Exact statevector simulation for `n ≤ 16`: the ball-superposition state,
//! its Hadamard transform, the conditional-rotation pipeline and exact
//! translation overlaps. Basis index `x` has bit `i` equal to coordinate `i`.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::bits::BitVector;
use crate::code::{encode, enumerate_span, right_inverse, CodePair};
use crate::error::{Error, Result};
use crate::krawtchouk::kraw_table;
use crate::rng::derive_seed;
use crate::walk::conditional_marginal;

pub const MAX_QUBITS: usize = 16;

fn check_size(n: usize) -> Result<()> {
    if n > MAX_QUBITS {
        return Err(Error::TooLarge(format!("statevector with n = {n} exceeds {MAX_QUBITS} qubits")));
    }
    Ok(())
}

/// Dense real amplitudes over `2^n` basis states.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<f64>,
}

impl StateVector {
    /// Normalizes `amps`; errors if the vector is zero or not of length `2^n`.
    pub fn from_amplitudes(n: usize, mut amps: Vec<f64>) -> Result<Self> {
        check_size(n)?;
        if amps.len() != 1 << n {
            return Err(Error::LengthMismatch {
                expected: 1 << n,
                got: amps.len(),
            });
        }
        let norm = amps.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(Error::Domain("zero vector cannot be normalized".into()));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { n, amps })
    }

    pub fn basis(n: usize, index: usize) -> Result<Self> {
        check_size(n)?;
        let mut amps = vec![0.0; 1 << n];
        amps[index] = 1.0;
        Ok(Self { n, amps })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amps
    }

    pub fn amplitude(&self, index: usize) -> f64 {
        self.amps[index]
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a * a).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &Self) -> Result<f64> {
        if self.n != other.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: other.n,
            });
        }
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a * b).sum())
    }

    /// `⟨ψ| T_v |ψ⟩` where `T_v |x⟩ = |x ⊕ v⟩`.
    pub fn translation_overlap(&self, v: usize) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .map(|(x, a)| a * self.amps[x ^ v])
            .sum()
    }
}

/// `|⟨s1|s2⟩|`.
pub fn state_fidelity(s1: &StateVector, s2: &StateVector) -> Result<f64> {
    Ok(s1.inner(s2)?.abs())
}

/// In-place Walsh–Hadamard butterfly with the unitary `1/√2` per level.
pub fn walsh_hadamard_in_place(amps: &mut [f64]) {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut half = 1;
    while half < amps.len() {
        for block in (0..amps.len()).step_by(2 * half) {
            for i in block..block + half {
                let (a, b) = (amps[i], amps[i + half]);
                amps[i] = s * (a + b);
                amps[i + half] = s * (a - b);
            }
        }
        half *= 2;
    }
}

pub fn walsh_hadamard(s: &StateVector) -> StateVector {
    let mut out = s.clone();
    walsh_hadamard_in_place(&mut out.amps);
    out
}

/// Unnormalized integer transform `g̃(x) = Σ_z (-1)^{x·z} g(z)`.
pub fn walsh_hadamard_int(values: &mut [i64]) {
    let mut half = 1;
    while half < values.len() {
        for block in (0..values.len()).step_by(2 * half) {
            for i in block..block + half {
                let (a, b) = (values[i], values[i + half]);
                values[i] = a + b;
                values[i + half] = a - b;
            }
        }
        half *= 2;
    }
}

/// `(f ⋆ g)(z) = Σ_y f(y) g(z ⊕ y)`.
pub fn xor_convolve(f: &[f64], g: &[f64]) -> Vec<f64> {
    assert_eq!(f.len(), g.len());
    (0..f.len())
        .map(|z| f.iter().enumerate().map(|(y, fy)| fy * g[z ^ y]).sum())
        .collect()
}

fn codeword_indices(pair: &CodePair, dual: bool) -> Result<Vec<usize>> {
    let g = if dual { pair.dual() } else { pair.primal() };
    Ok(enumerate_span(g, MAX_QUBITS)?
        .iter()
        .map(|c| c.to_index() as usize)
        .collect())
}

fn ball_indices(n: usize, b: usize) -> Vec<usize> {
    (0..1usize << n).filter(|x| x.count_ones() as usize <= b).collect()
}

/// Multiplicity `#{(c, z) : c ∈ C, |z| ≤ b, c ⊕ z = y}` for every `y`.
pub fn ball_multiplicities(pair: &CodePair, b: usize) -> Result<Vec<u64>> {
    let n = pair.n();
    check_size(n)?;
    let ball = ball_indices(n, b);
    let mut counts = vec![0u64; 1 << n];
    for c in codeword_indices(pair, false)? {
        for &z in &ball {
            counts[c ^ z] += 1;
        }
    }
    Ok(counts)
}

/// `|Ψ_b⟩ ∝ Σ_{c∈C} Σ_{|z|≤b} |c ⊕ z⟩`, normalized numerically so that
/// overlapping balls are handled too.
pub fn build_psi_b(pair: &CodePair, b: usize) -> Result<StateVector> {
    let counts = ball_multiplicities(pair, b)?;
    StateVector::from_amplitudes(pair.n(), counts.into_iter().map(|c| c as f64).collect())
}

fn table_f64(n: usize, b: usize) -> Result<Vec<f64>> {
    let t = kraw_table(n, b)?;
    Ok((0..=n).map(|h| t.exact(h).to_f64().expect("small table")).collect())
}

/// `|Ψ̃_b⟩ ∝ Σ_{d∈C⊥} K_b^{n-1}(|d|-1) |d⟩`.
pub fn build_psi_tilde(pair: &CodePair, b: usize) -> Result<StateVector> {
    build_psi_tilde_with_fault(pair, b, None)
}

/// As [`build_psi_tilde`], with the table sign at one weight flipped.
pub fn build_psi_tilde_with_fault(pair: &CodePair, b: usize, sign_fault_weight: Option<usize>) -> Result<StateVector> {
    let n = pair.n();
    check_size(n)?;
    let mut table = table_f64(n, b)?;
    if let Some(h) = sign_fault_weight {
        table[h] = -table[h];
    }
    let mut amps = vec![0.0; 1 << n];
    for d in codeword_indices(pair, true)? {
        amps[d] = table[d.count_ones() as usize];
    }
    StateVector::from_amplitudes(n, amps)
}

/// `Σ_{d∈C⊥} K_b^{n-1}(|d|-1)²` exactly. Equals `2^{n-k} Vol(b)` when the
/// balls around distinct codewords are disjoint.
pub fn dual_norm_squared(pair: &CodePair, b: usize) -> Result<BigInt> {
    check_size(pair.n())?;
    let t = kraw_table(pair.n(), b)?;
    let mut acc = BigInt::zero();
    for d in codeword_indices(pair, true)? {
        let k = t.exact(d.count_ones() as usize);
        acc += k * k;
    }
    Ok(acc)
}

/// Where the conditional probabilities `p(u_j = 1 | u_0..u_{j-1})` come from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MarginalSource {
    /// Exact sums of `f` over all completions of each prefix.
    Exact,
    /// One walk per prefix with the prefix frozen. Seeds are derived per
    /// prefix from `seed`.
    Mcmc { steps: u64, burn_in: u64, seed: u64 },
}

/// Conditional-rotation amplitudes `a(u) = Π_j √p(u_j | u_<j)` over
/// `u ∈ Z_2^{k⊥}`, indexed with bit `j` of the index equal to `u_j`.
pub fn conditional_amplitudes(pair: &CodePair, b: usize, source: MarginalSource) -> Result<Vec<f64>> {
    let kp = pair.k_perp();
    check_size(kp)?;
    let dual = pair.dual();
    let table = table_f64(pair.n(), b)?;
    // Subtree sums S_j[p] = Σ f(u) over u whose low j bits equal p.
    let sums = match source {
        MarginalSource::Exact => {
            let mut level: Vec<f64> = (0..1u64 << kp)
                .map(|u| {
                    let d = encode(&BitVector::from_index(kp, u), dual).expect("dimensions agree");
                    let k = table[d.weight()];
                    k * k
                })
                .collect();
            let mut sums = vec![Vec::new(); kp + 1];
            for j in (0..=kp).rev() {
                let next: Vec<f64> = if j == 0 {
                    Vec::new()
                } else {
                    let half = 1usize << (j - 1);
                    (0..half).map(|p| level[p] + level[p + half]).collect()
                };
                sums[j] = std::mem::replace(&mut level, next);
            }
            Some(sums)
        }
        MarginalSource::Mcmc { .. } => None,
    };
    // Per-node MCMC marginals, indexed by `(1 << j) | prefix`.
    let node_q: Vec<f64> = match source {
        MarginalSource::Mcmc { steps, burn_in, seed } => (0..1usize << kp)
            .into_par_iter()
            .map(|node| {
                if node == 0 {
                    return Ok(0.0);
                }
                let j = (usize::BITS - 1 - node.leading_zeros()) as usize;
                let bits: Vec<bool> = (0..j).map(|i| (node >> i) & 1 == 1).collect();
                match conditional_marginal(pair, b, &bits, steps, burn_in, derive_seed(seed, node as u64)) {
                    Ok(q) => Ok(q),
                    // No completion of this prefix has f > 0; its amplitude
                    // is already negligible, so the split is arbitrary.
                    Err(Error::InitFailure { .. }) => Ok(0.5),
                    Err(e) => Err(e),
                }
            })
            .collect::<Result<_>>()?,
        MarginalSource::Exact => Vec::new(),
    };
    let mut amps = vec![0.0; 1 << kp];
    let mut stack = vec![(0usize, 0usize, 1.0f64)];
    while let Some((j, prefix, amp)) = stack.pop() {
        if j == kp {
            amps[prefix] = amp;
            continue;
        }
        let q = match (&sums, source) {
            (Some(s), _) => {
                let total = s[j][prefix];
                if total == 0.0 {
                    continue;
                }
                s[j + 1][prefix | (1 << j)] / total
            }
            (None, _) => node_q[(1 << j) | prefix],
        };
        if q < 1.0 {
            stack.push((j + 1, prefix, amp * (1.0 - q).sqrt()));
        }
        if q > 0.0 {
            stack.push((j + 1, prefix | (1 << j), amp * q.sqrt()));
        }
    }
    Ok(amps)
}

/// The state-preparation pipeline: conditional rotations over `u`, the
/// reversible map `u → u B⊥`, uncomputation of `u` through the right
/// inverse, the Krawtchouk sign, and the final Hadamard transform.
pub fn simulate_pipeline(pair: &CodePair, b: usize, source: MarginalSource) -> Result<StateVector> {
    simulate_pipeline_with_fault(pair, b, source, None)
}

/// As [`simulate_pipeline`], optionally flipping the sign applied at one
/// Hamming weight. Used to confirm that the verifier detects sign errors.
pub fn simulate_pipeline_with_fault(
    pair: &CodePair,
    b: usize,
    source: MarginalSource,
    sign_fault_weight: Option<usize>,
) -> Result<StateVector> {
    let n = pair.n();
    check_size(n)?;
    let u_amps = conditional_amplitudes(pair, b, source)?;
    let kp = pair.k_perp();
    let m = right_inverse(pair.dual())?;
    let table = table_f64(n, b)?;
    let mut amps = vec![0.0; 1 << n];
    for (ui, &a) in u_amps.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        let u = BitVector::from_index(kp, ui as u64);
        let d = encode(&u, pair.dual())?;
        if m.left_mul(&d)? != u {
            return Err(Error::VerificationFailure(format!("uncompute of u = {u} failed")));
        }
        let h = d.weight();
        // A phase oracle maps to ±1; a zero table entry leaves the sign +.
        let mut sign = if table[h] < 0.0 { -1.0 } else { 1.0 };
        if sign_fault_weight == Some(h) {
            sign = -sign;
        }
        amps[d.to_index() as usize] += sign * a;
    }
    walsh_hadamard_in_place(&mut amps);
    StateVector::from_amplitudes(n, amps)
}

/// `⟨Ψ_b| T_v |Ψ_b⟩` by direct summation over the statevector.
pub fn exact_overlap(pair: &CodePair, b: usize, v: &BitVector) -> Result<f64> {
    if v.len() != pair.n() {
        return Err(Error::LengthMismatch {
            expected: pair.n(),
            got: v.len(),
        });
    }
    let psi = build_psi_b(pair, b)?;
    Ok(psi.translation_overlap(v.to_index() as usize))
}
