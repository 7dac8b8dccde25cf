//! Binary linear codes: generator matrices, systematic form, duals and
//! distance estimates.
//!
//! A generator is *systematic on an information set* `S = (s_0, …, s_{k-1})`
//! when column `s_i` is the unit vector `e_i`. The usual `[I | R]` form is
//! the case `S = (0, …, k-1)`. When the leading block of a random matrix is
//! singular, [`systematic_form`] pivots on other columns instead, and the
//! pair of generators stays in the original coordinates so that the primal
//! and dual remain orthogonal without any bookkeeping by callers.

use std::fmt::Write as _;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::SeedableRng;
use sha2::{Digest, Sha256};

use crate::bits::{BitMatrix, BitVector};
use crate::error::{Error, Result};
use crate::krawtchouk::binomial;
use crate::rng::ChainRng;

/// Rows of a generator matrix plus, when known, the information set on
/// which it is systematic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorMatrix {
    matrix: BitMatrix,
    info_set: Option<Vec<usize>>,
}

impl GeneratorMatrix {
    /// Wraps rows without checking independence; use [`systematic_form`] to
    /// validate and normalize.
    pub fn new(rows: Vec<BitVector>, n: usize) -> Result<Self> {
        if n == 0 || rows.len() > n {
            return Err(Error::BadDimensions { n, k: rows.len() });
        }
        let matrix = BitMatrix::from_rows(rows, n)?;
        let info_set = detect_info_set(&matrix);
        Ok(Self { matrix, info_set })
    }

    fn with_info_set(matrix: BitMatrix, info_set: Vec<usize>) -> Self {
        debug_assert!(info_set.iter().enumerate().all(|(i, &c)| {
            (0..matrix.nrows()).all(|r| matrix.get(r, c) == (r == i))
        }));
        Self {
            matrix,
            info_set: Some(info_set),
        }
    }

    /// Code length n.
    pub fn n(&self) -> usize {
        self.matrix.ncols()
    }

    /// Code dimension k (number of rows).
    pub fn k(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn rows(&self) -> &[BitVector] {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &BitMatrix {
        &self.matrix
    }

    /// Columns carrying the identity, if the matrix is systematic.
    pub fn info_set(&self) -> Option<&[usize]> {
        self.info_set.as_deref()
    }

    pub fn is_systematic(&self) -> bool {
        self.info_set.is_some()
    }

    /// True for the literal `[I | R]` layout.
    pub fn is_left_systematic(&self) -> bool {
        self.info_set.as_deref().is_some_and(is_prefix)
    }
}

fn is_prefix(set: &[usize]) -> bool {
    set.iter().enumerate().all(|(i, &c)| i == c)
}

/// Looks for the `[I | R]` layout first, then any set of unit columns.
fn detect_info_set(m: &BitMatrix) -> Option<Vec<usize>> {
    let k = m.nrows();
    let unit_col = |c: usize| -> Option<usize> {
        let ones: Vec<usize> = (0..k).filter(|&r| m.get(r, c)).collect();
        (ones.len() == 1).then(|| ones[0])
    };
    if (0..k.min(m.ncols())).all(|c| unit_col(c) == Some(c)) && k <= m.ncols() {
        return Some((0..k).collect());
    }
    let mut set = vec![None; k];
    for c in 0..m.ncols() {
        if let Some(r) = unit_col(c) {
            if set[r].is_none() {
                set[r] = Some(c);
            }
        }
    }
    set.into_iter().collect()
}

/// Result of [`systematic_form`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SystematicForm {
    pub generator: GeneratorMatrix,
    /// `None` when the leading k×k block was already invertible. Otherwise
    /// the column order that brings the generator to `[I | R]`: information
    /// set first, remaining columns after.
    pub permutation: Option<Vec<usize>>,
}

/// Row-reduces `b` to a generator of the same code that is systematic on
/// its pivot columns.
pub fn systematic_form(b: &GeneratorMatrix) -> Result<SystematicForm> {
    let mut m = b.matrix.clone();
    let pivots = m.rref_in_place();
    if pivots.len() < b.k() {
        return Err(Error::DependentRows {
            rank: pivots.len(),
            k: b.k(),
        });
    }
    let permutation = if is_prefix(&pivots) {
        None
    } else {
        let mut order = pivots.clone();
        order.extend((0..b.n()).filter(|c| !pivots.contains(c)));
        Some(order)
    };
    Ok(SystematicForm {
        generator: GeneratorMatrix::with_info_set(m, pivots),
        permutation,
    })
}

/// Generator of the dual code: for each non-information column `j`, the row
/// with a one at `j` and `B[i][j]` at information column `s_i`. For the
/// `[I | R]` layout this is exactly `[Rᵀ | I]`.
pub fn dual_generator(b: &GeneratorMatrix) -> Result<GeneratorMatrix> {
    let info = b.info_set().ok_or(Error::NotSystematic)?;
    let (n, k) = (b.n(), b.k());
    if k == n {
        return Err(Error::FullDimensionCode);
    }
    let mut is_info = vec![false; n];
    for &c in info {
        is_info[c] = true;
    }
    let free: Vec<usize> = (0..n).filter(|&c| !is_info[c]).collect();
    let mut dual = BitMatrix::zeros(free.len(), n);
    for (r, &j) in free.iter().enumerate() {
        dual.set(r, j, true);
        for (i, &s) in info.iter().enumerate() {
            if b.matrix.get(i, j) {
                dual.set(r, s, true);
            }
        }
    }
    Ok(GeneratorMatrix::with_info_set(dual, free))
}

/// Right inverse `M` (n × k⊥) of a systematic generator: `Bp · M = I`.
pub fn right_inverse(bp: &GeneratorMatrix) -> Result<BitMatrix> {
    let info = bp.info_set().ok_or(Error::NotSystematic)?;
    let mut m = BitMatrix::zeros(bp.n(), bp.k());
    for (i, &s) in info.iter().enumerate() {
        m.set(s, i, true);
    }
    Ok(m)
}

/// `u · B`: XOR of the rows selected by `u`.
pub fn encode(u: &BitVector, b: &GeneratorMatrix) -> Result<BitVector> {
    b.matrix.left_mul(u)
}

/// Smallest `D` with `Vol_n(D) ≥ 2^(n-k)`, the Gilbert–Varshamov estimate of
/// the minimum distance of a random `[n, k]` code.
pub fn gv_distance(n: usize, k: usize) -> usize {
    let target = BigUint::one() << (n - k.min(n));
    let mut vol = BigUint::zero();
    for d in 0..=n {
        vol += binomial(n as u64, d as u64);
        if vol >= target {
            return d;
        }
    }
    n
}

/// A code together with its dual, both in the same coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CodePair {
    primal: GeneratorMatrix,
    dual: GeneratorMatrix,
    permutation: Option<Vec<usize>>,
}

impl CodePair {
    /// Normalizes `b` to systematic form and derives the dual. Also accepts
    /// the degenerate cases k = 0 (dual is everything) and k = n (dual is
    /// `{0}`), which only the small-n oracle uses.
    pub fn from_generator(b: &GeneratorMatrix) -> Result<Self> {
        let n = b.n();
        if b.k() == 0 {
            return Ok(Self {
                primal: GeneratorMatrix::with_info_set(BitMatrix::zeros(0, n), vec![]),
                dual: GeneratorMatrix::with_info_set(BitMatrix::identity(n), (0..n).collect()),
                permutation: None,
            });
        }
        let sys = systematic_form(b)?;
        let dual = if sys.generator.k() == n {
            GeneratorMatrix::with_info_set(BitMatrix::zeros(0, n), vec![])
        } else {
            dual_generator(&sys.generator)?
        };
        Ok(Self {
            primal: sys.generator,
            dual,
            permutation: sys.permutation,
        })
    }

    /// Builds `B = [I | R]`, `B⊥ = [Rᵀ | I]` from an explicit `R` (k × (n-k)).
    pub fn from_redundancy(r: &BitMatrix) -> Result<Self> {
        let k = r.nrows();
        let n = k + r.ncols();
        if k == 0 || k >= n {
            return Err(Error::BadDimensions { n, k });
        }
        let primal_rows = (0..k)
            .map(|i| BitVector::unit(k, i).concat(r.row(i)))
            .collect();
        let rt = r.transpose();
        let dual_rows = (0..n - k)
            .map(|j| rt.row(j).concat(&BitVector::unit(n - k, j)))
            .collect();
        Ok(Self {
            primal: GeneratorMatrix::with_info_set(BitMatrix::from_rows(primal_rows, n)?, (0..k).collect()),
            dual: GeneratorMatrix::with_info_set(BitMatrix::from_rows(dual_rows, n)?, (k..n).collect()),
            permutation: None,
        })
    }

    pub fn primal(&self) -> &GeneratorMatrix {
        &self.primal
    }

    pub fn dual(&self) -> &GeneratorMatrix {
        &self.dual
    }

    pub fn n(&self) -> usize {
        self.primal.n()
    }

    pub fn k(&self) -> usize {
        self.primal.k()
    }

    pub fn k_perp(&self) -> usize {
        self.dual.k()
    }

    /// Column permutation applied during systematic reduction, if any.
    pub fn permutation(&self) -> Option<&[usize]> {
        self.permutation.as_deref()
    }

    /// Checks every primal/dual inner product and the dimension count.
    pub fn is_consistent(&self) -> bool {
        self.k() + self.k_perp() == self.n()
            && self
                .primal
                .rows()
                .iter()
                .all(|p| self.dual.rows().iter().all(|d| !p.dot(d)))
    }

    /// Plain-text export: `n k` then one row of B per line.
    pub fn to_text(&self) -> String {
        let mut s = format!("{} {}\n", self.n(), self.k());
        for row in self.primal.rows() {
            let _ = writeln!(s, "{row}");
        }
        s
    }

    /// Parses [`CodePair::to_text`] output; the dual is recomputed.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines
            .next()
            .ok_or_else(|| Error::Parse("empty code file".into()))?;
        let mut it = header.split_whitespace().map(|t| {
            t.parse::<usize>()
                .map_err(|e| Error::Parse(format!("bad header {header:?}: {e}")))
        });
        let (n, k) = match (it.next(), it.next(), it.next()) {
            (Some(n), Some(k), None) => (n?, k?),
            _ => return Err(Error::Parse(format!("header must be \"n k\", got {header:?}"))),
        };
        let rows = lines.map(BitVector::parse).collect::<Result<Vec<_>>>()?;
        if rows.len() != k {
            return Err(Error::Parse(format!("expected {k} rows, found {}", rows.len())));
        }
        let b = GeneratorMatrix::new(rows, n)?;
        Self::from_generator(&b)
    }

    /// First 16 hex digits of SHA-256 over the text export.
    pub fn checksum(&self) -> String {
        let digest = Sha256::digest(self.to_text().as_bytes());
        digest[..8].iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Random `[n, k]` code from an i.i.d. fair-bit `R`, seeded deterministically.
pub fn random_code(n: usize, k: usize, seed: u64) -> Result<CodePair> {
    let mut rng = ChainRng::seed_from_u64(seed);
    random_code_with(n, k, &mut rng)
}

pub fn random_code_with<R: rand::Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Result<CodePair> {
    if k == 0 || k >= n {
        return Err(Error::BadDimensions { n, k });
    }
    let r = BitMatrix::random(k, n - k, rng);
    CodePair::from_redundancy(&r)
}

/// All `2^k` elements of the row space, in Gray-code order starting at 0.
pub fn enumerate_span(g: &GeneratorMatrix, max_dim: usize) -> Result<Vec<BitVector>> {
    let k = g.k();
    if k > max_dim {
        return Err(Error::TooLarge(format!("span of dimension {k} exceeds budget 2^{max_dim}")));
    }
    let mut out = Vec::with_capacity(1 << k);
    let mut cur = BitVector::zeros(g.n());
    out.push(cur.clone());
    for i in 1u64..(1u64 << k) {
        cur ^= &g.rows()[i.trailing_zeros() as usize];
        out.push(cur.clone());
    }
    Ok(out)
}

/// Minimum nonzero weight by enumeration; `None` for the zero code.
/// Exponential in k, small codes only.
pub fn enumerated_min_distance(g: &GeneratorMatrix, max_dim: usize) -> Result<Option<usize>> {
    Ok(enumerate_span(g, max_dim)?
        .iter()
        .map(BitVector::weight)
        .filter(|&w| w > 0)
        .min())
}
