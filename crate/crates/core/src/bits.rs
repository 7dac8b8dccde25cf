//! Bit-packed vectors and matrices over GF(2).
//!
//! Bit `i` of a [`BitVector`] lives in word `i / 64` at position `i % 64`.
//! Bits past `len` in the last word are always zero, so word-level
//! population counts equal Hamming weights.

use std::fmt;
use std::ops::{BitXor, BitXorAssign};

use rand::Rng;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn word_count(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A packed vector in GF(2)^n.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BitVector {
    words: Vec<u64>,
    len: usize,
}

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            words: vec![0; word_count(len)],
            len,
        }
    }

    /// Unit vector e_i.
    pub fn unit(len: usize, i: usize) -> Self {
        let mut v = Self::zeros(len);
        v.set(i, true);
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.set(i, true);
            }
        }
        v
    }

    /// Parses a string of `0`/`1` characters; bit 0 is the first character.
    pub fn parse(s: &str) -> Result<Self> {
        let mut v = Self::zeros(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => v.set(i, true),
                other => return Err(Error::Parse(format!("unexpected character {other:?} in bit string"))),
            }
        }
        Ok(v)
    }

    /// Vector whose bit `i` is bit `i` of `index`. Requires `len <= 64`.
    pub fn from_index(len: usize, index: u64) -> Self {
        assert!(len <= WORD, "from_index supports at most 64 bits");
        let mut v = Self::zeros(len);
        if len > 0 {
            let mask = if len == WORD { u64::MAX } else { (1u64 << len) - 1 };
            v.words[0] = index & mask;
        }
        v
    }

    /// Inverse of [`BitVector::from_index`].
    pub fn to_index(&self) -> u64 {
        assert!(self.len <= WORD, "to_index supports at most 64 bits");
        self.words.first().copied().unwrap_or(0)
    }

    pub fn random<R: Rng + ?Sized>(len: usize, rng: &mut R) -> Self {
        let mut v = Self::zeros(len);
        for w in v.words.iter_mut() {
            *w = rng.gen();
        }
        v.mask_tail();
        v
    }

    #[inline]
    fn mask_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "bit {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    /// Hamming weight.
    #[inline]
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// `|self ⊕ other|` without materializing the sum.
    #[inline]
    pub fn xor_weight(&self, other: &Self) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// GF(2) inner product.
    #[inline]
    pub fn dot(&self, other: &Self) -> bool {
        debug_assert_eq!(self.len, other.len);
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let tz = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD + tz)
            })
        })
    }

    /// Keeps only the listed coordinates, in the listed order.
    pub fn select(&self, coords: &[usize]) -> Self {
        let mut out = Self::zeros(coords.len());
        for (j, &c) in coords.iter().enumerate() {
            if self.get(c) {
                out.set(j, true);
            }
        }
        out
    }

    /// Concatenation `[self | other]`.
    pub fn concat(&self, other: &Self) -> Self {
        let mut out = Self::zeros(self.len + other.len);
        for i in self.iter_ones() {
            out.set(i, true);
        }
        for i in other.iter_ones() {
            out.set(self.len + i, true);
        }
        out
    }
}

impl BitXorAssign<&BitVector> for BitVector {
    #[inline]
    fn bitxor_assign(&mut self, rhs: &BitVector) {
        debug_assert_eq!(self.len, rhs.len);
        for (a, b) in self.words.iter_mut().zip(&rhs.words) {
            *a ^= b;
        }
    }
}

impl BitXor<&BitVector> for &BitVector {
    type Output = BitVector;

    fn bitxor(self, rhs: &BitVector) -> BitVector {
        let mut out = self.clone();
        out ^= rhs;
        out
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitVector({self})")
    }
}

/// Dense row-major GF(2) matrix.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitMatrix {
    rows: Vec<BitVector>,
    ncols: usize,
}

impl BitMatrix {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self {
            rows: vec![BitVector::zeros(ncols); nrows],
            ncols,
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            rows: (0..n).map(|i| BitVector::unit(n, i)).collect(),
            ncols: n,
        }
    }

    pub fn from_rows(rows: Vec<BitVector>, ncols: usize) -> Result<Self> {
        if let Some(bad) = rows.iter().find(|r| r.len() != ncols) {
            return Err(Error::LengthMismatch {
                expected: ncols,
                got: bad.len(),
            });
        }
        Ok(Self { rows, ncols })
    }

    pub fn random<R: Rng + ?Sized>(nrows: usize, ncols: usize, rng: &mut R) -> Self {
        Self {
            rows: (0..nrows).map(|_| BitVector::random(ncols, rng)).collect(),
            ncols,
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn rows(&self) -> &[BitVector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &BitVector {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.rows[i].get(j)
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        self.rows[i].set(j, value)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.ncols, self.nrows());
        for (i, row) in self.rows.iter().enumerate() {
            for j in row.iter_ones() {
                t.rows[j].set(i, true);
            }
        }
        t
    }

    /// Row vector times matrix: `x · self`, the XOR of the rows selected by `x`.
    pub fn left_mul(&self, x: &BitVector) -> Result<BitVector> {
        if x.len() != self.nrows() {
            return Err(Error::LengthMismatch {
                expected: self.nrows(),
                got: x.len(),
            });
        }
        let mut acc = BitVector::zeros(self.ncols);
        for i in x.iter_ones() {
            acc ^= &self.rows[i];
        }
        Ok(acc)
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.ncols != other.nrows() {
            return Err(Error::LengthMismatch {
                expected: self.ncols,
                got: other.nrows(),
            });
        }
        let rows = self
            .rows
            .iter()
            .map(|r| other.left_mul(r))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            rows,
            ncols: other.ncols,
        })
    }

    /// Keeps the listed columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        Self {
            rows: self.rows.iter().map(|r| r.select(cols)).collect(),
            ncols: cols.len(),
        }
    }

    /// Reduced row echelon form in place; returns the pivot column of each
    /// nonzero row, in row order. Zero rows end up at the bottom.
    pub fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            if r == self.rows.len() {
                break;
            }
            let Some(p) = (r..self.rows.len()).find(|&i| self.rows[i].get(c)) else {
                continue;
            };
            self.rows.swap(r, p);
            let pivot = self.rows[r].clone();
            for (i, row) in self.rows.iter_mut().enumerate() {
                if i != r && row.get(c) {
                    *row ^= &pivot;
                }
            }
            pivots.push(c);
            r += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        // Forward elimination only; cheaper than full RREF.
        let mut rows = self.rows.clone();
        let mut r = 0;
        for c in 0..self.ncols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| rows[i].get(c)) else {
                continue;
            };
            rows.swap(r, p);
            let pivot = rows[r].clone();
            for row in rows[r + 1..].iter_mut() {
                if row.get(c) {
                    *row ^= &pivot;
                }
            }
            r += 1;
        }
        r
    }

    pub fn is_invertible(&self) -> bool {
        self.nrows() == self.ncols && self.rank() == self.ncols
    }

    /// Finds `x` with `x · self = y`, if `y` lies in the row space.
    /// The solution is unique when the rows are independent.
    pub fn solve_left(&self, y: &BitVector) -> Result<Option<BitVector>> {
        if y.len() != self.ncols {
            return Err(Error::LengthMismatch {
                expected: self.ncols,
                got: y.len(),
            });
        }
        let m = self.nrows();
        // Each working row carries the combination of original rows it equals.
        let mut work: Vec<(BitVector, BitVector)> = self
            .rows
            .iter()
            .enumerate()
            .map(|(i, r)| (r.clone(), BitVector::unit(m, i)))
            .collect();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.ncols {
            if r == m {
                break;
            }
            let Some(p) = (r..m).find(|&i| work[i].0.get(c)) else {
                continue;
            };
            work.swap(r, p);
            let (pv, pt) = work[r].clone();
            for (i, (row, tag)) in work.iter_mut().enumerate() {
                if i != r && row.get(c) {
                    *row ^= &pv;
                    *tag ^= &pt;
                }
            }
            pivots.push(c);
            r += 1;
        }
        let mut rest = y.clone();
        let mut x = BitVector::zeros(m);
        for (i, &c) in pivots.iter().enumerate() {
            if rest.get(c) {
                rest ^= &work[i].0;
                x ^= &work[i].1;
            }
        }
        Ok(rest.is_zero().then_some(x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tail_bits_stay_clear() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for len in [1, 63, 64, 65, 127, 1000] {
            let v = BitVector::random(len, &mut rng);
            let rem = len % 64;
            if rem != 0 {
                assert_eq!(v.words().last().unwrap() >> rem, 0);
            }
            assert!(v.weight() <= len);
        }
    }

    #[test]
    fn xor_weight_matches_materialized_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let a = BitVector::random(300, &mut rng);
        let b = BitVector::random(300, &mut rng);
        assert_eq!(a.xor_weight(&b), (&a ^ &b).weight());
    }

    #[test]
    fn parse_and_display_round_trip() {
        let v = BitVector::parse("0110001").unwrap();
        assert_eq!(v.to_string(), "0110001");
        assert_eq!(v.iter_ones().collect::<Vec<_>>(), vec![1, 2, 6]);
        assert!(BitVector::parse("01x").is_err());
    }

    #[test]
    fn index_round_trip() {
        for idx in 0..64u64 {
            assert_eq!(BitVector::from_index(6, idx).to_index(), idx);
        }
    }

    #[test]
    fn solve_left_recovers_combination() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mut solved = 0;
        for _ in 0..50 {
            let m = BitMatrix::random(10, 10, &mut rng);
            let x = BitVector::random(10, &mut rng);
            let y = m.left_mul(&x).unwrap();
            let got = m.solve_left(&y).unwrap().expect("y is in the row space");
            assert_eq!(m.left_mul(&got).unwrap(), y);
            if m.is_invertible() {
                assert_eq!(got, x);
                solved += 1;
            }
        }
        assert!(solved > 0);
    }

    #[test]
    fn solve_left_detects_inconsistency() {
        let m = BitMatrix::from_rows(vec![BitVector::parse("110").unwrap()], 3).unwrap();
        assert!(m.solve_left(&BitVector::parse("100").unwrap()).unwrap().is_none());
    }

    #[test]
    fn rank_of_small_matrices() {
        assert_eq!(BitMatrix::identity(5).rank(), 5);
        let m = BitMatrix::from_rows(
            vec![
                BitVector::parse("1100").unwrap(),
                BitVector::parse("0110").unwrap(),
                BitVector::parse("1010").unwrap(),
            ],
            4,
        )
        .unwrap();
        assert_eq!(m.rank(), 2);
    }
}
