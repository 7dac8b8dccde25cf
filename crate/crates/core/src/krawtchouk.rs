//! Binary Krawtchouk polynomials, Hamming-ball volumes and the
//! `K_b^{n-1}(h-1)` tables that weight the dual-code walk.
//!
//! Tables are evaluated exactly with big integers once per `(n, b)` and then
//! carried as [`SignedLogValue`]s: at n = 1000 the entries reach hundreds of
//! decimal digits.

use std::fmt::Write as _;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::logval::SignedLogValue;

/// `C(n, k)`, zero for `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Generalized binomial `x (x-1) ⋯ (x-r+1) / r!` for any integer `x`,
/// so `C(-1, r) = (-1)^r`.
pub fn binomial_signed(x: i64, r: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 0..r {
        acc *= x - i as i64;
        acc /= i + 1;
    }
    acc
}

fn check_domain(j: usize, n: usize, x: i64) -> Result<()> {
    if j > n {
        return Err(Error::Domain(format!("Krawtchouk degree {j} exceeds n = {n}")));
    }
    if x < -1 || x > n as i64 {
        return Err(Error::Domain(format!("Krawtchouk argument {x} outside [-1, {n}]")));
    }
    Ok(())
}

/// `K_j^n(x)` by the three-term recurrence
/// `(j+1) K_{j+1} = (n - 2x) K_j - (n - j + 1) K_{j-1}`.
pub fn kraw(j: usize, n: usize, x: i64) -> Result<BigInt> {
    check_domain(j, n, x)?;
    Ok(kraw_all_degrees(j, n, x).pop().expect("degree 0 always present"))
}

/// `[K_0^n(x), …, K_jmax^n(x)]`. No domain checks; the recurrence is a
/// polynomial identity in `x`.
pub fn kraw_all_degrees(jmax: usize, n: usize, x: i64) -> Vec<BigInt> {
    let mut out = Vec::with_capacity(jmax + 1);
    let slope = BigInt::from(n as i64 - 2 * x);
    let mut prev = BigInt::zero();
    let mut cur = BigInt::one();
    out.push(cur.clone());
    for j in 0..jmax {
        let next = &slope * &cur - BigInt::from(n as i64 - j as i64 + 1) * &prev;
        let (q, r) = next.div_rem(&BigInt::from(j + 1));
        debug_assert!(r.is_zero(), "Krawtchouk recurrence must divide exactly");
        prev = cur;
        cur = q;
        out.push(cur.clone());
    }
    out
}

/// `K_j^n(x)` straight from `Σ_r C(x, r) C(n-x, j-r) (-1)^r`.
pub fn kraw_by_definition(j: usize, n: usize, x: i64) -> Result<BigInt> {
    check_domain(j, n, x)?;
    let mut acc = BigInt::zero();
    for r in 0..=j {
        let term = binomial_signed(x, r as u64) * binomial_signed(n as i64 - x, (j - r) as u64);
        if r % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// `Vol_n(b) = Σ_{j ≤ b} C(n, j)`.
pub fn vol(n: usize, b: usize) -> Result<BigUint> {
    if b > n {
        return Err(Error::Domain(format!("ball radius {b} exceeds n = {n}")));
    }
    let mut acc = BigUint::zero();
    let mut c = BigUint::one();
    for j in 0..=b as u64 {
        acc += &c;
        c *= n as u64 - j;
        c /= j + 1;
    }
    Ok(acc)
}

/// Exact values `K_b^{n-1}(h-1)` for `h = 0..=n`, plus their log-domain form.
#[derive(Clone, Debug)]
pub struct KrawtchoukTable {
    n: usize,
    b: usize,
    exact: Vec<BigInt>,
    values: Vec<SignedLogValue>,
}

/// Builds the table used to weight dual codewords of weight `h`. Depends only
/// on `(n, b)`, never on the code.
pub fn kraw_table(n: usize, b: usize) -> Result<KrawtchoukTable> {
    if n == 0 || b > n {
        return Err(Error::Domain(format!("table needs 0 <= b <= n, n >= 1 (n = {n}, b = {b})")));
    }
    // b = n gives degree n in a polynomial family of order n-1; the defining
    // sum still makes sense and the recurrence handles it.
    let exact: Vec<BigInt> = (0..=n)
        .map(|h| kraw_all_degrees(b, n - 1, h as i64 - 1).pop().unwrap())
        .collect();
    let values = exact.iter().map(SignedLogValue::from_bigint).collect();
    Ok(KrawtchoukTable { n, b, exact, values })
}

impl KrawtchoukTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn b(&self) -> usize {
        self.b
    }

    /// `K_b^{n-1}(h-1)` exactly.
    pub fn exact(&self, h: usize) -> &BigInt {
        &self.exact[h]
    }

    pub fn value(&self, h: usize) -> SignedLogValue {
        self.values[h]
    }

    pub fn values(&self) -> &[SignedLogValue] {
        &self.values
    }

    /// Weights `h` at which the entry is exactly zero.
    pub fn zero_weights(&self) -> Vec<usize> {
        (0..=self.n).filter(|&h| self.exact[h].is_zero()).collect()
    }

    /// Number of sign changes along `h = 0..=n`, skipping exact zeros. Each
    /// real root of `K_b^{n-1}(x - 1)` in `(-1, n)` contributes one.
    pub fn sign_changes(&self) -> usize {
        let signs: Vec<i8> = self
            .values
            .iter()
            .map(SignedLogValue::sign)
            .filter(|&s| s != 0)
            .collect();
        signs.windows(2).filter(|w| w[0] != w[1]).count()
    }

    /// Positions `h` where the sign flips relative to the previous nonzero
    /// entry (the root lies in `(h_prev, h]`).
    pub fn sign_change_positions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut last: Option<(usize, i8)> = None;
        for (h, v) in self.values.iter().enumerate() {
            if v.sign() == 0 {
                continue;
            }
            if let Some((hp, s)) = last {
                if s != v.sign() {
                    out.push((hp, h));
                }
            }
            last = Some((h, v.sign()));
        }
        out
    }

    /// CSV dump with columns `h,sign,log_mag`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("h,sign,log_mag\n");
        for (h, v) in self.values.iter().enumerate() {
            let _ = writeln!(s, "{h},{},{:.17e}", v.sign(), if v.is_zero() { 0.0 } else { v.log_mag() });
        }
        s
    }
}

/// Interval `n/2 ± √(b(n-b))` containing all zeros of `K_b^n`, and outside
/// which the ideal weight distribution is negligible.
pub fn support_interval(n: usize, b: usize) -> (f64, f64) {
    let half = n as f64 / 2.0;
    let r = ((b as f64) * (n as f64 - b as f64)).max(0.0).sqrt();
    (half - r, half + r)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bi(x: i64) -> BigInt {
        BigInt::from(x)
    }

    #[test]
    fn low_degrees() {
        for n in 1..12 {
            for x in -1..=n as i64 {
                assert_eq!(kraw(0, n, x).unwrap(), bi(1));
                assert_eq!(kraw(1, n, x).unwrap(), bi(n as i64 - 2 * x));
            }
        }
    }

    #[test]
    fn k2_of_4_at_2() {
        // 1·1 − 2·2 + 1·1
        assert_eq!(kraw(2, 4, 2).unwrap(), bi(-2));
        assert_eq!(kraw_by_definition(2, 4, 2).unwrap(), bi(-2));
    }

    #[test]
    fn at_minus_one_gives_ball_volume() {
        for n in 1..30 {
            for b in 0..n {
                assert_eq!(
                    kraw(b, n - 1, -1).unwrap(),
                    BigInt::from(vol(n, b).unwrap()),
                    "n={n} b={b}"
                );
            }
        }
    }

    #[test]
    fn recurrence_matches_definition() {
        for n in 0..=40usize {
            for j in 0..=n {
                for x in -1..=n as i64 {
                    assert_eq!(kraw(j, n, x).unwrap(), kraw_by_definition(j, n, x).unwrap());
                }
            }
        }
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(kraw(5, 4, 0), Err(Error::Domain(_))));
        assert!(matches!(kraw(1, 4, 5), Err(Error::Domain(_))));
        assert!(matches!(kraw(1, 4, -2), Err(Error::Domain(_))));
        assert!(matches!(vol(3, 4), Err(Error::Domain(_))));
        assert!(kraw_table(4, 5).is_err());
    }

    #[test]
    fn volume_edges() {
        for n in 1..20 {
            assert_eq!(vol(n, 0).unwrap(), BigUint::one());
            assert_eq!(vol(n, 1).unwrap(), BigUint::from(n + 1));
            assert_eq!(vol(n, n).unwrap(), BigUint::one() << n);
        }
    }

    #[test]
    fn radius_zero_table_is_all_ones() {
        let t = kraw_table(4, 0).unwrap();
        for h in 0..=4 {
            assert_eq!(t.value(h).sign(), 1);
            assert_eq!(t.value(h).log_mag(), 0.0);
        }
    }

    #[test]
    fn table_head_is_ball_volume() {
        let t = kraw_table(1000, 20).unwrap();
        // Independent sum of binomials.
        let mut v = BigUint::zero();
        for j in 0..=20u64 {
            v += binomial(1000, j);
        }
        assert_eq!(t.exact(0), &BigInt::from(v));
        assert_eq!(t.value(0).sign(), 1);
    }

    #[test]
    fn sixty_sign_changes_at_radius_sixty() {
        let t = kraw_table(1000, 60).unwrap();
        assert_eq!(t.sign_changes(), 60);
        let (lo, hi) = support_interval(999, 60);
        for (a, b) in t.sign_change_positions() {
            // The root in x = h - 1 lies in (a - 1, b - 1).
            assert!(b as f64 - 1.0 >= lo && a as f64 - 1.0 <= hi);
        }
    }

    #[test]
    fn support_interval_values() {
        assert_eq!(support_interval(1000, 20), (360.0, 640.0));
        let (lo, hi) = support_interval(1000, 60);
        assert!((lo - 262.513).abs() < 1e-3 && (hi - 737.487).abs() < 1e-3);
        assert_eq!(support_interval(10, 0), (5.0, 5.0));
    }

    #[test]
    fn csv_dump_shape() {
        let csv = kraw_table(6, 2).unwrap().to_csv();
        assert_eq!(csv.lines().count(), 8);
        assert!(csv.starts_with("h,sign,log_mag\n0,1,"));
    }
}
