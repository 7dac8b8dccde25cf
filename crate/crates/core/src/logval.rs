//! Signed values stored as sign and natural-log magnitude.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint, Sign};

/// `sign · exp(log_mag)`, with `sign = 0` meaning exactly zero.
#[derive(Clone, Copy, PartialEq)]
pub struct SignedLogValue {
    sign: i8,
    log_mag: f64,
}

/// Natural log of a nonzero big unsigned integer.
pub fn ln_biguint(x: &BigUint) -> f64 {
    debug_assert!(x.bits() > 0);
    let bits = x.bits();
    if bits <= 64 {
        let v = x.iter_u64_digits().next().unwrap_or(0);
        return (v as f64).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).iter_u64_digits().next().unwrap_or(0);
    (top as f64).ln() + shift as f64 * std::f64::consts::LN_2
}

/// `num / den` as f64, accurate to a few ulps even when both operands
/// overflow f64.
pub fn ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    assert!(den.bits() > 0, "division by zero");
    if num.bits() == 0 {
        return 0.0;
    }
    // Scale so the integer quotient carries ~64 significant bits.
    let shift = 64 + den.bits() as i64 - num.bits() as i64;
    let q = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        (num >> (-shift) as u64) / den
    };
    let qf = q.iter_u64_digits().fold((0.0f64, 1.0f64), |(acc, scale), d| {
        (acc + d as f64 * scale, scale * 18446744073709551616.0)
    }).0;
    qf * (-(shift as f64)).exp2()
}

impl SignedLogValue {
    pub const ZERO: Self = Self {
        sign: 0,
        log_mag: f64::NEG_INFINITY,
    };
    pub const ONE: Self = Self {
        sign: 1,
        log_mag: 0.0,
    };

    pub fn new(sign: i8, log_mag: f64) -> Self {
        if sign == 0 {
            Self::ZERO
        } else {
            Self {
                sign: sign.signum(),
                log_mag,
            }
        }
    }

    pub fn from_f64(x: f64) -> Self {
        if x == 0.0 {
            Self::ZERO
        } else {
            Self::new(if x > 0.0 { 1 } else { -1 }, x.abs().ln())
        }
    }

    pub fn from_biguint(x: &BigUint) -> Self {
        if x.bits() == 0 {
            Self::ZERO
        } else {
            Self::new(1, ln_biguint(x))
        }
    }

    pub fn from_bigint(x: &BigInt) -> Self {
        match x.sign() {
            Sign::NoSign => Self::ZERO,
            Sign::Plus => Self::new(1, ln_biguint(x.magnitude())),
            Sign::Minus => Self::new(-1, ln_biguint(x.magnitude())),
        }
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    /// Natural log of |x|; `-inf` for zero.
    pub fn log_mag(&self) -> f64 {
        if self.sign == 0 {
            f64::NEG_INFINITY
        } else {
            self.log_mag
        }
    }

    pub fn is_zero(&self) -> bool {
        self.sign == 0
    }

    pub fn to_f64(&self) -> f64 {
        f64::from(self.sign) * self.log_mag.exp()
    }

    pub fn mul(self, rhs: Self) -> Self {
        if self.sign == 0 || rhs.sign == 0 {
            return Self::ZERO;
        }
        Self::new(self.sign * rhs.sign, self.log_mag + rhs.log_mag)
    }

    pub fn square(self) -> Self {
        self.mul(self)
    }

    pub fn neg(self) -> Self {
        Self::new(-self.sign, self.log_mag)
    }

    /// Sum in the log domain via `max + log1p(±exp(-|Δ|))`.
    #[allow(clippy::should_implement_trait)]
    pub fn add(self, rhs: Self) -> Self {
        if self.sign == 0 {
            return rhs;
        }
        if rhs.sign == 0 {
            return self;
        }
        let (big, small) = if self.log_mag >= rhs.log_mag {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let gap = small.log_mag - big.log_mag;
        if big.sign == small.sign {
            Self::new(big.sign, big.log_mag + gap.exp().ln_1p())
        } else if gap == 0.0 {
            Self::ZERO
        } else {
            Self::new(big.sign, big.log_mag + (-gap.exp()).ln_1p())
        }
    }

    /// Orders by absolute value.
    pub fn cmp_magnitude(&self, other: &Self) -> Ordering {
        self.log_mag()
            .partial_cmp(&other.log_mag())
            .unwrap_or(Ordering::Equal)
    }
}

impl fmt::Debug for SignedLogValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            0 => write!(f, "0"),
            s => write!(f, "{}exp({})", if s < 0 { "-" } else { "+" }, self.log_mag),
        }
    }
}

/// Stable `ln Σ exp(x_i)`; `-inf` for an empty or all-`-inf` input.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return max;
    }
    max + xs.iter().map(|&x| (x - max).exp()).sum::<f64>().ln()
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn big_magnitudes_round_trip() {
        // 3^700 overflows f64; compare logs.
        let x = BigUint::from(3u32).pow(700);
        let v = SignedLogValue::from_biguint(&x);
        assert!((v.log_mag() - 700.0 * 3f64.ln()).abs() < 1e-12 * 700.0 * 3f64.ln());
        let neg = SignedLogValue::from_bigint(&-BigInt::from(x));
        assert_eq!(neg.sign(), -1);
    }

    #[test]
    fn zero_handling() {
        assert!(SignedLogValue::from_bigint(&BigInt::from(0)).is_zero());
        assert!(SignedLogValue::ZERO.mul(SignedLogValue::ONE).is_zero());
        assert_eq!(SignedLogValue::ZERO.add(SignedLogValue::ONE), SignedLogValue::ONE);
        let five = SignedLogValue::from_f64(5.0);
        assert!(five.add(five.neg()).is_zero());
    }

    #[test]
    fn ratio_of_huge_integers() {
        let a = BigUint::one() << 3000u32;
        let b = (BigUint::one() << 3001u32) + BigUint::one();
        assert!(rel(ratio_f64(&a, &b), 0.5) < 1e-15);
        assert_eq!(ratio_f64(&BigUint::from(0u8), &b), 0.0);
        assert!(rel(ratio_f64(&BigUint::from(1u8), &BigUint::from(3u8)), 1.0 / 3.0) < 1e-15);
        assert!(rel(ratio_f64(&BigUint::from(10u8).pow(30), &BigUint::from(7u8)), 1e30 / 7.0) < 1e-15);
    }

    #[test]
    fn lse_matches_naive() {
        let xs = [0.1, -2.0, 3.5];
        let naive: f64 = xs.iter().map(|x: &f64| x.exp()).sum::<f64>().ln();
        assert!((log_sum_exp(&xs) - naive).abs() < 1e-14);
        assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
    }

    proptest! {
        #[test]
        fn arithmetic_matches_bigint(a in -10i128.pow(30)..10i128.pow(30), b in -10i128.pow(30)..10i128.pow(30)) {
            let (ba, bb) = (BigInt::from(a), BigInt::from(b));
            let (la, lb) = (SignedLogValue::from_bigint(&ba), SignedLogValue::from_bigint(&bb));
            let check = |got: SignedLogValue, want: BigInt| {
                let w = SignedLogValue::from_bigint(&want);
                prop_assert_eq!(got.sign(), w.sign());
                if !w.is_zero() {
                    prop_assert!((got.log_mag() - w.log_mag()).abs() <= 1e-10 * w.log_mag().abs().max(1.0));
                }
                Ok(())
            };
            check(la.mul(lb), &ba * &bb)?;
            check(la.square(), &ba * &ba)?;
            // Cancellation loses relative precision; only check when it is mild.
            let sum = &ba + &bb;
            if sum.magnitude().bits() + 20 >= ba.magnitude().bits().max(bb.magnitude().bits()) {
                check(la.add(lb), sum)?;
            }
        }
    }
}
