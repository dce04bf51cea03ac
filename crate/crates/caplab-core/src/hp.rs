//! High-precision real arithmetic used by the saddle-point and bound modules.
//!
//! A [`Real`] is an arbitrary-precision binary float tagged with the working
//! precision in bits. All arithmetic rounds to the precision of the left
//! operand unless stated otherwise; precision is fixed when the value is
//! created (normally from [`RunPrecision`]). Values convert losslessly to and
//! from `BigRational`, which is how exact integer data enters the float world
//! and how decimal output leaves it.

use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, RoundingMode, Sign};
use num_bigint::{BigInt, BigUint, Sign as IntSign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Minimum precision accepted anywhere; below this the saddle residual
/// certificates become meaningless.
pub const MIN_PRECISION_BITS: usize = 64;

/// Default working precision.
pub const DEFAULT_PRECISION_BITS: usize = 128;

const RM: RoundingMode = RoundingMode::ToEven;

thread_local! {
    static CONSTS: std::cell::RefCell<Consts> =
        std::cell::RefCell::new(Consts::new().expect("constants cache"));
}

fn with_consts<T>(f: impl FnOnce(&mut Consts) -> T) -> T {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Working precision for a run, clamped to [`MIN_PRECISION_BITS`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunPrecision {
    bits: usize,
}

impl Default for RunPrecision {
    fn default() -> Self {
        Self::bits(DEFAULT_PRECISION_BITS)
    }
}

impl RunPrecision {
    pub fn bits(bits: usize) -> Self {
        Self {
            bits: bits.max(MIN_PRECISION_BITS),
        }
    }

    pub fn get(&self) -> usize {
        self.bits
    }

    /// Significant decimal digits representable at this precision
    /// (bits / 3.32, rounded down).
    pub fn decimal_digits(&self) -> usize {
        ((self.bits as f64) / 3.32).floor() as usize
    }

    pub fn zero(&self) -> Real {
        Real {
            v: BigFloat::from_u8(0, self.bits),
            bits: self.bits,
        }
    }

    pub fn one(&self) -> Real {
        self.from_u64(1)
    }

    pub fn from_u64(&self, x: u64) -> Real {
        Real {
            v: BigFloat::from_u64(x, self.bits),
            bits: self.bits,
        }
    }

    pub fn from_i64(&self, x: i64) -> Real {
        Real {
            v: BigFloat::from_i64(x, self.bits),
            bits: self.bits,
        }
    }

    pub fn from_f64(&self, x: f64) -> Real {
        Real {
            v: BigFloat::from_f64(x, self.bits),
            bits: self.bits,
        }
    }

    /// Exact conversion when the integer fits in the precision; otherwise
    /// rounded to `bits`.
    pub fn from_biguint(&self, x: &BigUint) -> Real {
        if x.is_zero() {
            return self.zero();
        }
        let nbits = x.bits() as usize;
        // Normalize so the top mantissa bit is set, then hand the words over.
        let words = nbits.div_ceil(64).max(self.bits.div_ceil(64));
        let shift = words * 64 - nbits;
        let shifted = x << shift;
        let mut digits = shifted.to_u64_digits();
        digits.resize(words, 0);
        let v = BigFloat::from_words(&digits, Sign::Pos, nbits as i32);
        Real {
            v: if nbits > self.bits {
                let mut r = v;
                r.set_precision(self.bits, RM).expect("set precision");
                r
            } else {
                v
            },
            bits: self.bits,
        }
    }

    pub fn from_bigint(&self, x: &BigInt) -> Real {
        let r = self.from_biguint(x.magnitude());
        if x.sign() == IntSign::Minus {
            r.neg()
        } else {
            r
        }
    }

    pub fn from_rational(&self, x: &BigRational) -> Real {
        let guard = RunPrecision::bits(self.bits + 32);
        let num = guard.from_bigint(x.numer());
        let den = guard.from_bigint(x.denom());
        num.div(&den).with_bits(self.bits)
    }

    pub fn pi(&self) -> Real {
        Real {
            v: with_consts(|cc| cc.pi(self.bits, RM)),
            bits: self.bits,
        }
    }
}

/// An immutable high-precision real number.
#[derive(Debug, Clone)]
pub struct Real {
    v: BigFloat,
    bits: usize,
}

impl Real {
    pub fn precision(&self) -> RunPrecision {
        RunPrecision::bits(self.bits)
    }

    fn wrap(&self, v: BigFloat) -> Real {
        Real { v, bits: self.bits }
    }

    pub fn with_bits(&self, bits: usize) -> Real {
        let mut v = self.v.clone();
        v.set_precision(bits.max(MIN_PRECISION_BITS), RM)
            .expect("set precision");
        Real {
            v,
            bits: bits.max(MIN_PRECISION_BITS),
        }
    }

    pub fn add(&self, rhs: &Real) -> Real {
        self.wrap(self.v.add(&rhs.v, self.bits, RM))
    }

    pub fn sub(&self, rhs: &Real) -> Real {
        self.wrap(self.v.sub(&rhs.v, self.bits, RM))
    }

    pub fn mul(&self, rhs: &Real) -> Real {
        self.wrap(self.v.mul(&rhs.v, self.bits, RM))
    }

    pub fn div(&self, rhs: &Real) -> Real {
        self.wrap(self.v.div(&rhs.v, self.bits, RM))
    }

    pub fn neg(&self) -> Real {
        self.wrap(self.v.neg())
    }

    pub fn abs(&self) -> Real {
        self.wrap(self.v.abs())
    }

    pub fn recip(&self) -> Real {
        self.wrap(self.v.reciprocal(self.bits, RM))
    }

    pub fn sqrt(&self) -> Real {
        self.wrap(self.v.sqrt(self.bits, RM))
    }

    pub fn exp(&self) -> Real {
        self.wrap(with_consts(|cc| self.v.exp(self.bits, RM, cc)))
    }

    pub fn ln(&self) -> Real {
        self.wrap(with_consts(|cc| self.v.ln(self.bits, RM, cc)))
    }

    pub fn sin(&self) -> Real {
        self.wrap(with_consts(|cc| self.v.sin(self.bits, RM, cc)))
    }

    pub fn cos(&self) -> Real {
        self.wrap(with_consts(|cc| self.v.cos(self.bits, RM, cc)))
    }

    pub fn powi(&self, n: i64) -> Real {
        if n >= 0 {
            self.wrap(self.v.powi(n as usize, self.bits, RM))
        } else {
            self.wrap(
                self.v
                    .powi((-n) as usize, self.bits + 32, RM)
                    .reciprocal(self.bits, RM),
            )
        }
    }

    /// `self^(p/q)` for positive base, via exp(exponent * ln(self)).
    pub fn pow_rational(&self, exponent: &BigRational) -> Real {
        if exponent.is_zero() {
            return self.precision().one();
        }
        if exponent.is_integer() {
            if let Some(n) = to_i64(exponent.numer()) {
                return self.powi(n);
            }
        }
        let guard = self.with_bits(self.bits + 32);
        let e = RunPrecision::bits(self.bits + 32).from_rational(exponent);
        guard.ln().mul(&e).exp().with_bits(self.bits)
    }

    pub fn is_zero(&self) -> bool {
        self.v.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.v.is_negative() && !self.v.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.v.is_positive() && !self.v.is_zero()
    }

    pub fn signum(&self) -> i32 {
        if self.is_zero() {
            0
        } else if self.is_negative() {
            -1
        } else {
            1
        }
    }

    pub fn cmp(&self, rhs: &Real) -> Ordering {
        self.v.partial_cmp(&rhs.v).unwrap_or(Ordering::Equal)
    }

    pub fn min(&self, rhs: &Real) -> Real {
        if self.cmp(rhs) == Ordering::Greater {
            rhs.clone()
        } else {
            self.clone()
        }
    }

    pub fn max(&self, rhs: &Real) -> Real {
        if self.cmp(rhs) == Ordering::Less {
            rhs.clone()
        } else {
            self.clone()
        }
    }

    /// Exact rational value of this float (mantissa * 2^(exp - len)).
    pub fn to_rational(&self) -> Option<BigRational> {
        if self.v.is_nan() || self.v.is_inf() {
            return None;
        }
        if self.v.is_zero() {
            return Some(BigRational::zero());
        }
        let (words, _mlen, sign, exp, _inexact) = self.v.as_raw_parts()?;
        let mantissa = BigUint::from_slice(
            &words
                .iter()
                .flat_map(|w| [*w as u32, (*w >> 32) as u32])
                .collect::<Vec<_>>(),
        );
        let mut num = BigInt::from(mantissa);
        if sign == Sign::Neg {
            num = -num;
        }
        let shift = exp as i64 - (words.len() as i64) * 64;
        Some(if shift >= 0 {
            BigRational::from(num << shift)
        } else {
            BigRational::new(num, BigInt::one() << (-shift))
        })
    }

    pub fn to_f64(&self) -> f64 {
        if self.v.is_nan() {
            return f64::NAN;
        }
        if self.v.is_inf() {
            return if self.v.is_negative() {
                f64::NEG_INFINITY
            } else {
                f64::INFINITY
            };
        }
        if self.v.is_zero() {
            return 0.0;
        }
        let (words, _, sign, exp, _) = self.v.as_raw_parts().expect("finite");
        let top = words.last().copied().unwrap_or(0);
        let mag = (top as f64) / (u64::MAX as f64 + 1.0) * 2f64.powi(exp);
        if sign == Sign::Neg {
            -mag
        } else {
            mag
        }
    }

    /// Fixed-point decimal rendering with `digits` fractional digits.
    ///
    /// `round_up` rounds toward +infinity (used when the value is an upper
    /// bound that must stay an upper bound in print); otherwise rounds toward
    /// -infinity.
    pub fn to_decimal(&self, digits: usize, round_up: bool) -> String {
        let Some(q) = self.to_rational() else {
            return format!("{}", self.v);
        };
        rational_to_decimal(&q, digits, round_up)
    }
}

/// Decimal rendering of an exact rational with directed rounding.
pub fn rational_to_decimal(q: &BigRational, digits: usize, round_up: bool) -> String {
    let scale = BigInt::from(10u32).pow(digits as u32);
    let scaled = q * BigRational::from(scale.clone());
    let int = if round_up {
        scaled.ceil()
    } else {
        scaled.floor()
    }
    .to_integer();
    let negative = int.is_negative();
    let mag = int.magnitude().to_string();
    let mut s = String::new();
    if negative {
        s.push('-');
    }
    if digits == 0 {
        s.push_str(&mag);
        return s;
    }
    if mag.len() > digits {
        s.push_str(&mag[..mag.len() - digits]);
        s.push('.');
        s.push_str(&mag[mag.len() - digits..]);
    } else {
        s.push_str("0.");
        for _ in 0..digits - mag.len() {
            s.push('0');
        }
        s.push_str(&mag);
    }
    s
}

fn to_i64(x: &BigInt) -> Option<i64> {
    i64::try_from(x).ok()
}

impl fmt::Display for Real {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;

    fn p() -> RunPrecision {
        RunPrecision::bits(128)
    }

    #[test]
    fn biguint_roundtrip_is_exact() {
        let x = BigUint::parse_bytes(b"123456789012345678901234567890123456789", 10).unwrap();
        let r = RunPrecision::bits(256).from_biguint(&x);
        let q = r.to_rational().unwrap();
        assert_eq!(q, BigRational::from(BigInt::from(x)));
    }

    #[test]
    fn rational_conversion_roundtrip() {
        let q = BigRational::new(BigInt::from(355), BigInt::from(113));
        let r = p().from_rational(&q);
        let back = r.to_rational().unwrap();
        let err = (&back - &q).abs();
        assert!(err < BigRational::new(BigInt::one(), BigInt::one() << 100));
    }

    #[test]
    fn sqrt_squares_back() {
        let two = p().from_u64(2);
        let s = two.sqrt();
        let diff = s.mul(&s).sub(&two).abs();
        assert!(diff.to_f64() < 1e-35);
    }

    #[test]
    fn exp_ln_inverse() {
        let x = p().from_f64(1.7);
        let y = x.ln().exp();
        assert!(y.sub(&x).abs().to_f64() < 1e-35);
    }

    #[test]
    fn pow_rational_cube_root() {
        let eight = p().from_u64(8);
        let third = BigRational::new(BigInt::one(), BigInt::from(3));
        let two = eight.pow_rational(&third);
        assert!(two.sub(&p().from_u64(2)).abs().to_f64() < 1e-35);
    }

    #[test]
    fn decimal_rendering_directed() {
        let q = BigRational::from_f64(0.15625).unwrap(); // exact in binary
        assert_eq!(rational_to_decimal(&q, 3, false), "0.156");
        assert_eq!(rational_to_decimal(&q, 3, true), "0.157");
        let t = BigRational::new(BigInt::from(1), BigInt::from(3));
        assert_eq!(rational_to_decimal(&t, 4, false), "0.3333");
        assert_eq!(rational_to_decimal(&t, 4, true), "0.3334");
    }

    #[test]
    fn to_f64_matches() {
        let x = p().from_f64(2.755105);
        assert!((x.to_f64() - 2.755105).abs() < 1e-12);
        let neg = p().from_f64(-0.1810);
        assert!((neg.to_f64() + 0.1810).abs() < 1e-12);
    }

    #[test]
    fn pi_value() {
        let pi = p().pi();
        assert!((pi.to_f64() - std::f64::consts::PI).abs() < 1e-15);
    }
}
