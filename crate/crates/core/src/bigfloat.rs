//! Binary floating point with a configurable mantissa width, used only by
//! the numeric contour oracle. Values are `mant * 2^exp` with the mantissa
//! normalized to exactly `prec` bits; every operation rounds to nearest,
//! ties to even.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{BigRational, GaussianRational};

pub const MIN_PRECISION: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigFloat {
    mant: BigInt,
    exp: i64,
    prec: u32,
}

fn round_mag(mag: BigUint, exp: i64, sticky: bool, prec: u32) -> (BigUint, i64) {
    let bits = mag.bits();
    if bits <= prec as u64 {
        return (mag, exp);
    }
    let shift = bits - prec as u64;
    let kept = &mag >> shift;
    let half_bit = (&mag >> (shift - 1)) & BigUint::one();
    let below_half = {
        let mask = (BigUint::one() << (shift - 1)) - BigUint::one();
        !(&mag & mask).is_zero() || sticky
    };
    let round_up = if half_bit.is_zero() {
        false
    } else if below_half {
        true
    } else {
        kept.is_odd()
    };
    let mut kept = kept;
    let mut exp = exp + shift as i64;
    if round_up {
        kept += 1u32;
        if kept.bits() > prec as u64 {
            kept >>= 1;
            exp += 1;
        }
    }
    (kept, exp)
}

impl BigFloat {
    pub fn zero(prec: u32) -> Self {
        Self { mant: BigInt::zero(), exp: 0, prec }
    }

    pub fn precision(&self) -> u32 {
        self.prec
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    /// Round `mant * 2^exp` (plus a sticky bit for any discarded tail).
    fn from_parts(mant: BigInt, exp: i64, sticky: bool, prec: u32) -> Self {
        if mant.is_zero() {
            return Self::zero(prec);
        }
        let (sign, mag) = mant.into_parts();
        let (mag, mut exp) = round_mag(mag, exp, sticky, prec);
        let mut mag = mag;
        let bits = mag.bits();
        if bits < prec as u64 {
            let up = prec as u64 - bits;
            mag <<= up;
            exp -= up as i64;
        }
        Self { mant: BigInt::from_biguint(sign, mag), exp, prec }
    }

    pub fn from_int(v: &BigInt, prec: u32) -> Self {
        Self::from_parts(v.clone(), 0, false, prec)
    }

    pub fn from_i64(v: i64, prec: u32) -> Self {
        Self::from_int(&BigInt::from(v), prec)
    }

    /// Correctly rounded conversion of an exact rational.
    pub fn from_rational(q: &BigRational, prec: u32) -> Self {
        if q.is_zero() {
            return Self::zero(prec);
        }
        let num = q.numer();
        let den = q.denom();
        let shift = prec as i64 + 2 + den.bits() as i64 - num.magnitude().bits() as i64;
        let shift = shift.max(0);
        let scaled = num << shift as usize;
        let (quo, rem) = scaled.div_rem(den);
        Self::from_parts(quo, -shift, !rem.is_zero(), prec)
    }

    /// Exact value as a rational (every binary float is one).
    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(&self.mant << self.exp as usize)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as usize)
        }
    }

    pub fn with_precision(&self, prec: u32) -> Self {
        Self::from_parts(self.mant.clone(), self.exp, false, prec)
    }

    pub fn neg(&self) -> Self {
        Self { mant: -self.mant.clone(), exp: self.exp, prec: self.prec }
    }

    pub fn abs(&self) -> Self {
        Self { mant: self.mant.abs(), exp: self.exp, prec: self.prec }
    }

    /// Multiply by 2^k exactly.
    pub fn mul_pow2(&self, k: i64) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self { mant: self.mant.clone(), exp: self.exp + k, prec: self.prec }
    }

    /// Position of the most significant bit, as the exponent of 2 such that
    /// 2^e ≤ |x| < 2^{e+1}.
    fn magnitude_exp(&self) -> i64 {
        self.exp + self.mant.bits() as i64 - 1
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let prec = self.prec.max(rhs.prec);
        if self.is_zero() {
            return rhs.with_precision(prec);
        }
        if rhs.is_zero() {
            return self.with_precision(prec);
        }
        let gap = self.magnitude_exp() - rhs.magnitude_exp();
        let limit = prec as i64 + 4;
        if gap > limit {
            // rhs is below one unit at 2^(exp-4): it only moves the sticky bit
            let mut mag = self.mant.magnitude() << 4usize;
            if rhs.mant.sign() != self.mant.sign() {
                mag -= 1u32;
            }
            let m = BigInt::from_biguint(self.mant.sign(), mag);
            return Self::from_parts(m, self.exp - 4, true, prec);
        }
        if -gap > limit {
            return rhs.add(self);
        }
        let e = self.exp.min(rhs.exp);
        let a = &self.mant << (self.exp - e) as usize;
        let b = &rhs.mant << (rhs.exp - e) as usize;
        Self::from_parts(a + b, e, false, prec)
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let prec = self.prec.max(rhs.prec);
        Self::from_parts(&self.mant * &rhs.mant, self.exp + rhs.exp, false, prec)
    }

    pub fn div(&self, rhs: &Self) -> Option<Self> {
        if rhs.is_zero() {
            return None;
        }
        let prec = self.prec.max(rhs.prec);
        if self.is_zero() {
            return Some(Self::zero(prec));
        }
        let shift = prec as i64 + 2 + rhs.mant.bits() as i64 - self.mant.bits() as i64;
        let shift = shift.max(0);
        let num = &self.mant << shift as usize;
        let (q, r) = num.div_rem(&rhs.mant);
        Some(Self::from_parts(q, self.exp - rhs.exp - shift, !r.is_zero(), prec))
    }

    pub fn cmp_value(&self, rhs: &Self) -> Ordering {
        self.to_rational().cmp(&rhs.to_rational())
    }

    /// π correctly computed to `prec` bits (Machin's arctangent formula in
    /// fixed point with guard bits).
    pub fn pi(prec: u32) -> Self {
        let w = prec as usize + 32;
        let one = BigInt::one() << w;
        let atan_inv = |x: i64| -> BigInt {
            let x = BigInt::from(x);
            let x2 = &x * &x;
            let mut term = &one / &x;
            let mut sum = term.clone();
            let mut k = 1i64;
            while !term.is_zero() {
                term = &term / &x2;
                let t = &term / BigInt::from(2 * k + 1);
                if k % 2 == 1 {
                    sum -= t;
                } else {
                    sum += t;
                }
                k += 1;
            }
            sum
        };
        let pi_fixed = atan_inv(5) * 16 - atan_inv(239) * 4;
        Self::from_parts(pi_fixed, -(w as i64), true, prec)
    }

    /// (cos θ, sin θ) for θ = 2π·num/den, via Taylor series in fixed point.
    pub fn cos_sin_turn(num: i64, den: i64, prec: u32) -> (Self, Self) {
        let w = prec as usize + 48;
        let pi = Self::pi(prec + 48);
        let one = BigInt::one() << w;
        let pi_fixed = {
            let r = pi.to_rational() * BigRational::from_integer(one.clone());
            r.to_integer()
        };
        // reduce the turn fraction into [0, 1)
        let num = num.rem_euclid(den);
        let theta = (&pi_fixed * BigInt::from(2 * num)) / BigInt::from(den);
        let theta2 = (&theta * &theta) >> w;
        let mut cos = one.clone();
        let mut sin = theta.clone();
        let mut tc = one.clone();
        let mut ts = theta;
        let mut k = 1i64;
        loop {
            tc = -((&tc * &theta2) >> w) / BigInt::from((2 * k - 1) * (2 * k));
            ts = -((&ts * &theta2) >> w) / BigInt::from((2 * k) * (2 * k + 1));
            if tc.is_zero() && ts.is_zero() {
                break;
            }
            cos += &tc;
            sin += &ts;
            k += 1;
        }
        (
            Self::from_parts(cos, -(w as i64), true, prec),
            Self::from_parts(sin, -(w as i64), true, prec),
        )
    }

    /// Scientific decimal text with `digits` significant digits.
    pub fn to_decimal(&self, digits: usize) -> String {
        decimal_string(&self.to_rational(), digits)
    }
}

/// Decimal scientific notation of a rational, `digits` significant figures,
/// e.g. `-1.875000e0`.
pub fn decimal_string(q: &BigRational, digits: usize) -> String {
    if q.is_zero() {
        return "0".to_string();
    }
    let digits = digits.max(1);
    let neg = q.is_negative();
    let a = q.abs();
    // estimate floor(log10 |q|) from bit lengths, then correct
    let est = (a.numer().bits() as f64 - a.denom().bits() as f64) * std::f64::consts::LOG10_2;
    let mut e10 = est.floor() as i64;
    let ten = BigRational::from_integer(BigInt::from(10));
    let pow10 = |k: i64| -> BigRational {
        if k >= 0 {
            BigRational::from_integer(num_traits::pow(BigInt::from(10), k as usize))
        } else {
            BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), (-k) as usize))
        }
    };
    loop {
        let lo = pow10(e10);
        if a < lo {
            e10 -= 1;
            continue;
        }
        if a >= &lo * &ten {
            e10 += 1;
            continue;
        }
        break;
    }
    let scaled = &a * pow10(digits as i64 - 1 - e10);
    let mut m = scaled.round().to_integer();
    if m >= num_traits::pow(BigInt::from(10), digits) {
        m /= 10;
        e10 += 1;
    }
    let s = m.to_string();
    let (head, tail) = s.split_at(1);
    let sign = if neg { "-" } else { "" };
    if tail.is_empty() {
        format!("{sign}{head}e{e10}")
    } else {
        format!("{sign}{head}.{tail}e{e10}")
    }
}

impl fmt::Display for BigFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.prec as f64) * std::f64::consts::LOG10_2).floor() as usize;
        f.write_str(&self.to_decimal(digits.max(1)))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BigComplexFloat {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl BigComplexFloat {
    pub fn zero(prec: u32) -> Self {
        Self { re: BigFloat::zero(prec), im: BigFloat::zero(prec) }
    }

    pub fn new(re: BigFloat, im: BigFloat) -> Self {
        Self { re, im }
    }

    pub fn from_gaussian(z: &GaussianRational, prec: u32) -> Self {
        Self {
            re: BigFloat::from_rational(z.re(), prec),
            im: BigFloat::from_rational(z.im(), prec),
        }
    }

    pub fn to_gaussian(&self) -> GaussianRational {
        GaussianRational::new(self.re.to_rational(), self.im.to_rational())
    }

    pub fn precision(&self) -> u32 {
        self.re.prec.max(self.im.prec)
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self { re: self.re.add(&rhs.re), im: self.im.add(&rhs.im) }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self { re: self.re.sub(&rhs.re), im: self.im.sub(&rhs.im) }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self {
            re: self.re.mul(&rhs.re).sub(&self.im.mul(&rhs.im)),
            im: self.re.mul(&rhs.im).add(&self.im.mul(&rhs.re)),
        }
    }

    pub fn mul_pow2(&self, k: i64) -> Self {
        Self { re: self.re.mul_pow2(k), im: self.im.mul_pow2(k) }
    }

    pub fn norm_sqr(&self) -> BigFloat {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn inv(&self) -> Option<Self> {
        let d = self.norm_sqr();
        Some(Self { re: self.re.div(&d)?, im: self.im.neg().div(&d)? })
    }

    pub fn div(&self, rhs: &Self) -> Option<Self> {
        Some(self.mul(&rhs.inv()?))
    }

    /// |self − exact| / |exact|, or the absolute error when `exact` is zero,
    /// compared against `tol`. Evaluated exactly on the rational images.
    pub fn within(&self, exact: &GaussianRational, tol: &BigRational) -> bool {
        let diff = &self.to_gaussian() - exact;
        let err2 = diff.norm_sqr();
        let tol2 = tol * tol;
        if exact.is_zero() {
            err2 <= tol2
        } else {
            err2 <= tol2 * exact.norm_sqr()
        }
    }

    pub fn to_decimal(&self, digits: usize) -> String {
        let re = self.re.to_decimal(digits);
        let im = self.im.to_decimal(digits);
        if im.starts_with('-') {
            format!("{re}{im}i")
        } else {
            format!("{re}+{im}i")
        }
    }
}

impl fmt::Display for BigComplexFloat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let digits = ((self.precision() as f64) * std::f64::consts::LOG10_2).floor() as usize;
        f.write_str(&self.to_decimal(digits.max(1)))
    }
}

/// Relative tolerance 10^-k as an exact rational.
pub fn pow10_tolerance(k: u32) -> BigRational {
    BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(10), k as usize))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn rational_rounding_is_exact_for_dyadics() {
        let q = rat(-15, 8);
        let f = BigFloat::from_rational(&q, 64);
        assert_eq!(f.to_rational(), q);
    }

    #[test]
    fn third_rounds_to_nearest() {
        let q = rat(1, 3);
        let f = BigFloat::from_rational(&q, 64);
        let err = (f.to_rational() - &q).abs();
        // half an ulp at exponent -65
        assert!(err <= BigRational::new(BigInt::one(), BigInt::one() << 66usize));
    }

    #[test]
    fn ties_go_to_even() {
        // 2^64 + 1 needs 65 bits: tie between 2^64 and 2^64 + 2
        let v = (BigInt::one() << 64usize) + 1;
        let f = BigFloat::from_int(&v, 64);
        assert_eq!(f.to_rational(), BigRational::from_integer(BigInt::one() << 64usize));
        let v = (BigInt::one() << 64usize) + 3;
        let f = BigFloat::from_int(&v, 64);
        assert_eq!(f.to_rational(), BigRational::from_integer((BigInt::one() << 64usize) + 4));
    }

    #[test]
    fn pi_digits() {
        let p = BigFloat::pi(256);
        assert!(p.to_decimal(40).starts_with("3.141592653589793238462643383279502884197"));
    }

    #[test]
    fn quarter_turn() {
        let (c, s) = BigFloat::cos_sin_turn(1, 4, 128);
        assert!(c.abs().to_rational() < pow10_tolerance(35));
        assert!((s.to_rational() - rat(1, 1)).abs() < pow10_tolerance(35));
    }

    #[test]
    fn decimal_text() {
        assert_eq!(decimal_string(&rat(-15, 8), 4), "-1.875e0");
        assert_eq!(decimal_string(&rat(1, 8), 1), "1e-1");
        assert_eq!(decimal_string(&rat(999, 1), 2), "1.0e3");
    }

    #[test]
    fn complex_division() {
        let a = BigComplexFloat::from_gaussian(&GaussianRational::one(), 128);
        let b = BigComplexFloat::from_gaussian(&GaussianRational::from_ints(0, 2), 128);
        let q = a.div(&b).unwrap();
        assert!(q.within(&GaussianRational::new(rat(0, 1), rat(-1, 2)), &pow10_tolerance(35)));
    }
}
