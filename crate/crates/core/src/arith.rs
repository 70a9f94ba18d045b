//! The exact coefficient field ℚ(i) and generalized combinatorial functions.
//!
//! Rationals are `num_rational::BigRational`, which already keeps the
//! canonical form this crate relies on (reduced, positive denominator,
//! zero as `0/1`). [`GaussianRational`] pairs two of them.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use num_rational::BigRational;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("division by zero")]
    DivisionByZero,
}

/// Build a rational from machine integers.
pub fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

pub fn rat_int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

/// Exact complex number `re + im·i` with rational parts.
///
/// Both parts are canonical rationals, so derived equality and hashing
/// coincide with mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct GaussianRational {
    re: BigRational,
    im: BigRational,
}

impl GaussianRational {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Self { re, im }
    }

    pub fn from_ints(re: i64, im: i64) -> Self {
        Self::new(rat_int(re), rat_int(im))
    }

    pub fn real(re: BigRational) -> Self {
        Self::new(re, BigRational::zero())
    }

    pub fn from_ratio(num: i64, den: i64) -> Self {
        Self::real(rat(num, den))
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0)
    }

    pub fn i() -> Self {
        Self::from_ints(0, 1)
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn is_imaginary(&self) -> bool {
        self.re.is_zero() && !self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), -self.im.clone())
    }

    /// |z|².
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        Self::new(&self.re * k, &self.im * k)
    }

    pub fn inv(&self) -> Result<Self, ArithError> {
        if self.is_zero() {
            return Err(ArithError::DivisionByZero);
        }
        let d = self.norm_sqr();
        Ok(Self::new(&self.re / &d, -(&self.im / &d)))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self, ArithError> {
        Ok(self * &rhs.inv()?)
    }

    /// Integer power; negative exponents go through [`Self::inv`].
    pub fn powi(&self, exp: i64) -> Result<Self, ArithError> {
        let base = if exp < 0 { self.inv()? } else { self.clone() };
        let mut e = exp.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &sq;
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc)
    }

    /// Powers of `i` reduce mod 4 and never fail.
    pub fn i_pow(exp: i64) -> Self {
        match exp.rem_euclid(4) {
            0 => Self::from_ints(1, 0),
            1 => Self::from_ints(0, 1),
            2 => Self::from_ints(-1, 0),
            _ => Self::from_ints(0, -1),
        }
    }

    /// Least common denominator of both parts.
    pub fn common_denominator(&self) -> BigInt {
        self.re.denom().lcm(self.im.denom())
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }
}

impl From<i64> for GaussianRational {
    fn from(v: i64) -> Self {
        Self::from_ints(v, 0)
    }
}

impl From<BigRational> for GaussianRational {
    fn from(v: BigRational) -> Self {
        Self::real(v)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &GaussianRational) -> GaussianRational {
                (&self).$method(rhs)
            }
        }
        impl $trait<GaussianRational> for &GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                self.$method(&rhs)
            }
        }
    };
}

impl Add<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re, -self.im)
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational::new(-self.re.clone(), -self.im.clone())
    }
}

impl AddAssign<&GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &GaussianRational) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &GaussianRational) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&GaussianRational> for GaussianRational {
    fn mul_assign(&mut self, rhs: &GaussianRational) {
        *self = &*self * rhs;
    }
}

impl std::iter::Sum for GaussianRational {
    fn sum<I: Iterator<Item = GaussianRational>>(iter: I) -> Self {
        iter.fold(GaussianRational::zero(), |acc, x| acc + x)
    }
}

/// Field operation selector, mirroring the four-way arithmetic entry point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FieldOp {
    Add,
    Sub,
    Mul,
    Div,
}

pub fn gaussian_arith(
    a: &GaussianRational,
    b: &GaussianRational,
    op: FieldOp,
) -> Result<GaussianRational, ArithError> {
    match op {
        FieldOp::Add => Ok(a + b),
        FieldOp::Sub => Ok(a - b),
        FieldOp::Mul => Ok(a * b),
        FieldOp::Div => a.checked_div(b),
    }
}

fn fmt_rational_factor(r: &BigRational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.is_integer() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

/// Writes `b·i` for a nonzero imaginary coefficient, e.g. `i`, `-i/8`, `3*i/4`.
fn fmt_imag(b: &BigRational, leading: bool, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let neg = b.is_negative();
    let mag = b.abs();
    if neg {
        f.write_str("-")?;
    } else if !leading {
        f.write_str("+")?;
    }
    let num = mag.numer();
    if num.is_one() {
        f.write_str("i")?;
    } else {
        write!(f, "{num}*i")?;
    }
    if !mag.denom().is_one() {
        write!(f, "/{}", mag.denom())?;
    }
    Ok(())
}

/// Canonical text, re-readable by the expression parser: `-15/8`, `-i/8`,
/// `1/2+3*i/4`.
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (true, true) => f.write_str("0"),
            (false, true) => fmt_rational_factor(&self.re, f),
            (true, false) => fmt_imag(&self.im, true, f),
            (false, false) => {
                fmt_rational_factor(&self.re, f)?;
                fmt_imag(&self.im, false, f)
            }
        }
    }
}

impl GaussianRational {
    /// True when the canonical text is a single signed factor (no `+`/`-`
    /// between parts), so it can be embedded in a product without brackets.
    pub fn is_monomial(&self) -> bool {
        self.re.is_zero() || self.im.is_zero()
    }

    /// LaTeX rendering: `-\frac{15}{8}`, `\frac{3}{4}i`.
    pub fn to_latex(&self) -> String {
        fn frac(r: &BigRational) -> String {
            if r.is_integer() {
                r.numer().to_string()
            } else {
                format!("\\frac{{{}}}{{{}}}", r.numer(), r.denom())
            }
        }
        fn part(r: &BigRational, unit: &str, leading: bool) -> String {
            let sign = if r.is_negative() {
                "-"
            } else if leading {
                ""
            } else {
                "+"
            };
            let mag = r.abs();
            let body = if unit.is_empty() {
                frac(&mag)
            } else if mag.is_one() {
                unit.to_string()
            } else {
                format!("{}{}", frac(&mag), unit)
            };
            format!("{sign}{body}")
        }
        match (self.re.is_zero(), self.im.is_zero()) {
            (true, true) => "0".to_string(),
            (false, true) => part(&self.re, "", true),
            (true, false) => part(&self.im, "i", true),
            (false, false) => format!("{}{}", part(&self.re, "", true), part(&self.im, "i", false)),
        }
    }
}

/// Falling factorial N(N−1)…(N−K+1), valid for negative `N`.
pub fn falling_factorial(n: i64, k: u64) -> BigRational {
    let mut acc = BigInt::one();
    for j in 0..k as i64 {
        acc *= BigInt::from(n - j);
    }
    BigRational::from_integer(acc)
}

pub fn factorial(k: u64) -> BigInt {
    (1..=k).fold(BigInt::one(), |acc, j| acc * BigInt::from(j))
}

/// Generalized binomial N(N−1)…(N−K+1)/K!. Negative `N` is read through
/// the falling-factorial product, never through factorial quotients.
pub fn binomial_general(n: i64, k: u64) -> BigRational {
    falling_factorial(n, k) / BigRational::from_integer(factorial(k))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gr(re: (i64, i64), im: (i64, i64)) -> GaussianRational {
        GaussianRational::new(rat(re.0, re.1), rat(im.0, im.1))
    }

    #[test]
    fn binomial_examples() {
        assert_eq!(binomial_general(5, 2), rat_int(10));
        assert_eq!(binomial_general(-7, 0), rat_int(1));
        assert_eq!(binomial_general(-2, 2), rat_int(3));
    }

    #[test]
    fn falling_factorial_examples() {
        assert_eq!(falling_factorial(3, 2), rat_int(6));
        assert_eq!(falling_factorial(-11, 0), rat_int(1));
        assert_eq!(falling_factorial(-2, 4), rat_int(120));
    }

    #[test]
    fn field_examples() {
        let a = GaussianRational::from_ints(1, 1);
        let b = GaussianRational::from_ints(1, -1);
        assert_eq!(&a * &b, GaussianRational::from(2));

        let two_i = GaussianRational::from_ints(0, 2);
        let q = gaussian_arith(&GaussianRational::one(), &two_i, FieldOp::Div).unwrap();
        assert_eq!(q, gr((0, 1), (-1, 2)));

        let mut acc = GaussianRational::one();
        for _ in 0..6 {
            acc = acc.checked_div(&two_i).unwrap();
        }
        assert_eq!(acc, GaussianRational::from_ratio(-1, 64));
        assert_eq!(two_i.powi(-6).unwrap(), acc);
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let r = gaussian_arith(&GaussianRational::one(), &GaussianRational::zero(), FieldOp::Div);
        assert_eq!(r, Err(ArithError::DivisionByZero));
        assert!(GaussianRational::zero().powi(-1).is_err());
    }

    #[test]
    fn display_forms() {
        assert_eq!(GaussianRational::from_ratio(-15, 8).to_string(), "-15/8");
        assert_eq!(gr((0, 1), (-1, 8)).to_string(), "-i/8");
        assert_eq!(gr((0, 1), (3, 4)).to_string(), "3*i/4");
        assert_eq!(gr((1, 2), (-3, 4)).to_string(), "1/2-3*i/4");
        assert_eq!(GaussianRational::zero().to_string(), "0");
        assert_eq!(gr((0, 1), (3, 4)).to_latex(), "\\frac{3}{4}i");
    }

    #[test]
    fn i_powers_cycle() {
        for e in -9..9 {
            assert_eq!(GaussianRational::i_pow(e), GaussianRational::i().powi(e).unwrap());
        }
    }
}
