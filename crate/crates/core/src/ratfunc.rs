//! Rational functions of ξ_n with factored denominators.
//!
//! A value is `scale · num(ξ) / Π (ξ − root)^mult` with `num` monic and
//! coprime to every listed root, and the roots sorted and distinct. That
//! makes derived equality an exact test of mathematical equality.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::arith::{binomial_general, factorial, ArithError, BigRational, GaussianRational};
use crate::bigfloat::BigComplexFloat;
use crate::poly::PolyXi;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RatFuncError {
    #[error("unsupported pole location {0}; only poles at +i and -i are handled")]
    UnsupportedPoleLocation(String),
    #[error("integrand does not decay fast enough for a real-line integral")]
    NonDecayingIntegrand,
    #[error("pole at evaluation point {0}")]
    PoleAtEvaluationPoint(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid quadrature parameters: {0}")]
    InvalidQuadrature(String),
}

impl From<ArithError> for RatFuncError {
    fn from(_: ArithError) -> Self {
        RatFuncError::DivisionByZero
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RatFuncXi {
    scale: GaussianRational,
    num: PolyXi,
    poles: Vec<(GaussianRational, u32)>,
}

impl Default for RatFuncXi {
    fn default() -> Self {
        Self::zero()
    }
}

fn is_plus_minus_i(r: &GaussianRational) -> bool {
    r.re().numer().sign() == num_bigint::Sign::NoSign
        && r.im().is_integer()
        && (r.im().numer() == &1.into() || r.im().numer() == &(-1).into())
}

fn root_factor_text(root: &GaussianRational) -> String {
    if root == &GaussianRational::i() {
        "xi-i".to_string()
    } else if root == &-GaussianRational::i() {
        "xi+i".to_string()
    } else if root.is_zero() {
        "xi".to_string()
    } else {
        format!("xi-({root})")
    }
}

impl RatFuncXi {
    pub fn zero() -> Self {
        Self { scale: GaussianRational::zero(), num: PolyXi::zero(), poles: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::from_poly(PolyXi::constant(c))
    }

    pub fn xi() -> Self {
        Self::from_poly(PolyXi::xi())
    }

    pub fn from_poly(p: PolyXi) -> Self {
        Self::from_parts(GaussianRational::one(), p, Vec::new())
    }

    /// 1/(ξ − root)^m.
    pub fn pole_power(root: GaussianRational, m: u32) -> Self {
        Self::from_parts(GaussianRational::one(), PolyXi::one(), vec![(root, m)])
    }

    /// (1 + ξ²)^k for any integer k.
    pub fn one_plus_xi2_pow(k: i64) -> Self {
        let m = k.unsigned_abs() as u32;
        if k >= 0 {
            Self::from_poly(PolyXi::from_ints(&[1, 0, 1]).pow(m))
        } else {
            Self::from_parts(
                GaussianRational::one(),
                PolyXi::one(),
                vec![(GaussianRational::i(), m), (-GaussianRational::i(), m)],
            )
        }
    }

    /// Canonicalize `scale · num / Π(ξ − r)^m`: merge repeated roots, cancel
    /// common factors, make the numerator monic.
    pub fn from_parts(scale: GaussianRational, num: PolyXi, poles: Vec<(GaussianRational, u32)>) -> Self {
        let mut num = num.scale(&scale);
        if num.is_zero() {
            return Self::zero();
        }
        let mut merged: BTreeMap<GaussianRational, u32> = BTreeMap::new();
        for (r, m) in poles {
            if m > 0 {
                *merged.entry(r).or_insert(0) += m;
            }
        }
        let mut out = Vec::with_capacity(merged.len());
        for (r, mut m) in merged {
            while m > 0 {
                let (q, rem) = num.div_linear(&r);
                if !rem.is_zero() {
                    break;
                }
                num = q;
                m -= 1;
            }
            if m > 0 {
                out.push((r, m));
            }
        }
        let (lc, monic) = num.monic();
        Self { scale: lc, num: monic, poles: out }
    }

    pub fn scale(&self) -> &GaussianRational {
        &self.scale
    }

    pub fn monic_numerator(&self) -> &PolyXi {
        &self.num
    }

    /// scale · num, the full numerator polynomial.
    pub fn numerator(&self) -> PolyXi {
        self.num.scale(&self.scale)
    }

    pub fn poles(&self) -> &[(GaussianRational, u32)] {
        &self.poles
    }

    pub fn multiplicity_at(&self, root: &GaussianRational) -> u32 {
        self.poles.iter().find(|(r, _)| r == root).map(|(_, m)| *m).unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.scale.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.poles.is_empty()
    }

    /// Some(c) when the function is the constant c.
    pub fn as_constant(&self) -> Option<GaussianRational> {
        if self.is_zero() {
            return Some(GaussianRational::zero());
        }
        (self.poles.is_empty() && self.num.is_constant()).then(|| self.scale.clone())
    }

    pub fn total_pole_order(&self) -> u32 {
        self.poles.iter().map(|(_, m)| m).sum()
    }

    /// deg(num) − Σ multiplicities; the function decays at ∞ when negative.
    pub fn degree_at_infinity(&self) -> Option<i64> {
        self.num.degree().map(|d| d as i64 - self.total_pole_order() as i64)
    }

    pub fn poles_only_at_pm_i(&self) -> Result<(), RatFuncError> {
        match self.poles.iter().find(|(r, _)| !is_plus_minus_i(r)) {
            Some((r, _)) => Err(RatFuncError::UnsupportedPoleLocation(r.to_string())),
            None => Ok(()),
        }
    }

    /// Expanded denominator polynomial Π (ξ − r)^m.
    fn denominator_poly(&self) -> PolyXi {
        self.poles
            .iter()
            .fold(PolyXi::one(), |acc, (r, m)| acc.mul(&PolyXi::linear(r).pow(*m)))
    }

    pub fn neg(&self) -> Self {
        Self { scale: -&self.scale, num: self.num.clone(), poles: self.poles.clone() }
    }

    pub fn scale_by(&self, c: &GaussianRational) -> Self {
        if c.is_zero() || self.is_zero() {
            return Self::zero();
        }
        Self { scale: &self.scale * c, num: self.num.clone(), poles: self.poles.clone() }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        let mut lcm: BTreeMap<GaussianRational, u32> = BTreeMap::new();
        for (r, m) in self.poles.iter().chain(rhs.poles.iter()) {
            let e = lcm.entry(r.clone()).or_insert(0);
            *e = (*e).max(*m);
        }
        let lift = |f: &Self| -> PolyXi {
            let mut p = f.numerator();
            for (r, m) in &lcm {
                let have = f.multiplicity_at(r);
                if *m > have {
                    p = p.mul(&PolyXi::linear(r).pow(m - have));
                }
            }
            p
        };
        let num = lift(self).add(&lift(rhs));
        Self::from_parts(GaussianRational::one(), num, lcm.into_iter().collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut poles = self.poles.clone();
        poles.extend(rhs.poles.iter().cloned());
        Self::from_parts(&self.scale * &rhs.scale, self.num.mul(&rhs.num), poles)
    }

    /// Reciprocal. The numerator must split over {±i}, since only those
    /// roots may become poles.
    pub fn inv(&self) -> Result<Self, RatFuncError> {
        if self.is_zero() {
            return Err(RatFuncError::DivisionByZero);
        }
        let mut rest = self.num.clone();
        let mut new_poles = Vec::new();
        for r in [GaussianRational::i(), -GaussianRational::i()] {
            let mut m = 0;
            loop {
                let (q, rem) = rest.div_linear(&r);
                if !rem.is_zero() || rest.is_constant() {
                    break;
                }
                rest = q;
                m += 1;
            }
            if m > 0 {
                new_poles.push((r, m));
            }
        }
        if !rest.is_constant() {
            return Err(RatFuncError::UnsupportedPoleLocation(format!("roots of {rest}")));
        }
        let inv_scale = (&self.scale * &rest.leading()).inv()?;
        Ok(Self::from_parts(inv_scale, self.denominator_poly(), new_poles))
    }

    pub fn div(&self, rhs: &Self) -> Result<Self, RatFuncError> {
        Ok(self.mul(&rhs.inv()?))
    }

    pub fn powi(&self, e: i64) -> Result<Self, RatFuncError> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Self::one();
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }

    fn derivative_once(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        // (N/Π)' = (N'·L − N·Σ m_k L/(ξ − r_k)) / (Π·L), L = Π (ξ − r_k)
        let lin: Vec<PolyXi> = self.poles.iter().map(|(r, _)| PolyXi::linear(r)).collect();
        let l = lin.iter().fold(PolyXi::one(), |a, b| a.mul(b));
        let mut num = self.num.derivative().mul(&l);
        for (k, (_, m)) in self.poles.iter().enumerate() {
            let others = lin
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != k)
                .fold(PolyXi::one(), |a, (_, b)| a.mul(b));
            num = num.sub(&self.num.mul(&others).scale(&GaussianRational::from(*m as i64)));
        }
        let poles = self.poles.iter().map(|(r, m)| (r.clone(), m + 1)).collect();
        Self::from_parts(self.scale.clone(), num, poles)
    }

    /// Exact m-th derivative in ξ_n.
    pub fn differentiate(&self, m: u32) -> Self {
        (0..m).fold(self.clone(), |f, _| f.derivative_once())
    }

    pub fn eval(&self, x: &GaussianRational) -> Result<GaussianRational, RatFuncError> {
        let mut den = GaussianRational::one();
        for (r, m) in &self.poles {
            let d = x - r;
            if d.is_zero() {
                return Err(RatFuncError::PoleAtEvaluationPoint(x.to_string()));
            }
            den *= &d.powi(*m as i64)?;
        }
        Ok(&(&self.scale * &self.num.eval(x)) * &den.inv()?)
    }

    pub fn eval_float(&self, x: &BigComplexFloat) -> Option<BigComplexFloat> {
        self.float_evaluator(x.precision()).eval(x)
    }

    /// Coefficients and roots converted once, for repeated evaluation.
    pub fn float_evaluator(&self, prec: u32) -> FloatEvaluator {
        let conv = |c: &GaussianRational| BigComplexFloat::from_gaussian(c, prec);
        FloatEvaluator {
            prec,
            num: self.num.coeffs().iter().map(|c| conv(&(&self.scale * c))).collect(),
            poles: self.poles.iter().map(|(r, m)| (conv(r), *m)).collect(),
        }
    }

    /// Taylor coefficients c_0..c_order of f(point + t).
    pub fn taylor_at(&self, point: &GaussianRational, order: usize) -> Result<Vec<GaussianRational>, RatFuncError> {
        let len = order + 1;
        let mut series: Vec<GaussianRational> = (0..len).map(|k| self.num.shift(point).coeff(k)).collect();
        for (r, m) in &self.poles {
            let d = point - r;
            if d.is_zero() {
                return Err(RatFuncError::PoleAtEvaluationPoint(point.to_string()));
            }
            // (t + d)^{-m} = Σ_j C(−m, j) d^{−m−j} t^j
            let dinv = d.inv()?;
            let mut p = dinv.powi(*m as i64)?;
            let mut factor = Vec::with_capacity(len);
            for j in 0..len {
                let b = GaussianRational::real(binomial_general(-(*m as i64), j as u64));
                factor.push(&b * &p);
                p = &p * &dinv;
            }
            series = truncated_product(&series, &factor, len);
        }
        Ok(series.into_iter().map(|c| &c * &self.scale).collect())
    }

    /// Exact g^{(m)}(point).
    pub fn derivative_at(&self, m: u32, point: &GaussianRational) -> Result<GaussianRational, RatFuncError> {
        let series = self.taylor_at(point, m as usize)?;
        let fact = GaussianRational::real(BigRational::from_integer(factorial(m as u64)));
        Ok(&series[m as usize] * &fact)
    }

    /// Principal part at one root; zero when `root` is not a pole.
    pub fn principal_part(&self, root: &GaussianRational) -> PrincipalPart {
        let m = self.multiplicity_at(root);
        let mut coefficients = BTreeMap::new();
        if m > 0 {
            // g = f·(ξ − root)^m is regular at root
            let poles = self.poles.iter().filter(|(r, _)| r != root).cloned().collect();
            let g = Self { scale: self.scale.clone(), num: self.num.clone(), poles };
            let series = g
                .taylor_at(root, m as usize - 1)
                .expect("remaining poles are distinct from root");
            for k in 1..=m {
                let c = series[(m - k) as usize].clone();
                if !c.is_zero() {
                    coefficients.insert(k, c);
                }
            }
        }
        PrincipalPart { root: root.clone(), coefficients }
    }

    pub fn residue_at(&self, root: &GaussianRational) -> GaussianRational {
        self.principal_part(root).coefficients.get(&1).cloned().unwrap_or_default()
    }

    /// Polynomial part: the quotient of numerator by expanded denominator.
    pub fn polynomial_part(&self) -> PolyXi {
        let p = self.numerator();
        match p.degree() {
            Some(d) if d as u32 >= self.total_pole_order() => {
                let (q, _) = p.div_rem(&self.denominator_poly()).expect("nonzero denominator");
                q
            }
            _ => PolyXi::zero(),
        }
    }

    pub fn partial_fractions(&self) -> PartialFractions {
        PartialFractions {
            parts: self.poles.iter().map(|(r, _)| self.principal_part(r)).collect(),
            polynomial: self.polynomial_part(),
        }
    }

    /// π⁺: the principal part at ξ_n = +i, polynomial part and −i part dropped.
    pub fn pi_plus(&self) -> Result<Self, RatFuncError> {
        Ok(self.pi_plus_detailed()?.projected)
    }

    pub fn pi_plus_detailed(&self) -> Result<PiPlusOutcome, RatFuncError> {
        self.poles_only_at_pm_i()?;
        Ok(PiPlusOutcome {
            projected: self.principal_part(&GaussianRational::i()).to_ratfunc(),
            dropped_polynomial: self.polynomial_part(),
        })
    }

    /// ∮_{Γ⁺} f dξ_n = 2πi·Res_{+i} f, returned as the coefficient of π.
    pub fn contour_integral_upper(&self) -> Result<GaussianRational, RatFuncError> {
        self.poles_only_at_pm_i()?;
        let res = self.residue_at(&GaussianRational::i());
        Ok(&res * &GaussianRational::from_ints(0, 2))
    }

    /// ∫_ℝ f dξ_n as a coefficient of π, valid only for decaying f.
    pub fn real_line_integral(&self) -> Result<GaussianRational, RatFuncError> {
        if self.is_zero() {
            return Ok(GaussianRational::zero());
        }
        match self.degree_at_infinity() {
            Some(d) if d <= -2 => self.contour_integral_upper(),
            _ => Err(RatFuncError::NonDecayingIntegrand),
        }
    }
}

fn truncated_product(a: &[GaussianRational], b: &[GaussianRational], len: usize) -> Vec<GaussianRational> {
    let mut out = vec![GaussianRational::zero(); len];
    for (i, x) in a.iter().enumerate().take(len) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(len - i) {
            out[i + j] += &(x * y);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FloatEvaluator {
    prec: u32,
    num: Vec<BigComplexFloat>,
    poles: Vec<(BigComplexFloat, u32)>,
}

fn float_pow(x: &BigComplexFloat, mut e: u32, prec: u32) -> BigComplexFloat {
    let mut acc = BigComplexFloat::from_gaussian(&GaussianRational::one(), prec);
    let mut base = x.clone();
    while e > 0 {
        if e & 1 == 1 {
            acc = acc.mul(&base);
        }
        e >>= 1;
        if e > 0 {
            base = base.mul(&base);
        }
    }
    acc
}

impl FloatEvaluator {
    /// Value at x, or None at a pole.
    pub fn eval(&self, x: &BigComplexFloat) -> Option<BigComplexFloat> {
        let mut acc = BigComplexFloat::zero(self.prec);
        for c in self.num.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        let mut den = BigComplexFloat::from_gaussian(&GaussianRational::one(), self.prec);
        for (r, m) in &self.poles {
            den = den.mul(&float_pow(&x.sub(r), *m, self.prec));
        }
        acc.div(&den)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiPlusOutcome {
    pub projected: RatFuncXi,
    pub dropped_polynomial: PolyXi,
}

/// Σ_k c_k (ξ − root)^{−k}, k ≥ 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrincipalPart {
    pub root: GaussianRational,
    pub coefficients: BTreeMap<u32, GaussianRational>,
}

impl PrincipalPart {
    pub fn to_ratfunc(&self) -> RatFuncXi {
        self.coefficients.iter().fold(RatFuncXi::zero(), |acc, (k, c)| {
            acc.add(&RatFuncXi::pole_power(self.root.clone(), *k).scale_by(c))
        })
    }

    pub fn highest_order(&self) -> Option<u32> {
        self.coefficients.keys().next_back().copied()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartialFractions {
    pub parts: Vec<PrincipalPart>,
    pub polynomial: PolyXi,
}

impl PartialFractions {
    pub fn reconstruct(&self) -> RatFuncXi {
        self.parts
            .iter()
            .fold(RatFuncXi::from_poly(self.polynomial.clone()), |acc, p| acc.add(&p.to_ratfunc()))
    }

    /// Sum-of-fractions text, e.g. `-i/(16*(xi-i)^2) - 1/(8*(xi-i)^3)`.
    pub fn to_text(&self) -> String {
        let mut pieces: Vec<String> = Vec::new();
        if !self.polynomial.is_zero() {
            if self.polynomial.term_count() > 1 && !self.parts.iter().all(|p| p.coefficients.is_empty()) {
                pieces.push(format!("({})", self.polynomial));
            } else {
                pieces.push(self.polynomial.to_text());
            }
        }
        for part in &self.parts {
            for (k, c) in &part.coefficients {
                let den = c.common_denominator();
                let a = c.scale(&BigRational::from_integer(den.clone()));
                let factor = match k {
                    1 => format!("({})", root_factor_text(&part.root)),
                    _ => format!("({})^{k}", root_factor_text(&part.root)),
                };
                let num = if a.is_monomial() { a.to_string() } else { format!("({a})") };
                let text = if den == 1.into() {
                    format!("{num}/{factor}")
                } else {
                    format!("{num}/({den}*{factor})")
                };
                pieces.push(text);
            }
        }
        join_signed(&pieces)
    }
}

/// Joins summands with ` + ` / ` - `, lifting leading minus signs.
pub(crate) fn join_signed(pieces: &[String]) -> String {
    if pieces.is_empty() {
        return "0".to_string();
    }
    let mut out = pieces[0].clone();
    for p in &pieces[1..] {
        match p.strip_prefix('-') {
            Some(rest) => {
                out.push_str(" - ");
                out.push_str(rest);
            }
            None => {
                out.push_str(" + ");
                out.push_str(p);
            }
        }
    }
    out
}

impl RatFuncXi {
    /// Factored text, re-readable by the expression parser.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let p = self.numerator();
        if self.poles.is_empty() {
            return p.to_text();
        }
        let den = p
            .coeffs()
            .iter()
            .fold(num_bigint::BigInt::from(1), |acc, c| num_integer::Integer::lcm(&acc, &c.common_denominator()));
        let a = p.scale(&GaussianRational::real(BigRational::from_integer(den.clone())));
        let num = if a.term_count() > 1 { format!("({a})") } else { a.to_text() };
        let mut factors: Vec<String> = Vec::new();
        if den != 1.into() {
            factors.push(den.to_string());
        }
        for (r, m) in &self.poles {
            factors.push(match m {
                1 => format!("({})", root_factor_text(r)),
                _ => format!("({})^{m}", root_factor_text(r)),
            });
        }
        if factors.len() == 1 {
            format!("{num}/{}", factors[0])
        } else {
            format!("{num}/({})", factors.join("*"))
        }
    }

    /// Partial-fraction text.
    pub fn to_partial_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        self.partial_fractions().to_text()
    }
}

impl fmt::Display for RatFuncXi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}
