//! Named coefficients of the boundary computation.
//!
//! Each coefficient is a derivative value
//! `[P(ξ)/(ξ+i)^p]^{(m)} at ξ = i` with t = n/2, p = t + p_off, m = t + m_off,
//! together with the printed closed form in generalized binomials.
//! Three evaluation paths are offered: the exact derivative, the printed
//! closed form, and an m!·residue computed by contour quadrature.

use num_bigint::BigInt;
use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::{binomial_general, factorial, falling_factorial, BigRational, GaussianRational};
use crate::bigfloat::{pow10_tolerance, BigComplexFloat, BigFloat};
use crate::expr::{parse_constant, parse_ratfunc, ExprError};
use crate::finding::Finding;
use crate::quadrature::contour_residue_numeric;
use crate::ratfunc::{RatFuncError, RatFuncXi};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoeffError {
    #[error("unknown coefficient `{0}`")]
    UnknownCoefficient(String),
    #[error("dimension must be even and at least 4, got {0}")]
    InvalidDimension(u32),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    RatFunc(#[from] RatFuncError),
}

/// Relative tolerance of the numeric oracle, 10^-30.
pub const NUMERIC_TOLERANCE_DIGITS: u32 = 30;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Binom {
    /// C_N^K = N(N−1)…(N−K+1)/K!
    C,
    /// A_N^K = N(N−1)…(N−K+1)
    A,
}

/// `coef(n) · Binom(−t + upper, t + lower)`
#[derive(Clone, Copy, Debug)]
pub struct BinomTerm {
    pub coef: &'static str,
    pub kind: Binom,
    pub upper: i64,
    pub lower: i64,
}

/// `sign · i^(−n + i_off) · 2^(two_t·t + two_c) · Σ terms · (t + fact)!`
#[derive(Clone, Copy, Debug)]
pub struct ClosedForm {
    pub sign: i64,
    pub i_off: i64,
    pub two_t: i64,
    pub two_c: i64,
    pub terms: &'static [BinomTerm],
    pub factorial: Option<i64>,
}

#[derive(Clone, Copy, Debug)]
pub struct Coefficient {
    pub name: &'static str,
    /// numerator in the expression language, may mention n
    pub numerator: &'static str,
    pub p_off: i64,
    pub m_off: i64,
    pub anchor: &'static str,
    pub closed: ClosedForm,
    /// second printed reading, when the source is internally inconsistent
    pub alternate: Option<(&'static str, ClosedForm)>,
}

const fn c(coef: &'static str, upper: i64, lower: i64) -> BinomTerm {
    BinomTerm { coef, kind: Binom::C, upper, lower }
}

const fn a(coef: &'static str, upper: i64, lower: i64) -> BinomTerm {
    BinomTerm { coef, kind: Binom::A, upper, lower }
}

const fn cf(sign: i64, i_off: i64, two: (i64, i64), terms: &'static [BinomTerm], factorial: Option<i64>) -> ClosedForm {
    ClosedForm { sign, i_off, two_t: two.0, two_c: two.1, terms, factorial }
}

const fn entry(
    name: &'static str,
    numerator: &'static str,
    p_off: i64,
    m_off: i64,
    anchor: &'static str,
    closed: ClosedForm,
) -> Coefficient {
    Coefficient { name, numerator, p_off, m_off, anchor, closed, alternate: None }
}

pub const CATALOG: [Coefficient; 24] = [
    entry("A0", "(2*n-2)*xi^3-2*xi", 1, 2, "35kkk", cf(-1, -4, (-2, -3), &[c("4*n-4", -3, -1), c("6*n-6", -3, 0), c("3*n-2", -3, 1), c("n/2", -3, 2)], Some(2))),
    entry("A1", "(2*n-2)*xi^2-2", 1, 2, "35kkk", cf(1, -3, (-2, -3), &[c("2*n-2", -3, 0), c("2*n-2", -3, 1), c("n/2", -3, 2)], Some(2))),
    entry("A2", "(2*n-2)*xi^3-2*xi", 1, 1, "35kkk", cf(1, -3, (-2, 0), &[c("4*n-4", -1, -2), c("6*n-6", -1, -1), c("3*n-2", -1, 0), c("n/2", -1, 1)], Some(2))),
    entry("B0", "1", 0, 2, "41", cf(1, -2, (-2, -2), &[a("1", 0, 2)], None)),
    entry("C0", "-(n-2)*(n+1)*xi^3+(-2*n^2+3*n-2)*xi", 1, 2, "39", cf(-1, -4, (-2, -1), &[c("2*n^2-2*n-4", -1, -1), c("3*n^2-3*n-6", -1, 0), c("n^2-4", -1, 1), c("-n^2/4-n/2-1", -1, 2)], Some(2))),
    entry("D0", "xi", 0, 1, "6666", cf(-1, -2, (-2, -1), &[c("2", 0, 0), c("1", 0, 1)], Some(1))),
    entry("D1", "xi", 0, 2, "6666", cf(1, -2, (-2, -2), &[c("2*i", 0, 1), c("i", 0, 2)], Some(2))),
    entry("D2", "xi^2", 0, 1, "6666", cf(-1, -1, (-2, -1), &[c("4", 0, -1), c("4", 0, 0), c("1", 0, 1)], Some(1))),
    entry("E0", "i*xi-1", 0, 2, "c11", cf(-1, -4, (-2, -1), &[c("1", 0, 1), c("1", 0, 2)], Some(2))),
    entry("E1", "-xi^2+i*xi-2", 0, 2, "c11", cf(-1, -4, (-2, -1), &[c("2", 0, 0), c("1", 0, 1), c("-1", 0, 2)], Some(2))),
    Coefficient {
        name: "E2",
        numerator: "1",
        p_off: 0,
        m_off: 2,
        anchor: "c11",
        closed: cf(1, -2, (-2, -2), &[a("1", 0, 2)], Some(2)),
        alternate: Some(("as B0 (no factorial)", cf(1, -2, (-2, -2), &[a("1", 0, 2)], None))),
    },
    entry("E3", "i*xi-1", 0, 3, "c11", cf(-1, -5, (-2, -2), &[c("1", 0, 2), c("1", 0, 3)], Some(3))),
    entry("E4", "-(2+i)*xi^2+(4+i)*xi-2*i", 0, 3, "c11", cf(-1, -6, (-1, -1), &[c("8+4*i", 0, 0), c("12+6*i", 0, 1), c("10+4*i", 0, 2), c("2+i", 0, 3)], Some(3))),
    entry("F0", "-i*xi^2-n*xi+n*i-i", 1, 3, "c18", cf(1, -6, (-2, -1), &[c("1", 0, 1), c("-(n/2-1)", 0, 3)], Some(2))),
    entry("G0", "(3*n+2)*xi^2+n*i*xi+2", 1, 2, "c22", cf(1, -5, (-2, -1), &[c("3*n+2", -1, 0), c("7*n/2+2", -1, 1), c("n", -1, 2)], Some(2))),
    entry("G1", "(1-n)*i*xi^4+(7-5*n)*xi^3+(7*n-3)*i*xi^2+(3*n+10)*xi-8*i", 1, 3, "c22", cf(1, -5, (-2, -4), &[c("16*(n-1)", -1, -1), c("8*n+24", -1, 0), c("48-8*n", -1, 1), c("2", -1, 2), c("1", -1, 3)], Some(3))),
    entry("G2", "2*n*xi^4+(4*n*i-8*i-2)*xi^3+(2*i+1-5*n)*xi^2-(3*n*i-12*n+12)*xi+13", 1, 2, "c22", cf(1, -3, (-2, -1), &[c("8*n", -1, -2), c("24*n-16+4*i", -1, -1), c("29*n-25+4*i", -1, 0), c("(7+6*i)/2*n-3*i+1", -1, 2)], Some(2))),
    entry("H0", "1", 0, 1, "c27", cf(1, -1, (-2, -1), &[a("1", 0, 1)], None)),
    entry("H1", "xi", 1, 2, "c27", cf(1, -3, (-2, -3), &[c("2*i", -1, 1), c("i", -1, 2)], Some(2))),
    entry("H2", "-(n+1)*n*i*xi^2-n^2*xi+n*i", 1, 2, "c27", cf(-1, -4, (-2, -2), &[c("4*n-4*i+4", -1, 0), c("4*n-4*i+4", -1, 1), c("n-i+2", -1, 2)], Some(2))),
    entry("H3", "i*xi^2+xi", 2, 3, "c27", cf(1, -6, (-2, -4), &[c("2", -2, 1), c("1", -2, 1)], Some(3))),
    entry("M0", "xi", 0, 0, "b5", cf(1, 1, (-2, 0), &[c("2", 0, -1), c("1", 0, 0)], Some(0))),
    entry("N0", "n*i*xi+n*i", 1, 1, "b5", cf(1, -1, (-2, -1), &[c("2*n*i+2*i", -1, 0), c("n*i+n/2+i", -1, 1)], Some(1))),
    entry("N1", "1", 0, 0, "b5", cf(1, 0, (-2, 0), &[a("1", 0, 0)], None)),
];

pub fn names() -> impl Iterator<Item = &'static str> {
    CATALOG.iter().map(|s| s.name)
}

pub fn lookup(name: &str) -> Result<&'static Coefficient, CoeffError> {
    CATALOG.iter().find(|s| s.name == name).ok_or_else(|| CoeffError::UnknownCoefficient(name.to_string()))
}

pub fn check_dimension(n: u32) -> Result<i64, CoeffError> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(CoeffError::InvalidDimension(n));
    }
    Ok((n / 2) as i64)
}

fn offset_text(base: &str, off: i64) -> String {
    match off {
        0 => base.to_string(),
        k if k > 0 => format!("{base}+{k}"),
        k => format!("{base}{k}"),
    }
}

fn rat_to_g(q: BigRational) -> GaussianRational {
    GaussianRational::real(q)
}

impl ClosedForm {
    pub fn eval(&self, n: u32) -> Result<GaussianRational, CoeffError> {
        let t = check_dimension(n)?;
        let mut sum = GaussianRational::zero();
        for term in self.terms {
            let k = t + term.lower;
            let upper = -t + term.upper;
            let b = if k < 0 {
                BigRational::from_integer(0.into())
            } else {
                match term.kind {
                    Binom::C => binomial_general(upper, k as u64),
                    Binom::A => falling_factorial(upper, k as u64),
                }
            };
            sum += &(&parse_constant(term.coef, n)? * &rat_to_g(b));
        }
        let two = self.two_t * t + self.two_c;
        let pow2 = if two >= 0 {
            BigRational::from_integer(BigInt::from(1) << two as usize)
        } else {
            BigRational::new(1.into(), BigInt::from(1) << (-two) as usize)
        };
        let mut v = &GaussianRational::i_pow(-(n as i64) + self.i_off) * &sum;
        v = v.scale(&pow2).scale(&BigRational::from_integer(self.sign.into()));
        if let Some(f) = self.factorial {
            v = v.scale(&BigRational::from_integer(factorial((t + f) as u64)));
        }
        Ok(v)
    }

    /// Text form, e.g. `-i^(-n-4)*2^(-n-3)*((4*n-4)*C(-n/2-3,n/2-1) + ...)*(n/2+2)!`.
    pub fn to_text(&self) -> String {
        let sign = if self.sign < 0 { "-" } else { "" };
        let ip = format!("i^({})", offset_text("-n", self.i_off));
        let two = match (self.two_t, self.two_c) {
            (-2, c) => offset_text("-n", c),
            (-1, c) => offset_text("-n/2", c),
            (k, c) => offset_text(&format!("{k}*n/2"), c),
        };
        let terms: Vec<String> = self
            .terms
            .iter()
            .map(|t| {
                let name = match t.kind {
                    Binom::C => "C",
                    Binom::A => "A",
                };
                let b = format!("{name}({},{})", offset_text("-n/2", t.upper), offset_text("n/2", t.lower));
                if t.coef == "1" {
                    b
                } else {
                    format!("({})*{b}", t.coef)
                }
            })
            .collect();
        let fact = self.factorial.map(|f| format!("*({})!", offset_text("n/2", f))).unwrap_or_default();
        format!("{sign}{ip}*2^({two})*({}){fact}", terms.join(" + "))
    }
}

impl Coefficient {
    pub fn pole_power(&self, n: u32) -> Result<i64, CoeffError> {
        Ok(check_dimension(n)? + self.p_off)
    }

    pub fn derivative_order(&self, n: u32) -> Result<u32, CoeffError> {
        Ok((check_dimension(n)? + self.m_off) as u32)
    }

    /// P(ξ)/(ξ+i)^p at dimension n.
    pub fn function(&self, n: u32) -> Result<RatFuncXi, CoeffError> {
        let p = self.pole_power(n)?;
        Ok(parse_ratfunc(&format!("({})/(xi+i)^{p}", self.numerator), n)?)
    }

    /// `[P/(xi+i)^(n/2+1)]^(n/2+2) at xi=i`
    pub fn defining_text(&self) -> String {
        format!(
            "[({})/(xi+i)^({})]^({}) at xi=i",
            self.numerator,
            offset_text("n/2", self.p_off),
            offset_text("n/2", self.m_off)
        )
    }
}

pub fn coefficient_defining(name: &str, n: u32) -> Result<GaussianRational, CoeffError> {
    let s = lookup(name)?;
    let m = s.derivative_order(n)?;
    Ok(s.function(n)?.derivative_at(m, &GaussianRational::i())?)
}

pub fn coefficient_closed_form(name: &str, n: u32) -> Result<GaussianRational, CoeffError> {
    lookup(name)?.closed.eval(n)
}

/// m!·Res_{ξ=i} P/((ξ+i)^p (ξ−i)^{m+1}) by trapezoidal quadrature.
pub fn coefficient_numeric(name: &str, n: u32, precision_bits: u32, nodes: usize) -> Result<BigComplexFloat, CoeffError> {
    let s = lookup(name)?;
    let m = s.derivative_order(n)?;
    let f = s.function(n)?.mul(&RatFuncXi::pole_power(GaussianRational::i(), m + 1));
    let r = contour_residue_numeric(&f, precision_bits, nodes)?;
    let fact = BigFloat::from_int(&factorial(m as u64), precision_bits);
    Ok(BigComplexFloat::new(r.re.mul(&fact), r.im.mul(&fact)))
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationRecord {
    pub name: String,
    pub n: u32,
    pub value_defining: GaussianRational,
    pub value_closed: GaussianRational,
    pub value_closed_alternate: Option<(String, GaussianRational)>,
    pub value_numeric: BigComplexFloat,
    pub tolerance_digits: u32,
    pub defining_vs_numeric_ok: bool,
    pub closed_matches_defining: bool,
}

impl VerificationRecord {
    pub fn alternate_matches_defining(&self) -> Option<bool> {
        self.value_closed_alternate.as_ref().map(|(_, v)| v == &self.value_defining)
    }

    pub fn to_json(&self) -> Value {
        let mut v = json!({
            "name": self.name,
            "n": self.n,
            "defining": self.value_defining.to_string(),
            "closed_form": self.value_closed.to_string(),
            "numeric": self.value_numeric.to_decimal(40),
            "tolerance": format!("1e-{}", self.tolerance_digits),
            "defining_vs_numeric_ok": self.defining_vs_numeric_ok,
            "closed_matches_defining": self.closed_matches_defining,
        });
        if let Some((label, alt)) = &self.value_closed_alternate {
            v["closed_form_alternate"] = json!({ "reading": label, "value": alt.to_string(), "matches_defining": alt == &self.value_defining });
        }
        v
    }

    /// Printed-formula discrepancies carried by this record.
    pub fn findings(&self) -> Vec<Finding> {
        let s = lookup(&self.name).expect("record for cataloged name");
        let subject = format!("{}@n={}", self.name, self.n);
        let mut out = Vec::new();
        if let Some((label, alt)) = &self.value_closed_alternate {
            let verdict = match (self.closed_matches_defining, alt == &self.value_defining) {
                (true, true) => "both readings match the defining derivative".to_string(),
                (true, false) => "the printed reading matches the defining derivative".to_string(),
                (false, true) => format!("only the reading `{label}` matches the defining derivative"),
                (false, false) => "neither reading matches the defining derivative".to_string(),
            };
            out.push(
                Finding::new("internal-inconsistency", s.anchor, &subject, format!("two printed closed forms disagree; {verdict}"))
                    .with("defining", &self.value_defining)
                    .with("closed_form", &self.value_closed)
                    .with(&format!("closed_form[{label}]"), alt),
            );
        } else if !self.closed_matches_defining {
            out.push(
                Finding::new("closed-form-mismatch", s.anchor, &subject, "printed closed form differs from the defining derivative")
                    .with("defining", &self.value_defining)
                    .with("closed_form", &self.value_closed),
            );
        }
        out
    }
}

/// All three values for one coefficient. Mismatches are recorded, never raised.
pub fn verify_coefficient(name: &str, n: u32, precision_bits: u32, nodes: usize) -> Result<VerificationRecord, CoeffError> {
    let s = lookup(name)?;
    let value_defining = coefficient_defining(name, n)?;
    let value_closed = s.closed.eval(n)?;
    let value_closed_alternate = match &s.alternate {
        Some((label, f)) => Some((label.to_string(), f.eval(n)?)),
        None => None,
    };
    let value_numeric = coefficient_numeric(name, n, precision_bits, nodes)?;
    let defining_vs_numeric_ok = value_numeric.within(&value_defining, &pow10_tolerance(NUMERIC_TOLERANCE_DIGITS));
    Ok(VerificationRecord {
        name: name.to_string(),
        n,
        closed_matches_defining: value_closed == value_defining,
        value_defining,
        value_closed,
        value_closed_alternate,
        value_numeric,
        tolerance_digits: NUMERIC_TOLERANCE_DIGITS,
        defining_vs_numeric_ok,
    })
}

/// Parallel sweep, returned in catalog order then by n.
pub fn verify_sweep(names: &[&str], ns: &[u32], precision_bits: u32, nodes: usize) -> Result<Vec<VerificationRecord>, CoeffError> {
    let jobs: Vec<(usize, &str, u32)> = names
        .iter()
        .enumerate()
        .flat_map(|(k, name)| ns.iter().map(move |n| (k, *name, *n)))
        .collect();
    let mut out: Vec<(usize, VerificationRecord)> = jobs
        .par_iter()
        .map(|(k, name, n)| verify_coefficient(name, *n, precision_bits, nodes).map(|r| (*k, r)))
        .collect::<Result<_, _>>()?;
    out.sort_by_key(|(k, r)| (*k, r.n));
    Ok(out.into_iter().map(|(_, r)| r).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn catalog_shape() {
        assert_eq!(CATALOG.len(), 24);
        let mut n: Vec<_> = names().collect();
        n.dedup();
        assert_eq!(n.len(), 24);
        assert!(lookup("Z9").is_err());
        assert!(matches!(coefficient_defining("B0", 5), Err(CoeffError::InvalidDimension(5))));
    }

    #[test]
    fn anchors_at_n4() {
        let b0 = GaussianRational::real(rat(-15, 8));
        let m0 = GaussianRational::new(rat(0, 1), rat(-1, 8));
        let h0 = GaussianRational::new(rat(0, 1), rat(3, 4));
        for (name, v) in [("B0", b0), ("M0", m0), ("H0", h0)] {
            assert_eq!(coefficient_defining(name, 4).unwrap(), v);
            assert_eq!(coefficient_closed_form(name, 4).unwrap(), v);
        }
    }

    #[test]
    fn n1_closed_form_all_n() {
        for n in [4, 6, 8, 10, 12] {
            assert_eq!(coefficient_closed_form("N1", n).unwrap(), coefficient_defining("N1", n).unwrap());
        }
    }

    #[test]
    fn e2_readings() {
        let r = verify_coefficient("E2", 4, 128, 64).unwrap();
        assert!(!r.closed_matches_defining);
        assert_eq!(r.alternate_matches_defining(), Some(true));
        assert_eq!(r.findings().len(), 1);
    }

    #[test]
    fn numeric_agrees() {
        let r = verify_coefficient("A0", 6, 256, 512).unwrap();
        assert!(r.defining_vs_numeric_ok);
    }

    #[test]
    fn closed_form_text() {
        assert_eq!(lookup("B0").unwrap().closed.to_text(), "i^(-n-2)*2^(-n-2)*(A(-n/2,n/2+2))");
        assert_eq!(lookup("B0").unwrap().defining_text(), "[(1)/(xi+i)^(n/2)]^(n/2+2) at xi=i");
    }
}
