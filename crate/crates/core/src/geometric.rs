//! Exact scalar results: sums of atom monomials with ℚ(i) coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::arith::{BigRational, GaussianRational};
use crate::ratfunc::join_signed;
use crate::symbols::{Atom, Monomial, SymbolError, SymbolExpr};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GeometricExpression {
    terms: BTreeMap<Monomial, GaussianRational>,
}

impl GeometricExpression {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn term(m: Monomial, c: GaussianRational) -> Self {
        let mut e = Self::zero();
        e.insert(m, c);
        e
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::term(Monomial::one(), c)
    }

    pub fn atom(a: Atom) -> Self {
        Self::term(Monomial::atom(a), GaussianRational::one())
    }

    pub fn insert(&mut self, m: Monomial, c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(m.clone()).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, GaussianRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, m: &Monomial) -> GaussianRational {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.insert(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-GaussianRational::one())
    }

    pub fn scale(&self, k: &GaussianRational) -> Self {
        let mut out = Self::zero();
        for (m, c) in &self.terms {
            out.insert(m.clone(), c * k);
        }
        out
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (a, ca) in &self.terms {
            for (b, cb) in &rhs.terms {
                out.insert(a.mul(b), ca * cb);
            }
        }
        out
    }

    /// Every PI exponent present.
    pub fn pi_powers(&self) -> Vec<u32> {
        let mut v: Vec<u32> = self.terms.keys().map(|m| m.exponent(Atom::Pi)).collect();
        v.dedup();
        v
    }

    /// From a fully integrated symbol: every term must be scalar apart from
    /// its atom monomial, and its radial part a constant.
    pub fn from_symbol(e: &SymbolExpr) -> Result<Self, SymbolError> {
        let mut out = Self::zero();
        for (k, r) in e.terms() {
            let c = r.as_constant().ok_or_else(|| SymbolError::NotRadial(e.to_text()))?;
            if !k.word.is_empty() || k.structure != crate::symbols::XiStructure::One {
                return Err(SymbolError::NotRadial(e.to_text()));
            }
            out.insert(k.monomial.clone(), c);
        }
        Ok(out)
    }

    /// Monomials whose coefficients differ, with both values.
    pub fn diff(&self, rhs: &Self) -> Vec<(Monomial, GaussianRational, GaussianRational)> {
        let mut keys: Vec<&Monomial> = self.terms.keys().chain(rhs.terms.keys()).collect();
        keys.sort();
        keys.dedup();
        keys.into_iter()
            .filter_map(|m| {
                let (a, b) = (self.coefficient(m), rhs.coefficient(m));
                (a != b).then(|| (m.clone(), a, b))
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|(m, c)| json!({ "monomial": m.tag_text(), "coefficient": c.to_string() }))
            .collect();
        json!({ "text": self.to_text(), "terms": terms })
    }

    pub fn to_text(&self) -> String {
        self.render(&Style::Plain)
    }

    pub fn to_latex(&self) -> String {
        self.render(&Style::Latex)
    }

    /// Groups by (PI, VOL) exponents; inside a group the coefficient of
    /// largest modulus is factored out.
    fn render(&self, style: &Style) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut groups: BTreeMap<(u32, u32), Vec<(Monomial, GaussianRational)>> = BTreeMap::new();
        for (m, c) in &self.terms {
            let key = (m.exponent(Atom::Pi), m.exponent(Atom::Vol));
            let rest = m.without(Atom::Pi).without(Atom::Vol);
            groups.entry(key).or_default().push((rest, c.clone()));
        }
        let mut pieces = Vec::new();
        for ((pi, vol), members) in groups.iter().rev() {
            let lead = members
                .iter()
                .map(|(_, c)| c)
                .fold(None::<&GaussianRational>, |best, c| match best {
                    Some(b) if b.norm_sqr() >= c.norm_sqr() => Some(b),
                    _ => Some(c),
                })
                .expect("non-empty group")
                .clone();
            let inv = lead.inv().expect("nonzero lead");
            let inner: Vec<String> = members.iter().map(|(m, c)| style.relative(&(c * &inv), m)).collect();
            let body = if inner.len() == 1 { inner[0].clone() } else { format!("( {} )", join_signed(&inner)) };
            let (sign, mut scalar) = style.scalar(&lead, *pi);
            let trailing = *vol > 0 || body != "1";
            if trailing && matches!(style, Style::Plain) && scalar.contains('/') {
                scalar = format!("({scalar})");
            }
            let mut head = Vec::new();
            if scalar != "1" {
                head.push(scalar);
            }
            if *vol > 0 {
                head.push(style.power(style.atom(Atom::Vol), *vol));
            }
            let head = format!("{sign}{}", join_product(head, style));
            let text = match (head.as_str(), body.as_str()) {
                ("", b) => b.to_string(),
                ("-", b) => format!("-{b}"),
                (h, "1") => h.to_string(),
                (h, b) => format!("{h}{}{b}", style.times()),
            };
            pieces.push(text);
        }
        join_signed(&pieces)
    }
}

fn join_product(parts: Vec<String>, style: &Style) -> String {
    let mut out = String::new();
    for p in parts {
        if out.is_empty() || out == "-" {
            out.push_str(&p);
        } else {
            out.push_str(style.times());
            out.push_str(&p);
        }
    }
    out
}

enum Style {
    Plain,
    Latex,
}

fn rat_text(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl Style {
    fn times(&self) -> &'static str {
        match self {
            Style::Plain => "*",
            Style::Latex => " ",
        }
    }

    fn atom(&self, a: Atom) -> String {
        match self {
            Style::Plain => a.display_name().to_string(),
            Style::Latex => a.latex_name().to_string(),
        }
    }

    fn power(&self, base: String, e: u32) -> String {
        match (self, e) {
            (_, 1) => base,
            (Style::Plain, e) => format!("{base}^{e}"),
            (Style::Latex, e) => format!("{base}^{{{e}}}"),
        }
    }

    fn monomial(&self, m: &Monomial) -> String {
        match self {
            Style::Plain => m.display_text(),
            Style::Latex => m.latex_text(),
        }
    }

    /// Leading factor c·π^k split as (sign, magnitude), e.g. `pi/4`,
    /// `3*i*pi^2/4`, `(1/2+i/2)*pi`.
    fn scalar(&self, c: &GaussianRational, pi: u32) -> (&'static str, String) {
        let pi_text = if pi == 0 { String::new() } else { self.power(self.atom(Atom::Pi), pi) };
        if !c.is_monomial() {
            let ct = match self {
                Style::Plain => format!("({c})"),
                Style::Latex => format!("\\left({}\\right)", c.to_latex()),
            };
            return ("", join_product([ct, pi_text].into_iter().filter(|s| !s.is_empty()).collect(), self));
        }
        let (r, imag) = if c.im().is_zero() { (c.re().clone(), false) } else { (c.im().clone(), true) };
        let sign = if r.is_negative() { "-" } else { "" };
        let r = r.abs();
        let num = r.numer().to_string();
        let den = r.denom().to_string();
        let mut parts = Vec::new();
        if num != "1" || (!imag && pi_text.is_empty()) {
            parts.push(num);
        }
        if imag {
            parts.push("i".to_string());
        }
        if !pi_text.is_empty() {
            parts.push(pi_text);
        }
        let top = join_product(parts, self);
        let mag = match (self, den.as_str()) {
            (_, "1") => top,
            (Style::Plain, d) => format!("{top}/{d}"),
            (Style::Latex, d) => format!("\\frac{{{top}}}{{{d}}}"),
        };
        (sign, mag)
    }

    /// Inner term `k*atoms` with k relative to the factored lead.
    fn relative(&self, k: &GaussianRational, m: &Monomial) -> String {
        let atoms = if m.is_one() { String::new() } else { self.monomial(m) };
        let (neg, mag) = if (k.im().is_zero() && k.re().is_negative()) || (k.re().is_zero() && k.im().is_negative()) {
            (true, -k.clone())
        } else {
            (false, k.clone())
        };
        let coef = if mag.is_one() {
            String::new()
        } else if mag.is_real() && mag.re().is_integer() {
            mag.to_string()
        } else {
            match self {
                Style::Plain => format!("({})", if mag.is_real() { rat_text(mag.re()) } else { mag.to_string() }),
                Style::Latex => mag.to_latex(),
            }
        };
        let body = match (coef.is_empty(), atoms.is_empty()) {
            (true, true) => "1".to_string(),
            (true, false) => atoms,
            (false, true) => coef,
            (false, false) => format!("{coef}{}{atoms}", self.times()),
        };
        if neg {
            format!("-{body}")
        } else {
            body
        }
    }
}

impl fmt::Display for GeometricExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// `Vol·π·(a·g(Xᵀ,Yᵀ) + b·XₙYₙ)`-style builder helpers.
pub mod build {
    use super::*;

    pub fn atom(a: Atom) -> GeometricExpression {
        GeometricExpression::atom(a)
    }

    pub fn num(c: GaussianRational) -> GeometricExpression {
        GeometricExpression::constant(c)
    }

    pub fn rat(p: i64, q: i64) -> GeometricExpression {
        num(GaussianRational::from_ratio(p, q))
    }

    pub fn i() -> GeometricExpression {
        num(GaussianRational::i())
    }

    pub fn product(parts: &[GeometricExpression]) -> GeometricExpression {
        parts.iter().fold(GeometricExpression::constant(GaussianRational::one()), |acc, p| acc.mul(p))
    }

    pub fn sum(parts: &[GeometricExpression]) -> GeometricExpression {
        parts.iter().fold(GeometricExpression::zero(), |acc, p| acc.add(p))
    }
}

#[cfg(test)]
mod tests {
    use super::build::*;
    use super::*;

    #[test]
    fn t41_target_text() {
        let e = product(&[rat(1, 4), atom(Atom::Pi), atom(Atom::Vol), sum(&[product(&[rat(1, 3), atom(Atom::GTt)]), atom(Atom::XnYn)])]);
        assert_eq!(e.to_text(), "(pi/4)*Vol(S^{n-2})*( (1/3)*g(XT,YT) + Xn*Yn )");
    }

    #[test]
    fn interior_text() {
        let pi2 = product(&[atom(Atom::Pi), atom(Atom::Pi)]);
        let e = sum(&[product(&[rat(4, 3), pi2.clone(), atom(Atom::EinsteinXy)]), product(&[pi2, atom(Atom::SgXy)])]);
        assert_eq!(e.to_text(), "(4*pi^2/3)*( [Ric(X,Y)-(1/2)*s*g(X,Y)] + (3/4)*s*g(X,Y) )");
    }

    #[test]
    fn signs_and_imaginary() {
        let e = product(&[num(GaussianRational::new(crate::arith::rat(0, 1), crate::arith::rat(-5, 16))), atom(Atom::Pi), atom(Atom::Vol), atom(Atom::Hp)]);
        assert_eq!(e.to_text(), "-(5*i*pi/16)*Vol(S^{n-2})*h'(0)");
        let d = e.diff(&GeometricExpression::zero());
        assert_eq!(d.len(), 1);
        assert_eq!(GeometricExpression::zero().to_text(), "0");
    }
}
