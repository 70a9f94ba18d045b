//! Boundary Clifford alphabet {c(ξ′), c(dx_n), p₀} with |ξ′| = 1.
//!
//! Relations: c(ξ′)² = c(dx_n)² = −1 and c(ξ′)c(dx_n) = −c(dx_n)c(ξ′).
//! p₀ is opaque and does not commute with anything, so it splits a word
//! into independently reducible segments.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::arith::{BigRational, GaussianRational};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliffordError {
    #[error("unresolved p0 letter; substitute a rule first")]
    UnresolvedP0,
    #[error("p0 substitution rule must not itself contain p0")]
    RuleContainsP0,
    #[error("unknown Clifford letter `{0}`")]
    UnknownLetter(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    Cxi,
    Cdxn,
    P0,
}

impl Letter {
    pub fn tag(self) -> &'static str {
        match self {
            Letter::Cxi => "CXI",
            Letter::Cdxn => "CDXN",
            Letter::P0 => "P0",
        }
    }

    pub fn from_tag(s: &str) -> Result<Self, CliffordError> {
        match s {
            "CXI" => Ok(Letter::Cxi),
            "CDXN" => Ok(Letter::Cdxn),
            "P0" => Ok(Letter::P0),
            other => Err(CliffordError::UnknownLetter(other.to_string())),
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

pub type Word = Vec<Letter>;

pub fn word_text(w: &[Letter], sep: &str) -> String {
    if w.is_empty() {
        return "1".to_string();
    }
    w.iter().map(|l| l.tag()).collect::<Vec<_>>().join(sep)
}

/// Reduces a P0-free segment to (sign, normal word).
fn reduce_segment(seg: &[Letter]) -> (bool, Word) {
    // state: sign, a = CXI present, b = CDXN present; word is CXI^a CDXN^b
    let (mut neg, mut a, mut b) = (false, false, false);
    for l in seg {
        match l {
            Letter::Cxi => {
                if b {
                    neg = !neg;
                }
                if a {
                    neg = !neg;
                    a = false;
                } else {
                    a = true;
                }
            }
            Letter::Cdxn => {
                if b {
                    neg = !neg;
                    b = false;
                } else {
                    b = true;
                }
            }
            Letter::P0 => unreachable!("segments are P0-free"),
        }
    }
    let mut w = Vec::with_capacity(2);
    if a {
        w.push(Letter::Cxi);
    }
    if b {
        w.push(Letter::Cdxn);
    }
    (neg, w)
}

/// Normal form of a word, keeping P0 letters as barriers.
pub fn reduce_word(word: &[Letter]) -> (bool, Word) {
    let mut neg = false;
    let mut out = Vec::with_capacity(word.len());
    for (k, seg) in word.split(|l| *l == Letter::P0).enumerate() {
        if k > 0 {
            out.push(Letter::P0);
        }
        let (s, w) = reduce_segment(seg);
        neg ^= s;
        out.extend(w);
    }
    (neg, out)
}

pub fn is_normal(word: &[Letter]) -> bool {
    reduce_word(word) == (false, word.to_vec())
}

/// Positions where a single rewrite rule applies.
pub fn rewrite_candidates(word: &[Letter]) -> Vec<usize> {
    (0..word.len().saturating_sub(1))
        .filter(|&k| {
            matches!(
                (word[k], word[k + 1]),
                (Letter::Cxi, Letter::Cxi) | (Letter::Cdxn, Letter::Cdxn) | (Letter::Cdxn, Letter::Cxi)
            )
        })
        .collect()
}

/// One rewrite step at `pos`: XX → −1 or CDXN·CXI → −CXI·CDXN.
pub fn rewrite_at(word: &[Letter], pos: usize) -> Option<(bool, Word)> {
    let mut w = word.to_vec();
    match (w.get(pos)?, w.get(pos + 1)?) {
        (Letter::Cxi, Letter::Cxi) | (Letter::Cdxn, Letter::Cdxn) => {
            w.drain(pos..pos + 2);
        }
        (Letter::Cdxn, Letter::Cxi) => w.swap(pos, pos + 1),
        _ => return None,
    }
    Some((true, w))
}

/// Linear combination of normal words.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct CliffordElement {
    terms: BTreeMap<Word, GaussianRational>,
}

impl CliffordElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn scalar(c: GaussianRational) -> Self {
        Self::from_word(&[], c)
    }

    pub fn identity() -> Self {
        Self::scalar(GaussianRational::one())
    }

    pub fn letter(l: Letter) -> Self {
        Self::from_word(&[l], GaussianRational::one())
    }

    /// c·word, reduced.
    pub fn from_word(word: &[Letter], c: GaussianRational) -> Self {
        let mut e = Self::zero();
        e.add_word(word, c);
        e
    }

    fn add_word(&mut self, word: &[Letter], c: GaussianRational) {
        if c.is_zero() {
            return;
        }
        let (neg, w) = reduce_word(word);
        let c = if neg { -c } else { c };
        let slot = self.terms.entry(w.clone()).or_default();
        *slot += &c;
        if slot.is_zero() {
            self.terms.remove(&w);
        }
    }

    pub fn terms(&self) -> &BTreeMap<Word, GaussianRational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains_p0(&self) -> bool {
        self.terms.keys().any(|w| w.contains(&Letter::P0))
    }

    pub fn identity_coefficient(&self) -> GaussianRational {
        self.terms.get(&Vec::new()).cloned().unwrap_or_default()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_word(w, c.clone());
        }
        out
    }

    pub fn scale(&self, k: &GaussianRational) -> Self {
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            out.add_word(w, c * k);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-GaussianRational::one())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut out = Self::zero();
        for (wa, ca) in &self.terms {
            for (wb, cb) in &rhs.terms {
                let mut w = wa.clone();
                w.extend_from_slice(wb);
                out.add_word(&w, ca * cb);
            }
        }
        out
    }

    pub fn substitute_p0(&self, rule: &Self) -> Result<Self, CliffordError> {
        if rule.contains_p0() {
            return Err(CliffordError::RuleContainsP0);
        }
        let mut out = Self::zero();
        for (w, c) in &self.terms {
            let mut acc = Self::scalar(c.clone());
            for (k, seg) in w.split(|l| *l == Letter::P0).enumerate() {
                if k > 0 {
                    acc = acc.mul(rule);
                }
                acc = acc.mul(&Self::from_word(seg, GaussianRational::one()));
            }
            out = out.add(&acc);
        }
        Ok(out)
    }

    /// tr = 2^{n/2} × identity coefficient.
    pub fn spinor_trace(&self, n: u32) -> Result<GaussianRational, CliffordError> {
        if self.contains_p0() {
            return Err(CliffordError::UnresolvedP0);
        }
        Ok(self.identity_coefficient().scale(&trace_dimension(n)))
    }

    pub fn to_text(&self) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let pieces: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| {
                let ct = if c.is_monomial() { c.to_string() } else { format!("({c})") };
                match (w.is_empty(), ct.as_str()) {
                    (true, _) => ct,
                    (false, "1") => word_text(w, "*"),
                    (false, "-1") => format!("-{}", word_text(w, "*")),
                    (false, _) => format!("{ct}*{}", word_text(w, "*")),
                }
            })
            .collect();
        crate::ratfunc::join_signed(&pieces)
    }
}

impl fmt::Display for CliffordElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// 2^{n/2}.
pub fn trace_dimension(n: u32) -> BigRational {
    BigRational::from_integer(num_bigint::BigInt::from(1) << (n / 2))
}

/// Normal order of a P0-free word.
pub fn normal_order(word: &[Letter]) -> Result<CliffordElement, CliffordError> {
    if word.contains(&Letter::P0) {
        return Err(CliffordError::UnresolvedP0);
    }
    Ok(CliffordElement::from_word(word, GaussianRational::one()))
}

pub fn spinor_trace(e: &CliffordElement, n: u32) -> Result<GaussianRational, CliffordError> {
    e.spinor_trace(n)
}

type Mat4 = [[GaussianRational; 4]; 4];

fn mat_zero() -> Mat4 {
    std::array::from_fn(|_| std::array::from_fn(|_| GaussianRational::zero()))
}

fn mat_identity() -> Mat4 {
    let mut m = mat_zero();
    for (k, row) in m.iter_mut().enumerate() {
        row[k] = GaussianRational::one();
    }
    m
}

fn mat_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut m = mat_zero();
    for r in 0..4 {
        for c in 0..4 {
            let mut acc = GaussianRational::zero();
            for k in 0..4 {
                acc += &(&a[r][k] * &b[k][c]);
            }
            m[r][c] = acc;
        }
    }
    m
}

fn mat_lincomb(parts: &[(GaussianRational, &Mat4)]) -> Mat4 {
    let mut m = mat_zero();
    for (k, g) in parts {
        for r in 0..4 {
            for c in 0..4 {
                m[r][c] += &(k * &g[r][c]);
            }
        }
    }
    m
}

/// c(e_k) = iΓ_k with Γ_{1..3} = [[0,σ_k],[σ_k,0]] and Γ_4 = [[0,−iI],[iI,0]].
fn clifford_generators() -> [Mat4; 4] {
    let z = GaussianRational::zero;
    let one = GaussianRational::one;
    let i = GaussianRational::i;
    let sigma: [[[GaussianRational; 2]; 2]; 3] = [
        [[z(), one()], [one(), z()]],
        [[z(), -i()], [i(), z()]],
        [[one(), z()], [z(), -one()]],
    ];
    let block = |s: &[[GaussianRational; 2]; 2]| -> Mat4 {
        let mut m = mat_zero();
        for r in 0..2 {
            for c in 0..2 {
                m[r][c + 2] = &i() * &s[r][c];
                m[r + 2][c] = &i() * &s[r][c];
            }
        }
        m
    };
    let mut g4 = mat_zero();
    for k in 0..2 {
        g4[k][k + 2] = &i() * &-i();
        g4[k + 2][k] = &i() * &i();
    }
    [block(&sigma[0]), block(&sigma[1]), block(&sigma[2]), g4]
}

/// Trace of an explicit 4×4 realization, with c(ξ′) = (2c₁ + c₂ + 2c₃)/3
/// and c(dx_n) = c₄.
pub fn gamma_oracle_trace(word: &[Letter]) -> Result<GaussianRational, CliffordError> {
    let g = clifford_generators();
    let third = |k: i64| GaussianRational::from_ratio(k, 3);
    let cxi = mat_lincomb(&[(third(2), &g[0]), (third(1), &g[1]), (third(2), &g[2])]);
    let mut m = mat_identity();
    for l in word {
        m = match l {
            Letter::Cxi => mat_mul(&m, &cxi),
            Letter::Cdxn => mat_mul(&m, &g[3]),
            Letter::P0 => return Err(CliffordError::UnresolvedP0),
        };
    }
    Ok((0..4).fold(GaussianRational::zero(), |acc, k| &acc + &m[k][k]))
}

/// Oracle trace of a whole element.
pub fn gamma_oracle_trace_element(e: &CliffordElement) -> Result<GaussianRational, CliffordError> {
    e.terms()
        .iter()
        .try_fold(GaussianRational::zero(), |acc, (w, c)| Ok(&acc + &(c * &gamma_oracle_trace(w)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use Letter::*;

    #[test]
    fn relations() {
        assert_eq!(normal_order(&[Cxi, Cxi]).unwrap(), CliffordElement::scalar(-GaussianRational::one()));
        assert_eq!(
            normal_order(&[Cdxn, Cxi]).unwrap(),
            CliffordElement::from_word(&[Cxi, Cdxn], -GaussianRational::one())
        );
        assert_eq!(normal_order(&[]).unwrap(), CliffordElement::identity());
        assert_eq!(normal_order(&[P0]), Err(CliffordError::UnresolvedP0));
    }

    #[test]
    fn traces() {
        assert_eq!(CliffordElement::identity().spinor_trace(4).unwrap(), GaussianRational::from(4));
        assert!(CliffordElement::letter(Cxi).spinor_trace(4).unwrap().is_zero());
        let e = normal_order(&[Cxi, Cdxn]).unwrap();
        assert!(e.spinor_trace(4).unwrap().is_zero());
        assert!(gamma_oracle_trace(&[Cxi, Cdxn]).unwrap().is_zero());
        assert_eq!(gamma_oracle_trace(&[]).unwrap(), GaussianRational::from(4));
        assert_eq!(gamma_oracle_trace(&[Cxi, Cxi]).unwrap(), GaussianRational::from(-4));
        // −CXI²·CDXN² = −1
        let w = [Cxi, Cdxn, Cxi, Cdxn];
        assert_eq!(gamma_oracle_trace(&w).unwrap(), GaussianRational::from(-4));
        assert_eq!(normal_order(&w).unwrap().spinor_trace(4).unwrap(), GaussianRational::from(-4));
    }

    #[test]
    fn p0_substitution() {
        let alpha = GaussianRational::from_ratio(-3, 4);
        let rule = CliffordElement::letter(Cdxn).scale(&alpha);
        let e = CliffordElement::letter(P0);
        assert_eq!(e.substitute_p0(&rule).unwrap(), rule);
        let e = CliffordElement::from_word(&[Cxi, P0, Cxi], GaussianRational::one());
        assert_eq!(e.substitute_p0(&CliffordElement::letter(Cdxn)).unwrap(), CliffordElement::letter(Cdxn));
        let plain = CliffordElement::letter(Cxi);
        assert_eq!(plain.substitute_p0(&rule).unwrap(), plain);
        assert_eq!(e.substitute_p0(&e), Err(CliffordError::RuleContainsP0));
    }

    #[test]
    fn text() {
        let e = CliffordElement::letter(Cxi).add(&CliffordElement::from_word(&[Cxi, Cdxn], GaussianRational::from(-2)));
        assert_eq!(e.to_text(), "CXI - 2*CXI*CDXN");
    }
}
