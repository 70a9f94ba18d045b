//! Boundary symbols: sums of (atom monomial × ξ′-structure × Clifford word)
//! with a rational function of ξ_n as coefficient.
//!
//! Everything is evaluated at x₀ ∈ ∂M with |ξ′| = 1 and h(0) = 1. The
//! symbol order is tracked so that ∂_{x_n} can recover the |ξ′|-dependence
//! that the normalization hides.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::arith::{BigRational, GaussianRational};
use crate::clifford::{reduce_word, word_text, CliffordElement, CliffordError, Letter, Word};
use crate::ratfunc::{join_signed, RatFuncError, RatFuncXi};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SymbolError {
    #[error("product of two non-trivial xi' structures ({0} * {1}) is not housed")]
    StructureProduct(&'static str, &'static str),
    #[error("x_n-derivative of {0} is not housed")]
    UnsupportedDerivative(String),
    #[error(transparent)]
    Clifford(#[from] CliffordError),
    #[error(transparent)]
    RatFunc(#[from] RatFuncError),
    #[error("expression is not a pure radial function: {0}")]
    NotRadial(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Hp,
    GTt,
    XnYn,
    DGTt,
    DXnYn,
    XYn,
    Vol,
    Pi,
    EinsteinXy,
    SgXy,
}

pub const ALL_ATOMS: [Atom; 10] = [
    Atom::Hp,
    Atom::GTt,
    Atom::XnYn,
    Atom::DGTt,
    Atom::DXnYn,
    Atom::XYn,
    Atom::Vol,
    Atom::Pi,
    Atom::EinsteinXy,
    Atom::SgXy,
];

impl Atom {
    pub fn tag(self) -> &'static str {
        match self {
            Atom::Hp => "HP",
            Atom::GTt => "G_TT",
            Atom::XnYn => "XNYN",
            Atom::DGTt => "D_G_TT",
            Atom::DXnYn => "D_XNYN",
            Atom::XYn => "XYN",
            Atom::Vol => "VOL",
            Atom::Pi => "PI",
            Atom::EinsteinXy => "EINSTEIN_XY",
            Atom::SgXy => "SG_XY",
        }
    }

    /// Name used in geometric output.
    pub fn display_name(self) -> &'static str {
        match self {
            Atom::Hp => "h'(0)",
            Atom::GTt => "g(XT,YT)",
            Atom::XnYn => "Xn*Yn",
            Atom::DGTt => "dxn(g(XT,YT))",
            Atom::DXnYn => "dxn(Xn*Yn)",
            Atom::XYn => "X(Yn)",
            Atom::Vol => "Vol(S^{n-2})",
            Atom::Pi => "pi",
            Atom::EinsteinXy => "[Ric(X,Y)-(1/2)*s*g(X,Y)]",
            Atom::SgXy => "s*g(X,Y)",
        }
    }

    pub fn latex_name(self) -> &'static str {
        match self {
            Atom::Hp => "h'(0)",
            Atom::GTt => "g(X^T,Y^T)",
            Atom::XnYn => "X_nY_n",
            Atom::DGTt => "\\partial_{x_n}g(X^T,Y^T)",
            Atom::DXnYn => "\\partial_{x_n}(X_nY_n)",
            Atom::XYn => "X(Y_n)",
            Atom::Vol => "\\mathrm{Vol}(S^{n-2})",
            Atom::Pi => "\\pi",
            Atom::EinsteinXy => "\\big[\\mathrm{Ric}(X,Y)-\\tfrac12 s\\,g(X,Y)\\big]",
            Atom::SgXy => "s\\,g(X,Y)",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        ALL_ATOMS.iter().copied().find(|a| a.tag() == s)
    }
}

/// Commuting monomial over atoms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(BTreeMap<Atom, u32>);

impl Monomial {
    pub fn one() -> Self {
        Self::default()
    }

    pub fn atom(a: Atom) -> Self {
        Self::power(a, 1)
    }

    pub fn power(a: Atom, e: u32) -> Self {
        let mut m = BTreeMap::new();
        if e > 0 {
            m.insert(a, e);
        }
        Self(m)
    }

    pub fn from_pairs(pairs: &[(Atom, u32)]) -> Self {
        pairs.iter().fold(Self::one(), |m, (a, e)| m.mul(&Self::power(*a, *e)))
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, a: Atom) -> u32 {
        self.0.get(&a).copied().unwrap_or(0)
    }

    pub fn atoms(&self) -> &BTreeMap<Atom, u32> {
        &self.0
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut m = self.0.clone();
        for (a, e) in &rhs.0 {
            *m.entry(*a).or_insert(0) += e;
        }
        Self(m)
    }

    /// Removes one power of `a`; None when absent.
    pub fn divide_atom(&self, a: Atom) -> Option<Self> {
        let e = self.exponent(a);
        if e == 0 {
            return None;
        }
        let mut m = self.0.clone();
        if e == 1 {
            m.remove(&a);
        } else {
            m.insert(a, e - 1);
        }
        Some(Self(m))
    }

    pub fn without(&self, a: Atom) -> Self {
        let mut m = self.0.clone();
        m.remove(&a);
        Self(m)
    }

    fn join(&self, name: fn(Atom) -> &'static str, sep: &str) -> String {
        let mut parts = Vec::new();
        for (a, e) in &self.0 {
            match e {
                1 => parts.push(name(*a).to_string()),
                _ => parts.push(format!("{}^{e}", name(*a))),
            }
        }
        parts.join(sep)
    }

    /// Tag text such as `HP*G_TT^2`, or `1`.
    pub fn tag_text(&self) -> String {
        if self.is_one() {
            "1".into()
        } else {
            self.join(Atom::tag, "*")
        }
    }

    pub fn display_text(&self) -> String {
        if self.is_one() {
            "1".into()
        } else {
            self.join(Atom::display_name, "*")
        }
    }

    pub fn latex_text(&self) -> String {
        self.join(Atom::latex_name, " ")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum XiStructure {
    One,
    SXy,
    SdXy,
    SCross,
    SdCross,
}

pub const ALL_STRUCTURES: [XiStructure; 5] =
    [XiStructure::One, XiStructure::SXy, XiStructure::SdXy, XiStructure::SCross, XiStructure::SdCross];

impl XiStructure {
    pub fn tag(self) -> &'static str {
        match self {
            XiStructure::One => "ONE",
            XiStructure::SXy => "S_XY",
            XiStructure::SdXy => "S_dXY",
            XiStructure::SCross => "S_CROSS",
            XiStructure::SdCross => "S_dCROSS",
        }
    }

    pub fn from_tag(s: &str) -> Option<Self> {
        ALL_STRUCTURES.iter().copied().find(|x| x.tag() == s)
    }

    /// Polynomial degree in ξ′.
    pub fn degree(self) -> i32 {
        match self {
            XiStructure::One => 0,
            XiStructure::SXy | XiStructure::SdXy => 2,
            XiStructure::SCross | XiStructure::SdCross => 1,
        }
    }

    pub fn is_odd(self) -> bool {
        self.degree() % 2 == 1
    }

    pub fn product(self, rhs: Self) -> Result<Self, SymbolError> {
        match (self, rhs) {
            (XiStructure::One, s) | (s, XiStructure::One) => Ok(s),
            (a, b) => Err(SymbolError::StructureProduct(a.tag(), b.tag())),
        }
    }

    /// ∂_{x_n} acting on the X, Y components inside the structure.
    fn derivative(self) -> Result<Option<Self>, SymbolError> {
        match self {
            XiStructure::One => Ok(None),
            XiStructure::SXy => Ok(Some(XiStructure::SdXy)),
            XiStructure::SCross => Ok(Some(XiStructure::SdCross)),
            s => Err(SymbolError::UnsupportedDerivative(s.tag().to_string())),
        }
    }
}

/// Key of one symbol term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TermKey {
    pub monomial: Monomial,
    pub structure: XiStructure,
    pub word: Word,
}

impl TermKey {
    pub fn scalar() -> Self {
        Self { monomial: Monomial::one(), structure: XiStructure::One, word: Vec::new() }
    }

    pub fn is_scalar(&self) -> bool {
        self.monomial.is_one() && self.structure == XiStructure::One && self.word.is_empty()
    }
}

/// A boundary symbol of fixed order (homogeneity degree in ξ).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SymbolExpr {
    pub order: i32,
    terms: BTreeMap<TermKey, RatFuncXi>,
}

impl SymbolExpr {
    pub fn zero(order: i32) -> Self {
        Self { order, terms: BTreeMap::new() }
    }

    pub fn radial(r: RatFuncXi, order: i32) -> Self {
        Self::term(TermKey::scalar(), r, order)
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::radial(RatFuncXi::constant(c), 0)
    }

    pub fn term(key: TermKey, r: RatFuncXi, order: i32) -> Self {
        let mut e = Self::zero(order);
        e.insert(key, r);
        e
    }

    pub fn atom(a: Atom) -> Self {
        Self::term(
            TermKey { monomial: Monomial::atom(a), structure: XiStructure::One, word: Vec::new() },
            RatFuncXi::one(),
            0,
        )
    }

    pub fn structure(s: XiStructure) -> Self {
        Self::term(TermKey { monomial: Monomial::one(), structure: s, word: Vec::new() }, RatFuncXi::one(), 0)
    }

    pub fn letter(l: Letter) -> Self {
        Self::term(TermKey { monomial: Monomial::one(), structure: XiStructure::One, word: vec![l] }, RatFuncXi::one(), 0)
    }

    pub fn from_clifford(e: &CliffordElement) -> Self {
        let mut out = Self::zero(0);
        for (w, c) in e.terms() {
            out.insert(
                TermKey { monomial: Monomial::one(), structure: XiStructure::One, word: w.clone() },
                RatFuncXi::constant(c.clone()),
            );
        }
        out
    }

    pub fn with_order(mut self, order: i32) -> Self {
        self.order = order;
        self
    }

    /// Adds r to the term at `key`, reducing the word first.
    pub fn insert(&mut self, key: TermKey, r: RatFuncXi) {
        if r.is_zero() {
            return;
        }
        let (neg, word) = reduce_word(&key.word);
        let key = TermKey { word, ..key };
        let r = if neg { r.neg() } else { r };
        let sum = match self.terms.remove(&key) {
            Some(old) => old.add(&r),
            None => r,
        };
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn terms(&self) -> &BTreeMap<TermKey, RatFuncXi> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn get(&self, key: &TermKey) -> Option<&RatFuncXi> {
        self.terms.get(key)
    }

    /// The radial function when the expression is c(ξ_n)·1.
    pub fn as_radial(&self) -> Result<RatFuncXi, SymbolError> {
        match self.terms.len() {
            0 => Ok(RatFuncXi::zero()),
            1 => {
                let (k, r) = self.terms.iter().next().expect("one term");
                if k.is_scalar() {
                    Ok(r.clone())
                } else {
                    Err(SymbolError::NotRadial(self.to_text()))
                }
            }
            _ => Err(SymbolError::NotRadial(self.to_text())),
        }
    }

    pub fn contains_p0(&self) -> bool {
        self.terms.keys().any(|k| k.word.contains(&Letter::P0))
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = if self.is_zero() { Self::zero(rhs.order) } else { Self::zero(self.order) };
        for src in [self, rhs] {
            for (k, r) in &src.terms {
                out.insert(k.clone(), r.clone());
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_radial(|r| r.neg())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        self.map_radial(|r| r.scale_by(c))
    }

    pub fn scale_radial(&self, q: &RatFuncXi) -> Self {
        self.map_radial(|r| r.mul(q))
    }

    fn map_radial(&self, f: impl Fn(&RatFuncXi) -> RatFuncXi) -> Self {
        let mut out = Self::zero(self.order);
        for (k, r) in &self.terms {
            out.insert(k.clone(), f(r));
        }
        out
    }

    fn try_map_radial(&self, f: impl Fn(&RatFuncXi) -> Result<RatFuncXi, RatFuncError>) -> Result<Self, SymbolError> {
        let mut out = Self::zero(self.order);
        for (k, r) in &self.terms {
            out.insert(k.clone(), f(r)?);
        }
        Ok(out)
    }

    /// Noncommutative product; atoms and radial parts commute, words concatenate.
    pub fn mul(&self, rhs: &Self) -> Result<Self, SymbolError> {
        let mut out = Self::zero(self.order + rhs.order);
        for (ka, ra) in &self.terms {
            for (kb, rb) in &rhs.terms {
                let structure = ka.structure.product(kb.structure)?;
                let mut word = ka.word.clone();
                word.extend_from_slice(&kb.word);
                let key = TermKey { monomial: ka.monomial.mul(&kb.monomial), structure, word };
                out.insert(key, ra.mul(rb));
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Result<Self, SymbolError> {
        let mut acc = Self::constant(GaussianRational::one());
        for _ in 0..e {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// ∂^m_{ξ_n} termwise.
    pub fn d_xin(&self, m: u32) -> Self {
        let mut out = self.map_radial(|r| r.differentiate(m));
        out.order = self.order - m as i32;
        out
    }

    /// π⁺ termwise.
    pub fn pi_plus(&self) -> Result<Self, SymbolError> {
        self.try_map_radial(|r| r.pi_plus())
    }

    /// True when some radial part had a polynomial part dropped by π⁺.
    pub fn pi_plus_drops_polynomial(&self) -> Result<bool, SymbolError> {
        for r in self.terms.values() {
            if !r.pi_plus_detailed()?.dropped_polynomial.is_zero() {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// ∂_{x_n} at x₀.
    ///
    /// A term s·w·R(ξ_n) of a symbol of order K stands for
    /// |ξ′|^{K−deg s} R(ξ_n/|ξ′|) with ∂_{x_n}|ξ′| = h′(0)/2, giving
    /// (h′(0)/2)((K − deg s)R − ξ_n R′). c(ξ′) letters carry one power of
    /// |ξ′| each, which reproduces ∂_{x_n}c(ξ′) = (h′(0)/2)c(ξ′).
    pub fn d_xn(&self) -> Result<Self, SymbolError> {
        let mut out = Self::zero(self.order);
        let half = GaussianRational::from_ratio(1, 2);
        for (k, r) in &self.terms {
            if let Some(ds) = k.structure.derivative()? {
                out.insert(TermKey { structure: ds, ..k.clone() }, r.clone());
            }
            for (a, e) in k.monomial.atoms() {
                match a {
                    Atom::XnYn => {
                        let m = k.monomial.divide_atom(Atom::XnYn).expect("present").mul(&Monomial::atom(Atom::DXnYn));
                        let c = GaussianRational::from(*e as i64);
                        out.insert(TermKey { monomial: m, ..k.clone() }, r.scale_by(&c));
                    }
                    Atom::Vol | Atom::Pi => {}
                    other => return Err(SymbolError::UnsupportedDerivative(other.tag().to_string())),
                }
            }
            let kk = GaussianRational::from((self.order - k.structure.degree()) as i64);
            let drift = r.scale_by(&kk).sub(&RatFuncXi::xi().mul(&r.differentiate(1)));
            let m = k.monomial.mul(&Monomial::atom(Atom::Hp));
            out.insert(TermKey { monomial: m, ..k.clone() }, drift.scale_by(&half));
        }
        Ok(out)
    }

    /// Replaces each P0 letter by `rule`.
    pub fn substitute_p0(&self, rule: &SymbolExpr) -> Result<Self, SymbolError> {
        if rule.contains_p0() {
            return Err(CliffordError::RuleContainsP0.into());
        }
        let mut out = Self::zero(self.order);
        for (k, r) in &self.terms {
            if !k.word.contains(&Letter::P0) {
                out.insert(k.clone(), r.clone());
                continue;
            }
            let mut acc = Self::term(TermKey { word: Vec::new(), ..k.clone() }, r.clone(), 0);
            for (idx, seg) in k.word.split(|l| *l == Letter::P0).enumerate() {
                if idx > 0 {
                    acc = acc.mul(rule)?;
                }
                let seg_expr = Self::term(
                    TermKey { monomial: Monomial::one(), structure: XiStructure::One, word: seg.to_vec() },
                    RatFuncXi::one(),
                    0,
                );
                acc = acc.mul(&seg_expr)?;
            }
            for (k2, r2) in acc.terms {
                out.insert(k2, r2);
            }
        }
        Ok(out)
    }

    /// Spinor trace with the given dimension; all words are dropped.
    pub fn trace(&self, dim: &BigRational) -> Result<Self, SymbolError> {
        let mut out = Self::zero(self.order);
        let d = GaussianRational::real(dim.clone());
        for (k, r) in &self.terms {
            if k.word.contains(&Letter::P0) {
                return Err(CliffordError::UnresolvedP0.into());
            }
            if k.word.is_empty() {
                out.insert(k.clone(), r.scale_by(&d));
            }
        }
        Ok(out)
    }

    /// Sphere moments over |ξ′| = 1 in dimension n.
    pub fn sphere_integrate(&self, n: u32) -> Self {
        let mut out = Self::zero(self.order);
        let inv = GaussianRational::from_ratio(1, n as i64 - 1);
        let vol = Monomial::atom(Atom::Vol);
        for (k, r) in &self.terms {
            let base = k.monomial.mul(&vol);
            let put = |out: &mut Self, m: Monomial, c: &GaussianRational| {
                out.insert(TermKey { monomial: m, structure: XiStructure::One, word: k.word.clone() }, r.scale_by(c));
            };
            match k.structure {
                XiStructure::One => put(&mut out, base, &GaussianRational::one()),
                XiStructure::SXy => put(&mut out, base.mul(&Monomial::atom(Atom::GTt)), &inv),
                // Σ∂(X_jY_j) = ∂g(Xᵀ,Yᵀ) + h′(0)g(Xᵀ,Yᵀ)
                XiStructure::SdXy => {
                    put(&mut out, base.mul(&Monomial::atom(Atom::DGTt)), &inv);
                    put(&mut out, base.mul(&Monomial::from_pairs(&[(Atom::Hp, 1), (Atom::GTt, 1)])), &inv);
                }
                XiStructure::SCross | XiStructure::SdCross => {}
            }
        }
        out
    }

    /// Γ⁺ integral in ξ_n of every radial part, returned as coefficients of π.
    pub fn contour_integrate(&self) -> Result<BTreeMap<TermKey, GaussianRational>, SymbolError> {
        let mut out = BTreeMap::new();
        for (k, r) in &self.terms {
            let c = r.contour_integral_upper()?;
            if !c.is_zero() {
                out.insert(k.clone(), c);
            }
        }
        Ok(out)
    }
}

/// σ₂(∇∇)·σ_l: the α = 0 top-order composition term.
pub fn compose_leading(a: &SymbolExpr, b: &SymbolExpr) -> Result<SymbolExpr, SymbolError> {
    a.mul(b)
}

fn key_factor_text(k: &TermKey) -> Vec<String> {
    let mut parts = Vec::new();
    if !k.monomial.is_one() {
        parts.push(k.monomial.tag_text());
    }
    if k.structure != XiStructure::One {
        parts.push(k.structure.tag().to_string());
    }
    if !k.word.is_empty() {
        parts.push(word_text(&k.word, "*"));
    }
    parts
}

fn radial_factor_text(r: &RatFuncXi, partial: bool) -> String {
    let text = if partial { r.to_partial_text() } else { r.to_text() };
    let bare_sum = if partial {
        text.contains(" + ") || text.contains(" - ")
    } else {
        r.is_polynomial() && r.numerator().term_count() > 1
    };
    if bare_sum {
        format!("({text})")
    } else {
        text
    }
}

impl SymbolExpr {
    fn render(&self, partial: bool) -> String {
        let pieces: Vec<String> = self
            .terms
            .iter()
            .map(|(k, r)| {
                let rest = key_factor_text(k);
                if rest.is_empty() {
                    return radial_factor_text(r, partial);
                }
                let rest = rest.join("*");
                match r.as_constant().map(|c| c.to_string()).as_deref() {
                    Some("1") => rest,
                    Some("-1") => format!("-{rest}"),
                    _ => format!("{}*{rest}", radial_factor_text(r, partial)),
                }
            })
            .collect();
        join_signed(&pieces)
    }

    /// Canonical text, re-readable by the expression parser.
    pub fn to_text(&self) -> String {
        self.render(false)
    }

    /// Same, with radial parts as partial fractions.
    pub fn to_partial_text(&self) -> String {
        self.render(true)
    }
}

impl fmt::Display for SymbolExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xi_poly(c: &[i64]) -> RatFuncXi {
        RatFuncXi::from_poly(crate::poly::PolyXi::from_ints(c))
    }

    /// −(S_XY + ξ S_CROSS + ξ² XNYN)
    fn sigma2() -> SymbolExpr {
        let s = SymbolExpr::structure(XiStructure::SXy)
            .add(&SymbolExpr::structure(XiStructure::SCross).scale_radial(&RatFuncXi::xi()))
            .add(&SymbolExpr::atom(Atom::XnYn).scale_radial(&xi_poly(&[0, 0, 1])));
        s.neg().with_order(2)
    }

    #[test]
    fn d_xn_of_radial_power() {
        // ∂_{x_n}(1+ξ²)^{-1} at order −2 = −h′(0)(1+ξ²)^{-2}
        let e = SymbolExpr::radial(RatFuncXi::one_plus_xi2_pow(-1), -2);
        let d = e.d_xn().unwrap();
        let expect = SymbolExpr::atom(Atom::Hp).scale_radial(&RatFuncXi::one_plus_xi2_pow(-2).neg());
        assert_eq!(d.terms(), expect.terms());
        assert!(SymbolExpr::constant(GaussianRational::from(3)).d_xn().unwrap().is_zero());
    }

    #[test]
    fn sphere_moments() {
        let e = SymbolExpr::structure(XiStructure::SXy).sphere_integrate(4);
        let expect = SymbolExpr::term(
            TermKey { monomial: Monomial::from_pairs(&[(Atom::GTt, 1), (Atom::Vol, 1)]), structure: XiStructure::One, word: vec![] },
            RatFuncXi::constant(GaussianRational::from_ratio(1, 3)),
            0,
        );
        assert_eq!(e, expect);
        assert!(SymbolExpr::structure(XiStructure::SCross).sphere_integrate(4).is_zero());
        assert_eq!(SymbolExpr::constant(GaussianRational::one()).sphere_integrate(6), SymbolExpr::atom(Atom::Vol));
    }

    #[test]
    fn leading_composition() {
        let b = SymbolExpr::radial(RatFuncXi::one_plus_xi2_pow(-1), -2);
        let l = compose_leading(&sigma2(), &b).unwrap();
        assert_eq!(l.order, 0);
        assert_eq!(l.len(), 3);
        let id = SymbolExpr::constant(GaussianRational::one());
        assert_eq!(compose_leading(&id, &b).unwrap(), b);
    }

    #[test]
    fn structure_products_are_rejected() {
        let s = SymbolExpr::structure(XiStructure::SXy);
        assert!(matches!(s.mul(&s), Err(SymbolError::StructureProduct(..))));
    }

    #[test]
    fn trace_and_p0() {
        let e = SymbolExpr::letter(Letter::Cxi)
            .mul(&SymbolExpr::letter(Letter::P0))
            .unwrap()
            .mul(&SymbolExpr::letter(Letter::Cxi))
            .unwrap();
        let rule = SymbolExpr::letter(Letter::Cdxn);
        let s = e.substitute_p0(&rule).unwrap();
        assert_eq!(s, SymbolExpr::letter(Letter::Cdxn));
        assert!(e.trace(&BigRational::from_integer(4.into())).is_err());
        let sq = SymbolExpr::letter(Letter::Cxi).pow(2).unwrap();
        let t = sq.trace(&BigRational::from_integer(4.into())).unwrap();
        assert_eq!(t, SymbolExpr::constant(GaussianRational::from(-4)));
    }
}
