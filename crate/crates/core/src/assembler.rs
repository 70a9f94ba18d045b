//! Boundary-term assembly: the five cases per theorem, their sums, the
//! interior term and the three-way reconciliation.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::arith::{BigRational, GaussianRational};
use crate::clifford::trace_dimension;
use crate::coeffs::{check_dimension, CoeffError};
use crate::expr::{parse_symbol, ExprError, Scope};
use crate::finding::Finding;
use crate::fixtures::{FixtureCatalog, FixtureError};
use crate::geometric::GeometricExpression;
use crate::printed;
use crate::ratfunc::RatFuncXi;
use crate::symbols::{compose_leading, Atom, Monomial, SymbolError, SymbolExpr};

pub const DEFAULT_P0_RULE: &str = "-((n-1)/4)*HP*CDXN";
pub const P0_ENV: &str = "WRES_P0_RULE";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssemblyError {
    #[error(transparent)]
    Coeff(#[from] CoeffError),
    #[error(transparent)]
    Fixture(#[from] FixtureError),
    #[error(transparent)]
    Symbol(#[from] SymbolError),
    #[error("p0 rule `{rule}`: {source}")]
    P0Rule { rule: String, source: ExprError },
    #[error("unknown theorem `{0}` (expected t31, t32, t41 or t42)")]
    UnknownTheorem(String),
    #[error("case {0} does not belong to theorem {1}")]
    CaseMismatch(String, Theorem),
    #[error("integration-by-parts shift {shift} exceeds the {m} available xi_n derivatives")]
    Shift { shift: u32, m: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Theorem {
    T31,
    T32,
    T41,
    T42,
}

impl Theorem {
    pub const ALL: [Theorem; 4] = [Theorem::T31, Theorem::T32, Theorem::T41, Theorem::T42];

    pub fn tag(self) -> &'static str {
        match self {
            Theorem::T31 => "t31",
            Theorem::T32 => "t32",
            Theorem::T41 => "t41",
            Theorem::T42 => "t42",
        }
    }

    /// Anchor of the printed boundary statement.
    pub fn anchor(self) -> &'static str {
        match self {
            Theorem::T31 => "795",
            Theorem::T32 => "c28",
            Theorem::T41 => "b7",
            Theorem::T42 => "b7",
        }
    }

    pub fn cases(self) -> Vec<CaseId> {
        let tags: &[CaseTag] = match self {
            Theorem::T31 | Theorem::T32 => &[CaseTag::AI, CaseTag::AII, CaseTag::AIII, CaseTag::B, CaseTag::C],
            Theorem::T41 => &[CaseTag::Psi],
            Theorem::T42 => &[CaseTag::PsiTilde],
        };
        tags.iter().map(|&tag| CaseId { theorem: self, tag }).collect()
    }

    fn odd(self) -> bool {
        matches!(self, Theorem::T41 | Theorem::T42)
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Theorem {
    type Err = AssemblyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Theorem::ALL
            .into_iter()
            .find(|t| t.tag().eq_ignore_ascii_case(s))
            .ok_or_else(|| AssemblyError::UnknownTheorem(s.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CaseTag {
    AI,
    AII,
    AIII,
    B,
    C,
    Psi,
    PsiTilde,
}

impl CaseTag {
    pub fn tag(self) -> &'static str {
        match self {
            CaseTag::AI => "A_I",
            CaseTag::AII => "A_II",
            CaseTag::AIII => "A_III",
            CaseTag::B => "B",
            CaseTag::C => "C",
            CaseTag::Psi => "PSI",
            CaseTag::PsiTilde => "PSI_TILDE",
        }
    }
}

/// Indices of one term of the boundary sum: r, l = −n + l_shift, k, j, |α|.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CaseIndices {
    pub r: i32,
    pub l_shift: i32,
    pub k: u32,
    pub j: u32,
    pub alpha: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CaseId {
    pub theorem: Theorem,
    pub tag: CaseTag,
}

impl CaseId {
    pub fn new(theorem: Theorem, tag: CaseTag) -> Result<Self, AssemblyError> {
        let id = CaseId { theorem, tag };
        if theorem.cases().contains(&id) {
            Ok(id)
        } else {
            Err(AssemblyError::CaseMismatch(tag.tag().to_string(), theorem))
        }
    }

    pub fn label(self) -> String {
        format!("{}/{}", self.theorem.tag().to_uppercase(), self.tag.tag())
    }

    pub fn indices(self) -> CaseIndices {
        let (r, l_shift) = match (self.theorem, self.tag) {
            (Theorem::T31, CaseTag::B) => (0, 1),
            (Theorem::T31, CaseTag::C) => (-1, 2),
            (Theorem::T31, _) | (Theorem::T41, _) => (0, 2),
            (Theorem::T32, CaseTag::B) => (0, 1),
            (Theorem::T32, CaseTag::C) => (1, 0),
            (Theorem::T32, _) | (Theorem::T42, _) => (1, 1),
        };
        let (k, j, alpha) = match self.tag {
            CaseTag::AI => (0, 0, 1),
            CaseTag::AII => (0, 1, 0),
            CaseTag::AIII => (1, 0, 0),
            _ => (0, 0, 0),
        };
        CaseIndices { r, l_shift, k, j, alpha }
    }

    /// (−i)^{|α|+j+k+1}/(α!(j+k+1)!); here |α| ≤ 1 so α! = 1.
    pub fn prefactor(self) -> GaussianRational {
        let ix = self.indices();
        let e = (ix.alpha + ix.j + ix.k + 1) as i64;
        let f = crate::arith::factorial((ix.j + ix.k + 1) as u64);
        let p = GaussianRational::i_pow(-e);
        p.scale(&BigRational::new(1.into(), f))
    }

    /// Anchor of the printed case result.
    pub fn anchor(self) -> &'static str {
        match (self.theorem, self.tag) {
            (Theorem::T31, CaseTag::AI) => "b25",
            (Theorem::T31, CaseTag::AII) => "35kkk",
            (Theorem::T31, CaseTag::AIII) => "41",
            (Theorem::T31, CaseTag::B) => "39",
            (Theorem::T31, CaseTag::C) => "6666",
            (Theorem::T32, CaseTag::AI) => "c5",
            (Theorem::T32, CaseTag::AII) => "c11",
            (Theorem::T32, CaseTag::AIII) => "c18",
            (Theorem::T32, CaseTag::B) => "c22",
            (Theorem::T32, CaseTag::C) => "c27",
            _ => "b5",
        }
    }

    /// IBP shifts of the second printed form, when the text shows one.
    pub fn printed_shift(self) -> Option<u32> {
        match (self.theorem, self.tag) {
            (Theorem::T31, CaseTag::AIII) | (Theorem::T31, CaseTag::B) => Some(1),
            (Theorem::T32, CaseTag::AII) => Some(2),
            (Theorem::T32, CaseTag::C) => Some(1),
            _ => None,
        }
    }
}

impl fmt::Display for CaseId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    Fixture,
    Derived,
}

impl Variant {
    pub fn tag(self) -> &'static str {
        match self {
            Variant::Fixture => "fixture",
            Variant::Derived => "derived",
        }
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "fixture" => Ok(Variant::Fixture),
            "derived" => Ok(Variant::Derived),
            _ => Err(format!("unknown variant `{s}`")),
        }
    }
}

/// Source of π⁺σ₀(∇∇D⁻²) in derived pipelines.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Aa38Branch {
    /// The printed projection (default).
    Printed,
    /// The engine's principal part at +i.
    PrincipalPart,
}

impl Aa38Branch {
    pub fn tag(self) -> &'static str {
        match self {
            Aa38Branch::Printed => "printed",
            Aa38Branch::PrincipalPart => "principal-part",
        }
    }
}

impl FromStr for Aa38Branch {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "printed" => Ok(Aa38Branch::Printed),
            "principal-part" => Ok(Aa38Branch::PrincipalPart),
            _ => Err(format!("unknown aa38 branch `{s}`")),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Config {
    pub p0_rule: String,
    pub aa38: Aa38Branch,
    pub catalog: Arc<FixtureCatalog>,
}

impl Default for Config {
    fn default() -> Self {
        Self { p0_rule: DEFAULT_P0_RULE.to_string(), aa38: Aa38Branch::Printed, catalog: Arc::new(FixtureCatalog::bundled()) }
    }
}

impl Config {
    /// Default configuration with `WRES_P0_RULE` applied.
    pub fn from_env() -> Self {
        let mut c = Self::default();
        if let Ok(rule) = std::env::var(P0_ENV) {
            if !rule.trim().is_empty() {
                c.p0_rule = rule;
            }
        }
        c
    }

    pub fn with_aa38(mut self, b: Aa38Branch) -> Self {
        self.aa38 = b;
        self
    }

    pub fn with_p0_rule(mut self, rule: &str) -> Self {
        self.p0_rule = rule.to_string();
        self
    }

    pub fn p0_symbol(&self, n: u32) -> Result<SymbolExpr, AssemblyError> {
        parse_symbol(&self.p0_rule, &Scope::new(n))
            .map_err(|source| AssemblyError::P0Rule { rule: self.p0_rule.clone(), source })
    }

    fn fx(&self, id: &str, n: u32) -> Result<SymbolExpr, AssemblyError> {
        Ok(self.catalog.load(id, n)?)
    }
}

/// ∫ trace[left·∂^{m}_{ξ_n} right] with a prefactor, before any IBP move.
#[derive(Clone, Debug)]
pub struct CasePipeline {
    pub left: SymbolExpr,
    pub right: SymbolExpr,
    pub m: u32,
    pub prefactor: GaussianRational,
    pub trace_dim: BigRational,
}

impl CasePipeline {
    /// Evaluates with `shift` ξ_n-derivatives moved onto the left factor.
    pub fn evaluate(&self, n: u32, shift: u32, p0: &SymbolExpr) -> Result<GeometricExpression, AssemblyError> {
        if shift > self.m {
            return Err(AssemblyError::Shift { shift, m: self.m });
        }
        let sign = if shift.is_multiple_of(2) { GaussianRational::one() } else { -GaussianRational::one() };
        let mut prod = self.left.d_xin(shift).mul(&self.right.d_xin(self.m - shift))?;
        if prod.contains_p0() {
            prod = prod.substitute_p0(p0)?;
        }
        let reduced = prod.trace(&self.trace_dim)?.sphere_integrate(n);
        let pi = Monomial::atom(Atom::Pi);
        let mut out = GeometricExpression::zero();
        for (k, c) in reduced.contour_integrate()? {
            if !k.word.is_empty() || k.structure != crate::symbols::XiStructure::One {
                return Err(SymbolError::NotRadial(reduced.to_text()).into());
            }
            out.insert(k.monomial.mul(&pi), &(&c * &sign) * &self.prefactor);
        }
        Ok(out)
    }
}

/// Engine-side symbols shared by the derived pipelines.
pub struct DerivedInputs {
    pub sigma0: SymbolExpr,
    pub pi_sigma0: SymbolExpr,
    pub sigma1: SymbolExpr,
    pub pi_sigma1: SymbolExpr,
}

impl DerivedInputs {
    pub fn new(n: u32, cfg: &Config) -> Result<Self, AssemblyError> {
        let s2 = cfg.fx("L21_S2", n)?;
        let sigma0 = compose_leading(&s2, &cfg.fx("L22_M2", n)?)?;
        let sigma1 = compose_leading(&s2, &cfg.fx("L23_M1", n)?)?;
        let pi_sigma0 = match cfg.aa38 {
            Aa38Branch::Printed => cfg.fx("AA38", n)?,
            Aa38Branch::PrincipalPart => sigma0.pi_plus()?,
        };
        let pi_sigma1 = sigma1.pi_plus()?;
        Ok(Self { sigma0, pi_sigma0, sigma1, pi_sigma1 })
    }
}

/// (1+ξ_n²)^e as a symbol of order 2e.
fn sphere_power(e: i64) -> SymbolExpr {
    SymbolExpr::radial(RatFuncXi::one_plus_xi2_pow(e), 2 * e as i32)
}

/// The derived pipeline of one case; None for the vanishing A_I cases.
pub fn case_pipeline(id: CaseId, n: u32, cfg: &Config) -> Result<Option<CasePipeline>, AssemblyError> {
    let t = check_dimension(n)?;
    if id.tag == CaseTag::AI {
        return Ok(None);
    }
    let inp = DerivedInputs::new(n, cfg)?;
    let trace_dim = if id.theorem.odd() { trace_dimension(n) / BigRational::from_integer(2.into()) } else { trace_dimension(n) };
    let prefactor = id.prefactor();
    // σ_l of D^{−(n−2)} and D^{−(n−1)}
    let lead_even = sphere_power(1 - t);
    let lead_odd = cfg.fx("C7", n)?;
    let (left, right, m) = match (id.theorem, id.tag) {
        (Theorem::T31, CaseTag::AII) => (inp.pi_sigma0.d_xn()?, lead_even, 2),
        (Theorem::T31, CaseTag::AIII) => (inp.pi_sigma0.d_xin(1), lead_even.d_xn()?, 1),
        (Theorem::T31, CaseTag::B) => (inp.pi_sigma0, cfg.fx("E43", n)?, 1),
        (Theorem::T31, CaseTag::C) => (cfg.fx("E65", n)?, lead_even, 1),
        (Theorem::T32, CaseTag::AII) => (inp.pi_sigma1.d_xn()?, lead_odd, 2),
        (Theorem::T32, CaseTag::AIII) => (inp.pi_sigma1.d_xin(1), lead_odd.d_xn()?, 1),
        (Theorem::T32, CaseTag::B) => (cfg.fx("C21_M1", n)?, lead_odd, 1),
        (Theorem::T32, CaseTag::C) => (inp.pi_sigma1, cfg.fx("C24", n)?, 1),
        (Theorem::T41, CaseTag::Psi) => (inp.pi_sigma0, lead_even, 1),
        (Theorem::T42, CaseTag::PsiTilde) => (inp.pi_sigma1, lead_odd, 1),
        _ => return Err(AssemblyError::CaseMismatch(id.tag.tag().to_string(), id.theorem)),
    };
    Ok(Some(CasePipeline { left, right, m, prefactor, trace_dim }))
}

/// Derived case value in the form with `shift` ξ_n-derivatives moved left.
pub fn case_term_form(id: CaseId, n: u32, shift: u32, cfg: &Config) -> Result<GeometricExpression, AssemblyError> {
    match case_pipeline(id, n, cfg)? {
        None => Ok(GeometricExpression::zero()),
        Some(p) => p.evaluate(n, shift, &cfg.p0_symbol(n)?),
    }
}

pub fn case_term(id: CaseId, n: u32, variant: Variant, cfg: &Config) -> Result<GeometricExpression, AssemblyError> {
    check_dimension(n)?;
    match variant {
        Variant::Derived => case_term_form(id, n, 0, cfg),
        Variant::Fixture => Ok(match (id.theorem, id.tag) {
            (_, CaseTag::AI) => GeometricExpression::zero(),
            (Theorem::T31, CaseTag::AII) => printed::phi2(n)?,
            (Theorem::T31, CaseTag::AIII) => printed::phi3(n)?,
            (Theorem::T31, CaseTag::B) => printed::phi4(n)?,
            (Theorem::T31, CaseTag::C) => printed::phi5(n)?,
            (Theorem::T32, CaseTag::AII) => printed::tphi2(n)?,
            (Theorem::T32, CaseTag::AIII) => printed::tphi3(n)?,
            (Theorem::T32, CaseTag::B) => printed::tphi4(n)?,
            (Theorem::T32, CaseTag::C) => printed::tphi5(n)?,
            (Theorem::T41, CaseTag::Psi) => printed::psi(n)?,
            (Theorem::T42, CaseTag::PsiTilde) => printed::tpsi(n)?,
            _ => return Err(AssemblyError::CaseMismatch(id.tag.tag().to_string(), id.theorem)),
        }),
    }
}

/// Per-case values in CaseId order, evaluated concurrently.
pub fn case_terms(theorem: Theorem, n: u32, variant: Variant, cfg: &Config) -> Result<Vec<(CaseId, GeometricExpression)>, AssemblyError> {
    let mut v: Vec<(CaseId, GeometricExpression)> = theorem
        .cases()
        .into_par_iter()
        .map(|id| case_term(id, n, variant, cfg).map(|e| (id, e)))
        .collect::<Result<_, _>>()?;
    v.sort_by_key(|(id, _)| *id);
    Ok(v)
}

pub fn boundary_term(theorem: Theorem, n: u32, variant: Variant, cfg: &Config) -> Result<GeometricExpression, AssemblyError> {
    Ok(case_terms(theorem, n, variant, cfg)?.iter().fold(GeometricExpression::zero(), |acc, (_, e)| acc.add(e)))
}

/// The boundary part of the printed theorem.
pub fn printed_theorem(theorem: Theorem, n: u32) -> Result<GeometricExpression, AssemblyError> {
    Ok(match theorem {
        Theorem::T31 => printed::phi_total(n)?,
        Theorem::T32 => printed::tphi_total(n)?,
        Theorem::T41 => printed::psi(n)?,
        Theorem::T42 => printed::tpsi(n)?,
    })
}

pub fn interior_term(n: u32) -> Result<GeometricExpression, AssemblyError> {
    Ok(printed::interior(n)?)
}

/// A fixture compared with the engine's own derivation of it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntermediateCheck {
    pub fixture: String,
    pub anchor: String,
    pub derivation: String,
    /// (term, fixture radial part, derived radial part) for each differing term.
    pub differences: Vec<(String, String, String)>,
}

impl IntermediateCheck {
    pub fn agrees(&self) -> bool {
        self.differences.is_empty()
    }

    pub fn to_json(&self) -> Value {
        let diffs: Vec<Value> = self
            .differences
            .iter()
            .map(|(k, a, b)| json!({ "term": k, "fixture": a, "derived": b }))
            .collect();
        json!({
            "fixture": self.fixture,
            "anchor": self.anchor,
            "derivation": self.derivation,
            "agrees": self.agrees(),
            "differences": diffs,
        })
    }

    fn finding(&self) -> Option<Finding> {
        if self.agrees() {
            return None;
        }
        let terms: Vec<&str> = self.differences.iter().map(|(k, _, _)| k.as_str()).collect();
        let mut f = Finding::new(
            "intermediate-mismatch",
            &self.anchor,
            self.fixture.clone(),
            format!("printed {} differs from {} on {}", self.fixture, self.derivation, terms.join(", ")),
        );
        for (k, a, b) in &self.differences {
            f = f.with(&format!("{k}:printed"), a).with(&format!("{k}:derived"), b);
        }
        Some(f)
    }
}

fn key_text(k: &crate::symbols::TermKey) -> String {
    let t = SymbolExpr::term(k.clone(), RatFuncXi::one(), 0).to_text();
    if t.is_empty() {
        "1".into()
    } else {
        t
    }
}

/// Termwise differences between two symbols.
pub fn symbol_differences(a: &SymbolExpr, b: &SymbolExpr) -> Vec<(String, String, String)> {
    let mut keys: Vec<_> = a.terms().keys().chain(b.terms().keys()).cloned().collect();
    keys.sort();
    keys.dedup();
    let zero = RatFuncXi::zero();
    keys.into_iter()
        .filter_map(|k| {
            let (x, y) = (a.get(&k).unwrap_or(&zero), b.get(&k).unwrap_or(&zero));
            (x != y).then(|| (key_text(&k), x.to_text(), y.to_text()))
        })
        .collect()
}

fn check(fixture: &str, anchor: &str, derivation: &str, printed: &SymbolExpr, derived: &SymbolExpr) -> IntermediateCheck {
    IntermediateCheck {
        fixture: fixture.to_string(),
        anchor: anchor.to_string(),
        derivation: derivation.to_string(),
        differences: symbol_differences(printed, derived),
    }
}

/// Printed intermediate symbols checked against in-engine derivations.
pub fn intermediate_checks(theorem: Theorem, n: u32, cfg: &Config) -> Result<Vec<IntermediateCheck>, AssemblyError> {
    let t = check_dimension(n)?;
    let engine = DerivedInputs::new(n, &cfg.clone().with_aa38(Aa38Branch::PrincipalPart))?;
    let fx = |id: &str| cfg.fx(id, n);
    let mut out = Vec::new();
    match theorem {
        Theorem::T31 | Theorem::T41 => {
            let aa38 = fx("AA38")?;
            let sl = sphere_power(1 - t);
            out.push(check("L24_D2", "mki", "compose(L21_S2, L22_M2)", &fx("L24_D2")?, &engine.sigma0));
            out.push(check("AA38", "aa38", "pi_plus(sigma_0)", &aa38, &engine.pi_sigma0));
            out.push(check("E62", "62", "d_xi(sigma_l)", &fx("E62")?, &sl.d_xin(1)));
            if theorem == Theorem::T31 {
                out.push(check("E45", "45", "d_xi(AA38)", &fx("E45")?, &aa38.d_xin(1)));
                out.push(check("MMMMM", "mmmmm", "d_xi^2(AA38)", &fx("MMMMM")?, &aa38.d_xin(2)));
                out.push(check("B27", "b27", "d_xn(sigma_0)", &fx("B27")?, &engine.sigma0.d_xn()?));
                out.push(check("B28", "b28", "d_xn(AA38)", &fx("B28")?, &aa38.d_xn()?));
                out.push(check("E37", "37", "d_xn(sigma_l)", &fx("E37")?, &sl.d_xn()?));
                out.push(check("B237", "b237", "d_xi^2(sigma_l)", &fx("B237")?, &sl.d_xin(2)));
            }
        }
        Theorem::T32 | Theorem::T42 => {
            let c38 = fx("C38")?;
            let c7 = fx("C7")?;
            out.push(check("L24_D1", "mki", "compose(L21_S2, L23_M1)", &fx("L24_D1")?, &engine.sigma1));
            out.push(check("C38", "c38", "pi_plus(sigma_1)", &c38, &engine.pi_sigma1));
            out.push(check("C20", "c20", "d_xi(C7)", &fx("C20")?, &c7.d_xin(1)));
            if theorem == Theorem::T32 {
                out.push(check("C8", "c8", "d_xn(sigma_1)", &fx("C8")?, &engine.sigma1.d_xn()?));
                out.push(check("C25", "c25", "d_xi(C38)", &fx("C25")?, &c38.d_xin(1)));
                out.push(check("C14", "c14", "d_xi^2(C38)", &fx("C14")?, &c38.d_xin(2)));
                out.push(check("C13", "c13", "d_xn(C7)", &fx("C13")?, &c7.d_xn()?));
            }
        }
    }
    Ok(out)
}

/// One atom-monomial row of a reconciliation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReconcileEntry {
    pub monomial: Monomial,
    pub fixture: GaussianRational,
    pub derived: GaussianRational,
    pub derived_alternate: GaussianRational,
    pub printed: GaussianRational,
    /// The derived value changes with the p₀ rule.
    pub p0_conditional: bool,
}

impl ReconcileEntry {
    pub fn agrees(&self) -> bool {
        self.fixture == self.derived && self.derived == self.printed
    }

    pub fn to_json(&self) -> Value {
        json!({
            "monomial": self.monomial.tag_text(),
            "display": self.monomial.display_text(),
            "fixture": self.fixture.to_string(),
            "derived": self.derived.to_string(),
            "derived_aa38_alternate": self.derived_alternate.to_string(),
            "printed": self.printed.to_string(),
            "agrees": self.agrees(),
            "conditional_on_p0_rule": self.p0_conditional,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CaseComparison {
    pub case: CaseId,
    pub fixture: GeometricExpression,
    pub derived: GeometricExpression,
    /// Derived value in the second printed form, when there is one.
    pub derived_moved: Option<(u32, GeometricExpression)>,
}

impl CaseComparison {
    pub fn to_json(&self) -> Value {
        let diff: Vec<Value> = self
            .fixture
            .diff(&self.derived)
            .into_iter()
            .map(|(m, a, b)| json!({ "monomial": m.tag_text(), "fixture": a.to_string(), "derived": b.to_string() }))
            .collect();
        json!({
            "case": self.case.label(),
            "anchor": self.case.anchor(),
            "prefactor": self.case.prefactor().to_string(),
            "fixture": self.fixture.to_json(),
            "derived": self.derived.to_json(),
            "ibp_form": self.derived_moved.as_ref().map(|(s, e)| json!({ "shift": s, "agrees": e == &self.derived })),
            "diff": diff,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReconcileReport {
    pub theorem: Theorem,
    pub n: u32,
    pub p0_rule: String,
    pub aa38: Aa38Branch,
    pub fixture: GeometricExpression,
    pub derived: GeometricExpression,
    pub derived_alternate: GeometricExpression,
    pub printed: GeometricExpression,
    pub entries: Vec<ReconcileEntry>,
    pub cases: Vec<CaseComparison>,
    pub intermediates: Vec<IntermediateCheck>,
    pub findings: Vec<Finding>,
}

impl ReconcileReport {
    /// Rows where the three paths disagree.
    pub fn diff(&self) -> Vec<&ReconcileEntry> {
        self.entries.iter().filter(|e| !e.agrees()).collect()
    }

    /// Rows where the fixture path and the printed theorem disagree.
    pub fn fixture_diff(&self) -> Vec<&ReconcileEntry> {
        self.entries.iter().filter(|e| e.fixture != e.printed).collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "theorem": self.theorem.tag(),
            "n": self.n,
            "anchor": self.theorem.anchor(),
            "p0_rule": self.p0_rule,
            "aa38_branch": self.aa38.tag(),
            "fixture": self.fixture.to_json(),
            "derived": self.derived.to_json(),
            "derived_aa38_alternate": self.derived_alternate.to_json(),
            "printed": self.printed.to_json(),
            "entries": self.entries.iter().map(ReconcileEntry::to_json).collect::<Vec<_>>(),
            "cases": self.cases.iter().map(CaseComparison::to_json).collect::<Vec<_>>(),
            "intermediates": self.intermediates.iter().map(IntermediateCheck::to_json).collect::<Vec<_>>(),
        })
    }
}

/// p₀ rule used to detect which derived coefficients depend on the rule.
const P0_PROBE_RULE: &str = "HP*CXI";

pub fn reconcile(theorem: Theorem, n: u32, cfg: &Config) -> Result<ReconcileReport, AssemblyError> {
    let other = match cfg.aa38 {
        Aa38Branch::Printed => Aa38Branch::PrincipalPart,
        Aa38Branch::PrincipalPart => Aa38Branch::Printed,
    };
    let alt_cfg = cfg.clone().with_aa38(other);
    let probe_cfg = cfg.clone().with_p0_rule(P0_PROBE_RULE);
    let fixture_cases = case_terms(theorem, n, Variant::Fixture, cfg)?;
    let derived_cases = case_terms(theorem, n, Variant::Derived, cfg)?;
    let fixture = sum_cases(&fixture_cases);
    let derived = sum_cases(&derived_cases);
    let derived_alternate = boundary_term(theorem, n, Variant::Derived, &alt_cfg)?;
    let probe = boundary_term(theorem, n, Variant::Derived, &probe_cfg)?;
    let printed = printed_theorem(theorem, n)?;

    let mut monomials: Vec<Monomial> = [&fixture, &derived, &derived_alternate, &printed, &probe]
        .iter()
        .flat_map(|e| e.terms().keys().cloned())
        .collect();
    monomials.sort();
    monomials.dedup();
    let entries: Vec<ReconcileEntry> = monomials
        .into_iter()
        .map(|m| ReconcileEntry {
            fixture: fixture.coefficient(&m),
            derived: derived.coefficient(&m),
            derived_alternate: derived_alternate.coefficient(&m),
            printed: printed.coefficient(&m),
            p0_conditional: derived.coefficient(&m) != probe.coefficient(&m),
            monomial: m,
        })
        .collect();

    let p0 = cfg.p0_symbol(n)?;
    let mut cases = Vec::new();
    for ((id, fx), (_, dv)) in fixture_cases.into_iter().zip(derived_cases) {
        let moved = match (id.printed_shift(), case_pipeline(id, n, cfg)?) {
            (Some(s), Some(p)) => Some((s, p.evaluate(n, s, &p0)?)),
            _ => None,
        };
        cases.push(CaseComparison { case: id, fixture: fx, derived: dv, derived_moved: moved });
    }
    let intermediates = intermediate_checks(theorem, n, cfg)?;

    let mut findings: Vec<Finding> = intermediates.iter().filter_map(IntermediateCheck::finding).collect();
    for c in &cases {
        for (m, a, b) in c.fixture.diff(&c.derived) {
            let conditional = entries.iter().any(|e| e.monomial == m && e.p0_conditional);
            let mut f = Finding::new(
                "case-mismatch",
                c.case.anchor(),
                format!("{}:{}", c.case.label(), m.tag_text()),
                format!("printed case value differs from the derived pipeline on {}", m.display_text()),
            )
            .with("printed", &a)
            .with("derived", &b)
            .with("n", n);
            if conditional {
                f = f.with("conditional_on", format!("p0_rule={}", cfg.p0_rule));
            }
            findings.push(f);
        }
        if let Some((s, e)) = &c.derived_moved {
            if e != &c.derived {
                findings.push(
                    Finding::new("ibp-inconsistency", c.case.anchor(), c.case.label(), "derived value changes when moving xi_n derivatives")
                        .with("shift", s),
                );
            }
        }
    }
    for e in entries.iter().filter(|e| e.fixture != e.printed) {
        findings.push(
            Finding::new(
                "case-sum-mismatch",
                theorem.anchor(),
                format!("{}:{}", theorem.tag().to_uppercase(), e.monomial.tag_text()),
                format!("sum of printed cases differs from the printed theorem on {}", e.monomial.display_text()),
            )
            .with("case_sum", &e.fixture)
            .with("printed", &e.printed)
            .with("n", n),
        );
    }
    if theorem == Theorem::T42 {
        let expanded = printed::tpsi_expanded(n)?;
        let abbreviated = printed::tpsi(n)?;
        if expanded != abbreviated {
            findings.push(
                Finding::new("internal-inconsistency", "b5", "PSI_TILDE", "the unabbreviated and the N0/N1 form of the printed equation differ")
                    .with("unabbreviated", expanded.to_text())
                    .with("abbreviated", abbreviated.to_text())
                    .with("n", n),
            );
        }
    }
    findings.sort();
    Ok(ReconcileReport {
        theorem,
        n,
        p0_rule: cfg.p0_rule.clone(),
        aa38: cfg.aa38,
        fixture,
        derived,
        derived_alternate,
        printed,
        entries,
        cases,
        intermediates,
        findings,
    })
}

fn sum_cases(v: &[(CaseId, GeometricExpression)]) -> GeometricExpression {
    v.iter().fold(GeometricExpression::zero(), |acc, (_, e)| acc.add(e))
}

/// Every case value keyed by label, for reports.
pub fn case_table(theorem: Theorem, n: u32, cfg: &Config) -> Result<BTreeMap<String, (GeometricExpression, GeometricExpression)>, AssemblyError> {
    let f = case_terms(theorem, n, Variant::Fixture, cfg)?;
    let d = case_terms(theorem, n, Variant::Derived, cfg)?;
    Ok(f.into_iter().zip(d).map(|((id, a), (_, b))| (id.label(), (a, b))).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefactors() {
        let c = |t, g| CaseId::new(t, g).unwrap().prefactor();
        assert_eq!(c(Theorem::T31, CaseTag::AII), GaussianRational::from_ratio(-1, 2));
        assert_eq!(c(Theorem::T31, CaseTag::AI), GaussianRational::from_ratio(-1, 1));
        assert_eq!(c(Theorem::T32, CaseTag::B), -GaussianRational::i());
        assert!(CaseId::new(Theorem::T41, CaseTag::B).is_err());
    }

    #[test]
    fn t41_fixture_and_derived() {
        let cfg = Config::default();
        let fx = boundary_term(Theorem::T41, 4, Variant::Fixture, &cfg).unwrap();
        assert_eq!(fx.to_text(), "(pi/4)*Vol(S^{n-2})*( (1/3)*g(XT,YT) + Xn*Yn )");
        let pp = boundary_term(Theorem::T41, 4, Variant::Derived, &cfg.clone().with_aa38(Aa38Branch::PrincipalPart)).unwrap();
        assert_eq!(pp.to_text(), "(pi/4)*Vol(S^{n-2})*( -(1/3)*g(XT,YT) + Xn*Yn )");
    }

    #[test]
    fn a_i_vanishes() {
        let cfg = Config::default();
        for th in [Theorem::T31, Theorem::T32] {
            for v in [Variant::Fixture, Variant::Derived] {
                assert!(case_term(CaseId::new(th, CaseTag::AI).unwrap(), 4, v, &cfg).unwrap().is_zero());
            }
        }
    }
}
