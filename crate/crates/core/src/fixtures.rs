//! Fixture corpus: named boundary symbols stored as text files.
//!
//! One file per fixture, one record per line:
//!
//! ```text
//! fixture <ID>
//! order <n-expr>            symbol order, may mention n
//! anchor <label>            optional source label, used in findings
//! note <free text>          any number
//! unhoused <reason>         the fixture needs data the engine cannot house
//! n <even>                  optional; restricts `term` records to one dimension
//! let <NAME> = <expr>       binding visible to later lines
//! expr <expr>               summand in the expression language
//! term <re> <im> atoms=<tag:exp,...> xi=<structure> num=<c0,c1,...> poles=<root:mult,...> cliff=<L.L...>
//! ```
//!
//! `term` is the canonical record written by [`canonical_text`]. Its
//! coefficient is `(re + i·im)·num(ξ)/Π(ξ−root)^mult`; `num` and `root`
//! entries use the Gaussian-rational text form (`1/2+3*i/4`).

use std::collections::BTreeMap;
use std::path::Path;

use thiserror::Error;

use crate::arith::{BigRational, GaussianRational};
use crate::clifford::Letter;
use crate::expr::{parse_constant, parse_symbol, ExprError, Scope};
use crate::poly::PolyXi;
use crate::ratfunc::RatFuncXi;
use crate::symbols::{Atom, Monomial, SymbolExpr, TermKey, XiStructure};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FixtureError {
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("fixture {id} is unhoused: {reason}")]
    Unhoused { id: String, reason: String },
    #[error("fixture {id}, line {line}: {source}")]
    Expr { id: String, line: usize, source: ExprError },
    #[error("fixture {id}, line {line}: {message}")]
    Format { id: String, line: usize, message: String },
    #[error("fixture {id} is stored for n = {stored}, requested n = {requested}")]
    WrongDimension { id: String, stored: u32, requested: u32 },
    #[error("cannot read fixtures: {0}")]
    Io(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Body {
    Let(usize, String, String),
    Expr(usize, String),
    Term(usize, String),
}

/// A parsed fixture file, still independent of n.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Fixture {
    pub id: String,
    pub order: String,
    pub anchor: Option<String>,
    pub notes: Vec<String>,
    pub unhoused: Option<String>,
    pub dimension: Option<u32>,
    body: Vec<Body>,
}

macro_rules! bundled {
    ($($id:literal),* $(,)?) => {
        &[$(($id, include_str!(concat!("../fixtures/", $id, ".fix")))),*]
    };
}

const BUNDLED: &[(&str, &str)] = bundled!(
    "L21_S0", "L21_S1", "L21_S2", "L22_M2", "L22_M3", "L23_M1", "L23_M2", "L24_D2", "L24_D1", "B237", "B27",
    "B28", "AA38", "E37", "MMMMM", "E43", "E45", "E62", "E65", "C7", "C8", "C13", "C14", "C20", "C21_M1", "C24",
    "C25", "C38",
);

impl Fixture {
    pub fn parse(text: &str) -> Result<Self, FixtureError> {
        let mut fx =
            Fixture { id: String::new(), order: "0".into(), anchor: None, notes: Vec::new(), unhoused: None, dimension: None, body: Vec::new() };
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let l = raw.trim();
            if l.is_empty() || l.starts_with('#') {
                continue;
            }
            let (head, rest) = l.split_once(char::is_whitespace).unwrap_or((l, ""));
            let rest = rest.trim();
            let bad = |message: String| FixtureError::Format { id: fx.id.clone(), line, message };
            match head {
                "fixture" => fx.id = rest.to_string(),
                "order" => fx.order = rest.to_string(),
                "anchor" => fx.anchor = Some(rest.to_string()),
                "note" => fx.notes.push(rest.to_string()),
                "unhoused" => fx.unhoused = Some(rest.to_string()),
                "n" => fx.dimension = Some(rest.parse().map_err(|_| bad(format!("bad dimension `{rest}`")))?),
                "let" => {
                    let (name, e) = rest.split_once('=').ok_or_else(|| bad("expected `let NAME = expr`".into()))?;
                    fx.body.push(Body::Let(line, name.trim().to_string(), e.trim().to_string()));
                }
                "expr" => fx.body.push(Body::Expr(line, rest.to_string())),
                "term" => fx.body.push(Body::Term(line, rest.to_string())),
                other => return Err(bad(format!("unknown record `{other}`"))),
            }
        }
        if fx.id.is_empty() {
            return Err(FixtureError::Format { id: "?".into(), line: 1, message: "missing `fixture` record".into() });
        }
        Ok(fx)
    }

    pub fn order_at(&self, n: u32) -> Result<i32, FixtureError> {
        let c = parse_constant(&self.order, n).map_err(|source| FixtureError::Expr { id: self.id.clone(), line: 0, source })?;
        if !c.is_real() || !c.re().is_integer() {
            return Err(FixtureError::Format { id: self.id.clone(), line: 0, message: format!("order {c} is not an integer") });
        }
        i32::try_from(c.re().to_integer()).map_err(|_| FixtureError::Format {
            id: self.id.clone(),
            line: 0,
            message: "order out of range".into(),
        })
    }

    /// Evaluates the fixture at dimension n.
    pub fn load(&self, n: u32) -> Result<SymbolExpr, FixtureError> {
        if let Some(reason) = &self.unhoused {
            return Err(FixtureError::Unhoused { id: self.id.clone(), reason: reason.clone() });
        }
        if let Some(d) = self.dimension {
            if d != n {
                return Err(FixtureError::WrongDimension { id: self.id.clone(), stored: d, requested: n });
            }
        }
        let order = self.order_at(n)?;
        let mut scope = Scope::new(n);
        let mut acc = SymbolExpr::zero(order);
        let wrap = |line: usize, source: ExprError| FixtureError::Expr { id: self.id.clone(), line, source };
        for b in &self.body {
            match b {
                Body::Let(line, name, e) => {
                    let v = parse_symbol(e, &scope).map_err(|s| wrap(*line, s))?;
                    scope.bindings.insert(name.clone(), v);
                }
                Body::Expr(line, e) => acc = acc.add(&parse_symbol(e, &scope).map_err(|s| wrap(*line, s))?),
                Body::Term(line, t) => {
                    let (k, r) = parse_term(t, n).map_err(|message| FixtureError::Format { id: self.id.clone(), line: *line, message })?;
                    acc.insert(k, r);
                }
            }
        }
        Ok(acc.with_order(order))
    }
}

fn parse_gaussian(s: &str, n: u32) -> Result<GaussianRational, String> {
    parse_constant(s, n).map_err(|e| format!("bad number `{s}`: {e}"))
}

fn parse_rational(s: &str) -> Result<BigRational, String> {
    s.parse::<BigRational>().map_err(|_| format!("bad rational `{s}`"))
}

fn parse_term(text: &str, n: u32) -> Result<(TermKey, RatFuncXi), String> {
    let mut it = text.split_whitespace();
    let re = parse_rational(it.next().ok_or("missing real part")?)?;
    let im = parse_rational(it.next().ok_or("missing imaginary part")?)?;
    let mut fields: BTreeMap<&str, &str> = BTreeMap::new();
    for f in it {
        let (k, v) = f.split_once('=').ok_or_else(|| format!("bad field `{f}`"))?;
        fields.insert(k, v);
    }
    let get = |k: &str| fields.get(k).copied().unwrap_or("");
    let mut monomial = Monomial::one();
    for part in get("atoms").split(',').filter(|s| !s.is_empty()) {
        let (tag, e) = part.split_once(':').unwrap_or((part, "1"));
        let a = Atom::from_tag(tag).ok_or_else(|| format!("unknown atom `{tag}`"))?;
        let e: u32 = e.parse().map_err(|_| format!("bad exponent `{e}`"))?;
        monomial = monomial.mul(&Monomial::power(a, e));
    }
    let xi = match get("xi") {
        "" => XiStructure::One,
        t => XiStructure::from_tag(t).ok_or_else(|| format!("unknown structure `{t}`"))?,
    };
    let mut word = Vec::new();
    for l in get("cliff").split('.').filter(|s| !s.is_empty()) {
        word.push(Letter::from_tag(l).map_err(|e| e.to_string())?);
    }
    let num = match get("num") {
        "" => PolyXi::one(),
        s => PolyXi::new(s.split(',').map(|c| parse_gaussian(c, n)).collect::<Result<_, _>>()?),
    };
    let mut poles = Vec::new();
    for p in get("poles").split(',').filter(|s| !s.is_empty()) {
        let (root, m) = p.rsplit_once(':').ok_or_else(|| format!("bad pole `{p}`"))?;
        poles.push((parse_gaussian(root, n)?, m.parse::<u32>().map_err(|_| format!("bad multiplicity `{m}`"))?));
    }
    let r = RatFuncXi::from_parts(GaussianRational::new(re, im), num, poles);
    Ok((TermKey { monomial, structure: xi, word }, r))
}

fn term_record(k: &TermKey, r: &RatFuncXi) -> String {
    let atoms: Vec<String> = k.monomial.atoms().iter().map(|(a, e)| format!("{}:{e}", a.tag())).collect();
    let num: Vec<String> = r.monic_numerator().coeffs().iter().map(|c| c.to_string()).collect();
    let poles: Vec<String> = r.poles().iter().map(|(root, m)| format!("{root}:{m}")).collect();
    let cliff: Vec<&str> = k.word.iter().map(|l| l.tag()).collect();
    let s = r.scale();
    format!(
        "term {} {} atoms={} xi={} num={} poles={} cliff={}",
        s.re(),
        s.im(),
        atoms.join(","),
        k.structure.tag(),
        num.join(","),
        poles.join(","),
        cliff.join(".")
    )
}

/// Canonical record form of `expr` at dimension n.
pub fn canonical_text(id: &str, expr: &SymbolExpr, n: u32) -> String {
    let mut out = format!("fixture {id}\nn {n}\norder {}\n", expr.order);
    for (k, r) in expr.terms() {
        out.push_str(&term_record(k, r));
        out.push('\n');
    }
    out
}

/// Immutable set of fixtures keyed by id.
#[derive(Clone, Debug)]
pub struct FixtureCatalog {
    fixtures: BTreeMap<String, Fixture>,
}

impl FixtureCatalog {
    pub fn bundled() -> Self {
        let fixtures = BUNDLED
            .iter()
            .map(|(id, text)| {
                let fx = Fixture::parse(text).unwrap_or_else(|e| panic!("bundled fixture {id}: {e}"));
                (fx.id.clone(), fx)
            })
            .collect();
        Self { fixtures }
    }

    /// Bundled corpus overridden by every `*.fix` file in `dir`.
    pub fn with_dir(dir: &Path) -> Result<Self, FixtureError> {
        let mut cat = Self::bundled();
        let entries = std::fs::read_dir(dir).map_err(|e| FixtureError::Io(format!("{}: {e}", dir.display())))?;
        let mut paths: Vec<_> = entries.filter_map(|e| e.ok().map(|e| e.path())).collect();
        paths.sort();
        for p in paths.into_iter().filter(|p| p.extension().is_some_and(|x| x == "fix")) {
            let text = std::fs::read_to_string(&p).map_err(|e| FixtureError::Io(format!("{}: {e}", p.display())))?;
            let fx = Fixture::parse(&text)?;
            cat.fixtures.insert(fx.id.clone(), fx);
        }
        Ok(cat)
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.fixtures.keys().map(String::as_str)
    }

    pub fn get(&self, id: &str) -> Result<&Fixture, FixtureError> {
        self.fixtures.get(id).ok_or_else(|| FixtureError::UnknownFixture(id.to_string()))
    }

    pub fn load(&self, id: &str, n: u32) -> Result<SymbolExpr, FixtureError> {
        self.get(id)?.load(n)
    }
}

/// Loads a bundled fixture at dimension n.
pub fn load_fixture(id: &str, n: u32) -> Result<SymbolExpr, FixtureError> {
    static CATALOG: std::sync::OnceLock<FixtureCatalog> = std::sync::OnceLock::new();
    CATALOG.get_or_init(FixtureCatalog::bundled).load(id, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn all_bundled_parse_and_load() {
        let cat = FixtureCatalog::bundled();
        assert_eq!(cat.ids().count(), 28);
        for id in cat.ids() {
            for n in [4, 6, 8] {
                match cat.load(id, n) {
                    Ok(_) => {}
                    Err(FixtureError::Unhoused { .. }) => assert!(["L21_S0", "L21_S1", "L22_M3"].contains(&id)),
                    Err(e) => panic!("{id} at n={n}: {e}"),
                }
            }
        }
    }

    #[test]
    fn unknown_and_unhoused() {
        assert!(matches!(load_fixture("NOPE", 4), Err(FixtureError::UnknownFixture(_))));
        assert!(matches!(load_fixture("L22_M3", 4), Err(FixtureError::Unhoused { .. })));
    }

    #[test]
    fn b27_is_xn_derivative_of_l24_d2() {
        for n in [4, 6] {
            let d = load_fixture("L24_D2", n).unwrap().d_xn().unwrap();
            assert_eq!(d.terms(), load_fixture("B27", n).unwrap().terms());
        }
    }

    #[test]
    fn c13_and_e37_are_xn_derivatives() {
        for n in [4, 6, 8] {
            let d = load_fixture("C7", n).unwrap().d_xn().unwrap();
            assert_eq!(d.terms(), load_fixture("C13", n).unwrap().terms());
            let t = (n / 2) as i64;
            let base = SymbolExpr::radial(RatFuncXi::one_plus_xi2_pow(1 - t), 2 - n as i32);
            assert_eq!(base.d_xn().unwrap().terms(), load_fixture("E37", n).unwrap().terms());
        }
    }

    #[test]
    fn xi_derivatives() {
        for n in [4, 6, 8] {
            let t = (n / 2) as i64;
            let base = SymbolExpr::radial(RatFuncXi::one_plus_xi2_pow(1 - t), 2 - n as i32);
            assert_eq!(base.d_xin(2).terms(), load_fixture("B237", n).unwrap().terms());
            assert_eq!(base.d_xin(1).terms(), load_fixture("E62", n).unwrap().terms());
            assert_eq!(load_fixture("C7", n).unwrap().d_xin(1).terms(), load_fixture("C20", n).unwrap().terms());
        }
    }

    #[test]
    fn canonical_round_trip() {
        let cat = FixtureCatalog::bundled();
        for id in ["AA38", "C21_M1", "E43", "L23_M2"] {
            let e = cat.load(id, 6).unwrap();
            let text = canonical_text(id, &e, 6);
            let back = Fixture::parse(&text).unwrap();
            assert_eq!(back.load(6).unwrap(), e);
            assert!(matches!(back.load(4), Err(FixtureError::WrongDimension { .. })));
            assert_eq!(canonical_text(id, &back.load(6).unwrap(), 6), text);
        }
        let (_, r) = parse_term("-1/2 0 atoms=HP:1 xi=S_XY num=1 poles=i:2 cliff=", 4).unwrap();
        assert_eq!(r.scale(), &GaussianRational::real(rat(-1, 2)));
    }
}
