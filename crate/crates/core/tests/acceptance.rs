//! Acceptance gate: one line per criterion, exit status 1 if any fails.

use std::time::{Duration, Instant};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde_json::Value;

use wres_core::arith::GaussianRational;
use wres_core::assembler::{self, Aa38Branch, CaseId, CaseTag, Config, Theorem, Variant};
use wres_core::cli::run_command;
use wres_core::clifford::{gamma_oracle_trace, gamma_oracle_trace_element, spinor_trace, CliffordElement, Letter};
use wres_core::coeffs::{self, CATALOG};
use wres_core::expr::{parse_ratfunc, parse_symbol, Scope};
use wres_core::geometric::build::{atom, product, rat, sum};
use wres_core::printed;
use wres_core::ratfunc::RatFuncXi;
use wres_core::symbols::{Atom, Monomial};

type Outcome = Result<String, String>;

fn g(re: (i64, i64), im: (i64, i64)) -> GaussianRational {
    &GaussianRational::from_ratio(re.0, re.1) + &(&GaussianRational::from_ratio(im.0, im.1) * &GaussianRational::i())
}

fn cli(args: &[&str]) -> Result<String, String> {
    let out = run_command(std::iter::once("wres-verifier").chain(args.iter().copied()));
    if out.code != 0 {
        return Err(format!("`{}` exited {}: {}", args.join(" "), out.code, out.stderr.trim()));
    }
    Ok(out.stdout)
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// (ξ−i)^{-k}
fn pole(k: u32) -> RatFuncXi {
    RatFuncXi::pole_power(GaussianRational::i(), k)
}

fn c1_piplus() -> Outcome {
    let e64 = pole(2).scale_by(&g((0, 1), (-1, 4)));
    let e65 = pole(2).scale_by(&g((0, 1), (-1, 16))).add(&pole(3).scale_by(&GaussianRational::from_ratio(-1, 8)));
    for (input, want) in [("xi/(1+xi^2)^2", &e64), ("xi/(1+xi^2)^3", &e65)] {
        let got = parse_ratfunc(input, 4).map_err(|e| e.to_string())?.pi_plus().map_err(|e| e.to_string())?;
        ensure(&got == want, || format!("pi_plus({input}) = {got}, want {want}"))?;
        let printed = cli(&["piplus", input])?;
        let reparsed = parse_ratfunc(printed.trim(), 4).map_err(|e| e.to_string())?;
        ensure(&reparsed == want, || format!("cli piplus {input} printed {}", printed.trim()))?;
    }
    ensure(cli(&["piplus", "xi/(1+xi^2)^2"])? == "-i/(4*(xi-i)^2)\n", || "golden text".into())?;
    Ok("both printed pi+ evaluations reproduced".into())
}

fn c2_anchors() -> Outcome {
    let want = [("B0", g((-15, 8), (0, 1))), ("M0", g((0, 1), (-1, 8))), ("H0", g((0, 1), (3, 4)))];
    for (name, v) in &want {
        let r = coeffs::verify_coefficient(name, 4, 256, 4096).map_err(|e| e.to_string())?;
        ensure(&r.value_defining == v, || format!("{name} defining = {}", r.value_defining))?;
        ensure(&r.value_closed == v, || format!("{name} closed = {}", r.value_closed))?;
        ensure(r.defining_vs_numeric_ok, || format!("{name} numeric = {}", r.value_numeric.to_decimal(40)))?;
    }
    Ok("B0(4)=-15/8, M0(4)=-i/8, H0(4)=3i/4 on all three paths".into())
}

fn c3_sweep() -> Outcome {
    let names: Vec<&str> = coeffs::names().collect();
    let recs = coeffs::verify_sweep(&names, &[4, 6, 8, 10, 12], 256, 4096).map_err(|e| e.to_string())?;
    let bad: Vec<String> = recs.iter().filter(|r| !r.defining_vs_numeric_ok).map(|r| format!("{}@{}", r.name, r.n)).collect();
    ensure(bad.is_empty(), || format!("defining vs numeric failed: {bad:?}"))?;
    let findings: Vec<_> = recs.iter().flat_map(|r| r.findings()).collect();
    let e2 = findings.iter().filter(|f| f.subject.starts_with("E2@")).count();
    ensure(e2 == 5, || format!("expected the E2 finding at all 5 dimensions, got {e2}"))?;
    let mismatched = recs.iter().filter(|r| !r.closed_matches_defining).count();
    ensure(mismatched == findings.len(), || "every closed-form mismatch must carry a finding".into())?;
    Ok(format!("{} coefficients x 5 dimensions, {} findings (E2 present)", names.len(), findings.len()))
}

fn c4_t41() -> Outcome {
    let target = product(&[rat(1, 4), atom(Atom::Pi), atom(Atom::Vol), sum(&[product(&[rat(1, 3), atom(Atom::GTt)]), atom(Atom::XnYn)])]);
    let out = cli(&["boundary", "--theorem", "t41", "--n", "4"])?;
    ensure(out.trim() == target.to_text(), || format!("boundary printed `{}`", out.trim()))?;
    let cfg = Config::default();
    let fixture = assembler::boundary_term(Theorem::T41, 4, Variant::Fixture, &cfg).map_err(|e| e.to_string())?;
    ensure(fixture == target, || format!("fixture variant {fixture}"))?;
    // Ψ(4) = −(1−t)·2^{t−1}·(2i/t!)·M₀·π·Vol·(g/(n−1) + XnYn) = 2i·M₀·π·Vol·(…)
    let m0 = coeffs::coefficient_defining("M0", 4).map_err(|e| e.to_string())?;
    let shape = product(&[atom(Atom::Pi), atom(Atom::Vol), sum(&[product(&[rat(1, 3), atom(Atom::GTt)]), atom(Atom::XnYn)])]);
    let hand = shape.scale(&(&m0 * &g((0, 1), (2, 1))));
    ensure(hand == target, || format!("hand evaluation with M0={m0} gives {hand}"))?;
    let psi = printed::psi(4).map_err(|e| e.to_string())?;
    ensure(psi == target, || format!("printed Psi {psi}"))?;
    Ok(target.to_text())
}

fn c5_case_law() -> Outcome {
    let cfg = Config::default();
    let mut checked = 0;
    for n in [4, 6, 8] {
        for th in [Theorem::T31, Theorem::T32] {
            let a_i = CaseId::new(th, CaseTag::AI).unwrap();
            for v in [Variant::Fixture, Variant::Derived] {
                let e = assembler::case_term(a_i, n, v, &cfg).map_err(|e| e.to_string())?;
                ensure(e.is_zero(), || format!("{} {} n={n} = {e}", a_i.label(), v.tag()))?;
            }
            for tag in [CaseTag::AII, CaseTag::AIII, CaseTag::B, CaseTag::C] {
                let id = CaseId::new(th, tag).unwrap();
                let p = assembler::case_pipeline(id, n, &cfg).map_err(|e| e.to_string())?.expect("non-vanishing case");
                let base = assembler::case_term_form(id, n, 0, &cfg).map_err(|e| e.to_string())?;
                for s in 1..=p.m {
                    let moved = assembler::case_term_form(id, n, s, &cfg).map_err(|e| e.to_string())?;
                    ensure(moved == base, || format!("{} n={n} shift {s}: {moved} vs {base}", id.label()))?;
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("Phi1 = tPhi1 = 0; {checked} integration-by-parts forms agree"))
}

fn c6_clifford() -> Outcome {
    let letters = [Letter::Cxi, Letter::Cdxn];
    let mut words = 0;
    for len in 0..=6u32 {
        for bits in 0..(1u32 << len) {
            let w: Vec<Letter> = (0..len).map(|k| letters[((bits >> k) & 1) as usize]).collect();
            let e = CliffordElement::from_word(&w, GaussianRational::one());
            let sym = spinor_trace(&e, 4).map_err(|e| e.to_string())?;
            let ora = gamma_oracle_trace(&w).map_err(|e| e.to_string())?;
            ensure(sym == ora, || format!("word {w:?}: {sym} vs {ora}"))?;
            words += 1;
        }
    }
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for k in 0..100 {
        let mut e = CliffordElement::zero();
        for _ in 0..rng.gen_range(1..=5) {
            let len = rng.gen_range(0..=8);
            let w: Vec<Letter> = (0..len).map(|_| letters[rng.gen_range(0..2)]).collect();
            let c = g((rng.gen_range(-9..=9), rng.gen_range(1..=6)), (rng.gen_range(-9..=9), rng.gen_range(1..=6)));
            e = e.add(&CliffordElement::from_word(&w, c));
        }
        let sym = spinor_trace(&e, 4).map_err(|e| e.to_string())?;
        let ora = gamma_oracle_trace_element(&e).map_err(|e| e.to_string())?;
        ensure(sym == ora, || format!("random element {k}: {sym} vs {ora}"))?;
    }
    Ok(format!("{words} words and 100 random elements agree with 4x4 gamma matrices"))
}

fn c7_interior() -> Outcome {
    let e = assembler::interior_term(4).map_err(|e| e.to_string())?;
    let pi2 = Monomial::power(Atom::Pi, 2);
    let ein = e.coefficient(&pi2.mul(&Monomial::atom(Atom::EinsteinXy)));
    let sg = e.coefficient(&pi2.mul(&Monomial::atom(Atom::SgXy)));
    ensure(ein == GaussianRational::from_ratio(4, 3), || format!("Einstein coefficient {ein}"))?;
    ensure(sg == GaussianRational::from_ratio(1, 1), || format!("s*g coefficient {sg}"))?;
    ensure(e.terms().len() == 2, || format!("extra terms in {e}"))?;
    let out = cli(&["interior", "--n", "4"])?;
    ensure(out.trim() == e.to_text(), || format!("cli printed {}", out.trim()))?;
    Ok(e.to_text())
}

fn c8_reconcile() -> Outcome {
    let text = cli(&["reconcile", "--theorem", "t31", "--n", "4", "--format", "json"])?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| e.to_string())?;
    let rec = &doc["records"][0];
    let entries = rec["entries"].as_array().ok_or("no entries")?;
    let printed = assembler::printed_theorem(Theorem::T31, 4).map_err(|e| e.to_string())?;
    for m in printed.terms().keys() {
        let tag = m.tag_text();
        let e = entries.iter().find(|e| e["monomial"] == tag.as_str()).ok_or_else(|| format!("monomial {tag} missing"))?;
        for k in ["fixture", "derived", "printed"] {
            ensure(e[k].is_string(), || format!("{tag} lacks a {k} value"))?;
        }
    }
    let findings = doc["findings"].as_array().ok_or("no findings")?;
    let aa38 = findings
        .iter()
        .find(|f| f["anchor"] == "aa38")
        .ok_or("no finding anchored at aa38")?;
    let vals = &aa38["values"];
    let (d, p) = (vals["XNYN:derived"].as_str().unwrap_or(""), vals["XNYN:printed"].as_str().unwrap_or(""));
    let (d, p) = (parse_ratfunc(d, 4).map_err(|e| e.to_string())?, parse_ratfunc(p, 4).map_err(|e| e.to_string())?);
    let ratio = d.div(&p).map_err(|e| e.to_string())?;
    ensure(ratio.as_constant() == Some(GaussianRational::i()), || format!("aa38 ratio {ratio}"))?;
    Ok(format!("{} monomials with three values; aa38 factor-i finding present", printed.terms().len()))
}

fn corpus() -> Vec<String> {
    let mut v: Vec<String> = CATALOG
        .iter()
        .map(|s| format!("({})/((xi+i)^(n/2+{})*(xi-i)^(n/2+{}))", s.numerator, s.p_off, s.m_off + 1))
        .collect();
    v.extend(
        [
            "xi/(1+xi^2)^2",
            "xi/(1+xi^2)^3",
            "-i/(4*(xi-i)^2)",
            "-i/(16*(xi-i)^2)-1/(8*(xi-i)^3)",
            "(1+xi^2)^(-n/2-1)",
            "(1+xi^2)^(1-n/2)",
            "xi^2*(1+xi^2)^(-3)",
            "6*xi^2-2",
            "1/(xi+i)",
            "(xi-i)^2/(xi+i)^3",
            "(2*n-2)*xi^3-2*xi",
            "3/4+i/2",
            "-(n-2)*(n+1)/(xi^2+1)",
            "i*xi-1",
            "(xi^2-1)/(xi^2+1)^2",
            "(1+i)*xi/(xi-i)^4",
        ]
        .map(String::from),
    );
    v.extend(
        [
            "i/(2*(xi-i))*S_XY - XNYN*CXI*CDXN + HP",
            "HP*CXI*CDXN/(1+xi^2)",
            "S_dXY*xi/(1+xi^2)^2 + S_CROSS*XYN",
            "G_TT*CXI + XNYN*CDXN",
            "-(1/2)*HP*S_XY*CXI*CDXN*CXI",
            "P0*CXI/(xi-i)",
            "(3/4)*VOL*PI*XNYN",
            "D_G_TT*xi - i*D_XNYN",
            "CDXN*CDXN + CXI*CXI",
            "HP^2*G_TT/(xi+i)^2",
        ]
        .map(String::from),
    );
    v
}

fn c9_determinism() -> Outcome {
    let exprs = corpus();
    ensure(exprs.len() == 50, || format!("corpus has {} entries", exprs.len()))?;
    for n in [4, 6] {
        let scope = Scope::new(n);
        for s in &exprs {
            let a = parse_symbol(s, &scope).map_err(|e| format!("{s}: {e}"))?;
            let t = a.to_text();
            let b = parse_symbol(&t, &scope).map_err(|e| format!("reparse of `{t}`: {e}"))?;
            ensure(a == b, || format!("`{s}` -> `{t}` does not reparse to the same symbol"))?;
            ensure(b.to_text() == t, || format!("printer not a fixpoint on `{t}`"))?;
        }
    }
    for args in [
        &["reconcile", "--theorem", "t31", "--n", "4", "--format", "json"][..],
        &["verify-coeffs", "--n", "4,6", "--names", "B0,M0,E2", "--format", "json"][..],
        &["boundary", "--theorem", "t32", "--n", "6", "--variant", "both", "--format", "json"][..],
    ] {
        let a = cli(args)?;
        let b = cli(args)?;
        ensure(a == b, || format!("`{}` output differs between runs", args.join(" ")))?;
        let doc = wres_core::report::ReportDocument::from_json(&a).map_err(|e| e.to_string())?;
        ensure(doc.to_json() == a, || format!("`{}` JSON does not round-trip", args.join(" ")))?;
    }
    Ok("100 parse/print fixpoints; JSON reports byte-identical and round-trip".into())
}

/// Derived-path agreements that the engine does not reach; reported, not gated.
fn unattainable() -> Vec<String> {
    let cfg = Config::default();
    let mut out = Vec::new();
    for (th, aa38) in [(Theorem::T41, Aa38Branch::Printed), (Theorem::T41, Aa38Branch::PrincipalPart), (Theorem::T31, Aa38Branch::Printed)] {
        let r = assembler::reconcile(th, 4, &cfg.clone().with_aa38(aa38)).expect("reconcile");
        out.push(format!(
            "{} n=4 aa38={}: fixture/printed diff {} monomials, derived diff {} monomials",
            th.tag(),
            aa38.tag(),
            r.fixture_diff().len(),
            r.diff().len()
        ));
    }
    out
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome, Duration);
    let criteria: [Criterion; 9] = [
        ("pi+ golden evaluations", c1_piplus, Duration::from_secs(1)),
        ("hand-verified coefficient anchors", c2_anchors, Duration::from_secs(1)),
        ("coefficient self-consistency sweep", c3_sweep, Duration::from_secs(30)),
        ("t41 pipeline anchor", c4_t41, Duration::from_secs(5)),
        ("case-law properties", c5_case_law, Duration::from_secs(30)),
        ("Clifford gamma-matrix oracle", c6_clifford, Duration::from_secs(5)),
        ("interior term", c7_interior, Duration::from_secs(1)),
        ("reconciliation completeness", c8_reconcile, Duration::from_secs(30)),
        ("determinism and round-trips", c9_determinism, Duration::from_secs(5)),
    ];
    let mut failed = 0;
    for (k, (name, f, budget)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = f();
        let dt = t.elapsed();
        let (tag, detail) = match &r {
            Ok(d) if dt <= *budget => ("PASS", d.clone()),
            Ok(d) => ("FAIL", format!("{d} (over budget {budget:?})")),
            Err(e) => ("FAIL", e.clone()),
        };
        if tag == "FAIL" {
            failed += 1;
        }
        println!("criterion {}: {tag} [{:.2?}] {name}: {detail}", k + 1, dt);
    }
    for note in unattainable() {
        println!("note: {note}");
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
