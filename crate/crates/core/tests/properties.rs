use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use wres_core::arith::{rat, BigRational, GaussianRational};
use wres_core::assembler::{self, CasePipeline, Config, Theorem, Variant};
use wres_core::bigfloat::pow10_tolerance;
use wres_core::clifford::{spinor_trace, CliffordElement, Letter, trace_dimension};
use wres_core::expr::{parse_ratfunc, parse_symbol, Scope};
use wres_core::geometric::GeometricExpression;
use wres_core::poly::PolyXi;
use wres_core::quadrature::contour_residue_numeric;
use wres_core::ratfunc::RatFuncXi;
use wres_core::symbols::{Atom, Monomial, SymbolExpr, TermKey, XiStructure};

fn small_rat() -> impl Strategy<Value = BigRational> {
    (-12i64..=12, 1i64..=6).prop_map(|(p, q)| rat(p, q))
}

fn gauss() -> impl Strategy<Value = GaussianRational> {
    (small_rat(), small_rat()).prop_map(|(a, b)| GaussianRational::new(a, b))
}

fn nonzero_gauss() -> impl Strategy<Value = GaussianRational> {
    gauss().prop_filter("nonzero", |z| !z.is_zero())
}

fn poly() -> impl Strategy<Value = PolyXi> {
    prop::collection::vec(gauss(), 0..4).prop_map(PolyXi::new)
}

/// Rational functions with poles only at ±i.
fn ratfunc() -> impl Strategy<Value = RatFuncXi> {
    (gauss(), poly(), 0u32..4, 0u32..4).prop_map(|(c, p, a, b)| {
        RatFuncXi::from_parts(c, p, vec![(GaussianRational::i(), a), (-GaussianRational::i(), b)])
    })
}

fn letter() -> impl Strategy<Value = Letter> {
    prop_oneof![Just(Letter::Cxi), Just(Letter::Cdxn)]
}

fn clifford() -> impl Strategy<Value = CliffordElement> {
    prop::collection::vec((prop::collection::vec(letter(), 0..6), gauss()), 0..4).prop_map(|ts| {
        ts.iter().fold(CliffordElement::zero(), |acc, (w, c)| acc.add(&CliffordElement::from_word(w, c.clone())))
    })
}

fn monomial() -> impl Strategy<Value = Monomial> {
    prop_oneof![
        Just(Monomial::one()),
        Just(Monomial::atom(Atom::XnYn)),
        Just(Monomial::atom(Atom::Vol)),
        Just(Monomial::from_pairs(&[(Atom::XnYn, 2), (Atom::Vol, 1)])),
    ]
}

/// Symbols whose atoms all admit an x_n-derivative.
fn symbol() -> impl Strategy<Value = SymbolExpr> {
    symbol_with(prop_oneof![Just(XiStructure::One), Just(XiStructure::SXy)])
}

fn symbol_with(structures: impl Strategy<Value = XiStructure>) -> impl Strategy<Value = SymbolExpr> {
    let key = (monomial(), structures, prop::collection::vec(letter(), 0..3))
        .prop_map(|(monomial, structure, w)| {
            let (_, word) = wres_core::clifford::reduce_word(&w);
            TermKey { monomial, structure, word }
        });
    (prop::collection::vec((key, ratfunc()), 0..4), -6i32..0).prop_map(|(ts, order)| {
        let mut s = SymbolExpr::zero(order);
        for (k, r) in ts {
            s.insert(k, r);
        }
        s
    })
}

fn geometric() -> impl Strategy<Value = GeometricExpression> {
    let atoms = prop_oneof![Just(Atom::Hp), Just(Atom::GTt), Just(Atom::XnYn), Just(Atom::Vol), Just(Atom::Pi)];
    prop::collection::vec((prop::collection::vec((atoms, 1u32..3), 0..3), gauss()), 0..4).prop_map(|ts| {
        let mut e = GeometricExpression::zero();
        for (pairs, c) in ts {
            e = e.add(&GeometricExpression::term(Monomial::from_pairs(&pairs), c));
        }
        e
    })
}

proptest! {
    #[test]
    fn rationals_are_canonical(p in -1000i64..1000, q in 1i64..1000, s in prop::bool::ANY) {
        let r = if s { rat(p, q) } else { rat(p, -q) };
        prop_assert!(r.denom().is_positive());
        prop_assert!(r.numer().gcd(r.denom()).is_one());
        if r.is_zero() {
            prop_assert!(r.denom().is_one());
        }
    }

    #[test]
    fn gaussian_field_axioms(a in gauss(), b in gauss(), c in gauss(), d in nonzero_gauss()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&d * &d.inv().unwrap(), GaussianRational::one());
        prop_assert_eq!(&(&a * &d).checked_div(&d).unwrap(), &a);
    }

    #[test]
    fn poly_leading_nonzero(p in poly()) {
        prop_assert!(p.is_zero() || !p.leading().is_zero());
    }

    #[test]
    fn ratfunc_canonical(f in ratfunc()) {
        let rs: Vec<_> = f.poles().iter().map(|(r, _)| r.clone()).collect();
        let mut dedup = rs.clone();
        dedup.dedup();
        prop_assert_eq!(rs.len(), dedup.len());
        for r in &rs {
            prop_assert!(!f.monic_numerator().eval(r).is_zero());
        }
    }

    #[test]
    fn partial_fractions_reconstruct(f in ratfunc()) {
        prop_assert_eq!(f.partial_fractions().reconstruct(), f);
    }

    #[test]
    fn pi_plus_idempotent_and_complementary(f in ratfunc()) {
        let p = f.pi_plus().unwrap();
        prop_assert_eq!(p.pi_plus().unwrap(), p.clone());
        prop_assert_eq!(f.sub(&p).multiplicity_at(&GaussianRational::i()), 0);
        prop_assert_eq!(f.sub(&p).pi_plus().unwrap(), RatFuncXi::zero());
    }

    #[test]
    fn pi_plus_commutes_with_xi_derivative(f in ratfunc()) {
        prop_assert_eq!(f.differentiate(1).pi_plus().unwrap(), f.pi_plus().unwrap().differentiate(1));
    }

    #[test]
    fn contour_sees_only_the_upper_pole(f in ratfunc()) {
        prop_assert_eq!(f.contour_integral_upper().unwrap(), f.pi_plus().unwrap().contour_integral_upper().unwrap());
    }

    #[test]
    fn contour_of_derivative_vanishes(f in ratfunc()) {
        prop_assert!(f.differentiate(1).contour_integral_upper().unwrap().is_zero());
    }

    #[test]
    fn parser_printer_round_trip(f in ratfunc()) {
        let t = f.to_text();
        let g = parse_ratfunc(&t, 4).unwrap();
        prop_assert_eq!(&g, &f);
        prop_assert_eq!(g.to_text(), t);
    }

    #[test]
    fn clifford_words_normal(e in clifford()) {
        for (w, c) in e.terms() {
            prop_assert!(!c.is_zero());
            prop_assert!(wres_core::clifford::is_normal(w));
        }
    }

    #[test]
    fn clifford_associative_and_trace_cyclic(a in clifford(), b in clifford(), c in clifford()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(spinor_trace(&a.mul(&b), 4).unwrap(), spinor_trace(&b.mul(&a), 4).unwrap());
    }

    #[test]
    fn geometric_ring(a in geometric(), b in geometric(), c in geometric()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert!(a.diff(&b).is_empty() == (a == b));
        prop_assert!(a.terms().values().all(|v| !v.is_zero()));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn numeric_residue_oracle(f in ratfunc()) {
        let exact = f.residue_at(&GaussianRational::i());
        let approx = contour_residue_numeric(&f, 128, 64).unwrap();
        prop_assert!(approx.within(&exact, &pow10_tolerance(25)), "{} vs {}", approx.to_decimal(30), exact);
    }

    #[test]
    fn symbol_printer_round_trip(s in symbol()) {
        let t = s.to_text();
        let back = parse_symbol(&t, &Scope::new(4)).unwrap();
        prop_assert_eq!(back.terms(), s.terms());
    }

    #[test]
    fn d_xn_commutes_with_pi_plus(s in symbol()) {
        prop_assert_eq!(s.pi_plus().unwrap().d_xn().unwrap(), s.d_xn().unwrap().pi_plus().unwrap());
    }

    #[test]
    fn sphere_kills_odd_structures(r in ratfunc(), m in monomial(), n in (2u32..7).prop_map(|t| 2 * t)) {
        for st in [XiStructure::SCross, XiStructure::SdCross] {
            let s = SymbolExpr::term(TermKey { monomial: m.clone(), structure: st, word: vec![] }, r.clone(), -3);
            prop_assert!(s.sphere_integrate(n).is_zero());
        }
    }

    #[test]
    fn integration_by_parts(left in symbol(), right in symbol_with(Just(XiStructure::One)), m in 1u32..3) {
        let p = CasePipeline {
            left,
            right,
            m,
            prefactor: GaussianRational::one(),
            trace_dim: trace_dimension(4),
        };
        let p0 = SymbolExpr::zero(0);
        let base = p.evaluate(4, 0, &p0).unwrap();
        for s in 1..=m {
            prop_assert_eq!(p.evaluate(4, s, &p0).unwrap(), base.clone());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn pi_power_and_vanishing_a_i(t in 2u32..7) {
        let n = 2 * t;
        let cfg = Config::default();
        for th in Theorem::ALL {
            for v in [Variant::Fixture, Variant::Derived] {
                for (id, e) in assembler::case_terms(th, n, v, &cfg).unwrap() {
                    prop_assert!(e.pi_powers().iter().all(|&k| k == 1), "{} {}", id.label(), e);
                    if id.tag == assembler::CaseTag::AI {
                        prop_assert!(e.is_zero());
                    }
                }
            }
        }
        let interior = assembler::interior_term(n).unwrap();
        prop_assert!(interior.pi_powers().iter().all(|&k| k == t));
    }
}
