//! Printed case equations and theorem statements, evaluated exactly with
//! the defining-derivative values of the named coefficients.

use crate::arith::{factorial, BigRational, GaussianRational};
use crate::coeffs::{check_dimension, coefficient_defining, CoeffError};
use crate::geometric::GeometricExpression as G;
use crate::symbols::Atom;

struct P {
    n: i64,
    t: i64,
}

fn ge(c: GaussianRational) -> G {
    G::constant(c)
}

fn r(p: i64, q: i64) -> G {
    ge(GaussianRational::from_ratio(p, q))
}

fn a(x: Atom) -> G {
    G::atom(x)
}

fn prod(parts: &[G]) -> G {
    parts.iter().fold(r(1, 1), |acc, p| acc.mul(p))
}

fn sum(parts: &[G]) -> G {
    parts.iter().fold(G::zero(), |acc, p| acc.add(p))
}

impl P {
    fn new(n: u32) -> Result<Self, CoeffError> {
        let t = check_dimension(n)?;
        Ok(Self { n: n as i64, t })
    }

    fn c(&self, name: &str) -> Result<G, CoeffError> {
        Ok(ge(coefficient_defining(name, self.n as u32)?))
    }

    fn pow2(&self, e: i64) -> G {
        let two = BigRational::from_integer(2.into());
        let v = if e >= 0 {
            num_traits::pow(two, e as usize)
        } else {
            num_traits::pow(two, (-e) as usize).recip()
        };
        ge(GaussianRational::real(v))
    }

    /// (p/q)·[i]·π/(t+off)!
    fn pf(&self, p: i64, q: i64, imag: bool, off: i64) -> G {
        let f = factorial((self.t + off) as u64);
        let mut c = GaussianRational::real(BigRational::new(p.into(), f * q));
        if imag {
            c = &c * &GaussianRational::i();
        }
        prod(&[ge(c), a(Atom::Pi)])
    }

    fn int(&self, v: i64) -> G {
        r(v, 1)
    }

    /// g(Xᵀ,Yᵀ)/(n−1)
    fn gn(&self) -> G {
        prod(&[r(1, self.n - 1), a(Atom::GTt)])
    }

    /// (h′(0)g + ∂g)/(n−1)
    fn hgdg(&self) -> G {
        prod(&[r(1, self.n - 1), sum(&[prod(&[a(Atom::Hp), a(Atom::GTt)]), a(Atom::DGTt)])])
    }
}

fn x() -> G {
    a(Atom::XnYn)
}

fn i() -> G {
    ge(GaussianRational::i())
}

/// Φ₂
pub fn phi2(n: u32) -> Result<G, CoeffError> {
    let p = P::new(n)?;
    let brace = sum(&[
        prod(&[r(-1, 2), i(), sum(&[p.gn(), x()]), p.pf(1, 1, true, 2), p.c("A0")?]),
        prod(&[x(), p.pf(1, 1, true, 2), p.c("A1")?]),
        prod(&[sum(&[prod(&[i(), p.hgdg()]), a(Atom::DXnYn).neg()]), p.pf(1, 1, true, 1), p.c("A2")?]),
    ]);
    Ok(prod(&[r(-1, 2), a(Atom::Vol), a(Atom::Hp), p.pow2(p.t), p.int(p.t - 1), brace]))
}

/// Φ₃
pub fn phi3(n: u32) -> Result<G, CoeffError> {
    let p = P::new(n)?;
    Ok(prod(&[a(Atom::Vol), a(Atom::Hp), p.int(1 - p.t), p.pow2(p.t), p.gn().sub(&x()), p.pf(1, 1, true, 2), p.c("B0")?]))
}

/// Φ₄
pub fn phi4(n: u32) -> Result<G, CoeffError> {
    let p = P::new(n)?;
    let bracket = sum(&[prod(&[i(), p.gn()]), x()]);
    Ok(prod(&[a(Atom::Vol), a(Atom::Hp), p.pow2(p.t), bracket, p.pf(1, 4, true, 2), p.c("C0")?]))
}

/// Φ₅
pub fn phi5(n: u32) -> Result<G, CoeffError> {
    let p = P::new(n)?;
    let brace = sum(&[
        prod(&[p.gn(), sum(&[prod(&[p.pf(1, 1, true, 1), p.c("D0")?]), prod(&[p.pf(-2, 1, true, 2), p.c("D1")?])])]),
        prod(&[x(), p.pf(-16, 1, false, 1), p.c("D2")?]),
    ]);
    Ok(prod(&[i().neg(), a(Atom::Vol), a(Atom::Hp), p.int(1 - p.t), p.pow2(p.t), brace]))
}

/// Φ as printed after summing the cases; also the boundary part of the
/// even-dimensional theorem for D⁻².
pub fn phi_total(n: u32) -> Result<G, CoeffError> {
    let p = P::new(n)?;
    let (tm1, omt) = (p.int(p.t - 1), p.int(1 - p.t));
    let brace = sum(&[
        prod(&[tm1.clone(), sum(&[p.gn(), x()]), p.pf(1, 2, false, 2), p.c("A0")?]),
        prod(&[tm1.clone(), x(), p.pf(1, 1, true, 2), p.c("A1")?]),
        prod(&[tm1, sum(&[prod(&[i(), p.hgdg()]), a(Atom::DXnYn).neg()]), p.pf(1, 1, true, 1), p.c("A2")?]),
        prod(&[omt.clone(), p.gn().sub(&x()), p.pf(-2, 1, true, 2), p.c("B0")?]),
        prod(&[sum(&[prod(&[i(), p.gn()]), x()]), p.pf(-1, 2, true, 2), p.c("C0")?]),
        prod(&[p.gn(), omt.clone(), p.pf(-2, 1, false, 1), p.c("D0")?]),
        prod(&[p.gn(), omt.clone(), p.pf(4, 1, false, 2), p.c("D1")?]),
        prod(&[x(), omt, p.pf(-32, 1, true, 1), p.c("D2")?]),
    ]);
    Ok(prod(&[r(-1, 2), a(Atom::Vol), a(Atom::Hp), p.pow2(p.t), brace]))
}

/// Φ̃₂
pub fn tphi2(n: u32) -> Result<G, CoeffError> {
    let p = P::new(n)?;
    let hp = a(Atom::Hp);
    let brace = sum(&[
        prod(&[p.hgdg(), p.pf(2, 1, true, 2), p.c("E0")?]),
        prod(&[a(Atom::DXnYn), p.pf(2, 1, true, 2), p.c("E1")?]),
        prod(&[ge(GaussianRational::from_ints(-1, 1)), hp.clone(), p.gn().sub(&x()), p.pf(1, 1, true, 2), p.c("E2")?]),
        prod(&[p.gn(), hp, p.pf(-1, 1, true, 3), p.c("E3")?]),
        prod(&[x(), p.pf(1, 1, true, 3), p.c("E4")?]),
    ]);
    Ok(prod(&[r(-1, 2), a(Atom::Vol), p.pow2(p.t), brace]))
}

/// Φ̃₃
pub fn tphi3(n: u32) -> Result<G, CoeffError> {
    let p = P::new(n)?;
    Ok(prod(&[r(-1, 1), a(Atom::Vol), a(Atom::Hp), p.pow2(p.t + 1), sum(&[p.gn(), x()]), p.pf(1, 1, true, 3), p.c("F0")?]))
}

/// Φ̃₄
pub fn tphi4(n: u32) -> Result<G, CoeffError> {
    let p = P::new(n)?;
    let hp = a(Atom::Hp);
    let brace = sum(&[
        prod(&[a(Atom::XYn), p.pf(-2, 1, true, 2), p.c("G0")?]),
        prod(&[p.gn(), hp.clone(), p.pf(1, 4, true, 3), p.c("G1")?]),
        prod(&[x(), hp, p.pf(1, 4, true, 2), p.c("G2")?]),
    ]);
    Ok(prod(&[a(Atom::Vol), p.pow2(p.t), brace]))
}

/// Φ̃₅
pub fn tphi5(n: u32) -> Result<G, CoeffError> {
    let p = P::new(n)?;
    let inner = sum(&[
        prod(&[p.int(p.n + 1), p.pow2(p.t - 3), p.pf(2, 1, true, 1), p.c("H0")?]),
        prod(&[p.pow2(p.t - 1), p.pf(-2 * p.n, 1, false, 2), p.c("H1")?]),
        prod(&[p.pow2(p.t - 2), p.pf(-2, 1, false, 2), p.c("H2")?]),
        prod(&[p.pow2(p.t), p.pf(-p.n, 1, false, 3), p.c("H3")?]),
    ]);
    Ok(prod(&[a(Atom::Vol), x().sub(&p.gn()), a(Atom::Hp), inner]))
}

/// Φ̃ as printed after summing the cases.
pub fn tphi_total(n: u32) -> Result<G, CoeffError> {
    let p = P::new(n)?;
    let hp = a(Atom::Hp);
    let h_inner = sum(&[
        prod(&[r(p.n + 1, 3), p.pf(1, 1, true, 1), p.c("H0")?]),
        prod(&[p.pf(-p.n, 1, false, 2), p.c("H1")?]),
        prod(&[p.pf(-1, 2, false, 2), p.c("H2")?]),
        prod(&[p.pf(-2 * p.n, 1, false, 3), p.c("H3")?]),
    ]);
    let brace = sum(&[
        prod(&[p.hgdg(), p.pf(-1, 1, true, 2), p.c("E0")?]),
        prod(&[a(Atom::DXnYn), p.pf(-1, 1, true, 2), p.c("E1")?]),
        prod(&[ge(GaussianRational::from_ints(1, -1)), hp.clone(), p.gn().sub(&x()), p.pf(1, 2, true, 2), p.c("E2")?]),
        prod(&[p.gn(), hp.clone(), p.pf(-1, 2, true, 3), p.c("E3")?]),
        prod(&[x(), p.pf(1, 1, true, 3), p.c("E4")?]),
        prod(&[sum(&[p.gn(), x()]), p.pf(-2, 1, true, 3), p.c("F0")?]),
        prod(&[a(Atom::XYn), p.pf(-2, 1, true, 2), p.c("G0")?]),
        prod(&[p.gn(), hp.clone(), p.pf(1, 4, true, 3), p.c("G1")?]),
        prod(&[x(), hp.clone(), p.pf(1, 4, true, 2), p.c("G2")?]),
        prod(&[hp, x().sub(&p.gn()), h_inner]),
    ]);
    Ok(prod(&[a(Atom::Vol), p.pow2(p.t), brace]))
}

/// Ψ; the odd-dimensional theorem for D⁻² prints the same expression.
pub fn psi(n: u32) -> Result<G, CoeffError> {
    let p = P::new(n)?;
    Ok(prod(&[r(-1, 1), a(Atom::Vol), sum(&[p.gn(), x()]), p.int(1 - p.t), p.pow2(p.t - 1), p.pf(2, 1, true, 0), p.c("M0")?]))
}

/// Ψ̃ in its first, unabbreviated form.
pub fn tpsi_expanded(n: u32) -> Result<G, CoeffError> {
    let p = P::new(n)?;
    let common = prod(&[a(Atom::Hp), a(Atom::Vol), sum(&[p.gn(), x()])]);
    Ok(sum(&[
        prod(&[r(-1, 2), i(), common.clone(), p.pow2(p.t + 1), p.pf(2, 1, true, 1), p.c("N0")?]),
        prod(&[r(-1, 1), i(), common, p.pow2(p.t), p.pf(2, 1, true, 0), p.c("N1")?]),
    ]))
}

/// Ψ̃ as abbreviated with N₀, N₁; the odd-dimensional theorem for D⁻¹
/// prints the same expression.
pub fn tpsi(n: u32) -> Result<G, CoeffError> {
    let p = P::new(n)?;
    let inner = sum(&[prod(&[p.pf(1, 2, true, 1), p.c("N0")?]), prod(&[p.pf(1, 1, true, 0), p.c("N1")?])]);
    Ok(prod(&[i().neg(), a(Atom::Vol), a(Atom::Hp), p.pow2(p.t), sum(&[p.gn(), x()]), inner]))
}

/// Interior Einstein-functional term, shared by both even theorems.
pub fn interior(n: u32) -> Result<G, CoeffError> {
    let t = check_dimension(n)?;
    let f = factorial((t - 1) as u64);
    let two_t = num_traits::pow(BigRational::from_integer(2.into()), t as usize);
    let c3 = GaussianRational::real(&two_t / BigRational::from_integer(f.clone() * 3));
    let c4 = GaussianRational::real(&two_t / BigRational::from_integer(f * 4));
    let pit = (0..t).fold(r(1, 1), |acc, _| acc.mul(&a(Atom::Pi)));
    Ok(sum(&[prod(&[ge(c3), pit.clone(), a(Atom::EinsteinXy)]), prod(&[ge(c4), pit, a(Atom::SgXy)])]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbols::Monomial;

    #[test]
    fn phi3_at_4() {
        // (5πi/16)·Vol·h′·(g/3 − XₙYₙ)
        let e = phi3(4).unwrap();
        let m = |extra: Atom| Monomial::from_pairs(&[(Atom::Vol, 1), (Atom::Pi, 1), (Atom::Hp, 1), (extra, 1)]);
        assert_eq!(e.coefficient(&m(Atom::GTt)), GaussianRational::new(crate::arith::rat(0, 1), crate::arith::rat(5, 48)));
        assert_eq!(e.coefficient(&m(Atom::XnYn)), GaussianRational::new(crate::arith::rat(0, 1), crate::arith::rat(-5, 16)));
        assert_eq!(e.terms().len(), 2);
    }

    #[test]
    fn psi_at_4() {
        assert_eq!(psi(4).unwrap().to_text(), "(pi/4)*Vol(S^{n-2})*( (1/3)*g(XT,YT) + Xn*Yn )");
    }

    #[test]
    fn interior_values() {
        assert_eq!(interior(4).unwrap().to_text(), "(4*pi^2/3)*( [Ric(X,Y)-(1/2)*s*g(X,Y)] + (3/4)*s*g(X,Y) )");
        let e6 = interior(6).unwrap();
        let m = Monomial::from_pairs(&[(Atom::Pi, 3), (Atom::SgXy, 1)]);
        assert_eq!(e6.coefficient(&m), GaussianRational::from(1));
    }

    #[test]
    fn tpsi_forms_disagree() {
        assert_ne!(tpsi(4).unwrap(), tpsi_expanded(4).unwrap());
    }
}
