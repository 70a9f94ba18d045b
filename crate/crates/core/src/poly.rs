//! Dense univariate polynomials in ξ_n over ℚ(i), ascending coefficients.

use std::fmt;

use crate::arith::{binomial_general, ArithError, GaussianRational};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct PolyXi {
    coeffs: Vec<GaussianRational>,
}

impl PolyXi {
    /// Trailing zeros are stripped so the leading coefficient is nonzero.
    pub fn new(mut coeffs: Vec<GaussianRational>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: GaussianRational) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(GaussianRational::one())
    }

    /// ξ_n itself.
    pub fn xi() -> Self {
        Self::new(vec![GaussianRational::zero(), GaussianRational::one()])
    }

    /// (ξ_n − root).
    pub fn linear(root: &GaussianRational) -> Self {
        Self::new(vec![-root, GaussianRational::one()])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| GaussianRational::from(c)).collect())
    }

    pub fn coeffs(&self) -> &[GaussianRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> GaussianRational {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, with `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> GaussianRational {
        self.coeffs.last().cloned().unwrap_or_default()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn scale(&self, c: &GaussianRational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Self::new((0..n).map(|k| &self.coeff(k) - &rhs.coeff(k)).collect())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let mut out = vec![GaussianRational::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += &(a * b);
            }
        }
        Self::new(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, x: &GaussianRational) -> GaussianRational {
        let mut acc = GaussianRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * &GaussianRational::from(k as i64))
                .collect(),
        )
    }

    /// Coefficients of p(a + t) in powers of t.
    pub fn shift(&self, a: &GaussianRational) -> Self {
        let d = self.coeffs.len();
        let mut out = vec![GaussianRational::zero(); d];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            // c (a + t)^k = c Σ_j C(k, j) a^{k−j} t^j
            let mut apow = GaussianRational::one();
            let mut pows = Vec::with_capacity(k + 1);
            for _ in 0..=k {
                pows.push(apow.clone());
                apow = &apow * a;
            }
            for (j, slot) in out.iter_mut().enumerate().take(k + 1) {
                let b = GaussianRational::real(binomial_general(k as i64, j as u64));
                *slot += &(&(c * &b) * &pows[k - j]);
            }
        }
        Self::new(out)
    }

    /// Synthetic division by (ξ − root): returns (quotient, remainder).
    pub fn div_linear(&self, root: &GaussianRational) -> (Self, GaussianRational) {
        if self.is_zero() {
            return (Self::zero(), GaussianRational::zero());
        }
        let n = self.coeffs.len();
        let mut q = vec![GaussianRational::zero(); n.saturating_sub(1)];
        let mut carry = GaussianRational::zero();
        for k in (0..n).rev() {
            let v = &self.coeffs[k] + &(&carry * root);
            if k == 0 {
                return (Self::new(q), v);
            }
            q[k - 1] = v.clone();
            carry = v;
        }
        unreachable!()
    }

    /// Euclidean division: (quotient, remainder).
    pub fn div_rem(&self, rhs: &Self) -> Result<(Self, Self), ArithError> {
        let dd = rhs.degree().ok_or(ArithError::DivisionByZero)?;
        let lead_inv = rhs.leading().inv()?;
        let mut rem = self.coeffs.clone();
        let Some(ds) = self.degree() else {
            return Ok((Self::zero(), Self::zero()));
        };
        if ds < dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![GaussianRational::zero(); ds - dd + 1];
        for k in (0..=ds - dd).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                rem[k + j] -= &(&c * b);
            }
            q[k] = c;
        }
        Ok((Self::new(q), Self::new(rem)))
    }

    /// Monic normalization: (leading coefficient, monic polynomial).
    pub fn monic(&self) -> (GaussianRational, Self) {
        let lc = self.leading();
        match lc.inv() {
            Ok(inv) => (lc, self.scale(&inv)),
            Err(_) => (GaussianRational::zero(), Self::zero()),
        }
    }
}

fn write_coeff_times(c: &GaussianRational, k: usize, first: bool, out: &mut String) {
    let var = match k {
        0 => String::new(),
        1 => "xi".to_string(),
        _ => format!("xi^{k}"),
    };
    let text = c.to_string();
    let (neg, body) = if c.is_monomial() {
        match text.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, text),
        }
    } else {
        (false, format!("({text})"))
    };
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { "-" } else { "+" });
    }
    if var.is_empty() {
        out.push_str(&body);
    } else if body == "1" {
        out.push_str(&var);
    } else {
        out.push_str(&body);
        out.push('*');
        out.push_str(&var);
    }
}

impl PolyXi {
    /// Number of printed summands.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Text in descending powers, e.g. `6*xi^2-2`, `-i*xi`, `(1+i)*xi+3`.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            write_coeff_times(c, k, first, &mut out);
            first = false;
        }
        out
    }
}

impl fmt::Display for PolyXi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_forms() {
        assert_eq!(PolyXi::from_ints(&[-2, 0, 6]).to_text(), "6*xi^2-2");
        assert_eq!(PolyXi::from_ints(&[0, 1]).to_text(), "xi");
        let p = PolyXi::new(vec![GaussianRational::from(3), GaussianRational::from_ints(1, 1)]);
        assert_eq!(p.to_text(), "(1+i)*xi+3");
        let p = PolyXi::new(vec![GaussianRational::zero(), GaussianRational::from_ints(0, -1)]);
        assert_eq!(p.to_text(), "-i*xi");
    }

    #[test]
    fn shift_matches_evaluation() {
        let p = PolyXi::from_ints(&[1, -3, 0, 2]);
        let a = GaussianRational::from_ints(1, 2);
        let s = p.shift(&a);
        let t = GaussianRational::from_ints(-2, 5);
        assert_eq!(s.eval(&t), p.eval(&(&a + &t)));
    }

    #[test]
    fn division_round_trip() {
        let p = PolyXi::from_ints(&[1, 0, 1]);
        let (q, r) = p.div_linear(&GaussianRational::i());
        assert!(r.is_zero());
        assert_eq!(q, PolyXi::linear(&-GaussianRational::i()));
        let d = PolyXi::from_ints(&[1, 1]);
        let (q, r) = PolyXi::from_ints(&[3, 0, 0, 2]).div_rem(&d).unwrap();
        assert_eq!(q.mul(&d).add(&r), PolyXi::from_ints(&[3, 0, 0, 2]));
    }
}
