//! Numeric residue oracle: trapezoidal rule on the circle |ξ_n − i| = 1/2.
//!
//! The exact engine never consults this module; it exists to cross-check
//! residue extraction through an unrelated computation path.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::arith::GaussianRational;
use crate::bigfloat::{BigComplexFloat, BigFloat, MIN_PRECISION};
use crate::ratfunc::{RatFuncError, RatFuncXi};

pub const DEFAULT_PRECISION: u32 = 256;
pub const DEFAULT_NODES: usize = 4096;
pub const MIN_NODES: usize = 16;

/// Nodes and weights for one (precision, node count) pair.
#[derive(Debug)]
pub struct ContourGrid {
    pub precision: u32,
    /// ω^j, the unit roots e^{2πij/N}
    pub roots: Vec<BigComplexFloat>,
    /// ξ_j = i + ω^j / 2
    pub nodes: Vec<BigComplexFloat>,
}

impl ContourGrid {
    pub fn new(precision: u32, nodes: usize) -> Result<Self, RatFuncError> {
        if precision < MIN_PRECISION {
            return Err(RatFuncError::InvalidQuadrature(format!("precision {precision} < {MIN_PRECISION} bits")));
        }
        if nodes < MIN_NODES {
            return Err(RatFuncError::InvalidQuadrature(format!("{nodes} nodes < {MIN_NODES}")));
        }
        let guard = precision + 32;
        let (c, s) = BigFloat::cos_sin_turn(1, nodes as i64, guard);
        let omega = BigComplexFloat::new(c, s);
        let mut w = BigComplexFloat::from_gaussian(&GaussianRational::one(), guard);
        let center = BigComplexFloat::from_gaussian(&GaussianRational::i(), precision);
        let mut roots = Vec::with_capacity(nodes);
        let mut pts = Vec::with_capacity(nodes);
        for _ in 0..nodes {
            let r = BigComplexFloat::new(w.re.with_precision(precision), w.im.with_precision(precision));
            pts.push(center.add(&r.mul_pow2(-1)));
            roots.push(r);
            w = w.mul(&omega);
        }
        Ok(Self { precision, roots, nodes: pts })
    }

    /// Shared grid, built once per (precision, nodes).
    pub fn cached(precision: u32, nodes: usize) -> Result<Arc<Self>, RatFuncError> {
        type Cache = Mutex<HashMap<(u32, usize), Arc<ContourGrid>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(g) = cache.lock().expect("grid cache poisoned").get(&(precision, nodes)) {
            return Ok(g.clone());
        }
        let grid = Arc::new(Self::new(precision, nodes)?);
        cache.lock().expect("grid cache poisoned").insert((precision, nodes), grid.clone());
        Ok(grid)
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// (1/2πi)∮ f dξ ≈ (1/N) Σ f(ξ_j)·(ξ_j − i).
    pub fn residue(&self, f: &RatFuncXi) -> Result<BigComplexFloat, RatFuncError> {
        f.poles_only_at_pm_i()?;
        let mut acc = BigComplexFloat::zero(self.precision);
        if f.is_zero() {
            return Ok(acc);
        }
        let ev = f.float_evaluator(self.precision);
        for (x, w) in self.nodes.iter().zip(&self.roots) {
            let v = ev
                .eval(x)
                .ok_or_else(|| RatFuncError::PoleAtEvaluationPoint("quadrature node".into()))?;
            acc = acc.add(&v.mul(w));
        }
        let scale = BigFloat::from_rational(
            &crate::arith::rat(1, 2 * self.nodes.len() as i64),
            self.precision,
        );
        Ok(BigComplexFloat::new(acc.re.mul(&scale), acc.im.mul(&scale)))
    }
}

/// Residue of f at +i by quadrature with `nodes` points at `precision_bits`.
pub fn contour_residue_numeric(f: &RatFuncXi, precision_bits: u32, nodes: usize) -> Result<BigComplexFloat, RatFuncError> {
    ContourGrid::cached(precision_bits, nodes)?.residue(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bigfloat::pow10_tolerance;

    #[test]
    fn lorentzian_residue() {
        let f = RatFuncXi::one_plus_xi2_pow(-1);
        let r = contour_residue_numeric(&f, 256, 256).unwrap();
        let exact = GaussianRational::new(crate::arith::rat(0, 1), crate::arith::rat(-1, 2));
        assert!(r.within(&exact, &pow10_tolerance(40)));
    }

    #[test]
    fn zero_function() {
        let r = contour_residue_numeric(&RatFuncXi::zero(), 128, 16).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn rejects_small_grids() {
        assert!(ContourGrid::new(32, 64).is_err());
        assert!(ContourGrid::new(128, 8).is_err());
    }
}
