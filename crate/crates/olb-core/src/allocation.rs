//! The allocation oracle: the player's best response to a dual direction.
//!
//! Given `w = (w1, w2)` in the dual ball, the oracle solves
//!
//! ```text
//! min_{α in Δ(K)} max_{l in [0,1]^K} <w1, α ⊙ l> + <w2, l>
//!   = min_{α in Δ(K)} Σ_i max(0, w1_i α_i + w2_i)
//! ```
//!
//! because the inner maximizer sets `l_i = 1` exactly where the bracket is
//! positive. The outer problem is separable convex piecewise-linear over
//! the simplex, so instead of handing the equivalent LP to a simplex code
//! we pour the unit mass greedily along non-decreasing marginal slopes
//! (water-filling), which is exact and `O(K log K)`. A brute-force simplex
//! grid oracle is provided for cross-validation.

use alloc::vec;
use alloc::vec::Vec;

use serde::Serialize;

use crate::grid;
use crate::norms::{check_same_dim, Allocation, LoadVector};
use crate::{Error, Result};

/// Tolerance on `max(||w1||_1, ||w2||_1) <= 1` in [`DualWeight::in_dual_ball`].
pub const DUAL_BALL_TOL: f64 = 1e-9;

/// A dual direction `w = (w1, w2)`. Every formula in this module is
/// positively homogeneous in `w`, so construction only requires finite
/// entries; membership in the reduction's decision set
/// `W = {w : max(||w1||_1, ||w2||_1) <= 1}` is checked where the game
/// needs it, via [`in_dual_ball`](Self::in_dual_ball).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualWeight {
    w1: Vec<f64>,
    w2: Vec<f64>,
}

impl DualWeight {
    pub fn new(w1: Vec<f64>, w2: Vec<f64>) -> Result<Self> {
        check_same_dim(&w1, &w2)?;
        for &e in w1.iter().chain(&w2) {
            if !e.is_finite() {
                return Err(Error::InvalidValue {
                    what: "dual weight entry",
                    value: e,
                });
            }
        }
        Ok(Self { w1, w2 })
    }

    /// `max(||w1||_1, ||w2||_1) <= 1`, up to [`DUAL_BALL_TOL`].
    pub fn in_dual_ball(&self) -> bool {
        [&self.w1, &self.w2].iter().all(|part| {
            part.iter().map(|&x| crate::fmath::abs(x)).sum::<f64>() <= 1.0 + DUAL_BALL_TOL
        })
    }

    pub fn zero(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyVector);
        }
        Ok(Self {
            w1: vec![0.0; dim],
            w2: vec![0.0; dim],
        })
    }

    pub fn dim(&self) -> usize {
        self.w1.len()
    }

    pub fn w1(&self) -> &[f64] {
        &self.w1
    }

    pub fn w2(&self) -> &[f64] {
        &self.w2
    }

    pub fn is_zero(&self) -> bool {
        self.w1.iter().chain(&self.w2).all(|&x| x == 0.0)
    }
}

/// Output of the allocation oracle: the minimizing allocation and the
/// attained game value `V(w)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AllocationResult {
    pub alpha: Allocation,
    pub value: f64,
}

/// `Σ_i max(0, w1_i α_i + w2_i)`, the payoff against the worst-case load.
pub fn game_value(w: &DualWeight, alpha: &Allocation) -> Result<f64> {
    if alpha.dim() != w.dim() {
        return Err(Error::DimensionMismatch {
            expected: w.dim(),
            got: alpha.dim(),
        });
    }
    let mut v = 0.0;
    for i in 0..w.dim() {
        v += (w.w1[i] * alpha[i] + w.w2[i]).max(0.0);
    }
    Ok(v)
}

/// The environment response attaining [`game_value`]: `l_i = 1` iff
/// `w1_i α_i + w2_i > 0`.
pub fn worst_case_load(w: &DualWeight, alpha: &Allocation) -> Result<LoadVector> {
    if alpha.dim() != w.dim() {
        return Err(Error::DimensionMismatch {
            expected: w.dim(),
            got: alpha.dim(),
        });
    }
    let entries = (0..w.dim())
        .map(|i| {
            if w.w1[i] * alpha[i] + w.w2[i] > 0.0 {
                1.0
            } else {
                0.0
            }
        })
        .collect();
    LoadVector::new(entries)
}

/// Exact minimizer of [`game_value`] over the simplex.
///
/// Each coordinate contributes a convex piecewise-linear term with at most
/// one breakpoint at `α_i = -w2_i / w1_i`; mass is poured into the globally
/// cheapest marginal slopes first. Ties break toward the lowest coordinate
/// index so runs are reproducible. For `w = 0` every allocation is optimal
/// and the uniform one is returned.
pub fn compute_allocation(w: &DualWeight) -> Result<AllocationResult> {
    let k = w.dim();
    if w.is_zero() {
        let alpha = Allocation::uniform(k)?;
        let value = game_value(w, &alpha)?;
        return Ok(AllocationResult { alpha, value });
    }

    // (slope, index, capacity); within a coordinate slopes are
    // non-decreasing, so a global sort respects per-coordinate order.
    let mut segments: Vec<(f64, usize, f64)> = Vec::with_capacity(2 * k);
    for i in 0..k {
        let (a, b) = (w.w1[i], w.w2[i]);
        if a > 0.0 {
            if b < 0.0 {
                let cap = (-b / a).min(1.0);
                segments.push((0.0, i, cap));
                if cap < 1.0 {
                    segments.push((a, i, 1.0 - cap));
                }
            } else {
                segments.push((a, i, 1.0));
            }
        } else if a < 0.0 {
            if b > 0.0 {
                let cap = (b / -a).min(1.0);
                segments.push((a, i, cap));
                if cap < 1.0 {
                    segments.push((0.0, i, 1.0 - cap));
                }
            } else {
                segments.push((0.0, i, 1.0));
            }
        } else {
            segments.push((0.0, i, 1.0));
        }
    }
    segments.sort_by(|x, y| {
        x.0.partial_cmp(&y.0)
            .expect("slopes are finite")
            .then(x.1.cmp(&y.1))
    });

    let mut alpha = vec![0.0; k];
    let mut remaining = 1.0f64;
    for &(_, i, cap) in &segments {
        if remaining <= 0.0 {
            break;
        }
        let take = cap.min(remaining);
        alpha[i] += take;
        remaining -= take;
    }
    let alpha = Allocation::new(alpha)?;
    let value = game_value(w, &alpha)?;
    Ok(AllocationResult { alpha, value })
}

/// Brute-force minimum of [`game_value`] over the simplex grid with spacing
/// `resolution`. Test oracle; `K <= 4` only.
pub fn grid_allocation_oracle(w: &DualWeight, resolution: f64) -> Result<AllocationResult> {
    if !(resolution > 0.0 && resolution <= 0.5) {
        return Err(Error::InvalidValue {
            what: "grid resolution",
            value: resolution,
        });
    }
    let steps = libm::round(1.0 / resolution) as usize;
    debug_assert!(steps >= 2);
    let k = w.dim();
    let w1 = &w.w1;
    let w2 = &w.w2;
    let mut best_v = f64::INFINITY;
    let mut best_a = vec![0.0; k];
    grid::for_each_simplex_point(k, steps, |alpha| {
        let mut v = 0.0;
        for i in 0..k {
            v += (w1[i] * alpha[i] + w2[i]).max(0.0);
        }
        if v < best_v {
            best_v = v;
            best_a.copy_from_slice(alpha);
        }
    })?;
    Ok(AllocationResult {
        alpha: Allocation::new(best_a)?,
        value: best_v,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn weight(w1: &[f64], w2: &[f64]) -> DualWeight {
        DualWeight::new(w1.to_vec(), w2.to_vec()).unwrap()
    }

    #[test]
    fn game_value_examples() {
        let w = weight(&[1.0, 1.0], &[0.0, 0.0]);
        let a = Allocation::new(vec![0.5, 0.5]).unwrap();
        assert_eq!(game_value(&w, &a).unwrap(), 1.0);

        let w = weight(&[-1.0, 0.0], &[0.0, 0.0]);
        assert_eq!(game_value(&w, &a).unwrap(), 0.0);

        // Corner enumeration confirms the clipped value.
        let w = weight(&[-1.0, 1.0], &[1.0, 0.0]);
        let a = Allocation::new(vec![1.0, 0.0]).unwrap();
        let v = game_value(&w, &a).unwrap();
        assert_eq!(v, 0.0);
        let mut corner_max = f64::NEG_INFINITY;
        for l1 in [0.0, 1.0] {
            for l2 in [0.0, 1.0] {
                let payoff = w.w1()[0] * a[0] * l1
                    + w.w1()[1] * a[1] * l2
                    + w.w2()[0] * l1
                    + w.w2()[1] * l2;
                corner_max = corner_max.max(payoff);
            }
        }
        assert_eq!(corner_max, v);
    }

    #[test]
    fn worst_case_load_examples() {
        let a = Allocation::new(vec![0.5, 0.5]).unwrap();
        let w = weight(&[1.0, 1.0], &[0.0, 0.0]);
        assert_eq!(worst_case_load(&w, &a).unwrap().as_slice(), &[1.0, 1.0]);

        let w = weight(&[-1.0, -1.0], &[0.0, 0.0]);
        assert_eq!(worst_case_load(&w, &a).unwrap().as_slice(), &[0.0, 0.0]);

        // Sign check: both coordinates come out non-positive, so the
        // maximizing load is all-zero, as corner enumeration confirms.
        let w = weight(&[1.0, -1.0], &[-0.2, 0.3]);
        let a = Allocation::new(vec![0.1, 0.9]).unwrap();
        let l = worst_case_load(&w, &a).unwrap();
        assert_eq!(l.as_slice(), &[0.0, 0.0]);
        let v = game_value(&w, &a).unwrap();
        let mut corner_max = f64::NEG_INFINITY;
        for l1 in [0.0, 1.0] {
            for l2 in [0.0, 1.0] {
                let payoff = w.w1()[0] * a[0] * l1
                    + w.w1()[1] * a[1] * l2
                    + w.w2()[0] * l1
                    + w.w2()[1] * l2;
                corner_max = corner_max.max(payoff);
            }
        }
        assert_eq!(corner_max, v);
    }

    #[test]
    fn allocation_alpha_independent_objective() {
        let w = weight(&[0.0, 0.0], &[0.3, -0.3]);
        let r = compute_allocation(&w).unwrap();
        assert!((r.value - 0.3).abs() < 1e-15);
    }

    #[test]
    fn allocation_puts_mass_on_smaller_slope() {
        // Grid-verified: minimize (2 α1 + α2)/3 over the simplex.
        let w = weight(&[2.0 / 3.0, 1.0 / 3.0], &[0.0, 0.0]);
        let r = compute_allocation(&w).unwrap();
        assert_eq!(r.alpha.as_slice(), &[0.0, 1.0]);
        assert!((r.value - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn allocation_uses_negative_slope_segment() {
        // Grid-verified: both terms vanish at α = (1, 0).
        let w = weight(&[-0.5, 0.5], &[0.5, 0.0]);
        let r = compute_allocation(&w).unwrap();
        assert_eq!(r.alpha.as_slice(), &[1.0, 0.0]);
        assert!(r.value.abs() < 1e-15);
    }

    #[test]
    fn zero_weight_gives_uniform() {
        let w = DualWeight::zero(4).unwrap();
        let r = compute_allocation(&w).unwrap();
        assert_eq!(r.alpha.as_slice(), &[0.25; 4]);
        assert_eq!(r.value, 0.0);
    }

    #[test]
    fn grid_oracle_trivial_cases() {
        let w = DualWeight::zero(2).unwrap();
        assert_eq!(grid_allocation_oracle(&w, 0.01).unwrap().value, 0.0);

        let w = weight(&[1.0, 1.0], &[0.0, 0.0]);
        let r = grid_allocation_oracle(&w, 0.01).unwrap();
        assert!((r.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn grid_oracle_refuses_large_k() {
        let w = DualWeight::new(vec![0.1; 5], vec![0.0; 5]).unwrap();
        assert!(matches!(
            grid_allocation_oracle(&w, 0.01),
            Err(Error::GridTooLarge { .. })
        ));
    }

    #[test]
    fn dual_weight_membership() {
        let out = DualWeight::new(vec![0.6, 0.6], vec![0.0, 0.0]).unwrap();
        assert!(!out.in_dual_ball());
        let inside = DualWeight::new(vec![0.5, 0.5], vec![-0.9, 0.1]).unwrap();
        assert!(inside.in_dual_ball());
        assert!(DualWeight::new(vec![f64::NAN], vec![0.0]).is_err());
    }
}
