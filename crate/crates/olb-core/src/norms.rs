//! Norm families, the hindsight-optimal cost `C*`, and the combined norm
//! on the doubled payoff space.
//!
//! For a load vector `y` the offline optimum is
//! `C*(y) = min_{α in Δ(K)} ||α ⊙ y||`. For the sup-norm this has the
//! closed form `1 / Σ_j (1/y_j)`, attained by `α_i ∝ 1/y_i`; a zero-load
//! server absorbs everything, so `C* = 0` whenever some `y_j = 0`.
//! The combined norm `||(x, y)||⁺ = ||x|| + ||y||` measures distance in the
//! doubled space; its dual is the max of the per-block dual norms.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Deref;

use serde::Serialize;

use crate::fmath;
use crate::{Error, Result};

/// Per-server load condition vector, entries in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct LoadVector(Vec<f64>);

impl LoadVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyVector);
        }
        for &e in &entries {
            if !(0.0..=1.0).contains(&e) {
                return Err(Error::InvalidValue {
                    what: "load entry",
                    value: e,
                });
            }
        }
        Ok(Self(entries))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for LoadVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// Probability vector over servers: non-negative entries summing to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Allocation(Vec<f64>);

/// Tolerance on `|Σ α_i − 1|` accepted by [`Allocation::new`].
pub const SIMPLEX_SUM_TOL: f64 = 1e-12;

impl Allocation {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyVector);
        }
        let mut sum = 0.0;
        for &e in &entries {
            if e < 0.0 || e.is_nan() {
                return Err(Error::InvalidValue {
                    what: "allocation entry",
                    value: e,
                });
            }
            sum += e;
        }
        if fmath::abs(sum - 1.0) > SIMPLEX_SUM_TOL {
            return Err(Error::InvalidValue {
                what: "allocation sum",
                value: sum,
            });
        }
        Ok(Self(entries))
    }

    pub fn uniform(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyVector);
        }
        Ok(Self(vec![1.0 / dim as f64; dim]))
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl Deref for Allocation {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// The norm families the library understands.
///
/// `LInf` is the fully supported makespan instantiation. `Lp` ships for
/// experimentation only: `C*` and the norm itself are implemented, but the
/// support oracle and the game engine stay sup-norm specific.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum NormFamily {
    LInf,
    Lp { p: f64 },
}

impl NormFamily {
    /// L_p family; requires `p > 1` so the dual exponent is finite.
    pub fn lp(p: f64) -> Result<Self> {
        if p <= 1.0 || !p.is_finite() {
            return Err(Error::InvalidValue {
                what: "norm exponent p",
                value: p,
            });
        }
        Ok(Self::Lp { p })
    }

    pub fn norm(&self, v: &[f64]) -> Result<f64> {
        match self {
            Self::LInf => linf_norm(v),
            Self::Lp { p } => lp_norm(v, *p),
        }
    }

    /// Dual norm: L1 for the sup-norm, L_q with `q = p/(p−1)` for L_p.
    pub fn dual_norm(&self, v: &[f64]) -> Result<f64> {
        match self {
            Self::LInf => l1_norm(v),
            Self::Lp { p } => lp_norm(v, *p / (*p - 1.0)),
        }
    }

    pub fn cstar(&self, y: &[f64]) -> Result<f64> {
        match self {
            Self::LInf => {
                if y.is_empty() {
                    return Err(Error::EmptyVector);
                }
                Ok(cstar_inf(y))
            }
            Self::Lp { p } => cstar_p(y, *p),
        }
    }

    pub fn cstar_minimizer(&self, y: &[f64]) -> Result<Allocation> {
        match self {
            Self::LInf => cstar_minimizer_inf(y),
            Self::Lp { p } => cstar_minimizer_p(y, *p),
        }
    }
}

/// `max_i |v_i|`.
pub fn linf_norm(v: &[f64]) -> Result<f64> {
    if v.is_empty() {
        return Err(Error::EmptyVector);
    }
    Ok(v.iter().fold(0.0, |m, &x| m.max(fmath::abs(x))))
}

/// `Σ_i |v_i|`.
pub fn l1_norm(v: &[f64]) -> Result<f64> {
    if v.is_empty() {
        return Err(Error::EmptyVector);
    }
    Ok(v.iter().map(|&x| fmath::abs(x)).sum())
}

/// `(Σ_i |v_i|^p)^{1/p}` for finite `p >= 1`.
pub fn lp_norm(v: &[f64], p: f64) -> Result<f64> {
    if v.is_empty() {
        return Err(Error::EmptyVector);
    }
    if p < 1.0 || p.is_nan() {
        return Err(Error::InvalidValue {
            what: "norm exponent p",
            value: p,
        });
    }
    // Scale by the max entry so large exponents do not overflow.
    let m = v.iter().fold(0.0, |m: f64, &x| m.max(fmath::abs(x)));
    if m == 0.0 {
        return Ok(0.0);
    }
    let sum: f64 = v.iter().map(|&x| fmath::powf(fmath::abs(x) / m, p)).sum();
    Ok(m * fmath::powf(sum, 1.0 / p))
}

/// Hindsight-optimal makespan `1 / Σ_j (1/y_j)`, with `C* = 0` whenever
/// some `y_j = 0` (route everything to a free server).
///
/// Positively homogeneous, so it applies to unnormalized cumulative loads
/// as well as to single-round `[0,1]` vectors.
pub fn cstar_inf(y: &[f64]) -> f64 {
    let mut inv_sum = 0.0;
    for &e in y {
        if e <= 0.0 {
            return 0.0;
        }
        inv_sum += 1.0 / e;
    }
    if inv_sum == 0.0 {
        // Empty input; treat as no servers, zero cost.
        return 0.0;
    }
    1.0 / inv_sum
}

/// Allocation attaining [`cstar_inf`]: `α_i ∝ 1/y_i`, or the uniform
/// distribution over zero-load servers when any exist.
pub fn cstar_minimizer_inf(y: &[f64]) -> Result<Allocation> {
    if y.is_empty() {
        return Err(Error::EmptyVector);
    }
    let zeros = y.iter().filter(|&&e| e <= 0.0).count();
    let mut alpha = vec![0.0; y.len()];
    if zeros > 0 {
        let share = 1.0 / zeros as f64;
        for (a, &e) in alpha.iter_mut().zip(y) {
            if e <= 0.0 {
                *a = share;
            }
        }
    } else {
        let inv_sum: f64 = y.iter().map(|&e| 1.0 / e).sum();
        for (a, &e) in alpha.iter_mut().zip(y) {
            *a = (1.0 / e) / inv_sum;
        }
    }
    Allocation::new(alpha)
}

/// `||(x, y)||⁺ = ||x|| + ||y||` on the doubled space.
pub fn combined_norm(x: &[f64], y: &[f64], family: &NormFamily) -> Result<f64> {
    check_same_dim(x, y)?;
    Ok(family.norm(x)? + family.norm(y)?)
}

/// Dual of the combined norm: `max(||w1||_*, ||w2||_*)`.
pub fn dual_combined_norm(w1: &[f64], w2: &[f64], family: &NormFamily) -> Result<f64> {
    check_same_dim(w1, w2)?;
    Ok(family.dual_norm(w1)?.max(family.dual_norm(w2)?))
}

/// Hindsight-optimal L_p cost `(Σ_i y_i^{-q})^{-1/q}` with `q = p/(p−1)`.
///
/// Algebraically equal to the product form
/// `Π y_i / (Σ_i Π_{j≠i} y_j^q)^{1/q}` but safe for large `K`; zero if any
/// `y_i = 0`. Experimental, like everything L_p here.
pub fn cstar_p(y: &[f64], p: f64) -> Result<f64> {
    if y.is_empty() {
        return Err(Error::EmptyVector);
    }
    if p <= 1.0 || !p.is_finite() {
        return Err(Error::InvalidValue {
            what: "norm exponent p",
            value: p,
        });
    }
    let q = p / (p - 1.0);
    let mut sum = 0.0;
    for &e in y {
        if e <= 0.0 {
            return Ok(0.0);
        }
        sum += fmath::powf(e, -q);
    }
    Ok(fmath::powf(sum, -1.0 / q))
}

/// Allocation attaining [`cstar_p`]: `α_i ∝ y_i^{-q}`, uniform over
/// zero-load servers when any exist.
pub fn cstar_minimizer_p(y: &[f64], p: f64) -> Result<Allocation> {
    if y.is_empty() {
        return Err(Error::EmptyVector);
    }
    if p <= 1.0 || !p.is_finite() {
        return Err(Error::InvalidValue {
            what: "norm exponent p",
            value: p,
        });
    }
    let zeros = y.iter().filter(|&&e| e <= 0.0).count();
    let mut alpha = vec![0.0; y.len()];
    if zeros > 0 {
        let share = 1.0 / zeros as f64;
        for (a, &e) in alpha.iter_mut().zip(y) {
            if e <= 0.0 {
                *a = share;
            }
        }
    } else {
        let q = p / (p - 1.0);
        let weights: Vec<f64> = y.iter().map(|&e| fmath::powf(e, -q)).collect();
        let sum: f64 = weights.iter().sum();
        for (a, w) in alpha.iter_mut().zip(&weights) {
            *a = w / sum;
        }
    }
    Allocation::new(alpha)
}

pub(crate) fn check_same_dim(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.len(),
            got: b.len(),
        });
    }
    if a.is_empty() {
        return Err(Error::EmptyVector);
    }
    Ok(())
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(&x, &y)| x * y).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn linf_basics() {
        assert_eq!(linf_norm(&[0.0, 0.0, 0.0]).unwrap(), 0.0);
        assert_eq!(linf_norm(&[0.2, -0.7, 0.5]).unwrap(), 0.7);
        assert_eq!(linf_norm(&[1.0; 10]).unwrap(), 1.0);
        assert_eq!(linf_norm(&[]), Err(Error::EmptyVector));
    }

    #[test]
    fn cstar_inf_closed_form() {
        assert!((cstar_inf(&[1.0, 1.0]) - 0.5).abs() < 1e-15);
        assert_eq!(cstar_inf(&[0.5, 0.0]), 0.0);
        // 1/(5 + 10/3 + 5/3) = 0.1, grid-verified in tests/oracles.rs.
        assert!((cstar_inf(&[0.2, 0.3, 0.6]) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn cstar_minimizer_inf_cases() {
        let a = cstar_minimizer_inf(&[1.0, 1.0]).unwrap();
        assert_eq!(a.as_slice(), &[0.5, 0.5]);

        let a = cstar_minimizer_inf(&[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(a.as_slice(), &[0.5, 0.5, 0.0]);

        let l = [0.2, 0.3, 0.6];
        let a = cstar_minimizer_inf(&l).unwrap();
        assert!((a[0] - 0.5).abs() < 1e-12);
        assert!((a[1] - 1.0 / 3.0).abs() < 1e-12);
        assert!((a[2] - 1.0 / 6.0).abs() < 1e-12);
        // The attained makespan equals C*.
        let attained: f64 = a
            .iter()
            .zip(&l)
            .map(|(&ai, &li)| ai * li)
            .fold(0.0, f64::max);
        assert!((attained - cstar_inf(&l)).abs() < 1e-12);
    }

    #[test]
    fn combined_norm_linf() {
        let f = NormFamily::LInf;
        assert_eq!(combined_norm(&[0.0, 0.0], &[0.0, 0.0], &f).unwrap(), 0.0);
        let v = combined_norm(&[0.3, 0.1], &[0.5, 0.9], &f).unwrap();
        assert!((v - 1.2).abs() < 1e-15);
        assert!(combined_norm(&[1.0], &[1.0, 2.0], &f).is_err());
    }

    #[test]
    fn dual_combined_norm_linf() {
        let f = NormFamily::LInf;
        assert_eq!(
            dual_combined_norm(&[0.0, 0.0], &[0.0, 0.0], &f).unwrap(),
            0.0
        );
        let v = dual_combined_norm(&[0.5, -0.5], &[0.1, 0.0], &f).unwrap();
        assert!((v - 1.0).abs() < 1e-15);
    }

    #[test]
    fn cstar_p_values() {
        // p=2, y=(1,1): grid-verified 2^{-1/2}.
        let v = cstar_p(&[1.0, 1.0], 2.0).unwrap();
        assert!((v - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);

        assert_eq!(cstar_p(&[1.0, 0.0], 2.0).unwrap(), 0.0);

        // Large p approaches the sup-norm optimum.
        let v = cstar_p(&[0.2, 0.3, 0.6], 1000.0).unwrap();
        assert!((v - 0.1).abs() < 1e-2);
    }

    #[test]
    fn cstar_p_rejects_bad_exponent() {
        assert!(cstar_p(&[0.5], 1.0).is_err());
        assert!(cstar_p(&[0.5], f64::NAN).is_err());
    }

    #[test]
    fn homogeneity_of_cstar_inf() {
        let y = [0.4, 0.9, 0.7];
        for &c in &[0.1, 0.5, 1.0] {
            let scaled: Vec<f64> = y.iter().map(|&e| c * e).collect();
            assert!((cstar_inf(&scaled) - c * cstar_inf(&y)).abs() < 1e-12);
        }
    }

    #[test]
    fn allocation_validation() {
        assert!(Allocation::new(vec![0.5, 0.5]).is_ok());
        assert!(Allocation::new(vec![0.5, 0.6]).is_err());
        assert!(Allocation::new(vec![-0.1, 1.1]).is_err());
        assert!(Allocation::new(vec![]).is_err());
        let u = Allocation::uniform(3).unwrap();
        assert!((u.iter().sum::<f64>() - 1.0).abs() <= SIMPLEX_SUM_TOL);
    }

    #[test]
    fn load_vector_validation() {
        assert!(LoadVector::new(vec![0.0, 1.0, 0.3]).is_ok());
        assert!(LoadVector::new(vec![1.2]).is_err());
        assert!(LoadVector::new(vec![-0.1]).is_err());
        assert!(LoadVector::new(vec![]).is_err());
    }
}
