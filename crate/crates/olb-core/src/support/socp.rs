//! Second-order-cone form of the support problem, emitted as structured
//! data for external conic solvers.
//!
//! The constraint `x_i <= 1 / Σ_j (1/y_j)` multiplies out to
//! `Σ_j x_i²/y_j <= x_i`, which splits into per-pair hyperbolic constraints
//! `x_i² <= y_j z_{i,j}` with `Σ_j z_{i,j} = x_i`, and each hyperbolic
//! constraint is the rotated cone `||(2x_i, y_j − z_{i,j})||₂ <= y_j + z_{i,j}`.
//! The emitted problem minimizes `<-(w1, w2, 0, …), x̃>` over the variable
//! vector `x̃ = (x₁..x_K, y₁..y_K, z₁₁..z_KK)`, so its optimum is `-h_S(w)`
//! and the `(x, y)` part of its solution lies in the target set.

use alloc::vec;
use alloc::vec::Vec;

use serde::Serialize;

use crate::allocation::DualWeight;
use crate::fmath;
use crate::{Error, Result};

/// Sparse affine expression `Σ coef·x̃[var] + constant`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearExpr {
    pub terms: Vec<(usize, f64)>,
    pub constant: f64,
}

impl LinearExpr {
    fn of(terms: Vec<(usize, f64)>) -> Self {
        Self {
            terms,
            constant: 0.0,
        }
    }

    pub fn eval(&self, point: &[f64]) -> f64 {
        self.constant
            + self
                .terms
                .iter()
                .map(|&(v, c)| c * point[v])
                .sum::<f64>()
    }
}

/// `||(u, v)||₂ <= bound`, tagged with the `(i, j)` pair it encodes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConeConstraint {
    pub i: usize,
    pub j: usize,
    pub u: LinearExpr,
    pub v: LinearExpr,
    pub bound: LinearExpr,
}

/// `Σ coef·x̃[var] = rhs`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EqualityConstraint {
    pub terms: Vec<(usize, f64)>,
    pub rhs: f64,
}

/// `lower <= x̃[var] <= upper`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxConstraint {
    pub var: usize,
    pub lower: f64,
    pub upper: f64,
}

/// The assembled cone program. Serializes to the JSON document consumed by
/// validation scripts (`objective`, `cones`, `equalities`, `boxes`).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SocpProblem {
    pub num_vars: usize,
    pub objective: Vec<f64>,
    pub cones: Vec<ConeConstraint>,
    pub equalities: Vec<EqualityConstraint>,
    pub boxes: Vec<BoxConstraint>,
}

/// Index of `x_i` in the variable vector.
pub fn var_x(_k: usize, i: usize) -> usize {
    i
}

/// Index of `y_j` in the variable vector.
pub fn var_y(k: usize, j: usize) -> usize {
    k + j
}

/// Index of `z_{i,j}` in the variable vector.
pub fn var_z(k: usize, i: usize, j: usize) -> usize {
    2 * k + i * k + j
}

/// Emits the cone program for direction `w`: K² hyperbolic cones, K split
/// equalities, and the `y` box.
pub fn build_socp_data(w: &DualWeight) -> SocpProblem {
    let k = w.dim();
    let num_vars = 2 * k + k * k;

    let mut objective = vec![0.0; num_vars];
    for i in 0..k {
        objective[var_x(k, i)] = -w.w1()[i];
        objective[var_y(k, i)] = -w.w2()[i];
    }

    let mut cones = Vec::with_capacity(k * k);
    for i in 0..k {
        for j in 0..k {
            cones.push(ConeConstraint {
                i,
                j,
                u: LinearExpr::of(vec![(var_x(k, i), 2.0)]),
                v: LinearExpr::of(vec![(var_y(k, j), 1.0), (var_z(k, i, j), -1.0)]),
                bound: LinearExpr::of(vec![(var_y(k, j), 1.0), (var_z(k, i, j), 1.0)]),
            });
        }
    }

    let mut equalities = Vec::with_capacity(k);
    for i in 0..k {
        let mut terms = vec![(var_x(k, i), 1.0)];
        for j in 0..k {
            terms.push((var_z(k, i, j), -1.0));
        }
        equalities.push(EqualityConstraint { terms, rhs: 0.0 });
    }

    let boxes = (0..k)
        .map(|j| BoxConstraint {
            var: var_y(k, j),
            lower: 0.0,
            upper: 1.0,
        })
        .collect();

    SocpProblem {
        num_vars,
        objective,
        cones,
        equalities,
        boxes,
    }
}

impl SocpProblem {
    /// Worst constraint violation of `point` (0 when feasible).
    pub fn max_violation(&self, point: &[f64]) -> Result<f64> {
        if point.len() != self.num_vars {
            return Err(Error::DimensionMismatch {
                expected: self.num_vars,
                got: point.len(),
            });
        }
        let mut worst = 0.0f64;
        for cone in &self.cones {
            let norm = fmath::hypot(cone.u.eval(point), cone.v.eval(point));
            worst = worst.max(norm - cone.bound.eval(point));
        }
        for eq in &self.equalities {
            let lhs: f64 = eq.terms.iter().map(|&(v, c)| c * point[v]).sum();
            worst = worst.max(fmath::abs(lhs - eq.rhs));
        }
        for b in &self.boxes {
            worst = worst.max(b.lower - point[b.var]);
            worst = worst.max(point[b.var] - b.upper);
        }
        Ok(worst)
    }

    pub fn objective_value(&self, point: &[f64]) -> f64 {
        crate::norms::dot(&self.objective, point)
    }
}

/// The natural split certificate `z_{i,j} = x_i · (1/y_j) / Σ_m (1/y_m)`.
///
/// Whenever `||x||_∞ <= C*(y)` and `y > 0`, the point `(x, y, z)` built from
/// this split satisfies every cone and equality constraint.
pub fn feasible_z(x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    crate::norms::check_same_dim(x, y)?;
    if y.iter().any(|&e| e <= 0.0) {
        return Err(Error::InvalidValue {
            what: "zero y coordinate in z split",
            value: 0.0,
        });
    }
    let k = x.len();
    let inv_sum: f64 = y.iter().map(|&e| 1.0 / e).sum();
    let mut z = vec![0.0; k * k];
    for i in 0..k {
        for j in 0..k {
            z[i * k + j] = x[i] * (1.0 / y[j]) / inv_sum;
        }
    }
    Ok(z)
}

/// Both sides of the hyperbolic-cone equivalence for one triple:
/// `x² <= y·z with y, z >= 0` iff `||(2x, y − z)||₂ <= y + z`.
/// Returns whether the two sides agree.
pub fn hyperbolic_rewrite_check(x: f64, y: f64, z: f64) -> bool {
    let hyperbolic = x * x <= y * z && y >= 0.0 && z >= 0.0;
    let cone = fmath::hypot(2.0 * x, y - z) <= y + z;
    hyperbolic == cone
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_for_k2() {
        let w = DualWeight::zero(2).unwrap();
        let p = build_socp_data(&w);
        assert_eq!(p.num_vars, 8);
        assert_eq!(p.cones.len(), 4);
        assert_eq!(p.equalities.len(), 2);
        assert_eq!(p.boxes.len(), 2);
    }

    #[test]
    fn k1_layout() {
        let w = DualWeight::new(vec![0.5], vec![0.25]).unwrap();
        let p = build_socp_data(&w);
        assert_eq!(p.num_vars, 3);
        assert_eq!(p.cones.len(), 1);
        let cone = &p.cones[0];
        assert_eq!(cone.u.terms, vec![(0, 2.0)]);
        assert_eq!(cone.v.terms, vec![(1, 1.0), (2, -1.0)]);
        assert_eq!(cone.bound.terms, vec![(1, 1.0), (2, 1.0)]);
        assert_eq!(p.equalities[0].terms, vec![(0, 1.0), (2, -1.0)]);
        assert_eq!(p.objective, vec![-0.5, -0.25, 0.0]);
    }

    #[test]
    fn split_point_round_trip() {
        // x at the C* ceiling, z from the proportional split: feasible.
        let y = vec![0.8, 0.4];
        let c = crate::norms::cstar_inf(&y);
        let x = vec![c, c];
        let z = feasible_z(&x, &y).unwrap();
        let w = DualWeight::new(vec![0.5, 0.5], vec![0.0, 0.0]).unwrap();
        let p = build_socp_data(&w);
        let mut point = Vec::new();
        point.extend_from_slice(&x);
        point.extend_from_slice(&y);
        point.extend_from_slice(&z);
        assert!(p.max_violation(&point).unwrap() <= 1e-9);
    }

    #[test]
    fn json_document_field_names() {
        let w = DualWeight::new(vec![0.5], vec![-0.25]).unwrap();
        let json = serde_json::to_value(build_socp_data(&w)).unwrap();
        for key in ["objective", "cones", "equalities", "boxes"] {
            assert!(json.get(key).is_some(), "missing {key}");
        }
        let cone = &json["cones"][0];
        for key in ["i", "j", "u", "v", "bound"] {
            assert!(cone.get(key).is_some(), "cone missing {key}");
        }
    }

    #[test]
    fn hyperbolic_boundary_cases() {
        // Boundary: both sides tight.
        assert!(hyperbolic_rewrite_check(1.0, 1.0, 1.0));
        // Violated on both sides.
        assert!(hyperbolic_rewrite_check(1.0, 1.0, 0.5));
        // Negative y: hyperbolic side false, cone side false too.
        assert!(hyperbolic_rewrite_check(0.0, -1.0, 1.0));
    }
}
