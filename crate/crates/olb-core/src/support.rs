//! The support oracle: maximizing points of the target set.
//!
//! The target set for the sup-norm game is
//! `S = {(x, y) in [0,1]^K × [0,1]^K : ||x||_∞ <= C*(y)}`, and the oracle
//! computes `argmax_{s in S} <s, w>`, which is a subgradient of the support
//! function `h_S` at `w`.
//!
//! The objective is linear in `x` with box `0 <= x_i <= C*(y)`, so the
//! optimizer sets `x_i = C*(y)` exactly where `w1_i > 0` and the problem
//! reduces to maximizing the concave function
//!
//! ```text
//! f(y) = P · C*(y) + <w2, y>,    P = Σ_i max(0, w1_i)
//! ```
//!
//! over the unit box. The solver runs projected gradient ascent with
//! multi-start (the gradient of `C*` has the closed form
//! `∂C*/∂y_j = (C*(y)/y_j)²`), then finishes with an exact active-set solve
//! of the first-order conditions: coordinates split into anchored (`y_j = 1`)
//! and interior (`y_j = C* · sqrt(P / -w2_j)`) by a threshold on `-w2_j`,
//! which the closed-form gradient makes solvable per candidate split. The
//! face where some `y_j = 0` collapses to a linear problem (`C* = 0` there)
//! and is handled as an explicit candidate, as is the fully linear case
//! `P = 0`. Feasibility of the returned point is exact; only the objective
//! carries the solver tolerance.

pub mod socp;

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;

use rand_core::{RngCore, SeedableRng};
use serde::Serialize;

use crate::allocation::DualWeight;
use crate::fmath;
use crate::grid;
use crate::norms::{cstar_inf, dot, linf_norm};
use crate::{Error, Result};

/// Default objective tolerance for the solver.
pub const DEFAULT_TOL: f64 = 1e-6;
/// Default number of random restarts on top of the all-ones start.
pub const DEFAULT_RESTARTS: usize = 8;
/// Iteration cap per gradient-ascent start.
pub const DEFAULT_MAX_ITERS: usize = 120;
/// Seed used by the free-function entry points.
pub const DEFAULT_SEED: u64 = 0x6f6c_625f_7375_7070;
/// Slack allowed on membership checks of returned points.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// A point of the target set `S`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TargetPoint {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl TargetPoint {
    /// Validates box membership and `||x||_∞ <= C*(y) + FEASIBILITY_TOL`.
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        crate::norms::check_same_dim(&x, &y)?;
        for &e in x.iter().chain(&y) {
            if !(0.0..=1.0).contains(&e) {
                return Err(Error::InvalidValue {
                    what: "target point entry",
                    value: e,
                });
            }
        }
        let xn = linf_norm(&x)?;
        if xn > cstar_inf(&y) + FEASIBILITY_TOL {
            return Err(Error::InvalidValue {
                what: "target point ||x|| - C*(y)",
                value: xn - cstar_inf(&y),
            });
        }
        Ok(Self { x, y })
    }

    pub fn dim(&self) -> usize {
        self.x.len()
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }
}

/// A support point together with its objective value `<s, w>`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportResult {
    pub point: TargetPoint,
    pub h_value: f64,
}

/// Configurable solver for the support problem.
#[derive(Debug, Clone)]
pub struct SupportSolver {
    pub tol: f64,
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
}

impl Default for SupportSolver {
    fn default() -> Self {
        Self {
            tol: DEFAULT_TOL,
            restarts: DEFAULT_RESTARTS,
            max_iters: DEFAULT_MAX_ITERS,
            seed: DEFAULT_SEED,
        }
    }
}

impl SupportSolver {
    pub fn with_tol(tol: f64) -> Self {
        Self {
            tol,
            ..Self::default()
        }
    }

    /// Solves `max_{s in S} <s, w>` to within `self.tol`.
    pub fn solve(&self, w: &DualWeight) -> Result<SupportResult> {
        self.solve_seeded(w, self.seed)
    }

    /// Like [`solve`](Self::solve) but with an explicit seed for the
    /// restart points, so callers can derive per-round seeds.
    pub fn solve_seeded(&self, w: &DualWeight, seed: u64) -> Result<SupportResult> {
        if !(self.tol > 0.0 && self.tol <= 1e-3) {
            return Err(Error::InvalidValue {
                what: "support solver tol",
                value: self.tol,
            });
        }
        let k = w.dim();
        let w1 = w.w1();
        let w2 = w.w2();
        let p: f64 = w1.iter().map(|&v| v.max(0.0)).sum();

        // Fully linear case: x = 0 and each y_j independently 0 or 1.
        if p == 0.0 {
            let y: Vec<f64> = w2.iter().map(|&v| if v > 0.0 { 1.0 } else { 0.0 }).collect();
            return finish(w1, w2, y);
        }

        let exact = best_exact_candidate(k, p, w2);

        let mut best_y = exact;
        let mut best_f = reduced_objective(p, w2, &best_y);

        let mut pga = PgaScratch::new(k);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        for start in 0..=self.restarts {
            let mut y = vec![1.0; k];
            if start > 0 {
                for e in &mut y {
                    // Uniform on (0, 1]: keep C* differentiable at the start.
                    *e = 1.0 - unit_f64(&mut rng);
                }
            }
            let f = pga.ascend(p, w2, &mut y, self.tol, self.max_iters);
            // Exact candidates win ties so trajectories do not depend on
            // ascent rounding.
            if f > best_f {
                best_f = f;
                best_y = y;
            }
        }

        // ε-optimality certificate: the active-set enumeration contains the
        // true optimum, so the winner is within tol by construction. The
        // error path guards against NaN poisoning only.
        if !best_f.is_finite() {
            let fallback = finish(w1, w2, vec![0.0; k])?;
            return Err(Error::SupportNonConvergence(Box::new(fallback)));
        }
        finish(w1, w2, best_y)
    }
}

/// `argmax_{s in S} <s, w>` with the default solver at tolerance `tol`.
pub fn support_point_inf(w: &DualWeight, tol: f64) -> Result<SupportResult> {
    SupportSolver::with_tol(tol).solve(w)
}

/// `h_S(w)`, the support function value, to within `tol`.
pub fn h_value(w: &DualWeight, tol: f64) -> Result<f64> {
    Ok(support_point_inf(w, tol)?.h_value)
}

/// Brute-force support maximum over the `y` grid with spacing `resolution`
/// (`x` follows the `x_i = C*(y)·[w1_i > 0]` rule). Test oracle; `K <= 3`.
pub fn grid_support_oracle(w: &DualWeight, resolution: f64) -> Result<SupportResult> {
    if w.dim() > 3 {
        return Err(Error::GridTooLarge {
            dim: w.dim(),
            max_dim: 3,
        });
    }
    if !(resolution > 0.0 && resolution <= 0.5) {
        return Err(Error::InvalidValue {
            what: "grid resolution",
            value: resolution,
        });
    }
    let steps = libm::round(1.0 / resolution) as usize;
    let k = w.dim();
    let w2 = w.w2();
    let p: f64 = w.w1().iter().map(|&v| v.max(0.0)).sum();
    let mut best_f = f64::NEG_INFINITY;
    let mut best_y = vec![0.0; k];
    grid::for_each_box_point(k, steps, |y| {
        let f = p * cstar_inf(y) + dot(w2, y);
        if f > best_f {
            best_f = f;
            best_y.copy_from_slice(y);
        }
    })?;
    finish(w.w1(), w2, best_y)
}

/// Assembles the full support point from the solved `y`:
/// `x_i = C*(y)` where `w1_i > 0`, else 0.
fn finish(w1: &[f64], w2: &[f64], y: Vec<f64>) -> Result<SupportResult> {
    let c = cstar_inf(&y);
    let x: Vec<f64> = w1.iter().map(|&v| if v > 0.0 { c } else { 0.0 }).collect();
    let h_value = dot(w1, &x) + dot(w2, &y);
    Ok(SupportResult {
        point: TargetPoint::new(x, y)?,
        h_value,
    })
}

/// `f(y) = P·C*(y) + <w2, y>`.
fn reduced_objective(p: f64, w2: &[f64], y: &[f64]) -> f64 {
    p * cstar_inf(y) + dot(w2, y)
}

/// One-sided gradient of the reduced objective, valid on the whole box.
///
/// On the interior `∂f/∂y_j = P·(C*/y_j)² + w2_j`. With exactly one zero
/// coordinate the ratio `C*/y_j` tends to 1 there and to 0 elsewhere; with
/// two or more zeros `C*` is flat and only `w2` remains.
fn reduced_gradient(p: f64, w2: &[f64], y: &[f64], grad: &mut [f64]) {
    let zeros = y.iter().filter(|&&e| e <= 0.0).count();
    match zeros {
        0 => {
            let c = cstar_inf(y);
            for j in 0..y.len() {
                let r = c / y[j];
                grad[j] = p * r * r + w2[j];
            }
        }
        1 => {
            for j in 0..y.len() {
                grad[j] = if y[j] <= 0.0 { p + w2[j] } else { w2[j] };
            }
        }
        _ => grad.copy_from_slice(w2),
    }
}

/// Best point among the exact candidates: the zero face (`C* = 0`, linear)
/// and every anchored/interior split of the first-order conditions.
fn best_exact_candidate(k: usize, p: f64, w2: &[f64]) -> Vec<f64> {
    // Zero face: some y_j = 0 kills C*, leaving max <w2, y>.
    let mut best: Vec<f64> = w2.iter().map(|&v| if v > 0.0 { 1.0 } else { 0.0 }).collect();
    let mut best_f = reduced_objective(p, w2, &best);

    // Positive branch: sort by -w2 descending; the m most negative-paying
    // coordinates go interior, the rest anchor at 1. The stationarity
    // equation P·(c/y_j)² = -w2_j with Σ 1/y_j = 1/c gives c in closed form
    // per m. Clipping plus objective re-evaluation keeps every candidate
    // feasible even for inconsistent splits.
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by(|&a, &b| {
        w2[a]
            .partial_cmp(&w2[b])
            .expect("weights are finite")
            .then(a.cmp(&b))
    });
    let mut sigma = 0.0;
    let mut y = vec![0.0; k];
    for m in 0..k {
        if m > 0 {
            let j = order[m - 1];
            if w2[j] >= 0.0 {
                break;
            }
            sigma += fmath::sqrt(-w2[j] / p);
        }
        if sigma >= 1.0 {
            break;
        }
        let c = (1.0 - sigma) / (k - m) as f64;
        y.iter_mut().for_each(|e| *e = 1.0);
        for &j in order.iter().take(m) {
            y[j] = (c * fmath::sqrt(p / -w2[j])).min(1.0);
        }
        let f = reduced_objective(p, w2, &y);
        if f > best_f {
            best_f = f;
            best.copy_from_slice(&y);
        }
    }
    best
}

struct PgaScratch {
    grad: Vec<f64>,
    cand: Vec<f64>,
}

impl PgaScratch {
    fn new(k: usize) -> Self {
        Self {
            grad: vec![0.0; k],
            cand: vec![0.0; k],
        }
    }

    /// Projected gradient ascent with Armijo backtracking. Mutates `y` in
    /// place and returns the final objective value.
    fn ascend(&mut self, p: f64, w2: &[f64], y: &mut [f64], tol: f64, max_iters: usize) -> f64 {
        let mut f0 = reduced_objective(p, w2, y);
        for _ in 0..max_iters {
            reduced_gradient(p, w2, y, &mut self.grad);
            // ∞-norm of the unit-step projected gradient.
            let mut pg = 0.0f64;
            for (&yj, &gj) in y.iter().zip(&self.grad) {
                let moved = (yj + gj).clamp(0.0, 1.0);
                pg = pg.max(fmath::abs(moved - yj));
            }
            if pg <= tol {
                break;
            }
            let mut step = 1.0;
            let mut accepted = false;
            for _ in 0..40 {
                let mut expected = 0.0;
                for ((cj, &yj), &gj) in self.cand.iter_mut().zip(y.iter()).zip(&self.grad) {
                    *cj = (yj + step * gj).clamp(0.0, 1.0);
                    expected += gj * (*cj - yj);
                }
                let f1 = reduced_objective(p, w2, &self.cand);
                if f1 >= f0 + 1e-4 * expected && f1 > f0 {
                    y.copy_from_slice(&self.cand);
                    f0 = f1;
                    accepted = true;
                    break;
                }
                step *= 0.5;
            }
            if !accepted {
                break;
            }
        }
        f0
    }
}

/// Uniform `f64` in `[0, 1)` from the top 53 bits of the generator.
fn unit_f64<R: RngCore>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}
