//! Online linear optimization over the K-dimensional L1 ball.
//!
//! The workhorse is EG± (exponentiated gradient with positive and negative
//! weight copies): follow-the-regularized-leader with an entropic
//! regularizer, solved in closed form by a multiplicative update. Against
//! costs bounded by `M` in the sup-norm it guarantees regret at most
//! `M·sqrt(2T·ln(2d))` when tuned by [`default_eta`].
//!
//! Weights live in log domain with a log-sum-exp normalizer: a plain
//! multiplicative implementation underflows to hard zeros after enough
//! one-sided updates and freezes coordinates permanently.
//!
//! A mirror-descent style learner for L_p geometries ships as an
//! experimental extra; it carries no regret guarantee here.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::Deref;

use serde::Serialize;

use crate::fmath;
use crate::{Error, Result};

/// Slack accepted on the `||g||_∞ <= 1` cost bound.
pub const COST_BOUND_TOL: f64 = 1e-9;

/// A cost vector for one learner copy: entries in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct CostVector(Vec<f64>);

impl CostVector {
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyVector);
        }
        for (i, &e) in entries.iter().enumerate() {
            if !e.is_finite() || fmath::abs(e) > 1.0 + COST_BOUND_TOL {
                return Err(Error::CostOutOfRange { index: i, value: e });
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
}

impl Deref for CostVector {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

/// A full-information online linear learner over the L1 unit ball.
pub trait OloLearner {
    fn dim(&self) -> usize;

    /// The decision for the current round; `||prediction||_1 <= 1`.
    fn predict(&self) -> Vec<f64>;

    /// Charges the round's linear cost and advances the state.
    fn update(&mut self, cost: &CostVector) -> Result<()>;
}

/// Horizon-tuned learning rate `(1/M)·sqrt(2·ln(2d)/T)`.
pub fn default_eta(dim: usize, horizon: usize, cost_bound: f64) -> Result<f64> {
    if dim == 0 || horizon == 0 {
        return Err(Error::InvalidValue {
            what: "eta arguments",
            value: 0.0,
        });
    }
    if cost_bound <= 0.0 || cost_bound.is_nan() {
        return Err(Error::InvalidValue {
            what: "cost bound",
            value: cost_bound,
        });
    }
    Ok((1.0 / cost_bound) * fmath::sqrt(2.0 * fmath::ln(2.0 * dim as f64) / horizon as f64))
}

/// The guarantee EG± carries at the default rate: `M·sqrt(2T·ln(2d))`.
pub fn eg_regret_bound(dim: usize, horizon: usize, cost_bound: f64) -> f64 {
    cost_bound * fmath::sqrt(2.0 * horizon as f64 * fmath::ln(2.0 * dim as f64))
}

/// EG± state: jointly normalized positive and negative weight copies,
/// stored as logarithms.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EgLearner {
    eta: f64,
    log_plus: Vec<f64>,
    log_minus: Vec<f64>,
}

impl EgLearner {
    /// Both copies start uniform at `1/(2·dim)` so the joint mass is one
    /// and the first prediction is the zero vector.
    pub fn new(dim: usize, eta: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyVector);
        }
        if eta <= 0.0 || !eta.is_finite() {
            return Err(Error::InvalidValue {
                what: "learning rate",
                value: eta,
            });
        }
        let init = -fmath::ln(2.0 * dim as f64);
        Ok(Self {
            eta,
            log_plus: vec![init; dim],
            log_minus: vec![init; dim],
        })
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn weights_plus(&self) -> Vec<f64> {
        self.log_plus.iter().map(|&l| fmath::exp(l)).collect()
    }

    pub fn weights_minus(&self) -> Vec<f64> {
        self.log_minus.iter().map(|&l| fmath::exp(l)).collect()
    }
}

impl OloLearner for EgLearner {
    fn dim(&self) -> usize {
        self.log_plus.len()
    }

    fn predict(&self) -> Vec<f64> {
        self.log_plus
            .iter()
            .zip(&self.log_minus)
            .map(|(&lp, &lm)| fmath::exp(lp) - fmath::exp(lm))
            .collect()
    }

    fn update(&mut self, cost: &CostVector) -> Result<()> {
        if cost.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: cost.dim(),
            });
        }
        for (lp, &g) in self.log_plus.iter_mut().zip(cost.as_slice()) {
            *lp -= self.eta * g;
        }
        for (lm, &g) in self.log_minus.iter_mut().zip(cost.as_slice()) {
            *lm += self.eta * g;
        }
        // Joint log-sum-exp renormalization.
        let max = self
            .log_plus
            .iter()
            .chain(&self.log_minus)
            .fold(f64::NEG_INFINITY, |m, &l| m.max(l));
        let sum: f64 = self
            .log_plus
            .iter()
            .chain(&self.log_minus)
            .map(|&l| fmath::exp(l - max))
            .sum();
        let log_z = max + fmath::ln(sum);
        for l in self.log_plus.iter_mut().chain(&mut self.log_minus) {
            *l -= log_z;
        }
        Ok(())
    }
}

/// Experimental mirror update for L_p geometries (`p >= 2`; the intended
/// range is `p > 2`, and `p = 2` degenerates to plain gradient scaling).
///
/// The state is the negated cumulative cost `θ_t = -Σ_{s<=t} g_s`; the
/// prediction is the link-function image
/// `w_i = η·sgn(θ_i)·|θ_i|^{p-1} / ||θ||_p^{p-2}`, which is not guaranteed
/// to stay inside the dual-ball decision set. [`predict`](OloLearner)
/// returns the raw image; [`predict_clipped`](Self::predict_clipped) scales
/// it back into the L_q unit ball and counts how often that fires.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PnormLearner {
    p: f64,
    eta: f64,
    theta: Vec<f64>,
    clip_events: u64,
}

impl PnormLearner {
    pub fn new(dim: usize, p: f64, eta: f64) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyVector);
        }
        if p < 2.0 || !p.is_finite() {
            return Err(Error::InvalidValue {
                what: "mirror exponent p",
                value: p,
            });
        }
        if eta <= 0.0 || !eta.is_finite() {
            return Err(Error::InvalidValue {
                what: "learning rate",
                value: eta,
            });
        }
        Ok(Self {
            p,
            eta,
            theta: vec![0.0; dim],
            clip_events: 0,
        })
    }

    pub fn theta(&self) -> &[f64] {
        &self.theta
    }

    /// How many predictions so far fell outside the dual ball.
    pub fn clip_events(&self) -> u64 {
        self.clip_events
    }

    /// Raw prediction scaled into the L_q unit ball when needed
    /// (`q = p/(p-1)`); increments the clip counter when it fires.
    pub fn predict_clipped(&mut self) -> Vec<f64> {
        let mut w = self.predict();
        let q = self.p / (self.p - 1.0);
        if let Ok(n) = crate::norms::lp_norm(&w, q) {
            if n > 1.0 {
                self.clip_events += 1;
                for e in &mut w {
                    *e /= n;
                }
            }
        }
        w
    }
}

impl OloLearner for PnormLearner {
    fn dim(&self) -> usize {
        self.theta.len()
    }

    fn predict(&self) -> Vec<f64> {
        let norm = crate::norms::lp_norm(&self.theta, self.p).unwrap_or(0.0);
        if norm == 0.0 {
            return vec![0.0; self.dim()];
        }
        // w_i = η·sgn(θ_i)·(|θ_i|/||θ||)^{p-1}·||θ||, overflow-safe.
        self.theta
            .iter()
            .map(|&t| {
                let mag = fmath::powf(fmath::abs(t) / norm, self.p - 1.0) * norm;
                self.eta * if t < 0.0 { -mag } else { mag }
            })
            .collect()
    }

    fn update(&mut self, cost: &CostVector) -> Result<()> {
        if cost.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: cost.dim(),
            });
        }
        for (t, &g) in self.theta.iter_mut().zip(cost.as_slice()) {
            *t -= g;
        }
        Ok(())
    }
}
