//! The game loop: a Blackwell approaching game driven by online linear
//! optimization, specialized to the sup-norm load balancing game.
//!
//! Each round the engine
//!
//! 1. concatenates the two learners' predictions into `w_t = (w_{t,1}, w_{t,2})`,
//! 2. plays the min-max allocation `α_t` for `w_t` (the Blackwell witness),
//! 3. observes the load `l_t` (the environment may react to `α_t`),
//! 4. queries the support oracle for `s_t = argmax_{s in S} <s, w_t>`,
//! 5. forms the costs `g_{t,1} = -α_t ⊙ l_t + s_{t,1}`, `g_{t,2} = -l_t + s_{t,2}`,
//! 6. feeds them back to the learners.
//!
//! The same sequence works for any vector-payoff game whose Blackwell
//! condition has a witness oracle; [`reduction_round`] implements that
//! generic step and the engine instantiates it. Per-round diagnostics
//! (Blackwell gaps `h_S(w_t) - V(w_t)`, measured per-learner regrets)
//! ride along in the transcript.

use alloc::vec;
use alloc::vec::Vec;

use serde::Serialize;

use crate::allocation::{compute_allocation, AllocationResult, DualWeight};
use crate::fmath;
use crate::norms::{cstar_inf, dot, linf_norm, Allocation, LoadVector};
use crate::olo::{default_eta, CostVector, EgLearner, OloLearner};
use crate::support::{SupportResult, SupportSolver, TargetPoint};
use crate::{Error, Result};

/// Blackwell gaps below this are treated as oracle failures.
pub const BLACKWELL_GAP_TOL: f64 = 1e-6;

/// A load source. Implementations may inspect the allocation before
/// answering (adaptive adversaries); oblivious ones ignore it.
pub trait Environment {
    fn load(&mut self, t: usize, alpha: &Allocation) -> LoadVector;
}

/// Replays a fixed list of load vectors, cycling when it runs out.
#[derive(Debug, Clone)]
pub struct ScriptedEnvironment {
    loads: Vec<LoadVector>,
}

impl ScriptedEnvironment {
    pub fn new(loads: Vec<LoadVector>) -> Result<Self> {
        if loads.is_empty() {
            return Err(Error::EmptyVector);
        }
        Ok(Self { loads })
    }
}

impl Environment for ScriptedEnvironment {
    fn load(&mut self, t: usize, _alpha: &Allocation) -> LoadVector {
        self.loads[(t - 1) % self.loads.len()].clone()
    }
}

/// One finished round from a player's perspective.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PlayedRound {
    pub alpha: Allocation,
    pub load: LoadVector,
    /// Reduction diagnostics; `None` for baseline players.
    pub detail: Option<ReductionDetail>,
}

/// Anything that can play the repeated game. The player must call
/// `env.load` exactly once per round, after committing to its allocation.
pub trait Player {
    fn play(&mut self, t: usize, env: &mut dyn Environment) -> Result<PlayedRound>;
}

/// Reduction-side diagnostics for one round.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionDetail {
    pub w: DualWeight,
    pub support: TargetPoint,
    pub h_value: f64,
    /// `V(w_t)`: the min-max value attained by the allocation oracle.
    pub game_value: f64,
    /// `h_S(w_t) - V(w_t)`; non-negative when both oracles are sound.
    pub blackwell_gap: f64,
    pub g1: CostVector,
    pub g2: CostVector,
    /// Measured regret of learner copy 1 over rounds `1..=t`, with the
    /// comparator evaluated exactly at the signed basis vertices.
    pub olo_regret_1: f64,
    pub olo_regret_2: f64,
}

/// Validates the per-round Blackwell condition and returns the gap.
pub fn blackwell_check(detail: &ReductionDetail) -> Result<f64> {
    let gap = detail.blackwell_gap;
    debug_assert!(gap >= -BLACKWELL_GAP_TOL, "blackwell gap {gap}");
    if gap < -BLACKWELL_GAP_TOL {
        return Err(Error::InvalidValue {
            what: "blackwell gap",
            value: gap,
        });
    }
    Ok(gap)
}

/// The theoretical regret ceiling for the sup-norm game after `t` rounds:
/// `2·sqrt(2t·ln(4K))`.
pub fn regret_bound(k: usize, t: usize) -> f64 {
    2.0 * fmath::sqrt(2.0 * t as f64 * fmath::ln(4.0 * k as f64))
}

/// Everything the generic reduction produces in one round.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReductionStep {
    /// The learner's decision `w_t` (already played).
    pub w: Vec<f64>,
    /// Realized payoff `r(a_t, b_t)`.
    pub payoff: Vec<f64>,
    /// Support point `s*(w_t)` certifying `h_S(w_t)`.
    pub support: Vec<f64>,
    pub h_value: f64,
    /// The linearized cost `-r_t + s*(w_t)` fed to the learner.
    pub cost: Vec<f64>,
}

impl ReductionStep {
    /// The round's loss `f_t(w) = <-r_t, w> + h_S(w)` at a probe `w`;
    /// the caller supplies `h_S(w)` for that probe.
    pub fn loss_at(&self, w: &[f64], h_at_w: f64) -> f64 {
        -dot(&self.payoff, w) + h_at_w
    }

    /// `f_t(w_t)` at the played decision, using the recorded support value.
    pub fn loss_at_played(&self) -> f64 {
        self.loss_at(&self.w, self.h_value)
    }
}

/// One round of the generic game-to-OLO reduction.
///
/// `witness` must return an action `a` with `<w, r(a, b)> <= h_S(w)` for
/// every environment response `b` (the Blackwell condition witness);
/// `support` must return a maximizing point of the target set and its
/// objective value. The learner is charged `-r_t + s*(w_t)`, a subgradient
/// of `f_t` at `w_t`.
pub fn reduction_round<A, B, L, WF, EF, PF, SF>(
    learner: &mut L,
    witness: WF,
    environment: EF,
    payoff: PF,
    support: SF,
) -> Result<(A, B, ReductionStep)>
where
    L: OloLearner + ?Sized,
    WF: FnOnce(&[f64]) -> Result<A>,
    EF: FnOnce(&A) -> B,
    PF: FnOnce(&A, &B) -> Vec<f64>,
    SF: FnOnce(&[f64]) -> Result<(Vec<f64>, f64)>,
{
    let w = learner.predict();
    let action = witness(&w)?;
    let outcome = environment(&action);
    let r = payoff(&action, &outcome);
    let (s, h_value) = support(&w)?;
    if s.len() != r.len() {
        return Err(Error::DimensionMismatch {
            expected: r.len(),
            got: s.len(),
        });
    }
    let cost: Vec<f64> = r.iter().zip(&s).map(|(&ri, &si)| -ri + si).collect();
    learner.update(&CostVector::new(cost.clone())?)?;
    Ok((
        action,
        outcome,
        ReductionStep {
            w,
            payoff: r,
            support: s,
            h_value,
            cost,
        },
    ))
}

/// Two independent learner copies presented as one learner on the doubled
/// space: predictions concatenate, costs split.
pub struct PairLearner<'a, L1: OloLearner, L2: OloLearner> {
    pub first: &'a mut L1,
    pub second: &'a mut L2,
}

impl<L1: OloLearner, L2: OloLearner> OloLearner for PairLearner<'_, L1, L2> {
    fn dim(&self) -> usize {
        self.first.dim() + self.second.dim()
    }

    fn predict(&self) -> Vec<f64> {
        let mut w = self.first.predict();
        w.extend(self.second.predict());
        w
    }

    fn update(&mut self, cost: &CostVector) -> Result<()> {
        let k = self.first.dim();
        if cost.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: cost.dim(),
            });
        }
        self.first.update(&CostVector::new(cost[..k].to_vec())?)?;
        self.second.update(&CostVector::new(cost[k..].to_vec())?)?;
        Ok(())
    }
}

/// The full sup-norm player: two EG± copies, the water-filling allocation
/// oracle, and the support solver.
pub struct Engine {
    k: usize,
    eta: f64,
    learner1: EgLearner,
    learner2: EgLearner,
    solver: SupportSolver,
    seed: u64,
    next_round: usize,
    // Running OLO accounting: Σ<g, w> and Σg per copy.
    dot_sum_1: f64,
    dot_sum_2: f64,
    cum_g1: Vec<f64>,
    cum_g2: Vec<f64>,
}

impl Engine {
    /// `eta_override` replaces the horizon-tuned default learning rate for
    /// both copies; `tol` is the support-oracle tolerance; `seed` drives
    /// the per-round restart points of the support solver.
    pub fn new(
        k: usize,
        horizon: usize,
        eta_override: Option<f64>,
        tol: f64,
        seed: u64,
    ) -> Result<Self> {
        let eta = match eta_override {
            Some(e) => e,
            None => default_eta(k, horizon, 1.0)?,
        };
        Ok(Self {
            k,
            eta,
            learner1: EgLearner::new(k, eta)?,
            learner2: EgLearner::new(k, eta)?,
            solver: SupportSolver::with_tol(tol),
            seed,
            next_round: 1,
            dot_sum_1: 0.0,
            dot_sum_2: 0.0,
            cum_g1: vec![0.0; k],
            cum_g2: vec![0.0; k],
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    /// Plays one round against `env` and returns the full record.
    pub fn run_round(&mut self, t: usize, env: &mut dyn Environment) -> Result<PlayedRound> {
        debug_assert_eq!(t, self.next_round, "rounds must be played in order");
        let k = self.k;
        let support_seed = round_seed(self.seed, t as u64);
        let solver = &self.solver;

        let mut pair = PairLearner {
            first: &mut self.learner1,
            second: &mut self.learner2,
        };
        let step = reduction_round(
            &mut pair,
            |w: &[f64]| -> Result<AllocationResult> {
                let dw = DualWeight::new(w[..k].to_vec(), w[k..].to_vec())?;
                if !dw.in_dual_ball() {
                    return Err(Error::InvalidValue {
                        what: "learner prediction outside dual ball",
                        value: f64::NAN,
                    });
                }
                compute_allocation(&dw)
            },
            |a: &AllocationResult| env.load(t, &a.alpha),
            |a: &AllocationResult, l: &LoadVector| {
                let mut r: Vec<f64> = a.alpha.iter().zip(l.iter()).map(|(&ai, &li)| ai * li).collect();
                r.extend(l.iter());
                r
            },
            |w: &[f64]| -> Result<(Vec<f64>, f64)> {
                let dw = DualWeight::new(w[..k].to_vec(), w[k..].to_vec())?;
                let SupportResult { point, h_value } = solver.solve_seeded(&dw, support_seed)?;
                let mut s = point.x().to_vec();
                s.extend_from_slice(point.y());
                Ok((s, h_value))
            },
        )
        .map_err(|e| Error::OracleFailure {
            round: t,
            source: alloc::boxed::Box::new(e),
        })?;
        let (alloc_result, load, step) = step;

        // Per-copy OLO accounting with the exact vertex comparator.
        let (w1, w2) = step.w.split_at(k);
        let (g1, g2) = step.cost.split_at(k);
        self.dot_sum_1 += dot(g1, w1);
        self.dot_sum_2 += dot(g2, w2);
        for (c, &g) in self.cum_g1.iter_mut().zip(g1) {
            *c += g;
        }
        for (c, &g) in self.cum_g2.iter_mut().zip(g2) {
            *c += g;
        }
        let olo_regret_1 = self.dot_sum_1 + linf_norm(&self.cum_g1)?;
        let olo_regret_2 = self.dot_sum_2 + linf_norm(&self.cum_g2)?;

        let (sx, sy) = step.support.split_at(k);
        let detail = ReductionDetail {
            w: DualWeight::new(w1.to_vec(), w2.to_vec())?,
            support: TargetPoint::new(sx.to_vec(), sy.to_vec())?,
            h_value: step.h_value,
            game_value: alloc_result.value,
            blackwell_gap: step.h_value - alloc_result.value,
            g1: CostVector::new(g1.to_vec())?,
            g2: CostVector::new(g2.to_vec())?,
            olo_regret_1,
            olo_regret_2,
        };
        blackwell_check(&detail).map_err(|e| Error::OracleFailure {
            round: t,
            source: alloc::boxed::Box::new(e),
        })?;

        self.next_round += 1;
        Ok(PlayedRound {
            alpha: alloc_result.alpha,
            load,
            detail: Some(detail),
        })
    }
}

impl Player for Engine {
    fn play(&mut self, t: usize, env: &mut dyn Environment) -> Result<PlayedRound> {
        self.run_round(t, env)
    }
}

/// One row of the game transcript.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RoundRecord {
    /// 1-based round index.
    pub t: usize,
    pub alpha: Allocation,
    pub load: LoadVector,
    pub cum_player_load: Vec<f64>,
    pub cum_load: Vec<f64>,
    /// `||cum_player_load||_∞`.
    pub makespan: f64,
    /// `C*(cum_load)` of the unnormalized cumulative load.
    pub cstar_cum: f64,
    pub regret: f64,
    pub bound: f64,
    pub detail: Option<ReductionDetail>,
}

/// The full transcript of one game.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegretTrace {
    pub k: usize,
    pub rounds: Vec<RoundRecord>,
}

impl RegretTrace {
    pub fn horizon(&self) -> usize {
        self.rounds.len()
    }

    /// Regret after `t` rounds (`t = 0` gives 0).
    pub fn regret_at(&self, t: usize) -> f64 {
        if t == 0 {
            0.0
        } else {
            self.rounds[t - 1].regret
        }
    }

    pub fn final_regret(&self) -> f64 {
        self.regret_at(self.horizon())
    }

    pub fn final_bound(&self) -> f64 {
        regret_bound(self.k, self.horizon())
    }

    /// Final measured per-copy OLO regrets, when the player exposed them.
    pub fn final_olo_regrets(&self) -> Option<(f64, f64)> {
        self.rounds
            .last()
            .and_then(|r| r.detail.as_ref())
            .map(|d| (d.olo_regret_1, d.olo_regret_2))
    }

    /// Upper proxy for the combined-norm distance of the average payoff to
    /// the target set: `max(0, (R_olo,1 + R_olo,2 - Σ_t f_t(w_t)) / T)`.
    /// Multiplied by `T` it upper-bounds the regret when the oracles are
    /// exact.
    pub fn distance_proxy(&self) -> Option<f64> {
        let (r1, r2) = self.final_olo_regrets()?;
        let mut loss_sum = 0.0;
        for rec in &self.rounds {
            let d = rec.detail.as_ref()?;
            let mut payoff_dot_w = 0.0;
            for i in 0..self.k {
                payoff_dot_w += rec.alpha[i] * rec.load[i] * d.w.w1()[i];
                payoff_dot_w += rec.load[i] * d.w.w2()[i];
            }
            loss_sum += d.h_value - payoff_dot_w;
        }
        let t = self.horizon() as f64;
        Some(((r1 + r2 - loss_sum) / t).max(0.0))
    }

    /// Most negative Blackwell gap seen (0 when every gap was clean).
    pub fn worst_blackwell_gap(&self) -> f64 {
        self.rounds
            .iter()
            .filter_map(|r| r.detail.as_ref())
            .fold(0.0, |m, d| m.min(d.blackwell_gap))
    }
}

/// Drives a player against an environment for `horizon` rounds and
/// assembles the transcript.
pub fn run_game(
    k: usize,
    horizon: usize,
    player: &mut dyn Player,
    env: &mut dyn Environment,
) -> Result<RegretTrace> {
    if k == 0 {
        return Err(Error::EmptyVector);
    }
    if horizon == 0 {
        return Err(Error::InvalidValue {
            what: "horizon",
            value: 0.0,
        });
    }
    let mut rounds = Vec::with_capacity(horizon);
    let mut cum_p = vec![0.0; k];
    let mut cum_l = vec![0.0; k];
    for t in 1..=horizon {
        let played = player.play(t, env)?;
        if played.alpha.dim() != k || played.load.dim() != k {
            return Err(Error::OracleFailure {
                round: t,
                source: alloc::boxed::Box::new(Error::DimensionMismatch {
                    expected: k,
                    got: played.alpha.dim().max(played.load.dim()),
                }),
            });
        }
        for i in 0..k {
            cum_p[i] += played.alpha[i] * played.load[i];
            cum_l[i] += played.load[i];
        }
        let makespan = linf_norm(&cum_p)?;
        let cstar_cum = cstar_inf(&cum_l);
        rounds.push(RoundRecord {
            t,
            alpha: played.alpha,
            load: played.load,
            cum_player_load: cum_p.clone(),
            cum_load: cum_l.clone(),
            makespan,
            cstar_cum,
            regret: makespan - cstar_cum,
            bound: regret_bound(k, t),
            detail: played.detail,
        });
    }
    Ok(RegretTrace { k, rounds })
}

/// SplitMix64-style finalizer deriving the engine's per-round support
/// solver seed from the game seed and the 1-based round index.
pub fn round_seed(seed: u64, t: u64) -> u64 {
    let mut z = seed.wrapping_add(t.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
