//! Bound checking: final regret against the theoretical ceiling
//! `2·sqrt(2T·ln 4K)`, plus the measured-regret chain values.

use std::fmt;

use olb_core::engine::{regret_bound, RegretTrace};

use crate::trace_io::TraceRow;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub k: usize,
    pub t: usize,
    pub final_regret: f64,
    pub bound: f64,
    /// `final_regret / bound`; 0 for an empty horizon.
    pub ratio: f64,
    pub pass: bool,
    /// Measured per-copy learner regrets, when the trace carries them.
    pub olo_regret_1: Option<f64>,
    pub olo_regret_2: Option<f64>,
    /// `regret <= olo_1 + olo_2 + T·tol`, when the learner regrets exist.
    pub chain_ok: Option<bool>,
    pub tol_budget: f64,
}

impl BoundReport {
    fn build(
        k: usize,
        t: usize,
        final_regret: f64,
        olo: Option<(f64, f64)>,
        tol: f64,
    ) -> Self {
        let bound = regret_bound(k, t);
        let ratio = if bound > 0.0 { final_regret / bound } else { 0.0 };
        let tol_budget = t as f64 * tol;
        let chain_ok = olo.map(|(r1, r2)| final_regret <= r1 + r2 + tol_budget);
        Self {
            k,
            t,
            final_regret,
            bound,
            ratio,
            pass: final_regret <= bound,
            olo_regret_1: olo.map(|o| o.0),
            olo_regret_2: olo.map(|o| o.1),
            chain_ok,
            tol_budget,
        }
    }
}

/// Report for an in-memory trace.
pub fn check_trace(trace: &RegretTrace, tol: f64) -> BoundReport {
    BoundReport::build(
        trace.k,
        trace.horizon(),
        trace.final_regret(),
        trace.final_olo_regrets(),
        tol,
    )
}

/// Report for a parsed trace CSV; `k` is not stored in the file and must be
/// supplied. Baseline traces carry zero diagnostic columns, so the chain
/// values are reported only when they are non-trivial.
pub fn check_rows(k: usize, rows: &[TraceRow], tol: f64) -> BoundReport {
    let t = rows.len();
    let final_regret = rows.last().map_or(0.0, |r| r.regret);
    let olo = rows.last().and_then(|r| {
        if r.olo_regret_1 == 0.0 && r.olo_regret_2 == 0.0 {
            None
        } else {
            Some((r.olo_regret_1, r.olo_regret_2))
        }
    });
    BoundReport::build(k, t, final_regret, olo, tol)
}

impl fmt::Display for BoundReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "K={} T={}: regret {:.6} vs bound {:.6} (ratio {:.4}) -> {}",
            self.k,
            self.t,
            self.final_regret,
            self.bound,
            self.ratio,
            if self.pass { "PASS" } else { "FAIL" }
        )?;
        match (self.olo_regret_1, self.olo_regret_2, self.chain_ok) {
            (Some(r1), Some(r2), Some(ok)) => write!(
                f,
                "chain: regret <= {r1:.6} + {r2:.6} + {:.2e} -> {}",
                self.tol_budget,
                if ok { "holds" } else { "VIOLATED" }
            ),
            _ => write!(f, "chain: no learner diagnostics in trace"),
        }
    }
}
