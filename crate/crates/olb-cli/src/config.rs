//! Run configuration: one JSON-serializable struct shared by the config
//! file and the CLI flags (flags override file values).

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

/// Load process generating `l_t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnvSpec {
    /// Each entry independent uniform on `[0, 1]`.
    IidUniform,
    /// Each entry an independent coin with its own rate.
    Bernoulli { rates: Vec<f64> },
    /// Full load on one server, rotating every `period` rounds.
    RotatingSpike { period: usize },
    /// Full load on the player's currently heaviest server.
    AdaptiveTargeted,
}

/// Which player sits on the other side of the environment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlayerSpec {
    /// The reduction engine (the real algorithm).
    Algorithm1,
    /// Uniform allocation every round.
    StaticUniform,
    /// Follow-the-leader on the hindsight optimum of past loads.
    HindsightFollower,
}

fn default_tol() -> f64 {
    1e-6
}

fn default_out() -> PathBuf {
    PathBuf::from("trace.csv")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GameConfig {
    pub k: usize,
    pub t: usize,
    pub seed: u64,
    pub env: EnvSpec,
    pub player: PlayerSpec,
    #[serde(default)]
    pub eta_override: Option<f64>,
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_out")]
    pub out_path: PathBuf,
}

impl GameConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            bail!("k must be at least 2 (got {})", self.k);
        }
        if self.t < 1 {
            bail!("t must be at least 1");
        }
        if !(self.tol > 0.0 && self.tol <= 1e-3) {
            bail!("tol must lie in (0, 1e-3] (got {})", self.tol);
        }
        if let Some(eta) = self.eta_override {
            if eta <= 0.0 || !eta.is_finite() {
                bail!("eta override must be positive and finite (got {eta})");
            }
        }
        match &self.env {
            EnvSpec::Bernoulli { rates } => {
                if rates.len() != self.k {
                    bail!(
                        "bernoulli rates must have k = {} entries (got {})",
                        self.k,
                        rates.len()
                    );
                }
                for &r in rates {
                    if !(0.0..=1.0).contains(&r) {
                        bail!("bernoulli rate {r} outside [0, 1]");
                    }
                }
            }
            EnvSpec::RotatingSpike { period } => {
                if *period < 1 {
                    bail!("rotating spike period must be at least 1");
                }
            }
            EnvSpec::IidUniform | EnvSpec::AdaptiveTargeted => {}
        }
        Ok(())
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let cfg: GameConfig = serde_json::from_str(&text)
            .with_context(|| format!("parsing config {}", path.display()))?;
        Ok(cfg)
    }
}
