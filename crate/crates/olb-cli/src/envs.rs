//! The load environments. All randomness flows through seeded ChaCha8
//! streams so traces reproduce bit-for-bit across platforms; OS entropy is
//! never consulted.

use olb_core::engine::Environment;
use olb_core::norms::{Allocation, LoadVector};
use rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::EnvSpec;

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Every `l_{t,i}` independent uniform on `[0, 1]`.
pub struct IidUniform {
    k: usize,
    rng: ChaCha8Rng,
}

impl IidUniform {
    pub fn new(k: usize, seed: u64) -> Self {
        Self {
            k,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Environment for IidUniform {
    fn load(&mut self, _t: usize, _alpha: &Allocation) -> LoadVector {
        let entries = (0..self.k).map(|_| unit(&mut self.rng)).collect();
        LoadVector::new(entries).expect("uniform draws are in range")
    }
}

/// Independent per-server coins: `l_{t,i} = 1` with probability `rates[i]`.
pub struct Bernoulli {
    rates: Vec<f64>,
    rng: ChaCha8Rng,
}

impl Bernoulli {
    pub fn new(rates: Vec<f64>, seed: u64) -> Self {
        Self {
            rates,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl Environment for Bernoulli {
    fn load(&mut self, _t: usize, _alpha: &Allocation) -> LoadVector {
        let entries = self
            .rates
            .iter()
            .map(|&r| if unit(&mut self.rng) < r { 1.0 } else { 0.0 })
            .collect();
        LoadVector::new(entries).expect("coin flips are in range")
    }
}

/// The classic hard instance: full load on one server, rotating every
/// `period` rounds, zero elsewhere.
pub struct RotatingSpike {
    k: usize,
    period: usize,
}

impl RotatingSpike {
    pub fn new(k: usize, period: usize) -> Self {
        assert!(period >= 1);
        Self { k, period }
    }
}

impl Environment for RotatingSpike {
    fn load(&mut self, t: usize, _alpha: &Allocation) -> LoadVector {
        let hot = ((t - 1) / self.period) % self.k;
        let mut entries = vec![0.0; self.k];
        entries[hot] = 1.0;
        LoadVector::new(entries).expect("basis vector is in range")
    }
}

/// Adaptive adversary: full load on the server the player weighted most
/// (ties go to the lowest index).
pub struct AdaptiveTargeted {
    k: usize,
}

impl AdaptiveTargeted {
    pub fn new(k: usize) -> Self {
        Self { k }
    }
}

impl Environment for AdaptiveTargeted {
    fn load(&mut self, _t: usize, alpha: &Allocation) -> LoadVector {
        let mut hot = 0;
        let mut best = alpha[0];
        for (i, &a) in alpha.iter().enumerate().skip(1) {
            if a > best {
                best = a;
                hot = i;
            }
        }
        let mut entries = vec![0.0; self.k];
        entries[hot] = 1.0;
        LoadVector::new(entries).expect("basis vector is in range")
    }
}

/// Instantiates the environment described by `spec`.
pub fn build_env(spec: &EnvSpec, k: usize, seed: u64) -> Box<dyn Environment> {
    match spec {
        EnvSpec::IidUniform => Box::new(IidUniform::new(k, seed)),
        EnvSpec::Bernoulli { rates } => Box::new(Bernoulli::new(rates.clone(), seed)),
        EnvSpec::RotatingSpike { period } => Box::new(RotatingSpike::new(k, *period)),
        EnvSpec::AdaptiveTargeted => Box::new(AdaptiveTargeted::new(k)),
    }
}
