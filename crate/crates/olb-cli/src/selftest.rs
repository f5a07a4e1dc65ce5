//! Built-in cross-validation of the analytic oracles against brute-force
//! grids, runnable in the field via `olb selftest`.

use olb_core::allocation::{compute_allocation, grid_allocation_oracle, DualWeight};
use olb_core::grid::for_each_simplex_point;
use olb_core::norms::cstar_inf;
use olb_core::support::socp::{build_socp_data, feasible_z, hyperbolic_rewrite_check};
use olb_core::support::{grid_support_oracle, SupportSolver};
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn unit(rng: &mut ChaCha8Rng) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

fn signed(rng: &mut ChaCha8Rng) -> f64 {
    2.0 * unit(rng) - 1.0
}

fn ball_block(rng: &mut ChaCha8Rng, k: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..k).map(|_| signed(rng)).collect();
    let l1: f64 = v.iter().map(|x| x.abs()).sum();
    if l1 > 1.0 {
        v.into_iter().map(|x| x / l1).collect()
    } else {
        v
    }
}

fn random_weight(rng: &mut ChaCha8Rng, k: usize) -> DualWeight {
    DualWeight::new(ball_block(rng, k), ball_block(rng, k)).unwrap()
}

fn allocation_vs_grid(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst_above: f64 = 0.0;
    let mut worst_below: f64 = 0.0;
    let mut pass = true;
    for trial in 0..50 {
        let k = if trial % 2 == 0 { 2 } else { 3 };
        let w = random_weight(&mut rng, k);
        let exact = compute_allocation(&w).unwrap().value;
        let grid = grid_allocation_oracle(&w, 1e-3).unwrap().value;
        worst_above = worst_above.max(exact - grid);
        worst_below = worst_below.max(grid - exact);
        pass &= exact <= grid + 1e-9 && exact >= grid - k as f64 * 1e-3;
    }
    CheckResult {
        name: "allocation oracle vs simplex grid",
        pass,
        detail: format!("max above {worst_above:.2e}, max below {worst_below:.2e}"),
    }
}

fn support_vs_grid(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let solver = SupportSolver::default();
    let mut worst: f64 = 0.0;
    let mut pass = true;
    for trial in 0..30 {
        let k = if trial % 2 == 0 { 2 } else { 3 };
        let w = random_weight(&mut rng, k);
        let solved = solver.solve(&w).unwrap();
        let grid = grid_support_oracle(&w, 1e-2).unwrap();
        let gap = (solved.h_value - grid.h_value).abs();
        worst = worst.max(gap);
        pass &= gap <= 2.0 * k as f64 * 1e-2 && solved.h_value >= grid.h_value - 1e-9;
    }
    CheckResult {
        name: "support oracle vs box grid",
        pass,
        detail: format!("max |h_solver - h_grid| = {worst:.2e}"),
    }
}

fn blackwell_gaps(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let solver = SupportSolver::default();
    let mut min_gap = f64::INFINITY;
    for trial in 0..100 {
        let k = if trial % 2 == 0 { 2 } else { 3 };
        let w = random_weight(&mut rng, k);
        let v = compute_allocation(&w).unwrap().value;
        let h = solver.solve(&w).unwrap().h_value;
        min_gap = min_gap.min(h - v);
    }
    CheckResult {
        name: "blackwell condition h_S(w) >= V(w)",
        pass: min_gap >= -1e-6,
        detail: format!("min gap {min_gap:.2e}"),
    }
}

fn cstar_vs_grid(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for trial in 0..30 {
        let k = if trial % 2 == 0 { 2 } else { 3 };
        let l: Vec<f64> = (0..k).map(|_| 0.05 + 0.95 * unit(&mut rng)).collect();
        let mut grid_min = f64::INFINITY;
        for_each_simplex_point(k, 1000, |alpha| {
            let m = alpha
                .iter()
                .zip(&l)
                .map(|(&a, &e)| a * e)
                .fold(0.0, f64::max);
            grid_min = grid_min.min(m);
        })
        .unwrap();
        worst = worst.max((cstar_inf(&l) - grid_min).abs());
    }
    CheckResult {
        name: "closed-form C* vs simplex grid",
        pass: worst <= 5e-3,
        detail: format!("max |closed - grid| = {worst:.2e}"),
    }
}

fn socp_round_trip(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    let mut checked = 0;
    for trial in 0..40 {
        let k = if trial % 2 == 0 { 2 } else { 3 };
        let w = random_weight(&mut rng, k);
        let grid = grid_support_oracle(&w, 1e-2).unwrap();
        if grid.point.y().iter().any(|&e| e <= 0.0) {
            continue;
        }
        let z = feasible_z(grid.point.x(), grid.point.y()).unwrap();
        let problem = build_socp_data(&w);
        let mut point = grid.point.x().to_vec();
        point.extend_from_slice(grid.point.y());
        point.extend_from_slice(&z);
        worst = worst.max(problem.max_violation(&point).unwrap());
        checked += 1;
    }
    CheckResult {
        name: "cone-program data round trip",
        pass: worst <= 1e-9 && checked > 0,
        detail: format!("max violation {worst:.2e} over {checked} points"),
    }
}

fn hyperbolic_equivalence(seed: u64) -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut agreements = 0usize;
    let n = 100_000;
    for _ in 0..n {
        let x = 2.0 * unit(&mut rng);
        let y = 2.0 * unit(&mut rng);
        let z = 2.0 * unit(&mut rng);
        if hyperbolic_rewrite_check(x, y, z) {
            agreements += 1;
        }
    }
    CheckResult {
        name: "hyperbolic/cone rewrite equivalence",
        pass: agreements == n,
        detail: format!("{agreements}/{n} triples agree"),
    }
}

/// Runs every suite; returns the individual results.
pub fn run_all(seed: u64) -> Vec<CheckResult> {
    vec![
        allocation_vs_grid(seed ^ 0x01),
        support_vs_grid(seed ^ 0x02),
        blackwell_gaps(seed ^ 0x03),
        cstar_vs_grid(seed ^ 0x04),
        socp_round_trip(seed ^ 0x05),
        hyperbolic_equivalence(seed ^ 0x06),
    ]
}
