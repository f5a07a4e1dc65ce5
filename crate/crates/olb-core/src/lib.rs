//! Online load balancing as a repeated vector-payoff game.
//!
//! A player distributes a task over `K` servers each round; the environment
//! then reveals per-server load conditions in `[0,1]`. After `T` rounds the
//! player is judged by a norm of its cumulative loss vector (the makespan,
//! for the sup-norm) relative to the best fixed allocation in hindsight.
//!
//! The solver implemented here drives that game through Blackwell
//! approachability: converging to the target set
//! `S = {(x, y) : ||x|| <= C*(y)}` is equivalent to vanishing regret, and a
//! Blackwell game is in turn driven by online linear optimization over the
//! dual-norm ball. Concretely, each round
//!
//! 1. two [`olo`] learners (EG± over the L1 ball) emit a direction
//!    `w = (w1, w2)`,
//! 2. the [`allocation`] oracle plays the min-max allocation for `w`,
//! 3. the [`support`] oracle finds the support point `argmax_{s in S} <s, w>`,
//! 4. the learners are charged the linearized loss `-r(α, l) + s`.
//!
//! The [`engine`] module wires these into the full loop and records a
//! per-round transcript with regret, the theoretical bound, and diagnostic
//! quantities (Blackwell gaps, per-learner regrets).
//!
//! The crate is `no_std` (with `alloc`); all transcendentals go through
//! `libm` so results are bit-reproducible across platforms. IO, file
//! formats, and the experiment harness live in the companion CLI crate.
//!
//! ```
//! use olb_core::engine::{run_game, Engine, ScriptedEnvironment};
//! use olb_core::norms::LoadVector;
//!
//! let horizon = 100;
//! let mut engine = Engine::new(2, horizon, None, 1e-6, 7).unwrap();
//! let mut env = ScriptedEnvironment::new(vec![
//!     LoadVector::new(vec![1.0, 0.0]).unwrap(),
//!     LoadVector::new(vec![0.0, 1.0]).unwrap(),
//! ]).unwrap();
//! let trace = run_game(2, horizon, &mut engine, &mut env).unwrap();
//! assert!(trace.final_regret() <= trace.final_bound());
//! ```

#![cfg_attr(not(test), no_std)]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod allocation;
pub mod engine;
mod error;
mod fmath;
pub mod grid;
pub mod norms;
pub mod olo;
pub mod support;

pub use error::{Error, Result};
