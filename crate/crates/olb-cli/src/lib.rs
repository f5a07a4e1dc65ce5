//! Experiment harness for the online load balancing simulator: seedable
//! environments, baseline players, trace file formats, bound reports, and
//! the `olb` command-line interface.

pub mod config;
pub mod envs;
pub mod players;
pub mod report;
pub mod selftest;
pub mod trace_io;
