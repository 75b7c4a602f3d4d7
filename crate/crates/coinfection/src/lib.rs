//! Numerical toolkit for a two-timescale SIS coinfection model.
//!
//! A primary disease spreads slowly through a crowded host population while
//! an opportunistic infection spreads fast among the already-infected. The
//! crate reduces the three-compartment system to a planar one by
//! equilibrating the fast process, classifies the reduced phase portrait,
//! sweeps parameter planes, and validates the reduction against the full
//! dynamics.

// validation guards are written `!(x > 0.0)` on purpose: NaN must fail them
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod config;
pub mod dynamics;
pub mod equilibria;
pub mod error;
pub mod integrate;
pub mod params;
pub mod presets;
pub mod render;
pub mod sweep;

pub use dynamics::{State2, State3};
pub use equilibria::{classify, Equilibrium, EquilibriumKind, Scenario, ScenarioLabel, Stability};
pub use error::{Error, Result};
pub use integrate::{integrate, Options, Sampling, StopReason, Trajectory};
pub use params::{
    compute_nu_star, compute_thresholds, reduce, FullParams, ReducedParams, Thresholds,
};
pub use sweep::{run_sweep, run_sweep_serial, RegionGrid, SweepSpec};
