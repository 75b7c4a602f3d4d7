//! Right-hand sides of the model in its four guises: the complete
//! three-compartment system, the isolated fast subsystem, the reduced planar
//! system, and the rescaled form of the latter that exposes the thresholds.

use crate::error::{Error, Result};
use crate::params::{FullParams, ReducedParams, Thresholds};

/// State of the reduced model: susceptibles and the lumped infected pool.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State2 {
    pub s: f64,
    pub i: f64,
}

/// State of the complete model: susceptibles, singly infected, coinfected.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct State3 {
    pub s: f64,
    pub u: f64,
    pub v: f64,
}

impl From<State2> for [f64; 2] {
    fn from(x: State2) -> Self {
        [x.s, x.i]
    }
}

impl From<[f64; 2]> for State2 {
    fn from(y: [f64; 2]) -> Self {
        State2 { s: y[0], i: y[1] }
    }
}

impl From<State3> for [f64; 3] {
    fn from(x: State3) -> Self {
        [x.s, x.u, x.v]
    }
}

impl From<[f64; 3]> for State3 {
    fn from(y: [f64; 3]) -> Self {
        State3 {
            s: y[0],
            u: y[1],
            v: y[2],
        }
    }
}

/// Frequency-dependent transfer between the infected classes. The convention
/// 0/0 = 0 keeps the field defined when the infected pool is empty.
fn fast_flux(lambda: f64, u: f64, v: f64) -> f64 {
    let total = u + v;
    if total == 0.0 {
        0.0
    } else {
        lambda * u * v / total
    }
}

/// Fast subsystem alone: the opportunistic disease shuffling hosts between
/// the two infected classes at fixed pool size.
pub fn rhs_fast(lambda: f64, delta: f64, u: f64, v: f64) -> (f64, f64) {
    let gain = fast_flux(lambda, u, v) - delta * v;
    // exchange only: dU = -dV holds bit for bit
    (-gain, gain)
}

/// Complete model in fast time. Slow processes (demography, primary disease)
/// carry the factor epsilon.
pub fn rhs_complete(p: &FullParams, x: State3) -> State3 {
    let State3 { s, u, v } = x;
    let eps = p.epsilon;
    let fast = fast_flux(p.lambda, u, v) - p.delta * v;
    let infection = p.beta_u * s * u + p.beta_v * s * v;
    let ds = eps
        * (p.r * s + p.a_u * p.r * u + p.a_v * p.r * v
            - p.m * s
            - (p.c_ss * s + p.c_su * u + p.c_sv * v) * s
            - infection
            + p.gamma * u);
    let du = -fast
        + eps
            * (-p.m * u - (p.c_us * s + p.c_uu * u + p.c_uv * v) * u + infection
                - p.gamma * u
                - p.mu_u * u);
    let dv = fast + eps * (-p.m * v - (p.c_vs * s + p.c_vu * u + p.c_vv * v) * v - p.mu_v * v);
    State3 {
        s: ds,
        u: du,
        v: dv,
    }
}

/// Reduced planar model in slow time.
pub fn rhs_reduced(rp: &ReducedParams, x: State2) -> State2 {
    let State2 { s, i } = x;
    let ds = rp.r * s + rp.a_bar * rp.r * i
        - rp.m * s
        - (rp.c_ss * s + rp.c_si * i) * s
        - rp.beta_bar * s * i
        + rp.gamma_bar * i;
    let di = -rp.m * i - (rp.c_is * s + rp.c_ii * i) * i + rp.beta_bar * s * i
        - rp.gamma_bar * i
        - rp.mu_bar * i;
    State2 { s: ds, i: di }
}

/// Reduced model written against its thresholds: logistic relaxation toward
/// the disease-free capacity plus threshold-gated infection pressure.
/// Algebraically identical to `rhs_reduced`; useful as a cross-check and for
/// reading the phase portrait off the coefficients.
pub fn rhs_rescaled(rp: &ReducedParams, th: &Thresholds, x: State2) -> Result<State2> {
    let (s1, a_thr, b_thr) = th.require_all()?;
    let State2 { s, i } = x;
    let q = rp.c_si + rp.beta_bar;
    let p_margin = th.invasion_margin;
    let ds = rp.c_ss * s * (s1 - s) + q * (b_thr - s) * i;
    let di = p_margin * (s - a_thr) * i - rp.c_ii * i * i;
    Ok(State2 { s: ds, i: di })
}

/// Splits a lumped infected count into singly infected and coinfected parts
/// at the fast-process equilibrium.
pub fn split_infected(i: f64, nu_star: f64) -> State3 {
    State3 {
        s: 0.0,
        u: (1.0 - nu_star) * i,
        v: nu_star * i,
    }
}

/// Maps a reduced-model state onto the slow manifold of the complete model.
pub fn lift_state(x: State2, nu_star: f64) -> State3 {
    let parts = split_infected(x.i, nu_star);
    State3 {
        s: x.s,
        u: parts.u,
        v: parts.v,
    }
}

/// Lumps a complete-model state into the reduced coordinates, checking that
/// the split is physically meaningful.
pub fn lump_state(x: State3) -> Result<State2> {
    let i = x.u + x.v;
    if x.v > i {
        return Err(Error::CoinfectedExceedsInfected { v: x.v, i });
    }
    Ok(State2 { s: x.s, i })
}
