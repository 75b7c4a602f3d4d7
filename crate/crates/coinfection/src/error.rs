use std::io;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter `{name}` out of domain: {message}")]
    ParamDomain { name: String, message: String },

    #[error("threshold `{name}` is not defined in this parameter regime")]
    ThresholdAbsent { name: &'static str },

    #[error("susceptible nullcline has a pole at S = {s}")]
    NullclinePole { s: f64 },

    #[error("interior equilibria undefined here: {0}")]
    EquilibriaDomain(String),

    #[error("step size underflow at t = {t}: system too stiff for this method")]
    StepUnderflow { t: f64 },

    #[error("state component {index} reached {value} at t = {t}, beyond the negativity tolerance")]
    NegativeState { t: f64, index: usize, value: f64 },

    #[error("step budget exhausted at t = {t}")]
    StepBudget { t: f64 },

    #[error("invalid integration setup: {0}")]
    IntegrationSetup(String),

    #[error("{path}:{line}: {message}")]
    ConfigLine {
        path: String,
        line: usize,
        message: String,
    },

    #[error("{path}: {message}")]
    ConfigFile { path: String, message: String },

    #[error("coinfected count {v} exceeds total infected {i}; cannot split state")]
    CoinfectedExceedsInfected { v: f64, i: f64 },

    #[error("invalid sweep request: {0}")]
    SweepSpec(String),

    #[error(
        "aggregation check needs a hyperbolic stable attractor, found none for this parameter set"
    )]
    NoStableAttractor,

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
