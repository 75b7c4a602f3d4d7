//! Adaptive explicit Runge-Kutta integrator with dense output.
//!
//! Dormand-Prince 5(4) with the first-same-as-last optimization, a
//! proportional step controller on a scaled RMS error norm, and a quartic
//! interpolant for sampling between steps. Extras the model needs: optional
//! clamping of tiny negative components (populations cannot go negative) and
//! early termination once the vector field is numerically quiescent.

use std::fmt::Write as _;

use crate::error::{Error, Result};

// node fractions
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

// stage coefficients
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;

// fifth-order weights; the seventh stage reuses them, so an accepted step's
// last evaluation doubles as the next step's first
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;

// difference between the fifth- and fourth-order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

// dense-output weights
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

/// How many consecutive quiescent steps count as having reached equilibrium.
/// Accepted steps can grow tenfold each, so a long window would demand
/// horizons many orders beyond the equilibration time.
const STEADY_WINDOW: usize = 3;

#[derive(Debug, Clone, PartialEq)]
pub struct Options {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
    /// clamp slightly negative components to zero; components more negative
    /// than the tolerance floor abort the run instead
    pub clamp_negative: bool,
    /// stop early when the scaled field norm stays below this factor for
    /// `STEADY_WINDOW` accepted steps; `None` always integrates to the horizon.
    /// Near an attractor an explicit method hovers at its stability boundary
    /// with field residuals of order rtol, so this must stay well above rtol
    /// to ever fire; tighten both together for sharper equilibria.
    pub steady_tol: Option<f64>,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            rtol: 1e-8,
            atol: 1e-10,
            max_steps: 1_000_000,
            clamp_negative: true,
            steady_tol: Some(1e-6),
        }
    }
}

/// Where the recorded states come from.
#[derive(Debug, Clone, PartialEq)]
pub enum Sampling {
    /// every accepted step
    Steps,
    /// this many equal intervals across the horizon, endpoints included
    Uniform(usize),
    /// explicit times, strictly increasing, inside the horizon
    Times(Vec<f64>),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopReason {
    Horizon,
    /// the field went quiescent at this time, before the horizon
    Steady {
        t: f64,
    },
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Stats {
    pub accepted: usize,
    pub rejected: usize,
    pub rhs_evals: usize,
}

#[derive(Debug, Clone)]
pub struct Trajectory<const N: usize> {
    pub times: Vec<f64>,
    pub states: Vec<[f64; N]>,
    pub stats: Stats,
    pub stop: StopReason,
}

impl<const N: usize> Trajectory<N> {
    pub fn last(&self) -> (f64, [f64; N]) {
        (*self.times.last().unwrap(), *self.states.last().unwrap())
    }

    /// CSV with a time column followed by one column per component, full
    /// precision.
    pub fn to_csv(&self, names: &[&str; N]) -> String {
        let mut out = String::from("t");
        for name in names {
            out.push(',');
            out.push_str(name);
        }
        out.push('\n');
        for (t, y) in self.times.iter().zip(&self.states) {
            write!(out, "{t:.16e}").unwrap();
            for v in y {
                write!(out, ",{v:.16e}").unwrap();
            }
            out.push('\n');
        }
        out
    }
}

fn rms_scaled<const N: usize>(e: &[f64; N], sc: &[f64; N]) -> f64 {
    let mut s = 0.0;
    for i in 0..N {
        let q = e[i] / sc[i];
        s += q * q;
    }
    (s / N as f64).sqrt()
}

fn inf_norm<const N: usize>(y: &[f64; N]) -> f64 {
    y.iter().fold(0.0f64, |acc, v| acc.max(v.abs()))
}

/// Starting step size from the local derivative magnitudes.
fn initial_step<const N: usize>(
    f: &impl Fn(f64, &[f64; N]) -> [f64; N],
    t0: f64,
    y0: &[f64; N],
    f0: &[f64; N],
    t_end: f64,
    opts: &Options,
    stats: &mut Stats,
) -> f64 {
    let span = t_end - t0;
    let mut sc = [0.0; N];
    for i in 0..N {
        sc[i] = opts.atol + opts.rtol * y0[i].abs();
    }
    let d0 = rms_scaled(y0, &sc);
    let d1 = rms_scaled(f0, &sc);
    let h0 = if d0 < 1e-5 || d1 < 1e-5 || !d0.is_finite() || !d1.is_finite() {
        1e-6
    } else {
        0.01 * d0 / d1
    };
    let h0 = h0.min(span);
    let mut y1 = [0.0; N];
    for i in 0..N {
        y1[i] = y0[i] + h0 * f0[i];
    }
    let f1 = f(t0 + h0, &y1);
    stats.rhs_evals += 1;
    let mut diff = [0.0; N];
    for i in 0..N {
        diff[i] = f1[i] - f0[i];
    }
    let d2 = rms_scaled(&diff, &sc) / h0;
    let dm = d1.max(d2);
    let h1 = if dm <= 1e-15 || !dm.is_finite() {
        (h0 * 1e-3).max(1e-6)
    } else {
        (0.01 / dm).powf(0.2)
    };
    (100.0 * h0).min(h1).min(span)
}

/// Integrates dy/dt = f(t, y) from `t0` to `t_end`, recording states
/// according to `sampling`. The trajectory always starts with the initial
/// state and, on early termination, ends with the state where the run
/// stopped.
pub fn integrate<const N: usize>(
    f: impl Fn(f64, &[f64; N]) -> [f64; N],
    t0: f64,
    y0: [f64; N],
    t_end: f64,
    sampling: Sampling,
    opts: &Options,
) -> Result<Trajectory<N>> {
    if !(t_end > t0) || !t0.is_finite() || !t_end.is_finite() {
        return Err(Error::IntegrationSetup(format!(
            "need a finite forward horizon, got t0 = {t0}, t_end = {t_end}"
        )));
    }
    if !(opts.rtol > 0.0) || !(opts.atol > 0.0) {
        return Err(Error::IntegrationSetup(format!(
            "tolerances must be positive, got rtol = {}, atol = {}",
            opts.rtol, opts.atol
        )));
    }
    if y0.iter().any(|v| !v.is_finite()) {
        return Err(Error::IntegrationSetup(format!(
            "initial state must be finite, got {y0:?}"
        )));
    }
    // sample times to emit via dense output, exhausted front to back
    let mut pending: Vec<f64> = match &sampling {
        Sampling::Steps => Vec::new(),
        Sampling::Uniform(n) => {
            if *n == 0 {
                return Err(Error::IntegrationSetup(
                    "uniform sampling needs at least one interval".to_string(),
                ));
            }
            (1..=*n)
                .map(|k| t0 + (t_end - t0) * k as f64 / *n as f64)
                .collect()
        }
        Sampling::Times(ts) => {
            if ts.windows(2).any(|w| !(w[0] < w[1])) {
                return Err(Error::IntegrationSetup(
                    "sample times must be strictly increasing".to_string(),
                ));
            }
            if ts.iter().any(|t| *t < t0 || *t > t_end) {
                return Err(Error::IntegrationSetup(format!(
                    "sample times must lie within [{t0}, {t_end}]"
                )));
            }
            ts.iter().copied().filter(|t| *t > t0).collect()
        }
    };
    pending.reverse(); // pop() from the front

    let mut stats = Stats::default();
    let mut times = vec![t0];
    let mut states = vec![y0];

    let mut t = t0;
    let mut y = y0;
    let mut k1 = f(t, &y);
    stats.rhs_evals += 1;
    let mut h = initial_step(&f, t0, &y0, &k1, t_end, opts, &mut stats);
    let mut just_rejected = false;
    let mut steady_run = 0usize;

    loop {
        if stats.accepted + stats.rejected >= opts.max_steps {
            return Err(Error::StepBudget { t });
        }
        if h < 4.0 * f64::EPSILON * t.abs().max(1.0) {
            return Err(Error::StepUnderflow { t });
        }
        let mut last = false;
        if t + h >= t_end {
            h = t_end - t;
            last = true;
        }

        // the six fresh stages; k1 carries over from the previous step
        let mut yt = [0.0; N];
        for i in 0..N {
            yt[i] = y[i] + h * A21 * k1[i];
        }
        let k2 = f(t + C2 * h, &yt);
        for i in 0..N {
            yt[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        let k3 = f(t + C3 * h, &yt);
        for i in 0..N {
            yt[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        let k4 = f(t + C4 * h, &yt);
        for i in 0..N {
            yt[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        let k5 = f(t + C5 * h, &yt);
        for i in 0..N {
            yt[i] =
                y[i] + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        let k6 = f(t + h, &yt);
        let mut y_new = [0.0; N];
        for i in 0..N {
            y_new[i] = y[i] + h * (B1 * k1[i] + B3 * k3[i] + B4 * k4[i] + B5 * k5[i] + B6 * k6[i]);
        }
        let t_new = if last { t_end } else { t + h };
        let mut k7 = f(t_new, &y_new);
        stats.rhs_evals += 6;

        let mut sc = [0.0; N];
        let mut err_vec = [0.0; N];
        for i in 0..N {
            sc[i] = opts.atol + opts.rtol * y[i].abs().max(y_new[i].abs());
            err_vec[i] =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }
        let err = rms_scaled(&err_vec, &sc);

        if !err.is_finite() {
            // the step blew through the floating-point range; retreat hard
            stats.rejected += 1;
            h *= 0.1;
            just_rejected = true;
            continue;
        }
        if err > 1.0 {
            stats.rejected += 1;
            let factor = (0.9 * err.powf(-0.2)).clamp(0.1, 1.0);
            h *= factor;
            just_rejected = true;
            continue;
        }

        // accepted
        stats.accepted += 1;
        let mut clamped = false;
        if opts.clamp_negative {
            let floor = 1e3 * (opts.atol + opts.rtol * (1.0 + inf_norm(&y_new)));
            for (i, y) in y_new.iter_mut().enumerate() {
                if *y < 0.0 {
                    if *y >= -floor {
                        *y = 0.0;
                        clamped = true;
                    } else {
                        return Err(Error::NegativeState {
                            t: t_new,
                            index: i,
                            value: *y,
                        });
                    }
                }
            }
        }
        if clamped {
            k7 = f(t_new, &y_new);
            stats.rhs_evals += 1;
        }

        // dense output for any sample times inside this step
        if !pending.is_empty() {
            let mut rcont = [[0.0; N]; 5];
            for i in 0..N {
                let delta = y_new[i] - y[i];
                rcont[0][i] = y[i];
                rcont[1][i] = delta;
                rcont[2][i] = h * k1[i] - delta;
                rcont[3][i] = delta - h * k7[i] - rcont[2][i];
                rcont[4][i] = h
                    * (D1 * k1[i] + D3 * k3[i] + D4 * k4[i] + D5 * k5[i] + D6 * k6[i] + D7 * k7[i]);
            }
            while let Some(&ts) = pending.last() {
                if ts > t_new && !last {
                    break;
                }
                pending.pop();
                let theta = ((ts - t) / h).clamp(0.0, 1.0);
                let th1 = 1.0 - theta;
                let mut u = [0.0; N];
                for i in 0..N {
                    u[i] = rcont[0][i]
                        + theta
                            * (rcont[1][i]
                                + th1 * (rcont[2][i] + theta * (rcont[3][i] + th1 * rcont[4][i])));
                }
                times.push(ts);
                states.push(u);
            }
        }
        if matches!(sampling, Sampling::Steps) {
            times.push(t_new);
            states.push(y_new);
        }

        t = t_new;
        y = y_new;
        k1 = k7;

        if let Some(tol) = opts.steady_tol {
            if inf_norm(&k1) < tol * (1.0 + inf_norm(&y)) {
                steady_run += 1;
            } else {
                steady_run = 0;
            }
            if steady_run >= STEADY_WINDOW {
                if *times.last().unwrap() < t {
                    times.push(t);
                    states.push(y);
                }
                return Ok(Trajectory {
                    times,
                    states,
                    stats,
                    stop: StopReason::Steady { t },
                });
            }
        }

        if last {
            if *times.last().unwrap() < t_end {
                times.push(t_end);
                states.push(y);
            }
            return Ok(Trajectory {
                times,
                states,
                stats,
                stop: StopReason::Horizon,
            });
        }

        let mut factor = (0.9 * err.max(1e-10).powf(-0.2)).clamp(0.2, 10.0);
        if just_rejected {
            factor = factor.min(1.0);
        }
        just_rejected = false;
        h *= factor;
    }
}
