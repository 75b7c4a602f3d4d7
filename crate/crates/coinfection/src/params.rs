//! Model parameters: the full three-compartment set, the reduced planar set
//! obtained by substituting the fast-process equilibrium, and the derived
//! threshold quantities used by the classifier.

use crate::error::{Error, Result};

/// Parameters of the complete S/U/V model.
///
/// S are susceptibles, U infected by the primary disease only, V coinfected.
/// The primary disease runs on the slow timescale (scaled by `epsilon`),
/// the opportunistic disease on the fast one (`lambda`, `delta`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FullParams {
    /// intrinsic fertility of susceptibles
    pub r: f64,
    /// natural mortality
    pub m: f64,
    /// fertility reduction factor while infected (primary only)
    pub a_u: f64,
    /// fertility reduction factor while coinfected
    pub a_v: f64,
    /// disease-induced mortality, primary only
    pub mu_u: f64,
    /// disease-induced mortality, coinfected
    pub mu_v: f64,
    /// primary transmission from U contacts
    pub beta_u: f64,
    /// primary transmission from V contacts
    pub beta_v: f64,
    /// recovery from the primary disease
    pub gamma: f64,
    /// opportunistic transmission (frequency dependent)
    pub lambda: f64,
    /// opportunistic clearance
    pub delta: f64,
    pub c_ss: f64,
    pub c_su: f64,
    pub c_sv: f64,
    pub c_us: f64,
    pub c_uu: f64,
    pub c_uv: f64,
    pub c_vs: f64,
    pub c_vu: f64,
    pub c_vv: f64,
    /// timescale separation, slow terms carry this factor
    pub epsilon: f64,
}

/// Field names in canonical order, matching the config file keys.
pub const PARAM_KEYS: [&str; 21] = [
    "r", "m", "a_U", "a_V", "mu_U", "mu_V", "beta_U", "beta_V", "gamma", "lambda", "delta", "c_SS",
    "c_SU", "c_SV", "c_US", "c_UU", "c_UV", "c_VS", "c_VU", "c_VV", "epsilon",
];

impl FullParams {
    pub fn get(&self, key: &str) -> Option<f64> {
        Some(match key {
            "r" => self.r,
            "m" => self.m,
            "a_U" => self.a_u,
            "a_V" => self.a_v,
            "mu_U" => self.mu_u,
            "mu_V" => self.mu_v,
            "beta_U" => self.beta_u,
            "beta_V" => self.beta_v,
            "gamma" => self.gamma,
            "lambda" => self.lambda,
            "delta" => self.delta,
            "c_SS" => self.c_ss,
            "c_SU" => self.c_su,
            "c_SV" => self.c_sv,
            "c_US" => self.c_us,
            "c_UU" => self.c_uu,
            "c_UV" => self.c_uv,
            "c_VS" => self.c_vs,
            "c_VU" => self.c_vu,
            "c_VV" => self.c_vv,
            "epsilon" => self.epsilon,
            _ => return None,
        })
    }

    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        let slot = match key {
            "r" => &mut self.r,
            "m" => &mut self.m,
            "a_U" => &mut self.a_u,
            "a_V" => &mut self.a_v,
            "mu_U" => &mut self.mu_u,
            "mu_V" => &mut self.mu_v,
            "beta_U" => &mut self.beta_u,
            "beta_V" => &mut self.beta_v,
            "gamma" => &mut self.gamma,
            "lambda" => &mut self.lambda,
            "delta" => &mut self.delta,
            "c_SS" => &mut self.c_ss,
            "c_SU" => &mut self.c_su,
            "c_SV" => &mut self.c_sv,
            "c_US" => &mut self.c_us,
            "c_UU" => &mut self.c_uu,
            "c_UV" => &mut self.c_uv,
            "c_VS" => &mut self.c_vs,
            "c_VU" => &mut self.c_vu,
            "c_VV" => &mut self.c_vv,
            "epsilon" => &mut self.epsilon,
            _ => {
                return Err(Error::ParamDomain {
                    name: key.to_string(),
                    message: "unknown parameter name".to_string(),
                })
            }
        };
        *slot = value;
        Ok(())
    }

    /// Checks the domain constraints; every constructor and consumer goes
    /// through this before trusting the values.
    pub fn validate(&self) -> Result<()> {
        let err = |name: &str, message: String| {
            Err(Error::ParamDomain {
                name: name.to_string(),
                message,
            })
        };
        for key in PARAM_KEYS {
            let v = self.get(key).unwrap();
            if !v.is_finite() {
                return err(key, format!("must be finite, got {v}"));
            }
        }
        for (key, v) in [
            ("r", self.r),
            ("m", self.m),
            ("mu_U", self.mu_u),
            ("mu_V", self.mu_v),
            ("beta_U", self.beta_u),
            ("beta_V", self.beta_v),
            ("gamma", self.gamma),
            ("delta", self.delta),
        ] {
            if v < 0.0 {
                return err(key, format!("rates must be nonnegative, got {v}"));
            }
        }
        for (key, v) in [
            ("c_SS", self.c_ss),
            ("c_SU", self.c_su),
            ("c_SV", self.c_sv),
            ("c_US", self.c_us),
            ("c_UU", self.c_uu),
            ("c_UV", self.c_uv),
            ("c_VS", self.c_vs),
            ("c_VU", self.c_vu),
            ("c_VV", self.c_vv),
        ] {
            if v <= 0.0 {
                return err(
                    key,
                    format!("competition coefficients must be positive, got {v}"),
                );
            }
        }
        if self.lambda <= 0.0 {
            return err("lambda", format!("must be positive, got {}", self.lambda));
        }
        if !(self.a_v > 0.0 && self.a_u > self.a_v && self.a_u < 1.0) {
            return err(
                "a_U",
                format!(
                    "fertility factors must satisfy 0 < a_V < a_U < 1, got a_U={}, a_V={}",
                    self.a_u, self.a_v
                ),
            );
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1.0) {
            return err(
                "epsilon",
                format!("must lie in (0, 1], got {}", self.epsilon),
            );
        }
        Ok(())
    }
}

/// Coefficients of the reduced planar S/I model, I = U + V lumped at the
/// fast-process equilibrium V = nu_star * I.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedParams {
    pub r: f64,
    pub m: f64,
    pub c_ss: f64,
    pub a_bar: f64,
    pub c_si: f64,
    pub c_is: f64,
    pub c_ii: f64,
    pub beta_bar: f64,
    pub gamma_bar: f64,
    pub mu_bar: f64,
    /// equilibrium coinfected fraction of the infected pool
    pub nu_star: f64,
}

impl ReducedParams {
    pub fn validate(&self) -> Result<()> {
        let err = |name: &str, message: String| {
            Err(Error::ParamDomain {
                name: name.to_string(),
                message,
            })
        };
        for (key, v) in [
            ("r", self.r),
            ("m", self.m),
            ("a_bar", self.a_bar),
            ("beta_bar", self.beta_bar),
            ("gamma_bar", self.gamma_bar),
            ("mu_bar", self.mu_bar),
        ] {
            if !v.is_finite() || v < 0.0 {
                return err(key, format!("must be finite and nonnegative, got {v}"));
            }
        }
        for (key, v) in [
            ("c_SS", self.c_ss),
            ("c_SI", self.c_si),
            ("c_IS", self.c_is),
            ("c_II", self.c_ii),
        ] {
            if !(v > 0.0) {
                return err(
                    key,
                    format!("competition coefficients must be positive, got {v}"),
                );
            }
        }
        if !(0.0..1.0).contains(&self.nu_star) {
            return err(
                "nu_star",
                format!("must lie in [0, 1), got {}", self.nu_star),
            );
        }
        Ok(())
    }

    /// Combined infected loss rate. Appears in the infected nullcline and in
    /// every threshold that gates invasion.
    pub fn loss(&self) -> f64 {
        self.m + self.gamma_bar + self.mu_bar
    }

    /// Infected recruitment pressure at the disease-free state.
    pub fn recruitment(&self) -> f64 {
        self.a_bar * self.r + self.gamma_bar
    }
}

/// Fraction of infected hosts carrying the opportunistic disease once the
/// fast process equilibrates: 0 when clearance beats transmission, else
/// 1 - delta/lambda.
pub fn compute_nu_star(lambda: f64, delta: f64) -> Result<f64> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(Error::ParamDomain {
            name: "lambda".to_string(),
            message: format!("must be positive and finite, got {lambda}"),
        });
    }
    if !(delta >= 0.0) || !delta.is_finite() {
        return Err(Error::ParamDomain {
            name: "delta".to_string(),
            message: format!("must be nonnegative and finite, got {delta}"),
        });
    }
    if delta >= lambda {
        Ok(0.0)
    } else {
        Ok(1.0 - delta / lambda)
    }
}

/// Collapses the full model onto the slow manifold. Every mixed coefficient
/// becomes the nu_star-weighted average of its U and V counterparts; the
/// infected competition term is the full quadratic mix.
pub fn reduce(p: &FullParams) -> Result<ReducedParams> {
    p.validate()?;
    let nu = compute_nu_star(p.lambda, p.delta)?;
    let w = 1.0 - nu;
    Ok(ReducedParams {
        r: p.r,
        m: p.m,
        c_ss: p.c_ss,
        a_bar: w * p.a_u + nu * p.a_v,
        c_si: w * p.c_su + nu * p.c_sv,
        c_is: w * p.c_us + nu * p.c_vs,
        c_ii: w * w * p.c_uu + w * nu * p.c_uv + nu * w * p.c_vu + nu * nu * p.c_vv,
        beta_bar: w * p.beta_u + nu * p.beta_v,
        gamma_bar: w * p.gamma,
        mu_bar: w * p.mu_u + nu * p.mu_v,
        nu_star: nu,
    })
}

/// Threshold quantities controlling the phase portrait of the reduced model.
///
/// Absent values mean the quantity is undefined in this regime, never zero
/// or a sentinel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Thresholds {
    /// disease-free carrying capacity (r - m)/c_SS, defined for r > m
    pub s1_star: Option<f64>,
    /// susceptible level the infected nullcline crosses zero at, defined for
    /// positive invasion margin
    pub a_bar_thr: Option<f64>,
    /// susceptible level where infected recruitment balances crowding
    pub b_bar_thr: f64,
    /// discriminant ratio of the interior-equilibrium quadratic; above 1 the
    /// quadratic has two real roots
    pub r_script: Option<f64>,
    /// beta_bar - c_IS, sign gates whether infection can invade at all
    pub invasion_margin: f64,
}

impl Thresholds {
    /// The three susceptible-axis thresholds, required together by the
    /// rescaled vector field and the nullclines.
    pub fn require_all(&self) -> Result<(f64, f64, f64)> {
        let s1 = self.s1_star.ok_or(Error::ThresholdAbsent { name: "S1" })?;
        let a = self
            .a_bar_thr
            .ok_or(Error::ThresholdAbsent { name: "Abar" })?;
        Ok((s1, a, self.b_bar_thr))
    }
}

pub fn compute_thresholds(rp: &ReducedParams) -> Result<Thresholds> {
    rp.validate()?;
    let margin = rp.beta_bar - rp.c_is;
    let s1_star = if rp.r > rp.m {
        Some((rp.r - rp.m) / rp.c_ss)
    } else {
        None
    };
    let a_bar_thr = if margin > 0.0 {
        Some(rp.loss() / margin)
    } else {
        None
    };
    let b_bar_thr = rp.recruitment() / (rp.c_si + rp.beta_bar);
    let r_script = match (s1_star, a_bar_thr) {
        (Some(_), Some(_)) => {
            let n = rp.recruitment();
            let d = rp.loss();
            if n > 0.0 && d > 0.0 {
                let q = rp.c_si + rp.beta_bar;
                let a = rp.c_ss * rp.c_ii + q * margin;
                let b = rp.c_ii * (rp.r - rp.m) + margin * n + q * d;
                Some(b / (2.0 * (a * n * d).sqrt()))
            } else {
                None
            }
        }
        _ => None,
    };
    Ok(Thresholds {
        s1_star,
        a_bar_thr,
        b_bar_thr,
        r_script,
        invasion_margin: margin,
    })
}
