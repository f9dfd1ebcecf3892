//! Covert-link SINR and effective covert rate.
//!
//! The destination decodes the source message first, cancels it, then
//! decodes the covert message against the amplified relay noise. Rates are
//! in bits per channel use. The effective rate averages over `h_rd_sq`,
//! counting zero whenever condition C fails.

mod expint;

pub use expint::{exp_integral, exp_integral_e1, scaled_exp_integral_neg};

use std::f64::consts::LN_2;

use crate::error::Result;
use crate::scenario::{
    covert_threshold, ChannelDraw, DerivedConstants, Link, SchemeConfig, SystemParams,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateReport {
    /// Covert SINR; constant under rate-control, channel-dependent otherwise.
    pub gamma_delta: Option<f64>,
    /// Covert rate while active, rate-control only.
    pub r_delta: Option<f64>,
    pub p_c: f64,
    pub r_c: f64,
}

/// SINR of the covert message at the destination for an active draw.
pub fn covert_sinr(
    scheme: &SchemeConfig,
    params: &SystemParams,
    consts: &DerivedConstants,
    draw: &ChannelDraw,
) -> f64 {
    let DerivedConstants { mu, eta, .. } = *consts;
    let sd = params.sigma_d_sq;
    let gain = eta * draw.h_sr_sq;
    match *scheme {
        SchemeConfig::RateControl { q } => q / (mu * (q + sd) / (gain + 1.0) + sd),
        SchemeConfig::PowerControl { p_delta } => {
            if p_delta == 0.0 {
                return 0.0;
            }
            let h = draw.h_rd_sq;
            p_delta * (gain + 1.0) * h / (mu * p_delta * h + (gain + mu + 1.0) * sd)
        }
    }
}

/// Coefficients of `ln((b1 + a1 x) / (b2 + a2 x))`, the power-control rate
/// integrand after shifting `h_rd_sq` by the covert threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerControlCoefficients {
    pub beta1: f64,
    pub beta2: f64,
    pub alpha1: f64,
    pub alpha2: f64,
}

impl PowerControlCoefficients {
    pub fn new(link: &Link, p_delta: f64) -> Self {
        let DerivedConstants { mu, eta, .. } = link.consts;
        let p = &link.params;
        let k = eta * link.h_sr_sq + mu + 1.0;
        let headroom = p.p_r_max - (mu + 1.0) * p_delta;
        Self {
            beta1: k * (p.p_r_max - p_delta) * p.sigma_d_sq,
            beta2: (k * headroom + mu * mu * p_delta) * p.sigma_d_sq,
            alpha1: p_delta * k * headroom,
            alpha2: mu * p_delta * headroom,
        }
    }

    /// `ln((b1 + a1 x) / (b2 + a2 x))`.
    pub fn integrand_log(&self, x: f64) -> f64 {
        (self.beta1 + self.alpha1 * x).ln() - (self.beta2 + self.alpha2 * x).ln()
    }
}

/// Closed-form effective covert rate for either scheme.
pub fn effective_rate(link: &Link, scheme: &SchemeConfig) -> Result<RateReport> {
    scheme.validate()?;
    let probs = link.probs(scheme)?;
    let p_c = probs.p_c;
    match *scheme {
        SchemeConfig::RateControl { .. } => {
            let gamma = covert_sinr(scheme, &link.params, &link.consts, &link.draw(f64::NAN));
            let r_delta = gamma.ln_1p() / LN_2;
            Ok(RateReport {
                gamma_delta: Some(gamma),
                r_delta: Some(r_delta),
                p_c,
                r_c: r_delta * p_c,
            })
        }
        SchemeConfig::PowerControl { p_delta } => {
            let r_c = if p_delta == 0.0 {
                0.0
            } else {
                let c = PowerControlCoefficients::new(link, p_delta);
                let s1 = scaled_exp_integral_neg(c.beta1 / c.alpha1)?;
                let s2 = if c.alpha2 > 0.0 {
                    scaled_exp_integral_neg(c.beta2 / c.alpha2)?
                } else {
                    0.0
                };
                (p_c / LN_2 * ((c.beta1 / c.beta2).ln() + s2 - s1)).max(0.0)
            };
            Ok(RateReport {
                gamma_delta: None,
                r_delta: None,
                p_c,
                r_c,
            })
        }
    }
}

/// Per-draw covert rate: `log2(1 + SINR)` when C holds, zero otherwise.
pub fn instantaneous_rate(link: &Link, scheme: &SchemeConfig, h_rd_sq: f64) -> Result<f64> {
    let threshold = covert_threshold(scheme, &link.params, link.consts.mu)?;
    if h_rd_sq >= threshold && h_rd_sq > 0.0 {
        Ok(covert_sinr(scheme, &link.params, &link.consts, &link.draw(h_rd_sq)).ln_1p() / LN_2)
    } else {
        Ok(0.0)
    }
}
