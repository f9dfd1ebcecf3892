//! Scenario quantities for the source → relay → destination link.
//!
//! Everything in here is linear (powers relative to unit noise, squared
//! channel magnitudes). Decibels only appear at the file/CLI boundary, see
//! [`db_to_linear`].
//!
//! The relay runs in amplify-and-forward mode with a rate target `r_sd` for
//! the source message. It spends exactly the power needed to hit that rate,
//! which is `mu * sigma_d_sq / h_rd_sq`, and it only forwards when that fits
//! under `p_r_max` (condition B). When it also hides its own message it
//! needs extra headroom (condition C); the warden-facing priors follow from
//! the probabilities of those two events under unit-mean Rayleigh fading.

use crate::error::{CovertError, Result};

pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

pub fn linear_to_db(linear: f64) -> f64 {
    10.0 * linear.log10()
}

/// Static scenario quantities, all linear.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    /// Source transmit power.
    pub p_s: f64,
    /// Relay maximum total transmit power.
    pub p_r_max: f64,
    pub sigma_r_sq: f64,
    pub sigma_d_sq: f64,
    /// Noise variance at the source, which acts as the warden.
    pub sigma_s_sq: f64,
    /// Source → destination rate in bits per channel use.
    pub r_sd: f64,
    /// Covertness slack in `[0, 1]`.
    pub epsilon: f64,
}

impl SystemParams {
    /// `P_s = P_r^max = 10 dB`, unit noise everywhere, `R_sd = 1`, `epsilon = 0.1`.
    pub fn baseline() -> Self {
        Self {
            p_s: 10.0,
            p_r_max: 10.0,
            sigma_r_sq: 1.0,
            sigma_d_sq: 1.0,
            sigma_s_sq: 1.0,
            r_sd: 1.0,
            epsilon: 0.1,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("p_s", self.p_s),
            ("p_r_max", self.p_r_max),
            ("sigma_r_sq", self.sigma_r_sq),
            ("sigma_d_sq", self.sigma_d_sq),
            ("sigma_s_sq", self.sigma_s_sq),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(CovertError::InvalidParameter {
                    name,
                    value,
                    reason: "must be finite and strictly positive",
                });
            }
        }
        if !(self.r_sd >= 0.0 && self.r_sd.is_finite()) {
            return Err(CovertError::InvalidParameter {
                name: "r_sd",
                value: self.r_sd,
                reason: "must be finite and non-negative",
            });
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(CovertError::InvalidParameter {
                name: "epsilon",
                value: self.epsilon,
                reason: "must lie in [0, 1]",
            });
        }
        Ok(())
    }

    /// `2^(2 R_sd) - 1`, the SNR the two-hop link must deliver.
    pub fn required_snr(&self) -> f64 {
        (2.0 * self.r_sd * std::f64::consts::LN_2).exp_m1()
    }
}

/// One realization of the squared channel gains.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelDraw {
    pub h_sr_sq: f64,
    pub h_rd_sq: f64,
    pub h_rs_sq: f64,
}

impl ChannelDraw {
    /// Draw with `h_rs = h_sr` (channel reciprocity).
    pub fn reciprocal(h_sr_sq: f64, h_rd_sq: f64) -> Self {
        Self {
            h_sr_sq,
            h_rd_sq,
            h_rs_sq: h_sr_sq,
        }
    }
}

/// How the relay sizes its covert signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SchemeConfig {
    /// Received covert power `Q = P_delta * h_rd_sq` is held fixed, so the
    /// covert rate is constant whenever the relay transmits.
    RateControl { q: f64 },
    /// Covert transmit power `P_delta` is held fixed.
    PowerControl { p_delta: f64 },
}

impl SchemeConfig {
    pub fn name(&self) -> &'static str {
        match self {
            Self::RateControl { .. } => "rate",
            Self::PowerControl { .. } => "power",
        }
    }

    /// `q` or `p_delta`, whichever the scheme carries.
    pub fn covert_parameter(&self) -> f64 {
        match *self {
            Self::RateControl { q } => q,
            Self::PowerControl { p_delta } => p_delta,
        }
    }

    pub fn with_covert_parameter(&self, value: f64) -> Self {
        match self {
            Self::RateControl { .. } => Self::RateControl { q: value },
            Self::PowerControl { .. } => Self::PowerControl { p_delta: value },
        }
    }

    /// Zero is accepted as the degenerate no-covert-signal case.
    pub fn validate(&self) -> Result<()> {
        let (name, value) = match *self {
            Self::RateControl { q } => ("q", q),
            Self::PowerControl { p_delta } => ("p_delta", p_delta),
        };
        if value >= 0.0 && value.is_finite() {
            Ok(())
        } else {
            Err(CovertError::InvalidParameter {
                name,
                value,
                reason: "must be finite and non-negative",
            })
        }
    }
}

/// `mu`, `phi` and `eta` for a fixed source-relay gain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedConstants {
    /// Relay forwarding power is `mu * sigma_d_sq / h_rd_sq`.
    pub mu: f64,
    /// Fraction of the relay's forwarded power that is amplified relay noise.
    pub phi: f64,
    /// `P_s / sigma_r_sq`.
    pub eta: f64,
}

impl DerivedConstants {
    pub fn new(params: &SystemParams, h_sr_sq: f64) -> Result<Self> {
        Ok(Self {
            mu: compute_mu(params, h_sr_sq)?,
            phi: params.sigma_r_sq / (params.p_s * h_sr_sq + params.sigma_r_sq),
            eta: params.p_s / params.sigma_r_sq,
        })
    }
}

/// Required-SNR factor for forwarding at exactly `r_sd`.
///
/// Fails with [`CovertError::InfeasibleRate`] when the first hop alone
/// cannot carry `r_sd`; callers then treat the source transmission as
/// failed.
pub fn compute_mu(params: &SystemParams, h_sr_sq: f64) -> Result<f64> {
    params.validate()?;
    if !(h_sr_sq >= 0.0 && h_sr_sq.is_finite()) {
        return Err(CovertError::InvalidParameter {
            name: "h_sr_sq",
            value: h_sr_sq,
            reason: "must be finite and non-negative",
        });
    }
    let snr = params.required_snr();
    let received = params.p_s * h_sr_sq;
    let denominator = received - params.sigma_r_sq * snr;
    if denominator <= 0.0 {
        return Err(CovertError::InfeasibleRate {
            r_sd: params.r_sd,
            denominator,
        });
    }
    Ok((received + params.sigma_r_sq) * snr / denominator)
}

/// Smallest `h_rd_sq` for which the relay can forward at all (condition B).
pub fn forwarding_threshold(params: &SystemParams, mu: f64) -> f64 {
    mu * params.sigma_d_sq / params.p_r_max
}

/// Relay forwarding power without a covert message.
pub fn relay_forward_power(params: &SystemParams, mu: f64, h_rd_sq: f64) -> f64 {
    if h_rd_sq >= forwarding_threshold(params, mu) && h_rd_sq > 0.0 {
        mu * params.sigma_d_sq / h_rd_sq
    } else {
        0.0
    }
}

fn check_power_budget(params: &SystemParams, mu: f64, p_delta: f64) -> Result<()> {
    let required = (mu + 1.0) * p_delta;
    if required >= params.p_r_max {
        Err(CovertError::PowerBudgetExceeded {
            required,
            p_r_max: params.p_r_max,
        })
    } else {
        Ok(())
    }
}

/// Smallest `h_rd_sq` at which the relay can add its covert signal without
/// exceeding `p_r_max` (condition C).
pub fn covert_threshold(scheme: &SchemeConfig, params: &SystemParams, mu: f64) -> Result<f64> {
    let sd = params.sigma_d_sq;
    match *scheme {
        SchemeConfig::RateControl { q } => Ok((mu * sd + mu * q + q) / params.p_r_max),
        SchemeConfig::PowerControl { p_delta } => {
            check_power_budget(params, mu, p_delta)?;
            Ok(mu * sd / (params.p_r_max - (mu + 1.0) * p_delta))
        }
    }
}

/// Relay powers while the covert message is on the air.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelayPowers {
    /// Power spent forwarding the source message.
    pub p_r1: f64,
    /// Power actually spent on the covert message (zero when inactive).
    pub p_delta: f64,
    pub covert_active: bool,
}

impl RelayPowers {
    pub fn total(&self) -> f64 {
        self.p_r1 + self.p_delta
    }
}

/// Covert-mode powers with no check on the power budget. This is the relay
/// behaviour the warden's miss-detection analysis assumes for every
/// forwarding realization.
pub fn covert_mode_powers(
    scheme: &SchemeConfig,
    params: &SystemParams,
    mu: f64,
    h_rd_sq: f64,
) -> (f64, f64) {
    let sd = params.sigma_d_sq;
    match *scheme {
        SchemeConfig::RateControl { q } => (mu * (q + sd) / h_rd_sq, q / h_rd_sq),
        SchemeConfig::PowerControl { p_delta } => (mu * p_delta + mu * sd / h_rd_sq, p_delta),
    }
}

/// Relay powers under the alternative hypothesis.
///
/// Three regimes: enough headroom for the covert signal (active), enough to
/// forward only (falls back to the null-hypothesis power), or outage.
pub fn relay_power_under_alt(
    scheme: &SchemeConfig,
    params: &SystemParams,
    mu: f64,
    h_rd_sq: f64,
) -> Result<RelayPowers> {
    scheme.validate()?;
    let covert_at = covert_threshold(scheme, params, mu)?;
    if h_rd_sq >= covert_at && h_rd_sq > 0.0 {
        let (p_r1, p_delta) = covert_mode_powers(scheme, params, mu, h_rd_sq);
        return Ok(RelayPowers {
            p_r1,
            p_delta,
            covert_active: true,
        });
    }
    Ok(RelayPowers {
        p_r1: relay_forward_power(params, mu, h_rd_sq),
        p_delta: 0.0,
        covert_active: false,
    })
}

/// Probabilities of conditions B and C and the covert prior `omega`.
///
/// The log-domain values are kept alongside so detection code can form
/// ratios such as `kappa / p_b` without underflow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OpportunityProbs {
    pub p_b: f64,
    pub p_c: f64,
    /// Prior of the covert hypothesis: the relay transmits with probability
    /// one half whenever C holds, conditioned on B.
    pub omega: f64,
    pub ln_p_b: f64,
    pub ln_p_c: f64,
}

pub fn opportunity_probs(
    scheme: &SchemeConfig,
    params: &SystemParams,
    mu: f64,
) -> Result<OpportunityProbs> {
    scheme.validate()?;
    let ln_p_b = -forwarding_threshold(params, mu);
    let ln_p_c = -covert_threshold(scheme, params, mu)?;
    // ln(p_c / p_b) computed directly so omega stays accurate when both
    // probabilities are tiny.
    let ln_ratio = match *scheme {
        SchemeConfig::RateControl { q } => -(mu + 1.0) * q / params.p_r_max,
        SchemeConfig::PowerControl { p_delta } => {
            let headroom = params.p_r_max - (mu + 1.0) * p_delta;
            -mu * (mu + 1.0) * params.sigma_d_sq * p_delta / (params.p_r_max * headroom)
        }
    };
    Ok(OpportunityProbs {
        p_b: ln_p_b.exp(),
        p_c: ln_p_c.exp(),
        omega: 0.5 * ln_ratio.exp(),
        ln_p_b,
        ln_p_c,
    })
}

/// Scenario bundled with the fixed source-relay gains the warden knows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Link {
    pub params: SystemParams,
    pub h_sr_sq: f64,
    pub h_rs_sq: f64,
    pub consts: DerivedConstants,
}

impl Link {
    pub fn new(params: SystemParams, h_sr_sq: f64, h_rs_sq: f64) -> Result<Self> {
        if !(h_rs_sq >= 0.0 && h_rs_sq.is_finite()) {
            return Err(CovertError::InvalidParameter {
                name: "h_rs_sq",
                value: h_rs_sq,
                reason: "must be finite and non-negative",
            });
        }
        let consts = DerivedConstants::new(&params, h_sr_sq)?;
        Ok(Self {
            params,
            h_sr_sq,
            h_rs_sq,
            consts,
        })
    }

    /// `h_rs = h_sr`.
    pub fn reciprocal(params: SystemParams, h_sr_sq: f64) -> Result<Self> {
        Self::new(params, h_sr_sq, h_sr_sq)
    }

    pub fn mu(&self) -> f64 {
        self.consts.mu
    }

    pub fn probs(&self, scheme: &SchemeConfig) -> Result<OpportunityProbs> {
        opportunity_probs(scheme, &self.params, self.consts.mu)
    }

    pub fn draw(&self, h_rd_sq: f64) -> ChannelDraw {
        ChannelDraw {
            h_sr_sq: self.h_sr_sq,
            h_rd_sq,
            h_rs_sq: self.h_rs_sq,
        }
    }
}
