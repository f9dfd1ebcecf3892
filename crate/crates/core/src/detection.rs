//! The warden's radiometer.
//!
//! The source knows its own signal and cancels it, so what is left is the
//! average received power, which converges (infinite blocklength) to
//!
//! ```text
//! H0:  P_r0 * h_rs_sq * phi                    + sigma_s_sq
//! H1:  P_r1 * h_rs_sq * phi + P_delta * h_rs_sq + sigma_s_sq
//! ```
//!
//! with relay powers that depend on the unknown `h_rd_sq`. The warden
//! compares that level to a threshold `tau`. False-alarm and miss rates are
//! conditioned on the forwarding event B, and both schemes share the same
//! false-alarm curve; they differ only in the miss curve.
//!
//! Rate-control has a closed-form optimal threshold. Power-control only has
//! a bracket `[rho3, rho1]`, searched numerically.

use crate::error::{CovertError, Result};
use crate::scenario::{
    covert_mode_powers, forwarding_threshold, relay_forward_power, relay_power_under_alt,
    ChannelDraw, DerivedConstants, Link, OpportunityProbs, SchemeConfig, SystemParams,
};
use crate::search::grid_then_golden_min;

/// Coarse grid size for the power-control threshold search.
pub const THRESHOLD_GRID_POINTS: usize = 256;
/// Relative bracket width at which the golden-section refinement stops.
pub const THRESHOLD_REL_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Hypothesis {
    /// No covert message.
    Null,
    /// The relay transmits its covert message.
    Alternative,
}

/// Breakpoints of the piecewise error-rate curves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThresholdBreakpoints {
    pub sigma_s_sq: f64,
    /// Largest null-hypothesis statistic (relay forwarding at full power).
    pub rho1: f64,
    /// Largest alternative statistic, rate-control only.
    pub rho2: Option<f64>,
    /// Smallest alternative statistic, power-control only.
    pub rho3: Option<f64>,
    /// Largest alternative statistic, power-control only.
    pub rho4: Option<f64>,
}

impl ThresholdBreakpoints {
    pub fn new(link: &Link, scheme: &SchemeConfig) -> Self {
        let DerivedConstants { mu, phi, .. } = link.consts;
        let p = &link.params;
        let h = link.h_rs_sq;
        let rho1 = p.p_r_max * h * phi + p.sigma_s_sq;
        match *scheme {
            SchemeConfig::RateControl { q } => {
                // phi*P*h + (phi*mu + 1) q P h / (mu sd) written so mu = 0 stays finite
                let rho2 = if mu > 0.0 {
                    p.p_r_max * h * (phi + (phi * mu + 1.0) * q / (mu * p.sigma_d_sq))
                        + p.sigma_s_sq
                } else if q > 0.0 && h > 0.0 {
                    f64::INFINITY
                } else {
                    rho1
                };
                Self {
                    sigma_s_sq: p.sigma_s_sq,
                    rho1,
                    rho2: Some(rho2),
                    rho3: None,
                    rho4: None,
                }
            }
            SchemeConfig::PowerControl { p_delta } => {
                let shift = (phi * mu + 1.0) * p_delta * h;
                Self {
                    sigma_s_sq: p.sigma_s_sq,
                    rho1,
                    rho2: None,
                    rho3: Some(shift + p.sigma_s_sq),
                    rho4: Some((p.p_r_max * phi) * h + shift + p.sigma_s_sq),
                }
            }
        }
    }

    /// Statistic level below which the alternative is never missed.
    pub fn miss_start(&self) -> f64 {
        self.rho3.unwrap_or(self.sigma_s_sq)
    }

    /// Statistic level above which the alternative is always missed.
    pub fn miss_end(&self) -> f64 {
        self.rho2.or(self.rho4).unwrap_or(self.rho1)
    }
}

/// Warden's operating point for one configured scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DetectionReport {
    pub tau_star: f64,
    pub alpha: f64,
    pub beta: f64,
    pub xi_star: f64,
    pub omega: f64,
    pub scheme: SchemeConfig,
}

/// `exp(-numerator / distance)`, with the empty-branch convention that a
/// non-positive distance gives zero.
fn kappa_ln(numerator: f64, distance: f64) -> f64 {
    if distance <= 0.0 {
        f64::NEG_INFINITY
    } else if numerator == 0.0 {
        0.0
    } else {
        -numerator / distance
    }
}

/// Error-rate curves for one (link, scheme) pair with everything that does
/// not depend on `tau` precomputed.
#[derive(Debug, Clone, Copy)]
pub struct Radiometer {
    pub breakpoints: ThresholdBreakpoints,
    pub probs: OpportunityProbs,
    fa_numerator: f64,
    miss_numerator: f64,
}

impl Radiometer {
    pub fn new(link: &Link, scheme: &SchemeConfig) -> Result<Self> {
        let probs = link.probs(scheme)?;
        let DerivedConstants { mu, phi, .. } = link.consts;
        let sd = link.params.sigma_d_sq;
        let h = link.h_rs_sq;
        let fa_numerator = phi * mu * sd * h;
        let miss_numerator = match *scheme {
            SchemeConfig::RateControl { q } => (phi * mu * sd + (phi * mu + 1.0) * q) * h,
            SchemeConfig::PowerControl { .. } => fa_numerator,
        };
        Ok(Self {
            breakpoints: ThresholdBreakpoints::new(link, scheme),
            probs,
            fa_numerator,
            miss_numerator,
        })
    }

    /// False-alarm rate given B.
    pub fn alpha(&self, tau: f64) -> f64 {
        let bp = &self.breakpoints;
        if tau < bp.sigma_s_sq {
            1.0
        } else if tau <= bp.rho1 {
            let ln_k = kappa_ln(self.fa_numerator, tau - bp.sigma_s_sq);
            (1.0 - (ln_k - self.probs.ln_p_b).exp()).clamp(0.0, 1.0)
        } else {
            0.0
        }
    }

    /// Miss-detection rate given B.
    pub fn beta(&self, tau: f64) -> f64 {
        let start = self.breakpoints.miss_start();
        let end = self.breakpoints.miss_end();
        if tau < start {
            0.0
        } else if tau <= end {
            let ln_k = kappa_ln(self.miss_numerator, tau - start);
            (ln_k - self.probs.ln_p_b).exp().clamp(0.0, 1.0)
        } else {
            1.0
        }
    }

    pub fn xi(&self, tau: f64) -> f64 {
        let w = self.probs.omega;
        (1.0 - w) * self.alpha(tau) + w * self.beta(tau)
    }

    fn report(&self, scheme: &SchemeConfig, tau: f64, xi_star: f64) -> DetectionReport {
        DetectionReport {
            tau_star: tau,
            alpha: self.alpha(tau),
            beta: self.beta(tau),
            xi_star,
            omega: self.probs.omega,
            scheme: *scheme,
        }
    }
}

/// Asymptotic mean of the warden's test statistic for one channel draw.
///
/// Under the alternative the relay follows its actual (budget-checked)
/// power policy, so draws without covert headroom look like the null.
pub fn statistic_mean(
    params: &SystemParams,
    consts: &DerivedConstants,
    draw: &ChannelDraw,
    scheme: &SchemeConfig,
    hypothesis: Hypothesis,
) -> Result<f64> {
    let mu = consts.mu;
    let threshold = forwarding_threshold(params, mu);
    if draw.h_rd_sq < threshold {
        return Err(CovertError::ConditionBViolated {
            h_rd_sq: draw.h_rd_sq,
            threshold,
        });
    }
    let (p_r, p_delta) = match hypothesis {
        Hypothesis::Null => (relay_forward_power(params, mu, draw.h_rd_sq), 0.0),
        Hypothesis::Alternative => {
            let r = relay_power_under_alt(scheme, params, mu, draw.h_rd_sq)?;
            (r.p_r1, r.p_delta)
        }
    };
    Ok(p_r * draw.h_rs_sq * consts.phi + p_delta * draw.h_rs_sq + params.sigma_s_sq)
}

/// Alternative-hypothesis statistic with the relay in covert mode on every
/// forwarding draw, the event the closed-form miss rate integrates over.
pub fn covert_mode_statistic(
    params: &SystemParams,
    consts: &DerivedConstants,
    draw: &ChannelDraw,
    scheme: &SchemeConfig,
) -> f64 {
    let (p_r1, p_delta) = covert_mode_powers(scheme, params, consts.mu, draw.h_rd_sq);
    p_r1 * draw.h_rs_sq * consts.phi + p_delta * draw.h_rs_sq + params.sigma_s_sq
}

/// `(alpha, beta)` at threshold `tau`, both conditioned on B.
pub fn error_rates(link: &Link, scheme: &SchemeConfig, tau: f64) -> Result<(f64, f64)> {
    let r = Radiometer::new(link, scheme)?;
    Ok((r.alpha(tau), r.beta(tau)))
}

/// Detection error probability `(1 - omega) alpha + omega beta`.
pub fn detection_error_prob(link: &Link, scheme: &SchemeConfig, tau: f64) -> Result<f64> {
    Ok(Radiometer::new(link, scheme)?.xi(tau))
}

/// Largest covert power that still leaves the warden a non-zero error.
pub fn covert_power_bound(params: &SystemParams, consts: &DerivedConstants) -> f64 {
    consts.phi * params.p_r_max / (consts.phi * consts.mu + 1.0)
}

/// Threshold just above the noise floor, used when the statistic under the
/// null is pinned at `sigma_s_sq` (no leakage or no forwarding power).
fn just_above(x: f64) -> f64 {
    x.next_up()
}

/// Minimum rate-control detection error from the closed-form expression for
/// whichever threshold branch `tau_star` fell on.
pub fn rate_control_min_error(link: &Link, q: f64, at_rho1: bool, omega: f64) -> f64 {
    let DerivedConstants { mu, phi, .. } = link.consts;
    let p = &link.params;
    let a = phi * mu * p.sigma_d_sq;
    let b = (phi * mu + 1.0) * q;
    if at_rho1 {
        return omega * (-b / (phi * p.p_r_max)).exp();
    }
    let ln_l = (omega / (1.0 - omega)).ln() + (b / a).ln_1p();
    let ln_one_minus_f = (b / (a + b)).ln();
    let ln_term = mu * p.sigma_d_sq / p.p_r_max + ln_one_minus_f - (a / b) * ln_l;
    (1.0 - omega) * (1.0 - ln_term.exp())
}

/// Stationary point of the rate-control error curve, if it lies above
/// the noise floor.
pub fn rate_control_stationary_threshold(link: &Link, q: f64, omega: f64) -> Option<f64> {
    let DerivedConstants { mu, phi, .. } = link.consts;
    let p = &link.params;
    let a = phi * mu * p.sigma_d_sq;
    let b = (phi * mu + 1.0) * q;
    let ln_l = (omega / (1.0 - omega)).ln() + (b / a).ln_1p();
    if ln_l > 0.0 && ln_l.is_finite() {
        Some(b * link.h_rs_sq / ln_l + p.sigma_s_sq)
    } else {
        None
    }
}

/// Warden's optimal threshold and the resulting minimum detection error.
///
/// Power-control covert signals stronger than [`covert_power_bound`] return
/// [`CovertError::DetectableWithCertainty`] carrying a zero-error report.
pub fn optimal_threshold(link: &Link, scheme: &SchemeConfig) -> Result<DetectionReport> {
    let radiometer = Radiometer::new(link, scheme)?;
    let bp = radiometer.breakpoints;
    let mu = link.consts.mu;

    if link.h_rs_sq == 0.0 || mu == 0.0 && matches!(scheme, SchemeConfig::RateControl { .. }) {
        // Null statistic is exactly sigma_s_sq; the infimum sits just above it.
        let tau = just_above(bp.sigma_s_sq);
        return Ok(radiometer.report(scheme, tau, radiometer.xi(tau)));
    }

    match *scheme {
        SchemeConfig::RateControl { q } => {
            let omega = radiometer.probs.omega;
            let stationary = if q > 0.0 {
                rate_control_stationary_threshold(link, q, omega)
            } else {
                None
            };
            let (tau, at_rho1) = match stationary {
                Some(t) if t <= bp.rho1 => (t, false),
                _ => (bp.rho1, true),
            };
            let xi_star = if q > 0.0 {
                rate_control_min_error(link, q, at_rho1, omega)
            } else {
                radiometer.xi(tau)
            };
            Ok(radiometer.report(scheme, tau, xi_star.clamp(0.0, omega.min(1.0 - omega))))
        }
        SchemeConfig::PowerControl { p_delta } => {
            let bound = covert_power_bound(&link.params, &link.consts);
            let rho3 = bp.rho3.expect("power-control breakpoints");
            if p_delta > bound {
                let tau = 0.5 * (bp.rho1 + rho3);
                return Err(CovertError::DetectableWithCertainty {
                    p_delta,
                    bound,
                    report: radiometer.report(scheme, tau, 0.0),
                });
            }
            let (tau, xi_star) = grid_then_golden_min(
                |t| radiometer.xi(t),
                rho3,
                bp.rho1,
                THRESHOLD_GRID_POINTS,
                THRESHOLD_REL_TOL,
            );
            Ok(radiometer.report(scheme, tau, xi_star))
        }
    }
}

/// Minimum detection error with certain detection mapped to zero.
pub fn min_detection_error(link: &Link, scheme: &SchemeConfig) -> Result<DetectionReport> {
    match optimal_threshold(link, scheme) {
        Err(CovertError::DetectableWithCertainty { report, .. }) => Ok(report),
        other => other,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::SystemParams;
    use approx::assert_relative_eq;

    const RATE: SchemeConfig = SchemeConfig::RateControl { q: 0.1 };
    const POWER: SchemeConfig = SchemeConfig::PowerControl { p_delta: 0.1 };

    fn baseline() -> Link {
        Link::reciprocal(SystemParams::baseline(), 1.0).unwrap()
    }

    #[test]
    fn statistic_mean_examples() {
        let link = baseline();
        let draw = link.draw(1.0);
        let h0 =
            statistic_mean(&link.params, &link.consts, &draw, &RATE, Hypothesis::Null).unwrap();
        assert_relative_eq!(h0, 33.0 / 77.0 + 1.0, max_relative = 1e-14);
        let h1 = statistic_mean(
            &link.params,
            &link.consts,
            &draw,
            &RATE,
            Hypothesis::Alternative,
        )
        .unwrap();
        assert_relative_eq!(h1, 11.0 / 7.0, max_relative = 1e-14);

        let blind = ChannelDraw {
            h_rs_sq: 0.0,
            ..draw
        };
        let h0 =
            statistic_mean(&link.params, &link.consts, &blind, &RATE, Hypothesis::Null).unwrap();
        assert_eq!(h0, 1.0);

        let outage = link.draw(0.1);
        assert!(matches!(
            statistic_mean(&link.params, &link.consts, &outage, &RATE, Hypothesis::Null),
            Err(CovertError::ConditionBViolated { .. })
        ));
    }

    #[test]
    fn error_rate_branches() {
        let link = baseline();
        for s in [RATE, POWER] {
            assert_eq!(error_rates(&link, &s, 0.5).unwrap(), (1.0, 0.0));
            assert_eq!(error_rates(&link, &s, 100.0).unwrap(), (0.0, 1.0));
        }
        let r = Radiometer::new(&link, &RATE).unwrap();
        let w = r.probs.omega;
        assert_eq!(r.xi(0.9), 1.0 - w);
        assert_relative_eq!(r.xi(r.breakpoints.rho2.unwrap()), w, max_relative = 1e-14);
    }

    #[test]
    fn rate_control_baseline_optimum() {
        let link = baseline();
        let rep = optimal_threshold(&link, &RATE).unwrap();
        // values from the independent mpmath evaluation
        assert_relative_eq!(rep.tau_star, 1.809_453_514_504_38, max_relative = 1e-12);
        assert_relative_eq!(rep.alpha, 0.056_377_577_253_897_94, max_relative = 1e-10);
        assert_relative_eq!(rep.beta, 0.790_954_304_512_559_3, max_relative = 1e-12);
        assert_relative_eq!(rep.xi_star, 0.403_266_428_195_513_5, max_relative = 1e-12);
        assert_relative_eq!(
            rep.xi_star,
            (1.0 - rep.omega) * rep.alpha + rep.omega * rep.beta,
            max_relative = 1e-12
        );
    }

    #[test]
    fn closed_form_branches_match_direct_evaluation() {
        let link = baseline();
        for q in [1e-3, 0.05, 0.1, 0.5, 2.0, 10.0, 50.0] {
            let s = SchemeConfig::RateControl { q };
            let rep = optimal_threshold(&link, &s).unwrap();
            let direct = detection_error_prob(&link, &s, rep.tau_star).unwrap();
            assert_relative_eq!(rep.xi_star, direct, epsilon = 1e-12);
        }
    }

    #[test]
    fn rate_control_large_q_is_detected() {
        let link = baseline();
        let rep = optimal_threshold(&link, &SchemeConfig::RateControl { q: 1e3 }).unwrap();
        assert!(rep.xi_star < 1e-10);
        assert_eq!(rep.tau_star, ThresholdBreakpoints::new(&link, &RATE).rho1);
    }

    #[test]
    fn covert_bound_examples() {
        let link = baseline();
        assert_relative_eq!(
            covert_power_bound(&link.params, &link.consts),
            7.0 / 11.0,
            max_relative = 1e-14
        );
        let zero_mu = DerivedConstants {
            mu: 0.0,
            ..link.consts
        };
        assert_relative_eq!(
            covert_power_bound(&link.params, &zero_mu),
            10.0 / 11.0,
            max_relative = 1e-14
        );
        let loud = Link::reciprocal(
            SystemParams {
                p_s: 1e12,
                ..SystemParams::baseline()
            },
            1.0,
        )
        .unwrap();
        assert!(covert_power_bound(&loud.params, &loud.consts) < 1e-10);
    }

    #[test]
    fn power_control_above_bound_is_certain() {
        let link = baseline();
        let err =
            optimal_threshold(&link, &SchemeConfig::PowerControl { p_delta: 0.7 }).unwrap_err();
        let CovertError::DetectableWithCertainty { report, bound, .. } = err else {
            panic!("expected certain detection, got {err:?}");
        };
        assert_relative_eq!(bound, 7.0 / 11.0, max_relative = 1e-14);
        assert_eq!(report.xi_star, 0.0);
        assert_eq!((report.alpha, report.beta), (0.0, 0.0));
    }

    #[test]
    fn power_control_optimum_is_grid_minimum() {
        let link = baseline();
        let r = Radiometer::new(&link, &POWER).unwrap();
        let rep = optimal_threshold(&link, &POWER).unwrap();
        let (lo, hi) = (r.breakpoints.sigma_s_sq, r.breakpoints.rho4.unwrap());
        for i in 0..=20_000 {
            let t = lo + (hi - lo) * i as f64 / 20_000.0;
            assert!(rep.xi_star <= r.xi(t) + 1e-12, "tau {t}");
        }
        assert!(rep.tau_star >= r.breakpoints.rho3.unwrap() && rep.tau_star <= r.breakpoints.rho1);
    }

    #[test]
    fn zero_rate_and_blind_warden() {
        let p = SystemParams {
            r_sd: 0.0,
            ..SystemParams::baseline()
        };
        let link = Link::reciprocal(p, 1.0).unwrap();
        for s in [RATE, POWER] {
            assert!(optimal_threshold(&link, &s).unwrap().xi_star < 1e-12);
        }
        let blind = Link::new(SystemParams::baseline(), 1.0, 0.0).unwrap();
        for s in [RATE, POWER] {
            let rep = optimal_threshold(&blind, &s).unwrap();
            assert_eq!(rep.xi_star, rep.omega);
        }
    }
}
