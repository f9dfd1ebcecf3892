//! Monte Carlo and quadrature oracles for the closed forms.
//!
//! Each trial draws `h_rd_sq ~ Exp(1)` with the source-relay gains held
//! fixed, replays the relay's power policy and scores the warden's
//! threshold test on the asymptotic statistic mean.
//!
//! Both hypotheses are scored on every forwarding draw (common random
//! numbers): the null statistic uses the plain forwarding power, the
//! alternative uses the covert-mode powers. This is the conditioning the
//! closed-form `alpha` and `beta` are defined under. A separate fair coin,
//! flipped on draws that satisfy C, estimates the covert prior `omega`.

pub mod quadrature;
pub mod rng;

use std::f64::consts::LN_2;

use rayon::prelude::*;

use crate::covert_rate::{covert_sinr, PowerControlCoefficients};
use crate::detection::{covert_mode_statistic, min_detection_error};
use crate::error::{CovertError, Result};
use crate::scenario::{
    covert_threshold, forwarding_threshold, relay_forward_power, Link, SchemeConfig,
};
use quadrature::{integrate_to_infinity, Tolerance, DEFAULT_BUDGET};
use rng::{TrialStream, CHANNEL_STREAM, COIN_STREAM};

pub const MIN_TRIALS: u64 = 1_000;
/// Fewer forwarding draws than this and the conditional estimates are refused.
pub const MIN_FORWARDING_EVENTS: u64 = 100;
/// Trials per work unit. Fixed so the summation order never depends on the
/// thread count.
const CHUNK: u64 = 4096;
pub const ORACLE_ABS_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimConfig {
    pub n_trials: u64,
    pub seed: u64,
    pub scheme: SchemeConfig,
    /// Warden threshold; `None` uses the optimal one.
    pub tau: Option<f64>,
}

impl SimConfig {
    pub fn new(n_trials: u64, seed: u64, scheme: SchemeConfig) -> Self {
        Self {
            n_trials,
            seed,
            scheme,
            tau: None,
        }
    }

    pub fn with_tau(self, tau: f64) -> Self {
        Self {
            tau: Some(tau),
            ..self
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n_trials < MIN_TRIALS {
            return Err(CovertError::InvalidParameter {
                name: "n_trials",
                value: self.n_trials as f64,
                reason: "at least 1000 trials are required",
            });
        }
        if let Some(tau) = self.tau {
            if tau.is_nan() {
                return Err(CovertError::InvalidParameter {
                    name: "tau",
                    value: tau,
                    reason: "must not be NaN",
                });
            }
        }
        self.scheme.validate()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StdErrs {
    pub alpha: f64,
    pub beta: f64,
    pub xi: f64,
    pub omega: f64,
    pub p_b: f64,
    pub p_c: f64,
    pub r_c: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalReport {
    pub tau: f64,
    pub n_trials: u64,
    /// Draws satisfying B; the denominator of the conditional estimates.
    pub n_forwarding: u64,
    pub alpha_hat: f64,
    pub beta_hat: f64,
    pub omega_hat: f64,
    pub xi_hat: f64,
    pub p_b_hat: f64,
    pub p_c_hat: f64,
    pub r_c_hat: f64,
    pub std_errs: StdErrs,
}

impl EmpiricalReport {
    /// Distance of `value` from the estimate in standard errors.
    pub fn z_score(estimate: f64, std_err: f64, value: f64) -> f64 {
        if std_err > 0.0 {
            (estimate - value).abs() / std_err
        } else if estimate == value {
            0.0
        } else {
            f64::INFINITY
        }
    }
}

/// Per-chunk counters. Indicators: `f` false alarm, `m` miss, `w` covert
/// coin landed on transmit (C held and heads).
#[derive(Debug, Clone, Copy, Default)]
struct Tally {
    forwarding: u64,
    covert_ok: u64,
    f: u64,
    m: u64,
    w: u64,
    fm: u64,
    fw: u64,
    mw: u64,
    rate_sum: f64,
    rate_sq_sum: f64,
}

impl Tally {
    fn merge(mut self, o: &Tally) -> Tally {
        self.forwarding += o.forwarding;
        self.covert_ok += o.covert_ok;
        self.f += o.f;
        self.m += o.m;
        self.w += o.w;
        self.fm += o.fm;
        self.fw += o.fw;
        self.mw += o.mw;
        self.rate_sum += o.rate_sum;
        self.rate_sq_sum += o.rate_sq_sum;
        self
    }
}

/// Everything per-draw work needs, evaluated once per run.
struct Trial<'a> {
    link: &'a Link,
    scheme: SchemeConfig,
    tau: f64,
    forward_at: f64,
    covert_at: f64,
    /// Rate-control rate, constant over active draws.
    fixed_rate: Option<f64>,
}

impl Trial<'_> {
    fn score(&self, h_rd_sq: f64, coin: f64, t: &mut Tally) {
        let link = self.link;
        let p = &link.params;
        let covert = h_rd_sq >= self.covert_at && h_rd_sq > 0.0;
        if covert {
            t.covert_ok += 1;
            let rate = match self.fixed_rate {
                Some(r) => r,
                None => {
                    covert_sinr(&self.scheme, p, &link.consts, &link.draw(h_rd_sq)).ln_1p() / LN_2
                }
            };
            t.rate_sum += rate;
            t.rate_sq_sum += rate * rate;
        }
        if !(h_rd_sq >= self.forward_at && h_rd_sq > 0.0) {
            return;
        }
        t.forwarding += 1;
        let null_stat =
            relay_forward_power(p, link.consts.mu, h_rd_sq) * link.h_rs_sq * link.consts.phi
                + p.sigma_s_sq;
        let alt_stat = covert_mode_statistic(p, &link.consts, &link.draw(h_rd_sq), &self.scheme);
        let f = null_stat > self.tau;
        let m = alt_stat <= self.tau;
        let w = covert && coin < 0.5;
        t.f += f as u64;
        t.m += m as u64;
        t.w += w as u64;
        t.fm += (f && m) as u64;
        t.fw += (f && w) as u64;
        t.mw += (m && w) as u64;
    }
}

fn run(link: &Link, sim: &SimConfig) -> Result<EmpiricalReport> {
    sim.validate()?;
    let scheme = sim.scheme;
    let mu = link.consts.mu;
    let tau = match sim.tau {
        Some(t) => t,
        None => min_detection_error(link, &scheme)?.tau_star,
    };
    let fixed_rate = match scheme {
        SchemeConfig::RateControl { .. } => Some(
            covert_sinr(&scheme, &link.params, &link.consts, &link.draw(f64::NAN)).ln_1p() / LN_2,
        ),
        SchemeConfig::PowerControl { .. } => None,
    };
    let trial = Trial {
        link,
        scheme,
        tau,
        forward_at: forwarding_threshold(&link.params, mu),
        covert_at: covert_threshold(&scheme, &link.params, mu)?,
        fixed_rate,
    };

    let n = sim.n_trials;
    let chunks = n.div_ceil(CHUNK);
    let tallies: Vec<Tally> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let start = c * CHUNK;
            let end = (start + CHUNK).min(n);
            let mut channel = TrialStream::new(sim.seed, CHANNEL_STREAM, start);
            let mut coins = TrialStream::new(sim.seed, COIN_STREAM, start);
            let mut tally = Tally::default();
            for _ in start..end {
                let h = channel.next_exponential();
                let coin = coins.next_uniform();
                trial.score(h, coin, &mut tally);
            }
            tally
        })
        .collect();
    let total = tallies.iter().fold(Tally::default(), |acc, t| acc.merge(t));

    if total.forwarding < MIN_FORWARDING_EVENTS {
        return Err(CovertError::DegenerateSample {
            events: total.forwarding,
            trials: n,
            required: MIN_FORWARDING_EVENTS,
        });
    }
    Ok(summarize(&total, n, tau))
}

fn summarize(t: &Tally, n: u64, tau: f64) -> EmpiricalReport {
    let nf = n as f64;
    let nb = t.forwarding as f64;
    let frac = |k: u64| k as f64 / nb;
    let bernoulli_se = |p: f64, m: f64| (p * (1.0 - p) / m).sqrt();

    let (a, b, w) = (frac(t.f), frac(t.m), frac(t.w));
    let xi = (1.0 - w) * a + w * b;
    // Delta method on (alpha, beta, omega) with their empirical covariances.
    let (cab, caw, cbw) = (frac(t.fm) - a * b, frac(t.fw) - a * w, frac(t.mw) - b * w);
    let (ga, gb, gw) = (1.0 - w, w, b - a);
    let var_xi = ga * ga * a * (1.0 - a)
        + gb * gb * b * (1.0 - b)
        + gw * gw * w * (1.0 - w)
        + 2.0 * (ga * gb * cab + ga * gw * caw + gb * gw * cbw);

    let r_c = t.rate_sum / nf;
    let var_rate = (t.rate_sq_sum / nf - r_c * r_c).max(0.0);
    let p_b = nb / nf;
    let p_c = t.covert_ok as f64 / nf;

    EmpiricalReport {
        tau,
        n_trials: n,
        n_forwarding: t.forwarding,
        alpha_hat: a,
        beta_hat: b,
        omega_hat: w,
        xi_hat: xi,
        p_b_hat: p_b,
        p_c_hat: p_c,
        r_c_hat: r_c,
        std_errs: StdErrs {
            alpha: bernoulli_se(a, nb),
            beta: bernoulli_se(b, nb),
            xi: (var_xi.max(0.0) / nb).sqrt(),
            omega: bernoulli_se(w, nb),
            p_b: bernoulli_se(p_b, nf),
            p_c: bernoulli_se(p_c, nf),
            r_c: (var_rate / nf).sqrt(),
        },
    }
}

/// Empirical false-alarm, miss and detection-error rates plus the B and C
/// frequencies.
pub fn simulate_detection(link: &Link, sim: &SimConfig) -> Result<EmpiricalReport> {
    run(link, sim)
}

/// Empirical effective covert rate. Shares the draws of
/// [`simulate_detection`], so the detection fields are filled in as well.
pub fn simulate_effective_rate(link: &Link, sim: &SimConfig) -> Result<EmpiricalReport> {
    run(link, sim)
}

/// Power-control effective rate by direct numerical integration over the
/// shifted channel gain, independent of the exponential-integral path.
pub fn quadrature_rate_oracle(link: &Link, p_delta: f64) -> Result<f64> {
    let scheme = SchemeConfig::PowerControl { p_delta };
    scheme.validate()?;
    let p_c = link.probs(&scheme)?.p_c;
    if p_delta == 0.0 {
        return Ok(0.0);
    }
    let c = PowerControlCoefficients::new(link, p_delta);
    let tol = Tolerance {
        abs: ORACLE_ABS_TOL,
        rel: 0.0,
    };
    let q = integrate_to_infinity(
        |x| c.integrand_log(x) * (-x).exp(),
        0.0,
        tol,
        DEFAULT_BUDGET,
    )?;
    Ok(p_c / LN_2 * q.value)
}

/// `Ei(x)` for `x < 0` as `-integral_{-x}^inf e^-t / t dt`.
pub fn quadrature_exp_integral(x: f64) -> Result<f64> {
    if x.is_nan() || x >= 0.0 {
        return Err(CovertError::DomainError {
            function: "Ei quadrature",
            x,
        });
    }
    let tol = Tolerance {
        abs: 0.0,
        rel: 1e-12,
    };
    let q = integrate_to_infinity(|t| (-t).exp() / t, -x, tol, DEFAULT_BUDGET)?;
    Ok(-q.value)
}
