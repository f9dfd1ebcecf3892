//! Covertness-constrained maximization of the effective covert rate.
//!
//! The constraint is `xi*(x) >= omega(x) - epsilon` where `x` is `Q` or
//! `P_delta` and both sides are recomputed per candidate. Because `omega`
//! shrinks as `x` grows, the constraint turns vacuous once `omega <= epsilon`
//! and a second feasible island appears at large `x`, where the relay
//! almost never has covert headroom. [`FeasibleRegion::Lower`] (the default)
//! keeps only the feasible interval reached by growing `x` from zero;
//! [`FeasibleRegion::All`] takes the constraint literally.
//!
//! The search scans a fixed grid, bisects feasible/infeasible transitions
//! between neighbouring grid points, and runs a golden-section refinement
//! around the best feasible cell.

use rayon::prelude::*;

use crate::covert_rate::effective_rate;
use crate::detection::{covert_power_bound, min_detection_error, DetectionReport};
use crate::error::{CovertError, Result};
use crate::scenario::{Link, SchemeConfig};
use crate::search::{golden_section_min, linspace, logspace};

pub const GRID_POINTS: usize = 512;
/// Rate-control search range, in multiples of `sigma_d_sq`.
pub const Q_RANGE: (f64, f64) = (1e-4, 1e2);
/// Power-control search stops this fraction short of the certain-detection bound.
pub const P_DELTA_MARGIN: f64 = 1e-6;
const BISECTION_STEPS: usize = 80;
const REFINE_REL_TOL: f64 = 1e-10;
const MAX_DECADES_BELOW: usize = 40;

/// Which part of the feasible set the maximizer may use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FeasibleRegion {
    /// Feasible interval adjoining zero.
    #[default]
    Lower,
    /// Every grid point meeting the constraint.
    All,
}

impl FeasibleRegion {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Lower => "lower",
            Self::All => "all",
        }
    }
}

/// Constrained optimum for one scheme.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimumReport {
    /// The scheme with its optimal `q` or `p_delta`.
    pub scheme: SchemeConfig,
    pub r_c: f64,
    /// Warden's best response at the optimum.
    pub detection: DetectionReport,
    /// `xi* - (omega - epsilon)`, non-negative up to round-off.
    pub slack: f64,
}

impl OptimumReport {
    pub fn parameter(&self) -> f64 {
        self.scheme.covert_parameter()
    }
}

/// Rate, detection outcome and constraint slack at one covert parameter.
pub fn evaluate(link: &Link, scheme: &SchemeConfig) -> Result<OptimumReport> {
    let detection = min_detection_error(link, scheme)?;
    let r_c = effective_rate(link, scheme)?.r_c;
    Ok(OptimumReport {
        scheme: *scheme,
        r_c,
        detection,
        slack: detection.xi_star - (detection.omega - link.params.epsilon),
    })
}

fn keep_better(best: &mut Option<OptimumReport>, candidate: Option<OptimumReport>) {
    if let Some(c) = candidate {
        if best.is_none_or(|b| c.r_c > b.r_c) {
            *best = Some(c);
        }
    }
}

/// Search coordinate: `Q = e^u` for rate-control, `P_delta = u` for power-control.
struct Problem<'a> {
    link: &'a Link,
    template: SchemeConfig,
    log_scale: bool,
    region: FeasibleRegion,
}

impl Problem<'_> {
    fn probe(&self, u: f64) -> Option<OptimumReport> {
        let x = if self.log_scale { u.exp() } else { u };
        evaluate(self.link, &self.template.with_covert_parameter(x))
            .ok()
            .filter(|r| r.slack >= 0.0 && r.r_c.is_finite())
    }

    /// Grid probes. In `Lower` mode everything past the run of feasible
    /// points starting at the first grid point is blanked, and probing stops
    /// block-wise once that run has ended.
    fn scan(&self, us: &[f64]) -> Vec<Option<OptimumReport>> {
        const BLOCK: usize = 32;
        let mut probes: Vec<Option<OptimumReport>> = Vec::with_capacity(us.len());
        for block in us.chunks(BLOCK) {
            probes.extend(block.par_iter().map(|&u| self.probe(u)).collect::<Vec<_>>());
            if self.region == FeasibleRegion::Lower {
                let run = probes.iter().take_while(|p| p.is_some()).count();
                if run < probes.len() {
                    probes.truncate(run);
                    probes.resize(us.len(), None);
                    return probes;
                }
            }
        }
        probes
    }

    /// Lower feasible interval lying entirely below the grid: walk down a
    /// decade at a time until feasible, then bisect the upper edge. The rate
    /// grows with the covert parameter there, so the edge is the optimum.
    fn below_grid(&self, u0: f64) -> Result<OptimumReport> {
        let mut infeasible = u0;
        for k in 1..=MAX_DECADES_BELOW {
            let u = u0 - k as f64 * std::f64::consts::LN_10;
            if self.probe(u).is_some() {
                return self
                    .bisect_edge(u, infeasible)
                    .ok_or(CovertError::NoFeasiblePoint);
            }
            infeasible = u;
        }
        Err(CovertError::NoFeasiblePoint)
    }

    fn solve(&self, lo: f64, hi: f64) -> Result<OptimumReport> {
        let us = if self.log_scale {
            logspace(lo, hi, GRID_POINTS)
                .into_iter()
                .map(f64::ln)
                .collect()
        } else {
            linspace(lo, hi, GRID_POINTS)
        };
        let probes = self.scan(&us);
        if self.region == FeasibleRegion::Lower && self.log_scale && probes[0].is_none() {
            return self.below_grid(us[0]);
        }

        let mut best: Option<OptimumReport> = None;
        for p in &probes {
            keep_better(&mut best, *p);
        }
        let Some(grid_best) = best else {
            return Err(CovertError::NoFeasiblePoint);
        };

        // Edges of the retained feasible set, located to bisection precision.
        for i in 0..us.len() - 1 {
            match (probes[i].is_some(), probes[i + 1].is_some()) {
                (true, false) => keep_better(&mut best, self.bisect_edge(us[i], us[i + 1])),
                (false, true) => keep_better(&mut best, self.bisect_edge(us[i + 1], us[i])),
                _ => {}
            }
        }

        let i = probes
            .iter()
            .position(|p| p.as_ref() == Some(&grid_best))
            .expect("grid optimum comes from the grid");
        let (a, b) = (us[i.saturating_sub(1)], us[(i + 1).min(us.len() - 1)]);
        let (u, _) = golden_section_min(
            |u| self.probe(u).map_or(f64::INFINITY, |r| -r.r_c),
            a,
            b,
            REFINE_REL_TOL,
            200,
        );
        keep_better(&mut best, self.probe(u));

        Ok(best.expect("grid optimum is feasible"))
    }

    /// Last feasible point walking from `feasible` towards `infeasible`.
    fn bisect_edge(&self, mut feasible: f64, mut infeasible: f64) -> Option<OptimumReport> {
        let mut last = self.probe(feasible);
        for _ in 0..BISECTION_STEPS {
            let mid = 0.5 * (feasible + infeasible);
            if mid == feasible || mid == infeasible {
                break;
            }
            match self.probe(mid) {
                Some(r) => {
                    feasible = mid;
                    last = Some(r);
                }
                None => infeasible = mid,
            }
        }
        last
    }
}

/// Best rate-control `Q` under the covertness constraint.
pub fn maximize_rate_control(link: &Link) -> Result<OptimumReport> {
    maximize(
        link,
        &SchemeConfig::RateControl { q: 0.0 },
        FeasibleRegion::Lower,
    )
}

/// Best power-control `P_delta` in `[0, P_delta^u)` under the covertness
/// constraint.
pub fn maximize_power_control(link: &Link) -> Result<OptimumReport> {
    maximize(
        link,
        &SchemeConfig::PowerControl { p_delta: 0.0 },
        FeasibleRegion::Lower,
    )
}

/// Dispatch on the scheme kind; the carried parameter is ignored.
pub fn maximize(
    link: &Link,
    scheme: &SchemeConfig,
    region: FeasibleRegion,
) -> Result<OptimumReport> {
    match scheme {
        SchemeConfig::RateControl { .. } => {
            let sd = link.params.sigma_d_sq;
            Problem {
                link,
                template: *scheme,
                log_scale: true,
                region,
            }
            .solve(Q_RANGE.0 * sd, Q_RANGE.1 * sd)
        }
        SchemeConfig::PowerControl { .. } => {
            let upper = covert_power_bound(&link.params, &link.consts) * (1.0 - P_DELTA_MARGIN);
            Problem {
                link,
                template: *scheme,
                log_scale: false,
                region,
            }
            .solve(0.0, upper)
        }
    }
}

/// Large-`P_r^max` behaviour of rate-control.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Asymptotics {
    /// Limit of the minimum detection error as `P_r^max` grows.
    pub xi_limit: f64,
    /// Approximate largest `Q` meeting the covertness constraint.
    pub q_epsilon: f64,
}

/// `xi_limit(Q)` and `Q_epsilon` for a link.
pub fn asymptotics(link: &Link, q: f64) -> Result<Asymptotics> {
    SchemeConfig::RateControl { q }.validate()?;
    let eps = link.params.epsilon;
    if eps >= 0.5 {
        return Err(CovertError::DomainError {
            function: "q_epsilon",
            x: eps,
        });
    }
    let mu = link.consts.mu;
    let phi = link.consts.phi;
    let sd = link.params.sigma_d_sq;
    let a = phi * mu * sd;
    let b = (phi * mu + 1.0) * q;

    let xi_limit = if b == 0.0 {
        0.5
    } else if a == 0.0 {
        0.0
    } else {
        let x = b / a;
        let f1 = b / (a + b);
        let f2 = (-x.ln_1p() / x).exp();
        0.5 * (1.0 - f1 * f2)
    };
    let q_epsilon = a / (phi * mu + 1.0) * (1.0 / (1.0 - 2.0 * eps) - 1.0);
    Ok(Asymptotics {
        xi_limit,
        q_epsilon,
    })
}
