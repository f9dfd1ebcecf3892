//! Brute-force oracles shared by the integration and acceptance tests.
#![allow(dead_code)]

use covert_relay::covert_rate::effective_rate;
use covert_relay::detection::{covert_power_bound, Radiometer};
use covert_relay::optimizer::{FeasibleRegion, P_DELTA_MARGIN, Q_RANGE};
use covert_relay::scenario::{db_to_linear, Link, SchemeConfig, SystemParams};

pub fn baseline_link() -> Link {
    Link::reciprocal(SystemParams::baseline(), 1.0).unwrap()
}

pub fn link_with(p_s_db: f64, p_r_max_db: f64) -> Link {
    let params = SystemParams {
        p_s: db_to_linear(p_s_db),
        p_r_max: db_to_linear(p_r_max_db),
        ..SystemParams::baseline()
    };
    Link::reciprocal(params, 1.0).unwrap()
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect()
}

/// Minimum of the piecewise detection error over a uniform threshold grid
/// of `n` points, with every breakpoint added, followed by a 1000-point
/// zoom into the best cell. Returns `(tau, xi)`.
pub fn grid_min_xi(link: &Link, scheme: &SchemeConfig, n: usize) -> (f64, f64) {
    let rad = Radiometer::new(link, scheme).unwrap();
    let bp = rad.breakpoints;
    let hi = bp.rho1.max(bp.miss_end()) * 1.01 + 1e-9;
    let mut taus = linspace(bp.sigma_s_sq, hi, n);
    taus.extend(
        [bp.rho1, bp.miss_start(), bp.miss_end()]
            .iter()
            .filter(|t| t.is_finite()),
    );
    taus.push(next_up(bp.sigma_s_sq));
    let mut best = (f64::NAN, f64::INFINITY);
    for &t in &taus {
        let x = rad.xi(t);
        if x < best.1 {
            best = (t, x);
        }
    }
    let h = (hi - bp.sigma_s_sq) / (n - 1) as f64;
    for t in linspace((best.0 - h).max(bp.sigma_s_sq), best.0 + h, 1001) {
        let x = rad.xi(t);
        if x < best.1 {
            best = (t, x);
        }
    }
    best
}

fn next_up(x: f64) -> f64 {
    f64::from_bits(x.to_bits() + 1)
}

/// Rate at one covert parameter if it meets the covertness constraint with
/// the brute-force detection error.
pub fn brute_feasible_rate(link: &Link, scheme: &SchemeConfig, tau_points: usize) -> Option<f64> {
    let rad = Radiometer::new(link, scheme).ok()?;
    let r_c = effective_rate(link, scheme).ok()?.r_c;
    let (_, xi) = grid_min_xi(link, scheme, tau_points);
    (xi >= rad.probs.omega - link.params.epsilon).then_some(r_c)
}

/// Nested brute force: a dense grid over the covert parameter, each point
/// judged by [`brute_feasible_rate`]. `Lower` keeps only the feasible run
/// that starts at the first grid point (`None` if that point is infeasible).
pub fn brute_optimum(
    link: &Link,
    rate_control: bool,
    region: FeasibleRegion,
    points: usize,
) -> Option<f64> {
    let params: Vec<f64> = if rate_control {
        let sd = link.params.sigma_d_sq;
        let (a, b) = ((Q_RANGE.0 * sd).ln(), (Q_RANGE.1 * sd).ln());
        linspace(a, b, points).into_iter().map(f64::exp).collect()
    } else {
        let upper = covert_power_bound(&link.params, &link.consts) * (1.0 - P_DELTA_MARGIN);
        linspace(0.0, upper, points)
    };
    let mut best: Option<f64> = None;
    for x in params {
        let scheme = if rate_control {
            SchemeConfig::RateControl { q: x }
        } else {
            SchemeConfig::PowerControl { p_delta: x }
        };
        match brute_feasible_rate(link, &scheme, 1001) {
            Some(r) => best = Some(best.map_or(r, |b: f64| b.max(r))),
            None if region == FeasibleRegion::Lower => return best,
            None => {}
        }
    }
    best
}
