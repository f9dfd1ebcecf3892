//! Baseline values frozen from an independent high-precision evaluation.

mod common;

use approx::assert_relative_eq;
use common::baseline_link;
use covert_relay::covert_rate::{effective_rate, exp_integral, exp_integral_e1};
use covert_relay::detection::{covert_power_bound, min_detection_error};
use covert_relay::optimizer::asymptotics;
use covert_relay::scenario::SchemeConfig;

const RATE: SchemeConfig = SchemeConfig::RateControl { q: 0.1 };
const POWER: SchemeConfig = SchemeConfig::PowerControl { p_delta: 0.1 };

#[test]
fn derived_constants() {
    let link = baseline_link();
    assert_relative_eq!(link.consts.mu, 33.0 / 7.0, max_relative = 1e-14);
    assert_relative_eq!(link.consts.phi, 1.0 / 11.0, max_relative = 1e-14);
    assert_relative_eq!(link.consts.eta, 10.0, max_relative = 1e-14);
    assert_relative_eq!(
        covert_power_bound(&link.params, &link.consts),
        7.0 / 11.0,
        max_relative = 1e-14
    );
}

#[test]
fn rate_control_baseline() {
    let link = baseline_link();
    let p = link.probs(&RATE).unwrap();
    assert_relative_eq!(p.p_b, 0.6241100453532708, max_relative = 1e-12);
    assert_relative_eq!(p.p_c, 0.5894464348241793, max_relative = 1e-12);
    assert_relative_eq!(p.omega, 0.4722295684974349, max_relative = 1e-12);
    let d = min_detection_error(&link, &RATE).unwrap();
    assert_relative_eq!(d.tau_star, 1.80945351450438, max_relative = 1e-10);
    assert_relative_eq!(d.alpha, 0.05637757725389794, max_relative = 1e-9);
    assert_relative_eq!(d.beta, 0.7909543045125593, max_relative = 1e-10);
    assert_relative_eq!(d.xi_star, 0.4032664281955135, max_relative = 1e-12);
    let r = effective_rate(&link, &RATE).unwrap();
    assert_relative_eq!(
        r.r_delta.unwrap(),
        0.09485918634144122,
        max_relative = 1e-12
    );
    assert_relative_eq!(r.r_c, 0.05591440919928501, max_relative = 1e-12);
}

#[test]
fn power_control_baseline_rate() {
    let r = effective_rate(&baseline_link(), &POWER).unwrap();
    assert_relative_eq!(r.r_c, 0.08111844694522598, max_relative = 1e-12);
}

#[test]
fn power_control_min_error_matches_grid() {
    let link = baseline_link();
    let d = min_detection_error(&link, &POWER).unwrap();
    let (_, grid) = common::grid_min_xi(&link, &POWER, 100_000);
    assert!(
        d.xi_star <= grid + 1e-12 && grid - d.xi_star < 1e-9,
        "{} vs {grid}",
        d.xi_star
    );
}

#[test]
fn asymptotic_values() {
    let a = asymptotics(&baseline_link(), 0.1).unwrap();
    assert_relative_eq!(a.xi_limit, 0.447265625, max_relative = 1e-14);
    assert_relative_eq!(a.q_epsilon, 0.075, max_relative = 1e-14);
}

#[test]
fn exponential_integral_values() {
    assert_relative_eq!(
        exp_integral(-1.0).unwrap(),
        -0.21938393439552029,
        max_relative = 1e-14
    );
    assert_relative_eq!(
        exp_integral_e1(1.0).unwrap(),
        0.21938393439552029,
        max_relative = 1e-14
    );
    assert!(exp_integral(1.0).is_err());
    assert_relative_eq!(
        exp_integral(-10.0).unwrap(),
        -4.156968929685324e-6,
        max_relative = 1e-13
    );
}
