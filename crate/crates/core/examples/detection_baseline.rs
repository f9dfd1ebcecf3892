//! The warden's optimal radiometer threshold and minimum detection error at
//! the baseline operating point, for both relay power policies.
//!
//! cargo run --example detection_baseline

use covert_relay::detection::{min_detection_error, Radiometer};
use covert_relay::scenario::{Link, SchemeConfig, SystemParams};

fn main() -> covert_relay::Result<()> {
    let link = Link::reciprocal(SystemParams::baseline(), 1.0)?;
    println!(
        "mu = {:.6}  phi = {:.6}  eta = {:.6}",
        link.consts.mu, link.consts.phi, link.consts.eta
    );

    for scheme in [
        SchemeConfig::RateControl { q: 0.1 },
        SchemeConfig::PowerControl { p_delta: 0.1 },
    ] {
        let report = min_detection_error(&link, &scheme)?;
        println!(
            "{:>5}: tau* = {:.6}  alpha = {:.6}  beta = {:.6}  omega = {:.6}  xi* = {:.6}",
            scheme.name(),
            report.tau_star,
            report.alpha,
            report.beta,
            report.omega,
            report.xi_star
        );

        // The detection error as a function of the threshold, around tau*.
        let radiometer = Radiometer::new(&link, &scheme)?;
        for factor in [0.8, 0.9, 1.0, 1.1, 1.2] {
            let tau = report.tau_star * factor;
            println!("        xi({tau:.4}) = {:.6}", radiometer.xi(tau));
        }
    }
    Ok(())
}
