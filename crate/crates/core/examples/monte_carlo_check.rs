//! Simulate the relay and the warden and compare every empirical quantity
//! with its closed form, in units of standard error.
//!
//! cargo run --release --example monte_carlo_check

use covert_relay::covert_rate::effective_rate;
use covert_relay::detection::min_detection_error;
use covert_relay::montecarlo::{simulate_detection, EmpiricalReport, SimConfig};
use covert_relay::scenario::{Link, SchemeConfig, SystemParams};

fn main() -> covert_relay::Result<()> {
    let link = Link::reciprocal(SystemParams::baseline(), 1.0)?;
    for scheme in [
        SchemeConfig::RateControl { q: 0.1 },
        SchemeConfig::PowerControl { p_delta: 0.1 },
    ] {
        let det = min_detection_error(&link, &scheme)?;
        let probs = link.probs(&scheme)?;
        let rate = effective_rate(&link, &scheme)?;
        let sim = SimConfig::new(1_000_000, 42, scheme).with_tau(det.tau_star);
        let mc = simulate_detection(&link, &sim)?;
        let se = mc.std_errs;

        println!(
            "{} ({} trials, {} forwarding)",
            scheme.name(),
            mc.n_trials,
            mc.n_forwarding
        );
        let rows = [
            ("alpha", mc.alpha_hat, se.alpha, det.alpha),
            ("beta", mc.beta_hat, se.beta, det.beta),
            ("xi", mc.xi_hat, se.xi, det.xi_star),
            ("omega", mc.omega_hat, se.omega, det.omega),
            ("P_B", mc.p_b_hat, se.p_b, probs.p_b),
            ("P_C", mc.p_c_hat, se.p_c, probs.p_c),
            ("R_c", mc.r_c_hat, se.r_c, rate.r_c),
        ];
        for (name, est, err, want) in rows {
            let z = EmpiricalReport::z_score(est, err, want);
            println!("  {name:>6}: mc = {est:.6} +- {err:.1e}   closed = {want:.6}   z = {z:+.2}");
        }
    }
    Ok(())
}
