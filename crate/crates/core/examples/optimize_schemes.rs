//! Covertness-constrained maximum of the effective covert rate as the relay
//! power budget grows, for both policies.
//!
//! cargo run --release --example optimize_schemes

use covert_relay::optimizer::{maximize_power_control, maximize_rate_control};
use covert_relay::scenario::{db_to_linear, Link, SystemParams};

fn main() -> covert_relay::Result<()> {
    println!(
        "{:>8} {:>10} {:>10} {:>10} {:>12} {:>10} {:>10}",
        "Pr[dB]", "Q*", "R_c rate", "xi rate", "P_delta*", "R_c power", "xi power"
    );
    for db in (0..=30).step_by(3) {
        let params = SystemParams {
            p_r_max: db_to_linear(db as f64),
            ..SystemParams::baseline()
        };
        let link = Link::reciprocal(params, 1.0)?;
        let rate = maximize_rate_control(&link)?;
        let power = maximize_power_control(&link)?;
        println!(
            "{db:>8} {:>10.4} {:>10.5} {:>10.4} {:>12.4} {:>10.5} {:>10.4}",
            rate.parameter(),
            rate.r_c,
            rate.detection.xi_star,
            power.parameter(),
            power.r_c,
            power.detection.xi_star
        );
    }
    Ok(())
}
