//! Effective covert rate of both policies, checked against an independent
//! adaptive-quadrature evaluation for power-control.
//!
//! cargo run --example covert_rate

use covert_relay::covert_rate::effective_rate;
use covert_relay::montecarlo::quadrature_rate_oracle;
use covert_relay::scenario::{Link, SchemeConfig, SystemParams};

fn main() -> covert_relay::Result<()> {
    let link = Link::reciprocal(SystemParams::baseline(), 1.0)?;

    println!("{:>8} {:>12} {:>12} {:>12}", "Q", "R_delta", "P_C", "R_c");
    for q in [0.01, 0.05, 0.1, 0.5, 1.0] {
        let r = effective_rate(&link, &SchemeConfig::RateControl { q })?;
        println!(
            "{q:>8} {:>12.6} {:>12.6} {:>12.6}",
            r.r_delta.unwrap_or(0.0),
            r.p_c,
            r.r_c
        );
    }

    println!(
        "\n{:>8} {:>14} {:>14} {:>10}",
        "P_delta", "R_c closed", "R_c quad", "|diff|"
    );
    for p_delta in [0.01, 0.05, 0.1, 0.3, 0.6] {
        let closed = effective_rate(&link, &SchemeConfig::PowerControl { p_delta })?.r_c;
        let quad = quadrature_rate_oracle(&link, p_delta)?;
        println!(
            "{p_delta:>8} {closed:>14.10} {quad:>14.10} {:>10.2e}",
            (closed - quad).abs()
        );
    }
    Ok(())
}
