//! Large relay-budget behaviour of rate-control: the detection-error limit
//! and the largest covert power meeting the constraint, compared with the
//! exact minimum detection error at a very large budget.
//!
//! cargo run --example asymptotics

use covert_relay::detection::min_detection_error;
use covert_relay::optimizer::asymptotics;
use covert_relay::scenario::{db_to_linear, Link, SchemeConfig, SystemParams};

fn main() -> covert_relay::Result<()> {
    let base = Link::reciprocal(SystemParams::baseline(), 1.0)?;
    let huge = Link::reciprocal(
        SystemParams {
            p_r_max: db_to_linear(60.0),
            ..SystemParams::baseline()
        },
        1.0,
    )?;
    println!("{:>6} {:>12} {:>14}", "Q", "xi limit", "xi at 60 dB");
    for q in [0.01, 0.1, 1.0, 10.0] {
        let a = asymptotics(&base, q)?;
        let exact = min_detection_error(&huge, &SchemeConfig::RateControl { q })?.xi_star;
        println!("{q:>6} {:>12.6} {exact:>14.6}", a.xi_limit);
    }
    println!(
        "Q_epsilon (epsilon = {}) = {:.6}",
        base.params.epsilon,
        asymptotics(&base, 0.1)?.q_epsilon
    );
    Ok(())
}
