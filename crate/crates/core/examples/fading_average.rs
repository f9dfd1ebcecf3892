//! Average the constrained optimum over Rayleigh source-relay fading at a
//! few source powers. Draws where the relay cannot forward count as zero.
//!
//! cargo run --release --example fading_average

use covert_relay::expcli::runner::average;
use covert_relay::expcli::ScenarioFile;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sc = ScenarioFile::parse(
        "r_sd = 1.5\nscheme = both\n[sweep]\nvariable = p_s_db\nstart = 0\nstop = 40\npoints = 5\n",
    )?;
    let out = average(&sc, 200, 7)?;
    let ps = out.table.numbers("p_s_db");
    let mean = out.table.numbers("r_c_star_mean");
    let se = out.table.numbers("r_c_star_se");
    let scheme = out.table.texts("scheme");
    let fwd = out.table.numbers("forwarding_draws");
    for i in 0..ps.len() {
        println!(
            "P_s = {:>4} dB  {:>5}: R_c* = {:.5} +- {:.5}  ({} of 200 draws forward)",
            ps[i].unwrap(),
            scheme[i],
            mean[i].unwrap(),
            se[i].unwrap_or(0.0),
            fwd[i].unwrap()
        );
    }
    Ok(())
}
