//! Drive the experiment runner from an in-memory scenario and print the CSV
//! it would write, plus the matching plot script header.
//!
//! cargo run --release --example scenario_sweep

use covert_relay::expcli::plot;
use covert_relay::expcli::runner::{optimize, sweep};
use covert_relay::expcli::{RunOptions, ScenarioFile};

const SCENARIO: &str = "
scheme = both
q = 0.1
p_delta = 0.1

[sweep]
variable = p_r_max_db
start = 0
stop = 20
points = 5
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let sc = ScenarioFile::parse(SCENARIO)?;
    let detection = sweep(&sc, &RunOptions::default())?;
    print!("{}", detection.table.to_csv());
    for w in &detection.warnings {
        eprintln!("warning: {w}");
    }

    let best = optimize(&sc)?;
    println!();
    print!("{}", best.table.to_csv());

    let script = plot::render(&best.plot, "optimum.csv");
    println!(
        "\n{}",
        script.lines().take(12).collect::<Vec<_>>().join("\n")
    );
    Ok(())
}
