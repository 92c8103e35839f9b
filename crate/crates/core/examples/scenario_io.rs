//! Write a builtin scenario to TOML, edit it, and run the edited copy.
//!
//! Run with `cargo run --example scenario_io`.

use cslam::io::{parse_scenario, scenario_to_string};
use cslam::scenes::builtin_scenario;
use cslam::slam::{run, OracleClassifier};

fn main() -> cslam::Result<()> {
    let text = scenario_to_string(&builtin_scenario("single-wall")?)?;
    for line in text.lines().take(20) {
        let shown: String = line.chars().take(72).collect();
        println!("{shown}{}", if shown.len() < line.len() { " ..." } else { "" });
    }
    println!("... ({} lines)", text.lines().count());

    let mut edited = parse_scenario(&text)?;
    edited.run.master_seed = 99;
    edited.noise = edited.noise.scaled(0.5);
    let report = run(&edited, &OracleClassifier)?;
    println!("edited scenario maps {} points", report.map.len());
    Ok(())
}
