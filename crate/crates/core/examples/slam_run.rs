//! Full mapping loop on a builtin scenario with the oracle classifier and
//! with a freshly trained one.
//!
//! Run with `cargo run --release --example slam_run`.

use cslam::estimation::LinkState;
use cslam::lscn::{train, TrainConfig};
use cslam::scenes::builtin_scenario;
use cslam::slam::{run, scenario_dataset, OracleClassifier, RunReport};

fn summary(label: &str, r: &RunReport) {
    let mean_pose = r.pose_errors.iter().sum::<f64>() / r.pose_errors.len() as f64;
    print!("{label:<8} {} points, mean pose error {mean_pose:.3} m", r.map.len());
    if let Some(m) = &r.metrics {
        print!(", point_mse {:.4} m, {} unpaired", m.point_mse.unwrap_or(f64::NAN), m.unpaired);
    }
    println!();
}

fn main() -> cslam::Result<()> {
    let scenario = builtin_scenario("two-buildings")?;
    summary("oracle", &run(&scenario, &OracleClassifier)?);

    let cfg = TrainConfig {
        epochs: 30,
        batch_size: 64,
        ..scenario.lscn.train
    };
    let (model, _) = train(&scenario_dataset(&scenario)?, &cfg, &scenario.lscn.architecture, None)?;
    let report = run(&scenario, &model)?;
    summary("lscn", &report);

    println!("confusion (rows true, columns predicted):");
    for (state, row) in LinkState::ALL.iter().zip(&report.confusion) {
        println!("  {:<18} {row:?}", state.name());
    }
    Ok(())
}
