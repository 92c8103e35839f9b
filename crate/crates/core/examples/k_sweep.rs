//! Validation accuracy of the classifier as a function of how many paths
//! it sees.
//!
//! Run with `cargo run --release --example k_sweep`.

use cslam::lscn::{k_sweep, Architecture, TrainConfig};
use cslam::scenes::builtin_scenario;
use cslam::slam::scenario_dataset;

fn main() -> cslam::Result<()> {
    let data = scenario_dataset(&builtin_scenario("two-buildings")?)?;
    let cfg = TrainConfig {
        epochs: 20,
        batch_size: 64,
        ..TrainConfig::default()
    };
    println!("  K  train_acc  val_acc");
    for row in k_sweep(&data, &[1, 3, 5, 7, 9], &cfg, &Architecture::default())? {
        println!("{:>3}  {:>9.4}  {:>7.4}", row.k, row.train_accuracy, row.val_accuracy);
    }
    Ok(())
}
