//! Generate a labelled dataset from a builtin scene and train the link
//! state classifier on it.
//!
//! Run with `cargo run --release --example train_lscn`.

use cslam::estimation::LinkState;
use cslam::lscn::{train, Architecture, TrainConfig};
use cslam::scenes::builtin_scenario;
use cslam::slam::scenario_dataset;

fn main() -> cslam::Result<()> {
    let scenario = builtin_scenario("two-buildings")?;
    let data = scenario_dataset(&scenario)?;
    let counts = data.class_counts();
    println!("{} snapshots, class counts {counts:?}, majority baseline {:.3}", data.len(), data.majority_baseline());

    let cfg = TrainConfig {
        epochs: 30,
        batch_size: 64,
        ..TrainConfig::default()
    };
    let (_, history) = train(&data, &cfg, &Architecture::default(), None)?;
    for e in history.epochs.iter().step_by(5) {
        println!(
            "epoch {:>3}  train loss {:.4} acc {:.4}  val loss {:.4} acc {:.4}",
            e.epoch, e.train_loss, e.train_accuracy, e.val_loss, e.val_accuracy
        );
    }
    let val = &history.final_val;
    println!("final validation accuracy {:.4}", val.accuracy);
    for (state, r) in LinkState::ALL.iter().zip(val.recall()) {
        println!("  recall {:<18} {r:.3}", state.name());
    }
    Ok(())
}
