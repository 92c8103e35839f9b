//! File formats: scenario TOML, dataset text, model JSON, PLY clouds and CSV reports.

mod dataset;
mod model;
mod ply;
mod report;
mod scenario;

pub use dataset::{parse_dataset, read_dataset, write_dataset, write_dataset_to, DATASET_HEADER};
pub use model::{model_from_json, model_to_json, read_model, write_model, MODEL_FORMAT, MODEL_VERSION};
pub use ply::{export_ply, read_ply, write_ply_to};
pub use report::{write_confusion, write_history, write_k_sweep, write_metrics, METRICS_VERSION};
pub use scenario::{parse_scenario, read_scenario, scenario_to_string, write_scenario};

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::error::Result;

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path)?))
}

fn finish(mut w: BufWriter<File>) -> Result<()> {
    w.flush()?;
    Ok(())
}
