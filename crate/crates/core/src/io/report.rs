//! CSV reports. Column sets are fixed; the metrics file carries a schema
//! version column.

use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimation::LinkState;
use crate::lscn::{EpochStats, KSweepRow};
use crate::slam::RunReport;

pub const METRICS_VERSION: u32 = 1;

fn write_rows<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<()> {
    let csv_err = |e: csv::Error| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::InvalidConfig(format!("{other:?}")),
    };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    for r in rows {
        w.serialize(r).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Serialize)]
struct MetricsRow {
    version: u32,
    points: usize,
    paired: usize,
    unpaired: usize,
    point_mse_m: Option<f64>,
    point_mse_squared_m2: Option<f64>,
    surface_mean_m: Option<f64>,
    surface_median_m: Option<f64>,
    surface_max_m: Option<f64>,
    mean_pose_error_m: f64,
    max_pose_error_m: f64,
    steps: usize,
    steps_without_paths: usize,
    unsolved: usize,
}

pub fn write_metrics(path: impl AsRef<Path>, report: &RunReport) -> Result<()> {
    let m = report.metrics.as_ref();
    let n = report.pose_errors.len();
    let row = MetricsRow {
        version: METRICS_VERSION,
        points: report.map.len(),
        paired: m.map_or(0, |m| m.paired),
        unpaired: m.map_or(0, |m| m.unpaired),
        point_mse_m: m.and_then(|m| m.point_mse),
        point_mse_squared_m2: m.and_then(|m| m.point_mse_squared),
        surface_mean_m: m.map(|m| m.surface.mean),
        surface_median_m: m.map(|m| m.surface.median),
        surface_max_m: m.map(|m| m.surface.max),
        mean_pose_error_m: report.pose_errors.iter().sum::<f64>() / n.max(1) as f64,
        max_pose_error_m: report.pose_errors.iter().copied().fold(0.0, f64::max),
        steps: n,
        steps_without_paths: report.steps_without_paths,
        unsolved: report.unsolved,
    };
    write_rows(path.as_ref(), [row])
}

#[derive(Serialize)]
struct ConfusionRow {
    true_state: &'static str,
    pred_los: usize,
    pred_first_order_nlos: usize,
    pred_higher_order_nlos: usize,
}

pub fn write_confusion(path: impl AsRef<Path>, confusion: &[[usize; 3]; 3]) -> Result<()> {
    write_rows(
        path.as_ref(),
        LinkState::ALL.iter().map(|s| {
            let r = confusion[s.index()];
            ConfusionRow {
                true_state: s.name(),
                pred_los: r[0],
                pred_first_order_nlos: r[1],
                pred_higher_order_nlos: r[2],
            }
        }),
    )
}

pub fn write_history(path: impl AsRef<Path>, epochs: &[EpochStats]) -> Result<()> {
    write_rows(path.as_ref(), epochs)
}

pub fn write_k_sweep(path: impl AsRef<Path>, rows: &[KSweepRow]) -> Result<()> {
    write_rows(path.as_ref(), rows)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn confusion_layout() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.csv");
        write_confusion(&p, &[[5, 1, 0], [2, 7, 0], [0, 3, 4]]).unwrap();
        let text = std::fs::read_to_string(&p).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "true_state,pred_los,pred_first_order_nlos,pred_higher_order_nlos");
        assert_eq!(lines[2], "first_order_nlos,2,7,0");
        assert_eq!(lines.len(), 4);
    }

    #[test]
    fn sweep_layout() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("k.csv");
        let rows = [KSweepRow {
            k: 3,
            train_accuracy: 0.5,
            val_accuracy: 0.25,
        }];
        write_k_sweep(&p, &rows).unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "k,train_accuracy,val_accuracy\n3,0.5,0.25\n");
    }
}
