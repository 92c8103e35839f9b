//! Map a scene and write the point cloud as ASCII PLY.
//!
//! Run with `cargo run --example export_ply -- [out.ply]`.

use cslam::io::{export_ply, read_ply};
use cslam::scenes::builtin_scenario;
use cslam::slam::{run, OracleClassifier};

fn main() -> cslam::Result<()> {
    let out = std::env::args().nth(1).unwrap_or_else(|| "box-room.ply".into());
    let report = run(&builtin_scenario("box-room")?, &OracleClassifier)?;
    export_ply(&report.map, &out)?;
    let back = read_ply(&out)?;
    println!("wrote {} points to {out}, read back {}", report.map.len(), back.len());
    Ok(())
}
