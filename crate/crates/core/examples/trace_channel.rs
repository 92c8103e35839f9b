//! Trace the multipath channel between a ground terminal and a UAV.
//!
//! Run with `cargo run --example trace_channel`.

use cslam::geometry::Vec3;
use cslam::raytracer::{snapshot, ChannelConfig};
use cslam::scenes::builtin_scene;

fn main() -> cslam::Result<()> {
    let mesh = builtin_scene("box-room")?.mesh;
    let gmt = Vec3::new(2.0, 2.0, 1.0);
    let uav = Vec3::new(9.0, 6.0, 2.5);
    let snap = snapshot(gmt, uav, &mesh, &ChannelConfig::default());

    println!("{} paths from {:?} to {:?}", snap.paths.len(), gmt.to_array(), uav.to_array());
    println!("order  facets      delay_ns   snr_db  theta   phi");
    for p in snap.paths.iter().take(12) {
        println!(
            "{:>5}  {:<10}  {:>8.3}  {:>7.2}  {:.3}  {:>6.3}",
            p.order,
            format!("{:?}", p.facet_ids),
            p.delay * 1e9,
            p.snr_db,
            p.aoa.theta,
            p.aoa.phi
        );
    }
    Ok(())
}
