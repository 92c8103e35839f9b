//! Turn a traced channel into the noisy K-path estimate a receiver sees.
//!
//! Run with `cargo run --example estimate_paths`.

use cslam::estimation::{estimate, NoiseConfig};
use cslam::geometry::Vec3;
use cslam::raytracer::{snapshot, ChannelConfig};
use cslam::scenes::builtin_scene;

fn main() -> cslam::Result<()> {
    let mesh = builtin_scene("two-buildings")?.mesh;
    let snap = snapshot(Vec3::new(30.0, 20.0, 1.5), Vec3::new(30.0, 40.0, 4.0), &mesh, &ChannelConfig::default());
    let est = estimate(&snap, 5, &NoiseConfig::default(), 42)?;

    println!("link state {}", est.true_link_state.name());
    println!("     tau_hat_ns  theta_hat  phi_hat  snr_db  padded");
    for (i, e) in est.estimates.iter().enumerate() {
        println!(
            "{i:>3}  {:>9.3}  {:>9.4}  {:>7.4}  {:>6.2}  {}",
            e.tau_hat * 1e9,
            e.theta_hat,
            e.phi_hat,
            e.snr_db,
            e.padded
        );
    }
    println!("classifier input width {}", est.features().len());
    Ok(())
}
