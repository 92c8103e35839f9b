//! Dead reckoning with periodic absolute fixes: the pose error resets at
//! every fix and grows in between.
//!
//! Run with `cargo run --example hpc_tracking`.

use cslam::geometry::Vec3;
use cslam::localization::{track_errors, BsmModel, HpcTracker, ImuModel};

fn main() -> cslam::Result<()> {
    let t_c = 10;
    let traj: Vec<Vec3> = (0..=40).map(|t| Vec3::new(0.5 * t as f64, 0.0, 5.0)).collect();

    let mut tracker = HpcTracker::start(ImuModel::default(), BsmModel::default(), t_c, traj[0])?;
    for w in traj.windows(2).take(12) {
        let state = tracker.advance(w[0], w[1])?;
        let e = state.estimate;
        println!("t {:>2}  n {}  estimate ({:>6.3}, {:>6.3}, {:.3})", state.t, state.n, e.x, e.y, e.z);
    }

    let runs = 500;
    let mut rms = vec![0.0; traj.len()];
    for r in 0..runs {
        let imu = ImuModel { rng_seed: 2 * r, ..ImuModel::default() };
        let bsm = BsmModel { rng_seed: 2 * r + 1, ..BsmModel::default() };
        for (acc, e) in rms.iter_mut().zip(track_errors(imu, bsm, t_c, &traj)?) {
            *acc += e * e / runs as f64;
        }
    }
    println!("RMS pose error over {runs} runs:");
    for (t, ms) in rms.iter().enumerate().take(21) {
        let bar = "#".repeat((ms.sqrt() * 100.0) as usize);
        println!("{t:>3}  {:.3}  {bar}", ms.sqrt());
    }
    Ok(())
}
