//! A second-order path between two parallel walls is not pinned down by
//! its delay and angle of arrival: shifting both bounces along the walls
//! gives a continuum of paths with identical observations.
//!
//! Run with `cargo run --example parallel_walls`.

use cslam::geometry::Vec3;
use cslam::raytracer::trace_second_order;
use cslam::reflector::{proposition1_family, residuals_multi, MultiBounceCandidate};
use cslam::scenes::builtin_scene;

fn main() -> cslam::Result<()> {
    let mesh = builtin_scene("parallel-walls")?.mesh;
    let (gmt, uav) = (Vec3::new(1.0, -3.0, 1.2), Vec3::new(3.0, 4.0, 2.5));
    let path = &trace_second_order(gmt, uav, &mesh)[0];
    let base = MultiBounceCandidate::from_path(path, gmt, uav, &mesh)?;
    println!("traced path via facets {:?}, length {:.4} m", path.facet_ids, base.path_length());

    for d in [0.0, 0.4, 0.8, 1.2] {
        let c = if d == 0.0 { base.clone() } else { proposition1_family(&base, d)? };
        let worst = residuals_multi(&c)?.iter().fold(0.0f64, |m, r| m.max(r.abs()));
        let p = &c.points;
        println!(
            "d {d:.1}  P1 ({:.3}, {:.3}, {:.3})  P2 ({:.3}, {:.3}, {:.3})  length {:.4}  max residual {worst:.1e}",
            p[0].x, p[0].y, p[0].z, p[1].x, p[1].y, p[1].z,
            c.path_length()
        );
    }
    Ok(())
}
