//! Recover a first-order reflection point from one delay and angle of
//! arrival, with both solvers, and show the branch choice.
//!
//! Run with `cargo run --example solve_reflection`.

use cslam::geometry::{aoa_from_points, SPEED_OF_LIGHT};
use cslam::reflector::{plus_branch, solve_closed_form, solve_closed_form_branch, solve_parametric, FirstOrderObservation};
use cslam::scenes::{OCCLUDED_WALL_GMT, OCCLUDED_WALL_POINT, OCCLUDED_WALL_UAV};

fn main() -> cslam::Result<()> {
    let (uav, gmt, p) = (OCCLUDED_WALL_UAV, OCCLUDED_WALL_GMT, OCCLUDED_WALL_POINT);
    let tau = (gmt.distance(p) + p.distance(uav)) / SPEED_OF_LIGHT;
    let aoa = aoa_from_points(uav, p)?;
    let obs = FirstOrderObservation::new(uav, gmt, tau, aoa);

    println!("tau {:.6e} s, theta {:.6} rad, phi {:.6} rad", tau, aoa.theta, aoa.phi);
    let closed = solve_closed_form(&obs)?;
    let para = solve_parametric(&obs)?;
    println!("closed form  ({:.2}, {:.2}, {:.2})", closed.x, closed.y, closed.z);
    println!("parametric   ({:.2}, {:.2}, {:.2})", para.x, para.y, para.z);

    let plus = plus_branch(aoa.phi);
    println!("branch {} selected", if plus { "+" } else { "-" });
    match solve_closed_form_branch(&obs, !plus) {
        Ok(q) => println!("other branch gives ({:.2}, {:.2}, {:.2})", q.x, q.y, q.z),
        Err(e) => println!("other branch fails: {e}"),
    }
    Ok(())
}
