//! Self-checks run by `cslam validate` against a scenario.

use std::cmp::Ordering;

use crate::error::Result;
use crate::estimation::NoiseConfig;
use crate::geometry::SPEED_OF_LIGHT;
use crate::localization::{track_errors, BsmModel, ImuModel};
use crate::raytracer::{path_rank, snapshot, ChannelSnapshot};
use crate::reflector::{
    residuals_multi, solve_closed_form, solve_parametric, FirstOrderObservation, MultiBounceCandidate,
};
use crate::slam::{run, OracleClassifier, Scenario};

#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> CheckResult {
    CheckResult { name, passed, detail }
}

/// Traces every step of the scenario and checks the channel, solver,
/// tracking and mapping invariants.
pub fn check_scenario(scenario: &Scenario) -> Result<Vec<CheckResult>> {
    let mesh = scenario.validate()?;
    let snaps: Vec<ChannelSnapshot> = scenario
        .trajectories
        .uav
        .iter()
        .enumerate()
        .map(|(t, &uav)| snapshot(scenario.gmt_at(t), uav, &mesh, &scenario.channel))
        .collect();
    let paths = snaps.iter().flat_map(|s| s.paths.iter().map(move |p| (s, p)));
    let mut out = vec![check(
        "scenario-structure",
        true,
        format!("{} steps, {} facets", snaps.len(), mesh.len()),
    )];

    let (mut on_facet, mut delay, mut residual, mut total) = (0.0f64, 0.0f64, 0.0f64, 0usize);
    for (s, p) in paths.clone() {
        total += 1;
        for (q, id) in p.reflection_points.iter().zip(&p.facet_ids) {
            on_facet = on_facet.max(mesh.facet(*id).map_or(f64::INFINITY, |f| f.distance_to(*q)));
        }
        let length: f64 = p.vertices(s.gmt_pos, s.uav_pos).windows(2).map(|w| w[0].distance(w[1])).sum();
        delay = delay.max((p.delay * SPEED_OF_LIGHT - length).abs() / length);
        if p.order > 0 {
            let cand = MultiBounceCandidate::from_path(p, s.gmt_pos, s.uav_pos, &mesh)?;
            let r = residuals_multi(&cand)?;
            residual = residual.max(r.iter().fold(0.0, |m, x| m.max(x.abs())));
        }
    }
    out.push(check(
        "reflection-points-on-facets",
        on_facet < 1e-9,
        format!("{total} paths, max distance {on_facet:.3e} m"),
    ));
    out.push(check("delay-matches-length", delay < 1e-12, format!("max relative error {delay:.3e}")));
    out.push(check(
        "constraint-residuals",
        residual < 1e-8,
        format!("max residual {residual:.3e}"),
    ));

    let sorted = snaps
        .iter()
        .all(|s| s.paths.windows(2).all(|w| path_rank(&w[0], &w[1]) != Ordering::Greater));
    out.push(check("paths-ranked", sorted, "by SNR, then delay, then facets".into()));

    let (mut worst, mut singular, mut first) = (0.0f64, 0usize, 0usize);
    for (s, p) in paths.filter(|(_, p)| p.order == 1) {
        first += 1;
        let obs = FirstOrderObservation::from_path(p, s.gmt_pos, s.uav_pos);
        let truth = p.reflection_points[0];
        let para = solve_parametric(&obs)?;
        worst = worst.max(para.distance(truth));
        match solve_closed_form(&obs) {
            Ok(c) => worst = worst.max(c.distance(truth)).max(c.distance(para)),
            Err(e) if e.is_numerical() => singular += 1,
            Err(e) => return Err(e),
        }
    }
    out.push(check(
        "first-order-solvers",
        worst < 1e-6,
        format!("{first} first-order paths, max error {worst:.3e} m, {singular} singular for the closed form"),
    ));

    let pose = track_errors(
        ImuModel::ideal(),
        BsmModel::ideal(),
        scenario.run.t_c as u64,
        &scenario.trajectories.uav,
    )?
    .into_iter()
    .fold(0.0, f64::max);
    out.push(check("hpc-ideal-sensors", pose < 1e-9, format!("max pose error {pose:.3e} m")));

    let mut quiet = scenario.clone();
    quiet.noise = NoiseConfig::zero();
    quiet.imu = ImuModel::ideal();
    quiet.bsm = BsmModel::ideal();
    let report = run(&quiet, &OracleClassifier)?;
    out.push(match report.metrics {
        None => check("oracle-mapping", true, "no first-order steps, empty map".into()),
        Some(m) => {
            let mse = m.point_mse.unwrap_or(0.0);
            check(
                "oracle-mapping",
                mse < 1e-6 && m.surface.max < 1e-6,
                format!("{} points, point_mse {mse:.3e} m, max surface distance {:.3e} m", m.paired, m.surface.max),
            )
        }
    });

    let again = run(&quiet, &OracleClassifier)?;
    out.push(check("deterministic-run", again == report, "two runs compared".into()));
    Ok(out)
}
