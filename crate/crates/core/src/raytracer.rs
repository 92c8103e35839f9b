//! Image-method tracer for LOS, single- and double-bounce specular paths.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    aoa_from_points, mirror_point, segment_facet_param, segment_occluded, Aoa, Facet, SceneMesh,
    Vec3, SPEED_OF_LIGHT,
};

/// Highest bounce order the tracer generates.
pub const MAX_SUPPORTED_ORDER: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ChannelConfig {
    pub tx_power_dbm: f64,
    pub carrier_hz: f64,
    /// Loss applied per specular bounce, dB.
    pub reflection_loss_db: f64,
    pub noise_floor_dbm: f64,
    pub max_order: u32,
}

impl Default for ChannelConfig {
    fn default() -> Self {
        ChannelConfig {
            tx_power_dbm: 30.0,
            carrier_hz: 30e9,
            reflection_loss_db: 10.0,
            noise_floor_dbm: -90.0,
            max_order: 2,
        }
    }
}

impl ChannelConfig {
    pub fn wavelength(&self) -> f64 {
        SPEED_OF_LIGHT / self.carrier_hz
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.carrier_hz > 0.0 && self.carrier_hz.is_finite()) {
            return Err(Error::InvalidConfig("carrier_hz must be positive".into()));
        }
        if !(self.reflection_loss_db > 0.0) {
            return Err(Error::InvalidConfig("reflection_loss_db must be positive".into()));
        }
        if self.max_order > MAX_SUPPORTED_ORDER {
            return Err(Error::InvalidConfig(format!(
                "max_order {} exceeds the supported order {MAX_SUPPORTED_ORDER}",
                self.max_order
            )));
        }
        Ok(())
    }
}

/// One propagation path (communication link) from the GMT to the UAV.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagationPath {
    /// 0 = LOS, 1 = first-order NLOS, 2 = second-order NLOS.
    pub order: u32,
    /// Reflection points in propagation order (GMT side first).
    pub reflection_points: Vec<Vec3>,
    pub facet_ids: Vec<u32>,
    pub delay: f64,
    /// Arrival direction at the UAV (towards the last vertex before it).
    pub aoa: Aoa,
    /// Departure direction at the GMT.
    pub aod: Aoa,
    pub snr_db: f64,
    pub path_length: f64,
}

impl PropagationPath {
    fn from_vertices(gmt: Vec3, uav: Vec3, points: Vec<Vec3>, facet_ids: Vec<u32>) -> Result<Self> {
        let mut length = 0.0;
        let mut prev = gmt;
        for &p in points.iter().chain(std::iter::once(&uav)) {
            length += prev.distance(p);
            prev = p;
        }
        let first = points.first().copied().unwrap_or(uav);
        let last = points.last().copied().unwrap_or(gmt);
        Ok(PropagationPath {
            order: points.len() as u32,
            aoa: aoa_from_points(uav, last)?,
            aod: aoa_from_points(gmt, first)?,
            reflection_points: points,
            facet_ids,
            delay: length / SPEED_OF_LIGHT,
            snr_db: f64::NAN,
            path_length: length,
        })
    }

    /// All path vertices: GMT, reflection points, UAV.
    pub fn vertices(&self, gmt: Vec3, uav: Vec3) -> Vec<Vec3> {
        let mut v = Vec::with_capacity(self.reflection_points.len() + 2);
        v.push(gmt);
        v.extend_from_slice(&self.reflection_points);
        v.push(uav);
        v
    }
}

/// All traced paths at one time step, strongest first.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSnapshot {
    pub paths: Vec<PropagationPath>,
    pub gmt_pos: Vec3,
    pub uav_pos: Vec3,
    pub time_step: u64,
}

impl ChannelSnapshot {
    pub fn strongest(&self) -> Option<&PropagationPath> {
        self.paths.first()
    }
}

pub fn trace_los(gmt: Vec3, uav: Vec3, mesh: &SceneMesh) -> Option<PropagationPath> {
    if gmt == uav || segment_occluded(gmt, uav, mesh, &BTreeSet::new()) {
        return None;
    }
    PropagationPath::from_vertices(gmt, uav, Vec::new(), Vec::new()).ok()
}

/// Returns the point where the segment `a -> b` crosses `facet`, when `a` and
/// `b` lie strictly on opposite sides of its plane.
fn crossing(a: Vec3, b: Vec3, facet: &Facet) -> Option<Vec3> {
    let s = segment_facet_param(a, b, facet)?;
    (s > 0.0 && s < 1.0).then(|| a + (b - a) * s)
}

fn on_plane(p: Vec3, facet: &Facet) -> bool {
    facet.signed_distance(p).abs() < 1e-9
}

fn unblocked(a: Vec3, b: Vec3, mesh: &SceneMesh, ignore: &[u32]) -> bool {
    let ignore: BTreeSet<u32> = ignore.iter().copied().collect();
    !segment_occluded(a, b, mesh, &ignore)
}

pub fn trace_first_order(gmt: Vec3, uav: Vec3, mesh: &SceneMesh) -> Vec<PropagationPath> {
    let mut out = Vec::new();
    if gmt == uav {
        return out;
    }
    for f in mesh.facets() {
        if on_plane(gmt, f) || on_plane(uav, f) {
            continue;
        }
        let image = mirror_point(gmt, f);
        let Some(p) = crossing(image, uav, f) else {
            continue;
        };
        if unblocked(gmt, p, mesh, &[f.id()]) && unblocked(p, uav, mesh, &[f.id()]) {
            if let Ok(path) = PropagationPath::from_vertices(gmt, uav, vec![p], vec![f.id()]) {
                out.push(path);
            }
        }
    }
    out
}

pub fn trace_second_order(gmt: Vec3, uav: Vec3, mesh: &SceneMesh) -> Vec<PropagationPath> {
    let mut out = Vec::new();
    if gmt == uav {
        return out;
    }
    let facets = mesh.facets();
    for f1 in facets {
        if on_plane(gmt, f1) {
            continue;
        }
        let image1 = mirror_point(gmt, f1);
        for f2 in facets {
            if f1.id() == f2.id() || on_plane(uav, f2) || on_plane(image1, f2) {
                continue;
            }
            let image2 = mirror_point(image1, f2);
            let Some(p2) = crossing(image2, uav, f2) else {
                continue;
            };
            let Some(p1) = crossing(image1, p2, f1) else {
                continue;
            };
            if p1.distance(p2) < 1e-9 {
                continue;
            }
            if unblocked(gmt, p1, mesh, &[f1.id()])
                && unblocked(p1, p2, mesh, &[f1.id(), f2.id()])
                && unblocked(p2, uav, mesh, &[f2.id()])
            {
                if let Ok(path) =
                    PropagationPath::from_vertices(gmt, uav, vec![p1, p2], vec![f1.id(), f2.id()])
                {
                    out.push(path);
                }
            }
        }
    }
    out
}

/// Free-space SNR with a flat per-bounce loss:
/// `tx - 20 log10(4 pi L / lambda) - order * loss - noise_floor`.
pub fn snr_model(path_length: f64, order: u32, cfg: &ChannelConfig) -> Result<f64> {
    if !(path_length > 0.0) || !path_length.is_finite() {
        return Err(Error::InvalidPath(format!("path length {path_length} is not positive")));
    }
    let fspl = 20.0 * (4.0 * PI * path_length / cfg.wavelength()).log10();
    Ok(cfg.tx_power_dbm - fspl - order as f64 * cfg.reflection_loss_db - cfg.noise_floor_dbm)
}

/// Strongest first; ties broken by shorter delay, then by facet-id tuple.
pub fn path_rank(a: &PropagationPath, b: &PropagationPath) -> Ordering {
    b.snr_db
        .total_cmp(&a.snr_db)
        .then(a.delay.total_cmp(&b.delay))
        .then_with(|| a.facet_ids.cmp(&b.facet_ids))
}

pub fn snapshot(gmt: Vec3, uav: Vec3, mesh: &SceneMesh, cfg: &ChannelConfig) -> ChannelSnapshot {
    let mut paths = Vec::new();
    if gmt != uav {
        paths.extend(trace_los(gmt, uav, mesh));
        if cfg.max_order >= 1 {
            paths.extend(trace_first_order(gmt, uav, mesh));
        }
        if cfg.max_order >= 2 {
            paths.extend(trace_second_order(gmt, uav, mesh));
        }
    }
    for p in &mut paths {
        // lengths are positive for gmt != uav
        p.snr_db = snr_model(p.path_length, p.order, cfg).unwrap_or(f64::NEG_INFINITY);
    }
    paths.sort_by(path_rank);
    ChannelSnapshot {
        paths,
        gmt_pos: gmt,
        uav_pos: uav,
        time_step: 0,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Facet;
    use crate::reflector::{residuals_multi, MultiBounceCandidate};

    fn ground(id: u32, half: f64) -> Facet {
        Facet::parallelogram(
            id,
            Vec3::new(-half, -half, 0.0),
            Vec3::new(2.0 * half, 0.0, 0.0),
            Vec3::new(0.0, 2.0 * half, 0.0),
        )
        .unwrap()
    }

    fn wall_x(id: u32, x: f64, ylo: f64, yhi: f64) -> Facet {
        Facet::parallelogram(
            id,
            Vec3::new(x, ylo, 0.0),
            Vec3::new(0.0, yhi - ylo, 0.0),
            Vec3::new(0.0, 0.0, 5.0),
        )
        .unwrap()
    }

    fn wall_y(id: u32, y: f64, xlo: f64, xhi: f64) -> Facet {
        Facet::parallelogram(
            id,
            Vec3::new(xlo, y, 0.0),
            Vec3::new(0.0, 0.0, 5.0),
            Vec3::new(xhi - xlo, 0.0, 0.0),
        )
        .unwrap()
    }

    #[test]
    fn los_in_open_field() {
        let p = trace_los(Vec3::new(0.0, 0.0, 1.0), Vec3::new(3.0, 4.0, 1.0), &SceneMesh::empty()).unwrap();
        assert_eq!(p.order, 0);
        assert!((p.path_length - 5.0).abs() < 1e-12);
        assert!((p.delay - 5.0 / SPEED_OF_LIGHT).abs() < 1e-24);
    }

    #[test]
    fn los_blocked_by_wall() {
        let mesh = SceneMesh::new(vec![wall_x(0, 0.0, -5.0, 5.0)]).unwrap();
        assert!(trace_los(Vec3::new(-1.0, 0.0, 1.0), Vec3::new(1.0, 0.0, 1.0), &mesh).is_none());
    }

    #[test]
    fn ground_bounce_mirror_symmetry() {
        let mesh = SceneMesh::new(vec![ground(0, 10.0)]).unwrap();
        let paths = trace_first_order(Vec3::new(0.0, 0.0, 1.0), Vec3::new(2.0, 0.0, 1.0), &mesh);
        assert_eq!(paths.len(), 1);
        let p = &paths[0];
        assert!(p.reflection_points[0].distance(Vec3::new(1.0, 0.0, 0.0)) < 1e-12);
        assert!((p.path_length - 2.0 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn facet_missed_by_image_ray() {
        // wall behind both endpoints, too short to contain the specular point
        let mesh = SceneMesh::new(vec![wall_x(0, -3.0, 5.0, 6.0)]).unwrap();
        let paths = trace_first_order(Vec3::new(0.0, 0.0, 1.0), Vec3::new(2.0, 0.0, 1.0), &mesh);
        assert!(paths.is_empty());
    }

    #[test]
    fn parallel_walls_double_bounce() {
        let mesh = SceneMesh::new(vec![wall_x(0, 0.0, -10.0, 10.0), wall_x(1, 4.0, -10.0, 10.0)]).unwrap();
        let gmt = Vec3::new(1.0, 0.0, 1.0);
        let uav = Vec3::new(3.0, 0.0, 1.0);
        let paths = trace_second_order(gmt, uav, &mesh);
        let p = paths.iter().find(|p| p.facet_ids == vec![0, 1]).expect("x=0 then x=4");
        assert!(p.reflection_points[0].distance(Vec3::new(0.0, 0.0, 1.0)) < 1e-12);
        assert!(p.reflection_points[1].distance(Vec3::new(4.0, 0.0, 1.0)) < 1e-12);
        for path in &paths {
            let cand = MultiBounceCandidate::from_path(path, gmt, uav, &mesh).unwrap();
            let r = residuals_multi(&cand).unwrap();
            assert!(r.iter().all(|x| x.abs() < 1e-9), "{r:?}");
        }
    }

    #[test]
    fn single_facet_has_no_second_order() {
        let mesh = SceneMesh::new(vec![ground(0, 10.0)]).unwrap();
        assert!(trace_second_order(Vec3::new(0.0, 0.0, 1.0), Vec3::new(2.0, 0.0, 1.0), &mesh).is_empty());
    }

    #[test]
    fn corner_reflector() {
        let mesh = SceneMesh::new(vec![wall_x(0, 0.0, 0.0, 5.0), wall_y(1, 0.0, 0.0, 5.0)]).unwrap();
        let gmt = Vec3::new(2.0, 1.0, 1.0);
        let uav = Vec3::new(1.0, 2.0, 1.0);
        let paths = trace_second_order(gmt, uav, &mesh);
        assert_eq!(paths.len(), 1);
        let p = &paths[0];
        assert_eq!(p.facet_ids, vec![1, 0]);
        let incoming = (p.reflection_points[0] - gmt).normalized().unwrap();
        let outgoing = (uav - p.reflection_points[1]).normalized().unwrap();
        assert!((incoming + outgoing).norm() < 1e-9);
    }

    #[test]
    fn snr_friis_slope_and_bounce_loss() {
        let cfg = ChannelConfig::default();
        let a = snr_model(10.0, 1, &cfg).unwrap();
        let b = snr_model(20.0, 1, &cfg).unwrap();
        assert!((a - b - 20.0 * 2f64.log10()).abs() < 1e-12);
        let los = snr_model(10.0, 0, &cfg).unwrap();
        assert!((los - a - cfg.reflection_loss_db).abs() < 1e-12);
        assert!(matches!(snr_model(0.0, 0, &cfg), Err(Error::InvalidPath(_))));
        assert!(snr_model(-1.0, 0, &cfg).is_err());
    }

    #[test]
    fn snr_worked_value() {
        // oracle: direct evaluation of the link budget
        let cfg = ChannelConfig::default();
        let lambda = 299_792_458.0 / 30e9;
        let expected = 30.0 - 20.0 * (4.0 * PI * 41.014 / lambda).log10() - 10.0 + 90.0;
        let got = snr_model(41.014, 1, &cfg).unwrap();
        assert!((got - expected).abs() < 1e-12);
        assert!((got - 15.751).abs() < 1e-3);
    }

    #[test]
    fn open_field_single_los() {
        let s = snapshot(Vec3::new(0.0, 0.0, 1.0), Vec3::new(5.0, 1.0, 3.0), &SceneMesh::empty(), &ChannelConfig::default());
        assert_eq!(s.paths.len(), 1);
        assert_eq!(s.paths[0].order, 0);
    }

    #[test]
    fn los_ranked_first_with_ground() {
        let mesh = SceneMesh::new(vec![ground(0, 50.0), wall_x(1, 10.0, -20.0, 20.0)]).unwrap();
        let s = snapshot(Vec3::new(0.0, 0.0, 1.5), Vec3::new(6.0, 3.0, 4.0), &mesh, &ChannelConfig::default());
        assert!(s.paths.len() >= 3);
        assert_eq!(s.paths[0].order, 0);
        for w in s.paths.windows(2) {
            assert_eq!(path_rank(&w[0], &w[1]), Ordering::Less);
        }
    }

    #[test]
    fn config_validation() {
        let mut c = ChannelConfig::default();
        assert!(c.validate().is_ok());
        c.max_order = 3;
        assert!(c.validate().is_err());
    }
}
