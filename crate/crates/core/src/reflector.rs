//! Reflection-point geometry.
//!
//! A first-order reflection point `P` seen from the UAV at `R` with arrival
//! angles `(theta, phi)` and total delay `tau` from the GMT at `G` satisfies
//!
//! ```text
//! (y_P - y_R) / (x_P - x_R)              = tan(phi)
//! (z_P - z_R) / |(x_P - x_R, y_P - y_R)| = tan(pi/2 - theta)
//! |P - R| + |P - G|                      = c tau
//! ```
//!
//! [`solve_closed_form`] evaluates the explicit coordinate expressions for
//! this system, with the sign of the square-root branch picked from the
//! azimuth. [`solve_parametric`] solves the same system along the arrival
//! ray, `P = R + d u`, and is used by the mapping pipeline because it has no
//! `tan`/`cot` singularities.
//!
//! For `N >= 2` bounces the analogous constraint system is under-determined;
//! [`proposition1_family`] builds a one-parameter family of distinct valid
//! solutions when two consecutive reflectors are parallel.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{unit_direction, Aoa, SceneMesh, Vec3, SPEED_OF_LIGHT};
use crate::raytracer::PropagationPath;

/// `sin(theta)` or `|cos(phi)|` at or below this routes away from the
/// closed-form solver.
pub const SINGULAR_EPS: f64 = 1e-9;

/// Known quantities of a first-order link.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FirstOrderObservation {
    pub uav: Vec3,
    pub gmt: Vec3,
    /// Total delay, seconds.
    pub tau: f64,
    pub aoa: Aoa,
}

impl FirstOrderObservation {
    pub fn new(uav: Vec3, gmt: Vec3, tau: f64, aoa: Aoa) -> Self {
        FirstOrderObservation { uav, gmt, tau, aoa }
    }

    /// Observation of the first reflection of a traced first-order path.
    pub fn from_path(path: &PropagationPath, gmt: Vec3, uav: Vec3) -> Self {
        FirstOrderObservation::new(uav, gmt, path.delay, path.aoa)
    }

    pub fn path_length(&self) -> f64 {
        SPEED_OF_LIGHT * self.tau
    }

    fn check_feasible(&self) -> Result<f64> {
        let length = self.path_length();
        let baseline = self.uav.distance(self.gmt);
        if !(length > baseline) || !length.is_finite() {
            return Err(Error::InfeasibleDelay {
                path_length: length,
                baseline,
            });
        }
        Ok(length)
    }
}

/// True when the `+` branch of the closed form applies, i.e. `phi` lies in
/// `[-pi/2, pi/2]` and the reflection point is not behind the UAV in x.
pub fn plus_branch(phi: f64) -> bool {
    (-std::f64::consts::FRAC_PI_2..=std::f64::consts::FRAC_PI_2).contains(&phi)
}

pub fn solve_closed_form(obs: &FirstOrderObservation) -> Result<Vec3> {
    solve_closed_form_branch(obs, plus_branch(obs.aoa.phi))
}

/// Closed form with the sign chosen by the caller instead of by `phi`.
pub fn solve_closed_form_branch(obs: &FirstOrderObservation, plus: bool) -> Result<Vec3> {
    let ct = obs.check_feasible()?;
    let (theta, phi) = (obs.aoa.theta, obs.aoa.phi);
    if theta.sin() <= SINGULAR_EPS {
        return Err(Error::SingularGeometry(format!("sin(theta) = {:e}", theta.sin())));
    }
    if phi.cos().abs() <= SINGULAR_EPS {
        return Err(Error::SingularGeometry(format!("cos(phi) = {:e}", phi.cos())));
    }
    let tan_phi = phi.tan();
    let cot_theta = theta.cos() / theta.sin();
    let sec = (1.0 + tan_phi * tan_phi).sqrt();
    let a = ((1.0 + tan_phi * tan_phi) * (1.0 + cot_theta * cot_theta)).sqrt();
    let s = if plus { 1.0 } else { -1.0 };

    let (r, g) = (obs.uav, obs.gmt);
    let dy = r.y - g.y;
    let dz = r.z - g.z;
    let numerator = ct * ct + r.x * r.x - g.x * g.x - dy * dy - dz * dz
        + 2.0 * (dy * tan_phi + s * dz * cot_theta * sec + s * ct * a) * r.x;
    let denominator = 2.0 * (s * ct * a + r.x - g.x + s * dz * cot_theta * sec + dy * tan_phi);
    if denominator.abs() < 1e-300 || !denominator.is_finite() {
        return Err(Error::SingularGeometry("vanishing denominator".into()));
    }
    let x = numerator / denominator;
    let y = r.y + tan_phi * (x - r.x);
    let z = r.z + s * cot_theta * (x - r.x) * sec;
    Ok(Vec3::new(x, y, z))
}

/// Point on the arrival ray whose two focal distances sum to `c tau`:
/// `d = (L^2 - |G-R|^2) / (2 (L - u.(G-R)))`, `P = R + d u`.
pub fn solve_parametric(obs: &FirstOrderObservation) -> Result<Vec3> {
    let length = obs.check_feasible()?;
    let u = unit_direction(obs.aoa);
    let v = obs.gmt - obs.uav;
    let d = (length * length - v.norm_squared()) / (2.0 * (length - u.dot(v)));
    Ok(obs.uav + u * d)
}

/// Residuals of the three first-order constraints at a candidate point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrderResiduals {
    /// `(y_P - y_R) - tan(phi)(x_P - x_R)`
    pub azimuth: f64,
    /// `(z_P - z_R)/horizontal - tan(pi/2 - theta)`; NaN when degenerate.
    pub elevation: f64,
    /// `|P - R| + |P - G| - c tau`
    pub delay: f64,
}

impl FirstOrderResiduals {
    pub fn elevation_degenerate(&self) -> bool {
        self.elevation.is_nan()
    }

    pub fn max_abs(&self) -> f64 {
        [self.azimuth, self.elevation, self.delay]
            .iter()
            .filter(|r| !r.is_nan())
            .fold(0.0f64, |m, r| m.max(r.abs()))
    }
}

pub fn residuals_first(obs: &FirstOrderObservation, p: Vec3) -> FirstOrderResiduals {
    let d = p - obs.uav;
    let horizontal = d.horizontal_norm();
    let elevation = if horizontal < 1e-12 {
        f64::NAN
    } else {
        d.z / horizontal - (std::f64::consts::FRAC_PI_2 - obs.aoa.theta).tan()
    };
    FirstOrderResiduals {
        azimuth: d.y - obs.aoa.phi.tan() * d.x,
        elevation,
        delay: p.distance(obs.uav) + p.distance(obs.gmt) - obs.path_length(),
    }
}

/// Unknowns of the `N`-bounce constraint system together with the knowns.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiBounceCandidate {
    pub gmt: Vec3,
    pub uav: Vec3,
    pub points: Vec<Vec3>,
    /// Reflector normals, oriented towards the side the path travels on.
    pub normals: Vec<Vec3>,
    pub tau: f64,
    pub aoa: Aoa,
}

impl MultiBounceCandidate {
    /// Candidate built from a traced path and the normals of its facets.
    pub fn from_path(path: &PropagationPath, gmt: Vec3, uav: Vec3, mesh: &SceneMesh) -> Result<Self> {
        let vertices = path.vertices(gmt, uav);
        let mut normals = Vec::with_capacity(path.facet_ids.len());
        for (i, id) in path.facet_ids.iter().enumerate() {
            let facet = mesh
                .facet(*id)
                .ok_or_else(|| Error::InvalidPath(format!("unknown facet id {id}")))?;
            let n = facet.unit_normal();
            let towards_prev = vertices[i] - vertices[i + 1];
            normals.push(if n.dot(towards_prev) >= 0.0 { n } else { -n });
        }
        Ok(MultiBounceCandidate {
            gmt,
            uav,
            points: path.reflection_points.clone(),
            normals,
            tau: path.delay,
            aoa: path.aoa,
        })
    }

    pub fn bounces(&self) -> usize {
        self.points.len()
    }

    fn vertices(&self) -> Vec<Vec3> {
        let mut v = Vec::with_capacity(self.points.len() + 2);
        v.push(self.gmt);
        v.extend_from_slice(&self.points);
        v.push(self.uav);
        v
    }

    pub fn path_length(&self) -> f64 {
        self.vertices().windows(2).map(|w| w[0].distance(w[1])).sum()
    }
}

/// Index helpers for the frozen residual layout of [`residuals_multi`].
pub mod layout {
    pub const DELAY: usize = 0;
    pub fn specular(i: usize) -> usize {
        1 + i
    }
    pub fn half_vector(n: usize, i: usize) -> usize {
        1 + n + i
    }
    pub fn unit_norm(n: usize, i: usize) -> usize {
        1 + 2 * n + i
    }
    pub fn azimuth(n: usize) -> usize {
        1 + 3 * n
    }
    pub fn elevation(n: usize) -> usize {
        2 + 3 * n
    }
}

/// All `3N + 3` residuals of the multi-bounce constraint system, in order:
///
/// 1. total length minus `c tau`;
/// 2. per bounce, `<in_i, m_i> - <out_i, m_i>` where `in_i` is the unit
///    vector from `P_{i-1}` to `P_i` and `out_i` from `P_{i+1}` to `P_i`;
/// 3. per bounce, the unit bisector of the directions from `P_i` towards
///    its two neighbours dotted with `m_i`, minus one;
/// 4. per bounce, `|m_i| - 1`;
/// 5. `(y_N - y_{N+1}) cos(phi) - (x_N - x_{N+1}) sin(phi)`;
/// 6. `(z_N - z_{N+1}) sin(theta) - horizontal(P_N - P_{N+1}) cos(theta)`.
///
/// The two angle rows are the `tan` / `cot` ratio constraints multiplied
/// through by `cos(phi)` and `sin(theta)`, so they stay finite at
/// `phi = +-pi/2` and at the poles.
pub fn residuals_multi(cand: &MultiBounceCandidate) -> Result<Vec<f64>> {
    let n = cand.points.len();
    if cand.normals.len() != n {
        return Err(Error::ShapeMismatch {
            expected: n,
            got: cand.normals.len(),
        });
    }
    let v = cand.vertices();
    for i in 0..v.len() - 1 {
        if v[i].distance(v[i + 1]) == 0.0 {
            return Err(Error::DegenerateSegment(i, i + 1));
        }
    }
    let unit = |a: Vec3, b: Vec3| (b - a) / a.distance(b);

    let mut out = vec![0.0; 3 * n + 3];
    out[layout::DELAY] = cand.path_length() - SPEED_OF_LIGHT * cand.tau;
    for i in 1..=n {
        let m = cand.normals[i - 1];
        let incoming = unit(v[i - 1], v[i]);
        let outgoing = unit(v[i + 1], v[i]);
        out[layout::specular(i - 1)] = incoming.dot(m) - outgoing.dot(m);
        let bisector = -(incoming + outgoing);
        out[layout::half_vector(n, i - 1)] = match bisector.normalized() {
            Some(b) => b.dot(m) - 1.0,
            None => -1.0,
        };
        out[layout::unit_norm(n, i - 1)] = m.norm() - 1.0;
    }
    let d = v[n] - v[n + 1];
    let (sin_phi, cos_phi) = cand.aoa.phi.sin_cos();
    let (sin_theta, cos_theta) = cand.aoa.theta.sin_cos();
    out[layout::azimuth(n)] = d.y * cos_phi - d.x * sin_phi;
    out[layout::elevation(n)] = d.z * sin_theta - d.horizontal_norm() * cos_theta;
    Ok(out)
}

/// Translates both reflection points of a double bounce between parallel
/// reflectors by `d` along the direction from `P_1` towards the GMT.
///
/// Two parallel mirrors return a ray to its original direction, so the
/// last hop arrives along the same direction the first hop leaves in. Moving
/// both reflectors (and hence both points) by the same vector along that
/// direction keeps every angle, the arrival ray and the total length, which
/// makes the result a distinct solution of the same constraint system.
pub fn proposition1_family(base: &MultiBounceCandidate, d: f64) -> Result<MultiBounceCandidate> {
    if base.bounces() != 2 {
        return Err(Error::NotApplicable(format!(
            "requires exactly two bounces, got {}",
            base.bounces()
        )));
    }
    let (m1, m2) = (base.normals[0], base.normals[1]);
    if m1.cross(m2).norm() > 1e-9 {
        return Err(Error::NotApplicable("reflector normals are not parallel".into()));
    }
    if !(d >= 0.0) {
        return Err(Error::NotApplicable(format!("shift {d} must be non-negative")));
    }
    let (p1, p2) = (base.points[0], base.points[1]);
    let first_hop = base.gmt.distance(p1);
    if d >= first_hop {
        return Err(Error::NotApplicable(format!(
            "shift {d} reaches the transmitter ({first_hop} m away)"
        )));
    }
    let w = (base.gmt - p1) / first_hop;
    let mut out = base.clone();
    out.points = vec![p1 + w * d, p2 + w * d];
    Ok(out)
}
