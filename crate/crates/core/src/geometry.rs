//! World-frame geometry shared by every other module.
//!
//! Angles follow one convention throughout: `theta` is the polar angle
//! measured from the +Z axis, `phi` the azimuth from +X obtained with
//! `atan2`, wrapped to `(-pi, pi]`. With this choice the arrival direction
//! is `u = (sin(theta)cos(phi), sin(theta)sin(phi), cos(theta))` and the
//! elevation ratio `dz / horizontal` equals `tan(pi/2 - theta) = cot(theta)`.

use std::collections::{BTreeSet, HashSet};
use std::f64::consts::PI;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Vertices may deviate from the facet plane by at most this much (m).
pub const COPLANAR_TOL: f64 = 1e-6;

/// Hit parameters within this distance of a segment end are ignored.
pub const OCCLUSION_EPS: f64 = 1e-6;

/// Minimum ray distance accepted by [`ray_facet_intersect`].
pub const MIN_RAY_DISTANCE: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3::new(0.0, 0.0, 0.0);
    pub const X: Vec3 = Vec3::new(1.0, 0.0, 0.0);
    pub const Y: Vec3 = Vec3::new(0.0, 1.0, 0.0);
    pub const Z: Vec3 = Vec3::new(0.0, 0.0, 1.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn cross(self, o: Vec3) -> Vec3 {
        Vec3::new(
            self.y * o.z - self.z * o.y,
            self.z * o.x - self.x * o.z,
            self.x * o.y - self.y * o.x,
        )
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn norm_squared(self) -> f64 {
        self.dot(self)
    }

    pub fn distance(self, o: Vec3) -> f64 {
        (self - o).norm()
    }

    /// Unit vector in the same direction, or `None` for the zero vector.
    pub fn normalized(self) -> Option<Vec3> {
        let n = self.norm();
        (n > 0.0 && n.is_finite()).then(|| self / n)
    }

    pub fn horizontal_norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn component(self, axis: usize) -> f64 {
        match axis {
            0 => self.x,
            1 => self.y,
            _ => self.z,
        }
    }

    pub fn min(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x.min(o.x), self.y.min(o.y), self.z.min(o.z))
    }

    pub fn max(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x.max(o.x), self.y.max(o.y), self.z.max(o.z))
    }
}

impl From<[f64; 3]> for Vec3 {
    fn from(a: [f64; 3]) -> Self {
        Vec3::new(a[0], a[1], a[2])
    }
}

impl From<Vec3> for [f64; 3] {
    fn from(v: Vec3) -> Self {
        v.to_array()
    }
}

impl fmt::Display for Vec3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match f.precision() {
            Some(p) => write!(f, "({:.*}, {:.*}, {:.*})", p, self.x, p, self.y, p, self.z),
            None => write!(f, "({}, {}, {})", self.x, self.y, self.z),
        }
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl AddAssign for Vec3 {
    fn add_assign(&mut self, o: Vec3) {
        *self = *self + o;
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl SubAssign for Vec3 {
    fn sub_assign(&mut self, o: Vec3) {
        *self = *self - o;
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Vec3> for f64 {
    type Output = Vec3;
    fn mul(self, v: Vec3) -> Vec3 {
        v * self
    }
}

impl Div<f64> for Vec3 {
    type Output = Vec3;
    fn div(self, s: f64) -> Vec3 {
        Vec3::new(self.x / s, self.y / s, self.z / s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

/// Arrival (or departure) direction as polar/azimuth angles, radians.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aoa {
    /// Polar angle from +Z, in `[0, pi]`.
    pub theta: f64,
    /// Azimuth from +X, in `(-pi, pi]`.
    pub phi: f64,
}

impl Aoa {
    pub const fn new(theta: f64, phi: f64) -> Self {
        Aoa { theta, phi }
    }
}

/// Wraps an angle into `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut w = a.rem_euclid(2.0 * PI);
    if w > PI {
        w -= 2.0 * PI;
    }
    if w <= -PI {
        w += 2.0 * PI;
    }
    w
}

/// Direction from `from` to `to` as `(theta, phi)`.
///
/// Exactly vertical directions get `phi = 0` and `theta` in `{0, pi}`.
pub fn aoa_from_points(from: Vec3, to: Vec3) -> Result<Aoa> {
    let d = to - from;
    if d.norm_squared() == 0.0 || !d.is_finite() {
        return Err(Error::DegenerateDirection);
    }
    let horizontal = d.horizontal_norm();
    let theta = horizontal.atan2(d.z);
    if horizontal == 0.0 {
        return Ok(Aoa::new(theta, 0.0));
    }
    let mut phi = d.y.atan2(d.x);
    if phi == -PI {
        phi = PI;
    }
    Ok(Aoa::new(theta, phi))
}

pub fn unit_direction(aoa: Aoa) -> Vec3 {
    let (st, ct) = aoa.theta.sin_cos();
    let (sp, cp) = aoa.phi.sin_cos();
    Vec3::new(st * cp, st * sp, ct)
}

/// A planar polygonal reflector.
///
/// The normal follows the right-hand rule over the vertex order and is
/// computed with Newell's method, so concave outlines are fine.
#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    id: u32,
    vertices: Vec<Vec3>,
    normal: Vec3,
    offset: f64,
    material: Option<String>,
    drop_axis: usize,
}

impl Facet {
    pub fn new(id: u32, vertices: Vec<Vec3>) -> Result<Self> {
        let invalid = |reason: &str| Error::InvalidFacet {
            id,
            reason: reason.to_string(),
        };
        if vertices.len() < 3 {
            return Err(invalid("fewer than three vertices"));
        }
        if vertices.iter().any(|v| !v.is_finite()) {
            return Err(invalid("non-finite vertex"));
        }
        let mut newell = Vec3::ZERO;
        for (i, a) in vertices.iter().enumerate() {
            let b = vertices[(i + 1) % vertices.len()];
            newell.x += (a.y - b.y) * (a.z + b.z);
            newell.y += (a.z - b.z) * (a.x + b.x);
            newell.z += (a.x - b.x) * (a.y + b.y);
        }
        let normal = newell
            .normalized()
            .ok_or_else(|| invalid("zero area"))?;
        let centroid = vertices.iter().fold(Vec3::ZERO, |acc, &v| acc + v) / vertices.len() as f64;
        let offset = normal.dot(centroid);
        if vertices
            .iter()
            .any(|v| (normal.dot(*v) - offset).abs() > COPLANAR_TOL)
        {
            return Err(invalid("vertices are not coplanar"));
        }
        let abs = Vec3::new(normal.x.abs(), normal.y.abs(), normal.z.abs());
        let drop_axis = if abs.x >= abs.y && abs.x >= abs.z {
            0
        } else if abs.y >= abs.z {
            1
        } else {
            2
        };
        Ok(Facet {
            id,
            vertices,
            normal,
            offset,
            material: None,
            drop_axis,
        })
    }

    /// Parallelogram `origin, origin+u, origin+u+v, origin+v`.
    pub fn parallelogram(id: u32, origin: Vec3, u: Vec3, v: Vec3) -> Result<Self> {
        Facet::new(id, vec![origin, origin + u, origin + u + v, origin + v])
    }

    pub fn with_material(mut self, material: impl Into<String>) -> Self {
        self.material = Some(material.into());
        self
    }

    pub fn id(&self) -> u32 {
        self.id
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn unit_normal(&self) -> Vec3 {
        self.normal
    }

    pub fn material(&self) -> Option<&str> {
        self.material.as_deref()
    }

    /// Signed distance from the supporting plane (positive on the normal side).
    pub fn signed_distance(&self, p: Vec3) -> f64 {
        self.normal.dot(p) - self.offset
    }

    pub fn project_to_plane(&self, p: Vec3) -> Vec3 {
        p - self.normal * self.signed_distance(p)
    }

    /// Even-odd containment of a point assumed to lie on the plane.
    pub fn contains(&self, p: Vec3) -> bool {
        let (ax, ay) = match self.drop_axis {
            0 => (1, 2),
            1 => (2, 0),
            _ => (0, 1),
        };
        let (px, py) = (p.component(ax), p.component(ay));
        let n = self.vertices.len();
        let mut inside = false;
        let mut j = n - 1;
        for i in 0..n {
            let (xi, yi) = (self.vertices[i].component(ax), self.vertices[i].component(ay));
            let (xj, yj) = (self.vertices[j].component(ax), self.vertices[j].component(ay));
            if (yi > py) != (yj > py) && px < (xj - xi) * (py - yi) / (yj - yi) + xi {
                inside = !inside;
            }
            j = i;
        }
        inside
    }

    /// Euclidean distance from `p` to the polygon (interior included).
    pub fn distance_to(&self, p: Vec3) -> f64 {
        let q = self.project_to_plane(p);
        if self.contains(q) {
            return self.signed_distance(p).abs();
        }
        let n = self.vertices.len();
        (0..n)
            .map(|i| point_segment_distance(p, self.vertices[i], self.vertices[(i + 1) % n]))
            .fold(f64::INFINITY, f64::min)
    }
}

fn point_segment_distance(p: Vec3, a: Vec3, b: Vec3) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_squared();
    if len2 == 0.0 {
        return p.distance(a);
    }
    let t = ((p - a).dot(ab) / len2).clamp(0.0, 1.0);
    p.distance(a + ab * t)
}

/// A set of facets with unique ids. An empty mesh describes open space.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct SceneMesh {
    facets: Vec<Facet>,
}

impl SceneMesh {
    pub fn new(facets: Vec<Facet>) -> Result<Self> {
        let mut seen = HashSet::new();
        for f in &facets {
            if !seen.insert(f.id) {
                return Err(Error::InvalidMesh(format!("duplicate facet id {}", f.id)));
            }
        }
        Ok(SceneMesh { facets })
    }

    pub fn empty() -> Self {
        SceneMesh::default()
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn len(&self) -> usize {
        self.facets.len()
    }

    pub fn facet(&self, id: u32) -> Option<&Facet> {
        self.facets.iter().find(|f| f.id == id)
    }

    /// Axis-aligned bounds of all vertices; `None` for an empty mesh.
    pub fn bounding_box(&self) -> Option<(Vec3, Vec3)> {
        let mut it = self.facets.iter().flat_map(|f| f.vertices.iter().copied());
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), v| (lo.min(v), hi.max(v))))
    }

    /// Distance to the nearest facet; infinite for an empty mesh.
    pub fn distance_to_surface(&self, p: Vec3) -> f64 {
        self.facets
            .iter()
            .map(|f| f.distance_to(p))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Axis-aligned box, used to mark solid volumes that sensors must stay out of.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Aabb {
    pub min: Vec3,
    pub max: Vec3,
}

impl Aabb {
    pub fn new(a: Vec3, b: Vec3) -> Self {
        Aabb {
            min: a.min(b),
            max: a.max(b),
        }
    }

    /// Closed containment with an optional margin.
    pub fn contains(&self, p: Vec3, margin: f64) -> bool {
        (0..3).all(|i| p.component(i) >= self.min.component(i) - margin && p.component(i) <= self.max.component(i) + margin)
    }
}

/// Reflection of `p` across the facet's supporting plane.
pub fn mirror_point(p: Vec3, facet: &Facet) -> Vec3 {
    p - facet.normal * (2.0 * facet.signed_distance(p))
}

/// First intersection of a ray with the facet polygon, as `(point, distance)`.
pub fn ray_facet_intersect(origin: Vec3, dir: Vec3, facet: &Facet) -> Option<(Vec3, f64)> {
    let denom = facet.normal.dot(dir);
    if denom.abs() < 1e-12 {
        return None;
    }
    let t = -facet.signed_distance(origin) / denom;
    if !(t > MIN_RAY_DISTANCE) {
        return None;
    }
    let point = origin + dir * t;
    facet.contains(point).then_some((point, t))
}

/// Parameter `s` at which segment `a + s(b - a)` crosses the facet plane,
/// if the crossing lies inside the polygon.
pub(crate) fn segment_facet_param(a: Vec3, b: Vec3, facet: &Facet) -> Option<f64> {
    let ab = b - a;
    let denom = facet.normal.dot(ab);
    if denom.abs() < 1e-15 {
        return None;
    }
    let s = -facet.signed_distance(a) / denom;
    if !(0.0..=1.0).contains(&s) {
        return None;
    }
    facet.contains(a + ab * s).then_some(s)
}

/// True iff a facet outside `ignore` blocks the open segment `(a, b)`.
pub fn segment_occluded(a: Vec3, b: Vec3, mesh: &SceneMesh, ignore: &BTreeSet<u32>) -> bool {
    mesh.facets.iter().any(|f| {
        !ignore.contains(&f.id)
            && segment_facet_param(a, b, f)
                .is_some_and(|s| s > OCCLUSION_EPS && s < 1.0 - OCCLUSION_EPS)
    })
}
