//! Builtin scenes and their default scenarios.

use crate::error::{Error, Result};
use crate::estimation::NoiseConfig;
use crate::geometry::{Aabb, Facet, SceneMesh, Vec3};
use crate::localization::{BsmModel, ImuModel};
use crate::raytracer::ChannelConfig;
use crate::slam::{DatasetSpec, LscnSpec, RunSpec, RxGrid, Scenario, SceneSpec, Trajectories};

pub const BUILTIN_SCENES: [&str; 6] = [
    "open-field",
    "single-wall",
    "parallel-walls",
    "box-room",
    "two-buildings",
    "occluded-wall",
];

/// UAV, GMT and reflection point of the `occluded-wall` scene.
pub const OCCLUDED_WALL_UAV: Vec3 = Vec3::new(53.97, 23.24, 2.0);
pub const OCCLUDED_WALL_GMT: Vec3 = Vec3::new(28.20, 23.04, 2.0);
pub const OCCLUDED_WALL_POINT: Vec3 = Vec3::new(41.59, 39.09, 2.0);

#[derive(Debug, Clone)]
pub struct BuiltinScene {
    pub mesh: SceneMesh,
    /// Closed volumes (buildings, pillars) that receivers must not sit in.
    pub solids: Vec<Aabb>,
}

fn quad(id: u32, origin: Vec3, u: Vec3, v: Vec3) -> Facet {
    Facet::parallelogram(id, origin, u, v).expect("builtin facet")
}

/// Horizontal rectangle at height `z`.
fn slab(id: u32, min: Vec3, max: Vec3, z: f64, material: &str) -> Facet {
    quad(
        id,
        Vec3::new(min.x, min.y, z),
        Vec3::new(max.x - min.x, 0.0, 0.0),
        Vec3::new(0.0, max.y - min.y, 0.0),
    )
    .with_material(material)
}

/// Four vertical walls of a box, ids `first..first + 4`.
fn walls(first: u32, min: Vec3, max: Vec3, material: &str) -> Vec<Facet> {
    let d = max - min;
    let up = Vec3::new(0.0, 0.0, d.z);
    vec![
        quad(first, min, Vec3::new(0.0, d.y, 0.0), up),
        quad(first + 1, Vec3::new(max.x, min.y, min.z), Vec3::new(0.0, d.y, 0.0), up),
        quad(first + 2, min, Vec3::new(d.x, 0.0, 0.0), up),
        quad(first + 3, Vec3::new(min.x, max.y, min.z), Vec3::new(d.x, 0.0, 0.0), up),
    ]
    .into_iter()
    .map(|f| f.with_material(material))
    .collect()
}

/// Walls and roof of a building standing on the ground, ids `first..first + 5`.
fn building(first: u32, min: Vec3, max: Vec3) -> Vec<Facet> {
    let mut f = walls(first, min, max, "concrete");
    f.push(slab(first + 4, min, max, max.z, "concrete"));
    f
}

pub fn builtin_scene(name: &str) -> Result<BuiltinScene> {
    let mesh = |facets: Vec<Facet>| SceneMesh::new(facets).expect("builtin mesh");
    Ok(match name {
        "open-field" => BuiltinScene {
            mesh: SceneMesh::empty(),
            solids: Vec::new(),
        },
        "single-wall" => BuiltinScene {
            mesh: mesh(vec![
                slab(0, Vec3::new(-20.0, -20.0, 0.0), Vec3::new(20.0, 20.0, 0.0), 0.0, "ground"),
                // raised panel: ground bounces pass underneath it
                quad(1, Vec3::new(0.0, -10.0, 1.5), Vec3::new(0.0, 20.0, 0.0), Vec3::new(0.0, 0.0, 4.5))
                    .with_material("concrete"),
            ]),
            solids: Vec::new(),
        },
        "parallel-walls" => BuiltinScene {
            mesh: mesh(vec![
                quad(0, Vec3::new(0.0, -10.0, 0.0), Vec3::new(0.0, 20.0, 0.0), Vec3::new(0.0, 0.0, 5.0)),
                quad(1, Vec3::new(4.0, -10.0, 0.0), Vec3::new(0.0, 20.0, 0.0), Vec3::new(0.0, 0.0, 5.0)),
            ]),
            solids: Vec::new(),
        },
        "box-room" => {
            let (lo, hi) = (Vec3::ZERO, Vec3::new(12.0, 8.0, 3.5));
            let pillar = Aabb::new(Vec3::new(3.0, 5.0, 0.0), Vec3::new(3.6, 5.6, 3.5));
            let mut f = vec![slab(0, lo, hi, 0.0, "floor"), slab(1, lo, hi, hi.z, "ceiling")];
            f.extend(walls(2, lo, hi, "drywall"));
            f.push(
                quad(6, Vec3::new(6.0, 0.0, 0.0), Vec3::new(0.0, 4.5, 0.0), Vec3::new(0.0, 0.0, 3.5))
                    .with_material("glass"),
            );
            f.extend(walls(7, pillar.min, pillar.max, "concrete"));
            BuiltinScene {
                mesh: mesh(f),
                solids: vec![pillar],
            }
        }
        "two-buildings" => {
            // two blocks facing each other across a 10 m street
            let a = Aabb::new(Vec3::new(15.0, 15.0, 0.0), Vec3::new(25.0, 45.0, 15.0));
            let b = Aabb::new(Vec3::new(35.0, 15.0, 0.0), Vec3::new(45.0, 45.0, 20.0));
            let mut f = vec![slab(0, Vec3::ZERO, Vec3::new(60.0, 60.0, 0.0), 0.0, "ground")];
            f.extend(building(1, a.min, a.max));
            f.extend(building(6, b.min, b.max));
            BuiltinScene {
                mesh: mesh(f),
                solids: vec![a, b],
            }
        }
        "occluded-wall" => {
            let g = (OCCLUDED_WALL_GMT - OCCLUDED_WALL_POINT).normalized().expect("distinct");
            let r = (OCCLUDED_WALL_UAV - OCCLUDED_WALL_POINT).normalized().expect("distinct");
            let normal = (g + r).normalized().expect("not antiparallel");
            let along = normal.cross(Vec3::Z);
            let block = Aabb::new(Vec3::new(38.0, 18.0, 0.0), Vec3::new(44.0, 28.0, 10.0));
            let mut f = vec![
                slab(0, Vec3::ZERO, Vec3::new(70.0, 50.0, 0.0), 0.0, "ground"),
                quad(
                    1,
                    Vec3::new(OCCLUDED_WALL_POINT.x, OCCLUDED_WALL_POINT.y, 0.0) - along * 5.0,
                    along * 10.0,
                    Vec3::new(0.0, 0.0, 8.0),
                )
                .with_material("metal"),
            ];
            f.extend(building(2, block.min, block.max));
            BuiltinScene {
                mesh: mesh(f),
                solids: vec![block],
            }
        }
        other => {
            return Err(Error::InvalidScenario(format!(
                "unknown builtin scene '{other}' (expected one of {})",
                BUILTIN_SCENES.join(", ")
            )))
        }
    })
}

/// Points every `step` metres along a polyline, starting at its first vertex.
pub fn walk(vertices: &[Vec3], step: f64) -> Vec<Vec3> {
    let mut out = vec![vertices[0]];
    let mut carry = 0.0;
    for w in vertices.windows(2) {
        let len = w[0].distance(w[1]);
        let dir = (w[1] - w[0]) / len;
        let mut s = step - carry;
        while s <= len + 1e-9 {
            out.push(w[0] + dir * s.min(len));
            s += step;
        }
        carry = len - (s - step);
    }
    out
}

/// `n` evenly spaced points on the segment `a -> b`.
pub fn line(a: Vec3, b: Vec3, n: usize) -> Vec<Vec3> {
    if n == 1 {
        return vec![a];
    }
    (0..n).map(|i| a + (b - a) * (i as f64 / (n - 1) as f64)).collect()
}

fn rect_loop(lo: (f64, f64), hi: (f64, f64), z: f64) -> Vec<Vec3> {
    vec![
        Vec3::new(lo.0, lo.1, z),
        Vec3::new(hi.0, lo.1, z),
        Vec3::new(hi.0, hi.1, z),
        Vec3::new(lo.0, hi.1, z),
        Vec3::new(lo.0, lo.1, z),
    ]
}

fn scenario(name: &str, uav: Vec<Vec3>, gmt: (Vec3, Vec3), t_c: usize, dataset: DatasetSpec) -> Scenario {
    let t = uav.len() - 1;
    Scenario {
        scene: SceneSpec::builtin(name),
        trajectories: Trajectories {
            uav,
            gmt: line(gmt.0, gmt.1, t / t_c + 1),
        },
        channel: ChannelConfig::default(),
        noise: NoiseConfig::default(),
        imu: ImuModel::default(),
        bsm: BsmModel::default(),
        lscn: LscnSpec::default(),
        run: RunSpec {
            t,
            t_c,
            master_seed: 7,
        },
        dataset: Some(dataset),
    }
}

/// Default scenario for a builtin scene.
pub fn builtin_scenario(name: &str) -> Result<Scenario> {
    let solids = builtin_scene(name)?.solids;
    let grid = |min: Vec3, max: Vec3, counts: [usize; 3]| RxGrid { min, max, counts };
    let ds = |grid: RxGrid, tx: Vec<Vec3>| DatasetSpec {
        grid,
        tx,
        exclude: solids.clone(),
    };
    Ok(match name {
        "open-field" => scenario(
            name,
            walk(&[Vec3::new(-20.0, 0.0, 10.0), Vec3::new(20.0, 0.0, 10.0)], 1.0),
            (Vec3::new(-5.0, -3.0, 1.5), Vec3::new(5.0, -3.0, 1.5)),
            10,
            ds(
                grid(Vec3::new(-20.0, -20.0, 2.0), Vec3::new(20.0, 20.0, 10.0), [10, 10, 2]),
                vec![Vec3::new(0.0, 0.0, 1.5)],
            ),
        ),
        "single-wall" => scenario(
            name,
            walk(&[Vec3::new(5.0, -14.0, 2.0), Vec3::new(5.0, 14.0, 2.0)], 0.5),
            (Vec3::new(-5.0, -3.0, 1.5), Vec3::new(-5.0, 3.0, 1.5)),
            10,
            ds(
                grid(Vec3::new(1.0, -18.0, 1.0), Vec3::new(19.0, 18.0, 7.0), [10, 10, 4]),
                vec![Vec3::new(-5.0, 0.0, 1.5), Vec3::new(-8.0, 5.0, 1.5)],
            ),
        ),
        "parallel-walls" => scenario(
            name,
            walk(&[Vec3::new(3.0, -8.0, 2.0), Vec3::new(3.0, 8.0, 2.0)], 0.5),
            (Vec3::new(1.0, -4.0, 1.5), Vec3::new(1.0, 4.0, 1.5)),
            10,
            ds(
                grid(Vec3::new(0.5, -9.0, 0.5), Vec3::new(3.5, 9.0, 4.5), [4, 10, 3]),
                vec![Vec3::new(1.0, 0.0, 1.5)],
            ),
        ),
        "box-room" => scenario(
            name,
            walk(&rect_loop((1.5, 1.5), (10.5, 6.5), 2.5), 0.25),
            (Vec3::new(2.0, 2.0, 1.0), Vec3::new(4.0, 3.0, 1.0)),
            10,
            ds(
                grid(Vec3::new(0.5, 0.5, 0.5), Vec3::new(11.5, 7.5, 3.0), [12, 8, 3]),
                vec![Vec3::new(2.0, 2.0, 1.0), Vec3::new(9.0, 2.0, 1.0)],
            ),
        ),
        "two-buildings" => scenario(
            name,
            walk(&rect_loop((5.0, 5.0), (55.0, 55.0), 3.0), 0.5),
            (Vec3::new(30.0, 5.0, 1.5), Vec3::new(30.0, 55.0, 1.5)),
            10,
            ds(
                grid(Vec3::new(1.5, 1.5, 1.5), Vec3::new(58.5, 58.5, 6.0), [20, 20, 4]),
                [22.5, 27.5, 32.5, 37.5]
                    .into_iter()
                    .flat_map(|y| [Vec3::new(27.5, y, 1.5), Vec3::new(32.5, y, 1.5)])
                    .collect(),
            ),
        ),
        "occluded-wall" => scenario(
            name,
            vec![OCCLUDED_WALL_UAV; 11],
            (OCCLUDED_WALL_GMT, OCCLUDED_WALL_GMT),
            10,
            ds(
                grid(Vec3::new(46.0, 15.0, 2.0), Vec3::new(60.0, 32.0, 2.0), [8, 8, 1]),
                vec![OCCLUDED_WALL_GMT],
            ),
        ),
        _ => unreachable!("builtin_scene accepted the name"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimation::LinkState;
    use crate::raytracer::snapshot;

    #[test]
    fn all_builtins_validate() {
        for name in BUILTIN_SCENES {
            let s = builtin_scenario(name).unwrap();
            s.validate().unwrap_or_else(|e| panic!("{name}: {e}"));
        }
        assert!(builtin_scene("moon-base").is_err());
    }

    #[test]
    fn walk_spacing() {
        let p = walk(&rect_loop((0.0, 0.0), (2.0, 1.0), 0.0), 0.5);
        assert_eq!(p.len(), 13);
        for w in p.windows(2) {
            assert!((w[0].distance(w[1]) - 0.5).abs() < 1e-9);
        }
        assert!(p.last().unwrap().distance(Vec3::ZERO) < 1e-9);
    }

    #[test]
    fn occluded_wall_strongest_is_first_order() {
        let mesh = builtin_scene("occluded-wall").unwrap().mesh;
        let s = snapshot(OCCLUDED_WALL_GMT, OCCLUDED_WALL_UAV, &mesh, &ChannelConfig::default());
        let p = s.strongest().unwrap();
        assert_eq!(LinkState::from_order(p.order), LinkState::FirstOrderNlos);
        assert_eq!(p.facet_ids, vec![1]);
        assert!(p.reflection_points[0].distance(OCCLUDED_WALL_POINT) < 1e-9);
    }
}
