use std::io::Write;
use std::path::Path;

use super::{create, finish};
use crate::error::{Error, Result};
use crate::slam::PointCloudMap;

/// ASCII PLY with `x y z error_m` per vertex; `error_m` is the distance to
/// the paired true point, or -1 for unpaired points.
pub fn write_ply_to(w: &mut impl Write, map: &PointCloudMap) -> Result<()> {
    if let Some(p) = map.points.iter().find(|p| !p.mapped.is_finite()) {
        return Err(Error::InvalidConfig(format!("non-finite map point at step {}", p.time_step)));
    }
    writeln!(w, "ply")?;
    writeln!(w, "format ascii 1.0")?;
    writeln!(w, "comment cslam point cloud")?;
    writeln!(w, "element vertex {}", map.len())?;
    for name in ["x", "y", "z", "error_m"] {
        writeln!(w, "property double {name}")?;
    }
    writeln!(w, "end_header")?;
    for p in &map.points {
        let e = p.error().unwrap_or(-1.0);
        writeln!(w, "{} {} {} {}", p.mapped.x, p.mapped.y, p.mapped.z, e)?;
    }
    Ok(())
}

pub fn export_ply(map: &PointCloudMap, path: impl AsRef<Path>) -> Result<()> {
    let mut w = create(path.as_ref())?;
    write_ply_to(&mut w, map)?;
    finish(w)
}

/// Reads back the vertex rows of a file written by [`export_ply`].
pub fn read_ply(path: impl AsRef<Path>) -> Result<Vec<[f64; 4]>> {
    let text = std::fs::read_to_string(path)?;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let mut count = None;
    for (n, line) in lines.by_ref() {
        if n == 1 && line != "ply" {
            return Err(Error::format(1, "missing 'ply' magic"));
        }
        if let Some(c) = line.strip_prefix("element vertex ") {
            count = Some(c.trim().parse::<usize>().map_err(|_| Error::format(n, "bad vertex count"))?);
        }
        if line == "end_header" {
            break;
        }
    }
    let count = count.ok_or_else(|| Error::format(0, "no vertex element"))?;
    let mut out = Vec::with_capacity(count);
    for (n, line) in lines {
        let v: Vec<f64> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| Error::format(n, "bad number"))?;
        let v: [f64; 4] = v.try_into().map_err(|_| Error::format(n, "expected 4 fields"))?;
        out.push(v);
    }
    if out.len() != count {
        return Err(Error::format(0, format!("header declares {count} vertices, found {}", out.len())));
    }
    Ok(out)
}
