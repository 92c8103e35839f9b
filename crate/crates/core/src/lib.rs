//! Communication-based 3D SLAM laboratory.
//!
//! A GMT on the ground transmits to a UAV through a mesh of planar facets.
//! The crate traces the specular multipath channel, perturbs it into
//! estimator output, classifies the link state of the strongest path with a
//! small two-stage network, solves first-order reflection points from the
//! delay and angle of arrival, and tracks the UAV pose with IMU dead
//! reckoning corrected by periodic absolute fixes. Mapped points form a
//! point cloud that is scored against the true reflection points.
//!
//! Angles follow one convention throughout: `theta` is the polar angle from
//! +Z in `[0, pi]`, `phi` the azimuth from +X in `(-pi, pi]`.

pub mod cli;
pub mod error;
pub mod estimation;
pub mod geometry;
pub mod invariants;
pub mod io;
pub mod localization;
pub mod lscn;
pub mod raytracer;
pub mod reflector;
pub mod rng;
pub mod scenes;
pub mod slam;

pub use error::{Error, Result};
