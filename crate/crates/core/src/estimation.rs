//! Noisy path-parameter estimates of the strongest links, and feature scaling.
//!
//! The channel estimator is modelled as independent zero-mean Gaussian
//! errors on delay and arrival angles of the top-K traced paths.

use std::f64::consts::PI;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{wrap_angle, Vec3};
use crate::raytracer::ChannelSnapshot;

/// Link state of a time step: the bounce order class of its strongest path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum LinkState {
    Los,
    FirstOrderNlos,
    HigherOrderNlos,
}

impl LinkState {
    pub const ALL: [LinkState; 3] = [LinkState::Los, LinkState::FirstOrderNlos, LinkState::HigherOrderNlos];

    pub fn from_order(order: u32) -> Self {
        match order {
            0 => LinkState::Los,
            1 => LinkState::FirstOrderNlos,
            _ => LinkState::HigherOrderNlos,
        }
    }

    /// Class index: 0 = LOS, 1 = first-order, 2 = higher-order.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Option<Self> {
        LinkState::ALL.get(i).copied()
    }

    pub fn name(self) -> &'static str {
        match self {
            LinkState::Los => "los",
            LinkState::FirstOrderNlos => "first_order_nlos",
            LinkState::HigherOrderNlos => "higher_order_nlos",
        }
    }
}

/// Standard deviations of the estimation errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NoiseConfig {
    /// Delay error, seconds.
    pub sigma_tau: f64,
    /// Polar-angle error, radians.
    pub sigma_theta: f64,
    /// Azimuth error, radians.
    pub sigma_phi: f64,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        NoiseConfig {
            sigma_tau: 0.1e-9,
            sigma_theta: 0.2f64.to_radians(),
            sigma_phi: 0.2f64.to_radians(),
        }
    }
}

impl NoiseConfig {
    pub fn zero() -> Self {
        NoiseConfig {
            sigma_tau: 0.0,
            sigma_theta: 0.0,
            sigma_phi: 0.0,
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        NoiseConfig {
            sigma_tau: self.sigma_tau * factor,
            sigma_theta: self.sigma_theta * factor,
            sigma_phi: self.sigma_phi * factor,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if [self.sigma_tau, self.sigma_theta, self.sigma_phi]
            .iter()
            .any(|s| !(*s >= 0.0) || !s.is_finite())
        {
            return Err(Error::InvalidConfig("noise deviations must be finite and >= 0".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathEstimate {
    pub tau_hat: f64,
    pub theta_hat: f64,
    pub phi_hat: f64,
    pub snr_db: f64,
    /// Filler row for snapshots with fewer than K paths.
    pub padded: bool,
}

/// Estimator output for one time step: exactly K rows, strongest first.
#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub estimates: Vec<PathEstimate>,
    pub true_link_state: LinkState,
    /// First reflection point of the strongest path when it is first-order.
    pub true_first_reflection: Option<Vec3>,
}

impl Snapshot {
    pub fn k(&self) -> usize {
        self.estimates.len()
    }

    /// Raw classifier input `[tau_1, theta_1, phi_1, ..., tau_K, theta_K, phi_K]`.
    pub fn features(&self) -> Vec<f64> {
        self.estimates
            .iter()
            .flat_map(|e| [e.tau_hat, e.theta_hat, e.phi_hat])
            .collect()
    }

    /// Keeps the K strongest rows.
    pub fn truncated(&self, k: usize) -> Snapshot {
        Snapshot {
            estimates: self.estimates[..k.min(self.estimates.len())].to_vec(),
            ..self.clone()
        }
    }
}

/// Keeps `theta` in `(0, pi)` by reflecting over the poles (which turns the
/// azimuth by half a revolution), then wraps `phi` to `(-pi, pi]`.
fn fold_angles(mut theta: f64, mut phi: f64) -> (f64, f64) {
    theta = theta.rem_euclid(2.0 * PI);
    if theta > PI {
        theta = 2.0 * PI - theta;
        phi += PI;
    }
    let theta = theta.clamp(1e-12, PI - 1e-12);
    (theta, wrap_angle(phi))
}

pub fn estimate(snapshot: &ChannelSnapshot, k: usize, noise: &NoiseConfig, rng_seed: u64) -> Result<Snapshot> {
    if k == 0 {
        return Err(Error::InvalidConfig("K must be at least 1".into()));
    }
    let strongest = snapshot.strongest().ok_or(Error::NoPaths)?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut estimates = Vec::with_capacity(k);
    for path in snapshot.paths.iter().take(k) {
        let z_tau: f64 = rng.sample(StandardNormal);
        let z_theta: f64 = rng.sample(StandardNormal);
        let z_phi: f64 = rng.sample(StandardNormal);
        let tau_hat = (path.delay + noise.sigma_tau * z_tau).max(f64::MIN_POSITIVE);
        let (theta_hat, phi_hat) = if noise.sigma_theta == 0.0 && noise.sigma_phi == 0.0 {
            (path.aoa.theta, path.aoa.phi)
        } else {
            fold_angles(
                path.aoa.theta + noise.sigma_theta * z_theta,
                path.aoa.phi + noise.sigma_phi * z_phi,
            )
        };
        estimates.push(PathEstimate {
            tau_hat,
            theta_hat,
            phi_hat,
            snr_db: path.snr_db,
            padded: false,
        });
    }
    let max_delay = snapshot.paths.iter().map(|p| p.delay).fold(0.0, f64::max);
    while estimates.len() < k {
        // snr 0 dB: a signal sitting at the noise floor
        estimates.push(PathEstimate {
            tau_hat: 2.0 * max_delay,
            theta_hat: PI / 2.0,
            phi_hat: 0.0,
            snr_db: 0.0,
            padded: true,
        });
    }
    Ok(Snapshot {
        estimates,
        true_link_state: LinkState::from_order(strongest.order),
        true_first_reflection: (strongest.order == 1).then(|| strongest.reflection_points[0]),
    })
}

/// Per-feature min-max map onto `[-1, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureScaler {
    pub mins: Vec<f64>,
    pub maxs: Vec<f64>,
}

impl FeatureScaler {
    pub fn fit(rows: &[Vec<f64>]) -> Result<Self> {
        let first = rows.first().ok_or(Error::EmptyDataset)?;
        let width = first.len();
        let mut mins = vec![f64::INFINITY; width];
        let mut maxs = vec![f64::NEG_INFINITY; width];
        for row in rows {
            if row.len() != width {
                return Err(Error::ShapeMismatch {
                    expected: width,
                    got: row.len(),
                });
            }
            for (j, &x) in row.iter().enumerate() {
                mins[j] = mins[j].min(x);
                maxs[j] = maxs[j].max(x);
            }
        }
        Ok(FeatureScaler { mins, maxs })
    }

    pub fn width(&self) -> usize {
        self.mins.len()
    }

    pub fn transform(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.width() {
            return Err(Error::ShapeMismatch {
                expected: self.width(),
                got: row.len(),
            });
        }
        Ok(row
            .iter()
            .zip(self.mins.iter().zip(&self.maxs))
            .map(|(&x, (&lo, &hi))| {
                if hi > lo {
                    2.0 * (x - lo) / (hi - lo) - 1.0
                } else {
                    0.0
                }
            })
            .collect())
    }

    pub fn inverse(&self, row: &[f64]) -> Result<Vec<f64>> {
        if row.len() != self.width() {
            return Err(Error::ShapeMismatch {
                expected: self.width(),
                got: row.len(),
            });
        }
        Ok(row
            .iter()
            .zip(self.mins.iter().zip(&self.maxs))
            .map(|(&y, (&lo, &hi))| if hi > lo { (y + 1.0) / 2.0 * (hi - lo) + lo } else { lo })
            .collect())
    }

    /// Restricts the scaler to the first `width` features.
    pub fn truncated(&self, width: usize) -> FeatureScaler {
        FeatureScaler {
            mins: self.mins[..width].to_vec(),
            maxs: self.maxs[..width].to_vec(),
        }
    }
}

pub fn normalize_rows(rows: &[Vec<f64>]) -> Result<(Vec<Vec<f64>>, FeatureScaler)> {
    let scaler = FeatureScaler::fit(rows)?;
    let out = rows.iter().map(|r| scaler.transform(r)).collect::<Result<Vec<_>>>()?;
    Ok((out, scaler))
}

pub fn normalize_features(snapshots: &[Snapshot]) -> Result<(Vec<Vec<f64>>, FeatureScaler)> {
    let rows: Vec<Vec<f64>> = snapshots.iter().map(Snapshot::features).collect();
    normalize_rows(&rows)
}
