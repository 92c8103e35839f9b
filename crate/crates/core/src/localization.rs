//! Hybrid periodic calibration: IMU dead reckoning between absolute fixes.

use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::rng::{rng_for, stream};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ImuModel {
    /// Per-axis std of each displacement measurement, metres.
    pub sigma_step: f64,
    /// Constant additive bias, metres per step.
    pub bias: Vec3,
    pub rng_seed: u64,
}

impl Default for ImuModel {
    fn default() -> Self {
        ImuModel {
            sigma_step: 0.05,
            bias: Vec3::new(0.01, 0.0, 0.0),
            rng_seed: 0,
        }
    }
}

impl ImuModel {
    pub fn ideal() -> Self {
        ImuModel {
            sigma_step: 0.0,
            bias: Vec3::ZERO,
            rng_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_step >= 0.0) || !self.sigma_step.is_finite() || !self.bias.is_finite() {
            return Err(Error::InvalidConfig("imu: sigma_step must be >= 0 and bias finite".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BsmModel {
    /// Isotropic per-axis std of each absolute fix, metres.
    pub sigma_fix: f64,
    pub rng_seed: u64,
}

impl Default for BsmModel {
    fn default() -> Self {
        BsmModel {
            sigma_fix: 0.1,
            rng_seed: 0,
        }
    }
}

impl BsmModel {
    pub fn ideal() -> Self {
        BsmModel {
            sigma_fix: 0.0,
            rng_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_fix >= 0.0) || !self.sigma_fix.is_finite() {
            return Err(Error::InvalidConfig("bsm: sigma_fix must be >= 0".into()));
        }
        Ok(())
    }
}

fn gaussian3(seed: u64, stream: u64, index: u64, sigma: f64) -> Vec3 {
    let mut rng = rng_for(seed, stream, index);
    let mut draw = || -> f64 { StandardNormal.sample(&mut rng) };
    let (x, y, z) = (draw(), draw(), draw());
    Vec3::new(x, y, z) * sigma
}

/// Measured displacement for the step ending at `t`.
pub fn imu_step(model: &ImuModel, true_prev: Vec3, true_next: Vec3, t: u64) -> Vec3 {
    (true_next - true_prev) + model.bias + gaussian3(model.rng_seed, stream::IMU, t, model.sigma_step)
}

/// Absolute position fix number `n`.
pub fn bsm_fix(model: &BsmModel, true_pos: Vec3, n: u64) -> Vec3 {
    true_pos + gaussian3(model.rng_seed, stream::BSM, n, model.sigma_fix)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HpcState {
    pub t: u64,
    pub n: u64,
    pub last_fix: Vec3,
    /// Displacement accumulated since the last fix.
    pub imu_track: Vec3,
    pub estimate: Vec3,
}

impl HpcState {
    /// State at `t = 0`, right after the initial fix.
    pub fn initial(fix: Vec3) -> Self {
        HpcState {
            t: 0,
            n: 0,
            last_fix: fix,
            imu_track: Vec3::ZERO,
            estimate: fix,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HpcEvent {
    Fix(Vec3),
    Imu(Vec3),
}

pub fn is_fix_step(t: u64, t_c: u64) -> bool {
    t.is_multiple_of(t_c)
}

/// Advances the state by one step. Fix events are expected exactly on the
/// steps with `t % t_c == 0`, displacements on all others.
pub fn hpc_update(state: &HpcState, t_c: u64, event: HpcEvent) -> Result<HpcState> {
    if t_c == 0 {
        return Err(Error::InvalidConfig("T_c must be at least 1".into()));
    }
    let t = state.t + 1;
    match (is_fix_step(t, t_c), event) {
        (true, HpcEvent::Fix(fix)) => Ok(HpcState {
            t,
            n: state.n + 1,
            last_fix: fix,
            imu_track: Vec3::ZERO,
            estimate: fix,
        }),
        (false, HpcEvent::Imu(d)) => {
            let imu_track = state.imu_track + d;
            Ok(HpcState {
                t,
                n: state.n,
                last_fix: state.last_fix,
                imu_track,
                estimate: state.last_fix + imu_track,
            })
        }
        _ => Err(Error::ScheduleMismatch { t }),
    }
}

/// Drives [`hpc_update`] from a true trajectory using the sensor models.
#[derive(Debug, Clone)]
pub struct HpcTracker {
    pub imu: ImuModel,
    pub bsm: BsmModel,
    pub t_c: u64,
    state: HpcState,
}

impl HpcTracker {
    pub fn start(imu: ImuModel, bsm: BsmModel, t_c: u64, true_pos: Vec3) -> Result<Self> {
        if t_c == 0 {
            return Err(Error::InvalidConfig("T_c must be at least 1".into()));
        }
        imu.validate()?;
        bsm.validate()?;
        Ok(HpcTracker {
            imu,
            bsm,
            t_c,
            state: HpcState::initial(bsm_fix(&bsm, true_pos, 0)),
        })
    }

    pub fn state(&self) -> &HpcState {
        &self.state
    }

    pub fn estimate(&self) -> Vec3 {
        self.state.estimate
    }

    /// One step of the true trajectory, `true_prev` at `t` to `true_next` at `t + 1`.
    pub fn advance(&mut self, true_prev: Vec3, true_next: Vec3) -> Result<&HpcState> {
        let t = self.state.t + 1;
        let event = if is_fix_step(t, self.t_c) {
            HpcEvent::Fix(bsm_fix(&self.bsm, true_next, self.state.n + 1))
        } else {
            HpcEvent::Imu(imu_step(&self.imu, true_prev, true_next, t))
        };
        self.state = hpc_update(&self.state, self.t_c, event)?;
        Ok(&self.state)
    }
}

/// Per-step pose error norms `|estimate - true|` along a trajectory.
pub fn track_errors(imu: ImuModel, bsm: BsmModel, t_c: u64, trajectory: &[Vec3]) -> Result<Vec<f64>> {
    let first = *trajectory
        .first()
        .ok_or_else(|| Error::InvalidScenario("empty trajectory".into()))?;
    let mut tracker = HpcTracker::start(imu, bsm, t_c, first)?;
    let mut errors = vec![tracker.estimate().distance(first)];
    for w in trajectory.windows(2) {
        let s = tracker.advance(w[0], w[1])?;
        errors.push(s.estimate.distance(w[1]));
    }
    Ok(errors)
}
