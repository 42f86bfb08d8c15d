use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{Action, ACT_DIM};

/// Episodes end once the base drops strictly below this height (m).
pub const MIN_BASE_HEIGHT: f64 = 0.25;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PdGains {
    /// N·m/rad
    pub kp: f64,
    /// N·m·s/rad
    pub kd: f64,
}

impl Default for PdGains {
    fn default() -> Self {
        Self { kp: 20.0, kd: 0.5 }
    }
}

impl PdGains {
    pub fn is_valid(&self) -> bool {
        self.kp > 0.0 && self.kd >= 0.0
    }
}

/// Nominal standing joint angles (rad) that actions are offsets from.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DefaultPose(pub [f64; ACT_DIM]);

#[derive(Deserialize)]
struct PoseFile {
    angles_rad: Vec<f64>,
}

impl DefaultPose {
    /// The shipped standing pose (`data/default_pose.json`).
    pub fn a1() -> Self {
        Self::from_json(include_str!("../../data/default_pose.json"))
            .expect("bundled pose is valid")
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let file: PoseFile = serde_json::from_str(text).map_err(|e| e.to_string())?;
        let n = file.angles_rad.len();
        let angles: [f64; ACT_DIM] = file
            .angles_rad
            .try_into()
            .map_err(|_| format!("expected {ACT_DIM} joint angles, found {n}"))?;
        Ok(Self(angles))
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        Self::from_json(&text)
    }
}

/// `τ = kp·((default + a) − q) − kd·q̇`, with zero target joint velocity.
pub fn pd_torque(
    action: &Action,
    default_pose: &DefaultPose,
    q: &[f64; ACT_DIM],
    qd: &[f64; ACT_DIM],
    gains: PdGains,
) -> [f64; ACT_DIM] {
    std::array::from_fn(|j| gains.kp * (default_pose.0[j] + action.0[j] - q[j]) - gains.kd * qd[j])
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Termination {
    Continue,
    Terminate,
}

pub fn check_termination(base_height: f64) -> Termination {
    if base_height < MIN_BASE_HEIGHT {
        Termination::Terminate
    } else {
        Termination::Continue
    }
}
