//! Controller-side interface: observation layout, left-right mirroring,
//! the symmetric double-pass policy wrapper, PD torque conversion and the
//! episode termination rule.

mod mirror;
mod pd;
mod policy;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pattern::{ContactWindow, DEFAULT_WINDOW_LEN};

pub use mirror::{mirror_act, mirror_obs};
pub use pd::{check_termination, pd_torque, DefaultPose, PdGains, Termination, MIN_BASE_HEIGHT};
pub use policy::{double_pass, mlp_forward, Layer, Mlp, Policy, PolicySpec, WeightsError};

pub const NUM_LEGS: usize = 4;
pub const JOINTS_PER_LEG: usize = 3;
pub const ACT_DIM: usize = NUM_LEGS * JOINTS_PER_LEG;
pub const WINDOW_DIM: usize = NUM_LEGS * DEFAULT_WINDOW_LEN;
pub const OBS_DIM: usize = 3 + 3 + 3 + ACT_DIM * 3 + WINDOW_DIM;

/// Offsets of each observation component inside the flat vector.
pub mod layout {
    use super::*;
    pub const BASE_ANG_VEL: usize = 0;
    pub const GRAVITY: usize = 3;
    pub const COMMAND: usize = 6;
    pub const JOINT_POS: usize = 9;
    pub const JOINT_VEL: usize = JOINT_POS + ACT_DIM;
    pub const PREV_ACTION: usize = JOINT_VEL + ACT_DIM;
    pub const CONTACT_WINDOW: usize = PREV_ACTION + ACT_DIM;
}

/// Gravity direction in the base frame when the robot is level.
pub const LEVEL_GRAVITY: [f64; 3] = [0.0, 0.0, -1.0];

/// Joint index within a 12-vector: legs FL, FR, RL, RR; joints hip, thigh, calf.
pub fn joint_index(leg: usize, joint: usize) -> usize {
    leg * JOINTS_PER_LEG + joint
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ObsError {
    #[error("observation has {found} entries, expected {expected}")]
    Dimension { expected: usize, found: usize },
    #[error("contact window must be 4x{DEFAULT_WINDOW_LEN}, got 4x{0}")]
    WindowShape(usize),
    #[error("contact entry {index} is {value}, expected 0 or 1")]
    NonBinaryContact { index: usize, value: f64 },
}

/// Twelve joint-position offsets from the default pose (rad).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Action(pub [f64; ACT_DIM]);

impl Action {
    pub const ZERO: Action = Action([0.0; ACT_DIM]);

    pub fn hips(&self) -> [f64; NUM_LEGS] {
        std::array::from_fn(|leg| self.0[joint_index(leg, 0)])
    }
}

/// The 65-dimensional controller input.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Observation {
    /// Roll, pitch, yaw rates (rad/s).
    pub base_ang_vel: [f64; 3],
    pub gravity: [f64; 3],
    /// Desired (v_x, v_y, yaw rate); only v_x is commanded, the rest stay 0.
    pub command: [f64; 3],
    pub joint_pos: [f64; ACT_DIM],
    pub joint_vel: [f64; ACT_DIM],
    pub prev_action: [f64; ACT_DIM],
    /// Rows FL, FR, RL, RR of the look-ahead window.
    pub contact_window: [[u8; DEFAULT_WINDOW_LEN]; NUM_LEGS],
}

impl Observation {
    pub fn zeroed() -> Self {
        Self {
            base_ang_vel: [0.0; 3],
            gravity: [0.0; 3],
            command: [0.0; 3],
            joint_pos: [0.0; ACT_DIM],
            joint_vel: [0.0; ACT_DIM],
            prev_action: [0.0; ACT_DIM],
            contact_window: [[0; DEFAULT_WINDOW_LEN]; NUM_LEGS],
        }
    }

    pub fn to_vector(&self) -> [f64; OBS_DIM] {
        let mut v = [0.0; OBS_DIM];
        v[layout::BASE_ANG_VEL..][..3].copy_from_slice(&self.base_ang_vel);
        v[layout::GRAVITY..][..3].copy_from_slice(&self.gravity);
        v[layout::COMMAND..][..3].copy_from_slice(&self.command);
        v[layout::JOINT_POS..][..ACT_DIM].copy_from_slice(&self.joint_pos);
        v[layout::JOINT_VEL..][..ACT_DIM].copy_from_slice(&self.joint_vel);
        v[layout::PREV_ACTION..][..ACT_DIM].copy_from_slice(&self.prev_action);
        for (i, bit) in self.contact_window.iter().flatten().enumerate() {
            v[layout::CONTACT_WINDOW + i] = f64::from(*bit);
        }
        v
    }

    pub fn from_vector(v: &[f64]) -> Result<Self, ObsError> {
        if v.len() != OBS_DIM {
            return Err(ObsError::Dimension {
                expected: OBS_DIM,
                found: v.len(),
            });
        }
        let take3 = |at: usize| -> [f64; 3] { v[at..at + 3].try_into().unwrap() };
        let take12 = |at: usize| -> [f64; ACT_DIM] { v[at..at + ACT_DIM].try_into().unwrap() };
        let mut contact_window = [[0u8; DEFAULT_WINDOW_LEN]; NUM_LEGS];
        for (i, &x) in v[layout::CONTACT_WINDOW..].iter().enumerate() {
            let bit = match x {
                0.0 => 0,
                1.0 => 1,
                value => {
                    return Err(ObsError::NonBinaryContact {
                        index: layout::CONTACT_WINDOW + i,
                        value,
                    })
                }
            };
            contact_window[i / DEFAULT_WINDOW_LEN][i % DEFAULT_WINDOW_LEN] = bit;
        }
        Ok(Self {
            base_ang_vel: take3(layout::BASE_ANG_VEL),
            gravity: take3(layout::GRAVITY),
            command: take3(layout::COMMAND),
            joint_pos: take12(layout::JOINT_POS),
            joint_vel: take12(layout::JOINT_VEL),
            prev_action: take12(layout::PREV_ACTION),
            contact_window,
        })
    }
}

/// Robot state needed to build an observation, excluding the contact window.
#[derive(Clone, Debug, PartialEq)]
pub struct ProprioState {
    pub base_ang_vel: [f64; 3],
    pub gravity: [f64; 3],
    pub joint_pos: [f64; ACT_DIM],
    pub joint_vel: [f64; ACT_DIM],
    pub prev_action: [f64; ACT_DIM],
}

impl Default for ProprioState {
    fn default() -> Self {
        Self {
            base_ang_vel: [0.0; 3],
            gravity: LEVEL_GRAVITY,
            joint_pos: [0.0; ACT_DIM],
            joint_vel: [0.0; ACT_DIM],
            prev_action: [0.0; ACT_DIM],
        }
    }
}

/// Concatenates proprioception, the forward-velocity command and the window.
pub fn assemble_observation(
    state: &ProprioState,
    desired_vx: f64,
    window: &ContactWindow,
) -> Result<Observation, ObsError> {
    if window.len() != DEFAULT_WINDOW_LEN {
        return Err(ObsError::WindowShape(window.len()));
    }
    let contact_window = window
        .rows()
        .each_ref()
        .map(|r| <[u8; DEFAULT_WINDOW_LEN]>::try_from(r.as_slice()).expect("length checked"));
    Ok(Observation {
        base_ang_vel: state.base_ang_vel,
        gravity: state.gravity,
        command: [desired_vx, 0.0, 0.0],
        joint_pos: state.joint_pos,
        joint_vel: state.joint_vel,
        prev_action: state.prev_action,
        contact_window,
    })
}


#[cfg(test)]
pub(crate) mod strategies {
    use super::*;
    use proptest::prelude::*;

    pub fn arb_observation() -> impl Strategy<Value = Observation> {
        (
            proptest::collection::vec(-10.0f64..10.0, 45),
            proptest::collection::vec(0u8..=1, WINDOW_DIM),
        )
            .prop_map(|(x, bits)| {
                let mut v = [0.0; OBS_DIM];
                v[..45].copy_from_slice(&x);
                for (i, b) in bits.into_iter().enumerate() {
                    v[45 + i] = f64::from(b);
                }
                Observation::from_vector(&v).unwrap()
            })
    }

    proptest! {
        #[test]
        fn vector_round_trip(obs in arb_observation()) {
            prop_assert_eq!(Observation::from_vector(&obs.to_vector()).unwrap(), obs);
        }
    }
}
