//! Per-step reward terms and discounted return.
//!
//! | term | value | default weight |
//! |------|-------|----------------|
//! | r1 | `exp(-4((v_x - v̂_x)² + v_y²))` | 1 |
//! | r2 | `exp(-4 ω_z²)` | -0.5 |
//! | r3 | `¼ Σ |c_i - ĉ_i|` | -1 |
//! | r4 | `Σ (a_t - a_{t-1})²` over 12 joints | -0.005 |
//! | r5 | `ω_x² + ω_y²` (zero for BOUND) | -0.05 |
//! | r6 | `v_z²` (zero for BOUND) | -2 |
//! | r7 | `Σ 1{F_i > 0.1}` over 8 bodies | -1 |
//! | r8 | `Σ |a_hip|` over 4 hips | -0.03 |

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mdp::{Action, ACT_DIM};
use crate::pattern::GaitType;

pub const NUM_TERMS: usize = 8;
/// Thigh and calf links monitored for collisions.
pub const NUM_COLLISION_BODIES: usize = 8;
/// Newtons; a body counts as colliding when its force is strictly above this.
pub const COLLISION_FORCE_THRESHOLD: f64 = 0.1;
pub const DEFAULT_GAMMA: f64 = 0.99;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum RewardError {
    #[error("contact flag {value} at foot {foot} is not binary")]
    NonBinaryContact { foot: usize, value: u8 },
    #[error("episode has no steps")]
    EmptyEpisode,
    #[error("discount {0} is outside [0, 1]")]
    Discount(f64),
}

/// Serializes floats rounded to 9 significant digits.
pub(crate) mod sig9 {
    use serde::{Serialize, Serializer};

    pub fn round(x: f64) -> f64 {
        if !x.is_finite() || x == 0.0 {
            return x;
        }
        format!("{x:.8e}").parse().expect("formatted float parses")
    }

    pub fn scalar<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        round(*x).serialize(s)
    }

    pub fn array<S: Serializer, const N: usize>(x: &[f64; N], s: S) -> Result<S::Ok, S::Error> {
        x.map(round).serialize(s)
    }
}

/// One control step of kinematics, contacts and actions.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    #[serde(serialize_with = "sig9::scalar")]
    pub v_x: f64,
    #[serde(serialize_with = "sig9::scalar")]
    pub v_y: f64,
    #[serde(serialize_with = "sig9::scalar")]
    pub v_z: f64,
    #[serde(serialize_with = "sig9::scalar")]
    pub v_x_cmd: f64,
    #[serde(serialize_with = "sig9::scalar")]
    pub omega_x: f64,
    #[serde(serialize_with = "sig9::scalar")]
    pub omega_y: f64,
    #[serde(serialize_with = "sig9::scalar")]
    pub omega_z: f64,
    pub contacts: [u8; 4],
    pub desired_contacts: [u8; 4],
    #[serde(serialize_with = "sig9::array")]
    pub action: [f64; ACT_DIM],
    #[serde(serialize_with = "sig9::array")]
    pub prev_action: [f64; ACT_DIM],
    #[serde(serialize_with = "sig9::array")]
    pub body_forces: [f64; NUM_COLLISION_BODIES],
    pub gait: Option<GaitType>,
}

impl StepRecord {
    /// A record with perfect tracking and all-stance contacts.
    pub fn at_rest(v_x_cmd: f64) -> Self {
        Self {
            step: 0,
            v_x: v_x_cmd,
            v_y: 0.0,
            v_z: 0.0,
            v_x_cmd,
            omega_x: 0.0,
            omega_y: 0.0,
            omega_z: 0.0,
            contacts: [1; 4],
            desired_contacts: [1; 4],
            action: [0.0; ACT_DIM],
            prev_action: [0.0; ACT_DIM],
            body_forces: [0.0; NUM_COLLISION_BODIES],
            gait: None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RewardWeights(pub [f64; NUM_TERMS]);

impl Default for RewardWeights {
    fn default() -> Self {
        Self([1.0, -0.5, -1.0, -0.005, -0.05, -2.0, -1.0, -0.03])
    }
}

impl RewardWeights {
    /// Defaults with the yaw-tracking weight made positive.
    pub fn sign_corrected() -> Self {
        let mut w = Self::default();
        w.0[1] = 0.5;
        w
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self(self.0.map(|w| w * k))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RewardBreakdown {
    pub terms: [f64; NUM_TERMS],
    pub weights: [f64; NUM_TERMS],
    pub weighted: [f64; NUM_TERMS],
    pub total: f64,
}

/// Mean absolute contact mismatch over the four feet.
pub fn contact_violation(realized: &[u8; 4], desired: &[u8; 4]) -> f64 {
    let diff: u32 = realized
        .iter()
        .zip(desired)
        .map(|(c, d)| u32::from(c != d))
        .sum();
    f64::from(diff) / 4.0
}

pub fn evaluate_step(rec: &StepRecord, w: &RewardWeights) -> Result<RewardBreakdown, RewardError> {
    for (foot, &value) in rec.contacts.iter().chain(&rec.desired_contacts).enumerate() {
        if value > 1 {
            return Err(RewardError::NonBinaryContact {
                foot: foot % 4,
                value,
            });
        }
    }
    let exempt_from_base_stability = rec.gait == Some(GaitType::Bound);
    let hips = Action(rec.action).hips();

    let terms = [
        (-4.0 * ((rec.v_x - rec.v_x_cmd).powi(2) + rec.v_y.powi(2))).exp(),
        (-4.0 * rec.omega_z.powi(2)).exp(),
        contact_violation(&rec.contacts, &rec.desired_contacts),
        rec.action
            .iter()
            .zip(&rec.prev_action)
            .map(|(a, b)| (a - b).powi(2))
            .sum(),
        if exempt_from_base_stability {
            0.0
        } else {
            rec.omega_x.powi(2) + rec.omega_y.powi(2)
        },
        if exempt_from_base_stability {
            0.0
        } else {
            rec.v_z.powi(2)
        },
        rec.body_forces
            .iter()
            .filter(|&&f| f > COLLISION_FORCE_THRESHOLD)
            .count() as f64,
        hips.iter().map(|h| h.abs()).sum(),
    ];
    let weighted: [f64; NUM_TERMS] = std::array::from_fn(|i| w.0[i] * terms[i]);
    Ok(RewardBreakdown {
        terms,
        weights: w.0,
        weighted,
        total: weighted.iter().sum(),
    })
}

/// `Σ_t γ^t · total_t`, `t` starting at 0.
pub fn episode_return(steps: &[RewardBreakdown], gamma: f64) -> Result<f64, RewardError> {
    if steps.is_empty() {
        return Err(RewardError::EmptyEpisode);
    }
    if !(0.0..=1.0).contains(&gamma) {
        return Err(RewardError::Discount(gamma));
    }
    let mut discount = 1.0;
    let mut sum = 0.0;
    for s in steps {
        sum += discount * s.total;
        discount *= gamma;
    }
    Ok(sum)
}
