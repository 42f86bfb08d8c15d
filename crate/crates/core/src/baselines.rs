//! Template construction for the two intermediate-parameter interfaces that
//! the contact-pattern interface is compared against.
//!
//! * Discrete gait: the LLM names one of the five gaits and the random
//!   generator produces the template.
//! * Sinusoid: the LLM emits `(a, b, c)` per foot and a foot is on the ground
//!   at in-cycle step `t` iff `sin(a·t + b) <= c`.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generator::{generate, GeneratorConfig};
use crate::pattern::{GaitType, PatternTemplate};

/// Cycle length used when a sinusoid response does not state one.
pub const DEFAULT_SINUSOID_CYCLE: usize = 24;

/// Slack on the contact threshold so that `sin(a·t + b) = c` in exact
/// arithmetic still counts as contact after floating-point rounding.
pub const THRESHOLD_EPS: f64 = 1e-9;

/// One foot's sinusoid: `y(t) = sin(freq·t + phase)`, contact iff `y <= threshold`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SinusoidFoot {
    /// rad/step
    pub freq: f64,
    /// rad
    pub phase: f64,
    pub threshold: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SinusoidGaitParams {
    /// FL, FR, RL, RR.
    pub feet: [SinusoidFoot; 4],
    pub cycle_len: usize,
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum SinusoidError {
    #[error("cycle length must be at least 1")]
    ZeroCycle,
    #[error("foot {0} has a non-finite parameter")]
    NonFinite(usize),
}

impl SinusoidGaitParams {
    pub fn validate(&self) -> Result<(), SinusoidError> {
        if self.cycle_len == 0 {
            return Err(SinusoidError::ZeroCycle);
        }
        for (i, f) in self.feet.iter().enumerate() {
            if ![f.freq, f.phase, f.threshold].iter().all(|v| v.is_finite()) {
                return Err(SinusoidError::NonFinite(i));
            }
        }
        Ok(())
    }
}

/// Discrete-gait interface: delegate to the random generator.
pub fn encode_baseline1<R: Rng + ?Sized>(
    gait: GaitType,
    cfg: &GeneratorConfig,
    rng: &mut R,
) -> PatternTemplate {
    generate(gait, cfg, rng)
}

/// Sinusoid interface: threshold each foot's sine at integer steps `t = 1..=T`.
pub fn encode_baseline2(params: &SinusoidGaitParams) -> Result<PatternTemplate, SinusoidError> {
    params.validate()?;
    let rows = params.feet.map(|foot| {
        (1..=params.cycle_len)
            .map(|t| {
                u8::from(
                    (foot.freq * t as f64 + foot.phase).sin() <= foot.threshold + THRESHOLD_EPS,
                )
            })
            .collect()
    });
    Ok(PatternTemplate::new(rows).expect("rows share the cycle length"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::Leg;
    use std::f64::consts::PI;

    fn uniform(freq: f64, phase: f64, threshold: f64, cycle_len: usize) -> SinusoidGaitParams {
        SinusoidGaitParams {
            feet: [SinusoidFoot {
                freq,
                phase,
                threshold,
            }; 4],
            cycle_len,
        }
    }

    #[test]
    fn one_period_zero_threshold() {
        // sin(2πt/24) <= 0 exactly for t = 12..=24
        let p = encode_baseline2(&uniform(2.0 * PI / 24.0, 0.0, 0.0, 24)).unwrap();
        let expected: Vec<u8> = (1..=24).map(|t| u8::from(t >= 12)).collect();
        assert_eq!(p.row(Leg::FL), expected.as_slice());
        assert_eq!(p.row(Leg::FL).iter().filter(|&&b| b == 1).count(), 13);
    }

    #[test]
    fn threshold_extremes() {
        let all = encode_baseline2(&uniform(0.37, 1.1, 1.0, 30)).unwrap();
        assert_eq!(all, PatternTemplate::filled(30, true));
        let none = encode_baseline2(&uniform(0.37, 1.1, -1.5, 30)).unwrap();
        assert_eq!(none, PatternTemplate::filled(30, false));
    }

    #[test]
    fn rejects_bad_params() {
        assert_eq!(
            encode_baseline2(&uniform(1.0, 0.0, 0.0, 0)),
            Err(SinusoidError::ZeroCycle)
        );
        assert_eq!(
            encode_baseline2(&uniform(f64::NAN, 0.0, 0.0, 4)),
            Err(SinusoidError::NonFinite(0))
        );
    }

    #[test]
    fn baseline1_stand_still_is_all_ones() {
        let cfg = GeneratorConfig::default();
        let p = encode_baseline1(GaitType::StandStill, &cfg, &mut cfg.rng());
        assert!(p.rows().iter().all(|r| r.iter().all(|&b| b == 1)));
    }
}
