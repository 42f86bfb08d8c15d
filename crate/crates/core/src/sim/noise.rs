//! Additive uniform observation and gain noise for domain randomization.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mdp::{Observation, PdGains};

/// Closed interval `[lo, hi]` for one noise component.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseRange {
    pub lo: f64,
    pub hi: f64,
}

impl NoiseRange {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub const ZERO: NoiseRange = NoiseRange::new(0.0, 0.0);

    pub fn contains(&self, x: f64) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        if self.lo == self.hi {
            self.lo
        } else {
            rng.random_range(self.lo..=self.hi)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Error)]
#[error("noise range {name} has lo {lo} > hi {hi}")]
pub struct NoiseRangeError {
    pub name: &'static str,
    pub lo: f64,
    pub hi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseConfig {
    pub base_lin_vel: NoiseRange,
    pub base_ang_vel: NoiseRange,
    pub gravity: NoiseRange,
    pub joint_pos: NoiseRange,
    pub joint_vel: NoiseRange,
    pub kp: NoiseRange,
    pub kd: NoiseRange,
}

impl Default for NoiseConfig {
    fn default() -> Self {
        Self {
            base_lin_vel: NoiseRange::new(-2.0, 2.0),
            base_ang_vel: NoiseRange::new(-0.25, 0.25),
            gravity: NoiseRange::new(-1.0, 1.0),
            joint_pos: NoiseRange::new(-1.0, 1.0),
            joint_vel: NoiseRange::new(-0.05, 0.05),
            kp: NoiseRange::new(-5.0, 0.0),
            kd: NoiseRange::new(0.0, 0.25),
        }
    }
}

impl NoiseConfig {
    pub fn none() -> Self {
        Self {
            base_lin_vel: NoiseRange::ZERO,
            base_ang_vel: NoiseRange::ZERO,
            gravity: NoiseRange::ZERO,
            joint_pos: NoiseRange::ZERO,
            joint_vel: NoiseRange::ZERO,
            kp: NoiseRange::ZERO,
            kd: NoiseRange::ZERO,
        }
    }

    pub fn validate(&self) -> Result<(), NoiseRangeError> {
        let named = [
            ("base_lin_vel", self.base_lin_vel),
            ("base_ang_vel", self.base_ang_vel),
            ("gravity", self.gravity),
            ("joint_pos", self.joint_pos),
            ("joint_vel", self.joint_vel),
            ("kp", self.kp),
            ("kd", self.kd),
        ];
        match named.into_iter().find(|(_, r)| r.lo > r.hi) {
            Some((name, r)) => Err(NoiseRangeError {
                name,
                lo: r.lo,
                hi: r.hi,
            }),
            None => Ok(()),
        }
    }
}

fn jitter<R: Rng + ?Sized, const N: usize>(v: &mut [f64; N], range: NoiseRange, rng: &mut R) {
    for x in v {
        *x += range.sample(rng);
    }
}

/// Adds noise to angular velocity, gravity, joint positions and joint
/// velocities. Command, previous action and contact window are untouched.
pub fn perturb_observation<R: Rng + ?Sized>(
    obs: &Observation,
    cfg: &NoiseConfig,
    rng: &mut R,
) -> Observation {
    let mut out = obs.clone();
    jitter(&mut out.base_ang_vel, cfg.base_ang_vel, rng);
    jitter(&mut out.gravity, cfg.gravity, rng);
    jitter(&mut out.joint_pos, cfg.joint_pos, rng);
    jitter(&mut out.joint_vel, cfg.joint_vel, rng);
    out
}

/// Base linear velocity is not a policy input; it is perturbed separately
/// for consumers that observe it.
pub fn perturb_base_lin_vel<R: Rng + ?Sized>(
    v: [f64; 3],
    cfg: &NoiseConfig,
    rng: &mut R,
) -> [f64; 3] {
    let mut out = v;
    jitter(&mut out, cfg.base_lin_vel, rng);
    out
}

pub fn perturb_gains<R: Rng + ?Sized>(gains: PdGains, cfg: &NoiseConfig, rng: &mut R) -> PdGains {
    PdGains {
        kp: gains.kp + cfg.kp.sample(rng),
        kd: gains.kd + cfg.kd.sample(rng),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn zero_width_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut obs = Observation::zeroed();
        obs.gravity = [0.0, 0.0, -1.0];
        obs.joint_pos = [0.3; 12];
        assert_eq!(
            perturb_observation(&obs, &NoiseConfig::none(), &mut rng),
            obs
        );
        assert_eq!(
            perturb_gains(PdGains::default(), &NoiseConfig::none(), &mut rng),
            PdGains::default()
        );
    }

    #[test]
    fn unlisted_components_untouched() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut obs = Observation::zeroed();
        obs.command = [0.5, 0.0, 0.0];
        obs.prev_action = [0.1; 12];
        obs.contact_window[0] = [1, 0, 1, 0, 1];
        let p = perturb_observation(&obs, &NoiseConfig::default(), &mut rng);
        assert_eq!(p.command, obs.command);
        assert_eq!(p.prev_action, obs.prev_action);
        assert_eq!(p.contact_window, obs.contact_window);
        assert_ne!(p.joint_pos, obs.joint_pos);
    }

    #[test]
    fn kp_noise_within_range() {
        let cfg = NoiseConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10_000 {
            let g = perturb_gains(PdGains::default(), &cfg, &mut rng);
            assert!((15.0..=20.0).contains(&g.kp));
            assert!((0.5..=0.75).contains(&g.kd));
        }
    }

    #[test]
    fn gravity_noise_mean_near_zero() {
        // sd of U(-1,1) is 1/sqrt(3); over 100k draws the mean has sd ~0.0018
        let cfg = NoiseConfig::default();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let n = 100_000;
        let mean = (0..n).map(|_| cfg.gravity.sample(&mut rng)).sum::<f64>() / n as f64;
        assert!(mean.abs() <= 0.03, "{mean}");
    }

    #[test]
    fn inverted_range_rejected() {
        let cfg = NoiseConfig {
            kd: NoiseRange::new(0.3, 0.1),
            ..Default::default()
        };
        assert_eq!(cfg.validate().unwrap_err().name, "kd");
        assert!(NoiseConfig::default().validate().is_ok());
    }
}
