//! Random contact-pattern generator used to expose the controller to the
//! feasible distribution of templates during training.
//!
//! Generation runs in four steps: sample the cycle length `T`, sample the
//! contact ratio `r`, scale per gait, then place and shift the stance runs.

use std::ops::RangeInclusive;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pattern::{GaitType, Leg, PatternTemplate};

const ROUND_EPS: f64 = 1e-9;

/// Fraction of the sampled contact ratio kept for BOUND.
pub const BOUND_CONTACT_SCALE: f64 = 0.6;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ConfigError {
    #[error("cycle length range {0:?} must be non-empty and start at 1 or more")]
    CycleRange(RangeInclusive<usize>),
    #[error("contact ratio range [{0}, {1}] must lie inside (0, 1)")]
    RatioRange(f64, f64),
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub cycle_len: RangeInclusive<usize>,
    pub contact_ratio: (f64, f64),
    pub seed: u64,
    /// Use the BOUND-scaled ratio when computing the rear-leg delay.
    /// Turning this off uses the ratio as sampled.
    pub bound_shift_uses_scaled_ratio: bool,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            cycle_len: 24..=28,
            contact_ratio: (0.5, 0.7),
            seed: 0,
            bound_shift_uses_scaled_ratio: true,
        }
    }
}

impl GeneratorConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.cycle_len.is_empty() || *self.cycle_len.start() < 1 {
            return Err(ConfigError::CycleRange(self.cycle_len.clone()));
        }
        let (lo, hi) = self.contact_ratio;
        if !(lo > 0.0 && hi < 1.0 && lo <= hi) {
            return Err(ConfigError::RatioRange(lo, hi));
        }
        Ok(())
    }

    pub fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }
}

/// Sampled cycle length and contact ratio, before gait-specific scaling.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleParams {
    pub cycle_len: usize,
    pub contact_ratio: f64,
}

/// Where a row's stance run sits before shifting.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Placement {
    /// Ones occupy columns `1..=n`.
    Start,
    /// Ones occupy columns `T'-n+1..=T'`.
    End,
}

/// Fully resolved construction of one template.
#[derive(Clone, Debug, PartialEq)]
pub struct GaitRecipe {
    pub cycle_len: usize,
    pub contact_ratio: f64,
    pub placement: [Placement; 4],
    /// Cyclic right shift per row, in `[0, cycle_len)`.
    pub shift: [usize; 4],
}

impl GaitRecipe {
    pub fn stance_len(&self) -> usize {
        round_half_up(self.cycle_len as f64 * self.contact_ratio).min(self.cycle_len)
    }

    pub fn build(&self) -> PatternTemplate {
        let t = self.cycle_len;
        let n = self.stance_len();
        let rows = std::array::from_fn(|i| {
            let base: Vec<u8> = (0..t)
                .map(|c| match self.placement[i] {
                    Placement::Start => u8::from(c < n),
                    Placement::End => u8::from(c >= t - n),
                })
                .collect();
            let s = self.shift[i] % t;
            (0..t).map(|c| base[(c + t - s) % t]).collect()
        });
        PatternTemplate::new(rows).expect("recipe rows share one length")
    }
}

pub(crate) fn round_half_up(x: f64) -> usize {
    (x + 0.5 + ROUND_EPS).floor().max(0.0) as usize
}

pub fn sample_params<R: Rng + ?Sized>(cfg: &GeneratorConfig, rng: &mut R) -> CycleParams {
    let cycle_len = rng.random_range(cfg.cycle_len.clone());
    let (lo, hi) = cfg.contact_ratio;
    let contact_ratio = if lo == hi {
        lo
    } else {
        rng.random_range(lo..=hi)
    };
    CycleParams {
        cycle_len,
        contact_ratio,
    }
}

/// Scaling and shifting for one gait, given sampled parameters.
///
/// STAND_3LEGS is returned as STAND_STILL's recipe; the lifted row is picked
/// separately in [`generate_with`].
pub fn recipe(
    gait: GaitType,
    params: CycleParams,
    bound_shift_uses_scaled_ratio: bool,
) -> GaitRecipe {
    use Placement::*;
    let CycleParams {
        cycle_len: t,
        contact_ratio: r,
    } = params;
    match gait {
        GaitType::Bound => {
            let scaled = BOUND_CONTACT_SCALE * r;
            let shift_ratio = if bound_shift_uses_scaled_ratio {
                scaled
            } else {
                r
            };
            let delay = round_half_up(0.5 * t as f64 * shift_ratio) % t;
            GaitRecipe {
                cycle_len: t,
                contact_ratio: scaled,
                placement: [Start; 4],
                shift: [0, 0, delay, delay],
            }
        }
        GaitType::Trot => GaitRecipe {
            cycle_len: t,
            contact_ratio: r,
            placement: [Start, End, End, Start],
            shift: [0; 4],
        },
        GaitType::Pace => GaitRecipe {
            cycle_len: round_half_up(0.5 * t as f64).max(1),
            contact_ratio: r,
            placement: [Start, End, Start, End],
            shift: [0; 4],
        },
        GaitType::StandStill | GaitType::Stand3Legs => GaitRecipe {
            cycle_len: t,
            contact_ratio: 1.0,
            placement: [Start; 4],
            shift: [0; 4],
        },
    }
}

/// Builds a template for `gait` from explicit cycle parameters.
///
/// `rng` is consulted only for STAND_3LEGS, to choose the lifted leg.
pub fn generate_with<R: Rng + ?Sized>(
    gait: GaitType,
    params: CycleParams,
    bound_shift_uses_scaled_ratio: bool,
    rng: &mut R,
) -> PatternTemplate {
    let template = recipe(gait, params, bound_shift_uses_scaled_ratio).build();
    if gait != GaitType::Stand3Legs {
        return template;
    }
    let lifted = Leg::ALL[rng.random_range(0..4)];
    let mut rows = template.rows().clone();
    rows[lifted.index()].fill(0);
    PatternTemplate::new(rows).expect("shape unchanged")
}

/// Samples parameters from `rng` and builds a template.
pub fn generate<R: Rng + ?Sized>(
    gait: GaitType,
    cfg: &GeneratorConfig,
    rng: &mut R,
) -> PatternTemplate {
    let params = sample_params(cfg, rng);
    generate_with(gait, params, cfg.bound_shift_uses_scaled_ratio, rng)
}

/// [`generate`] with a fresh RNG seeded from `cfg.seed`.
pub fn generate_seeded(gait: GaitType, cfg: &GeneratorConfig) -> PatternTemplate {
    generate(gait, cfg, &mut cfg.rng())
}
