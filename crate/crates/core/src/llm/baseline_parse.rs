//! Parsers for the two baseline response formats.
//!
//! ```text
//! gait: TROT, velocity: 0.5
//! ```
//!
//! ```text
//! T: 24
//! velocity: 0.5
//! FL: (0.2618, 0.0, 0.2)
//! ...
//! ```

use std::sync::LazyLock;

use regex::Regex;
use thiserror::Error;

use crate::baselines::{SinusoidFoot, SinusoidGaitParams, DEFAULT_SINUSOID_CYCLE};
use crate::pattern::{GaitType, Leg};
use crate::velocity::{Velocity, VelocityError};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum BaselineParseError {
    #[error("no `gait:` field")]
    MissingGait,
    #[error("unknown gait name {0:?}")]
    UnknownGaitName(String),
    #[error("no `velocity:` field")]
    MissingVelocity,
    #[error("velocity: {0}")]
    Velocity(#[from] VelocityError),
    #[error("malformed cycle length {0:?}")]
    MalformedCycle(String),
    #[error("{leg}: malformed tuple {text:?}")]
    MalformedTuple { leg: Leg, text: String },
    #[error("{leg}: expected 3 numbers in tuple, found {found}")]
    WrongTupleCount { leg: Leg, found: usize },
    #[error("no tuple for {0}")]
    MissingFoot(Leg),
}

static GAIT_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)\bgait\s*[:=]\s*([A-Za-z0-9_\-]+)").unwrap());
static VELOCITY_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)\bvelocity\s*[:=]\s*([^,\n]+)").unwrap());
static CYCLE_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?m)^\s*T\s*[:=]\s*(\S+)").unwrap());
static TUPLE_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?m)^\s*(FL|FR|RL|RR)\s*:\s*\(([^)]*)\)?").unwrap());

fn velocity_field(text: &str) -> Result<Velocity, BaselineParseError> {
    let cap = VELOCITY_RE
        .captures(text)
        .ok_or(BaselineParseError::MissingVelocity)?;
    Ok(cap[1].trim().parse()?)
}

/// Parses `gait: <G>, velocity: <v>`. Gait names are matched case-insensitively
/// and `-` is accepted for `_`.
pub fn parse_baseline1(text: &str) -> Result<(GaitType, Velocity), BaselineParseError> {
    let cap = GAIT_RE
        .captures(text)
        .ok_or(BaselineParseError::MissingGait)?;
    let name = cap[1].to_ascii_uppercase().replace('-', "_");
    let gait = GaitType::from_name(&name)
        .ok_or_else(|| BaselineParseError::UnknownGaitName(cap[1].to_string()))?;
    Ok((gait, velocity_field(text)?))
}

/// Parses a sinusoid response. A missing `T:` line falls back to
/// [`DEFAULT_SINUSOID_CYCLE`]; the first tuple for each foot wins.
pub fn parse_baseline2(text: &str) -> Result<(SinusoidGaitParams, Velocity), BaselineParseError> {
    let cycle_len = match CYCLE_RE.captures(text) {
        None => DEFAULT_SINUSOID_CYCLE,
        Some(cap) => match cap[1].parse::<usize>() {
            Ok(n) if n > 0 => n,
            _ => return Err(BaselineParseError::MalformedCycle(cap[1].to_string())),
        },
    };
    let velocity = velocity_field(text)?;

    let mut feet: [Option<SinusoidFoot>; 4] = [None; 4];
    for cap in TUPLE_RE.captures_iter(text) {
        let leg = Leg::from_label(&cap[1]).expect("regex admits leg labels only");
        if feet[leg.index()].is_some() {
            continue;
        }
        let parts: Vec<&str> = cap[2]
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .collect();
        if parts.len() != 3 {
            return Err(BaselineParseError::WrongTupleCount {
                leg,
                found: parts.len(),
            });
        }
        let nums: Vec<f64> = parts
            .iter()
            .map(|p| p.parse::<f64>())
            .collect::<Result<_, _>>()
            .map_err(|_| BaselineParseError::MalformedTuple {
                leg,
                text: cap[2].to_string(),
            })?;
        feet[leg.index()] = Some(SinusoidFoot {
            freq: nums[0],
            phase: nums[1],
            threshold: nums[2],
        });
    }
    let mut out = [SinusoidFoot {
        freq: 0.0,
        phase: 0.0,
        threshold: 0.0,
    }; 4];
    for leg in Leg::ALL {
        out[leg.index()] = feet[leg.index()].ok_or(BaselineParseError::MissingFoot(leg))?;
    }
    Ok((
        SinusoidGaitParams {
            feet: out,
            cycle_len,
        },
        velocity,
    ))
}
