//! The discrete forward-velocity command set.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

const MATCH_EPS: f64 = 1e-9;

/// Desired base velocity along the heading, restricted to {-1, -0.5, 0, 0.5, 1} m/s.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Velocity {
    BackwardFast,
    BackwardSlow,
    Zero,
    ForwardSlow,
    ForwardFast,
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum VelocityError {
    #[error("velocity {0} m/s is not one of -1, -0.5, 0, 0.5, 1")]
    NotInSet(f64),
    #[error("cannot read velocity from {0:?}")]
    Malformed(String),
}

impl Velocity {
    pub const ALL: [Velocity; 5] = [
        Velocity::BackwardFast,
        Velocity::BackwardSlow,
        Velocity::Zero,
        Velocity::ForwardSlow,
        Velocity::ForwardFast,
    ];

    pub fn mps(self) -> f64 {
        match self {
            Velocity::BackwardFast => -1.0,
            Velocity::BackwardSlow => -0.5,
            Velocity::Zero => 0.0,
            Velocity::ForwardSlow => 0.5,
            Velocity::ForwardFast => 1.0,
        }
    }

    pub fn from_mps(v: f64) -> Result<Self, VelocityError> {
        Velocity::ALL
            .into_iter()
            .find(|c| (c.mps() - v).abs() < MATCH_EPS)
            .ok_or(VelocityError::NotInSet(v))
    }

    /// Canonical wire spelling: `-1.0`, `-0.5`, `0.0`, `0.5`, `1.0`.
    pub fn as_str(self) -> &'static str {
        match self {
            Velocity::BackwardFast => "-1.0",
            Velocity::BackwardSlow => "-0.5",
            Velocity::Zero => "0.0",
            Velocity::ForwardSlow => "0.5",
            Velocity::ForwardFast => "1.0",
        }
    }
}

impl fmt::Display for Velocity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Velocity {
    type Err = VelocityError;

    /// Accepts a number optionally followed by a unit, e.g. `0.5`, `+1`, `-0.5 m/s`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let token = s.trim().trim_end_matches(|c: char| {
            c.is_alphabetic() || c == '/' || c == ' ' || c == '.' || c == ','
        });
        let token = token.split_whitespace().next().unwrap_or("");
        let v: f64 = token
            .parse()
            .map_err(|_| VelocityError::Malformed(s.trim().to_string()))?;
        Velocity::from_mps(v)
    }
}

impl Serialize for Velocity {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_f64(self.mps())
    }
}

impl<'de> Deserialize<'de> for Velocity {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v = f64::deserialize(d)?;
        Velocity::from_mps(v).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_common_spellings() {
        assert_eq!("0.5".parse(), Ok(Velocity::ForwardSlow));
        assert_eq!("1".parse(), Ok(Velocity::ForwardFast));
        assert_eq!("-0.5 m/s".parse(), Ok(Velocity::BackwardSlow));
        assert_eq!("+1.0".parse(), Ok(Velocity::ForwardFast));
        assert_eq!("-0".parse(), Ok(Velocity::Zero));
        assert_eq!("0.50m/s".parse(), Ok(Velocity::ForwardSlow));
    }

    #[test]
    fn rejects_off_grid_values() {
        assert_eq!("0.7".parse::<Velocity>(), Err(VelocityError::NotInSet(0.7)));
        assert!(matches!(
            "fast".parse::<Velocity>(),
            Err(VelocityError::Malformed(_))
        ));
    }

    #[test]
    fn wire_spelling_round_trips() {
        for v in Velocity::ALL {
            assert_eq!(v.as_str().parse(), Ok(v));
        }
    }
}
