//! Text wire format for a template plus its velocity command.
//!
//! ```text
//! velocity: 0.5
//! FL: 111111000000
//! FR: 000000111111
//! RL: 000000111111
//! RR: 111111000000
//! ```
//!
//! The parser accepts the block embedded in surrounding prose. It anchors on
//! the first `velocity:` line and reads the labeled rows that follow it.
//! Blank lines and markdown code fences inside the block are skipped.

use std::fmt;

use thiserror::Error;

use super::{Leg, PatternTemplate};
use crate::velocity::{Velocity, VelocityError};

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ParseError {
    #[error("no `velocity:` line found")]
    MissingVelocity,
    #[error("malformed velocity value {0:?}")]
    MalformedVelocity(String),
    #[error("velocity {0} m/s is outside the discrete set")]
    VelocityNotInSet(f64),
    #[error("row {0} is missing")]
    MissingRow(Leg),
    #[error("row {leg} contains non-binary character {ch:?}")]
    NonBinaryChar { leg: Leg, ch: char },
    #[error("row {0} is empty")]
    EmptyRow(Leg),
    #[error("row {leg} has length {found}, FL has {expected}")]
    RowLengthMismatch {
        leg: Leg,
        expected: usize,
        found: usize,
    },
}

impl From<VelocityError> for ParseError {
    fn from(e: VelocityError) -> Self {
        match e {
            VelocityError::NotInSet(v) => ParseError::VelocityNotInSet(v),
            VelocityError::Malformed(s) => ParseError::MalformedVelocity(s),
        }
    }
}

/// Non-fatal oddities noticed while parsing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseWarning {
    /// A labeled bit row that is not one of FL/FR/RL/RR, e.g. `S: 0000`.
    ExtraRow { label: String, bits: String },
    /// A canonical label appeared again after its first occurrence.
    DuplicateRow(Leg),
}

impl fmt::Display for ParseWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseWarning::ExtraRow { label, bits } => {
                write!(f, "ignored extra row {label}: {bits}")
            }
            ParseWarning::DuplicateRow(leg) => write!(f, "ignored repeated row {leg}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ParsedPattern {
    pub template: PatternTemplate,
    pub velocity: Velocity,
    pub warnings: Vec<ParseWarning>,
}

pub fn serialize(template: &PatternTemplate, velocity: Velocity) -> String {
    let mut out = format!("velocity: {velocity}\n");
    for leg in Leg::ALL {
        out.push_str(leg.label());
        out.push_str(": ");
        out.extend(
            template
                .row(leg)
                .iter()
                .map(|&b| if b == 1 { '1' } else { '0' }),
        );
        out.push('\n');
    }
    out
}

/// Splits `label: value` where the label is a bare alphabetic token.
fn labeled(line: &str) -> Option<(&str, &str)> {
    let (label, value) = line.trim().split_once(':')?;
    let label = label.trim().trim_matches('*');
    let ok = !label.is_empty() && label.chars().all(|c| c.is_ascii_alphabetic() || c == '_');
    ok.then_some((label, value.trim()))
}

fn is_bit_string(s: &str) -> bool {
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    !compact.is_empty() && compact.chars().all(|c| c.is_ascii_digit())
}

pub fn parse(text: &str) -> Result<ParsedPattern, ParseError> {
    let mut lines = text.lines();
    let velocity_value = lines
        .by_ref()
        .find_map(|l| {
            labeled(l)
                .filter(|(k, _)| k.eq_ignore_ascii_case("velocity"))
                .map(|(_, v)| v)
        })
        .ok_or(ParseError::MissingVelocity)?;
    let velocity: Velocity = velocity_value.parse()?;

    let mut rows: [Option<&str>; 4] = [None; 4];
    let mut warnings = Vec::new();
    for line in lines {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with("```") {
            continue;
        }
        let Some((label, value)) = labeled(trimmed) else {
            break;
        };
        match Leg::from_label(label) {
            Some(leg) if rows[leg.index()].is_none() => rows[leg.index()] = Some(value),
            Some(leg) => warnings.push(ParseWarning::DuplicateRow(leg)),
            None if is_bit_string(value) => warnings.push(ParseWarning::ExtraRow {
                label: label.to_string(),
                bits: value.to_string(),
            }),
            None => break,
        }
    }

    let mut bits: Vec<Vec<u8>> = Vec::with_capacity(4);
    for leg in Leg::ALL {
        let raw = rows[leg.index()].ok_or(ParseError::MissingRow(leg))?;
        let row = raw
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(|ch| match ch {
                '0' => Ok(0u8),
                '1' => Ok(1u8),
                _ => Err(ParseError::NonBinaryChar { leg, ch }),
            })
            .collect::<Result<Vec<u8>, _>>()?;
        if row.is_empty() {
            return Err(ParseError::EmptyRow(leg));
        }
        if let Some(first) = bits.first() {
            if first.len() != row.len() {
                return Err(ParseError::RowLengthMismatch {
                    leg,
                    expected: first.len(),
                    found: row.len(),
                });
            }
        }
        bits.push(row);
    }
    let template = PatternTemplate::try_from(bits).expect("rows checked above");
    Ok(ParsedPattern {
        template,
        velocity,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trot() -> PatternTemplate {
        PatternTemplate::from_strs([
            "111111000000",
            "000000111111",
            "000000111111",
            "111111000000",
        ])
        .unwrap()
    }

    #[test]
    fn serialize_layout() {
        let text = serialize(&trot(), Velocity::ForwardSlow);
        assert_eq!(
            text,
            "velocity: 0.5\nFL: 111111000000\nFR: 000000111111\nRL: 000000111111\nRR: 111111000000\n"
        );
    }

    #[test]
    fn round_trip() {
        let p = parse(&serialize(&trot(), Velocity::ForwardSlow)).unwrap();
        assert_eq!(p.template, trot());
        assert_eq!(p.velocity, Velocity::ForwardSlow);
        assert!(p.warnings.is_empty());
    }

    #[test]
    fn block_inside_prose() {
        let text = format!(
            "Sure! Here is the pattern for a slow trot:\n\n```\n{}```\nLet me know if you need changes.",
            serialize(&trot(), Velocity::ForwardSlow)
        );
        assert_eq!(parse(&text).unwrap().template, trot());
    }

    #[test]
    fn extra_suspension_row_is_a_warning() {
        let text = format!("{}S: 000000000000\n", serialize(&trot(), Velocity::Zero));
        let p = parse(&text).unwrap();
        assert_eq!(p.template, trot());
        assert_eq!(
            p.warnings,
            vec![ParseWarning::ExtraRow {
                label: "S".into(),
                bits: "000000000000".into()
            }]
        );
    }

    #[test]
    fn error_cases() {
        assert_eq!(parse("FL: 1111"), Err(ParseError::MissingVelocity));
        assert_eq!(
            parse("velocity: 0.7\nFL: 1\nFR: 1\nRL: 1\nRR: 1"),
            Err(ParseError::VelocityNotInSet(0.7))
        );
        assert_eq!(
            parse("velocity: 0\nF-L: 1111\nFR: 1111\nRL: 1111\nRR: 1111"),
            Err(ParseError::MissingRow(Leg::FL))
        );
        assert_eq!(
            parse("velocity: 0\nFL: 1121\nFR: 1111\nRL: 1111\nRR: 1111"),
            Err(ParseError::NonBinaryChar {
                leg: Leg::FL,
                ch: '2'
            })
        );
        assert_eq!(
            parse("velocity: 0\nFL: 1111\nFR: 1111\nRL: 1111\nRR: 111"),
            Err(ParseError::RowLengthMismatch {
                leg: Leg::RR,
                expected: 4,
                found: 3
            })
        );
        assert_eq!(
            parse("velocity: 0\nFL:\nFR: 1111\nRL: 1111\nRR: 111"),
            Err(ParseError::EmptyRow(Leg::FL))
        );
    }

    #[test]
    fn spaced_bits_are_accepted() {
        let p =
            parse("velocity: 1.0\nFL: 1 1 0 0\nFR: 0 0 1 1\nRL: 0 0 1 1\nRR: 1 1 0 0\n").unwrap();
        assert_eq!(p.template.row(Leg::FL), &[1, 1, 0, 0]);
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use crate::pattern::proptests::arb_template;
    use proptest::prelude::*;

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn parse_inverts_serialize(p in arb_template(), vi in 0usize..5) {
            let v = Velocity::ALL[vi];
            let back = parse(&serialize(&p, v)).unwrap();
            prop_assert_eq!(back.template, p);
            prop_assert_eq!(back.velocity, v);
        }
    }
}
