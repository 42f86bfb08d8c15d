//! Foot-contact pattern templates.
//!
//! A template is a 4×T binary matrix. Rows are ordered FL, FR, RL, RR and each
//! column is one control step (50 Hz). `1` means the foot is on the ground,
//! `0` means it is in the air. The controller never sees the whole template,
//! only a cyclic window of the next `L_w` columns (see [`PatternTemplate::window_at`]).

mod classify;
mod text;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use classify::{classify_gait, classify_range, is_trot_structured, DEFAULT_TOLERANCE};
pub use text::{parse, serialize, ParseError, ParseWarning, ParsedPattern};

/// Default controller look-ahead window, in steps.
pub const DEFAULT_WINDOW_LEN: usize = 5;

/// The five gait families the generator and controller are trained on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum GaitType {
    Bound,
    Trot,
    Pace,
    StandStill,
    #[serde(rename = "STAND_3LEGS")]
    Stand3Legs,
}

impl GaitType {
    pub const ALL: [GaitType; 5] = [
        GaitType::Bound,
        GaitType::Trot,
        GaitType::Pace,
        GaitType::StandStill,
        GaitType::Stand3Legs,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GaitType::Bound => "BOUND",
            GaitType::Trot => "TROT",
            GaitType::Pace => "PACE",
            GaitType::StandStill => "STAND_STILL",
            GaitType::Stand3Legs => "STAND_3LEGS",
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// Case-insensitive lookup; accepts `-` or space in place of `_`.
    pub fn from_name(name: &str) -> Option<Self> {
        let norm: String = name
            .trim()
            .chars()
            .map(|c| {
                if c == '-' || c == ' ' {
                    '_'
                } else {
                    c.to_ascii_uppercase()
                }
            })
            .collect();
        GaitType::ALL.into_iter().find(|g| g.name() == norm)
    }
}

impl fmt::Display for GaitType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Leg / template row identifier, in template row order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Leg {
    FL,
    FR,
    RL,
    RR,
}

impl Leg {
    pub const ALL: [Leg; 4] = [Leg::FL, Leg::FR, Leg::RL, Leg::RR];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        match self {
            Leg::FL => "FL",
            Leg::FR => "FR",
            Leg::RL => "RL",
            Leg::RR => "RR",
        }
    }

    pub fn from_label(label: &str) -> Option<Self> {
        Leg::ALL
            .into_iter()
            .find(|l| l.label().eq_ignore_ascii_case(label.trim()))
    }

    /// Left-right mirror image of this leg.
    pub fn mirrored(self) -> Self {
        match self {
            Leg::FL => Leg::FR,
            Leg::FR => Leg::FL,
            Leg::RL => Leg::RR,
            Leg::RR => Leg::RL,
        }
    }
}

impl fmt::Display for Leg {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A single invariant violation found by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("expected 4 rows, found {0}")]
    RowCount(usize),
    #[error("row {row} has length {len}, expected {expected}")]
    RowLength {
        row: usize,
        len: usize,
        expected: usize,
    },
    #[error("row {row} column {col} holds non-binary value {value}")]
    NonBinary { row: usize, col: usize, value: u8 },
    #[error("template has zero columns")]
    Empty,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("invalid pattern template: {}", .0.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "))]
pub struct InvalidTemplate(pub Vec<Violation>);

/// Checks raw rows against the template invariants and returns every violation.
///
/// The expected row length is taken from the first row.
pub fn validate<R: AsRef<[u8]>>(rows: &[R]) -> Vec<Violation> {
    let mut out = Vec::new();
    if rows.len() != 4 {
        out.push(Violation::RowCount(rows.len()));
    }
    let expected = rows.first().map_or(0, |r| r.as_ref().len());
    if expected == 0 {
        out.push(Violation::Empty);
    }
    for (row, r) in rows.iter().enumerate() {
        let r = r.as_ref();
        if r.len() != expected {
            out.push(Violation::RowLength {
                row,
                len: r.len(),
                expected,
            });
        }
        for (col, &value) in r.iter().enumerate() {
            if value > 1 {
                out.push(Violation::NonBinary { row, col, value });
            }
        }
    }
    out
}

/// A validated 4×T contact pattern template.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Vec<u8>>", into = "Vec<Vec<u8>>")]
pub struct PatternTemplate {
    rows: [Vec<u8>; 4],
}

impl TryFrom<Vec<Vec<u8>>> for PatternTemplate {
    type Error = InvalidTemplate;

    fn try_from(rows: Vec<Vec<u8>>) -> Result<Self, Self::Error> {
        let violations = validate(&rows);
        if !violations.is_empty() {
            return Err(InvalidTemplate(violations));
        }
        let rows: [Vec<u8>; 4] = rows.try_into().expect("row count validated");
        Ok(Self { rows })
    }
}

impl From<PatternTemplate> for Vec<Vec<u8>> {
    fn from(p: PatternTemplate) -> Self {
        p.rows.into()
    }
}

impl PatternTemplate {
    pub fn new(rows: [Vec<u8>; 4]) -> Result<Self, InvalidTemplate> {
        Self::try_from(Vec::from(rows))
    }

    /// Builds a template from `0`/`1` strings, e.g. `["1100", "0011", ...]`.
    pub fn from_strs(rows: [&str; 4]) -> Result<Self, InvalidTemplate> {
        let rows = rows
            .iter()
            .map(|r| r.bytes().map(|b| b.wrapping_sub(b'0')).collect())
            .collect::<Vec<Vec<u8>>>();
        Self::try_from(rows)
    }

    pub fn filled(cycle_len: usize, value: bool) -> Self {
        let row = vec![u8::from(value); cycle_len.max(1)];
        Self {
            rows: [row.clone(), row.clone(), row.clone(), row],
        }
    }

    /// Cycle length `T`.
    pub fn cycle_len(&self) -> usize {
        self.rows[0].len()
    }

    pub fn row(&self, leg: Leg) -> &[u8] {
        &self.rows[leg.index()]
    }

    pub fn rows(&self) -> &[Vec<u8>; 4] {
        &self.rows
    }

    /// Contact flags of all four feet at 0-based column `col` (taken mod T).
    pub fn column(&self, col: usize) -> [u8; 4] {
        let c = col % self.cycle_len();
        [
            self.rows[0][c],
            self.rows[1][c],
            self.rows[2][c],
            self.rows[3][c],
        ]
    }

    /// Sub-template of columns `start..end` (0-based, non-cyclic).
    pub fn slice(&self, start: usize, end: usize) -> Option<Self> {
        if start >= end || end > self.cycle_len() {
            return None;
        }
        let rows = self.rows.clone().map(|r| r[start..end].to_vec());
        Some(Self { rows })
    }

    /// Cyclic look-ahead window at control step `t`.
    ///
    /// Column `j` (1-based) of the window is template column `((t + j - 1) mod T) + 1`
    /// (1-based), so the window at `t = 0` starts at the first template column.
    pub fn window_at(&self, t: usize, len: usize) -> ContactWindow {
        let period = self.cycle_len();
        let start = t % period;
        let rows = self
            .rows
            .each_ref()
            .map(|r| (0..len).map(|j| r[(start + j) % period]).collect());
        ContactWindow { rows }
    }

    pub fn duty_profile(&self) -> DutyProfile {
        let t = self.cycle_len() as f64;
        DutyProfile(self.rows.each_ref().map(|r| ones(r) as f64 / t))
    }

    /// One line per row; `#` for stance, blank for swing.
    pub fn render_ascii(&self) -> String {
        let mut out = String::new();
        for leg in Leg::ALL {
            out.push_str(leg.label());
            out.push_str(" |");
            out.extend(
                self.row(leg)
                    .iter()
                    .map(|&b| if b == 1 { '#' } else { ' ' }),
            );
            out.push_str("|\n");
        }
        out
    }
}

pub(crate) fn ones(row: &[u8]) -> usize {
    row.iter().filter(|&&b| b == 1).count()
}

/// A 4×L_w slice of a template, as fed to the controller.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContactWindow {
    rows: [Vec<u8>; 4],
}

impl ContactWindow {
    pub fn from_rows(rows: [Vec<u8>; 4]) -> Option<Self> {
        let len = rows[0].len();
        let ok = rows
            .iter()
            .all(|r| r.len() == len && r.iter().all(|&b| b <= 1));
        ok.then_some(Self { rows })
    }

    pub fn len(&self) -> usize {
        self.rows[0].len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn row(&self, leg: Leg) -> &[u8] {
        &self.rows[leg.index()]
    }

    pub fn rows(&self) -> &[Vec<u8>; 4] {
        &self.rows
    }

    /// Row-major flattening, FL row first.
    pub fn flatten(&self) -> Vec<u8> {
        self.rows.concat()
    }

    /// First column of the window, i.e. the desired contacts for the next step.
    pub fn first_column(&self) -> [u8; 4] {
        self.rows.each_ref().map(|r| r[0])
    }
}

/// Per-row fraction of stance steps in a template.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DutyProfile(pub [f64; 4]);

impl DutyProfile {
    pub fn get(&self, leg: Leg) -> f64 {
        self.0[leg.index()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_ones_is_valid() {
        assert!(validate(
            &["1111".as_bytes(); 4].map(|r| r.iter().map(|b| b - b'0').collect::<Vec<_>>())
        )
        .is_empty());
    }

    #[test]
    fn short_row_is_reported() {
        let rows = vec![vec![1u8; 4], vec![1; 4], vec![1; 4], vec![1; 3]];
        assert_eq!(
            validate(&rows),
            vec![Violation::RowLength {
                row: 3,
                len: 3,
                expected: 4
            }]
        );
    }

    #[test]
    fn non_binary_entry_is_reported() {
        let rows = vec![vec![2u8, 1, 1, 1], vec![1; 4], vec![1; 4], vec![1; 4]];
        assert_eq!(
            validate(&rows),
            vec![Violation::NonBinary {
                row: 0,
                col: 0,
                value: 2
            }]
        );
    }

    #[test]
    fn wrong_row_count_and_empty() {
        let rows: Vec<Vec<u8>> = vec![vec![], vec![]];
        let v = validate(&rows);
        assert!(v.contains(&Violation::RowCount(2)));
        assert!(v.contains(&Violation::Empty));
    }

    #[test]
    fn window_wraps_cyclically() {
        let p = PatternTemplate::from_strs(["1100", "0011", "0011", "1100"]).unwrap();
        let w = p.window_at(3, 5);
        assert_eq!(w.row(Leg::FL), &[0, 1, 1, 0, 0]);
        assert_eq!(w.row(Leg::FR), &[1, 0, 0, 1, 1]);
    }

    #[test]
    fn window_at_zero_full_length_is_identity() {
        let p = PatternTemplate::from_strs(["1100", "0110", "0011", "1001"]).unwrap();
        assert_eq!(p.window_at(0, 4).rows(), p.rows());
    }

    #[test]
    fn single_step_windows_reconstruct_template() {
        let p = PatternTemplate::from_strs(["11000", "01100", "00110", "10011"]).unwrap();
        let mut rows: [Vec<u8>; 4] = Default::default();
        for t in 0..p.cycle_len() {
            let c = p.window_at(t, 1).first_column();
            for (r, v) in rows.iter_mut().zip(c) {
                r.push(v);
            }
        }
        assert_eq!(&rows, p.rows());
    }

    #[test]
    fn duty_is_fraction_of_ones() {
        let p = PatternTemplate::from_strs(["1100", "1110", "0000", "1111"]).unwrap();
        assert_eq!(p.duty_profile().0, [0.5, 0.75, 0.0, 1.0]);
    }

    #[test]
    fn ascii_rendering() {
        let full = PatternTemplate::filled(6, true).render_ascii();
        let lines: Vec<_> = full.lines().collect();
        assert_eq!(lines.len(), 4);
        assert!(lines.iter().all(|l| l.ends_with("|######|")));

        let three = PatternTemplate::from_strs(["111", "111", "111", "000"])
            .unwrap()
            .render_ascii();
        assert_eq!(three.lines().nth(3), Some("RR |   |"));
    }

    #[test]
    fn gait_names_round_trip() {
        for g in GaitType::ALL {
            assert_eq!(GaitType::from_name(g.name()), Some(g));
        }
        assert_eq!(
            GaitType::from_name("stand still"),
            Some(GaitType::StandStill)
        );
        assert_eq!(GaitType::from_name("WALK"), None);
    }

    #[test]
    fn serde_rejects_invalid_rows() {
        let bad: Result<PatternTemplate, _> = serde_json::from_str("[[1,0],[1,0],[1,0],[1]]");
        assert!(bad.is_err());
        let ok: PatternTemplate = serde_json::from_str("[[1,0],[1,0],[1,0],[1,1]]").unwrap();
        assert_eq!(ok.cycle_len(), 2);
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    pub(crate) fn arb_template() -> impl Strategy<Value = PatternTemplate> {
        (1usize..40).prop_flat_map(|t| {
            proptest::array::uniform4(proptest::collection::vec(0u8..=1, t))
                .prop_map(|rows| PatternTemplate::new(rows).unwrap())
        })
    }

    proptest! {
        #[test]
        fn window_is_periodic(p in arb_template(), t in 0usize..500, lw in 1usize..12) {
            prop_assert_eq!(p.window_at(t, lw), p.window_at(t + p.cycle_len(), lw));
        }

        #[test]
        fn window_columns_follow_modular_index(p in arb_template(), t in 0usize..500, lw in 1usize..12) {
            let w = p.window_at(t, lw);
            for j in 1..=lw {
                let col = (t + j - 1) % p.cycle_len();
                for leg in Leg::ALL {
                    prop_assert_eq!(w.row(leg)[j - 1], p.row(leg)[col]);
                }
            }
        }
    }
}
