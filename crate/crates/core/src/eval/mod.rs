//! Scoring translated templates against per-command expectations.

mod report;

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use report::{
    emit_report, write_report, AccuracyReport, ApproachReport, CommandScore, ReportFormat,
    TrialVerdict, BAR_WIDTH,
};

use crate::llm::{
    translate, Backend, BackendError, PromptSpec, PromptStyle, TranslationResult, TrialError,
};
use crate::pattern::{
    classify_gait, classify_range, is_trot_structured, GaitType, Leg, PatternTemplate,
    DEFAULT_TOLERANCE,
};
use crate::velocity::Velocity;

const TABLE1: &str = include_str!("../../data/suites/table1.json");
const TABLE2: &str = include_str!("../../data/suites/table2.json");

/// Structural check applied to a translated template.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Predicate {
    /// Classifies as the given gait.
    Gait { gait: GaitType },
    /// Three-leg stand with this leg's row all zeros.
    LiftLeg { leg: Leg },
    /// Trot-structured diagonal pairs with at least one all-zero column.
    TrotWithSuspension,
    /// FR row's minimal period strictly shorter than FL's.
    FrontRightFaster,
    /// FL and RR always up, FR and RL always down.
    DiagonalStand,
    /// RR always up and at least one other row moving.
    ThreeLegWalk,
    /// Some split point with a BOUND prefix and a PACE suffix.
    BoundThenPace,
    /// `leg` spends strictly less time on the ground than every other foot,
    /// and the pattern is not a stand.
    LimpLeg { leg: Leg },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum VelocityExpectation {
    AnyOf(Vec<Velocity>),
    Positive,
    Negative,
    Any,
}

impl VelocityExpectation {
    pub fn accepts(&self, v: Velocity) -> bool {
        match self {
            VelocityExpectation::AnyOf(set) => set.contains(&v),
            VelocityExpectation::Positive => v.mps() > 0.0,
            VelocityExpectation::Negative => v.mps() < 0.0,
            VelocityExpectation::Any => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommandCase {
    pub id: u32,
    pub command: String,
    pub predicate: Predicate,
    pub velocity: VelocityExpectation,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Suite {
    pub name: String,
    pub version: u32,
    pub cases: Vec<CommandCase>,
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("unknown suite {0:?} (expected table1 or table2)")]
    UnknownSuite(String),
    #[error("suite has no case with id {0}")]
    UnknownCase(u32),
    #[error("suite repeats case id {0}")]
    DuplicateCase(u32),
    #[error("suite file: {0}")]
    Json(#[from] serde_json::Error),
    #[error("translating case {id}: {source}")]
    Translate {
        id: u32,
        source: crate::llm::TranslateError,
    },
    #[error("case {id}: {source}")]
    Backend { id: u32, source: BackendError },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Suite {
    pub fn from_json(text: &str) -> Result<Self, EvalError> {
        let suite: Suite = serde_json::from_str(text)?;
        let mut seen = HashSet::new();
        for c in &suite.cases {
            if !seen.insert(c.id) {
                return Err(EvalError::DuplicateCase(c.id));
            }
        }
        Ok(suite)
    }

    /// `table1` (the 25 basic and composition commands) or `table2`
    /// (vague instructions, plausibility checks only).
    pub fn builtin(name: &str) -> Result<Self, EvalError> {
        match name {
            "table1" => Self::from_json(TABLE1),
            "table2" => Self::from_json(TABLE2),
            other => Err(EvalError::UnknownSuite(other.to_string())),
        }
    }

    /// A built-in name or a path to a suite file.
    pub fn resolve(name_or_path: &str) -> Result<Self, EvalError> {
        match Self::builtin(name_or_path) {
            Err(EvalError::UnknownSuite(_)) if Path::new(name_or_path).is_file() => {
                Self::from_json(&std::fs::read_to_string(name_or_path)?)
            }
            other => other,
        }
    }

    pub fn case(&self, id: u32) -> Result<&CommandCase, EvalError> {
        self.cases
            .iter()
            .find(|c| c.id == id)
            .ok_or(EvalError::UnknownCase(id))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Correct,
    Incorrect(String),
}

impl Verdict {
    pub fn is_correct(&self) -> bool {
        matches!(self, Verdict::Correct)
    }
}

fn is_constant(row: &[u8]) -> bool {
    row.windows(2).all(|w| w[0] == w[1])
}

/// Smallest `p >= 1` with `row[i] == row[(i + p) % n]` for all `i`.
pub fn minimal_period(row: &[u8]) -> usize {
    let n = row.len();
    (1..=n)
        .find(|&p| (0..n).all(|i| row[i] == row[(i + p) % n]))
        .unwrap_or(n)
}

fn structure_reason(predicate: &Predicate, p: &PatternTemplate) -> Option<String> {
    let row = |leg| p.row(leg);
    let all = |leg, bit: u8| row(leg).iter().all(|&b| b == bit);
    match predicate {
        Predicate::Gait { gait } => {
            let got = classify_gait(p, DEFAULT_TOLERANCE);
            (got != Some(*gait)).then(|| match got {
                Some(g) => format!("classified as {g}, expected {gait}"),
                None => format!("unclassified, expected {gait}"),
            })
        }
        Predicate::LiftLeg { leg } => {
            let ok =
                classify_gait(p, DEFAULT_TOLERANCE) == Some(GaitType::Stand3Legs) && all(*leg, 0);
            (!ok).then(|| format!("expected only {leg} lifted"))
        }
        Predicate::TrotWithSuspension => {
            if !is_trot_structured(p) {
                Some("diagonal pairs do not alternate".into())
            } else if !(0..p.cycle_len()).any(|c| p.column(c) == [0; 4]) {
                Some("no all-zero column".into())
            } else {
                None
            }
        }
        Predicate::FrontRightFaster => {
            let (fr, fl) = (minimal_period(row(Leg::FR)), minimal_period(row(Leg::FL)));
            (fr >= fl).then(|| format!("FR period {fr} not shorter than FL period {fl}"))
        }
        Predicate::DiagonalStand => {
            let ok = all(Leg::FL, 0) && all(Leg::RR, 0) && all(Leg::FR, 1) && all(Leg::RL, 1);
            (!ok).then(|| "expected FR and RL down, FL and RR up".into())
        }
        Predicate::ThreeLegWalk => {
            if !all(Leg::RR, 0) {
                Some("RR touches the ground".into())
            } else if [Leg::FL, Leg::FR, Leg::RL]
                .iter()
                .all(|&l| is_constant(row(l)))
            {
                Some("no other leg moves".into())
            } else {
                None
            }
        }
        Predicate::BoundThenPace => {
            let t = p.cycle_len();
            let split = (1..t).any(|k| {
                classify_range(p, 0, k, DEFAULT_TOLERANCE) == Some(GaitType::Bound)
                    && classify_range(p, k, t, DEFAULT_TOLERANCE) == Some(GaitType::Pace)
            });
            (!split).then(|| "no BOUND prefix followed by PACE suffix".into())
        }
        Predicate::LimpLeg { leg } => {
            let duty = p.duty_profile();
            let mine = duty.get(*leg);
            let others_higher = Leg::ALL
                .into_iter()
                .filter(|l| l != leg)
                .all(|l| duty.get(l) > mine);
            let moving = p.rows().iter().any(|r| !is_constant(r));
            (!(others_higher && moving))
                .then(|| format!("{leg} is not the least loaded foot of a moving pattern"))
        }
    }
}

/// Deterministic verdict for one translated trial.
pub fn expected_predicate(case: &CommandCase, result: &TranslationResult) -> Verdict {
    if let Some(reason) = structure_reason(&case.predicate, &result.template) {
        return Verdict::Incorrect(reason);
    }
    if !case.velocity.accepts(result.velocity) {
        return Verdict::Incorrect(format!("velocity {} not accepted", result.velocity));
    }
    Verdict::Correct
}

/// Looks a case up by id and scores `result` against it.
pub fn verdict_for(
    suite: &Suite,
    id: u32,
    result: &TranslationResult,
) -> Result<Verdict, EvalError> {
    Ok(expected_predicate(suite.case(id)?, result))
}

/// Runs every case of `suite` through `backend` for each style.
///
/// Missing fixtures and parse failures count as incorrect trials; an
/// unreachable backend aborts the run.
pub fn run_suite(
    styles: &[PromptStyle],
    backend: &dyn Backend,
    suite: &Suite,
    trials: usize,
    seed: u64,
) -> Result<AccuracyReport, EvalError> {
    let mut approaches = Vec::with_capacity(styles.len());
    for &style in styles {
        let spec = PromptSpec::builtin(style);
        let mut commands = Vec::with_capacity(suite.cases.len());
        for case in &suite.cases {
            let outcomes =
                translate(backend, &spec, &case.command, trials, seed).map_err(|source| {
                    EvalError::Translate {
                        id: case.id,
                        source,
                    }
                })?;
            let mut verdicts = Vec::with_capacity(trials);
            for (k, outcome) in outcomes.into_iter().enumerate() {
                let verdict = match outcome {
                    Ok(r) => expected_predicate(case, &r),
                    Err(TrialError::Backend(e @ BackendError::Unreachable(_))) => {
                        return Err(EvalError::Backend {
                            id: case.id,
                            source: e,
                        })
                    }
                    Err(e) => Verdict::Incorrect(e.to_string()),
                };
                verdicts.push(TrialVerdict::new(k + 1, verdict));
            }
            commands.push(CommandScore::new(case.id, &case.command, verdicts));
        }
        approaches.push(ApproachReport::new(style, commands));
    }
    Ok(AccuracyReport {
        suite: suite.name.clone(),
        suite_version: suite.version,
        trials,
        approaches,
    })
}
