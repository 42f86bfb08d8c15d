//! Accuracy reports and their JSON, CSV and ASCII-bar renderings.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::Verdict;
use crate::llm::PromptStyle;

/// Width of a full (accuracy 1.0) ASCII bar.
pub const BAR_WIDTH: usize = 20;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialVerdict {
    pub trial: usize,
    pub correct: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub reason: Option<String>,
}

impl TrialVerdict {
    pub fn new(trial: usize, verdict: Verdict) -> Self {
        match verdict {
            Verdict::Correct => Self {
                trial,
                correct: true,
                reason: None,
            },
            Verdict::Incorrect(r) => Self {
                trial,
                correct: false,
                reason: Some(r),
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CommandScore {
    pub id: u32,
    pub command: String,
    pub correct: usize,
    pub trials: usize,
    pub accuracy: f64,
    pub verdicts: Vec<TrialVerdict>,
}

impl CommandScore {
    pub fn new(id: u32, command: &str, verdicts: Vec<TrialVerdict>) -> Self {
        let correct = verdicts.iter().filter(|v| v.correct).count();
        let trials = verdicts.len();
        let accuracy = if trials == 0 {
            0.0
        } else {
            correct as f64 / trials as f64
        };
        Self {
            id,
            command: command.to_string(),
            correct,
            trials,
            accuracy,
            verdicts,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApproachReport {
    pub approach: PromptStyle,
    /// Mean of the per-command accuracies.
    pub aggregate: f64,
    pub commands: Vec<CommandScore>,
}

impl ApproachReport {
    pub fn new(approach: PromptStyle, commands: Vec<CommandScore>) -> Self {
        let aggregate = if commands.is_empty() {
            0.0
        } else {
            commands.iter().map(|c| c.accuracy).sum::<f64>() / commands.len() as f64
        };
        Self {
            approach,
            aggregate,
            commands,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AccuracyReport {
    pub suite: String,
    pub suite_version: u32,
    pub trials: usize,
    pub approaches: Vec<ApproachReport>,
}

impl AccuracyReport {
    pub fn approach(&self, style: PromptStyle) -> Option<&ApproachReport> {
        self.approaches.iter().find(|a| a.approach == style)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Json,
    Csv,
    Ascii,
}

impl ReportFormat {
    /// Guesses the format from a file extension; anything unknown is JSON.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some("csv") => ReportFormat::Csv,
            Some("txt") => ReportFormat::Ascii,
            _ => ReportFormat::Json,
        }
    }
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(ReportFormat::Json),
            "csv" => Ok(ReportFormat::Csv),
            "ascii" | "ascii-bars" => Ok(ReportFormat::Ascii),
            other => Err(format!(
                "unknown report format {other:?} (expected json, csv or ascii)"
            )),
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn bar(acc: f64) -> String {
    let n = ((acc * BAR_WIDTH as f64).round() as usize).min(BAR_WIDTH);
    format!("{}{}", "#".repeat(n), " ".repeat(BAR_WIDTH - n))
}

/// Renders `report`. Output bytes depend only on the report contents.
pub fn emit_report(report: &AccuracyReport, format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        ReportFormat::Csv => {
            let mut s = String::from("id,command");
            for a in &report.approaches {
                write!(s, ",{}", a.approach).unwrap();
            }
            s.push('\n');
            let Some(first) = report.approaches.first() else {
                return s;
            };
            for (i, c) in first.commands.iter().enumerate() {
                write!(s, "{},{}", c.id, csv_field(&c.command)).unwrap();
                for a in &report.approaches {
                    write!(s, ",{:.2}", a.commands[i].accuracy).unwrap();
                }
                s.push('\n');
            }
            s
        }
        ReportFormat::Ascii => {
            let mut s = String::new();
            for a in &report.approaches {
                writeln!(
                    s,
                    "{} ({}, {} trials per command)",
                    a.approach, report.suite, report.trials
                )
                .unwrap();
                writeln!(s, "  all |{}| {:.2}", bar(a.aggregate), a.aggregate).unwrap();
                for c in &a.commands {
                    writeln!(s, "  {:>3} |{}| {:.2}", c.id, bar(c.accuracy), c.accuracy).unwrap();
                }
            }
            s
        }
    }
}

pub fn write_report(
    report: &AccuracyReport,
    format: ReportFormat,
    path: &Path,
) -> std::io::Result<()> {
    std::fs::write(path, emit_report(report, format))
}
