//! Prompt assembly from versioned text blocks.
//!
//! Every prompt has four blocks in a fixed order: a general instruction, the
//! gait definitions, an output-format definition and worked examples. The
//! two baseline prompts differ from the main one only in the output format
//! and the example outputs.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::generator::{generate_with, CycleParams};
use crate::pattern::{serialize, GaitType};
use crate::velocity::Velocity;

pub const PROMPT_VERSION: &str = "v1";

const GENERAL: &str = include_str!("../../data/prompts/v1/general.txt");
const GAIT_DEFINITION: &str = include_str!("../../data/prompts/v1/gait_definition.txt");
const OUTPUT_MAIN: &str = include_str!("../../data/prompts/v1/output_main.txt");
const OUTPUT_BASELINE1: &str = include_str!("../../data/prompts/v1/output_baseline1.txt");
const OUTPUT_BASELINE2: &str = include_str!("../../data/prompts/v1/output_baseline2.txt");
const EXAMPLES_MAIN: &str = include_str!("../../data/prompts/v1/examples_main.toml");
const EXAMPLES_BASELINE1: &str = include_str!("../../data/prompts/v1/examples_baseline1.toml");
const EXAMPLES_BASELINE2: &str = include_str!("../../data/prompts/v1/examples_baseline2.toml");

/// Which interface the LLM is asked to produce.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PromptStyle {
    /// Full contact-pattern template.
    Main,
    /// One of the five discrete gait names.
    Baseline1,
    /// Four sinusoid `(a, b, c)` tuples.
    Baseline2,
}

impl PromptStyle {
    pub const ALL: [PromptStyle; 3] = [
        PromptStyle::Main,
        PromptStyle::Baseline1,
        PromptStyle::Baseline2,
    ];

    /// Directory / file stem used for fixtures and reports.
    pub fn key(self) -> &'static str {
        match self {
            PromptStyle::Main => "main",
            PromptStyle::Baseline1 => "baseline1",
            PromptStyle::Baseline2 => "baseline2",
        }
    }
}

impl fmt::Display for PromptStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for PromptStyle {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "main" => Ok(PromptStyle::Main),
            "b1" | "baseline1" => Ok(PromptStyle::Baseline1),
            "b2" | "baseline2" => Ok(PromptStyle::Baseline2),
            other => Err(format!(
                "unknown prompt style {other:?} (expected main, b1 or b2)"
            )),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PromptExample {
    pub command: String,
    pub output: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PromptSpec {
    pub style: PromptStyle,
    pub general: String,
    pub gait_definition: String,
    pub output_format: String,
    pub examples: Vec<PromptExample>,
}

#[derive(Debug, Error)]
pub enum PromptError {
    #[error("main prompt needs exactly 3 examples, found {0}")]
    ExampleCount(usize),
    #[error("gait definition does not mention {0}")]
    MissingGait(GaitType),
    #[error("gait definition does not tie bounding to excitement")]
    MissingExcitementLink,
    #[error("example file: {0}")]
    Examples(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Deserialize)]
struct MainExamples {
    example: Vec<MainExample>,
}

#[derive(Deserialize)]
struct MainExample {
    command: String,
    gait: GaitType,
    cycle_len: usize,
    contact_ratio: f64,
    velocity: Velocity,
}

#[derive(Deserialize)]
struct LiteralExamples {
    example: Vec<PromptExample>,
}

fn main_examples(toml_text: &str) -> Result<Vec<PromptExample>, PromptError> {
    let parsed: MainExamples =
        toml::from_str(toml_text).map_err(|e| PromptError::Examples(e.to_string()))?;
    Ok(parsed
        .example
        .into_iter()
        .map(|e| {
            // generator output is deterministic for the three example gaits
            let mut rng = <rand_chacha::ChaCha8Rng as rand::SeedableRng>::seed_from_u64(0);
            let params = CycleParams {
                cycle_len: e.cycle_len,
                contact_ratio: e.contact_ratio,
            };
            let template = generate_with(e.gait, params, true, &mut rng);
            PromptExample {
                command: e.command,
                output: serialize(&template, e.velocity).trim_end().to_string(),
            }
        })
        .collect())
}

fn literal_examples(toml_text: &str) -> Result<Vec<PromptExample>, PromptError> {
    let parsed: LiteralExamples =
        toml::from_str(toml_text).map_err(|e| PromptError::Examples(e.to_string()))?;
    Ok(parsed
        .example
        .into_iter()
        .map(|e| PromptExample {
            command: e.command,
            output: e.output.trim().to_string(),
        })
        .collect())
}

impl PromptSpec {
    /// The prompt shipped with this crate.
    pub fn builtin(style: PromptStyle) -> Self {
        let (output, examples) = match style {
            PromptStyle::Main => (OUTPUT_MAIN, main_examples(EXAMPLES_MAIN)),
            PromptStyle::Baseline1 => (OUTPUT_BASELINE1, literal_examples(EXAMPLES_BASELINE1)),
            PromptStyle::Baseline2 => (OUTPUT_BASELINE2, literal_examples(EXAMPLES_BASELINE2)),
        };
        Self {
            style,
            general: GENERAL.trim().to_string(),
            gait_definition: GAIT_DEFINITION.trim().to_string(),
            output_format: output.trim().to_string(),
            examples: examples.expect("bundled examples parse"),
        }
    }

    /// Loads a prompt from a directory laid out like `data/prompts/v1`.
    pub fn load_dir(dir: &Path, style: PromptStyle) -> Result<Self, PromptError> {
        let read = |name: &str| std::fs::read_to_string(dir.join(name));
        let examples_text = read(&format!("examples_{}.toml", style.key()))?;
        let examples = match style {
            PromptStyle::Main => main_examples(&examples_text)?,
            _ => literal_examples(&examples_text)?,
        };
        let spec = Self {
            style,
            general: read("general.txt")?.trim().to_string(),
            gait_definition: read("gait_definition.txt")?.trim().to_string(),
            output_format: read(&format!("output_{}.txt", style.key()))?
                .trim()
                .to_string(),
            examples,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<(), PromptError> {
        if self.style == PromptStyle::Main && self.examples.len() != 3 {
            return Err(PromptError::ExampleCount(self.examples.len()));
        }
        for g in GaitType::ALL {
            if !self.gait_definition.contains(g.name()) {
                return Err(PromptError::MissingGait(g));
            }
        }
        let lower = self.gait_definition.to_lowercase();
        if !(lower.contains("bound") && lower.contains("excite")) {
            return Err(PromptError::MissingExcitementLink);
        }
        Ok(())
    }
}

pub fn build_prompt(spec: &PromptSpec) -> String {
    let mut out = String::new();
    for block in [&spec.general, &spec.gait_definition, &spec.output_format] {
        out.push_str(block);
        out.push_str("\n\n");
    }
    out.push_str("Examples:");
    for ex in &spec.examples {
        out.push_str("\n\nInput: ");
        out.push_str(&ex.command);
        out.push_str("\nOutput:\n");
        out.push_str(&ex.output);
    }
    out.push('\n');
    out
}
