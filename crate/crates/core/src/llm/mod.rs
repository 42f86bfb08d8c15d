//! Natural-language command → contact-pattern template, via an LLM.

mod backend;
mod baseline_parse;
mod prompt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

pub use backend::{
    command_slug, Backend, BackendConfig, BackendError, BackendKind, ConfigError, FixtureBackend,
    RemoteBackend, API_KEY_ENV,
};
pub use baseline_parse::{parse_baseline1, parse_baseline2, BaselineParseError};
pub use prompt::{
    build_prompt, PromptError, PromptExample, PromptSpec, PromptStyle, PROMPT_VERSION,
};

use crate::baselines::{encode_baseline1, encode_baseline2, SinusoidError, SinusoidGaitParams};
use crate::generator::GeneratorConfig;
use crate::pattern::{parse, GaitType, ParseError, PatternTemplate};
use crate::velocity::Velocity;

/// A successfully interpreted response.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TranslationResult {
    pub template: PatternTemplate,
    pub velocity: Velocity,
    pub raw: String,
    /// Non-fatal parse notes, e.g. an extra row that was ignored.
    pub diagnostics: Vec<String>,
    /// The named gait, for discrete-gait responses.
    pub gait: Option<GaitType>,
    /// The tuples, for sinusoid responses.
    pub sinusoid: Option<SinusoidGaitParams>,
}

#[derive(Clone, Debug, PartialEq, Error)]
pub enum ResponseError {
    #[error(transparent)]
    Pattern(#[from] ParseError),
    #[error(transparent)]
    Baseline(#[from] BaselineParseError),
    #[error(transparent)]
    Sinusoid(#[from] SinusoidError),
}

/// Why one trial produced no template. Recorded per trial; never aborts a batch.
#[derive(Clone, Debug, PartialEq, Error)]
pub enum TrialError {
    #[error(transparent)]
    Backend(#[from] BackendError),
    #[error("parse failure: {error}")]
    ParseFailure { raw: String, error: ResponseError },
}

pub type TrialOutcome = Result<TranslationResult, TrialError>;

#[derive(Clone, Debug, PartialEq, Error)]
pub enum TranslateError {
    #[error("command is empty")]
    EmptyCommand,
    #[error("trials must be at least 1")]
    NoTrials,
}

/// Interprets one raw response in the given style.
///
/// Discrete-gait answers are materialized with the random generator, so
/// `rng_seed` fixes the resulting template.
pub fn interpret(
    style: PromptStyle,
    raw: &str,
    rng_seed: u64,
) -> Result<TranslationResult, ResponseError> {
    match style {
        PromptStyle::Main => {
            let parsed = parse(raw)?;
            Ok(TranslationResult {
                template: parsed.template,
                velocity: parsed.velocity,
                raw: raw.to_string(),
                diagnostics: parsed.warnings.iter().map(|w| w.to_string()).collect(),
                gait: None,
                sinusoid: None,
            })
        }
        PromptStyle::Baseline1 => {
            let (gait, velocity) = parse_baseline1(raw)?;
            let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
            let template = encode_baseline1(gait, &GeneratorConfig::default(), &mut rng);
            Ok(TranslationResult {
                template,
                velocity,
                raw: raw.to_string(),
                diagnostics: Vec::new(),
                gait: Some(gait),
                sinusoid: None,
            })
        }
        PromptStyle::Baseline2 => {
            let (params, velocity) = parse_baseline2(raw)?;
            let template = encode_baseline2(&params)?;
            Ok(TranslationResult {
                template,
                velocity,
                raw: raw.to_string(),
                diagnostics: Vec::new(),
                gait: None,
                sinusoid: Some(params),
            })
        }
    }
}

/// 64-bit FNV-1a.
fn fnv1a(bytes: &[u8]) -> u64 {
    bytes.iter().fold(0xcbf2_9ce4_8422_2325, |h, &b| {
        (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3)
    })
}

/// Seed used to materialize trial `trial` of `command`; independent of the
/// order in which trials run.
pub fn trial_seed(base: u64, command: &str, trial: usize) -> u64 {
    fnv1a(format!("{base}:{trial}:{}", command.trim()).as_bytes())
}

/// Submits `command` `trials` times and interprets each response.
/// Trials run concurrently; results come back in trial order.
pub fn translate(
    backend: &dyn Backend,
    spec: &PromptSpec,
    command: &str,
    trials: usize,
    seed: u64,
) -> Result<Vec<TrialOutcome>, TranslateError> {
    if command.trim().is_empty() {
        return Err(TranslateError::EmptyCommand);
    }
    if trials == 0 {
        return Err(TranslateError::NoTrials);
    }
    let system_prompt = build_prompt(spec);
    let run = |trial: usize| -> TrialOutcome {
        let raw = backend.complete(spec.style, &system_prompt, command, trial)?;
        interpret(spec.style, &raw, trial_seed(seed, command, trial))
            .map_err(|error| TrialError::ParseFailure { raw, error })
    };
    Ok(std::thread::scope(|s| {
        let handles: Vec<_> = (0..trials).map(|k| s.spawn(move || run(k))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("trial thread panicked"))
            .collect()
    }))
}
