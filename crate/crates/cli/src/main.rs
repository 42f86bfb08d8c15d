//! `gaitpat`: generate, translate, score and simulate foot-contact pattern
//! templates from the command line.
//!
//! Data goes to stdout, diagnostics to stderr. Exit status is 0 on success,
//! 1 on a domain error (bad file, parse failure, unreachable backend) and 2
//! on a usage error.

use std::fs;
use std::io::{self, BufRead, BufReader, IsTerminal, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use gaitpat::eval::{emit_report, run_suite, ReportFormat, Suite};
use gaitpat::generator::{generate_with, sample_params, CycleParams, GeneratorConfig};
use gaitpat::llm::{
    build_prompt, translate, BackendConfig, BackendKind, FixtureBackend, PromptSpec, PromptStyle,
};
use gaitpat::pattern::{parse, serialize, DEFAULT_WINDOW_LEN};
use gaitpat::reward::{episode_return, evaluate_step, RewardWeights, DEFAULT_GAMMA};
use gaitpat::sim::{read_jsonl, simulate_trace, write_jsonl, TraceConfig};
use gaitpat::{GaitType, Leg, PatternTemplate, Velocity};

#[derive(Parser)]
#[command(name = "gaitpat", version, about = "Foot-contact pattern templates for quadruped locomotion")]
struct Cli {
    /// Backend configuration file (TOML). Flags given on the command line win.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample a template for a gait and print it in the wire format.
    Gen(GenArgs),
    /// Print the contact window starting at step K of a stored pattern.
    Window(WindowArgs),
    /// Print the system prompt for one interface.
    Prompt(PromptArgs),
    /// Ask the backend to translate a command, once per trial.
    Translate(TranslateArgs),
    /// Score a command suite and write an accuracy report.
    Eval(EvalArgs),
    /// Per-step reward terms and discounted return of a JSONL trace.
    Reward(RewardArgs),
    /// Write a synthetic realized-contact trace as JSONL.
    Simulate(SimulateArgs),
    /// Read commands from stdin and print the translated pattern for each.
    Repl(ReplArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum StyleArg {
    Main,
    B1,
    B2,
}

impl From<StyleArg> for PromptStyle {
    fn from(s: StyleArg) -> Self {
        match s {
            StyleArg::Main => PromptStyle::Main,
            StyleArg::B1 => PromptStyle::Baseline1,
            StyleArg::B2 => PromptStyle::Baseline2,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BackendArg {
    Remote,
    Fixtures,
}

#[derive(Clone, Copy, ValueEnum)]
enum PatternFormat {
    /// `velocity:` line plus one bit row per foot.
    Text,
    /// Bars, one row per foot.
    Ascii,
    Json,
}

fn parse_gait(s: &str) -> Result<GaitType, String> {
    GaitType::from_name(s)
        .ok_or_else(|| format!("unknown gait {s:?} (expected bound, trot, pace, stand_still or stand_3legs)"))
}

fn parse_velocity(s: &str) -> Result<Velocity, String> {
    s.parse::<Velocity>().map_err(|e| e.to_string())
}

#[derive(Args)]
struct GenArgs {
    /// bound, trot, pace, stand_still or stand_3legs.
    #[arg(long, value_parser = parse_gait)]
    gait: GaitType,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Cycle length; sampled when omitted.
    #[arg(long = "t", value_name = "T", requires = "ratio")]
    cycle_len: Option<usize>,
    /// Contact ratio; sampled when omitted.
    #[arg(long = "r", value_name = "R", requires = "cycle_len")]
    ratio: Option<f64>,
    /// Velocity written on the first line.
    #[arg(long, default_value = "0.0", value_parser = parse_velocity, allow_hyphen_values = true)]
    velocity: Velocity,
    /// Use the unscaled contact ratio for the BOUND rear-leg shift.
    #[arg(long)]
    unscaled_bound_shift: bool,
    #[arg(long, value_enum, default_value = "text")]
    format: PatternFormat,
}

#[derive(Args)]
struct WindowArgs {
    /// Pattern file in the wire format.
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Current step (0-based).
    #[arg(long = "t", value_name = "K")]
    step: usize,
    #[arg(long, default_value_t = DEFAULT_WINDOW_LEN)]
    lw: usize,
}

#[derive(Args)]
struct PromptArgs {
    #[arg(long, value_enum, default_value = "main")]
    style: StyleArg,
}

#[derive(Args)]
struct BackendOpts {
    #[arg(long, value_enum)]
    backend: Option<BackendArg>,
    /// Root of the stored responses for the fixtures backend.
    #[arg(long, value_name = "DIR")]
    fixtures: Option<PathBuf>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    temperature: Option<f64>,
    /// Chat-completion URL for the remote backend.
    #[arg(long)]
    endpoint: Option<String>,
    #[arg(long)]
    model: Option<String>,
    /// Seed for materializing discrete-gait answers.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct TranslateArgs {
    #[arg(long)]
    command: String,
    #[arg(long, value_enum, default_value = "main")]
    style: StyleArg,
    #[command(flatten)]
    backend: BackendOpts,
    #[arg(long, value_enum, default_value = "text")]
    format: PatternFormat,
}

#[derive(Clone, Copy, ValueEnum)]
enum ReportArg {
    Json,
    Csv,
    Ascii,
}

#[derive(Args)]
struct EvalArgs {
    /// `table1`, `table2` or a suite file.
    #[arg(long, default_value = "table1")]
    suite: String,
    /// Interfaces to score; all three when omitted.
    #[arg(long, value_enum)]
    style: Vec<StyleArg>,
    #[command(flatten)]
    backend: BackendOpts,
    /// Report destination; stdout when omitted.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Report format; guessed from the --out extension when omitted.
    #[arg(long, value_enum)]
    format: Option<ReportArg>,
}

#[derive(Args)]
struct RewardArgs {
    /// JSONL trace written by `simulate`.
    #[arg(long, value_name = "FILE")]
    trace: PathBuf,
    #[arg(long, default_value_t = DEFAULT_GAMMA)]
    gamma: f64,
    /// Reward yaw tracking instead of penalizing it.
    #[arg(long)]
    sign_corrected: bool,
    /// Print only the discounted return.
    #[arg(long)]
    return_only: bool,
}

#[derive(Args)]
struct SimulateArgs {
    /// Gait to generate; ignored when --pattern is given.
    #[arg(long, value_parser = parse_gait, required_unless_present = "pattern")]
    gait: Option<GaitType>,
    /// Use the pattern (and its velocity) from a wire-format file instead.
    #[arg(long, value_name = "FILE", conflicts_with = "gait")]
    pattern: Option<PathBuf>,
    #[arg(long, default_value_t = 150)]
    steps: usize,
    /// Per-foot lag in steps: one value for all feet or four comma-separated.
    #[arg(long, default_value = "0", value_delimiter = ',')]
    delay: Vec<usize>,
    /// Probability of flipping each realized contact bit.
    #[arg(long, default_value_t = 0.0)]
    flip: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Commanded forward velocity; defaults to the pattern's, or 0.5.
    #[arg(long, value_parser = parse_velocity, allow_hyphen_values = true)]
    velocity: Option<Velocity>,
    /// Half-width of the kinematic and action noise.
    #[arg(long, default_value_t = 0.01)]
    noise: f64,
    /// Destination; stdout when omitted.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReplArgs {
    #[arg(long, value_enum, default_value = "main")]
    style: StyleArg,
    #[command(flatten)]
    backend: BackendOpts,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    let base = match &cli.config {
        Some(path) => BackendConfig::load(path).with_context(|| format!("reading {}", path.display()))?,
        None => BackendConfig::default(),
    };
    let mut out = io::stdout().lock();
    match cli.command {
        Command::Gen(a) => cmd_gen(a, &mut out),
        Command::Window(a) => cmd_window(a, &mut out),
        Command::Prompt(a) => Ok(out.write_all(build_prompt(&PromptSpec::builtin(a.style.into())).as_bytes())?),
        Command::Translate(a) => cmd_translate(a, base, &mut out),
        Command::Eval(a) => cmd_eval(a, base, &mut out),
        Command::Reward(a) => cmd_reward(a, &mut out),
        Command::Simulate(a) => cmd_simulate(a, &mut out),
        Command::Repl(a) => cmd_repl(a, base, &mut out),
    }
}

fn write_pattern(out: &mut impl Write, p: &PatternTemplate, v: Velocity, format: PatternFormat) -> Result<()> {
    match format {
        PatternFormat::Text => out.write_all(serialize(p, v).as_bytes())?,
        PatternFormat::Ascii => {
            writeln!(out, "velocity: {v}")?;
            out.write_all(p.render_ascii().as_bytes())?;
        }
        PatternFormat::Json => {
            let body = serde_json::json!({ "velocity": v.mps(), "template": p.rows() });
            writeln!(out, "{body}")?;
        }
    }
    Ok(())
}

fn cmd_gen(a: GenArgs, out: &mut impl Write) -> Result<()> {
    let cfg = GeneratorConfig { bound_shift_uses_scaled_ratio: !a.unscaled_bound_shift, ..GeneratorConfig::with_seed(a.seed) };
    let mut rng = cfg.rng();
    let params = match (a.cycle_len, a.ratio) {
        (Some(cycle_len), Some(contact_ratio)) => {
            if cycle_len == 0 || !(contact_ratio > 0.0 && contact_ratio <= 1.0) {
                bail!("--t must be positive and --r in (0, 1]");
            }
            CycleParams { cycle_len, contact_ratio }
        }
        _ => sample_params(&cfg, &mut rng),
    };
    let p = generate_with(a.gait, params, cfg.bound_shift_uses_scaled_ratio, &mut rng);
    write_pattern(out, &p, a.velocity, a.format)
}

fn read_pattern(path: &Path) -> Result<(PatternTemplate, Velocity)> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let parsed = parse(&text).with_context(|| format!("parsing {}", path.display()))?;
    for w in &parsed.warnings {
        eprintln!("warning: {w}");
    }
    Ok((parsed.template, parsed.velocity))
}

fn cmd_window(a: WindowArgs, out: &mut impl Write) -> Result<()> {
    if a.lw == 0 {
        bail!("--lw must be at least 1");
    }
    let (p, _) = read_pattern(&a.input)?;
    let w = p.window_at(a.step, a.lw);
    for leg in Leg::ALL {
        let bits: String = w.row(leg).iter().map(|b| char::from(b'0' + b)).collect();
        writeln!(out, "{}: {bits}", leg.label())?;
    }
    Ok(())
}

fn backend_config(mut cfg: BackendConfig, o: &BackendOpts) -> Result<BackendConfig> {
    if let Some(b) = o.backend {
        cfg.kind = match b {
            BackendArg::Remote => BackendKind::Remote,
            BackendArg::Fixtures => BackendKind::Fixtures,
        };
    }
    if let Some(d) = &o.fixtures {
        cfg.fixtures_dir = d.clone();
    }
    if let Some(t) = o.trials {
        cfg.trials = t;
    }
    if let Some(t) = o.temperature {
        cfg.temperature = t;
    }
    if let Some(e) = &o.endpoint {
        cfg.endpoint = Some(e.clone());
    }
    if let Some(m) = &o.model {
        cfg.model = m.clone();
    }
    if let Some(s) = o.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    if cfg.kind == BackendKind::Fixtures && !cfg.fixtures_dir.is_dir() {
        bail!("fixtures directory {} does not exist (use --fixtures DIR)", cfg.fixtures_dir.display());
    }
    Ok(cfg)
}

fn cmd_translate(a: TranslateArgs, base: BackendConfig, out: &mut impl Write) -> Result<()> {
    let cfg = backend_config(base, &a.backend)?;
    let backend = cfg.build()?;
    let spec = PromptSpec::builtin(a.style.into());
    let results = translate(backend.as_ref(), &spec, &a.command, cfg.trials, cfg.seed)?;
    let mut ok = 0;
    for (k, r) in results.iter().enumerate() {
        match r {
            Ok(t) => {
                ok += 1;
                writeln!(out, "# trial {}", k + 1)?;
                write_pattern(out, &t.template, t.velocity, a.format)?;
                for d in &t.diagnostics {
                    eprintln!("trial {}: warning: {d}", k + 1);
                }
            }
            Err(e) => eprintln!("trial {}: {e}", k + 1),
        }
    }
    if ok == 0 {
        bail!("no trial produced a pattern");
    }
    Ok(())
}

fn cmd_eval(a: EvalArgs, base: BackendConfig, out: &mut impl Write) -> Result<()> {
    let cfg = backend_config(base, &a.backend)?;
    let backend = cfg.build()?;
    let suite = Suite::resolve(&a.suite)?;
    let styles: Vec<PromptStyle> =
        if a.style.is_empty() { PromptStyle::ALL.to_vec() } else { a.style.iter().map(|&s| s.into()).collect() };
    let report = run_suite(&styles, backend.as_ref(), &suite, cfg.trials, cfg.seed)?;
    let format = match (a.format, &a.out) {
        (Some(ReportArg::Json), _) => ReportFormat::Json,
        (Some(ReportArg::Csv), _) => ReportFormat::Csv,
        (Some(ReportArg::Ascii), _) => ReportFormat::Ascii,
        (None, Some(path)) => ReportFormat::from_path(path),
        (None, None) => ReportFormat::Ascii,
    };
    let text = emit_report(&report, format);
    match &a.out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
            for ap in &report.approaches {
                eprintln!("{}: aggregate accuracy {:.2}", ap.approach, ap.aggregate);
            }
        }
        None => out.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_reward(a: RewardArgs, out: &mut impl Write) -> Result<()> {
    let file = fs::File::open(&a.trace).with_context(|| format!("opening {}", a.trace.display()))?;
    let records = read_jsonl(BufReader::new(file))?;
    let weights = if a.sign_corrected { RewardWeights::sign_corrected() } else { RewardWeights::default() };
    let steps = records.iter().map(|r| evaluate_step(r, &weights)).collect::<Result<Vec<_>, _>>()?;
    let ret = episode_return(&steps, a.gamma)?;
    if a.return_only {
        writeln!(out, "{ret}")?;
        return Ok(());
    }
    writeln!(out, "step,r1,r2,r3,r4,r5,r6,r7,r8,total")?;
    for (rec, s) in records.iter().zip(&steps) {
        write!(out, "{}", rec.step)?;
        for t in s.terms {
            write!(out, ",{t}")?;
        }
        writeln!(out, ",{}", s.total)?;
    }
    eprintln!("discounted return (gamma {}): {ret}", a.gamma);
    Ok(())
}

fn cmd_simulate(a: SimulateArgs, out: &mut impl Write) -> Result<()> {
    let (template, pattern_v) = match (&a.pattern, a.gait) {
        (Some(path), _) => {
            let (p, v) = read_pattern(path)?;
            (p, Some(v))
        }
        (None, Some(g)) => (gaitpat::generator::generate_seeded(g, &GeneratorConfig::with_seed(a.seed)), None),
        (None, None) => bail!("need --gait or --pattern"),
    };
    let delay: [usize; 4] = match a.delay.as_slice() {
        [d] => [*d; 4],
        [a0, a1, a2, a3] => [*a0, *a1, *a2, *a3],
        other => bail!("--delay takes 1 or 4 values, got {}", other.len()),
    };
    let v = a.velocity.or(pattern_v).unwrap_or(Velocity::ForwardSlow);
    let cfg = TraceConfig { delay, flip_prob: a.flip, steps: a.steps, seed: a.seed, noise: a.noise };
    let trace = simulate_trace(&template, &cfg, v.mps())?;
    match &a.out {
        Some(path) => {
            let f = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
            let mut w = io::BufWriter::new(f);
            write_jsonl(&trace, &mut w)?;
            w.flush()?;
        }
        None => write_jsonl(&trace, out)?,
    }
    Ok(())
}

fn cmd_repl(a: ReplArgs, base: BackendConfig, out: &mut impl Write) -> Result<()> {
    let mut cfg = backend_config(base, &a.backend)?;
    cfg.trials = 1;
    let style: PromptStyle = a.style.into();
    let spec = PromptSpec::builtin(style);
    let backend = cfg.build()?;
    let fixtures = (cfg.kind == BackendKind::Fixtures).then(|| FixtureBackend::new(&cfg.fixtures_dir));
    let interactive = io::stdin().is_terminal();
    let stdin = io::stdin().lock();
    let mut lines = stdin.lines();
    loop {
        if interactive {
            eprint!("> ");
        }
        let Some(line) = lines.next() else { break };
        let line = line?;
        let command = line.trim();
        if command.is_empty() {
            continue;
        }
        if matches!(command, "quit" | "exit") {
            break;
        }
        if let Some(fb) = &fixtures {
            if !fb.has_command(style, command) {
                eprintln!("no stored response for {command:?}");
                continue;
            }
        }
        match translate(backend.as_ref(), &spec, command, 1, cfg.seed)?.remove(0) {
            Ok(t) => {
                write_pattern(out, &t.template, t.velocity, PatternFormat::Ascii)?;
                out.flush()?;
            }
            Err(e) => eprintln!("{e}"),
        }
    }
    Ok(())
}
