use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Output, Stdio};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gaitpat")).args(args).output().unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn gen_is_deterministic_per_seed() {
    let a = stdout(&["gen", "--gait", "trot", "--seed", "9"]);
    let b = stdout(&["gen", "--gait", "trot", "--seed", "9"]);
    assert_eq!(a, b);
    let parsed = gaitpat::pattern::parse(&a).unwrap();
    assert_eq!(gaitpat::pattern::classify_gait(&parsed.template, 1), Some(gaitpat::GaitType::Trot));
}

#[test]
fn gen_forced_bound_matches_hand_case() {
    let text = stdout(&["gen", "--gait", "BOUND", "--t", "24", "--r", "0.6", "--velocity", "1.0"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "velocity: 1.0");
    assert_eq!(lines[1], format!("FL: {}{}", "1".repeat(9), "0".repeat(15)));
    assert_eq!(lines[3], format!("RL: 0000{}{}", "1".repeat(9), "0".repeat(11)));
}

#[test]
fn gen_json_output() {
    let text = stdout(&["gen", "--gait", "stand_still", "--format", "json", "--velocity", "-0.5"]);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["velocity"], -0.5);
    assert_eq!(v["template"].as_array().unwrap().len(), 4);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["gen", "--gait", "gallop"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "--bogus"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "--gait", "trot", "--velocity", "0.7"]).status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_1() {
    let out = run(&["window", "--in", "/nonexistent/pattern.txt", "--t", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("nonexistent"));
    let out = run(&["translate", "--command", "Trot", "--fixtures", "/nonexistent"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn every_subcommand_has_help() {
    for sub in ["gen", "window", "prompt", "translate", "eval", "reward", "simulate", "repl"] {
        let out = stdout(&[sub, "--help"]);
        assert!(out.contains("Usage"), "{sub}");
    }
}

#[test]
fn window_wraps_around_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.txt");
    fs::write(&path, "velocity: 0.0\nFL: 110000\nFR: 001100\nRL: 000011\nRR: 100001\n").unwrap();
    let out = stdout(&["window", "--in", path.to_str().unwrap(), "--t", "5", "--lw", "3"]);
    assert_eq!(out, "FL: 011\nFR: 000\nRL: 100\nRR: 110\n");
}

#[test]
fn prompt_styles() {
    let main = stdout(&["prompt"]);
    assert!(main.contains("Examples:") && main.contains("velocity:"));
    let b2 = stdout(&["prompt", "--style", "b2"]);
    assert_ne!(main, b2);
}

#[test]
fn translate_fixture_trials() {
    let root = fixtures();
    let out = stdout(&[
        "translate",
        "--command",
        "Pace in place",
        "--fixtures",
        root.to_str().unwrap(),
        "--trials",
        "2",
    ]);
    assert_eq!(out.matches("# trial").count(), 2);
}

#[test]
fn eval_ascii_format() {
    let root = fixtures();
    let out = stdout(&["eval", "--suite", "table2", "--style", "main", "--fixtures", root.to_str().unwrap(), "--format", "ascii"]);
    assert!(out.starts_with("main (table2, 5 trials per command)"), "{out}");
    assert_eq!(out.lines().count(), 1 + 1 + 5);
}

#[test]
fn repl_reports_missing_commands() {
    let root = fixtures();
    let mut child = Command::new(env!("CARGO_BIN_EXE_gaitpat"))
        .args(["repl", "--fixtures", root.to_str().unwrap()])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"Stand still\nDance the tango\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("velocity: 0.0"), "{stdout}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("Dance the tango"));
}

#[test]
fn reward_return_only() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("t.jsonl");
    stdout(&["simulate", "--gait", "stand_still", "--steps", "10", "--out", trace.to_str().unwrap()]);
    let out = stdout(&["reward", "--trace", trace.to_str().unwrap(), "--return-only"]);
    let ret: f64 = out.trim().parse().unwrap();
    assert!(ret.is_finite());
}
