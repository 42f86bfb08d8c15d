//! Where completions come from: a directory of stored responses, or a
//! chat-completion HTTP endpoint.

use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use super::prompt::PromptStyle;

/// Environment variable holding the bearer token for the remote backend.
pub const API_KEY_ENV: &str = "GAITPAT_API_KEY";

#[derive(Clone, Debug, PartialEq, Error)]
pub enum BackendError {
    #[error("backend unreachable: {0}")]
    Unreachable(String),
    #[error("backend refused: {0}")]
    Refusal(String),
    #[error("no stored response at {}", .0.display())]
    FixtureMissing(PathBuf),
}

/// One completion per call. Implementations must be shareable across the
/// worker threads that run trials.
pub trait Backend: Sync {
    fn complete(
        &self,
        style: PromptStyle,
        system_prompt: &str,
        command: &str,
        trial: usize,
    ) -> Result<String, BackendError>;
}

/// Directory key for a command: lowercase alphanumeric runs joined by `-`.
pub fn command_slug(command: &str) -> String {
    command
        .split(|c: char| !c.is_ascii_alphanumeric())
        .filter(|s| !s.is_empty())
        .map(str::to_ascii_lowercase)
        .collect::<Vec<_>>()
        .join("-")
}

/// Stored responses at `<root>/<style>/<slug>/trial_<k>.txt`, `k` from 1.
#[derive(Clone, Debug)]
pub struct FixtureBackend {
    root: PathBuf,
}

impl FixtureBackend {
    pub fn new(root: impl Into<PathBuf>) -> Self {
        Self { root: root.into() }
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn path_for(&self, style: PromptStyle, command: &str, trial: usize) -> PathBuf {
        self.root
            .join(style.key())
            .join(command_slug(command))
            .join(format!("trial_{}.txt", trial + 1))
    }

    /// Whether any response is stored for `command`.
    pub fn has_command(&self, style: PromptStyle, command: &str) -> bool {
        self.root
            .join(style.key())
            .join(command_slug(command))
            .is_dir()
    }
}

impl Backend for FixtureBackend {
    fn complete(
        &self,
        style: PromptStyle,
        _: &str,
        command: &str,
        trial: usize,
    ) -> Result<String, BackendError> {
        let path = self.path_for(style, command, trial);
        std::fs::read_to_string(&path).map_err(|_| BackendError::FixtureMissing(path))
    }
}

/// Generic chat-completion client: POSTs `{model, temperature, messages}` and
/// reads `choices[0].message.content`.
#[derive(Clone, Debug)]
pub struct RemoteBackend {
    pub endpoint: String,
    pub model: String,
    pub temperature: f64,
    pub api_key: Option<String>,
    pub timeout: Duration,
}

impl RemoteBackend {
    fn once(&self, body: &Value) -> Result<String, Attempt> {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .timeout_global(Some(self.timeout))
            .http_status_as_error(false)
            .build()
            .into();
        let mut req = agent.post(&self.endpoint);
        if let Some(key) = &self.api_key {
            req = req.header("Authorization", &format!("Bearer {key}"));
        }
        let mut resp = req
            .send_json(body)
            .map_err(|e| Attempt::Retry(BackendError::Unreachable(e.to_string())))?;
        let status = resp.status().as_u16();
        if status >= 500 {
            return Err(Attempt::Retry(BackendError::Unreachable(format!(
                "HTTP {status}"
            ))));
        }
        let text = resp.body_mut().read_to_string().unwrap_or_default();
        if status >= 400 {
            return Err(Attempt::Fail(BackendError::Refusal(format!(
                "HTTP {status}: {}",
                text.trim()
            ))));
        }
        let v: Value = serde_json::from_str(&text).map_err(|e| {
            Attempt::Fail(BackendError::Refusal(format!("response is not JSON: {e}")))
        })?;
        let choice = &v["choices"][0];
        if choice["finish_reason"] == "content_filter" {
            return Err(Attempt::Fail(BackendError::Refusal(
                "content filtered".into(),
            )));
        }
        match choice["message"]["content"].as_str() {
            Some(s) if !s.trim().is_empty() => Ok(s.to_string()),
            _ => Err(Attempt::Fail(BackendError::Refusal(
                "empty completion".into(),
            ))),
        }
    }
}

enum Attempt {
    Retry(BackendError),
    Fail(BackendError),
}

impl Backend for RemoteBackend {
    fn complete(
        &self,
        _: PromptStyle,
        system_prompt: &str,
        command: &str,
        _: usize,
    ) -> Result<String, BackendError> {
        let body = json!({
            "model": self.model,
            "temperature": self.temperature,
            "messages": [
                {"role": "system", "content": system_prompt},
                {"role": "user", "content": command},
            ],
        });
        // one bounded retry for transport errors and 5xx
        match self.once(&body) {
            Ok(s) => Ok(s),
            Err(Attempt::Fail(e)) => Err(e),
            Err(Attempt::Retry(_)) => self.once(&body).map_err(|a| match a {
                Attempt::Retry(e) | Attempt::Fail(e) => e,
            }),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Remote,
    #[default]
    Fixtures,
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("temperature {0} is negative")]
    Temperature(f64),
    #[error("trials must be at least 1")]
    Trials,
    #[error("remote backend needs an endpoint")]
    NoEndpoint,
    #[error("config file: {0}")]
    Parse(#[from] toml::de::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Key-value backend configuration. The API key is never read from the file,
/// only from [`API_KEY_ENV`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BackendConfig {
    pub kind: BackendKind,
    pub endpoint: Option<String>,
    pub model: String,
    pub temperature: f64,
    pub trials: usize,
    pub fixtures_dir: PathBuf,
    pub timeout_secs: u64,
    /// Seeds the generator that materializes discrete-gait answers.
    pub seed: u64,
}

impl Default for BackendConfig {
    fn default() -> Self {
        Self {
            kind: BackendKind::Fixtures,
            endpoint: None,
            model: "gpt-4".into(),
            temperature: 0.5,
            trials: 5,
            fixtures_dir: PathBuf::from("fixtures"),
            timeout_secs: 60,
            seed: 0,
        }
    }
}

impl BackendConfig {
    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let cfg: Self = toml::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.temperature.is_nan() || self.temperature < 0.0 {
            return Err(ConfigError::Temperature(self.temperature));
        }
        if self.trials == 0 {
            return Err(ConfigError::Trials);
        }
        if self.kind == BackendKind::Remote && self.endpoint.is_none() {
            return Err(ConfigError::NoEndpoint);
        }
        Ok(())
    }

    pub fn build(&self) -> Result<Box<dyn Backend>, ConfigError> {
        self.validate()?;
        Ok(match self.kind {
            BackendKind::Fixtures => Box::new(FixtureBackend::new(&self.fixtures_dir)),
            BackendKind::Remote => Box::new(RemoteBackend {
                endpoint: self.endpoint.clone().ok_or(ConfigError::NoEndpoint)?,
                model: self.model.clone(),
                temperature: self.temperature,
                api_key: std::env::var(API_KEY_ENV).ok().filter(|k| !k.is_empty()),
                timeout: Duration::from_secs(self.timeout_secs),
            }),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::{BufRead, BufReader, Read, Write};
    use std::net::TcpListener;
    use std::sync::atomic::{AtomicUsize, Ordering};
    use std::sync::Arc;

    #[test]
    fn slugs() {
        assert_eq!(command_slug("Trot forward slowly"), "trot-forward-slowly");
        assert_eq!(
            command_slug("Walk with 3 legs, with the rear right foot always in the air"),
            "walk-with-3-legs-with-the-rear-right-foot-always-in-the-air"
        );
        assert_eq!(command_slug("  Go!! "), "go");
    }

    #[test]
    fn fixture_lookup() {
        let dir = tempfile::tempdir().unwrap();
        let fb = FixtureBackend::new(dir.path());
        let p = fb.path_for(PromptStyle::Main, "Stand still", 0);
        assert!(p.ends_with("main/stand-still/trial_1.txt"));
        assert_eq!(
            fb.complete(PromptStyle::Main, "", "Stand still", 0),
            Err(BackendError::FixtureMissing(p.clone()))
        );
        std::fs::create_dir_all(p.parent().unwrap()).unwrap();
        std::fs::write(&p, "hello").unwrap();
        assert!(fb.has_command(PromptStyle::Main, "stand  STILL"));
        assert_eq!(
            fb.complete(PromptStyle::Main, "", "Stand still", 0)
                .unwrap(),
            "hello"
        );
    }

    #[test]
    fn config_defaults_and_validation() {
        let cfg = BackendConfig::from_toml("").unwrap();
        assert_eq!(cfg, BackendConfig::default());
        assert_eq!(cfg.temperature, 0.5);
        assert_eq!(cfg.trials, 5);
        assert!(matches!(
            BackendConfig::from_toml("temperature = -0.1"),
            Err(ConfigError::Temperature(_))
        ));
        assert!(matches!(
            BackendConfig::from_toml("trials = 0"),
            Err(ConfigError::Trials)
        ));
        assert!(matches!(
            BackendConfig::from_toml("kind = \"remote\""),
            Err(ConfigError::NoEndpoint)
        ));
        assert!(matches!(
            BackendConfig::from_toml("colour = 1"),
            Err(ConfigError::Parse(_))
        ));
        let remote =
            BackendConfig::from_toml("kind = \"remote\"\nendpoint = \"http://x\"\nmodel = \"m\"")
                .unwrap();
        assert_eq!(remote.kind, BackendKind::Remote);
    }

    /// Serves `responses` in order, one per connection, and records request bodies.
    fn mock_server(
        responses: Vec<(u16, String)>,
    ) -> (
        String,
        Arc<AtomicUsize>,
        std::thread::JoinHandle<Vec<String>>,
    ) {
        let listener = TcpListener::bind("127.0.0.1:0").unwrap();
        let url = format!("http://{}/v1/chat", listener.local_addr().unwrap());
        let hits = Arc::new(AtomicUsize::new(0));
        let counter = hits.clone();
        let handle = std::thread::spawn(move || {
            let mut bodies = Vec::new();
            for (status, body) in responses {
                let (stream, _) = listener.accept().unwrap();
                counter.fetch_add(1, Ordering::SeqCst);
                let mut reader = BufReader::new(stream.try_clone().unwrap());
                let mut len = 0;
                loop {
                    let mut line = String::new();
                    reader.read_line(&mut line).unwrap();
                    if line == "\r\n" || line.is_empty() {
                        break;
                    }
                    if let Some(v) = line.to_ascii_lowercase().strip_prefix("content-length:") {
                        len = v.trim().parse().unwrap();
                    }
                }
                let mut buf = vec![0; len];
                reader.read_exact(&mut buf).unwrap();
                bodies.push(String::from_utf8(buf).unwrap());
                let mut s = stream;
                write!(
                    s,
                    "HTTP/1.1 {status} X\r\nContent-Type: application/json\r\nContent-Length: {}\r\nConnection: close\r\n\r\n{body}",
                    body.len()
                )
                .unwrap();
            }
            bodies
        });
        (url, hits, handle)
    }

    fn remote(url: String) -> RemoteBackend {
        RemoteBackend {
            endpoint: url,
            model: "test-model".into(),
            temperature: 0.5,
            api_key: Some("k".into()),
            timeout: Duration::from_secs(5),
        }
    }

    fn completion(text: &str) -> String {
        json!({"choices": [{"message": {"role": "assistant", "content": text}, "finish_reason": "stop"}]}).to_string()
    }

    #[test]
    fn remote_round_trip() {
        let (url, _, h) = mock_server(vec![(200, completion("velocity: 0.0\nFL: 1"))]);
        let out = remote(url)
            .complete(PromptStyle::Main, "SYS", "Stand still", 0)
            .unwrap();
        assert_eq!(out, "velocity: 0.0\nFL: 1");
        let req: Value = serde_json::from_str(&h.join().unwrap()[0]).unwrap();
        assert_eq!(req["model"], "test-model");
        assert_eq!(req["temperature"], 0.5);
        assert_eq!(req["messages"][0]["content"], "SYS");
        assert_eq!(req["messages"][1]["content"], "Stand still");
    }

    #[test]
    fn remote_retries_once_on_5xx() {
        let (url, hits, h) = mock_server(vec![(503, "{}".into()), (200, completion("ok"))]);
        assert_eq!(
            remote(url).complete(PromptStyle::Main, "", "x", 0).unwrap(),
            "ok"
        );
        h.join().unwrap();
        assert_eq!(hits.load(Ordering::SeqCst), 2);
    }

    #[test]
    fn remote_gives_up_after_second_5xx() {
        let (url, _, h) = mock_server(vec![(500, "{}".into()), (502, "{}".into())]);
        assert!(matches!(
            remote(url).complete(PromptStyle::Main, "", "x", 0),
            Err(BackendError::Unreachable(_))
        ));
        h.join().unwrap();
    }

    #[test]
    fn remote_refusals() {
        let (url, hits, h) = mock_server(vec![(401, "{}".into())]);
        assert!(matches!(
            remote(url).complete(PromptStyle::Main, "", "x", 0),
            Err(BackendError::Refusal(_))
        ));
        h.join().unwrap();
        assert_eq!(hits.load(Ordering::SeqCst), 1);

        let (url, _, h) = mock_server(vec![(200, completion("  "))]);
        assert!(matches!(
            remote(url).complete(PromptStyle::Main, "", "x", 0),
            Err(BackendError::Refusal(_))
        ));
        h.join().unwrap();
    }

    #[test]
    fn remote_unreachable() {
        // bind then drop to get a port nobody listens on
        let port = TcpListener::bind("127.0.0.1:0")
            .unwrap()
            .local_addr()
            .unwrap()
            .port();
        let r = remote(format!("http://127.0.0.1:{port}/"));
        assert!(matches!(
            r.complete(PromptStyle::Main, "", "x", 0),
            Err(BackendError::Unreachable(_))
        ));
    }
}
