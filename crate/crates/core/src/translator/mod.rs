//! The knowledge-acquisition front end.
//!
//! A [`Translator`] answers chat-style requests: either a live
//! chat-completion endpoint ([`HttpTranslator`]) or a scripted, offline
//! [`MockTranslator`]. [`translate`] drives one of them over a puzzle in
//! whole-text or statement-at-a-time mode and turns each response into
//! [`CandidateEncoding`]s; [`direct_qa`] asks the puzzle outright and keeps
//! the answer for manual grading.

mod candidates;
mod extract;
mod http;
mod mock;
mod prompt;
mod transcript;

use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::Puzzle;
use crate::logic::Formula;
use crate::parser::ParseError;

pub use candidates::{CandidateRecord, CandidatesFile};
pub use extract::{extract_candidates, extract_single};
pub use http::HttpTranslator;
pub use mock::{MockDefault, MockScript, MockTranslator};
pub use prompt::{build_prompt, direct_qa_prompt, DEFAULT_TEMPLATE};
pub use transcript::{read_transcripts, RunDir};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TranslationMode {
    WholeText,
    StatementAtATime,
}

impl TranslationMode {
    /// Short label used in file names and reports.
    pub fn label(self) -> &'static str {
        match self {
            TranslationMode::WholeText => "whole",
            TranslationMode::StatementAtATime => "stepwise",
        }
    }
}

impl fmt::Display for TranslationMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A failed request. `attempts` counts every try, including the first.
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub enum RequestError {
    #[error("transport error after {attempts} attempt(s): {detail}")]
    Transport { attempts: u32, detail: String },
    #[error("authentication failed: {0}")]
    Auth(String),
    #[error("request timed out after {attempts} attempt(s)")]
    Timeout { attempts: u32 },
}

impl RequestError {
    fn retryable(&self) -> bool {
        !matches!(self, RequestError::Auth(_))
    }

    fn with_attempts(self, n: u32) -> Self {
        match self {
            RequestError::Transport { detail, .. } => RequestError::Transport { attempts: n, detail },
            RequestError::Timeout { .. } => RequestError::Timeout { attempts: n },
            auth => auth,
        }
    }
}

#[derive(Debug, Error)]
pub enum TranslateError {
    #[error("statement {0:?} is not part of the puzzle")]
    StatementNotInPuzzle(String),
    #[error("invalid translator config: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Request(#[from] RequestError),
    #[error("cannot write transcripts: {0}")]
    Io(#[from] std::io::Error),
}

fn default_endpoint() -> String {
    "https://api.openai.com/v1/chat/completions".into()
}
fn default_model() -> String {
    "gpt-4".into()
}
fn default_key_env() -> String {
    "OPENAI_API_KEY".into()
}
fn default_retries() -> u32 {
    2
}
fn default_timeout() -> f64 {
    60.0
}
fn default_parallelism() -> usize {
    4
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TranslatorConfig {
    #[serde(default = "default_endpoint")]
    pub endpoint: String,
    #[serde(default = "default_model")]
    pub model: String,
    /// Name of the environment variable holding the API key.
    #[serde(default = "default_key_env")]
    pub api_key_env: String,
    #[serde(default)]
    pub temperature: f64,
    #[serde(default = "default_retries")]
    pub max_retries: u32,
    #[serde(default = "default_timeout")]
    pub timeout_secs: f64,
    #[serde(default = "default_parallelism")]
    pub parallelism: usize,
    /// Ask statements sequentially within one conversation instead of a
    /// fresh conversation each.
    #[serde(default)]
    pub carry_history: bool,
    #[serde(default)]
    pub prompt_template: Option<String>,
    /// First backoff delay between retries; doubles per retry.
    #[serde(default = "default_backoff")]
    pub backoff_ms: u64,
}

fn default_backoff() -> u64 {
    250
}

impl Default for TranslatorConfig {
    fn default() -> Self {
        serde_json::from_str("{}").expect("defaults deserialize")
    }
}

impl TranslatorConfig {
    pub fn validate(&self) -> Result<(), TranslateError> {
        if !(0.0..=2.0).contains(&self.temperature) {
            return Err(TranslateError::InvalidConfig(format!(
                "temperature {} outside [0, 2]",
                self.temperature
            )));
        }
        if self.parallelism == 0 {
            return Err(TranslateError::InvalidConfig("parallelism must be at least 1".into()));
        }
        if self.timeout_secs.is_nan() || self.timeout_secs <= 0.0 {
            return Err(TranslateError::InvalidConfig("timeout must be positive".into()));
        }
        Ok(())
    }

    pub fn timeout(&self) -> Duration {
        Duration::from_secs_f64(self.timeout_secs)
    }

    pub fn from_json(text: &str) -> Result<Self, TranslateError> {
        let cfg: TranslatorConfig =
            serde_json::from_str(text).map_err(|e| TranslateError::InvalidConfig(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChatMessage {
    pub role: String,
    pub content: String,
}

impl ChatMessage {
    pub fn user(content: impl Into<String>) -> Self {
        ChatMessage {
            role: "user".into(),
            content: content.into(),
        }
    }

    pub fn assistant(content: impl Into<String>) -> Self {
        ChatMessage {
            role: "assistant".into(),
            content: content.into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RequestKind {
    WholeText,
    Statement,
    DirectQa,
}

#[derive(Debug, Clone)]
pub struct ChatRequest {
    pub kind: RequestKind,
    pub messages: Vec<ChatMessage>,
    pub temperature: f64,
    /// Statements the request asks about, for clients that script answers.
    pub statement_ids: Vec<String>,
}

/// Something that answers chat requests with response text. Retries are
/// handled by the caller.
pub trait Translator: Sync {
    fn model_name(&self) -> &str;
    fn complete(&self, request: &ChatRequest) -> Result<String, RequestError>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FailureKind {
    ParseError,
    OutOfVocabulary,
    NoFormulaFound,
    Refusal,
    TransportError,
    AuthError,
    TimeoutError,
}

impl fmt::Display for FailureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CandidateFailure {
    pub kind: FailureKind,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parse_error: Option<ParseError>,
}

impl CandidateFailure {
    pub fn new(kind: FailureKind, detail: impl Into<String>) -> Self {
        CandidateFailure {
            kind,
            detail: detail.into(),
            parse_error: None,
        }
    }

    pub fn parse(e: ParseError) -> Self {
        CandidateFailure {
            kind: FailureKind::ParseError,
            detail: e.to_string(),
            parse_error: Some(e),
        }
    }

    pub fn request(e: &RequestError) -> Self {
        let kind = match e {
            RequestError::Transport { .. } => FailureKind::TransportError,
            RequestError::Auth(_) => FailureKind::AuthError,
            RequestError::Timeout { .. } => FailureKind::TimeoutError,
        };
        CandidateFailure::new(kind, e.to_string())
    }
}

/// A statement's translation: a vocabulary-valid formula or the reason
/// there is none.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateEncoding {
    pub statement_id: String,
    pub raw_excerpt: String,
    pub outcome: Result<Formula, CandidateFailure>,
}

impl CandidateEncoding {
    pub fn formula(&self) -> Option<&Formula> {
        self.outcome.as_ref().ok()
    }

    pub fn failure(&self) -> Option<&CandidateFailure> {
        self.outcome.as_ref().err()
    }

    /// A candidate that carries `f` as if a model had answered with it.
    pub fn from_formula(statement_id: impl Into<String>, f: Formula) -> Self {
        CandidateEncoding {
            statement_id: statement_id.into(),
            raw_excerpt: crate::parser::print(&f),
            outcome: Ok(f),
        }
    }
}

/// Verbatim record of one exchange with a model.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranscriptRecord {
    pub timestamp: String,
    pub mode: String,
    pub model: String,
    #[serde(default)]
    pub statement_ids: Vec<String>,
    pub prompt: String,
    pub response: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone)]
pub struct TranslationRun {
    pub mode: TranslationMode,
    pub candidates: Vec<CandidateEncoding>,
    pub transcripts: Vec<TranscriptRecord>,
}

/// Sends `request`, retrying retryable failures up to `cfg.max_retries`
/// more times with exponential backoff.
fn complete_with_retries(
    client: &dyn Translator,
    request: &ChatRequest,
    cfg: &TranslatorConfig,
) -> Result<String, RequestError> {
    let mut attempt = 0;
    loop {
        attempt += 1;
        match client.complete(request) {
            Ok(text) => return Ok(text),
            Err(e) if e.retryable() && attempt <= cfg.max_retries => {
                let delay = cfg.backoff_ms.saturating_mul(1 << (attempt - 1).min(6));
                std::thread::sleep(Duration::from_millis(delay.min(5_000)));
            }
            Err(e) => return Err(e.with_attempts(attempt)),
        }
    }
}

fn record(
    mode: &str,
    client: &dyn Translator,
    statement_ids: Vec<String>,
    prompt: String,
    result: &Result<String, RequestError>,
) -> TranscriptRecord {
    TranscriptRecord {
        timestamp: chrono::Utc::now().to_rfc3339(),
        mode: mode.to_string(),
        model: client.model_name().to_string(),
        statement_ids,
        prompt,
        response: result.as_ref().cloned().unwrap_or_default(),
        error: result.as_ref().err().map(|e| e.to_string()),
    }
}

/// Translates every statement of `p`; always returns exactly one candidate
/// per statement, in statement order. Request failures become failed
/// candidates rather than errors.
pub fn translate(
    p: &Puzzle,
    mode: TranslationMode,
    cfg: &TranslatorConfig,
    client: &dyn Translator,
) -> Result<TranslationRun, TranslateError> {
    cfg.validate()?;
    match mode {
        TranslationMode::WholeText => {
            let prompt = build_prompt(p, mode, None, cfg.prompt_template.as_deref())?;
            let ids: Vec<String> = p.statements.iter().map(|s| s.id.clone()).collect();
            let request = ChatRequest {
                kind: RequestKind::WholeText,
                messages: vec![ChatMessage::user(prompt.clone())],
                temperature: cfg.temperature,
                statement_ids: ids.clone(),
            };
            let result = complete_with_retries(client, &request, cfg);
            let transcript = record(mode.label(), client, ids, prompt, &result);
            let candidates = match result {
                Ok(text) => extract_candidates(&text, p, mode),
                Err(e) => failed_all(p, &e),
            };
            Ok(TranslationRun {
                mode,
                candidates,
                transcripts: vec![transcript],
            })
        }
        TranslationMode::StatementAtATime if cfg.carry_history => stepwise_in_one_session(p, cfg, client),
        TranslationMode::StatementAtATime => stepwise_fresh_sessions(p, cfg, client),
    }
}

fn failed_all(p: &Puzzle, e: &RequestError) -> Vec<CandidateEncoding> {
    p.statements
        .iter()
        .map(|s| CandidateEncoding {
            statement_id: s.id.clone(),
            raw_excerpt: String::new(),
            outcome: Err(CandidateFailure::request(e)),
        })
        .collect()
}

fn stepwise_fresh_sessions(
    p: &Puzzle,
    cfg: &TranslatorConfig,
    client: &dyn Translator,
) -> Result<TranslationRun, TranslateError> {
    let mode = TranslationMode::StatementAtATime;
    let prompts = p
        .statements
        .iter()
        .map(|s| build_prompt(p, mode, Some(s), cfg.prompt_template.as_deref()))
        .collect::<Result<Vec<_>, _>>()?;
    let n = p.statements.len();
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<Option<(CandidateEncoding, TranscriptRecord)>>> = Mutex::new(vec![None; n]);
    let workers = cfg.parallelism.min(n.max(1));
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= n {
                    break;
                }
                let s = &p.statements[i];
                let request = ChatRequest {
                    kind: RequestKind::Statement,
                    messages: vec![ChatMessage::user(prompts[i].clone())],
                    temperature: cfg.temperature,
                    statement_ids: vec![s.id.clone()],
                };
                let result = complete_with_retries(client, &request, cfg);
                let transcript = record(mode.label(), client, vec![s.id.clone()], prompts[i].clone(), &result);
                let candidate = match &result {
                    Ok(text) => extract_single(text, p, s),
                    Err(e) => CandidateEncoding {
                        statement_id: s.id.clone(),
                        raw_excerpt: String::new(),
                        outcome: Err(CandidateFailure::request(e)),
                    },
                };
                results.lock().expect("result sink poisoned")[i] = Some((candidate, transcript));
            });
        }
    });
    let (candidates, transcripts) = results
        .into_inner()
        .expect("result sink poisoned")
        .into_iter()
        .map(|r| r.expect("every statement was processed"))
        .unzip();
    Ok(TranslationRun {
        mode,
        candidates,
        transcripts,
    })
}

fn stepwise_in_one_session(
    p: &Puzzle,
    cfg: &TranslatorConfig,
    client: &dyn Translator,
) -> Result<TranslationRun, TranslateError> {
    let mode = TranslationMode::StatementAtATime;
    let mut history: Vec<ChatMessage> = Vec::new();
    let mut candidates = Vec::new();
    let mut transcripts = Vec::new();
    for s in &p.statements {
        let prompt = build_prompt(p, mode, Some(s), cfg.prompt_template.as_deref())?;
        history.push(ChatMessage::user(prompt.clone()));
        let request = ChatRequest {
            kind: RequestKind::Statement,
            messages: history.clone(),
            temperature: cfg.temperature,
            statement_ids: vec![s.id.clone()],
        };
        let result = complete_with_retries(client, &request, cfg);
        transcripts.push(record(mode.label(), client, vec![s.id.clone()], prompt, &result));
        match result {
            Ok(text) => {
                candidates.push(extract_single(&text, p, s));
                history.push(ChatMessage::assistant(text));
            }
            Err(e) => {
                history.pop();
                candidates.push(CandidateEncoding {
                    statement_id: s.id.clone(),
                    raw_excerpt: String::new(),
                    outcome: Err(CandidateFailure::request(&e)),
                });
            }
        }
    }
    Ok(TranslationRun {
        mode,
        candidates,
        transcripts,
    })
}

/// Asks the model to solve the puzzle directly. The answer is recorded,
/// not graded.
pub fn direct_qa(
    p: &Puzzle,
    cfg: &TranslatorConfig,
    client: &dyn Translator,
) -> Result<TranscriptRecord, TranslateError> {
    cfg.validate()?;
    let prompt = direct_qa_prompt(p);
    let request = ChatRequest {
        kind: RequestKind::DirectQa,
        messages: vec![ChatMessage::user(prompt.clone())],
        temperature: cfg.temperature,
        statement_ids: Vec::new(),
    };
    let result = complete_with_retries(client, &request, cfg);
    Ok(record("direct-qa", client, Vec::new(), prompt, &result))
}
