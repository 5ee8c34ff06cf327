use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use super::{ChatRequest, RequestError, RequestKind, Translator};
use crate::corpus::Puzzle;
use crate::parser::print;

/// What the mock answers for a statement the script does not cover.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MockDefault {
    /// The statement's gold encoding.
    #[default]
    Gold,
    /// An empty answer.
    None,
}

/// Scripted responses keyed by statement id. On disk this is JSON:
/// `{"model": ..., "default": "gold"|"none", "responses": {id: text}, "direct_answer": ...}`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MockScript {
    #[serde(default)]
    pub model: Option<String>,
    #[serde(default)]
    pub default: MockDefault,
    #[serde(default)]
    pub responses: BTreeMap<String, String>,
    #[serde(default)]
    pub direct_answer: Option<String>,
}

impl MockScript {
    /// Script answering statements `1..=n` with `answers` in order.
    pub fn from_answers(answers: &[&str], default: MockDefault) -> Self {
        MockScript {
            model: None,
            default,
            responses: answers
                .iter()
                .enumerate()
                .map(|(i, a)| ((i + 1).to_string(), a.to_string()))
                .collect(),
            direct_answer: None,
        }
    }

    pub fn load(path: impl AsRef<Path>) -> std::io::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
    }
}

/// Offline translator that answers from a script, falling back to the gold
/// encodings. Whole-text requests get one `<id>. <answer>` line per
/// statement; single-statement requests get the bare answer.
pub struct MockTranslator {
    model: String,
    answers: BTreeMap<String, String>,
    direct_answer: String,
    seen: Mutex<Vec<usize>>,
}

impl MockTranslator {
    pub fn new(p: &Puzzle, script: MockScript) -> Self {
        let mut answers = BTreeMap::new();
        for s in &p.statements {
            let answer = match (script.responses.get(&s.id), script.default) {
                (Some(text), _) => text.clone(),
                (None, MockDefault::Gold) => print(&s.gold),
                (None, MockDefault::None) => String::new(),
            };
            answers.insert(s.id.clone(), answer);
        }
        MockTranslator {
            model: script.model.unwrap_or_else(|| "mock".into()),
            answers,
            direct_answer: script.direct_answer.unwrap_or_default(),
            seen: Mutex::new(Vec::new()),
        }
    }

    pub fn gold(p: &Puzzle) -> Self {
        MockTranslator::new(
            p,
            MockScript {
                model: Some("mock-gold".into()),
                ..MockScript::default()
            },
        )
    }

    /// Number of requests answered so far.
    pub fn requests(&self) -> usize {
        self.seen.lock().unwrap().len()
    }

    /// Conversation length of each request, sorted; request order is not
    /// deterministic under parallel translation.
    pub fn seen_message_counts(&self) -> Vec<usize> {
        let mut v = self.seen.lock().unwrap().clone();
        v.sort_unstable();
        v
    }
}

impl Translator for MockTranslator {
    fn model_name(&self) -> &str {
        &self.model
    }

    fn complete(&self, request: &ChatRequest) -> Result<String, RequestError> {
        self.seen.lock().unwrap().push(request.messages.len());
        let answer = |id: &String| self.answers.get(id).cloned().unwrap_or_default();
        Ok(match request.kind {
            RequestKind::DirectQa => self.direct_answer.clone(),
            RequestKind::Statement => request.statement_ids.first().map(answer).unwrap_or_default(),
            RequestKind::WholeText => request
                .statement_ids
                .iter()
                .map(|id| format!("{id}. {}", answer(id)))
                .collect::<Vec<_>>()
                .join("\n"),
        })
    }
}
