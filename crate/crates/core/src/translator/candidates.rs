use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CandidateEncoding, CandidateFailure, FailureKind, TranslationMode};
use crate::corpus::Puzzle;
use crate::parser::{parse, print};

/// On-disk form of a translation's candidates. Formulas are stored as text
/// and re-parsed against the puzzle vocabulary on load.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidatesFile {
    pub puzzle: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<TranslationMode>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    pub candidates: Vec<CandidateRecord>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CandidateRecord {
    pub statement_id: String,
    #[serde(default)]
    pub raw_excerpt: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub formula: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failure: Option<CandidateFailure>,
}

impl CandidatesFile {
    pub fn new(
        puzzle: &str,
        mode: Option<TranslationMode>,
        model: Option<String>,
        candidates: &[CandidateEncoding],
    ) -> Self {
        CandidatesFile {
            puzzle: puzzle.to_string(),
            mode,
            model,
            candidates: candidates
                .iter()
                .map(|c| CandidateRecord {
                    statement_id: c.statement_id.clone(),
                    raw_excerpt: c.raw_excerpt.clone(),
                    formula: c.formula().map(print),
                    failure: c.failure().cloned(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("candidates serialize") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn load(path: impl AsRef<Path>) -> std::io::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        CandidatesFile::from_json(&text).map_err(|e| std::io::Error::new(std::io::ErrorKind::InvalidData, e))
    }

    /// Rebuilds candidate encodings for `p`. A record with neither a
    /// formula nor a failure counts as `NoFormulaFound`; formula text is
    /// checked exactly as a fresh response line would be.
    pub fn to_candidates(&self, p: &Puzzle) -> Vec<CandidateEncoding> {
        self.candidates
            .iter()
            .map(|r| {
                let outcome = match (&r.formula, &r.failure) {
                    (Some(text), _) => match parse(text, None) {
                        Ok(f) => {
                            let undeclared = f.undeclared_symbols(&p.vocab);
                            if undeclared.is_empty() {
                                Ok(f)
                            } else {
                                Err(CandidateFailure::new(
                                    FailureKind::OutOfVocabulary,
                                    format!("undeclared symbols: {}", undeclared.join(", ")),
                                ))
                            }
                        }
                        Err(e) => Err(CandidateFailure::parse(e)),
                    },
                    (None, Some(f)) => Err(f.clone()),
                    (None, None) => Err(CandidateFailure::new(
                        FailureKind::NoFormulaFound,
                        "no formula recorded",
                    )),
                };
                CandidateEncoding {
                    statement_id: r.statement_id.clone(),
                    raw_excerpt: r.raw_excerpt.clone(),
                    outcome,
                }
            })
            .collect()
    }
}
