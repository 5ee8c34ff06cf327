//! Puzzle files: schema, loading, self-validation and the bundled corpus.
//!
//! A puzzle is a vocabulary, a list of natural-language statements each with
//! a gold encoding, and queries with their expected status. Files are JSON;
//! formulas inside them are strings in the grammar of [`crate::parser`]. See
//! `schema/puzzle.schema.json` for the formal schema.

use std::collections::HashSet;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{Formula, LogicError, Symbol, Vocabulary};
use crate::parser::{parse, print, ParseError, ParseErrorKind};
use crate::reasoner::{self, KnowledgeBase, QueryStatus};

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("schema error at line {line}, column {column}: {detail}")]
    Schema {
        detail: String,
        line: usize,
        column: usize,
    },
    #[error("{context}: {source}")]
    Parse {
        context: String,
        #[source]
        source: ParseError,
    },
    #[error("{context}: symbol {symbol:?} is not declared")]
    VocabViolation { context: String, symbol: String },
    #[error("invalid vocabulary: {0}")]
    Vocabulary(#[from] LogicError),
    #[error("no bundled puzzle named {0:?}")]
    UnknownPuzzle(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Statement {
    pub id: String,
    pub text: String,
    pub gold: Formula,
    /// The intended reading is contested; scored apart from the headline ratio.
    pub disputed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Query {
    pub question: String,
    pub target: Formula,
    pub expected: QueryStatus,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Puzzle {
    pub name: String,
    pub narrative: String,
    pub vocab: Vocabulary,
    pub statements: Vec<Statement>,
    pub queries: Vec<Query>,
    pub notes: Vec<String>,
    /// Statements are separate exercises over a shared vocabulary rather
    /// than facts of one scenario: each is checked for consistency on its
    /// own and no joint knowledge base exists.
    pub independent: bool,
}

impl Puzzle {
    pub fn statement(&self, id: &str) -> Option<&Statement> {
        self.statements.iter().find(|s| s.id == id)
    }

    /// The conjunction of gold encodings as a knowledge base, one fact per
    /// statement labelled by its id.
    pub fn gold_kb(&self) -> Result<KnowledgeBase, reasoner::ReasonerError> {
        KnowledgeBase::new(
            self.vocab.clone(),
            self.statements
                .iter()
                .map(|s| (s.id.clone(), s.gold.clone()))
                .collect(),
        )
    }

    pub fn to_json(&self) -> String {
        let raw = RawPuzzle {
            name: self.name.clone(),
            narrative: self.narrative.clone(),
            independent: self.independent,
            symbols: self
                .vocab
                .iter()
                .map(|s| RawSymbol {
                    id: s.id().to_string(),
                    gloss: s.gloss().map(str::to_string),
                })
                .collect(),
            statements: self
                .statements
                .iter()
                .map(|s| RawStatement {
                    id: s.id.clone(),
                    text: s.text.clone(),
                    gold: print(&s.gold),
                    disputed: s.disputed,
                })
                .collect(),
            queries: self
                .queries
                .iter()
                .map(|q| RawQuery {
                    question: q.question.clone(),
                    target: print(&q.target),
                    expected: q.expected,
                })
                .collect(),
            notes: self.notes.clone(),
        };
        serde_json::to_string_pretty(&raw).expect("puzzle serializes")
    }

    pub fn from_json(text: &str) -> Result<Puzzle, CorpusError> {
        let raw: RawPuzzle = serde_json::from_str(text).map_err(|e| CorpusError::Schema {
            detail: e.to_string(),
            line: e.line(),
            column: e.column(),
        })?;
        raw.into_puzzle()
    }
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSymbol {
    id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    gloss: Option<String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawStatement {
    id: String,
    text: String,
    gold: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    disputed: bool,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawQuery {
    question: String,
    target: String,
    expected: QueryStatus,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPuzzle {
    name: String,
    narrative: String,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    independent: bool,
    symbols: Vec<RawSymbol>,
    statements: Vec<RawStatement>,
    #[serde(default)]
    queries: Vec<RawQuery>,
    #[serde(default)]
    notes: Vec<String>,
}

fn parse_in(text: &str, vocab: &Vocabulary, context: String) -> Result<Formula, CorpusError> {
    parse(text, Some(vocab)).map_err(|e| match e.kind {
        ParseErrorKind::UnknownSymbol => CorpusError::VocabViolation {
            context,
            symbol: e.offending.unwrap_or_default(),
        },
        _ => CorpusError::Parse { context, source: e },
    })
}

impl RawPuzzle {
    fn into_puzzle(self) -> Result<Puzzle, CorpusError> {
        let symbols = self
            .symbols
            .into_iter()
            .map(|s| Symbol::new(s.id, s.gloss))
            .collect::<Result<Vec<_>, _>>()?;
        let vocab = Vocabulary::new(symbols)?;
        let statements = self
            .statements
            .into_iter()
            .map(|s| {
                let gold = parse_in(&s.gold, &vocab, format!("statement {}", s.id))?;
                Ok(Statement {
                    id: s.id,
                    text: s.text,
                    gold,
                    disputed: s.disputed,
                })
            })
            .collect::<Result<Vec<_>, CorpusError>>()?;
        let queries = self
            .queries
            .into_iter()
            .enumerate()
            .map(|(i, q)| {
                let target = parse_in(&q.target, &vocab, format!("query {i}"))?;
                Ok(Query {
                    question: q.question,
                    target,
                    expected: q.expected,
                })
            })
            .collect::<Result<Vec<_>, CorpusError>>()?;
        Ok(Puzzle {
            name: self.name,
            narrative: self.narrative,
            vocab,
            statements,
            queries,
            notes: self.notes,
            independent: self.independent,
        })
    }
}

pub fn load_puzzle(path: impl AsRef<Path>) -> Result<Puzzle, CorpusError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
        path: path.display().to_string(),
        source,
    })?;
    Puzzle::from_json(&text)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DuplicateStatementId(String),
    GoldOutOfVocabulary { statement: String, symbol: String },
    QueryOutOfVocabulary { query: usize, symbol: String },
    InconsistentGoldKb,
    /// An independent puzzle whose named statement is unsatisfiable alone.
    InconsistentStatement(String),
    /// Independent puzzles have no joint knowledge base to query.
    QueryOnIndependentPuzzle(usize),
    ExpectationMismatch {
        query: usize,
        question: String,
        expected: QueryStatus,
        obtained: QueryStatus,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DuplicateStatementId(id) => write!(f, "duplicate statement id {id:?}"),
            Violation::GoldOutOfVocabulary { statement, symbol } => {
                write!(f, "statement {statement}: gold uses undeclared symbol {symbol:?}")
            }
            Violation::QueryOutOfVocabulary { query, symbol } => {
                write!(f, "query {query}: target uses undeclared symbol {symbol:?}")
            }
            Violation::InconsistentGoldKb => f.write_str("gold knowledge base is inconsistent"),
            Violation::InconsistentStatement(id) => {
                write!(f, "statement {id}: gold encoding is unsatisfiable")
            }
            Violation::QueryOnIndependentPuzzle(i) => {
                write!(f, "query {i}: independent puzzles cannot carry queries")
            }
            Violation::ExpectationMismatch {
                query,
                question,
                expected,
                obtained,
            } => write!(
                f,
                "query {query} ({question}): expected {expected}, gold KB gives {obtained}"
            ),
        }
    }
}

/// Checks every puzzle invariant; an empty result means the puzzle is sound.
pub fn validate_puzzle(p: &Puzzle) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut ids = HashSet::new();
    for s in &p.statements {
        if !ids.insert(s.id.as_str()) {
            out.push(Violation::DuplicateStatementId(s.id.clone()));
        }
        for symbol in s.gold.undeclared_symbols(&p.vocab) {
            out.push(Violation::GoldOutOfVocabulary {
                statement: s.id.clone(),
                symbol,
            });
        }
    }
    for (i, q) in p.queries.iter().enumerate() {
        for symbol in q.target.undeclared_symbols(&p.vocab) {
            out.push(Violation::QueryOutOfVocabulary { query: i, symbol });
        }
    }
    if !out.is_empty() {
        return out;
    }

    if p.independent {
        for s in &p.statements {
            if !crate::sat::is_satisfiable(&s.gold) {
                out.push(Violation::InconsistentStatement(s.id.clone()));
            }
        }
        out.extend((0..p.queries.len()).map(Violation::QueryOnIndependentPuzzle));
        return out;
    }

    // labels need not be unique here; duplicates were reported above
    let kb = KnowledgeBase::new(
        p.vocab.clone(),
        p.statements
            .iter()
            .enumerate()
            .map(|(i, s)| (format!("{i}"), s.gold.clone()))
            .collect(),
    )
    .expect("symbols checked above");
    if !reasoner::consistent(&kb) {
        out.push(Violation::InconsistentGoldKb);
        return out;
    }
    for (i, q) in p.queries.iter().enumerate() {
        let obtained = reasoner::classify(&kb, &q.target).expect("symbols checked above");
        if obtained != q.expected {
            out.push(Violation::ExpectationMismatch {
                query: i,
                question: q.question.clone(),
                expected: q.expected,
                obtained,
            });
        }
    }
    out
}

const BUNDLED: &[(&str, &str)] = &[
    ("who_is_in_the_car", include_str!("../corpus/who_is_in_the_car.json")),
    ("alpine_club", include_str!("../corpus/alpine_club.json")),
    (
        "ladies_or_tigers_trial_1",
        include_str!("../corpus/ladies_or_tigers_trial_1.json"),
    ),
    ("three_balls", include_str!("../corpus/three_balls.json")),
];

/// Names of the bundled puzzles, in corpus order.
pub fn bundled_names() -> Vec<&'static str> {
    BUNDLED.iter().map(|(n, _)| *n).collect()
}

/// Raw JSON text of a bundled puzzle.
pub fn bundled_source(name: &str) -> Option<&'static str> {
    BUNDLED.iter().find(|(n, _)| *n == name).map(|(_, s)| *s)
}

pub fn bundled_puzzle(name: &str) -> Result<Puzzle, CorpusError> {
    let src = bundled_source(name).ok_or_else(|| CorpusError::UnknownPuzzle(name.to_string()))?;
    Puzzle::from_json(src)
}

/// Every bundled puzzle, parsed.
pub fn bundled() -> Vec<Puzzle> {
    BUNDLED
        .iter()
        .map(|(name, src)| {
            Puzzle::from_json(src).unwrap_or_else(|e| panic!("bundled puzzle {name} is malformed: {e}"))
        })
        .collect()
}

/// Encodings that language models actually produced for bundled statements,
/// kept as test fixtures and mock responses. None of these is gold.
pub mod recorded {
    /// Driver-in-car statement rendered as a case enumeration; differs from
    /// the gold `Di -> Pi` conjunction but gives the same query answers.
    pub const CAR_DRIVER_CASES: &str = "(D1 ∧ (P1 ∨ P2)) ∨ (D2 ∧ (P1 ∨ P2)) ∨ (D3 ∨ P2)";

    /// Room constraint of the second trial written as a conjunction of the
    /// four cases instead of a disjunction. Unsatisfiable.
    pub const ROOMS_AS_CONJUNCTION: &str = "(L1∧¬T1)∧(L2∧¬T2)∧(T1∧¬L1)∧(T2∧¬L2)";

    /// GPT-4's answers to the fifteen ball statements, in statement order.
    pub const GPT4_BALLS: [&str; 15] = [
        "(X1∧ ¬Y1∧ ¬Z1)∧ (¬X1∧ Y1∧ ¬Z1)∧ (¬X1∧ ¬Y1∧ Z1)",
        "X1∨ Y1∨ Z1",
        "(X1 AND Z3) OR (X3 AND Z1)",
        "X2 AND Z3",
        "X1 → Y1 AND Z1",
        "X1 AND Y2 → Z3",
        "NOT X2 → X1",
        "X1 ↔ Y2",
        "NOT (X1 AND Y1 AND Z1)",
        "X1 AND X2",
        "¬Y1 ∧ ¬Y2",
        "(¬Z1∨ ¬Z2) ∧ (¬Z1∨ ¬Z3) ∧ (¬Z2∨ ¬Z3)",
        "(X3 OR Y3 OR Z3) AND NOT (X2 OR Y2 OR Z2)",
        "(X1 ∧ ¬Y1)∨ (X2 ∧ ¬Y2)∨ (X3 ∧ ¬Y3)∨ (¬X1 ∧ Y1)∨ (¬X2 ∧ Y2)∨ (¬X3 ∧ Y3)",
        "X1 → ((Y1 ∧ Z1)∨ (Y2 ∧ Z2)∨ (Y3 ∧ Z3))",
    ];

    /// ChatGPT's answers to the fifteen ball statements, in statement order.
    pub const CHATGPT_BALLS: [&str; 15] = [
        "(X1 XOR X2) XOR X3 AND NOT (X1 AND X2)",
        "X1 OR X2 OR X3",
        "(X1 AND Z3) OR (X3 AND Z1)",
        "X2 AND Z3",
        "X1 → Y1 AND Z1",
        "X1 AND Y2 → Z3",
        "NOT X2 → X1",
        "X1 ↔ Y2",
        "NOT (X1 AND Y1 AND Z1)",
        "X1 AND X2",
        "NOT (Y1 OR Y2)",
        "(Z1 AND Z2) OR (Z1 AND Z3) OR (Z2 AND Z3)",
        "(X3 OR Y3 OR Z3) AND NOT (X2 OR Y2 OR Z2)",
        "(X1 AND Y2) OR (X2 AND Y1)",
        "X1 → Y2 AND Z2",
    ];
}
