//! Question answering over a knowledge base of propositional facts.
//!
//! Every question reduces to one or more satisfiability calls on a fresh
//! CNF instance, so the functions here are stateless and safe to call from
//! several threads at once.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::logic::{Formula, Vocabulary};
use crate::sat::{self, to_cnf_over, Literal, Solver};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReasonerError {
    #[error("fact {label:?} mentions undeclared symbol {symbol:?}")]
    FactOutOfVocabulary { label: String, symbol: String },
    #[error("duplicate fact label {0:?}")]
    DuplicateLabel(String),
    #[error("query mentions undeclared symbol {0:?}")]
    UnknownSymbol(String),
    #[error("the knowledge base is inconsistent")]
    InconsistentKb,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KnowledgeBase {
    vocab: Vocabulary,
    facts: Vec<(String, Formula)>,
}

impl KnowledgeBase {
    pub fn new(vocab: Vocabulary, facts: Vec<(String, Formula)>) -> Result<Self, ReasonerError> {
        let mut labels = HashSet::new();
        for (label, f) in &facts {
            if !labels.insert(label.as_str()) {
                return Err(ReasonerError::DuplicateLabel(label.clone()));
            }
            if let Some(symbol) = f.undeclared_symbols(&vocab).into_iter().next() {
                return Err(ReasonerError::FactOutOfVocabulary {
                    label: label.clone(),
                    symbol,
                });
            }
        }
        Ok(KnowledgeBase { vocab, facts })
    }

    pub fn empty(vocab: Vocabulary) -> Self {
        KnowledgeBase {
            vocab,
            facts: Vec::new(),
        }
    }

    pub fn vocab(&self) -> &Vocabulary {
        &self.vocab
    }

    pub fn facts(&self) -> &[(String, Formula)] {
        &self.facts
    }

    /// Returns a copy with the fact labelled `label` replaced by `f`.
    pub fn with_fact_replaced(&self, label: &str, f: Formula) -> Result<Self, ReasonerError> {
        let facts = self
            .facts
            .iter()
            .map(|(l, g)| (l.clone(), if l == label { f.clone() } else { g.clone() }))
            .collect();
        KnowledgeBase::new(self.vocab.clone(), facts)
    }

    pub fn conjunction(&self) -> Formula {
        Formula::and_all(self.facts.iter().map(|(_, f)| f.clone()).collect())
    }

    fn vocab_ids(&self) -> Vec<String> {
        self.vocab.ids().map(str::to_string).collect()
    }

    fn check_query(&self, q: &Formula) -> Result<(), ReasonerError> {
        match q.undeclared_symbols(&self.vocab).into_iter().next() {
            Some(s) => Err(ReasonerError::UnknownSymbol(s)),
            None => Ok(()),
        }
    }

    fn satisfiable_with(&self, extra: Formula) -> bool {
        let mut parts: Vec<Formula> = self.facts.iter().map(|(_, f)| f.clone()).collect();
        parts.push(extra);
        let cnf = to_cnf_over(&Formula::and_all(parts), &self.vocab_ids())
            .expect("facts and query were checked against the vocabulary");
        sat::solve(&cnf, &[]).is_sat()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum QueryStatus {
    Entailed,
    Refuted,
    Unknown,
    KbInconsistent,
}

impl fmt::Display for QueryStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            QueryStatus::Entailed => "Entailed",
            QueryStatus::Refuted => "Refuted",
            QueryStatus::Unknown => "Unknown",
            QueryStatus::KbInconsistent => "KbInconsistent",
        })
    }
}

impl std::str::FromStr for QueryStatus {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        Ok(match s {
            "Entailed" => QueryStatus::Entailed,
            "Refuted" => QueryStatus::Refuted,
            "Unknown" => QueryStatus::Unknown,
            "KbInconsistent" => QueryStatus::KbInconsistent,
            other => return Err(format!("unknown query status {other:?}")),
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Polarity {
    ForcedTrue,
    ForcedFalse,
    Free,
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::ForcedTrue => "ForcedTrue",
            Polarity::ForcedFalse => "ForcedFalse",
            Polarity::Free => "Free",
        })
    }
}

/// Per-symbol status in vocabulary order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BackboneReport {
    pub entries: Vec<(String, Polarity)>,
}

impl BackboneReport {
    pub fn get(&self, id: &str) -> Option<Polarity> {
        self.entries.iter().find(|(s, _)| s == id).map(|(_, p)| *p)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EncodingRelation {
    Equivalent,
    CandidateStronger,
    CandidateWeaker,
    Overlapping,
    Disjoint,
    CandidateContradictory,
    CandidateTautological,
}

impl fmt::Display for EncodingRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub fn consistent(kb: &KnowledgeBase) -> bool {
    kb.satisfiable_with(Formula::Const(true))
}

/// KB ⊨ q, decided as unsatisfiability of KB ∧ ¬q.
pub fn entails(kb: &KnowledgeBase, q: &Formula) -> Result<bool, ReasonerError> {
    kb.check_query(q)?;
    Ok(!kb.satisfiable_with(Formula::not(q.clone())))
}

/// Three-valued answer; an inconsistent KB is reported as such rather than
/// entailing everything.
pub fn classify(kb: &KnowledgeBase, q: &Formula) -> Result<QueryStatus, ReasonerError> {
    kb.check_query(q)?;
    if !consistent(kb) {
        return Ok(QueryStatus::KbInconsistent);
    }
    if !kb.satisfiable_with(Formula::not(q.clone())) {
        Ok(QueryStatus::Entailed)
    } else if !kb.satisfiable_with(q.clone()) {
        Ok(QueryStatus::Refuted)
    } else {
        Ok(QueryStatus::Unknown)
    }
}

/// Forced/free status of every vocabulary symbol.
///
/// Starts from one model and keeps its literals as backbone candidates; each
/// candidate is tested by solving under the opposite assumption, and every
/// counter-model found removes all candidates it disagrees with.
pub fn backbone(kb: &KnowledgeBase) -> Result<BackboneReport, ReasonerError> {
    let ids = kb.vocab_ids();
    let cnf = to_cnf_over(&kb.conjunction(), &ids).expect("facts were checked against the vocabulary");
    let Some(first) = Solver::new(&cnf).solve(&[]) else {
        return Err(ReasonerError::InconsistentKb);
    };
    let n = ids.len();
    // candidate[i] = Some(value) while symbol i+1 may still be forced to value
    let mut candidate: Vec<Option<bool>> = (1..=n).map(|v| Some(first[v])).collect();
    for i in 0..n {
        let Some(value) = candidate[i] else { continue };
        let flipped = Literal::new(i as u32 + 1, !value);
        if let Some(other) = Solver::new(&cnf).solve(&[flipped]) {
            for (j, c) in candidate.iter_mut().enumerate() {
                if *c != Some(other[j + 1]) {
                    *c = None;
                }
            }
        }
    }
    let entries = ids
        .into_iter()
        .zip(candidate)
        .map(|(id, c)| {
            let p = match c {
                Some(true) => Polarity::ForcedTrue,
                Some(false) => Polarity::ForcedFalse,
                None => Polarity::Free,
            };
            (id, p)
        })
        .collect();
    Ok(BackboneReport { entries })
}

fn union_symbols(fs: &[&Formula]) -> Vec<String> {
    let mut out: Vec<String> = Vec::new();
    for f in fs {
        for s in f.free_symbols() {
            if !out.contains(&s) {
                out.push(s);
            }
        }
    }
    out
}

fn satisfiable(f: &Formula, over: &[String]) -> bool {
    let cnf = to_cnf_over(f, over).expect("symbols collected from the formula");
    sat::solve(&cnf, &[]).is_sat()
}

/// True iff ¬(f ↔ g) is unsatisfiable over the union of their symbols.
pub fn equivalent(f: &Formula, g: &Formula) -> bool {
    let over = union_symbols(&[f, g]);
    !satisfiable(&Formula::not(Formula::iff(f.clone(), g.clone())), &over)
}

/// Semantic relation of a candidate encoding to the gold one. The cases are
/// tested in the order listed below and the first that holds wins.
pub fn relation(candidate: &Formula, gold: &Formula) -> EncodingRelation {
    let over = union_symbols(&[candidate, gold]);
    let sat = |f: Formula| satisfiable(&f, &over);
    let not = |f: &Formula| Formula::not(f.clone());
    let and = |a: Formula, b: Formula| Formula::And(vec![a, b]);

    if !sat(candidate.clone()) {
        return EncodingRelation::CandidateContradictory;
    }
    let candidate_taut = !sat(not(candidate));
    let gold_taut = !sat(not(gold));
    if candidate_taut && !gold_taut {
        return EncodingRelation::CandidateTautological;
    }
    let cand_implies_gold = !sat(and(candidate.clone(), not(gold)));
    let gold_implies_cand = !sat(and(gold.clone(), not(candidate)));
    match (cand_implies_gold, gold_implies_cand) {
        (true, true) => EncodingRelation::Equivalent,
        (true, false) => EncodingRelation::CandidateStronger,
        (false, true) => EncodingRelation::CandidateWeaker,
        (false, false) => {
            if !sat(and(candidate.clone(), gold.clone())) {
                EncodingRelation::Disjoint
            } else {
                EncodingRelation::Overlapping
            }
        }
    }
}
