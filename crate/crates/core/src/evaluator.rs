//! Scoring candidate encodings against gold, and the end-to-end pipeline:
//! translate, assemble a knowledge base, answer the queries.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Puzzle, Statement};
use crate::reasoner::{self, EncodingRelation, KnowledgeBase, QueryStatus};
use crate::sat;
use crate::translator::{self, CandidateEncoding, FailureKind, TranslateError, TranslationMode, Translator, TranslatorConfig};

/// Version of the JSON report layout produced by [`render_report`].
pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("candidate for statement {found:?} scored against statement {expected:?}")]
    IdMismatch { expected: String, found: String },
    #[error("expected {expected} candidates, got {found}")]
    CardinalityMismatch { expected: usize, found: usize },
    #[error(transparent)]
    Translate(#[from] TranslateError),
}

/// How a candidate relates to gold, or why there was nothing to compare.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScoreRelation {
    Encoding(EncodingRelation),
    Failure(FailureKind),
}

impl ScoreRelation {
    pub fn encoding(self) -> Option<EncodingRelation> {
        match self {
            ScoreRelation::Encoding(r) => Some(r),
            ScoreRelation::Failure(_) => None,
        }
    }
}

impl fmt::Display for ScoreRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScoreRelation::Encoding(r) => r.fmt(f),
            ScoreRelation::Failure(k) => k.fmt(f),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatementScore {
    pub statement_id: String,
    pub relation: ScoreRelation,
    pub correct: bool,
    pub disputed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PuzzleScore {
    pub puzzle: String,
    pub mode: String,
    pub scores: Vec<StatementScore>,
}

impl PuzzleScore {
    /// Correct and total counts over undisputed statements.
    pub fn ratio(&self) -> (usize, usize) {
        self.count(false)
    }

    /// Correct and total counts over disputed statements.
    pub fn disputed_ratio(&self) -> (usize, usize) {
        self.count(true)
    }

    fn count(&self, disputed: bool) -> (usize, usize) {
        let part = self.scores.iter().filter(|s| s.disputed == disputed);
        let total = part.clone().count();
        (part.filter(|s| s.correct).count(), total)
    }

    pub fn score(&self, statement_id: &str) -> Option<&StatementScore> {
        self.scores.iter().find(|s| s.statement_id == statement_id)
    }
}

pub fn score_statement(c: &CandidateEncoding, s: &Statement) -> Result<StatementScore, EvalError> {
    if c.statement_id != s.id {
        return Err(EvalError::IdMismatch {
            expected: s.id.clone(),
            found: c.statement_id.clone(),
        });
    }
    let relation = match &c.outcome {
        Ok(f) => ScoreRelation::Encoding(reasoner::relation(f, &s.gold)),
        Err(failure) => ScoreRelation::Failure(failure.kind),
    };
    Ok(StatementScore {
        statement_id: s.id.clone(),
        correct: relation == ScoreRelation::Encoding(EncodingRelation::Equivalent),
        relation,
        disputed: s.disputed,
    })
}

/// Scores one candidate per statement, matched positionally.
pub fn score_puzzle(
    candidates: &[CandidateEncoding],
    p: &Puzzle,
    mode: TranslationMode,
) -> Result<PuzzleScore, EvalError> {
    if candidates.len() != p.statements.len() {
        return Err(EvalError::CardinalityMismatch {
            expected: p.statements.len(),
            found: candidates.len(),
        });
    }
    let scores = candidates
        .iter()
        .zip(&p.statements)
        .map(|(c, s)| score_statement(c, s))
        .collect::<Result<_, _>>()?;
    Ok(PuzzleScore {
        puzzle: p.name.clone(),
        mode: mode.label().to_string(),
        scores,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status")]
pub enum KbStatus {
    Consistent,
    Inconsistent,
    /// Statements whose candidates carry no formula.
    Incomplete { failed: Vec<String> },
}

impl fmt::Display for KbStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KbStatus::Consistent => f.write_str("Consistent"),
            KbStatus::Inconsistent => f.write_str("Inconsistent"),
            KbStatus::Incomplete { failed } => write!(f, "Incomplete({})", failed.join(",")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    AllCorrect,
    PartiallyCorrect,
    Failed,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryOutcome {
    pub question: String,
    pub target: String,
    pub expected: QueryStatus,
    pub obtained: QueryStatus,
    pub matched: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndToEndReport {
    pub puzzle: String,
    pub mode: String,
    pub kb_status: KbStatus,
    pub queries: Vec<QueryOutcome>,
    pub verdict: Verdict,
}

impl EndToEndReport {
    pub fn matched(&self) -> usize {
        self.queries.iter().filter(|q| q.matched).count()
    }
}

/// Translates `p` with `client` and runs the candidates through
/// [`assess_candidates`].
pub fn end_to_end(
    p: &Puzzle,
    mode: TranslationMode,
    cfg: &TranslatorConfig,
    client: &dyn Translator,
) -> Result<EndToEndReport, EvalError> {
    let run = translator::translate(p, mode, cfg, client)?;
    assess_candidates(p, mode, &run.candidates)
}

/// Builds a knowledge base from the candidates and answers the puzzle's
/// queries with it. Queries are skipped when any candidate failed or the
/// candidates are jointly unsatisfiable. For independent puzzles each
/// candidate is checked for satisfiability on its own.
pub fn assess_candidates(
    p: &Puzzle,
    mode: TranslationMode,
    candidates: &[CandidateEncoding],
) -> Result<EndToEndReport, EvalError> {
    if candidates.len() != p.statements.len() {
        return Err(EvalError::CardinalityMismatch {
            expected: p.statements.len(),
            found: candidates.len(),
        });
    }
    for (c, s) in candidates.iter().zip(&p.statements) {
        if c.statement_id != s.id {
            return Err(EvalError::IdMismatch {
                expected: s.id.clone(),
                found: c.statement_id.clone(),
            });
        }
    }
    let report = |kb_status, queries: Vec<QueryOutcome>, verdict| EndToEndReport {
        puzzle: p.name.clone(),
        mode: mode.label().to_string(),
        kb_status,
        queries,
        verdict,
    };

    let failed: Vec<String> = candidates
        .iter()
        .filter(|c| c.formula().is_none())
        .map(|c| c.statement_id.clone())
        .collect();
    if !failed.is_empty() {
        return Ok(report(KbStatus::Incomplete { failed }, Vec::new(), Verdict::Failed));
    }
    let facts: Vec<(String, _)> = candidates
        .iter()
        .map(|c| (c.statement_id.clone(), c.formula().cloned().expect("checked above")))
        .collect();

    let consistent = if p.independent {
        facts.iter().all(|(_, f)| sat::is_satisfiable(f))
    } else {
        let kb = KnowledgeBase::new(p.vocab.clone(), facts.clone()).expect("candidates use only declared symbols");
        reasoner::consistent(&kb)
    };
    if !consistent {
        return Ok(report(KbStatus::Inconsistent, Vec::new(), Verdict::Failed));
    }
    if p.independent {
        return Ok(report(KbStatus::Consistent, Vec::new(), Verdict::AllCorrect));
    }

    let kb = KnowledgeBase::new(p.vocab.clone(), facts).expect("candidates use only declared symbols");
    let queries: Vec<QueryOutcome> = p
        .queries
        .iter()
        .map(|q| {
            let obtained = reasoner::classify(&kb, &q.target).expect("query symbols are validated with the puzzle");
            QueryOutcome {
                question: q.question.clone(),
                target: crate::parser::print(&q.target),
                expected: q.expected,
                obtained,
                matched: obtained == q.expected,
            }
        })
        .collect();
    let matched = queries.iter().filter(|q| q.matched).count();
    let verdict = if matched == queries.len() {
        Verdict::AllCorrect
    } else if matched > 0 {
        Verdict::PartiallyCorrect
    } else {
        Verdict::Failed
    };
    Ok(report(KbStatus::Consistent, queries, verdict))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Report {
    Score(PuzzleScore),
    EndToEnd(EndToEndReport),
}

impl Report {
    fn key(&self) -> (&str, &str) {
        match self {
            Report::Score(s) => (&s.puzzle, &s.mode),
            Report::EndToEnd(e) => (&e.puzzle, &e.mode),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Table,
    Json,
}

#[derive(Serialize, Deserialize)]
struct JsonReport {
    schema_version: u32,
    reports: Vec<JsonEntry>,
}

/// A report plus derived ratio strings, so the JSON carries the same
/// "k/n" cells as the table.
#[derive(Serialize, Deserialize)]
struct JsonEntry {
    #[serde(flatten)]
    report: Report,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ratio: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    disputed_ratio: Option<String>,
}

fn cell((k, n): (usize, usize)) -> String {
    format!("{k}/{n}")
}

/// Renders reports as an aligned text table (one row per puzzle and mode)
/// or as versioned JSON.
pub fn render_report(reports: &[Report], format: ReportFormat) -> String {
    match format {
        ReportFormat::Json => {
            let doc = JsonReport {
                schema_version: REPORT_SCHEMA_VERSION,
                reports: reports
                    .iter()
                    .map(|r| {
                        let (ratio, disputed_ratio) = match r {
                            Report::Score(s) => (Some(cell(s.ratio())), Some(cell(s.disputed_ratio()))),
                            Report::EndToEnd(_) => (None, None),
                        };
                        JsonEntry {
                            report: r.clone(),
                            ratio,
                            disputed_ratio,
                        }
                    })
                    .collect(),
            };
            serde_json::to_string_pretty(&doc).expect("reports serialize") + "\n"
        }
        ReportFormat::Table => render_table(reports),
    }
}

/// Parses JSON produced by [`render_report`] back into reports.
pub fn parse_json_report(text: &str) -> Result<Vec<Report>, String> {
    let doc: JsonReport = serde_json::from_str(text).map_err(|e| e.to_string())?;
    if doc.schema_version != REPORT_SCHEMA_VERSION {
        return Err(format!("unsupported schema version {}", doc.schema_version));
    }
    Ok(doc.reports.into_iter().map(|e| e.report).collect())
}

fn render_table(reports: &[Report]) -> String {
    const HEADER: [&str; 7] = ["puzzle", "mode", "correct", "disputed", "kb", "queries", "verdict"];
    let mut rows: Vec<[String; 7]> = Vec::new();
    for r in reports {
        let (puzzle, mode) = r.key();
        // a report fills the first row for its puzzle and mode that lacks its columns
        let col = if matches!(r, Report::Score(_)) { 2 } else { 6 };
        let i = match rows.iter().position(|row| row[0] == puzzle && row[1] == mode && row[col] == "-") {
            Some(i) => i,
            None => {
                let mut row: [String; 7] = Default::default();
                row[0] = puzzle.to_string();
                row[1] = mode.to_string();
                for c in &mut row[2..] {
                    *c = "-".into();
                }
                rows.push(row);
                rows.len() - 1
            }
        };
        let row = &mut rows[i];
        match r {
            Report::Score(s) => {
                row[2] = cell(s.ratio());
                let d = s.disputed_ratio();
                if d.1 > 0 {
                    row[3] = cell(d);
                }
            }
            Report::EndToEnd(e) => {
                row[4] = e.kb_status.to_string();
                if !e.queries.is_empty() {
                    row[5] = cell((e.matched(), e.queries.len()));
                }
                row[6] = e.verdict.to_string();
            }
        }
    }
    let mut widths = HEADER.map(str::len);
    for row in &rows {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.chars().count());
        }
    }
    let line = |cells: Vec<&str>| {
        let mut s = String::new();
        for (i, (c, w)) in cells.iter().zip(widths).enumerate() {
            if i + 1 == cells.len() {
                s.push_str(c);
            } else {
                s.push_str(&format!("{c:<w$}  "));
            }
        }
        s.trim_end().to_string() + "\n"
    };
    let mut out = line(HEADER.to_vec());
    for row in &rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{bundled, bundled_puzzle, recorded};
    use crate::parser::parse;
    use crate::translator::{CandidateFailure, MockTranslator};

    fn gold_candidates(p: &Puzzle) -> Vec<CandidateEncoding> {
        p.statements
            .iter()
            .map(|s| CandidateEncoding::from_formula(s.id.clone(), s.gold.clone()))
            .collect()
    }

    fn answers(p: &Puzzle, texts: &[&str]) -> Vec<CandidateEncoding> {
        p.statements
            .iter()
            .zip(texts)
            .map(|(s, t)| CandidateEncoding::from_formula(s.id.clone(), parse(t, Some(&p.vocab)).unwrap()))
            .collect()
    }

    #[test]
    fn gold_is_correct_everywhere() {
        for p in bundled() {
            for s in &p.statements {
                let c = CandidateEncoding::from_formula(s.id.clone(), s.gold.clone());
                let score = score_statement(&c, s).unwrap();
                assert!(score.correct, "{} {}", p.name, s.id);
                assert_eq!(score.relation, ScoreRelation::Encoding(EncodingRelation::Equivalent));
            }
        }
    }

    #[test]
    fn gold_ratio_on_balls() {
        let p = bundled_puzzle("three_balls").unwrap();
        let score = score_puzzle(&gold_candidates(&p), &p, TranslationMode::WholeText).unwrap();
        assert_eq!(score.ratio(), (13, 13));
        assert_eq!(score.disputed_ratio(), (2, 2));
    }

    #[test]
    fn gpt4_ball_answers() {
        let p = bundled_puzzle("three_balls").unwrap();
        let score = score_puzzle(&answers(&p, &recorded::GPT4_BALLS), &p, TranslationMode::WholeText).unwrap();
        assert_eq!(score.ratio(), (11, 13));
        assert_eq!(
            score.score("1").unwrap().relation,
            ScoreRelation::Encoding(EncodingRelation::CandidateContradictory)
        );
        assert_eq!(
            score.score("12").unwrap().relation,
            ScoreRelation::Encoding(EncodingRelation::CandidateStronger)
        );
        assert!(score.score("13").unwrap().disputed);
    }

    #[test]
    fn chatgpt_statement_11_is_de_morgan_equivalent() {
        let p = bundled_puzzle("three_balls").unwrap();
        let s = p.statement("11").unwrap();
        let c = CandidateEncoding::from_formula("11", parse("NOT (Y1 OR Y2)", None).unwrap());
        assert!(score_statement(&c, s).unwrap().correct);
    }

    #[test]
    fn failures_and_shape_errors() {
        let p = bundled_puzzle("who_is_in_the_car").unwrap();
        assert!(matches!(
            score_puzzle(&[], &p, TranslationMode::WholeText),
            Err(EvalError::CardinalityMismatch { expected: 4, found: 0 })
        ));
        let mut c = gold_candidates(&p);
        c.swap(0, 1);
        assert!(matches!(
            score_puzzle(&c, &p, TranslationMode::WholeText),
            Err(EvalError::IdMismatch { .. })
        ));
        let mut c = gold_candidates(&p);
        c[2].outcome = Err(CandidateFailure::new(FailureKind::Refusal, "no"));
        let score = score_puzzle(&c, &p, TranslationMode::WholeText).unwrap();
        assert_eq!(score.ratio(), (3, 4));
        assert_eq!(score.scores[2].relation, ScoreRelation::Failure(FailureKind::Refusal));
        let e2e = assess_candidates(&p, TranslationMode::WholeText, &c).unwrap();
        assert_eq!(e2e.kb_status, KbStatus::Incomplete { failed: vec!["3".into()] });
        assert!(e2e.queries.is_empty());
        assert_eq!(e2e.verdict, Verdict::Failed);
    }

    #[test]
    fn mock_gold_end_to_end_everywhere() {
        let cfg = TranslatorConfig::default();
        for p in bundled() {
            for mode in [TranslationMode::WholeText, TranslationMode::StatementAtATime] {
                let r = end_to_end(&p, mode, &cfg, &MockTranslator::gold(&p)).unwrap();
                assert_eq!(r.verdict, Verdict::AllCorrect, "{} {mode}", p.name);
                assert_eq!(r.kb_status, KbStatus::Consistent);
            }
        }
    }

    #[test]
    fn strange_driver_formula_still_answers_correctly() {
        let p = bundled_puzzle("who_is_in_the_car").unwrap();
        let mut c = gold_candidates(&p);
        c[3] = CandidateEncoding::from_formula("4", parse(recorded::CAR_DRIVER_CASES, None).unwrap());
        let r = assess_candidates(&p, TranslationMode::WholeText, &c).unwrap();
        assert_eq!(r.verdict, Verdict::AllCorrect);
        let score = score_puzzle(&c, &p, TranslationMode::WholeText).unwrap();
        assert_eq!(score.ratio(), (3, 4));
    }

    #[test]
    fn contradictory_rooms_fail_the_kb() {
        let p = bundled_puzzle("ladies_or_tigers_trial_1").unwrap();
        let mut c = gold_candidates(&p);
        c[0] = CandidateEncoding::from_formula("1", parse(recorded::ROOMS_AS_CONJUNCTION, None).unwrap());
        let r = assess_candidates(&p, TranslationMode::WholeText, &c).unwrap();
        assert_eq!(r.kb_status, KbStatus::Inconsistent);
        assert_eq!(r.verdict, Verdict::Failed);
    }

    #[test]
    fn partial_verdict() {
        let p = bundled_puzzle("who_is_in_the_car").unwrap();
        let mut c = gold_candidates(&p);
        // dropping "A1 only if A2" leaves P2 undetermined
        c[2] = CandidateEncoding::from_formula("3", parse("P1 OR NOT P1", None).unwrap());
        let r = assess_candidates(&p, TranslationMode::WholeText, &c).unwrap();
        assert_eq!(r.verdict, Verdict::PartiallyCorrect);
    }

    #[test]
    fn table_rendering() {
        assert_eq!(
            render_report(&[], ReportFormat::Table),
            "puzzle  mode  correct  disputed  kb  queries  verdict\n"
        );
        let p = bundled_puzzle("who_is_in_the_car").unwrap();
        let c = gold_candidates(&p);
        let reports = vec![
            Report::Score(score_puzzle(&c, &p, TranslationMode::WholeText).unwrap()),
            Report::EndToEnd(assess_candidates(&p, TranslationMode::WholeText, &c).unwrap()),
        ];
        let table = render_report(&reports, ReportFormat::Table);
        let lines: Vec<_> = table.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[1].contains("4/4"));
        assert!(lines[1].contains("3/3"));
        assert!(lines[1].ends_with("AllCorrect"));

        let mut again = reports.clone();
        again.push(reports[1].clone());
        assert_eq!(render_report(&again, ReportFormat::Table).lines().count(), 3);
    }

    #[test]
    fn json_round_trip() {
        let p = bundled_puzzle("three_balls").unwrap();
        let c = answers(&p, &recorded::GPT4_BALLS);
        let reports = vec![
            Report::Score(score_puzzle(&c, &p, TranslationMode::WholeText).unwrap()),
            Report::EndToEnd(assess_candidates(&p, TranslationMode::WholeText, &c).unwrap()),
        ];
        let json = render_report(&reports, ReportFormat::Json);
        let v: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(v["schema_version"], 1);
        assert_eq!(v["reports"][0]["ratio"], "11/13");
        assert_eq!(v["reports"][1]["kb_status"]["status"], "Inconsistent");
        assert_eq!(parse_json_report(&json).unwrap(), reports);
    }
}
