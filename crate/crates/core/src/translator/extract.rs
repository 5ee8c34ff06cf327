//! Pulling candidate formulas out of free-text model responses.

use std::collections::BTreeMap;

use super::{CandidateEncoding, CandidateFailure, FailureKind, TranslationMode};
use crate::corpus::{Puzzle, Statement};
use crate::logic::Formula;
use crate::parser::{parse, ParseError};

const REFUSAL_CUES: &[&str] = &[
    "assume",
    "assuming",
    "cannot encode",
    "can't encode",
    "cannot be encoded",
    "cannot be expressed",
    "unable to",
    "not possible to",
    "i cannot",
    "i can't",
];

const LATEX: &[(&str, &str)] = &[
    ("\\leftrightarrow", "↔"),
    ("\\Leftrightarrow", "↔"),
    ("\\rightarrow", "→"),
    ("\\Rightarrow", "→"),
    ("\\oplus", "⊕"),
    ("\\land", "∧"),
    ("\\wedge", "∧"),
    ("\\lor", "∨"),
    ("\\vee", "∨"),
    ("\\lnot", "¬"),
    ("\\neg", "¬"),
    ("\\to", "→"),
];

fn normalize(line: &str) -> String {
    let mut s = line.replace("**", "").replace('$', "");
    for (from, to) in LATEX {
        s = s.replace(from, to);
    }
    s.trim().to_string()
}

/// True if the text contains something that looks like a logical operator.
fn has_operator(text: &str) -> bool {
    if text.contains(['¬', '∧', '∨', '⊕', '→', '↔', '⇒', '⇔']) || text.contains("->") {
        return true;
    }
    text.split(|c: char| !c.is_ascii_alphabetic())
        .any(|w| matches!(w, "AND" | "OR" | "NOT" | "XOR" | "IMPLIES" | "IFF"))
}

fn is_refusal(text: &str) -> bool {
    let lower = text.to_lowercase();
    REFUSAL_CUES.iter().any(|c| lower.contains(c)) && !has_operator(text)
}

/// If `line` opens with a marker for one of `ids` (`3.`, `3)`, `3:`,
/// `Statement 3:`, optionally after list bullets), returns the id and the
/// rest of the line.
fn split_marker<'a>(line: &'a str, ids: &[&str]) -> Option<(String, &'a str)> {
    let mut rest = line.trim_start_matches(|c: char| c.is_whitespace() || matches!(c, '-' | '*' | '#' | '>'));
    for word in ["Statement", "statement", "Sentence", "sentence"] {
        if let Some(r) = rest.strip_prefix(word) {
            rest = r.trim_start();
            break;
        }
    }
    let end = rest
        .find(|c: char| !(c.is_ascii_alphanumeric() || c == '_'))
        .unwrap_or(rest.len());
    let (id, after) = rest.split_at(end);
    if id.is_empty() || !ids.contains(&id) {
        return None;
    }
    let after = after.strip_prefix(['.', ')', ':'])?;
    Some((id.to_string(), after))
}

/// Substrings of a line worth trying as a formula: the whole line, any
/// backtick-quoted parts, and the text after each colon.
fn spans(line: &str) -> Vec<String> {
    let mut out = vec![line.replace('`', "")];
    let ticks: Vec<&str> = line.split('`').collect();
    for (i, part) in ticks.iter().enumerate() {
        if i % 2 == 1 {
            out.push(part.to_string());
        }
    }
    let plain = line.replace('`', "");
    for (i, c) in plain.char_indices() {
        if c == ':' {
            out.push(plain[i + 1..].to_string());
        }
    }
    out.into_iter()
        .map(|s| s.trim().trim_end_matches(['.', ',', ';']).trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

enum LineResult {
    Formula(Formula),
    Failed(Option<ParseError>),
}

fn formula_in_line(line: &str, p: &Puzzle) -> LineResult {
    let mut last_err = None;
    for span in spans(line) {
        match parse(&span, None) {
            // a lone word is only a formula if it is a declared symbol
            Ok(Formula::Atom(id)) if !p.vocab.contains(&id) => {}
            Ok(f) => return LineResult::Formula(f),
            Err(e) => {
                if last_err.is_none() {
                    last_err = Some(e);
                }
            }
        }
    }
    LineResult::Failed(last_err)
}

/// Classifies one statement's block of response text.
fn extract_block(lines: &[String], p: &Puzzle, statement_id: &str) -> CandidateEncoding {
    let excerpt = lines.join("\n").trim().to_string();
    let mut found = None;
    let mut parse_failure = None;
    for line in lines {
        match formula_in_line(line, p) {
            LineResult::Formula(f) => found = Some(f),
            LineResult::Failed(Some(e)) if has_operator(line) => parse_failure = Some(e),
            LineResult::Failed(_) => {}
        }
    }
    let outcome = match found {
        Some(f) => {
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
        None if is_refusal(&excerpt) => Err(CandidateFailure::new(
            FailureKind::Refusal,
            "response declines or substitutes an assumption instead of an encoding",
        )),
        None => match parse_failure {
            Some(e) => Err(CandidateFailure::parse(e)),
            None => Err(CandidateFailure::new(FailureKind::NoFormulaFound, "no formula in response")),
        },
    };
    CandidateEncoding {
        statement_id: statement_id.to_string(),
        raw_excerpt: excerpt,
        outcome,
    }
}

/// One candidate per puzzle statement, in statement order.
///
/// Lines are grouped under statement-id markers; within a group the last
/// line holding a parseable formula wins. When the response carries no
/// markers at all and the whole text was translated, the k-th
/// formula-bearing line is assigned to the k-th statement instead.
pub fn extract_candidates(response: &str, p: &Puzzle, mode: TranslationMode) -> Vec<CandidateEncoding> {
    let ids: Vec<&str> = p.statements.iter().map(|s| s.id.as_str()).collect();
    let mut blocks: BTreeMap<String, Vec<String>> = BTreeMap::new();
    let mut current: Option<String> = None;
    let mut any_marker = false;
    for raw in response.lines() {
        let line = normalize(raw);
        if line.starts_with("```") {
            continue;
        }
        if let Some((id, rest)) = split_marker(&line, &ids) {
            any_marker = true;
            blocks.entry(id.clone()).or_default().push(rest.trim().to_string());
            current = Some(id);
        } else if let Some(id) = &current {
            blocks.get_mut(id).expect("block exists").push(line);
        }
    }

    if !any_marker && mode == TranslationMode::WholeText {
        let bearing: Vec<String> = response
            .lines()
            .map(normalize)
            .filter(|l| matches!(formula_in_line(l, p), LineResult::Formula(_)))
            .collect();
        return p
            .statements
            .iter()
            .enumerate()
            .map(|(k, s)| extract_block(&bearing[k.min(bearing.len())..(k + 1).min(bearing.len())], p, &s.id))
            .collect();
    }

    p.statements
        .iter()
        .map(|s| match blocks.get(&s.id) {
            Some(lines) => extract_block(lines, p, &s.id),
            None => CandidateEncoding {
                statement_id: s.id.clone(),
                raw_excerpt: String::new(),
                outcome: Err(CandidateFailure::new(
                    FailureKind::NoFormulaFound,
                    format!("no answer marked for statement {}", s.id),
                )),
            },
        })
        .collect()
}

/// Extracts the candidate for a single statement from a response that
/// answers only that statement.
pub fn extract_single(response: &str, p: &Puzzle, statement: &Statement) -> CandidateEncoding {
    let ids = [statement.id.as_str()];
    let lines: Vec<String> = response
        .lines()
        .map(normalize)
        .filter(|l| !l.starts_with("```"))
        .map(|l| match split_marker(&l, &ids) {
            Some((_, rest)) => rest.trim().to_string(),
            None => l,
        })
        .collect();
    extract_block(&lines, p, &statement.id)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::bundled_puzzle;

    fn balls() -> Puzzle {
        bundled_puzzle("three_balls").unwrap()
    }

    fn formula(c: &CandidateEncoding) -> &Formula {
        c.formula().unwrap_or_else(|| panic!("{c:?}"))
    }

    #[test]
    fn marked_statement() {
        let p = balls();
        let cs = extract_candidates("3. (X1 AND Z3) OR (X3 AND Z1)", &p, TranslationMode::WholeText);
        assert_eq!(cs.len(), 15);
        assert_eq!(formula(&cs[2]), &parse("(X1 AND Z3) OR (X3 AND Z1)", None).unwrap());
        assert_eq!(cs[0].failure().unwrap().kind, FailureKind::NoFormulaFound);
    }

    #[test]
    fn undeclared_symbol() {
        let p = balls();
        let cs = extract_candidates("1. W1 OR X1", &p, TranslationMode::WholeText);
        let f = cs[0].failure().unwrap();
        assert_eq!(f.kind, FailureKind::OutOfVocabulary);
        assert!(f.detail.contains("W1"));
    }

    #[test]
    fn ids_do_not_collide() {
        let p = balls();
        let text = "1. X1\n11. NOT Y1 AND NOT Y2\n12) NOT (Z1 AND Z2 AND Z3)";
        let cs = extract_candidates(text, &p, TranslationMode::WholeText);
        assert_eq!(formula(&cs[0]), &Formula::atom("X1"));
        assert_eq!(formula(&cs[10]), &parse("¬Y1 ∧ ¬Y2", None).unwrap());
        assert_eq!(formula(&cs[11]), &parse("NOT (Z1 AND Z2 AND Z3)", None).unwrap());
    }

    #[test]
    fn last_formula_wins_and_prose_is_skipped() {
        let p = balls();
        let text = "Statement 5: If A is red, so are B and C.\n\
                    First attempt: X1 -> Y1\n\
                    On reflection the correct encoding is:\n\
                    `X1 → (Y1 ∧ Z1)`.\n\
                    Statement 6: **X1 AND Y2 → Z3**";
        let cs = extract_candidates(text, &p, TranslationMode::WholeText);
        assert_eq!(formula(&cs[4]), &parse("X1 -> Y1 AND Z1", None).unwrap());
        assert_eq!(formula(&cs[5]), &parse("X1 AND Y2 -> Z3", None).unwrap());
    }

    #[test]
    fn latex_and_code_fences() {
        let p = balls();
        let text = "```\n8. $X_1$ placeholder\n```\n8. $X1 \\leftrightarrow Y2$";
        let cs = extract_candidates(text, &p, TranslationMode::WholeText);
        assert_eq!(formula(&cs[7]), &parse("X1 <-> Y2", None).unwrap());
    }

    #[test]
    fn assumption_instead_of_encoding_is_refusal() {
        let p = bundled_puzzle("ladies_or_tigers_trial_1").unwrap();
        let text = "1. (L1 ↔ ¬T1) ∧ (L2 ↔ ¬T2)\n\
                    2. S1 ↔ (L1 ∧ T2)\n\
                    3. S2 ↔ ((L1 ∨ L2) ∧ (T1 ∨ T2))\n\
                    4. Let us assume that the sign on Room I is true and the sign on Room II is false.";
        let cs = extract_candidates(text, &p, TranslationMode::WholeText);
        assert!(cs[..3].iter().all(|c| c.formula().is_some()));
        assert_eq!(cs[3].failure().unwrap().kind, FailureKind::Refusal);
    }

    #[test]
    fn prose_without_cue_is_no_formula() {
        let p = bundled_puzzle("ladies_or_tigers_trial_1").unwrap();
        let cs = extract_candidates("4. One sign is true and the other is false.", &p, TranslationMode::WholeText);
        assert_eq!(cs[3].failure().unwrap().kind, FailureKind::NoFormulaFound);
    }

    #[test]
    fn malformed_formula_is_parse_error() {
        let p = balls();
        let cs = extract_candidates("2. X1 OR OR Y1", &p, TranslationMode::WholeText);
        let f = cs[1].failure().unwrap();
        assert_eq!(f.kind, FailureKind::ParseError);
        assert!(f.parse_error.is_some());
    }

    #[test]
    fn positional_fallback_without_markers() {
        let p = bundled_puzzle("who_is_in_the_car").unwrap();
        let text = "Here are the encodings:\nD1 ∨ D2 ∨ D3\n¬D3\nP1 → P2";
        let cs = extract_candidates(text, &p, TranslationMode::WholeText);
        assert_eq!(formula(&cs[0]), &parse("D1 OR D2 OR D3", None).unwrap());
        assert_eq!(formula(&cs[2]), &parse("P1 -> P2", None).unwrap());
        assert_eq!(cs[3].failure().unwrap().kind, FailureKind::NoFormulaFound);
    }

    #[test]
    fn single_statement_response() {
        let p = bundled_puzzle("who_is_in_the_car").unwrap();
        let s = p.statement("4").unwrap();
        let text = "The driver must be in the car can be written as:\n4. (D1 → P1) ∧ (D2 → P2) ∧ (D3 → P3)";
        let c = extract_single(text, &p, s);
        assert_eq!(formula(&c), &s.gold);
        let c = extract_single("I cannot encode this statement.", &p, s);
        assert_eq!(c.failure().unwrap().kind, FailureKind::Refusal);
        let c = extract_single("", &p, s);
        assert_eq!(c.failure().unwrap().kind, FailureKind::NoFormulaFound);
    }
}
