//! Text syntax for formulas.
//!
//! Accepts both the keyword style (`X1 AND Y2 -> Z3`) and the Unicode glyph
//! style (`¬Z1 ∨ ¬Z2`). Binding strength, tightest first: NOT, AND, OR, XOR,
//! `->` (right-associative), `<->` (left-associative). The full grammar is in
//! `docs/grammar.md`.

use std::fmt;

use thiserror::Error;

use crate::logic::{Formula, Vocabulary};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ParseErrorKind {
    Syntax,
    UnknownSymbol,
    Empty,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ParseErrorKind::Syntax => "syntax error",
            ParseErrorKind::UnknownSymbol => "unknown symbol",
            ParseErrorKind::Empty => "empty formula",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error, serde::Serialize, serde::Deserialize)]
#[error("{kind} at {position}: {detail}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// Offset in characters (not bytes) into the input.
    pub position: usize,
    pub detail: String,
    pub offending: Option<String>,
}

impl ParseError {
    fn syntax(position: usize, detail: impl Into<String>, offending: Option<String>) -> Self {
        ParseError {
            kind: ParseErrorKind::Syntax,
            position,
            detail: detail.into(),
            offending,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Const(bool),
    Not,
    And,
    Or,
    Xor,
    Implies,
    Iff,
    LParen,
    RParen,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => s.clone(),
            Tok::Const(true) => "TRUE".into(),
            Tok::Const(false) => "FALSE".into(),
            Tok::Not => "NOT".into(),
            Tok::And => "AND".into(),
            Tok::Or => "OR".into(),
            Tok::Xor => "XOR".into(),
            Tok::Implies => "->".into(),
            Tok::Iff => "<->".into(),
            Tok::LParen => "(".into(),
            Tok::RParen => ")".into(),
        }
    }
}

#[derive(Debug, Clone)]
struct Spanned {
    tok: Tok,
    pos: usize,
    text: String,
}

fn keyword(word: &str) -> Option<Tok> {
    let upper = word.to_ascii_uppercase();
    // keywords are recognised in all-upper, all-lower or capitalised form
    let plausible = word == upper
        || word == word.to_ascii_lowercase()
        || word[1..] == word[1..].to_ascii_lowercase();
    if !plausible {
        return None;
    }
    Some(match upper.as_str() {
        "NOT" => Tok::Not,
        "AND" => Tok::And,
        "OR" => Tok::Or,
        "XOR" => Tok::Xor,
        "IMPLIES" => Tok::Implies,
        "IFF" => Tok::Iff,
        "TRUE" => Tok::Const(true),
        "FALSE" => Tok::Const(false),
        _ => return None,
    })
}

fn lex(text: &str) -> Result<Vec<Spanned>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let rest = |n: usize| chars[i..(i + n).min(chars.len())].iter().collect::<String>();
        let (tok, len) = if c.is_ascii_alphabetic() || c == '_' {
            let mut j = i;
            while j < chars.len() && (chars[j].is_ascii_alphanumeric() || chars[j] == '_') {
                j += 1;
            }
            let word: String = chars[i..j].iter().collect();
            let tok = keyword(&word).unwrap_or(Tok::Ident(word));
            (tok, j - i)
        } else if rest(3) == "<->" || rest(3) == "<=>" {
            (Tok::Iff, 3)
        } else if rest(2) == "->" || rest(2) == "=>" {
            (Tok::Implies, 2)
        } else if rest(2) == "&&" {
            (Tok::And, 2)
        } else if rest(2) == "||" {
            (Tok::Or, 2)
        } else {
            let tok = match c {
                '(' => Tok::LParen,
                ')' => Tok::RParen,
                '!' | '¬' | '~' => Tok::Not,
                '&' | '∧' => Tok::And,
                '|' | '∨' => Tok::Or,
                '^' | '⊕' => Tok::Xor,
                '→' | '⇒' => Tok::Implies,
                '↔' | '⇔' => Tok::Iff,
                '⊤' => Tok::Const(true),
                '⊥' => Tok::Const(false),
                _ => {
                    return Err(ParseError::syntax(
                        start,
                        format!("unexpected character {c:?}"),
                        Some(c.to_string()),
                    ))
                }
            };
            (tok, 1)
        };
        out.push(Spanned {
            tok,
            pos: start,
            text: chars[start..start + len].iter().collect(),
        });
        i += len;
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Spanned>,
    idx: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.idx).map(|s| &s.tok)
    }

    fn eat(&mut self, tok: &Tok) -> bool {
        if self.peek() == Some(tok) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    fn error_here(&self, expected: &str) -> ParseError {
        match self.toks.get(self.idx) {
            Some(s) => ParseError::syntax(
                s.pos,
                format!("expected {expected}, found {}", s.tok.describe()),
                Some(s.text.clone()),
            ),
            None => ParseError::syntax(self.end, format!("expected {expected}, found end of input"), None),
        }
    }

    fn iff(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.implies()?;
        while self.eat(&Tok::Iff) {
            let rhs = self.implies()?;
            lhs = Formula::iff(lhs, rhs);
        }
        Ok(lhs)
    }

    fn implies(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.xor()?;
        if self.eat(&Tok::Implies) {
            let rhs = self.implies()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn xor(&mut self) -> Result<Formula, ParseError> {
        let mut lhs = self.or()?;
        while self.eat(&Tok::Xor) {
            let rhs = self.or()?;
            lhs = Formula::xor(lhs, rhs);
        }
        Ok(lhs)
    }

    fn or(&mut self) -> Result<Formula, ParseError> {
        let mut items = vec![self.and()?];
        while self.eat(&Tok::Or) {
            items.push(self.and()?);
        }
        Ok(Formula::or_all(items))
    }

    fn and(&mut self) -> Result<Formula, ParseError> {
        let mut items = vec![self.unary()?];
        while self.eat(&Tok::And) {
            items.push(self.unary()?);
        }
        Ok(Formula::and_all(items))
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        if self.eat(&Tok::Not) {
            return Ok(Formula::not(self.unary()?));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<Formula, ParseError> {
        let Some(s) = self.toks.get(self.idx).cloned() else {
            return Err(self.error_here("a formula"));
        };
        match s.tok {
            Tok::Ident(id) => {
                self.idx += 1;
                Ok(Formula::Atom(id))
            }
            Tok::Const(b) => {
                self.idx += 1;
                Ok(Formula::Const(b))
            }
            Tok::LParen => {
                self.idx += 1;
                let inner = self.iff()?;
                if !self.eat(&Tok::RParen) {
                    return Err(self.error_here("')'"));
                }
                Ok(inner)
            }
            _ => Err(self.error_here("a formula")),
        }
    }
}

/// Parses `text`; when `vocab` is given every atom must be declared in it.
pub fn parse(text: &str, vocab: Option<&Vocabulary>) -> Result<Formula, ParseError> {
    if text.trim().is_empty() {
        return Err(ParseError {
            kind: ParseErrorKind::Empty,
            position: 0,
            detail: "no formula text".into(),
            offending: None,
        });
    }
    let toks = lex(text)?;
    let mut p = Parser {
        toks,
        idx: 0,
        end: text.chars().count(),
    };
    let f = p.iff()?;
    if p.idx < p.toks.len() {
        return Err(p.error_here("end of input"));
    }
    if let Some(vocab) = vocab {
        for s in &p.toks {
            if let Tok::Ident(id) = &s.tok {
                if !vocab.contains(id) {
                    return Err(ParseError {
                        kind: ParseErrorKind::UnknownSymbol,
                        position: s.pos,
                        detail: format!("symbol {id:?} is not declared"),
                        offending: Some(id.clone()),
                    });
                }
            }
        }
    }
    Ok(f)
}

fn level(f: &Formula) -> u8 {
    match f {
        Formula::Iff(..) => 1,
        Formula::Implies(..) => 2,
        Formula::Xor(..) => 3,
        Formula::Or(_) => 4,
        Formula::And(_) => 5,
        Formula::Not(_) => 6,
        Formula::Atom(_) | Formula::Const(_) => 7,
    }
}

fn write_at(out: &mut String, f: &Formula, min_level: u8) {
    if level(f) < min_level {
        out.push('(');
        write_formula(out, f);
        out.push(')');
    } else {
        write_formula(out, f);
    }
}

fn write_formula(out: &mut String, f: &Formula) {
    let join = |out: &mut String, fs: &[Formula], op: &str, min: u8| {
        for (i, g) in fs.iter().enumerate() {
            if i > 0 {
                out.push_str(op);
            }
            write_at(out, g, min);
        }
    };
    match f {
        Formula::Atom(id) => out.push_str(id),
        Formula::Const(true) => out.push_str("TRUE"),
        Formula::Const(false) => out.push_str("FALSE"),
        Formula::Not(g) => {
            out.push_str("NOT ");
            write_at(out, g, 6);
        }
        Formula::And(fs) => join(out, fs, " AND ", 6),
        Formula::Or(fs) => join(out, fs, " OR ", 5),
        Formula::Xor(p, q) => {
            write_at(out, p, 3);
            out.push_str(" XOR ");
            write_at(out, q, 4);
        }
        Formula::Implies(p, q) => {
            write_at(out, p, 3);
            out.push_str(" -> ");
            write_at(out, q, 2);
        }
        Formula::Iff(p, q) => {
            write_at(out, p, 1);
            out.push_str(" <-> ");
            write_at(out, q, 2);
        }
    }
}

/// Renders in ASCII keyword style with the fewest parentheses that still
/// parse back to the same tree.
pub fn print(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn a(id: &str) -> Formula {
        Formula::atom(id)
    }

    fn p(s: &str) -> Formula {
        parse(s, None).unwrap()
    }

    #[test]
    fn ball_statement_three() {
        assert_eq!(
            p("(X1 AND Z3) OR (X3 AND Z1)"),
            Formula::Or(vec![
                Formula::And(vec![a("X1"), a("Z3")]),
                Formula::And(vec![a("X3"), a("Z1")]),
            ])
        );
    }

    #[test]
    fn negated_antecedent() {
        assert_eq!(
            p("NOT X2 -> X1"),
            Formula::implies(Formula::not(a("X2")), a("X1"))
        );
    }

    #[test]
    fn and_binds_tighter_than_xor() {
        assert_eq!(
            p("(X1 XOR X2) XOR X3 AND NOT (X1 AND X2)"),
            Formula::xor(
                Formula::xor(a("X1"), a("X2")),
                Formula::And(vec![
                    a("X3"),
                    Formula::not(Formula::And(vec![a("X1"), a("X2")]))
                ])
            )
        );
    }

    #[test]
    fn syntax_errors() {
        let e = parse("X1 AND AND", None).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Syntax);
        assert_eq!(e.position, 7);
        assert_eq!(e.offending.as_deref(), Some("AND"));

        let e = parse("(X1 OR X2", None).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Syntax);
        assert_eq!(e.position, 9);

        let e = parse("X1 X2", None).unwrap_err();
        assert_eq!(e.position, 3);

        let e = parse("X1 ∧ Y1 ?", None).unwrap_err();
        assert_eq!(e.position, 8);
        assert_eq!(parse("  \n", None).unwrap_err().kind, ParseErrorKind::Empty);
    }

    #[test]
    fn aliases_parse_identically() {
        let want = p("NOT a AND b OR c XOR d -> e <-> f");
        for s in [
            "¬a ∧ b ∨ c ⊕ d → e ↔ f",
            "!a & b | c ^ d IMPLIES e IFF f",
            "~a && b || c ^ d -> e <-> f",
            "not a and b or c xor d implies e iff f",
        ] {
            assert_eq!(p(s), want, "{s}");
        }
        assert_eq!(p("TRUE AND false"), Formula::And(vec![Formula::Const(true), Formula::Const(false)]));
    }

    #[test]
    fn precedence_and_associativity() {
        assert_eq!(p("a -> b -> c"), Formula::implies(a("a"), Formula::implies(a("b"), a("c"))));
        assert_eq!(p("a <-> b <-> c"), Formula::iff(Formula::iff(a("a"), a("b")), a("c")));
        assert_eq!(p("a XOR b XOR c"), Formula::xor(Formula::xor(a("a"), a("b")), a("c")));
        assert_eq!(p("a OR b XOR c"), Formula::xor(Formula::Or(vec![a("a"), a("b")]), a("c")));
        assert_eq!(p("a -> b <-> c"), Formula::iff(Formula::implies(a("a"), a("b")), a("c")));
        assert_eq!(p("X1 → Y1 AND Z1"), Formula::implies(a("X1"), Formula::And(vec![a("Y1"), a("Z1")])));
    }

    #[test]
    fn newlines_inside_parentheses() {
        assert_eq!(p("(X1 AND\n   Z3)\n OR X3"), p("(X1 AND Z3) OR X3"));
    }

    #[test]
    fn vocabulary_validation() {
        let v = Vocabulary::from_ids(["X1", "Y1"]).unwrap();
        assert!(parse("X1 OR Y1", Some(&v)).is_ok());
        let e = parse("X1 OR W1", Some(&v)).unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownSymbol);
        assert_eq!(e.position, 6);
        assert_eq!(e.offending.as_deref(), Some("W1"));
    }

    #[test]
    fn print_examples() {
        assert_eq!(print(&Formula::implies(a("P1"), a("P2"))), "P1 -> P2");
        assert_eq!(
            print(&Formula::not(Formula::And(vec![a("Z1"), a("Z2"), a("Z3")]))),
            "NOT (Z1 AND Z2 AND Z3)"
        );
        let nested = Formula::And(vec![Formula::And(vec![a("a"), a("b")]), a("c")]);
        assert_eq!(print(&nested), "(a AND b) AND c");
        assert_eq!(p(&print(&nested)), nested);
        let right_xor = Formula::xor(a("a"), Formula::xor(a("b"), a("c")));
        assert_eq!(print(&right_xor), "a XOR (b XOR c)");
        let left_imp = Formula::implies(Formula::implies(a("a"), a("b")), a("c"));
        assert_eq!(print(&left_imp), "(a -> b) -> c");
    }
}
