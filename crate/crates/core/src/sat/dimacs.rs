use std::fmt::Write;

use thiserror::Error;

use super::{Clause, CnfInstance, Literal};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DimacsError {
    #[error("line {line}: {detail}")]
    Malformed { line: usize, detail: String },
    #[error("missing `p cnf` header")]
    MissingHeader,
    #[error("header declares {declared} clauses but {found} were read")]
    ClauseCount { declared: usize, found: usize },
}

/// A DIMACS problem read back from text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimacsInstance {
    pub num_vars: usize,
    pub clauses: Vec<Clause>,
}

/// Renders `cnf` as DIMACS CNF. Comment lines name each original variable
/// so a verdict from an external solver can be mapped back.
pub fn write_dimacs(cnf: &CnfInstance, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "c {line}");
        }
    }
    for (i, id) in cnf.originals().iter().enumerate() {
        let _ = writeln!(out, "c var {} = {}", i + 1, id);
    }
    let _ = writeln!(out, "p cnf {} {}", cnf.num_vars(), cnf.clauses().len());
    for clause in cnf.clauses() {
        for l in clause.literals() {
            let _ = write!(out, "{} ", l.to_dimacs());
        }
        out.push_str("0\n");
    }
    out
}

pub fn parse_dimacs(text: &str) -> Result<DimacsInstance, DimacsError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        let malformed = |detail: String| DimacsError::Malformed { line: n + 1, detail };
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            if parts.len() != 4 || parts[1] != "cnf" {
                return Err(malformed(format!("bad header {line:?}")));
            }
            let v = parts[2].parse().map_err(|_| malformed("bad variable count".into()))?;
            let c = parts[3].parse().map_err(|_| malformed("bad clause count".into()))?;
            header = Some((v, c));
            continue;
        }
        let (num_vars, _) = header.ok_or(DimacsError::MissingHeader)?;
        for tok in line.split_whitespace() {
            let lit: i64 = tok
                .parse()
                .map_err(|_| malformed(format!("bad literal {tok:?}")))?;
            if lit == 0 {
                clauses.push(Clause::new(std::mem::take(&mut current)));
                continue;
            }
            let var = lit.unsigned_abs() as usize;
            if var > num_vars {
                return Err(malformed(format!("variable {var} exceeds header count {num_vars}")));
            }
            current.push(Literal::new(var as u32, lit > 0));
        }
    }
    let (num_vars, declared) = header.ok_or(DimacsError::MissingHeader)?;
    if !current.is_empty() {
        clauses.push(Clause::new(current));
    }
    if clauses.len() != declared {
        return Err(DimacsError::ClauseCount {
            declared,
            found: clauses.len(),
        });
    }
    Ok(DimacsInstance { num_vars, clauses })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Formula;
    use crate::sat::{to_cnf, Solver};

    #[test]
    fn header_matches_body() {
        let f = Formula::implies(Formula::atom("P1"), Formula::atom("P2"));
        let cnf = to_cnf(&f);
        let text = write_dimacs(&cnf, &["implication".into()]);
        assert!(text.starts_with("c implication\nc var 1 = P1\nc var 2 = P2\n"));
        let header = text.lines().find(|l| l.starts_with("p cnf")).unwrap();
        let body = text.lines().filter(|l| !l.starts_with('c') && !l.starts_with('p')).count();
        assert_eq!(header, format!("p cnf {} {}", cnf.num_vars(), body));
        assert!(text.lines().filter(|l| !l.starts_with(['c', 'p'])).all(|l| l.ends_with(" 0") || l == "0"));

        let back = parse_dimacs(&text).unwrap();
        assert_eq!(back.num_vars, cnf.num_vars());
        assert_eq!(back.clauses, cnf.clauses());
        assert_eq!(
            Solver::from_clauses(&back.clauses, back.num_vars).solve(&[]).is_some(),
            Solver::new(&cnf).solve(&[]).is_some()
        );
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(parse_dimacs("1 2 0\n"), Err(DimacsError::MissingHeader));
        assert!(matches!(
            parse_dimacs("p cnf 1 1\n2 0\n"),
            Err(DimacsError::Malformed { line: 2, .. })
        ));
        assert_eq!(
            parse_dimacs("p cnf 2 2\n1 2 0\n"),
            Err(DimacsError::ClauseCount { declared: 2, found: 1 })
        );
    }
}
