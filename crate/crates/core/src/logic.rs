//! Propositional formulas, symbol vocabularies and truth assignments.
//!
//! Everything else in the crate speaks [`Formula`]: the parser produces it,
//! the SAT engine consumes it, and the evaluator compares candidate and gold
//! formulas through it.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LogicError {
    #[error("invalid symbol identifier {0:?}")]
    InvalidIdentifier(String),
    #[error("duplicate symbol {0:?}")]
    DuplicateSymbol(String),
    #[error("symbol {0:?} is not bound in the assignment")]
    UnboundSymbol(String),
    #[error("cardinality constraint over an empty atom list")]
    EmptyAtomList,
    #[error("atom {0:?} appears more than once")]
    DuplicateAtom(String),
    #[error("bound {k} is out of range for {n} atoms")]
    KOutOfRange { k: usize, n: usize },
}

pub type Result<T> = std::result::Result<T, LogicError>;

/// Returns true when `s` matches `[A-Za-z_][A-Za-z0-9_]*`.
pub fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Symbol {
    id: String,
    gloss: Option<String>,
}

impl Symbol {
    pub fn new(id: impl Into<String>, gloss: Option<String>) -> Result<Self> {
        let id = id.into();
        if !is_identifier(&id) {
            return Err(LogicError::InvalidIdentifier(id));
        }
        Ok(Symbol { id, gloss })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn gloss(&self) -> Option<&str> {
        self.gloss.as_deref()
    }
}

/// An ordered set of declared symbols. Declaration order is significant:
/// SAT variable numbering and every deterministic tie-break follow it.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    symbols: Vec<Symbol>,
}

impl Vocabulary {
    pub fn new(symbols: Vec<Symbol>) -> Result<Self> {
        let mut seen = HashSet::new();
        for s in &symbols {
            if !seen.insert(s.id.as_str()) {
                return Err(LogicError::DuplicateSymbol(s.id.clone()));
            }
        }
        Ok(Vocabulary { symbols })
    }

    /// Builds a vocabulary of bare ids with no glosses.
    pub fn from_ids<I, S>(ids: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let symbols = ids
            .into_iter()
            .map(|id| Symbol::new(id, None))
            .collect::<Result<Vec<_>>>()?;
        Vocabulary::new(symbols)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Symbol> {
        self.symbols.iter()
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.symbols.iter().map(|s| s.id.as_str())
    }

    pub fn contains(&self, id: &str) -> bool {
        self.symbols.iter().any(|s| s.id == id)
    }

    pub fn get(&self, id: &str) -> Option<&Symbol> {
        self.symbols.iter().find(|s| s.id == id)
    }

    pub fn position(&self, id: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s.id == id)
    }
}

/// Propositional formula. `And`/`Or` are n-ary and always carry at least two
/// operands when built through the helper constructors.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Atom(String),
    Const(bool),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Xor(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
}

impl Formula {
    pub fn atom(id: impl Into<String>) -> Formula {
        Formula::Atom(id.into())
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn xor(p: Formula, q: Formula) -> Formula {
        Formula::Xor(Box::new(p), Box::new(q))
    }

    pub fn implies(p: Formula, q: Formula) -> Formula {
        Formula::Implies(Box::new(p), Box::new(q))
    }

    pub fn iff(p: Formula, q: Formula) -> Formula {
        Formula::Iff(Box::new(p), Box::new(q))
    }

    /// Conjunction that collapses degenerate arities: `TRUE` for no operands
    /// and the operand itself for one.
    pub fn and_all(mut fs: Vec<Formula>) -> Formula {
        match fs.len() {
            0 => Formula::Const(true),
            1 => fs.pop().unwrap(),
            _ => Formula::And(fs),
        }
    }

    /// Disjunction counterpart of [`Formula::and_all`]; empty is `FALSE`.
    pub fn or_all(mut fs: Vec<Formula>) -> Formula {
        match fs.len() {
            0 => Formula::Const(false),
            1 => fs.pop().unwrap(),
            _ => Formula::Or(fs),
        }
    }

    pub fn eval(&self, a: &Assignment) -> Result<bool> {
        Ok(match self {
            Formula::Atom(id) => a
                .get(id)
                .ok_or_else(|| LogicError::UnboundSymbol(id.clone()))?,
            Formula::Const(b) => *b,
            Formula::Not(f) => !f.eval(a)?,
            Formula::And(fs) => {
                // evaluate every operand so unbound atoms are always reported
                let mut v = true;
                for f in fs {
                    v &= f.eval(a)?;
                }
                v
            }
            Formula::Or(fs) => {
                let mut v = false;
                for f in fs {
                    v |= f.eval(a)?;
                }
                v
            }
            Formula::Xor(p, q) => p.eval(a)? != q.eval(a)?,
            Formula::Implies(p, q) => {
                let (p, q) = (p.eval(a)?, q.eval(a)?);
                !p || q
            }
            Formula::Iff(p, q) => p.eval(a)? == q.eval(a)?,
        })
    }

    /// Atoms in first-occurrence order, without repeats.
    pub fn free_symbols(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut seen = HashSet::new();
        self.collect_symbols(&mut out, &mut seen);
        out
    }

    fn collect_symbols<'a>(&'a self, out: &mut Vec<String>, seen: &mut HashSet<&'a str>) {
        match self {
            Formula::Atom(id) => {
                if seen.insert(id.as_str()) {
                    out.push(id.clone());
                }
            }
            Formula::Const(_) => {}
            Formula::Not(f) => f.collect_symbols(out, seen),
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    f.collect_symbols(out, seen);
                }
            }
            Formula::Xor(p, q) | Formula::Implies(p, q) | Formula::Iff(p, q) => {
                p.collect_symbols(out, seen);
                q.collect_symbols(out, seen);
            }
        }
    }

    /// Atoms of the formula that `vocab` does not declare.
    pub fn undeclared_symbols(&self, vocab: &Vocabulary) -> Vec<String> {
        self.free_symbols()
            .into_iter()
            .filter(|s| !vocab.contains(s))
            .collect()
    }

    pub fn depth(&self) -> usize {
        match self {
            Formula::Atom(_) | Formula::Const(_) => 0,
            Formula::Not(f) => 1 + f.depth(),
            Formula::And(fs) | Formula::Or(fs) => 1 + fs.iter().map(Formula::depth).max().unwrap_or(0),
            Formula::Xor(p, q) | Formula::Implies(p, q) | Formula::Iff(p, q) => {
                1 + p.depth().max(q.depth())
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::print(self))
    }
}

/// Total truth assignment from symbol id to value.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: BTreeMap<String, bool>,
}

impl Assignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, id: impl Into<String>, value: bool) {
        self.values.insert(id.into(), value);
    }

    pub fn with(mut self, id: impl Into<String>, value: bool) -> Self {
        self.set(id, value);
        self
    }

    pub fn get(&self, id: &str) -> Option<bool> {
        self.values.get(id).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, bool)> {
        self.values.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// Ids assigned true, in lexicographic order.
    pub fn true_symbols(&self) -> Vec<&str> {
        self.iter().filter(|(_, v)| *v).map(|(k, _)| k).collect()
    }

    /// Every total assignment over `ids`, counting up in binary with the
    /// first id as the most significant bit. Intended for small oracles.
    pub fn all_over(ids: &[String]) -> impl Iterator<Item = Assignment> + '_ {
        assert!(ids.len() < 32, "truth tables over {} symbols are too large", ids.len());
        let n = ids.len();
        (0u32..(1u32 << n)).map(move |bits| {
            let mut a = Assignment::new();
            for (i, id) in ids.iter().enumerate() {
                a.set(id.clone(), bits & (1 << (n - 1 - i)) != 0);
            }
            a
        })
    }
}

impl<S: Into<String>> FromIterator<(S, bool)> for Assignment {
    fn from_iter<T: IntoIterator<Item = (S, bool)>>(iter: T) -> Self {
        let mut a = Assignment::new();
        for (k, v) in iter {
            a.set(k, v);
        }
        a
    }
}

fn check_distinct(atoms: &[&str]) -> Result<()> {
    let mut seen = HashSet::new();
    for a in atoms {
        if !seen.insert(*a) {
            return Err(LogicError::DuplicateAtom(a.to_string()));
        }
    }
    Ok(())
}

/// "Exactly one of them": a disjunction of the n cases where one atom holds
/// and every other atom is negated.
pub fn exactly_one(atoms: &[&str]) -> Result<Formula> {
    if atoms.is_empty() {
        return Err(LogicError::EmptyAtomList);
    }
    check_distinct(atoms)?;
    if atoms.len() == 1 {
        return Ok(Formula::atom(atoms[0]));
    }
    let cases = (0..atoms.len())
        .map(|i| {
            Formula::And(
                atoms
                    .iter()
                    .enumerate()
                    .map(|(j, a)| {
                        if i == j {
                            Formula::atom(*a)
                        } else {
                            Formula::not(Formula::atom(*a))
                        }
                    })
                    .collect(),
            )
        })
        .collect();
    Ok(Formula::Or(cases))
}

/// "At least k of them". `at_least(1, S)` is `Or(S)`; larger bounds are the
/// disjunction over k-subsets of their conjunction.
pub fn at_least(k: usize, atoms: &[&str]) -> Result<Formula> {
    check_distinct(atoms)?;
    if k > atoms.len() {
        return Err(LogicError::KOutOfRange { k, n: atoms.len() });
    }
    if k == 0 {
        return Ok(Formula::Const(true));
    }
    let cases = subsets(atoms.len(), k)
        .into_iter()
        .map(|idx| Formula::and_all(idx.into_iter().map(|i| Formula::atom(atoms[i])).collect()))
        .collect();
    Ok(Formula::or_all(cases))
}

/// "At most k of them": the conjunction, over every (k+1)-subset, of the
/// negated conjunction of that subset.
pub fn at_most(k: usize, atoms: &[&str]) -> Result<Formula> {
    check_distinct(atoms)?;
    if k > atoms.len() {
        return Err(LogicError::KOutOfRange { k, n: atoms.len() });
    }
    if k == atoms.len() {
        return Ok(Formula::Const(true));
    }
    let cases = subsets(atoms.len(), k + 1)
        .into_iter()
        .map(|idx| {
            Formula::not(Formula::and_all(
                idx.into_iter().map(|i| Formula::atom(atoms[i])).collect(),
            ))
        })
        .collect();
    Ok(Formula::and_all(cases))
}

/// k-element index subsets of 0..n in lexicographic order.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}
