//! CNF conversion and satisfiability.
//!
//! [`to_cnf`] applies the definitional Tseitin transformation, [`solve`] runs
//! a DPLL search and [`enumerate_models`] lists models projected onto a
//! vocabulary by adding blocking clauses over the original variables.

mod dimacs;
mod dpll;
mod enumerate;
mod tseitin;

use std::fmt;

use thiserror::Error;

use crate::logic::Assignment;

pub use dimacs::{parse_dimacs, write_dimacs, DimacsError, DimacsInstance};
pub use dpll::{solve, Solver};
pub use enumerate::{enumerate_models, ModelSet};
pub use tseitin::{to_cnf, to_cnf_over};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatError {
    #[error("symbol {0:?} is not among the original variables")]
    UnknownSymbol(String),
    #[error("duplicate original symbol {0:?}")]
    DuplicateSymbol(String),
    #[error("model limit must be at least 1")]
    ZeroLimit,
}

/// A variable index (1-based) with a polarity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    var: u32,
    positive: bool,
}

impl Literal {
    pub fn new(var: u32, positive: bool) -> Self {
        assert!(var >= 1, "variable indices start at 1");
        Literal { var, positive }
    }

    pub fn pos(var: u32) -> Self {
        Literal::new(var, true)
    }

    pub fn neg(var: u32) -> Self {
        Literal::new(var, false)
    }

    pub fn var(self) -> u32 {
        self.var
    }

    pub fn is_positive(self) -> bool {
        self.positive
    }

    pub fn to_dimacs(self) -> i64 {
        if self.positive {
            self.var as i64
        } else {
            -(self.var as i64)
        }
    }
}

impl std::ops::Not for Literal {
    type Output = Literal;
    fn not(self) -> Literal {
        Literal {
            var: self.var,
            positive: !self.positive,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

/// Disjunction of distinct literals; the empty clause is falsum.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Clause(Vec<Literal>);

impl Clause {
    /// Drops repeated literals, keeping first occurrences.
    pub fn new(lits: Vec<Literal>) -> Self {
        let mut out: Vec<Literal> = Vec::with_capacity(lits.len());
        for l in lits {
            if !out.contains(&l) {
                out.push(l);
            }
        }
        Clause(out)
    }

    pub fn literals(&self) -> &[Literal] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_tautology(&self) -> bool {
        self.0.iter().any(|l| self.0.contains(&!*l))
    }

    /// `model[v]` is the value of variable `v`; index 0 is unused.
    pub fn satisfied_by(&self, model: &[bool]) -> bool {
        self.0
            .iter()
            .any(|l| model.get(l.var as usize).copied() == Some(l.positive))
    }
}

/// Clauses plus the mapping from original symbols to variables
/// `1..=originals.len()`; Tseitin auxiliaries follow them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CnfInstance {
    clauses: Vec<Clause>,
    originals: Vec<String>,
    aux_count: usize,
}

impl CnfInstance {
    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn originals(&self) -> &[String] {
        &self.originals
    }

    pub fn aux_count(&self) -> usize {
        self.aux_count
    }

    pub fn num_vars(&self) -> usize {
        self.originals.len() + self.aux_count
    }

    pub fn var_of(&self, id: &str) -> Option<u32> {
        self.originals
            .iter()
            .position(|s| s == id)
            .map(|i| i as u32 + 1)
    }

    pub fn symbol_of(&self, var: u32) -> Option<&str> {
        self.originals.get((var as usize).checked_sub(1)?).map(String::as_str)
    }

    pub fn add_clause(&mut self, clause: Clause) {
        debug_assert!(clause
            .literals()
            .iter()
            .all(|l| (l.var() as usize) <= self.num_vars()));
        self.clauses.push(clause);
    }

    /// True when `model` (indexed by variable, slot 0 unused) satisfies
    /// every clause.
    pub fn satisfied_by(&self, model: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.satisfied_by(model))
    }

    /// Restricts a full model to the original symbols.
    pub fn project(&self, model: &[bool]) -> Assignment {
        self.originals
            .iter()
            .enumerate()
            .map(|(i, id)| (id.clone(), model[i + 1]))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SatOutcome {
    Sat(Assignment),
    Unsat,
}

impl SatOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SatOutcome::Sat(_))
    }

    pub fn model(&self) -> Option<&Assignment> {
        match self {
            SatOutcome::Sat(m) => Some(m),
            SatOutcome::Unsat => None,
        }
    }
}

/// Shorthand for `solve(&to_cnf(f), &[]).is_sat()`.
pub fn is_satisfiable(f: &crate::logic::Formula) -> bool {
    solve(&to_cnf(f), &[]).is_sat()
}
