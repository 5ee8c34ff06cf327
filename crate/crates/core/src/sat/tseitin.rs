use std::collections::HashSet;

use super::{Clause, CnfInstance, Literal, SatError};
use crate::logic::Formula;

struct Encoder<'a> {
    originals: &'a [String],
    next_var: u32,
    clauses: Vec<Clause>,
    truth: Option<Literal>,
}

impl Encoder<'_> {
    fn fresh(&mut self) -> Literal {
        let v = self.next_var;
        self.next_var += 1;
        Literal::pos(v)
    }

    fn emit(&mut self, lits: Vec<Literal>) {
        let c = Clause::new(lits);
        if !c.is_tautology() {
            self.clauses.push(c);
        }
    }

    fn truth(&mut self) -> Literal {
        if let Some(t) = self.truth {
            return t;
        }
        let t = self.fresh();
        self.emit(vec![t]);
        self.truth = Some(t);
        t
    }

    fn encode(&mut self, f: &Formula) -> Result<Literal, SatError> {
        Ok(match f {
            Formula::Atom(id) => {
                let i = self
                    .originals
                    .iter()
                    .position(|s| s == id)
                    .ok_or_else(|| SatError::UnknownSymbol(id.clone()))?;
                Literal::pos(i as u32 + 1)
            }
            Formula::Const(b) => {
                let t = self.truth();
                if *b {
                    t
                } else {
                    !t
                }
            }
            Formula::Not(g) => !self.encode(g)?,
            Formula::And(gs) => {
                let lits = gs.iter().map(|g| self.encode(g)).collect::<Result<Vec<_>, _>>()?;
                let a = self.fresh();
                for &l in &lits {
                    self.emit(vec![!a, l]);
                }
                let mut big = vec![a];
                big.extend(lits.iter().map(|&l| !l));
                self.emit(big);
                a
            }
            Formula::Or(gs) => {
                let lits = gs.iter().map(|g| self.encode(g)).collect::<Result<Vec<_>, _>>()?;
                let a = self.fresh();
                for &l in &lits {
                    self.emit(vec![a, !l]);
                }
                let mut big = vec![!a];
                big.extend(lits.iter().copied());
                self.emit(big);
                a
            }
            Formula::Xor(p, q) => {
                let (p, q) = (self.encode(p)?, self.encode(q)?);
                let a = self.fresh();
                self.emit(vec![!a, p, q]);
                self.emit(vec![!a, !p, !q]);
                self.emit(vec![a, !p, q]);
                self.emit(vec![a, p, !q]);
                a
            }
            Formula::Implies(p, q) => {
                let (p, q) = (self.encode(p)?, self.encode(q)?);
                let a = self.fresh();
                self.emit(vec![!a, !p, q]);
                self.emit(vec![a, p]);
                self.emit(vec![a, !q]);
                a
            }
            Formula::Iff(p, q) => {
                let (p, q) = (self.encode(p)?, self.encode(q)?);
                let a = self.fresh();
                self.emit(vec![!a, !p, q]);
                self.emit(vec![!a, p, !q]);
                self.emit(vec![a, p, q]);
                self.emit(vec![a, !p, !q]);
                a
            }
        })
    }
}

/// Tseitin CNF over the formula's own free symbols, numbered in
/// first-occurrence order.
pub fn to_cnf(f: &Formula) -> CnfInstance {
    to_cnf_over(f, &f.free_symbols()).expect("free symbols cover the formula")
}

/// Tseitin CNF whose original variables are exactly `originals`, in order.
/// Symbols listed but absent from `f` are unconstrained.
///
/// Every auxiliary is tied to its subformula by a full biconditional, so
/// the models of the CNF projected onto the originals are exactly the
/// models of `f`.
pub fn to_cnf_over(f: &Formula, originals: &[String]) -> Result<CnfInstance, SatError> {
    let mut seen = HashSet::new();
    for s in originals {
        if !seen.insert(s.as_str()) {
            return Err(SatError::DuplicateSymbol(s.clone()));
        }
    }
    let mut enc = Encoder {
        originals,
        next_var: originals.len() as u32 + 1,
        clauses: Vec::new(),
        truth: None,
    };
    let root = enc.encode(f)?;
    enc.emit(vec![root]);
    let aux_count = enc.next_var as usize - 1 - originals.len();
    Ok(CnfInstance {
        clauses: enc.clauses,
        originals: originals.to_vec(),
        aux_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::{Assignment, Formula};
    use crate::sat::{enumerate_models, solve, SatOutcome};

    fn a(id: &str) -> Formula {
        Formula::atom(id)
    }

    #[test]
    fn variable_layout() {
        let f = Formula::And(vec![a("q"), Formula::not(a("p")), a("q")]);
        let c = to_cnf(&f);
        assert_eq!(c.originals(), ["q".to_string(), "p".to_string()]);
        assert_eq!(c.var_of("p"), Some(2));
        assert_eq!(c.symbol_of(1), Some("q"));
        assert_eq!(c.aux_count(), 1);
        for cl in c.clauses() {
            for l in cl.literals() {
                assert!(l.var() as usize <= c.num_vars());
            }
            let mut sorted = cl.literals().to_vec();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), cl.len());
        }
    }

    #[test]
    fn contradiction_is_unsat() {
        let f = Formula::And(vec![a("p"), Formula::not(a("p"))]);
        assert_eq!(solve(&to_cnf(&f), &[]), SatOutcome::Unsat);
    }

    #[test]
    fn biconditional_projection() {
        let f = Formula::iff(a("p"), a("q"));
        let vocab = crate::logic::Vocabulary::from_ids(["p", "q"]).unwrap();
        let got = enumerate_models(&f, &vocab, 10).unwrap();
        let mut models = got.models.clone();
        models.sort_by_key(|m| m.true_symbols().len());
        assert_eq!(
            models,
            vec![
                Assignment::new().with("p", false).with("q", false),
                Assignment::new().with("p", true).with("q", true),
            ]
        );
    }

    #[test]
    fn constants() {
        assert!(solve(&to_cnf(&Formula::Const(true)), &[]).is_sat());
        assert!(!solve(&to_cnf(&Formula::Const(false)), &[]).is_sat());
    }

    #[test]
    fn unknown_original() {
        assert_eq!(
            to_cnf_over(&a("z"), &["p".into()]),
            Err(SatError::UnknownSymbol("z".into()))
        );
        assert_eq!(
            to_cnf_over(&a("p"), &["p".into(), "p".into()]),
            Err(SatError::DuplicateSymbol("p".into()))
        );
    }
}
