use std::collections::HashSet;

use super::{Clause, CnfInstance, Literal, SatOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Reason {
    /// Forced by a unit clause, an assumption, or a pure-literal step
    /// outside enumeration.
    Implied,
    /// A branching choice whose other value has not been tried yet.
    Decision,
}

/// DPLL search with unit propagation and pure-literal elimination.
///
/// Branches on the unassigned variable with the most occurrences in
/// not-yet-satisfied clauses, lowest index first on ties, trying `true`
/// before `false`. Variables left unconstrained when every clause is
/// satisfied are set to false. Runs are fully deterministic.
///
/// Each clause keeps counts of its true and false literals, and each
/// variable counts its positive and negative occurrences in unsatisfied
/// clauses, so propagation and branching never rescan the clause list.
pub struct Solver {
    clauses: Vec<Clause>,
    num_vars: usize,
    values: Vec<Option<bool>>,
    trail: Vec<(u32, Reason)>,
    /// Clause indices per literal, at `2 * var + negated`.
    occurs: Vec<Vec<usize>>,
    n_true: Vec<usize>,
    n_false: Vec<usize>,
    pos: Vec<usize>,
    neg: Vec<usize>,
    unsatisfied: usize,
    /// Clauses that may have become unit or empty since the last check.
    pending: Vec<usize>,
    /// Pure literals become decisions so that enumeration stays complete.
    enumerating: bool,
}

fn slot(l: Literal) -> usize {
    2 * l.var() as usize + usize::from(!l.is_positive())
}

impl Solver {
    pub fn new(cnf: &CnfInstance) -> Self {
        Solver::from_clauses(cnf.clauses(), cnf.num_vars())
    }

    pub fn from_clauses(clauses: &[Clause], num_vars: usize) -> Self {
        let mut s = Solver {
            clauses: Vec::with_capacity(clauses.len()),
            num_vars,
            values: vec![None; num_vars + 1],
            trail: Vec::new(),
            occurs: vec![Vec::new(); 2 * num_vars + 2],
            n_true: Vec::new(),
            n_false: Vec::new(),
            pos: vec![0; num_vars + 1],
            neg: vec![0; num_vars + 1],
            unsatisfied: 0,
            pending: Vec::new(),
            enumerating: false,
        };
        for c in clauses {
            s.add_clause(c.clone());
        }
        s
    }

    /// Adds a clause, evaluated against the current partial assignment.
    fn add_clause(&mut self, c: Clause) {
        let idx = self.clauses.len();
        let (mut t, mut f) = (0, 0);
        for &l in c.literals() {
            assert!(
                (l.var() as usize) <= self.num_vars && l.var() >= 1,
                "literal {l} references a variable outside the instance"
            );
            self.occurs[slot(l)].push(idx);
            match self.value(l) {
                Some(true) => t += 1,
                Some(false) => f += 1,
                None => {}
            }
        }
        if t == 0 {
            self.unsatisfied += 1;
            for &l in c.literals() {
                self.count(l, 1);
            }
            if c.len() - f <= 1 {
                self.pending.push(idx);
            }
        }
        self.n_true.push(t);
        self.n_false.push(f);
        self.clauses.push(c);
    }

    fn count(&mut self, l: Literal, delta: isize) {
        let v = l.var() as usize;
        let c = if l.is_positive() { &mut self.pos[v] } else { &mut self.neg[v] };
        *c = c.checked_add_signed(delta).expect("occurrence count underflow");
    }

    /// Returns a full model indexed by variable (slot 0 unused), or `None`
    /// when the clauses together with `assumptions` are unsatisfiable.
    ///
    /// Panics if an assumption names a variable outside the instance.
    pub fn solve(mut self, assumptions: &[Literal]) -> Option<Vec<bool>> {
        if !self.assume(assumptions) || !self.search() {
            return None;
        }
        let model = self.model();
        debug_assert!(self.clauses.iter().all(|c| c.satisfied_by(&model)));
        Some(model)
    }

    /// Calls `on_model` with one full model per assignment to variables
    /// `1..=originals` that extends to a model, in search order, until it
    /// returns false.
    ///
    /// Each model found adds a blocking clause over those variables. The
    /// search decides every one of them before reporting a model, so a
    /// blocking clause can only be falsified at such a leaf; they are kept
    /// as a set of excluded assignments and checked there rather than
    /// joining propagation.
    pub fn for_each_model(mut self, originals: usize, mut on_model: impl FnMut(&[bool]) -> bool) {
        assert!(originals <= self.num_vars);
        self.enumerating = true;
        let mut blocked: HashSet<Vec<bool>> = HashSet::new();
        loop {
            if !self.search_from_here(originals) {
                return;
            }
            let model = self.model();
            if blocked.insert(model[1..=originals].to_vec()) && !on_model(&model) {
                return;
            }
            if !self.flip_last_decision() {
                return;
            }
        }
    }

    fn assume(&mut self, assumptions: &[Literal]) -> bool {
        for &l in assumptions {
            assert!(
                (l.var() as usize) <= self.num_vars && l.var() >= 1,
                "assumption {l} references a variable outside the instance"
            );
            match self.value(l) {
                Some(true) => {}
                Some(false) => return false,
                None => self.assign(l, Reason::Implied),
            }
        }
        true
    }

    fn model(&self) -> Vec<bool> {
        self.values.iter().map(|v| v.unwrap_or(false)).collect()
    }

    fn value(&self, l: Literal) -> Option<bool> {
        self.values[l.var() as usize].map(|v| v == l.is_positive())
    }

    fn assign(&mut self, l: Literal, reason: Reason) {
        self.values[l.var() as usize] = Some(l.is_positive());
        self.trail.push((l.var(), reason));
        for k in 0..self.occurs[slot(l)].len() {
            let c = self.occurs[slot(l)][k];
            self.n_true[c] += 1;
            if self.n_true[c] == 1 {
                self.unsatisfied -= 1;
                for j in 0..self.clauses[c].len() {
                    let m = self.clauses[c].literals()[j];
                    self.count(m, -1);
                }
            }
        }
        for k in 0..self.occurs[slot(!l)].len() {
            let c = self.occurs[slot(!l)][k];
            self.n_false[c] += 1;
            if self.n_true[c] == 0 && self.clauses[c].len() - self.n_false[c] <= 1 {
                self.pending.push(c);
            }
        }
    }

    fn unassign(&mut self, v: u32) {
        let l = Literal::new(v, self.values[v as usize].expect("assigned"));
        for k in 0..self.occurs[slot(l)].len() {
            let c = self.occurs[slot(l)][k];
            self.n_true[c] -= 1;
            if self.n_true[c] == 0 {
                self.unsatisfied += 1;
                for j in 0..self.clauses[c].len() {
                    let m = self.clauses[c].literals()[j];
                    self.count(m, 1);
                }
            }
        }
        for k in 0..self.occurs[slot(!l)].len() {
            let c = self.occurs[slot(!l)][k];
            self.n_false[c] -= 1;
        }
        self.values[v as usize] = None;
    }

    /// Undoes assignments back to the most recent untried decision and
    /// takes its other value. False when no decision is left.
    fn flip_last_decision(&mut self) -> bool {
        while let Some((v, reason)) = self.trail.pop() {
            let was = self.values[v as usize].expect("trail holds assigned variables");
            self.unassign(v);
            if reason == Reason::Decision {
                self.assign(Literal::new(v, !was), Reason::Implied);
                return true;
            }
        }
        false
    }

    /// Unit propagation to fixpoint, then one round of pure literals,
    /// repeated until neither applies. Returns false on conflict.
    fn propagate(&mut self) -> bool {
        loop {
            while let Some(c) = self.pending.pop() {
                if self.n_true[c] > 0 {
                    continue;
                }
                let open = self.clauses[c].len() - self.n_false[c];
                if open == 0 {
                    self.pending.clear();
                    return false;
                }
                if open == 1 {
                    let l = *self.clauses[c]
                        .literals()
                        .iter()
                        .find(|&&l| self.value(l).is_none())
                        .expect("one literal is unassigned");
                    self.assign(l, Reason::Implied);
                }
            }
            let pure: Vec<Literal> = (1..=self.num_vars)
                .filter(|&v| self.values[v].is_none())
                .filter_map(|v| match (self.pos[v] > 0, self.neg[v] > 0) {
                    (true, false) => Some(Literal::pos(v as u32)),
                    (false, true) => Some(Literal::neg(v as u32)),
                    _ => None,
                })
                .collect();
            if pure.is_empty() {
                return true;
            }
            let reason = if self.enumerating { Reason::Decision } else { Reason::Implied };
            for l in pure {
                self.assign(l, reason);
            }
        }
    }

    fn pick_branch(&self) -> Option<u32> {
        if self.unsatisfied == 0 {
            return None;
        }
        let mut best: Option<(u32, usize)> = None;
        for v in 1..=self.num_vars {
            if self.values[v].is_some() {
                continue;
            }
            let n = self.pos[v] + self.neg[v];
            if n > 0 && best.is_none_or(|(_, m)| n > m) {
                best = Some((v as u32, n));
            }
        }
        best.map(|(v, _)| v)
    }

    /// Chronological DPLL from the current state; true when every clause
    /// is satisfied.
    fn search(&mut self) -> bool {
        loop {
            if !self.propagate() {
                if !self.flip_last_decision() {
                    return false;
                }
                continue;
            }
            match self.pick_branch() {
                None => return true,
                Some(v) => self.assign(Literal::pos(v), Reason::Decision),
            }
        }
    }

    /// Like [`Solver::search`], but also assigns every variable in
    /// `1..=originals`, false first, so that each model found is total
    /// over them.
    fn search_from_here(&mut self, originals: usize) -> bool {
        loop {
            if !self.search() {
                return false;
            }
            match (1..=originals).find(|&v| self.values[v].is_none()) {
                None => return true,
                Some(v) => self.assign(Literal::neg(v as u32), Reason::Decision),
            }
        }
    }
}

/// Decides `cnf` under `assumptions`; a satisfying result carries the
/// model restricted to the original symbols.
pub fn solve(cnf: &CnfInstance, assumptions: &[Literal]) -> SatOutcome {
    match Solver::new(cnf).solve(assumptions) {
        Some(model) => SatOutcome::Sat(cnf.project(&model)),
        None => SatOutcome::Unsat,
    }
}
