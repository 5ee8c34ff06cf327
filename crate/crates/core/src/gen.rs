//! Seeded random formula generation for property tests and benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::logic::Formula;

/// Produces formulas over `x0..x{num_vars-1}` up to a maximum depth. The
/// same seed always yields the same sequence.
pub struct FormulaGenerator {
    rng: ChaCha8Rng,
    num_vars: usize,
    max_depth: usize,
}

impl FormulaGenerator {
    pub fn new(seed: u64, num_vars: usize, max_depth: usize) -> Self {
        assert!(num_vars >= 1);
        FormulaGenerator {
            rng: ChaCha8Rng::seed_from_u64(seed),
            num_vars,
            max_depth,
        }
    }

    pub fn var_name(i: usize) -> String {
        format!("x{i}")
    }

    pub fn next_formula(&mut self) -> Formula {
        let depth = self.max_depth;
        self.gen(depth)
    }

    fn gen(&mut self, depth: usize) -> Formula {
        if depth == 0 || self.rng.random_bool(0.25) {
            return if self.rng.random_bool(0.04) {
                Formula::Const(self.rng.random_bool(0.5))
            } else {
                Formula::Atom(Self::var_name(self.rng.random_range(0..self.num_vars)))
            };
        }
        let d = depth - 1;
        match self.rng.random_range(0..6) {
            0 => Formula::not(self.gen(d)),
            1 | 2 => {
                let n = self.rng.random_range(2..=4);
                let fs = (0..n).map(|_| self.gen(d)).collect();
                if self.rng.random_bool(0.5) {
                    Formula::And(fs)
                } else {
                    Formula::Or(fs)
                }
            }
            3 => Formula::xor(self.gen(d), self.gen(d)),
            4 => Formula::implies(self.gen(d), self.gen(d)),
            _ => Formula::iff(self.gen(d), self.gen(d)),
        }
    }
}

impl Iterator for FormulaGenerator {
    type Item = Formula;
    fn next(&mut self) -> Option<Formula> {
        Some(self.next_formula())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_and_bounded() {
        let a: Vec<_> = FormulaGenerator::new(7, 4, 5).take(50).collect();
        let b: Vec<_> = FormulaGenerator::new(7, 4, 5).take(50).collect();
        assert_eq!(a, b);
        assert!(a.iter().all(|f| f.depth() <= 5));
        assert!(a
            .iter()
            .flat_map(|f| f.free_symbols())
            .all(|s| ["x0", "x1", "x2", "x3"].contains(&s.as_str())));
    }
}
