use super::{to_cnf_over, SatError, Solver};
use crate::logic::{Assignment, Formula, Vocabulary};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSet {
    pub models: Vec<Assignment>,
    /// Set when more models exist than the requested limit.
    pub limit_exceeded: bool,
}

/// Lists the models of `f` over every symbol of `vocab`, at most `limit` of
/// them, in the order the solver finds them. Each model found is excluded
/// with a clause over the original variables only.
pub fn enumerate_models(f: &Formula, vocab: &Vocabulary, limit: usize) -> Result<ModelSet, SatError> {
    if limit == 0 {
        return Err(SatError::ZeroLimit);
    }
    let ids: Vec<String> = vocab.ids().map(str::to_string).collect();
    let cnf = to_cnf_over(f, &ids)?;
    let mut models = Vec::new();
    let mut limit_exceeded = false;
    Solver::new(&cnf).for_each_model(ids.len(), |full| {
        if models.len() == limit {
            limit_exceeded = true;
            return false;
        }
        models.push(cnf.project(full));
        true
    });
    Ok(ModelSet { models, limit_exceeded })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::exactly_one;

    #[test]
    fn exactly_one_has_three_models() {
        let v = Vocabulary::from_ids(["X1", "Y1", "Z1"]).unwrap();
        let f = exactly_one(&["X1", "Y1", "Z1"]).unwrap();
        let got = enumerate_models(&f, &v, 10).unwrap();
        assert_eq!(got.models.len(), 3);
        assert!(!got.limit_exceeded);
    }

    #[test]
    fn falsum_has_no_models() {
        let v = Vocabulary::from_ids(["p"]).unwrap();
        let got = enumerate_models(&Formula::Const(false), &v, 10).unwrap();
        assert!(got.models.is_empty());
    }

    #[test]
    fn limit_flag() {
        let v = Vocabulary::from_ids(["p", "q"]).unwrap();
        let got = enumerate_models(&Formula::Const(true), &v, 3).unwrap();
        assert_eq!(got.models.len(), 3);
        assert!(got.limit_exceeded);
        let got = enumerate_models(&Formula::Const(true), &v, 4).unwrap();
        assert_eq!(got.models.len(), 4);
        assert!(!got.limit_exceeded);
        assert_eq!(enumerate_models(&Formula::Const(true), &v, 0), Err(SatError::ZeroLimit));
    }

    #[test]
    fn symbols_outside_formula_vary_freely() {
        let v = Vocabulary::from_ids(["p", "q", "r"]).unwrap();
        let got = enumerate_models(&Formula::atom("q"), &v, 10).unwrap();
        assert_eq!(got.models.len(), 4);
        assert!(got.models.iter().all(|m| m.get("q") == Some(true)));
    }

    #[test]
    fn empty_vocabulary() {
        let v = Vocabulary::default();
        let got = enumerate_models(&Formula::Const(true), &v, 5).unwrap();
        assert_eq!(got.models, vec![Assignment::new()]);
    }
}
