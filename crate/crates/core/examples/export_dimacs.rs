//! Tseitin-encodes a formula and writes it as DIMACS CNF, the format every
//! off-the-shelf SAT solver reads. The comment lines map variable numbers
//! back to symbols.
//!
//!     cargo run --example export_dimacs > car.cnf

use puzzlelogic::corpus;
use puzzlelogic::sat::{self, to_cnf_over, write_dimacs};
use puzzlelogic::Formula;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = corpus::bundled_puzzle("who_is_in_the_car")?;
    let kb = p.gold_kb()?;
    let q = &p.queries[1];

    // KB AND NOT query is unsatisfiable exactly when the query is entailed.
    let f = Formula::and_all(vec![kb.conjunction(), Formula::not(q.target.clone())]);
    let ids: Vec<String> = kb.vocab().ids().map(String::from).collect();
    let cnf = to_cnf_over(&f, &ids)?;

    let comments = vec![format!("{}: refutation of {:?}", p.name, q.question)];
    print!("{}", write_dimacs(&cnf, &comments));
    eprintln!(
        "{} original + {} auxiliary variables, {} clauses; internal solver says {}",
        cnf.originals().len(),
        cnf.aux_count(),
        cnf.clauses().len(),
        if sat::solve(&cnf, &[]).is_sat() { "SAT" } else { "UNSAT" }
    );
    Ok(())
}
