//! Lists every model of a formula over a vocabulary. Symbols the formula
//! does not mention range over both values.
//!
//!     cargo run --example enumerate_models

use puzzlelogic::logic::exactly_one;
use puzzlelogic::sat::enumerate_models;
use puzzlelogic::{parse, Formula, Vocabulary};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let vocab = Vocabulary::from_ids(["L1", "T1", "L2", "T2"])?;

    let rooms = Formula::and_all(vec![exactly_one(&["L1", "T1"])?, exactly_one(&["L2", "T2"])?]);
    show("one occupant per room", &rooms, &vocab)?;

    let sign = parse("(L1 and T2) xor (L2 and T1)", Some(&vocab))?;
    let both = Formula::and_all(vec![rooms, sign]);
    show("... and exactly one sign true", &both, &vocab)?;

    // A limit below the model count is reported rather than silently hit.
    let set = enumerate_models(&Formula::Const(true), &vocab, 5)?;
    println!("tautology, limit 5: {} models, more exist: {}", set.models.len(), set.limit_exceeded);
    Ok(())
}

fn show(label: &str, f: &Formula, vocab: &Vocabulary) -> Result<(), Box<dyn std::error::Error>> {
    let set = enumerate_models(f, vocab, 64)?;
    println!("{label}: {} models", set.models.len());
    for m in &set.models {
        println!("  {{{}}}", m.true_symbols().join(", "));
    }
    Ok(())
}
