//! Answers the questions of the "who is in the car" puzzle from its
//! hand-written encoding, then prints which symbols every model agrees on.
//!
//!     cargo run --example solve_car

use puzzlelogic::corpus;
use puzzlelogic::reasoner::{self, Polarity};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = corpus::bundled_puzzle("who_is_in_the_car")?;
    let kb = p.gold_kb()?;
    println!("{}\n", p.narrative);

    for q in &p.queries {
        let status = reasoner::classify(&kb, &q.target)?;
        println!("{:<40} {status}", q.question);
    }

    println!();
    for (id, polarity) in reasoner::backbone(&kb)?.entries {
        let mark = match polarity {
            Polarity::ForcedTrue => "true in every model",
            Polarity::ForcedFalse => "false in every model",
            Polarity::Free => "undetermined",
        };
        let gloss = kb.vocab().get(&id).and_then(|s| s.gloss()).unwrap_or("");
        println!("{id:<4} {mark:<22} {gloss}");
    }
    Ok(())
}
