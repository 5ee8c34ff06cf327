//! The formula syntax: ASCII keywords or Unicode connectives, printed back
//! with the minimum parentheses needed to parse to the same tree.
//!
//!     cargo run --example parse_and_print -- "A -> (B or not C)"

use puzzlelogic::{parse, print, Vocabulary};

fn main() {
    let inputs: Vec<String> = match std::env::args().skip(1).collect::<Vec<_>>() {
        args if !args.is_empty() => args,
        _ => [
            "X1 AND X2",
            "(D1 ∧ (P1 ∨ P2)) ∨ (D3 ∨ P2)",
            "a -> b -> c",
            "!(p xor q) <-> (p <-> q)",
            "T1 and and L2",
        ]
        .map(String::from)
        .to_vec(),
    };

    for text in &inputs {
        match parse(text, None) {
            Ok(f) => println!("{text:<32} => {}   (depth {})", print(&f), f.depth()),
            Err(e) => println!("{text:<32} => error: {e}"),
        }
    }

    // With a vocabulary, unknown symbols are rejected at parse time.
    let vocab = Vocabulary::from_ids(["X1", "Y1"]).unwrap();
    if let Err(e) = parse("X1 or Z1", Some(&vocab)) {
        println!("\nagainst {{X1, Y1}}: {e}");
    }
}
