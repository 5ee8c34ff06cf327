//! Validates puzzle files: the schema, symbol declarations, consistency of
//! the reference encodings, and every expected answer. With no arguments
//! the bundled puzzles are checked.
//!
//!     cargo run --example check_corpus -- corpus/*.json

use puzzlelogic::corpus::{self, validate_puzzle};

fn main() {
    let paths: Vec<String> = std::env::args().skip(1).collect();
    let puzzles = if paths.is_empty() {
        corpus::bundled().into_iter().map(Ok).collect::<Vec<_>>()
    } else {
        paths.iter().map(|p| corpus::load_puzzle(p).map_err(|e| format!("{p}: {e}"))).collect()
    };

    let mut bad = 0;
    for p in puzzles {
        match p {
            Err(e) => {
                bad += 1;
                println!("{e}");
            }
            Ok(p) => {
                let violations = validate_puzzle(&p);
                println!("{:<28} {} statements, {} queries, {} violations", p.name, p.statements.len(), p.queries.len(), violations.len());
                for v in &violations {
                    println!("    {v}");
                }
                bad += usize::from(!violations.is_empty());
            }
        }
    }
    std::process::exit(i32::from(bad > 0));
}
