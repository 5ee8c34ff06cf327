//! Compares a candidate encoding with a reference one by their model sets:
//! equivalent, strictly stronger or weaker, overlapping, disjoint, or
//! degenerate.
//!
//!     cargo run --example compare_encodings

use puzzlelogic::reasoner::relation;
use puzzlelogic::parse;

fn main() {
    let gold = "X1 or X2";
    for candidate in [
        "X2 or X1",
        "not (not X1 and not X2)",
        "X1 and X2",
        "X1 or X2 or X3",
        "X1 xor X3",
        "not X1 and not X2",
        "X1 and not X1",
        "X3 or not X3",
    ] {
        let r = relation(&parse(candidate, None).unwrap(), &parse(gold, None).unwrap());
        println!("{candidate:<26} vs {gold}: {r}");
    }
}
