//! Logic word puzzles solved by translation: a language model turns each
//! statement into propositional logic over a declared vocabulary, and a
//! DPLL solver answers the questions.
//!
//! The pieces, bottom-up:
//!
//! * [`logic`] – formulas, vocabularies, assignments, cardinality builders
//! * [`parser`] – the textual formula syntax
//! * [`sat`] – Tseitin CNF, DPLL, model enumeration, DIMACS
//! * [`reasoner`] – entailment, three-valued queries, backbones, equivalence
//! * [`corpus`] – the puzzle file format and the bundled puzzles
//! * [`translator`] – prompts, chat-completion client, mock, extraction
//! * [`evaluator`] – scoring candidate encodings and end-to-end runs
//! * [`cli`] – the `puzzlelogic` command

pub mod cli;
pub mod corpus;
pub mod evaluator;
pub mod gen;
pub mod logic;
pub mod parser;
pub mod reasoner;
pub mod sat;
pub mod translator;

pub use logic::{Assignment, Formula, Symbol, Vocabulary};
pub use parser::{parse, print, ParseError};
