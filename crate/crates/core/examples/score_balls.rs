//! Scores two sets of recorded model answers for the fifteen "three balls"
//! statements against the reference encodings. Statements whose intended
//! reading is contested are reported separately.
//!
//!     cargo run --example score_balls

use puzzlelogic::corpus::{self, recorded};
use puzzlelogic::evaluator::score_puzzle;
use puzzlelogic::translator::{self, MockDefault, MockScript, MockTranslator, TranslationMode, TranslatorConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let p = corpus::bundled_puzzle("three_balls")?;
    let cfg = TranslatorConfig::default();

    for (name, answers) in [("gpt-4", &recorded::GPT4_BALLS), ("chatgpt", &recorded::CHATGPT_BALLS)] {
        let mock = MockTranslator::new(&p, MockScript::from_answers(answers, MockDefault::None));
        let run = translator::translate(&p, TranslationMode::StatementAtATime, &cfg, &mock)?;
        let score = score_puzzle(&run.candidates, &p, TranslationMode::StatementAtATime)?;

        let (ok, n) = score.ratio();
        let (dok, dn) = score.disputed_ratio();
        println!("{name}: {ok}/{n} correct, disputed {dok}/{dn}");
        for s in score.scores.iter().filter(|s| !s.correct) {
            let flag = if s.disputed { " (disputed)" } else { "" };
            println!("  {:>2}  {}{flag}", s.statement_id, s.relation);
        }
    }
    Ok(())
}
