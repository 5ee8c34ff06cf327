//! Runs the full pipeline offline: translate every puzzle with a scripted
//! model, build a knowledge base from what comes back, answer the puzzle
//! questions with the SAT solver, and render the report.
//!
//! The first pass echoes the reference encodings. The second swaps in an
//! unsatisfiable reading of the first trial's room sign, which the solver
//! catches before any question is answered.
//!
//!     cargo run --example mock_end_to_end

use puzzlelogic::corpus::{self, recorded};
use puzzlelogic::evaluator::{end_to_end, render_report, Report, ReportFormat};
use puzzlelogic::translator::{MockDefault, MockScript, MockTranslator, TranslationMode, TranslatorConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = TranslatorConfig::default();
    let mut reports = Vec::new();

    for p in corpus::bundled() {
        for mode in [TranslationMode::WholeText, TranslationMode::StatementAtATime] {
            let report = end_to_end(&p, mode, &cfg, &MockTranslator::gold(&p))?;
            reports.push(Report::EndToEnd(report));
        }
    }

    let trial = corpus::bundled_puzzle("ladies_or_tigers_trial_1")?;
    let mut script = MockScript::from_answers(&[], MockDefault::Gold);
    script.model = Some("rooms-as-conjunction".into());
    script.responses.insert("1".into(), recorded::ROOMS_AS_CONJUNCTION.into());
    let report = end_to_end(&trial, TranslationMode::StatementAtATime, &cfg, &MockTranslator::new(&trial, script))?;
    reports.push(Report::EndToEnd(report));

    print!("{}", render_report(&reports, ReportFormat::Table));
    Ok(())
}
