//! Sends one puzzle to a chat-completions endpoint and prints the parsed
//! candidates with their end-to-end verdict. Needs network access and an
//! API key in the environment variable named by the config
//! (`OPENAI_API_KEY` by default).
//!
//!     OPENAI_API_KEY=... cargo run --example live_translate -- alpine_club stepwise

use puzzlelogic::corpus;
use puzzlelogic::evaluator::assess_candidates;
use puzzlelogic::translator::{self, HttpTranslator, RunDir, TranslationMode, TranslatorConfig};
use puzzlelogic::print;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let name = args.next().unwrap_or_else(|| "who_is_in_the_car".into());
    let mode = match args.next().as_deref() {
        Some("stepwise") => TranslationMode::StatementAtATime,
        _ => TranslationMode::WholeText,
    };
    let cfg = match std::env::var("PUZZLELOGIC_CONFIG") {
        Ok(path) => TranslatorConfig::from_json(&std::fs::read_to_string(path)?)?,
        Err(_) => TranslatorConfig::default(),
    };

    let p = corpus::bundled_puzzle(&name)?;
    let client = match HttpTranslator::from_config(&cfg) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("{e}");
            std::process::exit(2);
        }
    };

    let run = translator::translate(&p, mode, &cfg, &client)?;
    let dir = RunDir::create("runs")?;
    let path = dir.append(&p.name, mode.label(), &run.transcripts)?;
    eprintln!("transcript: {}", path.display());

    for c in &run.candidates {
        match (c.formula(), c.failure()) {
            (Some(f), _) => println!("{:>3}  {}", c.statement_id, print(f)),
            (_, Some(e)) => println!("{:>3}  [{:?}] {}", c.statement_id, e.kind, e.detail),
            _ => unreachable!(),
        }
    }
    let report = assess_candidates(&p, mode, &run.candidates)?;
    println!("\nknowledge base: {}; verdict: {}", report.kb_status, report.verdict);
    Ok(())
}
