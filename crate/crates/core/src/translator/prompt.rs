use super::{TranslateError, TranslationMode};
use crate::corpus::{Puzzle, Statement};

/// Default prompt layout. Placeholders: `{symbols}`, `{task}`, `{body}`,
/// `{format}`. Override through `TranslatorConfig::prompt_template`.
pub const DEFAULT_TEMPLATE: &str = "\
Task: Given the following propositional symbols:
{symbols}
express {task} in propositional logic, using only the symbols above.
Write formulas with the connectives NOT, AND, OR, XOR, -> and <-> and parentheses.

{body}

{format}";

fn symbol_lines(p: &Puzzle) -> String {
    p.vocab
        .iter()
        .map(|s| match s.gloss() {
            Some(g) => format!("{} - {}", s.id(), g),
            None => s.id().to_string(),
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Renders the translation prompt for a whole puzzle or for one statement.
///
/// The statement must belong to `p` in statement-at-a-time mode and is
/// ignored otherwise.
pub fn build_prompt(
    p: &Puzzle,
    mode: TranslationMode,
    statement: Option<&Statement>,
    template: Option<&str>,
) -> Result<String, TranslateError> {
    let (task, body, format) = match mode {
        TranslationMode::WholeText => {
            let list = p
                .statements
                .iter()
                .map(|s| format!("{}. {}", s.id, s.text))
                .collect::<Vec<_>>()
                .join("\n");
            (
                "each of the following statements".to_string(),
                format!("{}\n\nStatements:\n{}", p.narrative, list),
                format!(
                    "Answer with one formula per statement, each on its own line and prefixed by the statement id, for example:\n{}. <formula>",
                    p.statements.first().map(|s| s.id.as_str()).unwrap_or("1")
                ),
            )
        }
        TranslationMode::StatementAtATime => {
            let s = statement.ok_or_else(|| TranslateError::StatementNotInPuzzle(String::new()))?;
            if p.statement(&s.id) != Some(s) {
                return Err(TranslateError::StatementNotInPuzzle(s.id.clone()));
            }
            (
                "the following statement".to_string(),
                s.text.clone(),
                format!(
                    "Answer with a single formula prefixed by the statement id, for example:\n{}. <formula>",
                    s.id
                ),
            )
        }
    };
    let template = template.unwrap_or(DEFAULT_TEMPLATE);
    Ok(template
        .replace("{symbols}", &symbol_lines(p))
        .replace("{task}", &task)
        .replace("{body}", &body)
        .replace("{format}", &format))
}

/// The narrative followed by each query's question, one per line.
pub fn direct_qa_prompt(p: &Puzzle) -> String {
    let mut out = p.narrative.clone();
    for q in &p.queries {
        out.push('\n');
        out.push_str(&q.question);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::bundled_puzzle;

    #[test]
    fn whole_text_lists_symbols_and_statements() {
        let p = bundled_puzzle("three_balls").unwrap();
        let prompt = build_prompt(&p, TranslationMode::WholeText, None, None).unwrap();
        assert!(prompt.lines().any(|l| l == "X1 - A is a red ball"));
        assert!(prompt.contains("using only the symbols above"));
        for s in &p.statements {
            assert!(prompt.contains(&format!("{}. {}", s.id, s.text)));
        }
        assert!(prompt.contains("prefixed by the statement id"));
    }

    #[test]
    fn single_statement_prompt() {
        let p = bundled_puzzle("who_is_in_the_car").unwrap();
        let s = p.statement("2").unwrap();
        assert_eq!(s.text, "A3 was not the driver.");
        let prompt = build_prompt(&p, TranslationMode::StatementAtATime, Some(s), None).unwrap();
        let present = p.statements.iter().filter(|t| prompt.contains(&t.text)).count();
        assert_eq!(present, 1);
        assert!(prompt.contains("D3 - A3 was the driver"));
        assert!(!prompt.contains(&p.narrative));
    }

    #[test]
    fn deterministic_and_checked() {
        let p = bundled_puzzle("ladies_or_tigers_trial_1").unwrap();
        let a = build_prompt(&p, TranslationMode::WholeText, None, None).unwrap();
        let b = build_prompt(&p, TranslationMode::WholeText, None, None).unwrap();
        assert_eq!(a, b);

        let other = bundled_puzzle("who_is_in_the_car").unwrap();
        let foreign = other.statement("2").unwrap();
        assert!(matches!(
            build_prompt(&p, TranslationMode::StatementAtATime, Some(foreign), None),
            Err(TranslateError::StatementNotInPuzzle(_))
        ));
        assert!(build_prompt(&p, TranslationMode::StatementAtATime, None, None).is_err());
    }

    #[test]
    fn custom_template() {
        let p = bundled_puzzle("who_is_in_the_car").unwrap();
        let s = p.statement("3").unwrap();
        let prompt = build_prompt(
            &p,
            TranslationMode::StatementAtATime,
            Some(s),
            Some("Symbols:\n{symbols}\nEncode: {body}"),
        )
        .unwrap();
        assert!(prompt.starts_with("Symbols:\nP1 - A1 was in the car\n"));
        assert!(prompt.ends_with("Encode: A1 was in the car only if A2 was."));
    }

    #[test]
    fn direct_qa_is_narrative_then_questions() {
        let p = bundled_puzzle("who_is_in_the_car").unwrap();
        let expected = format!(
            "{}\n{}",
            p.narrative,
            p.queries.iter().map(|q| q.question.as_str()).collect::<Vec<_>>().join("\n")
        );
        assert_eq!(direct_qa_prompt(&p), expected);
    }
}
