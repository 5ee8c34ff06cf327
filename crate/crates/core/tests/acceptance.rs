//! Acceptance criteria 1-10. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::time::{Duration, Instant};

use puzzlelogic::corpus::{bundled, bundled_puzzle, recorded, validate_puzzle};
use puzzlelogic::evaluator::{self, KbStatus, Verdict};
use puzzlelogic::gen::FormulaGenerator;
use puzzlelogic::reasoner::{self, EncodingRelation, KnowledgeBase, Polarity, QueryStatus};
use puzzlelogic::sat::{self, enumerate_models, parse_dimacs, to_cnf_over, write_dimacs, Solver};
use puzzlelogic::translator::{CandidateEncoding, MockDefault, MockScript, MockTranslator, TranslationMode, TranslatorConfig};
use puzzlelogic::{parse, print, Assignment, Formula, Vocabulary};

type Check = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn classify(kb: &KnowledgeBase, q: &str) -> Result<QueryStatus, String> {
    let f = parse(q, Some(kb.vocab())).map_err(|e| e.to_string())?;
    reasoner::classify(kb, &f).map_err(|e| e.to_string())
}

fn criterion_1() -> Check {
    let p = bundled_puzzle("who_is_in_the_car").map_err(|e| e.to_string())?;
    let kb = p.gold_kb().map_err(|e| e.to_string())?;
    for (q, want) in [
        ("P2", QueryStatus::Entailed),
        ("P1", QueryStatus::Unknown),
        ("P3", QueryStatus::Unknown),
    ] {
        let got = classify(&kb, q)?;
        ensure!(got == want, "{q}: expected {want}, got {got}");
    }
    let bb = reasoner::backbone(&kb).map_err(|e| e.to_string())?;
    for (id, pol) in &bb.entries {
        let want = match id.as_str() {
            "P2" => Polarity::ForcedTrue,
            "D3" => Polarity::ForcedFalse,
            _ => Polarity::Free,
        };
        ensure!(*pol == want, "backbone {id}: expected {want}, got {pol}");
    }
    ensure!(bb.entries.len() == 6, "backbone has {} entries", bb.entries.len());
    Ok("P2 Entailed, P1/P3 Unknown, backbone {P2:+, D3:-}".into())
}

fn criterion_2() -> Check {
    let p = bundled_puzzle("who_is_in_the_car").map_err(|e| e.to_string())?;
    let gold = p.gold_kb().map_err(|e| e.to_string())?;
    let strange = parse(recorded::CAR_DRIVER_CASES, Some(&p.vocab)).map_err(|e| e.to_string())?;
    let kb = gold.with_fact_replaced("4", strange).map_err(|e| e.to_string())?;
    for q in ["P1", "P2"] {
        let (a, b) = (classify(&gold, q)?, classify(&kb, q)?);
        ensure!(a == b, "{q}: gold {a}, substituted {b}");
    }
    Ok("P1 Unknown and P2 Entailed under the substituted conjunct".into())
}

fn criterion_3() -> Check {
    let p = bundled_puzzle("alpine_club").map_err(|e| e.to_string())?;
    let kb = p.gold_kb().map_err(|e| e.to_string())?;
    for (who, want) in [
        ("Mike", QueryStatus::Entailed),
        ("Tony", QueryStatus::Refuted),
        ("John", QueryStatus::Unknown),
    ] {
        let got = classify(&kb, &format!("Cl_{who} AND NOT Sk_{who}"))?;
        ensure!(got == want, "{who}: expected {want}, got {got}");
    }
    Ok("Mike Entailed, Tony Refuted, John Unknown".into())
}

fn criterion_4() -> Check {
    let p = bundled_puzzle("ladies_or_tigers_trial_1").map_err(|e| e.to_string())?;
    let kb = p.gold_kb().map_err(|e| e.to_string())?;
    let models = enumerate_models(&kb.conjunction(), &p.vocab, 64).map_err(|e| e.to_string())?;
    let rooms = ["L1", "T1", "L2", "T2"];
    let projected: BTreeSet<Vec<&str>> = models
        .models
        .iter()
        .map(|m| rooms.iter().copied().filter(|r| m.get(r) == Some(true)).collect())
        .collect();
    ensure!(projected.len() == 1, "{} models over the rooms", projected.len());
    let only: Vec<&str> = projected.into_iter().next().unwrap();
    ensure!(only == ["T1", "L2"], "model is {only:?}");
    for q in ["L2", "T1"] {
        let got = classify(&kb, q)?;
        ensure!(got == QueryStatus::Entailed, "{q}: got {got}");
    }
    Ok("single room model {T1, L2}; L2 and T1 Entailed".into())
}

fn criterion_5() -> Check {
    let p = bundled_puzzle("ladies_or_tigers_trial_1").map_err(|e| e.to_string())?;
    let rooms = parse(recorded::ROOMS_AS_CONJUNCTION, Some(&p.vocab)).map_err(|e| e.to_string())?;
    let kb = KnowledgeBase::new(p.vocab.clone(), vec![("rooms".into(), rooms)]).map_err(|e| e.to_string())?;
    ensure!(!reasoner::consistent(&kb), "room conjunction reported consistent");
    let script = MockScript {
        responses: [("1".to_string(), recorded::ROOMS_AS_CONJUNCTION.to_string())].into(),
        ..MockScript::default()
    };
    let mock = MockTranslator::new(&p, script);
    let report = evaluator::end_to_end(&p, TranslationMode::WholeText, &TranslatorConfig::default(), &mock)
        .map_err(|e| e.to_string())?;
    ensure!(report.kb_status == KbStatus::Inconsistent, "kb status {}", report.kb_status);
    ensure!(report.verdict == Verdict::Failed, "verdict {}", report.verdict);
    Ok("conjunction unsatisfiable; end to end Inconsistent/Failed".into())
}

fn ball_scores(answers: &[&str; 15]) -> Result<evaluator::PuzzleScore, String> {
    let p = bundled_puzzle("three_balls").map_err(|e| e.to_string())?;
    let mock = MockTranslator::new(&p, MockScript::from_answers(answers, MockDefault::None));
    let run = puzzlelogic::translator::translate(&p, TranslationMode::WholeText, &TranslatorConfig::default(), &mock)
        .map_err(|e| e.to_string())?;
    evaluator::score_puzzle(&run.candidates, &p, TranslationMode::WholeText).map_err(|e| e.to_string())
}

fn ids_where(score: &evaluator::PuzzleScore, pred: impl Fn(&evaluator::StatementScore) -> bool) -> Vec<u32> {
    score
        .scores
        .iter()
        .filter(|s| pred(s))
        .map(|s| s.statement_id.parse().unwrap())
        .collect()
}

fn criterion_6() -> Check {
    let gpt4 = ball_scores(&recorded::GPT4_BALLS)?;
    let undisputed_correct = ids_where(&gpt4, |s| s.correct && !s.disputed);
    let undisputed_wrong = ids_where(&gpt4, |s| !s.correct && !s.disputed);
    let disputed = ids_where(&gpt4, |s| s.disputed);
    ensure!(
        undisputed_correct == [2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 15],
        "GPT4 correct set {undisputed_correct:?}"
    );
    ensure!(undisputed_wrong == [1, 12], "GPT4 wrong set {undisputed_wrong:?}");
    ensure!(disputed == [13, 14], "disputed set {disputed:?}");
    let s12 = gpt4.score("12").unwrap();
    ensure!(
        s12.relation.encoding() == Some(EncodingRelation::CandidateStronger),
        "statement 12 relation {}",
        s12.relation
    );

    let chatgpt = ball_scores(&recorded::CHATGPT_BALLS)?;
    // statement 13 is answered identically by both models and set aside
    let wrong = ids_where(&chatgpt, |s| !s.correct && s.statement_id != "13");
    ensure!(wrong == [1, 2, 12, 14, 15], "ChatGPT wrong set {wrong:?}");
    ensure!(
        recorded::CHATGPT_BALLS[12] == recorded::GPT4_BALLS[12],
        "statement 13 answers differ between models"
    );
    Ok(format!(
        "GPT4 {}/{} (disputed {:?}); ChatGPT wrong {:?}",
        gpt4.ratio().0,
        gpt4.ratio().1,
        disputed,
        wrong
    ))
}

fn criterion_7() -> Check {
    const COUNT: usize = 10_000;
    let mut checked = 0;
    let mut max_vars = 0;
    for i in 0..COUNT {
        let num_vars = 1 + i % 12;
        let depth = 2 + (i / 12) % 5;
        let f = FormulaGenerator::new(i as u64, num_vars, depth).next_formula();
        let ids: Vec<String> = (0..num_vars).map(FormulaGenerator::var_name).collect();
        let vocab = Vocabulary::from_ids(ids.iter().map(String::as_str)).map_err(|e| e.to_string())?;
        let tt: BTreeSet<Vec<bool>> = Assignment::all_over(&ids)
            .filter(|a| f.eval(a).unwrap())
            .map(|a| ids.iter().map(|id| a.get(id).unwrap()).collect())
            .collect();

        let cnf = to_cnf_over(&f, &ids).map_err(|e| e.to_string())?;
        match sat::solve(&cnf, &[]) {
            sat::SatOutcome::Sat(m) => {
                ensure!(f.eval(&m).unwrap(), "formula {i}: solver model does not satisfy {}", print(&f));
                ensure!(!tt.is_empty(), "formula {i}: solver Sat, truth table Unsat: {}", print(&f));
            }
            sat::SatOutcome::Unsat => {
                ensure!(tt.is_empty(), "formula {i}: solver Unsat, truth table Sat: {}", print(&f))
            }
        }
        let models = enumerate_models(&f, &vocab, 1 << num_vars).map_err(|e| e.to_string())?;
        ensure!(!models.limit_exceeded, "formula {i}: more models than assignments");
        let got: BTreeSet<Vec<bool>> = models
            .models
            .iter()
            .map(|a| ids.iter().map(|id| a.get(id).unwrap()).collect())
            .collect();
        ensure!(got.len() == models.models.len(), "formula {i}: duplicate models enumerated");
        ensure!(got == tt, "formula {i}: model set differs from truth table: {}", print(&f));
        checked += 1;
        max_vars = max_vars.max(num_vars);
    }
    Ok(format!("{checked} formulas over 1..={max_vars} variables, 0 discrepancies"))
}

fn criterion_8() -> Check {
    let mut n = 0;
    for seed in 0..200u64 {
        for f in FormulaGenerator::new(seed, 1 + (seed as usize % 12), 6).take(50) {
            let text = print(&f);
            let back = parse(&text, None).map_err(|e| format!("{text:?}: {e}"))?;
            ensure!(back == f, "round trip changed {text:?}");
            n += 1;
        }
    }
    let script = fixture("mock/gpt4_s5.json");
    let mut outputs = Vec::new();
    for _ in 0..3 {
        let mut out = Vec::new();
        let mut err = Vec::new();
        puzzlelogic::cli::run(
            [
                "puzzlelogic",
                "--corpus-dir",
                "no-such-dir",
                "eval",
                "three_balls",
                "--mock",
                script.to_str().unwrap(),
                "--format",
                "json",
            ],
            &mut out,
            &mut err,
        );
        outputs.push(out);
    }
    ensure!(outputs.windows(2).all(|w| w[0] == w[1]), "mock eval output differs between runs");
    ensure!(!outputs[0].is_empty(), "mock eval printed nothing");
    Ok(format!("{n} formulas round-trip; 3 mock eval runs byte-identical"))
}

fn criterion_9() -> Check {
    let all = bundled();
    for p in &all {
        let v = validate_puzzle(p);
        ensure!(v.is_empty(), "{}: {}", p.name, v.iter().map(ToString::to_string).collect::<Vec<_>>().join("; "));
        for s in &p.statements {
            let c = CandidateEncoding::from_formula(s.id.clone(), s.gold.clone());
            ensure!(evaluator::score_statement(&c, s).map(|r| r.correct).unwrap_or(false), "{} {}: gold not self-equivalent", p.name, s.id);
        }
    }
    Ok(format!("{} bundled puzzles, 0 violations", all.len()))
}

fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

/// Runs an external DIMACS solver if one is available. `Ok(None)` means no
/// solver was found.
fn external_verdict(dimacs: &str) -> Result<Option<(String, bool)>, String> {
    for bin in ["kissat", "cadical", "minisat", "glucose", "picosat", "cryptominisat5"] {
        let Ok(mut child) = Command::new(bin)
            .arg(if bin == "minisat" || bin == "glucose" { "-verb=0" } else { "-q" })
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::null())
            .spawn()
        else {
            continue;
        };
        child.stdin.take().unwrap().write_all(dimacs.as_bytes()).map_err(|e| e.to_string())?;
        let out = child.wait_with_output().map_err(|e| e.to_string())?;
        return match out.status.code() {
            Some(10) => Ok(Some((bin.to_string(), true))),
            Some(20) => Ok(Some((bin.to_string(), false))),
            other => Err(format!("{bin} exited with {other:?}")),
        };
    }
    const PY: &str = "import sys\nfrom pysat.formula import CNF\nfrom pysat.solvers import Minisat22\ncnf = CNF(from_string=sys.stdin.read())\nwith Minisat22(bootstrap_with=cnf.clauses) as s:\n    print('SAT' if s.solve() else 'UNSAT')\n";
    let Ok(mut child) = Command::new("python3")
        .args(["-c", PY])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
    else {
        return Ok(None);
    };
    child.stdin.take().unwrap().write_all(dimacs.as_bytes()).map_err(|e| e.to_string())?;
    let out = child.wait_with_output().map_err(|e| e.to_string())?;
    match String::from_utf8_lossy(&out.stdout).trim() {
        "SAT" => Ok(Some(("python-sat minisat22".into(), true))),
        "UNSAT" => Ok(Some(("python-sat minisat22".into(), false))),
        _ => Ok(None),
    }
}

fn criterion_10() -> Check {
    let mut external = None;
    let mut n = 0;
    for (puzzle, queries) in [("who_is_in_the_car", vec![0, 1, 2]), ("ladies_or_tigers_trial_1", vec![0, 1])] {
        let p = bundled_puzzle(puzzle).map_err(|e| e.to_string())?;
        let kb = p.gold_kb().map_err(|e| e.to_string())?;
        for qi in queries {
            let q = &p.queries[qi];
            let f = Formula::And(vec![kb.conjunction(), Formula::not(q.target.clone())]);
            let ids: Vec<String> = p.vocab.ids().map(String::from).collect();
            let cnf = to_cnf_over(&f, &ids).map_err(|e| e.to_string())?;
            let internal = sat::solve(&cnf, &[]).is_sat();
            let entailed = q.expected == QueryStatus::Entailed;
            ensure!(internal != entailed, "{puzzle} query {qi}: internal verdict disagrees with expectation");
            let text = write_dimacs(&cnf, &[]);
            let back = parse_dimacs(&text).map_err(|e| e.to_string())?;
            let reparsed = Solver::from_clauses(&back.clauses, back.num_vars).solve(&[]).is_some();
            ensure!(reparsed == internal, "{puzzle} query {qi}: re-parsed instance changes verdict");
            if let Some((name, verdict)) = external_verdict(&text)? {
                ensure!(verdict == internal, "{puzzle} query {qi}: {name} says {verdict}, internal {internal}");
                external = Some(name);
            }
            n += 1;
        }
    }
    match external {
        Some(name) => Ok(format!("{n} instances agree with {name}")),
        None => Err(format!(
            "{n} instances re-parse consistently, but no external solver was found (none on PATH, no python-sat)"
        )),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Check, Duration); 10] = [
        ("car-puzzle entailments", criterion_1, Duration::from_secs(1)),
        ("strange-formula robustness", criterion_2, Duration::from_secs(1)),
        ("alpine club", criterion_3, Duration::from_secs(1)),
        ("ladies or tigers trial 1", criterion_4, Duration::from_secs(1)),
        ("contradiction detection", criterion_5, Duration::from_secs(1)),
        ("ball-statement scoring", criterion_6, Duration::from_secs(5)),
        ("solver oracle equivalence", criterion_7, Duration::from_secs(60)),
        ("round-trip and determinism", criterion_8, Duration::from_secs(30)),
        ("corpus self-validation", criterion_9, Duration::from_secs(5)),
        ("DIMACS interop", criterion_10, Duration::from_secs(30)),
    ];
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if elapsed <= *budget => (true, d),
            Ok(d) => (false, format!("{d}; took {elapsed:.2?}, budget {budget:?}")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "criterion {:>2} {:<28} {} ({:.2?}) {}",
            i + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            elapsed,
            detail
        );
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
