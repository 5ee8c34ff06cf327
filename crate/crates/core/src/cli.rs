//! The `puzzlelogic` command.
//!
//! Exit status: 0 on success, 1 on a logical failure (inconsistent KB,
//! validation violations, a verdict other than `AllCorrect`, failed
//! requests), 2 on usage or I/O errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::corpus::{self, Puzzle};
use crate::evaluator::{self, Report, ReportFormat};
use crate::logic::Formula;
use crate::parser::print;
use crate::reasoner::{self, KnowledgeBase};
use crate::sat;
use crate::translator::{
    self, CandidatesFile, FailureKind, HttpTranslator, MockScript, MockTranslator, RunDir, TranslationMode,
    Translator, TranslatorConfig,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "puzzlelogic", version, about = "Translate logic word puzzles to propositional logic and solve them")]
pub struct Cli {
    /// Directory searched for `<name>.json` puzzle files before the bundled corpus.
    #[arg(long, global = true, default_value = "corpus")]
    pub corpus_dir: PathBuf,
    /// Where translation runs are written, one timestamped directory per run.
    #[arg(long, global = true, default_value = "runs")]
    pub runs_dir: PathBuf,
    /// Translator config file (JSON).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Print more detail; may be repeated.
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Answer a puzzle's queries from its gold encodings.
    Solve { puzzle: String },
    /// Validate a puzzle file.
    Check { puzzle: String },
    /// Translate a puzzle's statements and save transcripts and candidates.
    Translate {
        puzzle: String,
        #[arg(long, value_enum, default_value = "whole")]
        mode: ModeArg,
        #[command(flatten)]
        source: SourceArgs,
        /// Also ask the puzzle directly and record the answer.
        #[arg(long)]
        direct_qa: bool,
    },
    /// Score candidates against gold and run them end to end.
    Eval {
        puzzle: String,
        #[arg(long, value_enum, default_value = "whole")]
        mode: ModeArg,
        /// Candidates file from an earlier `translate` run.
        #[arg(long, conflicts_with_all = ["mock", "live"])]
        candidates: Option<PathBuf>,
        #[command(flatten)]
        source: SourceArgs,
        #[arg(long, value_enum, default_value = "table")]
        format: FormatArg,
    },
    /// Write the DIMACS CNF of the gold KB conjoined with a negated query.
    ExportDimacs {
        puzzle: String,
        /// Zero-based index into the puzzle's queries.
        query: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct SourceArgs {
    /// Mock script (JSON), or `gold` to answer with the gold encodings.
    #[arg(long, conflicts_with = "live")]
    pub mock: Option<String>,
    /// Call the configured chat-completion endpoint.
    #[arg(long)]
    pub live: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Whole,
    Stepwise,
}

impl From<ModeArg> for TranslationMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Whole => TranslationMode::WholeText,
            ModeArg::Stepwise => TranslationMode::StatementAtATime,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum FormatArg {
    Table,
    Json,
}

/// A failed command: exit status and message for stderr.
struct Failure(i32, String);

type CmdResult = Result<i32, Failure>;

fn usage(msg: impl Into<String>) -> Failure {
    Failure(EXIT_USAGE, msg.into())
}

/// Parses `args` (including the program name) and runs the command,
/// writing to `out` and `err`. Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if code == EXIT_OK {
                let _ = write!(out, "{text}");
            } else {
                let _ = write!(err, "{text}");
            }
            return code;
        }
    };
    match dispatch(&cli, out, err) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let cfg = load_config(cli.config.as_deref())?;
    match &cli.command {
        Command::Solve { puzzle } => solve(cli, puzzle, out),
        Command::Check { puzzle } => check(cli, puzzle, out),
        Command::Translate {
            puzzle,
            mode,
            source,
            direct_qa,
        } => translate(cli, &cfg, puzzle, (*mode).into(), source, *direct_qa, out, err),
        Command::Eval {
            puzzle,
            mode,
            candidates,
            source,
            format,
        } => eval(cli, &cfg, puzzle, (*mode).into(), candidates.as_deref(), source, *format, out, err),
        Command::ExportDimacs { puzzle, query, output } => {
            export_dimacs(cli, puzzle, *query, output.as_deref(), out, err)
        }
    }
}

fn load_config(path: Option<&Path>) -> Result<TranslatorConfig, Failure> {
    match path {
        None => Ok(TranslatorConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| usage(format!("{}: {e}", p.display())))?;
            TranslatorConfig::from_json(&text).map_err(|e| usage(format!("{}: {e}", p.display())))
        }
    }
}

/// Resolves a puzzle argument: an existing file, then `<corpus-dir>/<name>.json`,
/// then a bundled puzzle name.
fn resolve_puzzle(cli: &Cli, arg: &str) -> Result<Result<Puzzle, corpus::CorpusError>, Failure> {
    let direct = Path::new(arg);
    if direct.is_file() {
        return Ok(corpus::load_puzzle(direct));
    }
    let in_dir = cli.corpus_dir.join(format!("{arg}.json"));
    if in_dir.is_file() {
        return Ok(corpus::load_puzzle(in_dir));
    }
    if corpus::bundled_source(arg).is_some() {
        return Ok(corpus::bundled_puzzle(arg));
    }
    Err(usage(format!(
        "no puzzle file or bundled puzzle named {arg:?} (bundled: {})",
        corpus::bundled_names().join(", ")
    )))
}

fn load(cli: &Cli, arg: &str) -> Result<Puzzle, Failure> {
    resolve_puzzle(cli, arg)?.map_err(|e| Failure(load_error_code(&e), e.to_string()))
}

fn load_error_code(e: &corpus::CorpusError) -> i32 {
    match e {
        corpus::CorpusError::Io { .. } => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

fn io_err(e: std::io::Error) -> Failure {
    usage(e.to_string())
}

fn describe(p: &Puzzle, target: &Formula, question: &str) -> String {
    match target {
        Formula::Atom(id) => p
            .vocab
            .get(id)
            .and_then(|s| s.gloss())
            .unwrap_or(question)
            .to_string(),
        _ => question.to_string(),
    }
}

fn solve(cli: &Cli, arg: &str, out: &mut dyn Write) -> CmdResult {
    let p = load(cli, arg)?;
    if p.independent {
        let mut all = true;
        writeln!(out, "{}: independent statements", p.name).map_err(io_err)?;
        for s in &p.statements {
            let ok = sat::is_satisfiable(&s.gold);
            all &= ok;
            writeln!(out, "{}: {}", s.id, if ok { "consistent" } else { "inconsistent" }).map_err(io_err)?;
        }
        return Ok(if all { EXIT_OK } else { EXIT_FAILURE });
    }
    let kb = p.gold_kb().map_err(|e| Failure(EXIT_FAILURE, e.to_string()))?;
    if !reasoner::consistent(&kb) {
        writeln!(out, "KB inconsistent").map_err(io_err)?;
        return Ok(EXIT_FAILURE);
    }
    for q in &p.queries {
        let status = reasoner::classify(&kb, &q.target).map_err(|e| Failure(EXIT_FAILURE, e.to_string()))?;
        writeln!(out, "{}: {} ({})", print(&q.target), status, describe(&p, &q.target, &q.question))
            .map_err(io_err)?;
    }
    let bb = reasoner::backbone(&kb).map_err(|e| Failure(EXIT_FAILURE, e.to_string()))?;
    writeln!(out, "\nbackbone:").map_err(io_err)?;
    let width = bb.entries.iter().map(|(id, _)| id.len()).max().unwrap_or(0);
    for (id, pol) in &bb.entries {
        let gloss = p.vocab.get(id).and_then(|s| s.gloss()).unwrap_or("");
        writeln!(out, "  {id:<width$}  {:<11}  {gloss}", pol.to_string())
            .map_err(io_err)?;
    }
    Ok(EXIT_OK)
}

fn check(cli: &Cli, arg: &str, out: &mut dyn Write) -> CmdResult {
    let p = match resolve_puzzle(cli, arg)? {
        Ok(p) => p,
        Err(e) => {
            writeln!(out, "{arg}: {e}").map_err(io_err)?;
            return Ok(load_error_code(&e));
        }
    };
    let violations = corpus::validate_puzzle(&p);
    if violations.is_empty() {
        writeln!(out, "{}: ok", p.name).map_err(io_err)?;
        return Ok(EXIT_OK);
    }
    for v in &violations {
        writeln!(out, "{}: {v}", p.name).map_err(io_err)?;
    }
    Ok(EXIT_FAILURE)
}

/// Builds the translator selected by `--mock` / `--live`.
fn client_for(p: &Puzzle, cfg: &TranslatorConfig, source: &SourceArgs) -> Result<Box<dyn Translator>, Failure> {
    match (&source.mock, source.live) {
        (Some(m), _) if m == "gold" => Ok(Box::new(MockTranslator::gold(p))),
        (Some(path), _) => {
            let script = MockScript::load(path).map_err(|e| usage(format!("{path}: {e}")))?;
            Ok(Box::new(MockTranslator::new(p, script)))
        }
        (None, true) => HttpTranslator::from_config(cfg)
            .map(|c| Box::new(c) as Box<dyn Translator>)
            .map_err(|e| usage(format!("AuthError: {e}"))),
        (None, false) => Err(usage("choose a translator with --mock <script|gold> or --live")),
    }
}

#[allow(clippy::too_many_arguments)]
fn translate(
    cli: &Cli,
    cfg: &TranslatorConfig,
    arg: &str,
    mode: TranslationMode,
    source: &SourceArgs,
    direct_qa: bool,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let p = load(cli, arg)?;
    let client = client_for(&p, cfg, source)?;
    let run = translator::translate(&p, mode, cfg, client.as_ref()).map_err(|e| usage(e.to_string()))?;
    let dir = RunDir::create(&cli.runs_dir).map_err(io_err)?;
    let transcript = dir.append(&p.name, mode.label(), &run.transcripts).map_err(io_err)?;
    let file = CandidatesFile::new(&p.name, Some(mode), Some(client.model_name().to_string()), &run.candidates);
    let candidates_path = dir.path().join(format!("{}.{}.candidates.json", p.name, mode.label()));
    std::fs::write(&candidates_path, file.to_json()).map_err(io_err)?;
    if direct_qa {
        let record = translator::direct_qa(&p, cfg, client.as_ref()).map_err(|e| usage(e.to_string()))?;
        dir.append(&p.name, "direct-qa", &[record]).map_err(io_err)?;
    }

    let parsed = run.candidates.iter().filter(|c| c.formula().is_some()).count();
    writeln!(out, "{} candidates, {} parsed", run.candidates.len(), parsed).map_err(io_err)?;
    for c in &run.candidates {
        match c.failure() {
            Some(f) => writeln!(out, "  {}: {} ({})", c.statement_id, f.kind, f.detail),
            None if cli.verbose > 0 => writeln!(out, "  {}: {}", c.statement_id, print(c.formula().unwrap())),
            None => Ok(()),
        }
        .map_err(io_err)?;
    }
    writeln!(out, "transcripts: {}", transcript.display()).map_err(io_err)?;
    writeln!(out, "candidates: {}", candidates_path.display()).map_err(io_err)?;
    let request_failures = run
        .candidates
        .iter()
        .filter_map(|c| c.failure())
        .filter(|f| {
            matches!(
                f.kind,
                FailureKind::TransportError | FailureKind::AuthError | FailureKind::TimeoutError
            )
        })
        .count();
    if request_failures > 0 {
        writeln!(err, "{request_failures} request(s) failed").map_err(io_err)?;
        return Ok(EXIT_FAILURE);
    }
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn eval(
    cli: &Cli,
    cfg: &TranslatorConfig,
    arg: &str,
    mode: TranslationMode,
    candidates: Option<&Path>,
    source: &SourceArgs,
    format: FormatArg,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let p = load(cli, arg)?;
    let (mode, cands) = match candidates {
        Some(path) => {
            let file = CandidatesFile::load(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            if file.puzzle != p.name {
                writeln!(err, "warning: candidates were produced for {:?}", file.puzzle).map_err(io_err)?;
            }
            (file.mode.unwrap_or(mode), file.to_candidates(&p))
        }
        None => {
            let client = client_for(&p, cfg, source)?;
            let run = translator::translate(&p, mode, cfg, client.as_ref()).map_err(|e| usage(e.to_string()))?;
            if source.live {
                let dir = RunDir::create(&cli.runs_dir).map_err(io_err)?;
                dir.append(&p.name, mode.label(), &run.transcripts).map_err(io_err)?;
            }
            (mode, run.candidates)
        }
    };
    let score = evaluator::score_puzzle(&cands, &p, mode).map_err(|e| Failure(EXIT_FAILURE, e.to_string()))?;
    let e2e = evaluator::assess_candidates(&p, mode, &cands).map_err(|e| Failure(EXIT_FAILURE, e.to_string()))?;
    let verdict = e2e.verdict;
    let reports = [Report::Score(score.clone()), Report::EndToEnd(e2e)];
    let format = match format {
        FormatArg::Table => ReportFormat::Table,
        FormatArg::Json => ReportFormat::Json,
    };
    write!(out, "{}", evaluator::render_report(&reports, format)).map_err(io_err)?;
    if cli.verbose > 0 && matches!(format, ReportFormat::Table) {
        writeln!(out).map_err(io_err)?;
        for s in &score.scores {
            let mark = if s.correct { "correct" } else { "wrong" };
            let disputed = if s.disputed { " (disputed)" } else { "" };
            writeln!(out, "  {:>3}  {:<7}  {}{}", s.statement_id, mark, s.relation, disputed).map_err(io_err)?;
        }
    }
    Ok(if verdict == evaluator::Verdict::AllCorrect {
        EXIT_OK
    } else {
        EXIT_FAILURE
    })
}

fn export_dimacs(
    cli: &Cli,
    arg: &str,
    index: usize,
    output: Option<&Path>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let p = load(cli, arg)?;
    let q = p
        .queries
        .get(index)
        .ok_or_else(|| usage(format!("{} has {} queries; index {index} is out of range", p.name, p.queries.len())))?;
    let kb: KnowledgeBase = p.gold_kb().map_err(|e| Failure(EXIT_FAILURE, e.to_string()))?;
    let f = Formula::And(vec![kb.conjunction(), Formula::not(q.target.clone())]);
    let ids: Vec<String> = p.vocab.ids().map(String::from).collect();
    let cnf = sat::to_cnf_over(&f, &ids).map_err(|e| Failure(EXIT_FAILURE, e.to_string()))?;
    let verdict = if sat::solve(&cnf, &[]).is_sat() { "SAT" } else { "UNSAT" };
    let comments = vec![
        format!("{}: knowledge base AND NOT ({})", p.name, print(&q.target)),
        "UNSAT means the query is entailed".to_string(),
    ];
    let text = sat::write_dimacs(&cnf, &comments);
    match output {
        Some(path) => std::fs::write(path, &text).map_err(|e| usage(format!("{}: {e}", path.display())))?,
        None => write!(out, "{text}").map_err(io_err)?,
    }
    writeln!(err, "internal solver: {verdict}").map_err(io_err)?;
    Ok(EXIT_OK)
}
