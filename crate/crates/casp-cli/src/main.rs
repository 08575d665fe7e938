//! Command-line front end: solve, focus, transform, QBF-check, validate, and
//! generate communicating answer set programs.
//!
//! Output is canonical and byte-identical for identical inputs and flags;
//! timing is only included when explicitly requested. Exit codes: 0 results or
//! a true verdict, 1 a false verdict, 2 parse/validation/usage errors, 3 the
//! search-size bound was exceeded, 4 the two QBF decision paths disagree.

use std::path::PathBuf;
use std::process::ExitCode;

use casp::engine::{EngineError, EngineOptions, QueryMode};
use casp::focus::{focused_answer_sets, focused_query};
use casp::gen::{random_program, random_qbf, GenConfig, QbfGenConfig};
use casp::model::{
    CommunicatingProgram, ComponentName, ComponentProgram, FocusSequence, Interpretation,
    ProgramClass, Rule, SituatedLiteral,
};
use casp::oracle::qbf_eval;
use casp::parser::{parse_program, parse_qbf, parse_situated_literal};
use casp::render_program;
use casp::transforms::{compile_qbf, simulate_naf, to_normal};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

const DEFAULT_BOUND: usize = 24;
const QBF_BOUND: usize = 64;

#[derive(Parser)]
#[command(
    name = "casp",
    version,
    about = "Solver for communicating answer set programs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Enumerate (focused) answer sets or decide a query
    Solve(SolveArgs),
    /// Rewrite a program and print the result
    Transform(TransformArgs),
    /// Decide validity of a quantified boolean formula
    Qbf(QbfArgs),
    /// Check a program for structural violations
    Validate { file: PathBuf },
    /// Emit a pseudo-random test program or formula
    Gen(GenArgs),
}

#[derive(Args)]
struct SolveArgs {
    file: PathBuf,
    /// Comma-separated component names to minimize over, in order
    #[arg(long)]
    focus: Option<String>,
    #[arg(long, value_enum, default_value_t = Mode::Enumerate)]
    mode: Mode,
    /// Query literal `Q:l` for brave/cautious modes
    #[arg(long)]
    literal: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Cap on candidate situated literals searched over
    #[arg(long, default_value_t = DEFAULT_BOUND)]
    bound: usize,
    /// Worker threads for the candidate search
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    /// Search the full signed base instead of head-supported candidates
    #[arg(long)]
    no_prune: bool,
    /// Include wall-clock timing in the output (breaks byte-identity)
    #[arg(long)]
    timing: bool,
}

#[derive(Args)]
struct TransformArgs {
    file: PathBuf,
    #[arg(long, value_enum)]
    kind: TransformKind,
    /// Write the result here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct QbfArgs {
    /// Path to a formula file, or the formula itself
    input: String,
    #[arg(long, value_enum, default_value_t = Via::Both)]
    via: Via,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum, default_value_t = GenKind::Program)]
    kind: GenKind,
    /// Generator seed; falls back to the CASP_SEED environment variable
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Enumerate,
    Exists,
    Brave,
    Cautious,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TransformKind {
    NafSim,
    ToNormal,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Via {
    Asp,
    Oracle,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenKind {
    Program,
    Qbf,
}

/// A diagnostic paired with the process exit code it warrants.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

fn engine_failure(e: EngineError) -> Failure {
    let code = match e {
        EngineError::BoundExceeded { .. } => 3,
        _ => 2,
    };
    Failure::new(code, format!("error: {e}"))
}

#[derive(Serialize)]
struct ProgramSummary {
    components: Vec<String>,
    class: String,
    herbrand_base_size: usize,
}

impl ProgramSummary {
    fn of(p: &CommunicatingProgram) -> Self {
        ProgramSummary {
            components: p.component_names().map(|n| n.to_string()).collect(),
            class: p.class().to_string(),
            herbrand_base_size: p.herbrand_base().len(),
        }
    }
}

#[derive(Serialize)]
#[serde(untagged)]
enum Payload {
    AnswerSets { answer_sets: Vec<Vec<String>> },
    Verdict { verdict: bool },
}

#[derive(Serialize)]
struct OutputDocument {
    program: ProgramSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    focus: Option<Vec<String>>,
    result: Payload,
    #[serde(skip_serializing_if = "Option::is_none")]
    timing_ms: Option<u128>,
}

impl OutputDocument {
    fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "components: {}\n",
            self.program.components.join(", ")
        ));
        out.push_str(&format!("class: {}\n", self.program.class));
        out.push_str(&format!(
            "herbrand base size: {}\n",
            self.program.herbrand_base_size
        ));
        if let Some(f) = &self.focus {
            out.push_str(&format!("focus: {}\n", f.join(", ")));
        }
        match &self.result {
            Payload::AnswerSets { answer_sets } => {
                out.push_str(&format!("answer sets: {}\n", answer_sets.len()));
                for (i, m) in answer_sets.iter().enumerate() {
                    out.push_str(&format!("answer set {}: {{{}}}\n", i + 1, m.join(", ")));
                }
            }
            Payload::Verdict { verdict } => {
                out.push_str(&format!("verdict: {verdict}\n"));
            }
        }
        if let Some(ms) = self.timing_ms {
            out.push_str(&format!("timing ms: {ms}\n"));
        }
        out
    }
}

fn emit(doc: &OutputDocument, format: Format) {
    match format {
        Format::Text => print!("{}", doc.render_text()),
        Format::Json => println!("{}", serde_json::to_string_pretty(doc).unwrap()),
    }
}

fn read_file(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .map_err(|e| Failure::new(2, format!("error: cannot read {}: {e}", path.display())))
}

fn load_program(path: &PathBuf) -> Result<CommunicatingProgram, Failure> {
    let text = read_file(path)?;
    let p = parse_program(&text).map_err(|e| Failure::new(2, format!("error: {e}")))?;
    let violations = p.validate();
    if !violations.is_empty() {
        let lines: Vec<String> = violations.iter().map(|v| format!("error: {v}")).collect();
        return Err(Failure::new(2, lines.join("\n")));
    }
    Ok(p)
}

fn parse_focus(list: Option<&str>) -> Result<FocusSequence, Failure> {
    let mut names = Vec::new();
    if let Some(list) = list {
        for part in list.split(',') {
            let part = part.trim();
            names.push(
                ComponentName::new(part)
                    .map_err(|e| Failure::new(2, format!("error: bad focus component: {e}")))?,
            );
        }
    }
    Ok(FocusSequence(names))
}

fn interpretation_strings(m: &Interpretation) -> Vec<String> {
    m.literals().iter().map(|l| l.to_string()).collect()
}

fn cmd_solve(args: &SolveArgs) -> Result<u8, Failure> {
    let p = load_program(&args.file)?;
    let focus = parse_focus(args.focus.as_deref())?;
    if args.bound > DEFAULT_BOUND {
        eprintln!(
            "warning: bound {} exceeds the default {DEFAULT_BOUND}; search cost grows exponentially with it",
            args.bound
        );
    }
    let opts = EngineOptions {
        bound: args.bound,
        prune: !args.no_prune,
        jobs: args.jobs.max(1),
        ..EngineOptions::default()
    };
    let literal: Option<SituatedLiteral> = match &args.literal {
        Some(text) => Some(
            parse_situated_literal(text)
                .map_err(|e| Failure::new(2, format!("error: bad query literal: {e}")))?,
        ),
        None => None,
    };
    let start = std::time::Instant::now();
    let (payload, exit) = match args.mode {
        Mode::Enumerate => {
            let sets = focused_answer_sets(&p, &focus, &opts).map_err(engine_failure)?;
            let answer_sets = sets.iter().map(interpretation_strings).collect();
            (Payload::AnswerSets { answer_sets }, 0)
        }
        mode => {
            let query_mode = match mode {
                Mode::Exists => QueryMode::Exists,
                Mode::Brave => QueryMode::Brave,
                Mode::Cautious => QueryMode::Cautious,
                Mode::Enumerate => unreachable!(),
            };
            if query_mode != QueryMode::Exists && literal.is_none() {
                return Err(Failure::new(
                    2,
                    "error: --literal Q:l is required for brave/cautious queries",
                ));
            }
            let verdict = focused_query(&p, &focus, query_mode, literal.as_ref(), &opts)
                .map_err(engine_failure)?;
            (Payload::Verdict { verdict }, u8::from(!verdict))
        }
    };
    let doc = OutputDocument {
        program: ProgramSummary::of(&p),
        focus: if focus.0.is_empty() {
            None
        } else {
            Some(focus.0.iter().map(|n| n.to_string()).collect())
        },
        result: payload,
        timing_ms: args.timing.then(|| start.elapsed().as_millis()),
    };
    emit(&doc, args.format);
    Ok(exit)
}

fn cmd_transform(args: &TransformArgs) -> Result<u8, Failure> {
    let p = load_program(&args.file)?;
    let (label, rendered) = match args.kind {
        TransformKind::NafSim => {
            if p.class() == ProgramClass::Disjunctive {
                return Err(Failure::new(
                    2,
                    "error: naf-sim requires a simple or normal program; input is disjunctive",
                ));
            }
            let (sim, _, _) = simulate_naf(&p);
            ("naf-sim", render_program(&sim))
        }
        TransformKind::ToNormal => {
            let (flat, _) = to_normal(&p);
            let name = ComponentName::new("Flat").unwrap();
            let rules = flat.rules.iter().map(|r| {
                Rule::new(
                    r.head
                        .iter()
                        .map(|l| SituatedLiteral::new(name.clone(), l.clone())),
                    r.body_pos
                        .iter()
                        .map(|l| SituatedLiteral::new(name.clone(), l.clone())),
                    r.body_neg
                        .iter()
                        .map(|l| SituatedLiteral::new(name.clone(), l.clone())),
                )
            });
            let wrapped = CommunicatingProgram::new([ComponentProgram::new(name.clone(), rules)]);
            ("to-normal", render_program(&wrapped))
        }
    };
    let header = format!(
        "% {label} rewrite of {}\n% fresh atoms use the reserved '__' prefix; reparse in relaxed mode\n",
        args.file.display()
    );
    let text = format!("{header}{rendered}");
    match &args.out {
        Some(path) => std::fs::write(path, &text)
            .map_err(|e| Failure::new(2, format!("error: cannot write {}: {e}", path.display())))?,
        None => print!("{text}"),
    }
    Ok(0)
}

#[derive(Serialize)]
struct QbfDocument {
    formula: String,
    via: QbfVerdicts,
    verdict: bool,
}

#[derive(Serialize)]
struct QbfVerdicts {
    #[serde(skip_serializing_if = "Option::is_none")]
    asp: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle: Option<bool>,
}

fn cmd_qbf(args: &QbfArgs) -> Result<u8, Failure> {
    let path = PathBuf::from(&args.input);
    let text = if path.is_file() {
        read_file(&path)?
    } else {
        args.input.clone()
    };
    let q = parse_qbf(text.trim()).map_err(|e| Failure::new(2, format!("error: {e}")))?;
    let asp = if matches!(args.via, Via::Asp | Via::Both) {
        let c = compile_qbf(&q);
        let opts = EngineOptions {
            bound: QBF_BOUND,
            ..EngineOptions::default()
        };
        Some(
            focused_query(&c.program, &c.focus, c.mode, Some(&c.literal), &opts)
                .map_err(engine_failure)?,
        )
    } else {
        None
    };
    let oracle = if matches!(args.via, Via::Oracle | Via::Both) {
        Some(qbf_eval(&q).map_err(|e| Failure::new(3, format!("error: {e}")))?)
    } else {
        None
    };
    if let (Some(a), Some(o)) = (asp, oracle) {
        if a != o {
            return Err(Failure::new(
                4,
                format!("error: compiled program says {a} but direct evaluation says {o}"),
            ));
        }
    }
    let verdict = asp.or(oracle).unwrap();
    let doc = QbfDocument {
        formula: q.to_string(),
        via: QbfVerdicts { asp, oracle },
        verdict,
    };
    match args.format {
        Format::Text => {
            if let Some(a) = asp {
                println!("via asp: {a}");
            }
            if let Some(o) = oracle {
                println!("via oracle: {o}");
            }
            println!("verdict: {verdict}");
        }
        Format::Json => println!("{}", serde_json::to_string_pretty(&doc).unwrap()),
    }
    Ok(u8::from(!verdict))
}

fn cmd_validate(file: &PathBuf) -> Result<u8, Failure> {
    let p = load_program(file)?;
    println!(
        "ok: {} components, class {}, herbrand base size {}",
        p.components().len(),
        p.class(),
        p.herbrand_base().len()
    );
    Ok(0)
}

fn cmd_gen(args: &GenArgs) -> Result<u8, Failure> {
    let seed = match args.seed {
        Some(s) => s,
        None => match std::env::var("CASP_SEED") {
            Ok(v) => v
                .parse()
                .map_err(|_| Failure::new(2, format!("error: bad CASP_SEED value {v:?}")))?,
            Err(_) => 0,
        },
    };
    match args.kind {
        GenKind::Program => {
            let p = random_program(seed, &GenConfig::default());
            print!("% seed: {seed}\n{}", render_program(&p));
        }
        GenKind::Qbf => {
            let q = random_qbf(seed, &QbfGenConfig::default());
            println!("% seed: {seed}\n{q}");
        }
    }
    Ok(0)
}

fn run(cli: &Cli) -> Result<u8, Failure> {
    match &cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Transform(args) => cmd_transform(args),
        Command::Qbf(args) => cmd_qbf(args),
        Command::Validate { file } => cmd_validate(file),
        Command::Gen(args) => cmd_gen(args),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("{}", f.message);
            ExitCode::from(f.code)
        }
    }
}
