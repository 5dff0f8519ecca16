//! `lpm`: check, translate and analyze `.lpm` proof libraries.
//!
//! Exit codes: 0 success, 1 type error, 2 parse or I/O error, 3 content
//! outside the translatable fragment, 4 step budget exhausted, 5 internal
//! error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use lpm_core::kernel::DEFAULT_STEP_BUDGET;
use lpm_core::signature::{entry_labels, Entry, SignatureError, Theory};
use lpm_core::syntax::{parse_source, print_entries, SourceFile, Span};
use lpm_core::theories::{coc_theory, stt_theory};
use lpm_core::translate::{Feature, FragmentReport, LowerMode, TranslateError, Translator};

const OK: u8 = 0;
const TYPE_ERROR: u8 = 1;
const INPUT_ERROR: u8 = 2;
const FRAGMENT_ERROR: u8 = 3;
const BUDGET_ERROR: u8 = 4;
const INTERNAL_ERROR: u8 = 5;

#[derive(Parser, Debug)]
#[command(
    name = "lpm",
    version,
    about = "Checker and translator for .lpm proof libraries"
)]
struct Cli {
    /// Base theory: `stt`, `coc`, or the path of a `.lpm` theory file.
    #[arg(long, global = true)]
    theory: Option<String>,

    /// Maximum number of reduction steps per checked entry.
    #[arg(long, global = true, env = "LPM_STEP_BUDGET", default_value_t = DEFAULT_STEP_BUDGET)]
    step_budget: u64,

    /// Check independent entries concurrently.
    #[arg(long, global = true)]
    parallel: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check files, in order, on top of the selected theory.
    Check {
        #[arg(required = true)]
        files: Vec<PathBuf>,
    },
    /// Translate a library between the STT and CoC encodings.
    Translate {
        #[arg(long, value_enum)]
        direction: Direction,
        file: PathBuf,
        /// Output file (default: standard output).
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// Lower the translatable part instead of failing (coc2stt).
        #[arg(long)]
        best_effort: bool,
        /// Write the fragment report here (coc2stt).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Report the CoC-only features each entry of a CoC library uses.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Tsv)]
        format: Format,
    },
    /// Count declarations, definitions and rules.
    Stats { file: PathBuf },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Direction {
    Stt2coc,
    Coc2stt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Tsv,
    Text,
}

/// A failed command: exit code and diagnostic.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure {
            code,
            message: message.into(),
        }
    }
}

type CmdResult = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = std::panic::catch_unwind(|| run(&cli));
    let code = match outcome {
        Ok(Ok(code)) => code,
        Ok(Err(failure)) => {
            eprintln!("error: {}", failure.message);
            failure.code
        }
        Err(_) => INTERNAL_ERROR,
    };
    let _ = io::stdout().flush();
    ExitCode::from(code)
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Check { files } => cmd_check(cli, files),
        Command::Translate {
            direction,
            file,
            output,
            best_effort,
            report,
        } => cmd_translate(
            cli,
            *direction,
            file,
            output.as_deref(),
            *best_effort,
            report.as_deref(),
        ),
        Command::Analyze { file, format } => cmd_analyze(cli, file, *format),
        Command::Stats { file } => cmd_stats(cli, file),
    }
}

fn read_source(path: &Path) -> Result<SourceFile, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(INPUT_ERROR, format!("{}: {e}", path.display())))?;
    parse_source(Some(path.to_path_buf()), &text)
        .map_err(|e| Failure::new(INPUT_ERROR, format!("{}:{e}", path.display())))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text)
            .map_err(|e| Failure::new(INPUT_ERROR, format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn signature_code(e: &SignatureError) -> u8 {
    if e.is_budget_exceeded() {
        BUDGET_ERROR
    } else {
        TYPE_ERROR
    }
}

fn locate(file: &SourceFile, span: Span) -> String {
    let path = file
        .path
        .as_ref()
        .map_or_else(|| "<input>".to_string(), |p| p.display().to_string());
    format!("{path}:{}", span.start)
}

/// Builds the base theory selected by `--theory` (default `stt`).
fn base_theory(cli: &Cli) -> Result<Theory, Failure> {
    let selector = cli.theory.as_deref().unwrap_or("stt");
    let mut theory = match selector {
        "stt" => stt_theory().extend("input"),
        "coc" => coc_theory().extend("input"),
        path => {
            let source = read_source(Path::new(path))?;
            let mut theory = Theory::new(path);
            theory.set_step_budget(cli.step_budget);
            for item in &source.items {
                theory.add_entry(item.entry.clone()).map_err(|e| {
                    Failure::new(
                        signature_code(&e),
                        format!(
                            "{}: theory entry does not check: {e}",
                            locate(&source, item.span)
                        ),
                    )
                })?;
            }
            theory
        }
    };
    theory.set_step_budget(cli.step_budget);
    Ok(theory)
}

fn cmd_check(cli: &Cli, files: &[PathBuf]) -> CmdResult {
    let sources = files
        .iter()
        .map(|f| read_source(f))
        .collect::<Result<Vec<_>, _>>()?;
    let items: Vec<(&SourceFile, &lpm_core::syntax::SourceEntry)> = sources
        .iter()
        .flat_map(|s| s.items.iter().map(move |item| (s, item)))
        .collect();
    let entries: Vec<Entry> = items.iter().map(|(_, item)| item.entry.clone()).collect();
    let labels = entry_labels(&entries);

    let mut theory = base_theory(cli)?;
    let results = theory.extend_checked(&entries, cli.parallel);
    let mut out = io::stdout().lock();
    for (i, result) in results.iter().enumerate() {
        match result {
            Ok(()) => {
                let _ = writeln!(out, "OK {}", labels[i]);
            }
            Err(e) => {
                let _ = writeln!(out, "FAIL {}", labels[i]);
                let (file, item) = items[i];
                return Err(Failure::new(
                    signature_code(e),
                    format!("{}: {e}", locate(file, item.span)),
                ));
            }
        }
    }
    Ok(OK)
}

fn translate_failure(e: TranslateError, source: &SourceFile, labels: &[String]) -> Failure {
    let code = if e.is_budget_exceeded() {
        BUDGET_ERROR
    } else {
        match &e {
            TranslateError::SourceCheck { .. } => TYPE_ERROR,
            TranslateError::FeatureViolation { .. } | TranslateError::UnsupportedRule { .. } => {
                FRAGMENT_ERROR
            }
            _ => INTERNAL_ERROR,
        }
    };
    let entry = match &e {
        TranslateError::SourceCheck { entry, .. }
        | TranslateError::LiftCheckFailure { entry, .. }
        | TranslateError::LowerCheckFailure { entry, .. }
        | TranslateError::UnsupportedRule { entry, .. } => Some(entry.as_str()),
        _ => None,
    };
    let location = entry
        .and_then(|name| labels.iter().position(|l| l == name))
        .and_then(|i| source.items.get(i))
        .map(|item| format!("{}: ", locate(source, item.span)))
        .unwrap_or_default();
    let prefix = if code == INTERNAL_ERROR {
        "internal error: "
    } else {
        ""
    };
    Failure::new(code, format!("{location}{prefix}{e}"))
}

fn cmd_translate(
    cli: &Cli,
    direction: Direction,
    file: &Path,
    output: Option<&Path>,
    best_effort: bool,
    report_path: Option<&Path>,
) -> CmdResult {
    let source = read_source(file)?;
    let entries = source.entries();
    let labels = entry_labels(&entries);
    let translator = Translator::new(cli.step_budget);
    match direction {
        Direction::Stt2coc => {
            let lifted = translator
                .lift_library(&entries)
                .map_err(|e| translate_failure(e, &source, &labels))?;
            write_output(output, &print_entries(&lifted))?;
            Ok(OK)
        }
        Direction::Coc2stt => {
            let mode = if best_effort {
                LowerMode::BestEffort
            } else {
                LowerMode::Strict
            };
            let outcome = translator
                .lower_library(&entries, mode)
                .map_err(|e| translate_failure(e, &source, &labels))?;
            let report = outcome.report.to_tsv();
            match report_path {
                Some(p) => write_output(Some(p), &report)?,
                None if !outcome.complete => eprint!("{}", outcome.report.blockers().to_tsv()),
                None => {}
            }
            if !outcome.complete && mode == LowerMode::Strict {
                let blockers = outcome.report.blockers();
                let names: Vec<&str> = blockers.rows.iter().map(|r| r.entry.as_str()).collect();
                return Err(Failure::new(
                    FRAGMENT_ERROR,
                    format!(
                        "{} entries outside the translatable fragment: {}",
                        names.len(),
                        names.join(", ")
                    ),
                ));
            }
            write_output(output, &print_entries(&outcome.entries))?;
            Ok(OK)
        }
    }
}

fn classify(cli: &Cli, source: &SourceFile) -> Result<FragmentReport, Failure> {
    let entries = source.entries();
    let labels = entry_labels(&entries);
    Translator::new(cli.step_budget)
        .classify_library(&entries)
        .map_err(|e| translate_failure(e, source, &labels))
}

fn cmd_analyze(cli: &Cli, file: &Path, format: Format) -> CmdResult {
    let source = read_source(file)?;
    let report = classify(cli, &source)?;
    let text = match format {
        Format::Tsv => report.to_tsv(),
        Format::Text => report.to_text(),
    };
    write_output(None, &text)?;
    Ok(OK)
}

fn cmd_stats(cli: &Cli, file: &Path) -> CmdResult {
    let source = read_source(file)?;
    let entries = source.entries();
    let count = |pred: fn(&Entry) -> bool| entries.iter().filter(|e| pred(e)).count();
    let mut text = format!(
        "declarations: {}, rules: {}\ndefinitions: {}\n",
        count(|e| matches!(e, Entry::Declaration { .. })),
        count(|e| matches!(e, Entry::Rule(_))),
        count(|e| matches!(e, Entry::Definition { .. })),
    );
    if cli.theory.as_deref() == Some("coc") {
        let report = classify(cli, &source)?;
        for f in Feature::ALL {
            text.push_str(&format!("{f}: {}\n", report.direct_tally(f)));
        }
        let blocked = report.rows.iter().filter(|r| !r.translatable).count();
        text.push_str(&format!(
            "translatable: {}/{}\n",
            report.rows.len() - blocked,
            report.rows.len()
        ));
    }
    write_output(None, &text)?;
    Ok(OK)
}
