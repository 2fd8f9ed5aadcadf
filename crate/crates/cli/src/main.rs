//! `tashih`: grade Arabic answers from the command line, inspect the stemmer,
//! run the exam service, and regrade stored submissions.

mod batch;
mod input;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use tashih_core::{edit_distance, grade, similarity, trace_answer, GradingConfig, StemMode, StemTrace};
use tashih_service::ServiceConfig;
use tashih_store::ExamStore;

use crate::input::{read_text, CliError};

#[derive(Parser)]
#[command(name = "tashih", version, about = "Automatic grading of Arabic free-text answers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Grade one answer against a model answer and print the result as JSON.
    Grade {
        /// Student answer file, or `-` for standard input.
        #[arg(long)]
        student: String,
        #[arg(long)]
        model: PathBuf,
        #[arg(long, value_parser = parse_mode)]
        mode: StemMode,
        /// JSON document with optional `stemmer` and `policy` sections.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Grade every record of a CSV or JSON-lines file, one result line each.
    Batch {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_parser = parse_mode)]
        mode: StemMode,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Input format; guessed from the file extension when omitted.
        #[arg(long, value_enum)]
        format: Option<batch::Format>,
    },
    /// Show every stemming stage for a word (or each word of a phrase).
    Stem {
        #[arg(long)]
        word: String,
        #[arg(long, value_parser = parse_mode)]
        mode: StemMode,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Print the edit distance D and similarity S of two strings.
    Distance { first: String, second: String },
    /// Run the HTTP exam service.
    Serve {
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Re-grade an exam's stored submissions under its current policy.
    Regrade {
        #[arg(long)]
        exam: String,
        /// Store directory; defaults to `store_path` from `--config`.
        #[arg(long)]
        store: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn parse_mode(s: &str) -> Result<StemMode, String> {
    s.parse().map_err(|e: tashih_core::ConfigError| e.to_string())
}

fn load_settings(path: Option<&Path>) -> Result<GradingConfig, CliError> {
    let Some(path) = path else {
        return Ok(GradingConfig::default());
    };
    let text = read_text(path)?;
    let settings: GradingConfig =
        serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    settings
        .validate()
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    Ok(settings)
}

fn print_trace(word: &str, trace: &StemTrace) {
    println!("input: {word}");
    println!("cleanup: {}", trace.cleaned);
    for (i, w) in trace.words.iter().enumerate() {
        if i > 0 {
            println!();
        }
        if trace.words.len() > 1 {
            println!("word: {}", w.token.content);
        }
        if w.stop_word {
            println!("stop-word: removed");
            continue;
        }
        let show = |s: &Option<String>| s.clone().unwrap_or_default();
        println!("al: {}", show(&w.after_al));
        println!("normalize: {}", show(&w.normalized));
        match &w.after_prefix {
            Some(p) => println!("prefix: {p}"),
            None => println!("prefix: {} (light mode strips no prefix)", show(&w.normalized)),
        }
        if w.stem.is_none() {
            println!("dropped: shorter than min_remainder");
        }
        println!("suffix: {}", show(&w.after_suffix));
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Grade {
            student,
            model,
            mode,
            config,
        } => {
            let settings = load_settings(config.as_deref())?;
            let student = if student == "-" {
                input::read_stdin()?
            } else {
                read_text(Path::new(&student))?
            };
            let model = read_text(&model)?;
            let result = grade(&student, &model, mode, &settings.stemmer, &settings.policy)
                .map_err(|e| CliError::Record(e.to_string()))?;
            println!("{}", serde_json::to_string_pretty(&result).expect("grade results serialize"));
            Ok(ExitCode::SUCCESS)
        }
        Command::Batch {
            input,
            mode,
            config,
            format,
        } => {
            let settings = load_settings(config.as_deref())?;
            let format = format.unwrap_or_else(|| batch::Format::guess(&input));
            let text = read_text(&input)?;
            let failures = batch::run(&text, format, mode, &settings, &mut std::io::stdout().lock())?;
            Ok(if failures == 0 {
                ExitCode::SUCCESS
            } else {
                eprintln!("{failures} record(s) failed");
                ExitCode::from(1)
            })
        }
        Command::Stem { word, mode, config } => {
            let settings = load_settings(config.as_deref())?;
            print_trace(&word, &trace_answer(&word, mode, &settings.stemmer));
            Ok(ExitCode::SUCCESS)
        }
        Command::Distance { first, second } => {
            let d = edit_distance(&first, &second);
            let s = similarity::<f64>(&first, &second).value();
            println!("D={d} S={s}");
            Ok(ExitCode::SUCCESS)
        }
        Command::Serve { config } => {
            let config = ServiceConfig::load(config.as_deref()).map_err(|e| CliError::Usage(e.to_string()))?;
            tashih_service::init_logging();
            let runtime = tokio::runtime::Runtime::new()?;
            runtime
                .block_on(tashih_service::serve(config))
                .map_err(|e| CliError::Usage(e.to_string()))?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Regrade { exam, store, config } => {
            let dir = match (store, config) {
                (Some(dir), _) => dir,
                (None, Some(path)) => ServiceConfig::from_file(&path)
                    .map_err(|e| CliError::Usage(e.to_string()))?
                    .store_path,
                (None, None) => return Err(CliError::Usage("regrade needs --store or --config".into())),
            };
            let store = ExamStore::open(&dir).map_err(|e| CliError::Usage(e.to_string()))?;
            let outcomes = store
                .regrade(&exam)
                .map_err(|e| CliError::Record(e.to_string()))?;
            for o in &outcomes {
                println!("{}", serde_json::to_string(o).expect("outcomes serialize"));
            }
            let rewritten = outcomes.iter().filter(|o| o.rewritten).count();
            eprintln!("regraded {} submission(s), {rewritten} rewritten", outcomes.len());
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
