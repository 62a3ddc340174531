use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use solvco::commands::{parse_explicit_rows, run, Command, Options, PipelineArg, RunReport, SubtorusArg};
use solvco::input::load_str;
use solvco::Error;

/// Exact de Rham and Dolbeault cohomology of compact solvmanifolds.
#[derive(Parser)]
#[command(name = "solvco", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check the presentation, the complex structure and the weight system.
    Validate(Common),
    /// Betti numbers via the modified algebra.
    Betti {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "auto")]
        subtorus: String,
    },
    /// Hodge numbers via one of the Dolbeault pipelines.
    Hodge {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = PipelineChoice::Auto)]
        pipeline: PipelineChoice,
        /// Subtorus used by the breve pipeline.
        #[arg(long, default_value = "auto")]
        subtorus: String,
    },
    /// Emit the modified algebra as a new input document.
    Modify {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value = "auto")]
        subtorus: String,
        /// Write the modified document here.
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

#[derive(clap::Args)]
struct Common {
    file: PathBuf,
    /// Write the report here instead of standard output.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum PipelineChoice {
    Dolbb,
    Split,
    Breve,
    Auto,
}

impl From<PipelineChoice> for PipelineArg {
    fn from(p: PipelineChoice) -> Self {
        match p {
            PipelineChoice::Dolbb => PipelineArg::Dolbb,
            PipelineChoice::Split => PipelineArg::Split,
            PipelineChoice::Breve => PipelineArg::Breve,
            PipelineChoice::Auto => PipelineArg::Auto,
        }
    }
}

fn read(path: &PathBuf) -> Result<String, Error> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

/// `auto`, `full` or `explicit:<file>`; explicit rows name declared characters.
fn subtorus_arg(spec: &str, input: &str) -> Result<SubtorusArg, Error> {
    match spec {
        "auto" => Ok(SubtorusArg::Auto),
        "full" => Ok(SubtorusArg::Full),
        _ => {
            let path = spec
                .strip_prefix("explicit:")
                .ok_or_else(|| Error::Parse(format!("unknown subtorus mode {spec:?}")))?;
            let problem = load_str(input)?;
            Ok(SubtorusArg::Explicit(parse_explicit_rows(&read(&path.into())?, &problem.declared)?))
        }
    }
}

fn emit(report: &RunReport, json: &Option<PathBuf>) -> Result<(), Error> {
    let text = report.to_json();
    match json {
        Some(path) => {
            std::fs::write(path, text + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
            eprintln!("{}: {:?} (exit {})", report.input.name, report.status, report.exit_code);
        }
        None => println!("{text}"),
    }
    Ok(())
}

fn main_inner(cli: Cli) -> Result<i32, Error> {
    let (command, common, subtorus, pipeline, emit_path) = match cli.command {
        Cmd::Validate(c) => (Command::Validate, c, None, None, None),
        Cmd::Betti { common, subtorus } => (Command::Betti, common, Some(subtorus), None, None),
        Cmd::Hodge { common, pipeline, subtorus } => (Command::Hodge, common, Some(subtorus), Some(pipeline), None),
        Cmd::Modify { common, subtorus, emit } => (Command::Modify, common, Some(subtorus), None, emit),
    };
    let text = read(&common.file)?;
    let mut opts = Options::default();
    if let Some(s) = subtorus {
        opts.subtorus = subtorus_arg(&s, &text)?;
    }
    if let Some(p) = pipeline {
        opts.pipeline = p.into();
    }
    let report = run(command, &text, &opts);
    emit(&report, &common.json)?;
    if let (Some(path), Some(m)) = (emit_path, report.modify()) {
        let doc = serde_json::to_string_pretty(&m.document).map_err(|e| Error::Internal(e.to_string()))?;
        std::fs::write(&path, doc + "\n").map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(report.exit_code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = std::env::var("SOLVCO_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        // ignore failure: the global pool may already exist
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    let code = match main_inner(cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    };
    ExitCode::from(code as u8)
}
