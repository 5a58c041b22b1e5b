mod bench;
mod error;
mod input;
mod script;

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use banana::{diff, Diagram, Subdiagram, Workspace};
use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::error::CliError;
use crate::script::{Replay, ReplayOptions};

/// Persistence diagrams of time series, kept up to date under edits.
#[derive(Parser)]
#[command(name = "banana-ph", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build the diagram of a list of values.
    Build {
        input: PathBuf,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
        /// Keep the points spanned by the artificial end items.
        #[arg(long)]
        include_hook_points: bool,
        /// Read this CSV column (header name or 0-based index).
        #[arg(long)]
        column: Option<String>,
        /// Also write the points as CSV rows for plotting.
        #[arg(long)]
        points_csv: Option<PathBuf>,
    },
    /// Replay an edit script and write the resulting diagrams and run log.
    Replay {
        input: PathBuf,
        script: PathBuf,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
        /// Validate and compare with a rebuild after every mutating command.
        #[arg(long)]
        debug_validate: bool,
        #[arg(long)]
        include_hook_points: bool,
        #[arg(long)]
        column: Option<String>,
    },
    /// Measure operation costs on a generated list.
    Bench {
        /// random-walk, uniform, damped-sine or nested-mirrors.
        #[arg(long = "gen")]
        generator: String,
        #[arg(long)]
        n: usize,
        /// value-jitter, insert-delete or cut-glue.
        #[arg(long)]
        workload: String,
        #[arg(short = 'o', long = "out")]
        out: Option<PathBuf>,
        /// Number of measured operations.
        #[arg(long, default_value_t = 200)]
        ops: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Print the size of the symmetric difference of two diagram documents.
    Diff { d1: PathBuf, d2: PathBuf },
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("banana-ph: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.cmd {
        Cmd::Build { input, out, include_hook_points, column, points_csv } => {
            let values = input::read_values(&input, column.as_deref())?;
            if values.len() < 2 {
                return Err(CliError::Size { what: input.display().to_string(), got: values.len() });
            }
            let mut ws = Workspace::new();
            let l = ws.build(&values).map_err(|e| CliError::Usage(e.to_string()))?;
            let d = ws.diagram_with(l, include_hook_points);
            if let Some(path) = points_csv {
                write_text(&path, &points_csv_text(&d))?;
            }
            write_json(out.as_deref(), &d.to_json(json!({ "items": values.len() })))
        }
        Cmd::Replay { input, script, out, debug_validate, include_hook_points, column } => {
            let values = input::read_values(&input, column.as_deref())?;
            if values.len() < 2 {
                return Err(CliError::Size { what: input.display().to_string(), got: values.len() });
            }
            let lines = script::parse(&script, &input::read_to_string(&script)?)?;
            let mut replay = Replay::new(&values, &script, ReplayOptions { debug_validate, include_hook_points })?;
            replay.run(&lines)?;
            write_json(out.as_deref(), &replay.document())
        }
        Cmd::Bench { generator, n, workload, out, ops, seed } => {
            let report = bench::run(&bench::BenchConfig { generator, n, workload, ops, seed })?;
            let v = serde_json::to_value(&report).expect("report serializes");
            write_json(out.as_deref(), &v)
        }
        Cmd::Diff { d1, d2 } => {
            let (a, b) = (read_diagram(&d1)?, read_diagram(&d2)?);
            println!("{}", diff(&a, &b));
            Ok(())
        }
    }
}

fn read_diagram(path: &Path) -> Result<Diagram, CliError> {
    let bad = |msg: String| CliError::Parse { path: path.to_owned(), line: 1, msg };
    let v: Value = serde_json::from_str(&input::read_to_string(path)?).map_err(|e| CliError::Parse {
        path: path.to_owned(),
        line: e.line(),
        msg: e.to_string(),
    })?;
    Diagram::from_json(&v).ok_or_else(|| bad("not a diagram document".into()))
}

fn points_csv_text(d: &Diagram) -> String {
    let mut s = String::from("subdiagram,birth,death,birth_eps,death_eps,birth_item,death_item\n");
    for p in &d.points {
        let sub = match p.sub {
            Subdiagram::Ordinary => "ordinary",
            Subdiagram::Relative => "relative",
            Subdiagram::Essential => "essential",
        };
        s += &format!(
            "{sub},{},{},{},{},{},{}\n",
            p.birth.real, p.death.real, p.birth.eps, p.death.eps, p.birth_item, p.death_item
        );
    }
    s
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|source| CliError::Io { path: path.to_owned(), source })
}

fn write_json(out: Option<&Path>, v: &Value) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(v).expect("json renders") + "\n";
    match out {
        Some(path) => write_text(path, &text),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io { path: PathBuf::from("<stdout>"), source }),
    }
}
