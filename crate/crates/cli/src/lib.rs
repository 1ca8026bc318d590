//! Command-line front end: argument parsing, dispatch, atomic output and
//! run reports.

pub mod commands;
pub mod error;
pub mod schema;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;

pub use commands::{run_command, run_hj, Command, Outcome};
pub use error::CliError;

#[derive(Parser, Debug)]
#[command(name = "toroidal", version, about = "Exact toric resolution, quotients and torification")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Cmd,
}

#[derive(Subcommand, Debug)]
pub enum Cmd {
    /// Resolve a fan into a smooth fan with the same support.
    Resolve(IoArgs),
    /// Triangulate every cone of a fan.
    Simplicialize(IoArgs),
    /// Express a cone in the overlattice of a finite diagonal group.
    Quotient(IoArgs),
    /// Blow up the branch ideal of a node model.
    Separate(IoArgs),
    /// Blow up the torific ideal of a pre-toroidal situs and verify each chart.
    Torify(IoArgs),
    /// Check an input document and print diagnostics.
    Validate(IoArgs),
    /// Rays of the minimal resolution of the cyclic quotient of type (n, q).
    Hj {
        n: String,
        q: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args, Debug, Clone)]
pub struct IoArgs {
    /// Input file, or a directory of `.json` files.
    pub input: PathBuf,
    /// Output file (or directory when the input is a directory).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the trace or report next to the output.
    #[arg(long)]
    pub trace: bool,
    /// Worker threads for directory input.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
}

/// Path of the trace written next to `out`.
pub fn trace_path(out: &Path) -> PathBuf {
    let s = out.to_string_lossy();
    match s.strip_suffix(".json") {
        Some(stem) => PathBuf::from(format!("{stem}.trace.json")),
        None => PathBuf::from(format!("{s}.trace.json")),
    }
}

/// Writes through a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(&dir)?;
    tmp.write_all(contents.as_bytes())?;
    tmp.flush()?;
    tmp.persist(path).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(())
}

fn emit_report(command: &str, input: &str, elapsed_ms: u128, result: &Result<Outcome, CliError>, exit: i32) {
    let mut report = json!({
        "command": command,
        "input": input,
        "elapsed_ms": elapsed_ms as u64,
        "exit": exit,
    });
    match result {
        Ok(o) => {
            report["counts"] = json!(o.counts);
            report["verdicts"] = json!(o.verdicts);
            if let Some(f) = &o.failure {
                report["failure"] = json!(f);
            }
        }
        Err(e) => report["error"] = json!(e.to_string()),
    }
    eprintln!("{report}");
}

fn exit_code(result: &Result<Outcome, CliError>) -> i32 {
    match result {
        Ok(o) if o.failure.is_some() => 1,
        Ok(_) => 0,
        Err(e) => e.exit_code(),
    }
}

/// Writes the output (and trace) of one run; returns the final exit code.
fn deliver(result: Result<Outcome, CliError>, out: Option<&Path>, trace: bool) -> (Result<Outcome, CliError>, i32) {
    let result = result.and_then(|o| {
        match out {
            Some(p) => {
                write_atomic(p, &o.output)?;
                if trace {
                    if let Some(t) = &o.trace {
                        write_atomic(&trace_path(p), t)?;
                    }
                }
            }
            None => {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                lock.write_all(o.output.as_bytes())?;
            }
        }
        Ok(o)
    });
    let code = exit_code(&result);
    (result, code)
}

fn run_file(command: Command, input: &Path) -> Result<Outcome, CliError> {
    let text = std::fs::read_to_string(input).map_err(|e| CliError::Io(format!("{}: {e}", input.display())))?;
    run_command(command, &text)
}

fn run_io(command: Command, args: &IoArgs) -> i32 {
    if args.trace && args.out.is_none() {
        let err = Err(CliError::Parse("--trace requires --out".into()));
        let code = exit_code(&err);
        emit_report(command.name(), &args.input.display().to_string(), 0, &err, code);
        return code;
    }
    if args.input.is_dir() {
        return run_directory(command, args);
    }
    let start = Instant::now();
    let result = run_file(command, &args.input);
    let (result, code) = deliver(result, args.out.as_deref(), args.trace);
    emit_report(
        command.name(),
        &args.input.display().to_string(),
        start.elapsed().as_millis(),
        &result,
        code,
    );
    code
}

fn run_directory(command: Command, args: &IoArgs) -> i32 {
    let listing = std::fs::read_dir(&args.input).and_then(|rd| {
        rd.map(|e| e.map(|e| e.path()))
            .collect::<Result<Vec<_>, _>>()
    });
    let mut files: Vec<PathBuf> = match listing {
        Ok(v) => v
            .into_iter()
            .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == "json"))
            .collect(),
        Err(e) => {
            let err = Err(CliError::Io(e.to_string()));
            emit_report(command.name(), &args.input.display().to_string(), 0, &err, 4);
            return 4;
        }
    };
    files.sort();
    if let Some(dir) = &args.out {
        if let Err(e) = std::fs::create_dir_all(dir) {
            let err = Err(CliError::Io(e.to_string()));
            emit_report(command.name(), &dir.display().to_string(), 0, &err, 4);
            return 4;
        }
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(args.jobs.max(1)).build() {
        Ok(p) => p,
        Err(e) => {
            let err = Err(CliError::Io(e.to_string()));
            emit_report(command.name(), &args.input.display().to_string(), 0, &err, 4);
            return 4;
        }
    };
    let results: Vec<(Result<Outcome, CliError>, u128)> = pool.install(|| {
        files
            .par_iter()
            .map(|f| {
                let start = Instant::now();
                let r = run_file(command, f);
                (r, start.elapsed().as_millis())
            })
            .collect()
    });
    let mut worst = 0;
    for (file, (result, ms)) in files.iter().zip(results) {
        let out = args
            .out
            .as_ref()
            .map(|d| d.join(file.file_name().expect("file name")));
        let (result, code) = deliver(result, out.as_deref(), args.trace);
        emit_report(command.name(), &file.display().to_string(), ms, &result, code);
        worst = worst.max(code);
    }
    worst
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match cli.command {
        Cmd::Resolve(a) => run_io(Command::Resolve, &a),
        Cmd::Simplicialize(a) => run_io(Command::Simplicialize, &a),
        Cmd::Quotient(a) => run_io(Command::Quotient, &a),
        Cmd::Separate(a) => run_io(Command::Separate, &a),
        Cmd::Torify(a) => run_io(Command::Torify, &a),
        Cmd::Validate(a) => run_io(Command::Validate, &a),
        Cmd::Hj { n, q, out } => {
            let start = Instant::now();
            let (result, code) = deliver(run_hj(&n, &q), out.as_deref(), false);
            emit_report("hj", &format!("{n} {q}"), start.elapsed().as_millis(), &result, code);
            code
        }
    }
}
