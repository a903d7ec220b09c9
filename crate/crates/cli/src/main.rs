use std::collections::HashSet;
use std::io::{self, BufRead, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use orekit::counterexample::CxError;
use orekit::report::{verify_counterexample, RunOptions, Status, VerificationReport};
use orekit_cli::script::{check_names, parse_line, Line};
use orekit_cli::{parse_script, run_script, Interpreter};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(name = "orekit", version, about = "Exact computations in skew polynomial rings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(clap::Args)]
struct ReportArgs {
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Include per-check timings in JSON output.
    #[arg(long)]
    timing: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Certify the counterexample instance for a prime.
    VerifyCounterexample {
        #[arg(long, default_value_t = 2)]
        prime: u64,
        /// Series truncation for the slice check.
        #[arg(long)]
        truncation: Option<usize>,
        #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
        parallel: bool,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Run a script file.
    Check {
        file: PathBuf,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Read script statements interactively.
    Repl,
}

fn emit(report: &VerificationReport, args: &ReportArgs) -> ExitCode {
    let text = match args.format {
        Format::Text => report.to_text(),
        Format::Json => report.to_json(args.timing) + "\n",
    };
    let written = match &args.output {
        Some(path) => std::fs::write(path, text),
        None => io::stdout().write_all(text.as_bytes()),
    };
    if let Err(e) = written {
        eprintln!("error: cannot write report: {e}");
        return ExitCode::from(EXIT_USAGE);
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_FAIL)
    }
}

fn verify(prime: u64, truncation: Option<usize>, parallel: bool, args: &ReportArgs) -> ExitCode {
    let opts = RunOptions { truncation, parallel, ..Default::default() };
    match verify_counterexample(prime, &opts) {
        Ok(r) => emit(&r, args),
        Err(e @ (CxError::NotPrime(_) | CxError::UnsupportedPrime(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_FAIL)
        }
    }
}

fn check(file: &PathBuf, args: &ReportArgs) -> ExitCode {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {}: {e}", file.display());
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let script = match parse_script(&text) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{}: {e}", file.display());
            return ExitCode::from(EXIT_USAGE);
        }
    };
    let run = run_script(&script);
    for (line, value) in &run.output {
        eprintln!("line {line}: {value}");
    }
    emit(&run.report, args)
}

fn repl() -> ExitCode {
    let mut interp = Interpreter::new();
    let mut defined = HashSet::new();
    let stdin = io::stdin();
    let mut number = 0;
    let mut failed = false;
    loop {
        print!("orekit> ");
        let _ = io::stdout().flush();
        let mut buf = String::new();
        match stdin.lock().read_line(&mut buf) {
            Ok(0) => break,
            Ok(_) => {}
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_USAGE);
            }
        }
        number += 1;
        let trimmed = buf.trim();
        if trimmed == "quit" || trimmed == "exit" {
            break;
        }
        let stmt = match parse_line(&buf, number) {
            Ok(Some(s)) => s,
            Ok(None) => continue,
            Err(e) => {
                println!("{e}");
                continue;
            }
        };
        if let Err(e) = check_names(&stmt, &buf, number, &defined) {
            println!("{e}");
            continue;
        }
        let step = interp.exec(&Line { number, stmt: stmt.clone() });
        if let Some(v) = step.output {
            println!("{v}");
        }
        match step.record {
            Some(r) => {
                let verdict = r.status.as_str();
                match &r.witness {
                    Some(w) => println!("{verdict}: {w}"),
                    None => println!("{verdict}"),
                }
                if r.status == Status::Fail {
                    failed |= matches!(stmt, orekit_cli::Stmt::Assert(_));
                    continue;
                }
            }
            None => {}
        }
        if let Some(n) = stmt.defines() {
            defined.insert(n.to_string());
        }
    }
    println!();
    if failed {
        ExitCode::from(EXIT_FAIL)
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    match &cli.command {
        Command::VerifyCounterexample { prime, truncation, parallel, report } => {
            verify(*prime, *truncation, *parallel, report)
        }
        Command::Check { file, report } => check(file, report),
        Command::Repl => repl(),
    }
}
