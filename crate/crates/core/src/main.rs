use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use esnkit::cli::{self, Report, Status, Suite, Target, UsageError, VerifyOptions};

/// Finite inverse semigroups, ordered groupoids, cancellative categories and
/// affine systems: validation, conversion and exhaustive verification.
#[derive(Parser)]
#[command(name = "esnkit", version)]
struct Args {
    /// Print a JSON report instead of plain text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a file describes a valid structure (`-` reads standard input).
    Validate {
        #[arg(default_value = "-")]
        file: String,
    },
    /// Emit a member of a standard family of inverse semigroups.
    Gen {
        family: String,
        n: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Apply a construction and emit the result.
    Convert {
        #[arg(long, value_enum)]
        to: ConvertTarget,
        file: String,
    },
    /// Run a verification suite on one or more files.
    Verify {
        #[arg(value_enum)]
        suite: VerifySuite,
        #[arg(required = true)]
        files: Vec<String>,
        /// Run the heuristic triple search on semigroup inputs.
        #[arg(long)]
        search: bool,
        /// Root identity of a rooted category, by arrow name.
        #[arg(long)]
        root: Option<String>,
    },
    /// Search for an isomorphism between two structures of the same kind.
    Iso { a: String, b: String },
}

#[derive(Clone, Copy, ValueEnum)]
enum ConvertTarget {
    Groupoid,
    Semigroup,
    Semigroup0,
    Lcat,
    Rcat,
    Bar,
    J,
}

#[derive(Clone, Copy, ValueEnum)]
enum VerifySuite {
    Esn,
    PTheorem,
    Rooted,
    AffineUniversality,
    LemmaSuite,
}

fn run(args: &Args) -> Result<Report, UsageError> {
    match &args.command {
        Command::Validate { file } => cli::validate(file),
        Command::Gen { family, n, output } => {
            let text = cli::generate(family, *n)?;
            match output {
                Some(path) => {
                    cli::write_output(path, &text)?;
                    Ok(Report {
                        command: "gen".into(),
                        output: Some(String::new()),
                        ..Report::default()
                    })
                }
                None => Ok(Report {
                    command: "gen".into(),
                    output: Some(text),
                    ..Report::default()
                }),
            }
        }
        Command::Convert { to, file } => {
            let to = match to {
                ConvertTarget::Groupoid => Target::Groupoid,
                ConvertTarget::Semigroup => Target::Semigroup,
                ConvertTarget::Semigroup0 => Target::Semigroup0,
                ConvertTarget::Lcat => Target::Lcat,
                ConvertTarget::Rcat => Target::Rcat,
                ConvertTarget::Bar => Target::Bar,
                ConvertTarget::J => Target::J,
            };
            cli::convert(to, file)
        }
        Command::Verify { suite, files, search, root } => {
            let suite = match suite {
                VerifySuite::Esn => Suite::Esn,
                VerifySuite::PTheorem => Suite::PTheorem,
                VerifySuite::Rooted => Suite::Rooted,
                VerifySuite::AffineUniversality => Suite::AffineUniversality,
                VerifySuite::LemmaSuite => Suite::LemmaSuite,
            };
            let opts = VerifyOptions {
                search: *search,
                root: root.clone(),
            };
            cli::verify(suite, files, &opts)
        }
        Command::Iso { a, b } => cli::isomorphism(a, b),
    }
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            let code = if e.use_stderr() { Status::Usage as u8 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&args) {
        Ok(report) => {
            // structures go to stdout verbatim; --json wraps check reports only
            let text = if args.json && report.output.is_none() { report.json() } else { report.text() };
            print!("{text}");
            ExitCode::from(report.status() as u8)
        }
        Err(UsageError(msg)) => {
            eprintln!("esnkit: {msg}");
            ExitCode::from(Status::Usage as u8)
        }
    }
}
