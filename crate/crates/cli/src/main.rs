use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use csa_cli::{execute, Bundle, CliError, Command, Report, RunOptions, Status};

#[derive(Parser)]
#[command(name = "csa", version, about = "Split, compare and extend automorphisms of cyclic algebras")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether an algebra is a matrix algebra and build the splitting.
    Split(Flags),
    /// Decide whether two cyclic algebras are isomorphic.
    Iso(Flags),
    /// Decide whether a base-field automorphism extends to the algebra.
    Extend(Flags),
    /// Re-check the witnesses stored in the problem file.
    Verify(Flags),
}

#[derive(Args)]
struct Flags {
    /// Problem file (JSON).
    #[arg(long)]
    file: PathBuf,
    #[arg(long)]
    algebra: Option<String>,
    #[arg(long)]
    left: Option<String>,
    #[arg(long)]
    right: Option<String>,
    /// Automorphism of the base field to extend.
    #[arg(long)]
    auto: Option<String>,
    /// Extra file of fields, automorphisms and hints merged into the problem.
    #[arg(long)]
    hints: Option<PathBuf>,
    /// Height bound for the bounded norm search (default 4).
    #[arg(long)]
    budget: Option<i64>,
    /// Treat the composite of the two fields as a field without a certificate.
    #[arg(long)]
    assert_disjoint: bool,
}

fn required(v: &Option<String>, flag: &'static str) -> Result<String, CliError> {
    v.clone().ok_or(CliError::MissingArgument(flag))
}

fn run(cmd: &Cmd) -> Result<Report, (&'static str, CliError)> {
    let (name, flags) = match cmd {
        Cmd::Split(f) => ("split", f),
        Cmd::Iso(f) => ("iso", f),
        Cmd::Extend(f) => ("extend", f),
        Cmd::Verify(f) => ("verify", f),
    };
    let fail = |e| (name, e);
    let command = match cmd {
        Cmd::Split(f) => Command::Split { algebra: required(&f.algebra, "algebra").map_err(fail)? },
        Cmd::Iso(f) => Command::Iso {
            left: required(&f.left, "left").map_err(fail)?,
            right: required(&f.right, "right").map_err(fail)?,
        },
        Cmd::Extend(f) => Command::Extend {
            algebra: required(&f.algebra, "algebra").map_err(fail)?,
            auto: required(&f.auto, "auto").map_err(fail)?,
        },
        Cmd::Verify(f) => Command::Verify { algebra: f.algebra.clone() },
    };
    let mut bundle = Bundle::load(&flags.file).map_err(fail)?;
    if let Some(h) = &flags.hints {
        bundle.merge_file(h).map_err(fail)?;
    }
    let opts = RunOptions { budget: flags.budget, assert_disjoint: flags.assert_disjoint };
    Ok(execute(&command, &bundle, &opts))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let report =
        run(&cli.command).unwrap_or_else(|(name, e)| Report::new(name, Status::Error).with_reason(e.to_string()));
    println!("{}", report.to_json());
    ExitCode::from(report.status.exit_code() as u8)
}
