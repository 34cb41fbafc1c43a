//! `fanostab`: cohomology tables, special-cohomology certificates, diagram
//! chases and stability verdicts from the command line.
//!
//! Exit codes: 0 success, 1 a sound negative answer (not special, chase
//! stuck, not stable, failed self-test), 2 a usage or input error.

mod chase;
mod cohomology;
mod parse;
mod selftest;
mod special;
mod stability;

use std::fmt;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgMatches, CommandFactory, FromArgMatches, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "fanostab", version, about = "Twisted-form cohomology and tangent-bundle stability for Fano manifolds")]
struct Cli {
    /// Directory whose `.facts` files override the shipped fact files.
    #[arg(long, global = true, env = "FANOSTAB_FACTS_DIR")]
    facts_dir: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print h^p(Ω^q(t)) on a Grassmannian or projective space.
    Cohomology(cohomology::Args),
    /// Build a special-cohomology certificate by sections and cyclic covers.
    Special(special::Args),
    /// Replay a chase script and check its trace.
    Chase(chase::Args),
    /// Decide stability of the tangent bundle from a Fano profile.
    Stability(stability::Args),
    /// Run the acceptance suite.
    Selftest(selftest::Args),
}

/// How a command that ran to completion came out.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Success,
    Negative,
}

/// Output gathered in full and written once, so an early exit never leaves
/// a half-printed report.
#[derive(Debug, Default)]
pub struct Out(String);

impl Out {
    pub fn line(&mut self, args: fmt::Arguments<'_>) {
        self.text(args);
        self.0.push('\n');
    }

    pub fn text(&mut self, args: fmt::Arguments<'_>) {
        fmt::Write::write_fmt(&mut self.0, args).expect("writing to a String");
    }

    fn flush(&mut self) {
        // a closed pipe downstream is not an error worth reporting
        let _ = io::stdout().lock().write_all(self.0.as_bytes());
        self.0.clear();
    }
}

fn run(cli: Cli, matches: &ArgMatches, out: &mut Out) -> anyhow::Result<Status> {
    let facts_dir = cli.facts_dir.as_deref();
    match cli.command {
        Command::Cohomology(args) => cohomology::run(&args, out),
        Command::Special(args) => {
            let sub = matches.subcommand_matches("special").expect("special subcommand matches");
            special::run(&args, sub, out)
        }
        Command::Chase(args) => chase::run(&args, facts_dir, out),
        Command::Stability(args) => stability::run(&args, facts_dir, out),
        Command::Selftest(args) => selftest::run(&args, facts_dir, out),
    }
}

fn main() -> ExitCode {
    let matches = Cli::command().get_matches();
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(e) => e.exit(),
    };
    let mut out = Out::default();
    let result = run(cli, &matches, &mut out);
    out.flush();
    match result {
        Ok(Status::Success) => ExitCode::SUCCESS,
        Ok(Status::Negative) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
