use std::path::Path;

use clap::Args as ClapArgs;
use fanostab_core::acceptance::{run_all_with, SuiteConfig};

use crate::{Out, Status};

#[derive(Debug, ClapArgs)]
pub struct Args {
    /// Seed for the randomized threshold tuples.
    #[arg(long)]
    seed: Option<u64>,
}

pub fn run(args: &Args, facts_dir: Option<&Path>, out: &mut Out) -> anyhow::Result<Status> {
    let mut config = SuiteConfig { facts_dir: facts_dir.map(Path::to_path_buf), ..SuiteConfig::default() };
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    match &config.facts_dir {
        Some(dir) => out.line(format_args!("# facts from {} over the shipped files, seed {}", dir.display(), config.seed)),
        None => out.line(format_args!("# shipped facts, seed {}", config.seed)),
    }
    let results = run_all_with(&config, |r| out.line(format_args!("{r}")));
    let failed = results.iter().filter(|r| !r.passed).count();
    out.line(format_args!("{} of {} criteria passed", results.len() - failed, results.len()));
    Ok(if failed == 0 { Status::Success } else { Status::Negative })
}
