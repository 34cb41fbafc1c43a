use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context};
use clap::Args as ClapArgs;
use fanostab_core::chase::{builtin_facts, check_trace, replay, FactSources, ReplayOutcome, Script};
use fanostab_core::tables::FactStore;

use crate::{Out, Status};

#[derive(Debug, ClapArgs)]
pub struct Args {
    /// Chase script.
    #[arg(long)]
    script: PathBuf,
    /// Fact files; each replaces the shipped file with the same stem.
    #[arg(long, num_args = 1..)]
    facts: Vec<PathBuf>,
    /// Also write the rendered trace here.
    #[arg(long)]
    trace_out: Option<PathBuf>,
}

fn read(path: &Path) -> anyhow::Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

/// Explicit files first, then the facts directory, then the shipped copies.
fn sources(script: &Script, explicit: &[PathBuf], facts_dir: Option<&Path>) -> anyhow::Result<FactSources> {
    let mut by_stem: BTreeMap<String, &Path> = BTreeMap::new();
    for path in explicit {
        let stem = path.file_stem().and_then(|s| s.to_str()).with_context(|| format!("bad fact file name {}", path.display()))?;
        by_stem.insert(stem.to_string(), path);
    }
    let mut store = FactStore::new();
    for stem in script.fact_files() {
        let file = format!("{stem}.facts");
        let (text, source) = match by_stem.remove(stem) {
            Some(path) => (read(path)?, path.display().to_string()),
            None => match facts_dir.map(|d| d.join(&file)).filter(|p| p.exists()) {
                Some(path) => (read(&path)?, path.display().to_string()),
                None => (builtin_facts(stem).with_context(|| format!("no fact file {file}"))?.to_string(), file),
            },
        };
        store.ingest(&text, &source).map_err(|e| anyhow!("parsing {source}: {e}"))?;
    }
    for (_, path) in by_stem {
        let source = path.display().to_string();
        store.ingest(&read(path)?, &source).map_err(|e| anyhow!("parsing {source}: {e}"))?;
    }
    Ok(FactSources::new(store))
}

pub fn run(args: &Args, facts_dir: Option<&Path>, out: &mut Out) -> anyhow::Result<Status> {
    let name = args.script.file_stem().and_then(|s| s.to_str()).unwrap_or("script").to_string();
    let script = Script::parse(&name, &read(&args.script)?).map_err(|e| anyhow!("parsing {}: {e}", args.script.display()))?;
    let sources = sources(&script, &args.facts, facts_dir)?;
    let trace = match replay(&script, &sources).map_err(|e| anyhow!("{e}"))? {
        ReplayOutcome::Proved(t) => t,
        ReplayOutcome::Stuck(report) => {
            out.text(format_args!("{report}"));
            out.line(format_args!("status: stuck"));
            return Ok(Status::Negative);
        }
    };
    let rendered = trace.render();
    let report = match check_trace(&rendered, &sources) {
        Ok(r) => r,
        Err(e) => bail!("trace of {name} failed the independent check: {e}"),
    };
    out.text(format_args!("{rendered}"));
    if let Some(path) = &args.trace_out {
        std::fs::write(path, &rendered).with_context(|| format!("writing {}", path.display()))?;
    }
    out.line(format_args!(
        "status: proved {} goals in {} steps ({} facts, {} sequences); trace checked",
        report.goals, report.steps, report.facts, report.sequences
    ));
    Ok(Status::Success)
}
