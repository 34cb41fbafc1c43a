use std::path::Path;

use clap::Args as ClapArgs;
use fanostab_core::stability::{classify, FanoProfile, Outcome, Resources, RouteRegistry};

use crate::{Out, Status};

#[derive(Debug, ClapArgs)]
pub struct Args {
    /// Dimension.
    #[arg(long, required_unless_present = "list_routes")]
    n: Option<usize>,
    /// Fano index.
    #[arg(long, required_unless_present = "list_routes")]
    index: Option<usize>,
    /// Genus, for index n-2.
    #[arg(long)]
    genus: Option<u32>,
    /// Take the (ES) hypothesis as given.
    #[arg(long)]
    assume_es: bool,
    /// Restrict coindex-3 profiles to one named route.
    #[arg(long)]
    route: Option<String>,
    /// List the registered coindex-3 routes and exit.
    #[arg(long, exclusive = true)]
    list_routes: bool,
}

pub fn run(args: &Args, facts_dir: Option<&Path>, out: &mut Out) -> anyhow::Result<Status> {
    let registry = RouteRegistry::standard();
    if args.list_routes {
        for name in registry.names() {
            let route = registry.get(name).expect("listed route");
            let genera: Vec<String> = route.genera().iter().map(u32::to_string).collect();
            out.line(format_args!("{name}\tgenus {}\t{}", genera.join(","), route.family()));
        }
        return Ok(Status::Success);
    }
    let (Some(n), Some(index)) = (args.n, args.index) else {
        anyhow::bail!("--n and --index are required");
    };
    let mut profile = FanoProfile::new(n, index)?.assume_es(args.assume_es);
    if let Some(g) = args.genus {
        profile = profile.with_genus(g)?;
    }
    let resources = match facts_dir {
        Some(dir) => Resources::with_facts_dir(dir),
        None => Resources::shipped(),
    };
    let verdict = classify(&profile, &resources, &registry, args.route.as_deref())?;
    let genus = profile.genus.map(|g| format!(" genus {g}")).unwrap_or_default();
    out.line(format_args!("# profile n {} index {}{genus} assume-es {}", profile.n, profile.r, profile.assume_es));
    out.text(format_args!("{verdict}"));
    Ok(if verdict.outcome == Outcome::Stable { Status::Success } else { Status::Negative })
}
