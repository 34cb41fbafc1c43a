use std::path::PathBuf;

use anyhow::{anyhow, bail, Context};
use clap::{ArgMatches, Args as ClapArgs};
use fanostab_core::special::{is_special, propagate_cyclic, propagate_section, SpecialCohomologyCertificate, SpecialError};
use fanostab_core::tables::{CohomologyTable, Window};

use crate::{parse, Out, Status};

#[derive(Debug, ClapArgs)]
pub struct Args {
    /// Starting space, `G(k,n)` or `P(n)`.
    #[arg(long)]
    from: String,
    /// Cut by a smooth member of |O(d)|. Repeatable; applied in command-line order with --cover.
    #[arg(long, value_name = "D")]
    section: Vec<u32>,
    /// k-cyclic cover branched in |O(kd)|. Repeatable.
    #[arg(long, num_args = 2, value_names = ["K", "D"])]
    cover: Vec<u32>,
    /// Twists `a:b` of the final certificate.
    #[arg(long, allow_hyphen_values = true)]
    window: Option<String>,
    /// Where to write the certificate; defaults to `<space id>.cert`.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Step {
    Section(u32),
    Cover(u32, u32),
}

impl Step {
    /// Lowest twist offset the step reads from its parent.
    fn reach(self) -> i64 {
        match self {
            Step::Section(d) => d as i64,
            Step::Cover(k, d) => k as i64 * d as i64,
        }
    }
}

/// Steps in the order they were given.
fn steps(args: &Args, matches: &ArgMatches) -> Vec<Step> {
    let mut out: Vec<(usize, Step)> = Vec::new();
    if let Some(idx) = matches.indices_of("section") {
        out.extend(idx.zip(&args.section).map(|(i, &d)| (i, Step::Section(d))));
    }
    if let Some(idx) = matches.indices_of("cover") {
        let idx: Vec<usize> = idx.collect();
        out.extend(idx.chunks(2).zip(args.cover.chunks(2)).map(|(i, kd)| (i[0], Step::Cover(kd[0], kd[1]))));
    }
    out.sort_by_key(|(i, _)| *i);
    out.into_iter().map(|(_, s)| s).collect()
}

pub fn run(args: &Args, matches: &ArgMatches, out: &mut Out) -> anyhow::Result<Status> {
    let g = parse::space(&args.from)?;
    let (window, defaulted) = parse::window(args.window.as_deref())?;
    let chain = steps(args, matches);
    out.line(format_args!("# from {g} window {}", parse::window_header(window, defaulted)));

    let radius = chain.iter().map(|s| s.reach()).chain([window.min.abs(), window.max.abs()]).max().unwrap_or(0);
    let table = CohomologyTable::from_grassmannian(g, Window::symmetric(radius));
    let report = is_special(&table).map_err(|e| anyhow!("{e}"))?;
    if !report.special {
        out.line(format_args!("space {g} dim {} index {}", g.dim(), g.index()));
        out.line(format_args!("special: no"));
        let mut violations = report.violations.clone();
        violations.sort_by_key(|v| v.cell);
        for v in &violations {
            out.line(format_args!("violation {v}"));
        }
        return Ok(Status::Negative);
    }
    let mut cert = SpecialCohomologyCertificate::certify(table).map_err(|e| anyhow!("{e}"))?;
    for step in &chain {
        let next = match *step {
            Step::Section(d) => propagate_section(&cert, d, Window::symmetric(radius)),
            Step::Cover(k, d) => propagate_cyclic(&cert, k, d, Window::symmetric(radius)),
        };
        cert = match next {
            Ok(c) => c,
            Err(e @ (SpecialError::Footprint { .. } | SpecialError::PremiseFailed { .. })) => {
                out.line(format_args!("space {} dim {} index {}", cert.space.id, cert.dim(), cert.space.index));
                out.line(format_args!("special: no"));
                out.line(format_args!("propagation failed at {step:?}: {e}"));
                return Ok(Status::Negative);
            }
            Err(e) => bail!("{step:?} on {}: {e}", cert.space.id),
        };
    }
    let cert = cert.restrict(window).map_err(|e| anyhow!("{e}"))?;
    cert.validate().map_err(|e| anyhow!("certificate does not validate: {e}"))?;
    let path = args.out.clone().unwrap_or_else(|| PathBuf::from(format!("{}.cert", cert.space.id)));
    std::fs::write(&path, cert.to_text()).with_context(|| format!("writing {}", path.display()))?;
    out.line(format_args!("space {} dim {} index {}", cert.space.id, cert.dim(), cert.space.index));
    out.line(format_args!("special: yes"));
    let mut rules: Vec<String> = cert.rule_histogram().into_iter().map(|(r, n)| format!("{r} {n}")).collect();
    rules.sort();
    out.line(format_args!("evidence: {}", rules.join(", ")));
    out.line(format_args!("certificate: {}", path.display()));
    Ok(Status::Success)
}
