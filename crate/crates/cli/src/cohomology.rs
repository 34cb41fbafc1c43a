use anyhow::{anyhow, bail};
use clap::{Args as ClapArgs, ValueEnum};
use fanostab_core::weyl::grassmann_cohomology;

use crate::{parse, Out, Status};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Grid,
    /// One fact-file line per nonzero cell.
    Records,
}

#[derive(Debug, ClapArgs)]
pub struct Args {
    /// `G(k,n)` or `P(n)`.
    #[arg(long)]
    space: String,
    /// Form degree.
    #[arg(long)]
    q: usize,
    /// Twists `a:b`.
    #[arg(long, allow_hyphen_values = true)]
    t_range: Option<String>,
    /// Restrict to one cohomological degree.
    #[arg(long)]
    p: Option<usize>,
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

pub fn run(args: &Args, out: &mut Out) -> anyhow::Result<Status> {
    let g = parse::space(&args.space)?;
    let (window, defaulted) = parse::window(args.t_range.as_deref())?;
    let dim = g.dim();
    if args.q > dim {
        bail!("q = {} exceeds dim {} = {dim}", args.q, g);
    }
    if let Some(p) = args.p.filter(|&p| p > dim) {
        bail!("p = {p} exceeds dim {g} = {dim}");
    }
    let rows: Vec<usize> = match args.p {
        Some(p) => vec![p],
        None => (0..=dim).collect(),
    };
    let twists: Vec<i64> = window.twists().collect();
    let mut columns = Vec::with_capacity(twists.len());
    for &t in &twists {
        columns.push(grassmann_cohomology(g.k, g.n, args.q, t).map_err(|e| anyhow!("{e}"))?);
    }

    match args.format {
        Format::Records => {
            out.line(format_args!("space {g} dim {dim} index {}", g.index()));
            for &p in &rows {
                for (t, col) in twists.iter().zip(&columns) {
                    if let Some(v) = col.get(&p) {
                        out.line(format_args!("dim {g} p {p} q {} t {t} = {v}", args.q));
                    }
                }
            }
        }
        Format::Grid => {
            out.line(format_args!("# space {g} dim {dim} index {}", g.index()));
            out.line(format_args!("# q {} t-range {}", args.q, parse::window_header(window, defaulted)));
            let cells: Vec<Vec<String>> =
                rows.iter().map(|p| columns.iter().map(|c| c.get(p).map(|v| v.to_string()).unwrap_or_default()).collect()).collect();
            let width = twists
                .iter()
                .map(|t| t.to_string().len())
                .chain(cells.iter().flatten().map(String::len))
                .max()
                .unwrap_or(1);
            let label = |s: String| format!("{s:<w$}", w = format!("p={dim}:").len());
            let header: Vec<String> = twists.iter().map(|t| format!("{t:>width$}")).collect();
            out.line(format_args!("{} {}", label("t:".into()), header.join(" ")));
            for (p, row) in rows.iter().zip(&cells) {
                let line: Vec<String> = row.iter().map(|v| format!("{v:>width$}")).collect();
                out.line(format_args!("{}", format!("{} {}", label(format!("p={p}:")), line.join(" ")).trim_end()));
            }
        }
    }
    Ok(Status::Success)
}
