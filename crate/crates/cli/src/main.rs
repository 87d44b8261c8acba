use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde_json::json;

use borel_core::essential::{
    ess_by_restriction_kernels, mui_degrees, search_nonrestricting_quadratic, steenrod_closure, verify_free_module,
};
use borel_core::group::{cohomology_ring, GroupSpec};
use borel_core::scenario::{Report, Scenario};

/// Borel spectral sequences and theorem checks for p-torus actions on
/// 4-manifolds.
#[derive(Parser)]
#[command(name = "borel", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the checks of one or more scenario files.
    Analyze {
        #[arg(required = true)]
        files: Vec<PathBuf>,
        /// Emit the report as JSON.
        #[arg(long)]
        json: bool,
        /// Include every cell of every computed page.
        #[arg(long)]
        dump_pages: bool,
        /// Scenarios evaluated in parallel.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// Dimensions of the essential ideal, computed two ways.
    Ess {
        #[arg(short)]
        p: u32,
        #[arg(short, default_value_t = 2)]
        n: usize,
        #[arg(long, default_value_t = 8)]
        cutoff: u32,
        #[arg(long)]
        json: bool,
    },
    /// dim H^q((Z/p)^n; F_p) for q = 0..=qmax.
    Grouptable {
        #[arg(short)]
        p: u32,
        #[arg(short)]
        n: usize,
        #[arg(long, default_value_t = 10)]
        qmax: u32,
        #[arg(long)]
        json: bool,
    },
    /// Degree-2 classes over F_2 nonzero on every subgroup of order 2.
    SearchQuadratic {
        #[arg(short)]
        n: usize,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Analyze { files, json, dump_pages, jobs } => analyze(&files, json, dump_pages, jobs),
        Command::Ess { p, n, cutoff, json } => ess(p, n, cutoff, json).map(|_| 0),
        Command::Grouptable { p, n, qmax, json } => grouptable(p, n, qmax, json).map(|_| 0),
        Command::SearchQuadratic { n, json } => search_quadratic(n, json).map(|_| 0),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn run_one(path: &Path, dump_pages: bool) -> Result<Report> {
    let scenario = Scenario::load(path)?;
    scenario.run(dump_pages).with_context(|| format!("running {}", path.display()))
}

fn analyze(files: &[PathBuf], json: bool, dump_pages: bool, jobs: usize) -> Result<u8> {
    let pool = rayon::ThreadPoolBuilder::new().num_threads(jobs.max(1)).build()?;
    let results: Vec<Result<Report>> = pool.install(|| files.par_iter().map(|f| run_one(f, dump_pages)).collect());
    let mut code = 0u8;
    let mut reports = Vec::new();
    for (path, r) in files.iter().zip(results) {
        match r {
            Ok(report) => {
                code = code.max(report.exit_code() as u8);
                reports.push(report);
            }
            Err(e) => eprintln!("error: {}: {e:#}", path.display()),
        }
    }
    if json {
        let out = match reports.as_slice() {
            [one] if files.len() == 1 => serde_json::to_string_pretty(one)?,
            many => serde_json::to_string_pretty(many)?,
        };
        println!("{out}");
    } else {
        for r in &reports {
            print_report(r);
        }
    }
    // an error outranks any verdict
    if files.len() != reports.len() {
        code = 1;
    }
    Ok(code)
}

fn print_report(r: &Report) {
    println!("scenario: {}", r.scenario);
    let width = r.verdicts.iter().map(|e| kebab(serde_json::to_value(e.check)).len()).max().unwrap_or(0);
    for e in &r.verdicts {
        let v = &e.verdict;
        let evidence: Vec<String> = v.evidence.iter().map(|(k, val)| format!("{k}={val}")).collect();
        println!(
            "  {:width$}  {:17}  [{}]  {}",
            kebab(serde_json::to_value(e.check)),
            v.outcome.to_string(),
            kebab(serde_json::to_value(v.rule)),
            evidence.join(" ")
        );
    }
    for w in &r.warnings {
        println!("  warning: {w}");
    }
    if let Some(dumps) = &r.page_dumps {
        for d in dumps {
            println!("  E_{}^{{{},{}}} dim {}: {}", d.page, d.k, d.l, d.dim, d.basis.join(", "));
        }
    }
}

/// The serialized name of a unit enum variant.
fn kebab(v: serde_json::Result<serde_json::Value>) -> String {
    v.ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

fn ess(p: u32, n: usize, cutoff: u32, json: bool) -> Result<()> {
    let g = GroupSpec::new(p, n)?;
    let kernels = ess_by_restriction_kernels(&g, cutoff)?;
    let closure = steenrod_closure(&g, cutoff).ok();
    let degrees = mui_degrees(&g).ok();
    let free = degrees.as_ref().map(|d| verify_free_module(&kernels, d, cutoff));
    let rows: Vec<_> = (0..=cutoff).map(|q| (q, kernels.dim(q), closure.as_ref().map(|c| c.dim(q)))).collect();
    if json {
        let out = json!({
            "p": p,
            "rank": n,
            "cutoff": cutoff,
            "dims": rows.iter().map(|(q, k, c)| json!({ "q": q, "kernel": k, "closure": c })).collect::<Vec<_>>(),
            "mui_degrees": degrees,
            "free_module": free,
            "methods_agree": closure.as_ref().map(|c| c.agrees_with(&kernels)),
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
        return Ok(());
    }
    println!("Ess^q((Z/{p})^{n})");
    println!("{:>4}  {:>8}  {:>8}", "q", "kernels", "closure");
    for (q, k, c) in rows {
        let c = c.map_or("-".to_string(), |c| c.to_string());
        println!("{q:>4}  {k:>8}  {c:>8}");
    }
    if let Some(d) = degrees {
        println!("Mùi degrees: {d:?}");
    }
    if let Some(f) = free {
        println!("free over the polynomial part: {}", if f { "yes" } else { "no" });
    }
    Ok(())
}

fn grouptable(p: u32, n: usize, qmax: u32, json: bool) -> Result<()> {
    let g = GroupSpec::new(p, n)?;
    let ring = cohomology_ring(&g);
    let dims: Vec<usize> = (0..=qmax).map(|q| ring.dim(q)).collect();
    if json {
        let out = json!({ "p": p, "rank": n, "dims": dims });
        println!("{}", serde_json::to_string_pretty(&out)?);
        return Ok(());
    }
    println!("H^q((Z/{p})^{n}; F_{p})");
    println!("{:>4}  {:>8}", "q", "dim");
    for (q, d) in dims.iter().enumerate() {
        println!("{q:>4}  {d:>8}");
    }
    Ok(())
}

fn search_quadratic(n: usize, json: bool) -> Result<()> {
    let s = search_nonrestricting_quadratic(n)?;
    let witnesses: Vec<String> = s.witnesses.iter().map(|w| w.render()).collect();
    if json {
        let out = json!({
            "rank": n,
            "candidates": s.candidates,
            "subgroups": s.subgroups,
            "checks": s.checks,
            "witnesses": witnesses,
        });
        println!("{}", serde_json::to_string_pretty(&out)?);
        return Ok(());
    }
    println!("{} candidates, {} subgroups of order 2, {} restrictions", s.candidates, s.subgroups, s.checks);
    if witnesses.is_empty() {
        println!("none");
    } else {
        for w in witnesses {
            println!("{w}");
        }
    }
    Ok(())
}
