use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use tubefocal::config::{load_config, parse_override, MeshFormat};
use tubefocal::report::summary_lines;
use tubefocal_core::exprcurve::Interval;

#[derive(Parser)]
#[command(name = "tubefocal", version, about = "Tubes about space curves, their focal surfaces, and checks on both")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Job file, or `builtin:example1` / `builtin:example2`.
    #[arg(long, short)]
    config: PathBuf,
    /// Override one tolerance, e.g. `--tol-override closed_form_rel=1e-7`. Repeatable.
    #[arg(long = "tol-override", value_name = "KEY=VALUE", value_parser = parse_override)]
    tol_override: Vec<(String, f64)>,
}

#[derive(Subcommand)]
enum Command {
    /// Sample the tube and focal sheet and write meshes and the field table.
    Build {
        #[command(flatten)]
        common: Common,
        #[arg(long, short, default_value = "out")]
        out: PathBuf,
        #[arg(long, value_parser = parse_format)]
        format: Option<MeshFormat>,
    },
    /// Check the closed forms and theorems on the grid and write the JSON report.
    /// Exits with status 1 if any check fails.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Directory for the report; without it the report goes to stdout.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Build and verify both bundled examples.
    ReproduceExamples {
        #[arg(long, short, default_value = "out")]
        out: PathBuf,
        #[arg(long, value_parser = parse_format)]
        format: Option<MeshFormat>,
        #[arg(long = "tol-override", value_name = "KEY=VALUE", value_parser = parse_override)]
        tol_override: Vec<(String, f64)>,
    },
    /// Tabulate the spine's frame and curvatures at the grid's u-samples (CSV).
    CurveInfo {
        #[command(flatten)]
        common: Common,
        /// Output file; stdout if omitted.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
    /// Integrate a plane curve from its curvature and tabulate it (CSV).
    SpineFromKappa {
        /// Curvature as an expression in `u`.
        #[arg(long)]
        kappa: String,
        #[arg(long, num_args = 2, value_names = ["LO", "HI"], allow_negative_numbers = true)]
        span: Vec<f64>,
        /// Where the curve starts at the origin heading along +x; defaults to LO.
        #[arg(long, allow_negative_numbers = true)]
        anchor: Option<f64>,
        #[arg(long, default_value_t = 64)]
        nodes: usize,
        #[arg(long, default_value_t = 101)]
        samples: usize,
        #[arg(long, short)]
        out: Option<PathBuf>,
    },
}

fn parse_format(s: &str) -> Result<MeshFormat, String> {
    MeshFormat::parse(s).ok_or_else(|| format!("unknown format {s:?} (expected obj or ply)"))
}

fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(std::fs::File::create(p).with_context(|| format!("cannot create {}", p.display()))?),
        None => Box::new(std::io::stdout().lock()),
    })
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Build { common, out, format } => {
            let cfg = load_config(&common.config, &common.tol_override)?;
            let built = tubefocal::build(&cfg, &out, format)?;
            for w in &built.warnings {
                eprintln!("warning: {w}");
            }
            for f in &built.files {
                println!("wrote {}", f.display());
            }
            Ok(true)
        }
        Command::Verify { common, out } => {
            let cfg = load_config(&common.config, &common.tol_override)?;
            let (outcome, json, path) = tubefocal::verify(&cfg, out.as_deref())?;
            match path {
                Some(p) => {
                    for line in summary_lines(&outcome) {
                        println!("{line}");
                    }
                    println!("wrote {}", p.display());
                }
                None => print!("{json}"),
            }
            Ok(outcome.passed())
        }
        Command::ReproduceExamples { out, format, tol_override } => {
            let mut ok = true;
            for (cfg, built, outcome) in tubefocal::reproduce_examples(&out, format, &tol_override)? {
                for w in &built.warnings {
                    eprintln!("warning: {w}");
                }
                for f in &built.files {
                    println!("wrote {}", f.display());
                }
                let failed: Vec<_> = outcome.checks().into_iter().filter(|c| c.verdict.as_str() == "fail").collect();
                println!("{}: {}", cfg.label, if failed.is_empty() { "all checks pass" } else { "FAILED" });
                for c in failed {
                    println!("  fail {} ({:e} {} {:e})", c.name, c.observed, c.relation.as_str(), c.bound);
                }
                ok &= outcome.passed();
            }
            Ok(ok)
        }
        Command::CurveInfo { common, out } => {
            let cfg = load_config(&common.config, &common.tol_override)?;
            tubefocal::curve_info(&cfg, output(out.as_ref())?)?;
            Ok(true)
        }
        Command::SpineFromKappa { kappa, span, anchor, nodes, samples, out } => {
            anyhow::ensure!(span.len() == 2, "--span needs LO HI");
            let span = Interval::new(span[0], span[1]);
            tubefocal::spine_from_kappa(
                &kappa,
                anchor.unwrap_or(span.lo),
                span,
                nodes,
                samples,
                output(out.as_ref())?,
            )?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match tubefocal::thread_pool() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(cli)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
