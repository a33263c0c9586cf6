//! The `ranstrat` command line.
//!
//! Exit codes: 0 on success, 2 on invalid input (arguments, files, or a
//! violated precondition), 3 when a frontier check is inconclusive.
//! Global flags can also be set through `RANSTRAT_SEED` and `RANSTRAT_EPS_GEO`.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::json;

use crate::cech::{cech_complex, cech_filtration, CechOptions};
use crate::complexes::SimplicialComplex;
use crate::geometry::{PointConfig, RanPoint};
use crate::paths::{as_filtration, zigzag, PLPath};
use crate::scposet::{dominates, enumerate_classes, export_dot, facet_label, hasse};
use crate::strat::{frontier_demo, stratum_label, tilde_r, LabelMode, Verdict, DEMO_PROBES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "ranstrat", version, about = "Čech complexes, their poset of classes, and stratified paths")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, global = true, env = "RANSTRAT_SEED", default_value_t = 0)]
    seed: u64,

    /// Band within which a Čech radius counts as zero.
    #[arg(long, global = true, env = "RANSTRAT_EPS_GEO", default_value_t = 1e-9)]
    eps_geo: f64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate isomorphism classes of complexes and their Hasse diagram.
    Enumerate {
        #[arg(long)]
        max_vertices: usize,
        /// Write the Hasse diagram as DOT.
        #[arg(long)]
        dot: Option<PathBuf>,
        /// Write the classes and the full order relation as JSON.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Čech complex of a point configuration at one radius.
    Cech {
        #[command(flatten)]
        input: PointsArgs,
        #[arg(long)]
        radius: f64,
    },
    /// Čech filtration of a point configuration.
    Filtration {
        #[command(flatten)]
        input: PointsArgs,
    },
    /// Search for a vertex-surjective simplicial map from A onto B.
    Dominates {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
    },
    /// Stratum label and safe ball of a configuration at one radius.
    Stratum {
        #[command(flatten)]
        input: PointsArgs,
        #[arg(long)]
        radius: f64,
    },
    /// Zigzag of Čech complexes along a piecewise-linear path.
    Track {
        #[arg(long)]
        path: PathBuf,
        #[arg(long)]
        resolution: f64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also extract the underlying filtration, if the zigzag has one.
        #[arg(long)]
        as_filtration: bool,
    },
    /// Frontier-condition witnesses for two points on a line.
    FrontierDemo {
        /// Split strata by the degenerate flag.
        #[arg(long)]
        refined: bool,
        #[arg(long, default_value_t = DEMO_PROBES)]
        probes: usize,
    },
}

#[derive(Args, Debug)]
struct PointsArgs {
    /// Point configuration JSON: {"dim": d, "points": [[...], ...]}.
    #[arg(long)]
    points: PathBuf,
    /// Largest simplex dimension; required above 8 points.
    #[arg(long)]
    max_dim: Option<usize>,
}

enum Outcome {
    Done,
    Inconclusive,
}

type CliResult = std::result::Result<Outcome, String>;

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(Outcome::Done) => EXIT_OK,
        Ok(Outcome::Inconclusive) => EXIT_INCONCLUSIVE,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INVALID
        }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> std::result::Result<T, String> {
    let text = fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("values serialize");
    s.push('\n');
    s
}

fn emit(out: &mut dyn Write, text: &str) -> std::result::Result<(), String> {
    out.write_all(text.as_bytes()).map_err(|e| e.to_string())
}

fn write_file(path: &Path, text: &str) -> std::result::Result<(), String> {
    fs::write(path, text).map_err(|e| format!("{}: {e}", path.display()))
}

fn check_eps(eps: f64) -> std::result::Result<(), String> {
    if !(eps.is_finite() && eps >= 0.0) {
        return Err(format!("--eps-geo must be finite and nonnegative, got {eps}"));
    }
    Ok(())
}

fn execute(cli: &Cli, out: &mut dyn Write) -> CliResult {
    check_eps(cli.eps_geo)?;
    let opts = |max_dim: Option<usize>| CechOptions {
        max_dim,
        eps_geo: cli.eps_geo,
    };
    let e = |e: crate::Error| e.to_string();
    match &cli.command {
        Command::Enumerate { max_vertices, dot, json } => {
            let universe = enumerate_classes(*max_vertices).map_err(e)?;
            let h = hasse(&universe);
            if let Some(path) = dot {
                write_file(path, &export_dot(&h))?;
            }
            if let Some(path) = json {
                write_file(path, &to_json(&universe))?;
            }
            let summary = json!({
                "max_vertices": max_vertices,
                "classes": h.nodes.iter().map(|c| facet_label(c.canonical())).collect::<Vec<_>>(),
                "cover_edges": h.cover_edges,
            });
            emit(out, &to_json(&summary))?;
        }
        Command::Cech { input, radius } => {
            let config: PointConfig<f64> = read_json(&input.points)?;
            let x = RanPoint::new(config, *radius).map_err(e)?;
            emit(out, &to_json(&cech_complex(&x, &opts(input.max_dim)).map_err(e)?))?;
        }
        Command::Filtration { input } => {
            let config: PointConfig<f64> = read_json(&input.points)?;
            emit(out, &to_json(&cech_filtration(&config, &opts(input.max_dim)).map_err(e)?))?;
        }
        Command::Dominates { a, b } => {
            let a: SimplicialComplex = read_json(a)?;
            let b: SimplicialComplex = read_json(b)?;
            match dominates(&a, &b).map_err(e)? {
                Some(map) => emit(out, &to_json(&map))?,
                None => emit(out, "none\n")?,
            }
        }
        Command::Stratum { input, radius } => {
            let config: PointConfig<f64> = read_json(&input.points)?;
            let x = RanPoint::new(config, *radius).map_err(e)?;
            let o = opts(input.max_dim);
            let label = stratum_label(&x, &o).map_err(e)?;
            let ball = tilde_r(&x, &o).map_err(e)?;
            let report = json!({
                "class": label.cls,
                "degenerate": label.degenerate,
                "degenerate_subsets": label.degenerate_subsets,
                "r_tilde": ball.r_tilde,
                "safe_radius": ball.safe_radius,
                "case": ball.case,
            });
            emit(out, &to_json(&report))?;
        }
        Command::Track {
            path,
            resolution,
            out: out_file,
            as_filtration: extract,
        } => {
            let p: PLPath<f64> = read_json(path)?;
            if !(*resolution > 0.0 && resolution.is_finite()) {
                return Err(format!("--resolution must be positive, got {resolution}"));
            }
            let z = zigzag(&p, *resolution, &opts(None)).map_err(e)?;
            let text = if *extract {
                to_json(&json!({ "zigzag": z, "filtration": as_filtration(&z) }))
            } else {
                to_json(&z)
            };
            match out_file {
                Some(f) => write_file(f, &text)?,
                None => emit(out, &text)?,
            }
        }
        Command::FrontierDemo { refined, probes } => {
            let mode = if *refined { LabelMode::Refined } else { LabelMode::Coarse };
            let report = frontier_demo(mode, *probes, cli.seed).map_err(e)?;
            emit(out, &to_json(&report))?;
            if report.verdict == Verdict::Inconclusive {
                return Ok(Outcome::Inconclusive);
            }
        }
    }
    Ok(Outcome::Done)
}
