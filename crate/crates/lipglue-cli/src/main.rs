//! Command-line surface over the lipglue library.
//!
//! Seven subcommands read and write the JSON documents described in
//! `lipglue::io` (sweeps emit CSV by default). Machine-readable payloads go
//! to stdout or `--out`; short human summaries go to stderr. Exit codes: 0
//! for success or a true verdict, 1 for a mathematical failure (axiom
//! violations, a false verdict), 2 for unusable input or bad usage.

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lipglue::geometry::{
    density_sweep, great_circles_sample, linear_transverse_sample, tangential_parabola_sample,
    transverse_lines_sample, EmbeddedSample, LinearChart, SweepFamily,
};
use lipglue::io::{
    load_cover, load_function, load_pair, load_space, sweep_csv, to_pretty_json, CloudDoc, PairDoc,
    SpaceDoc,
};
use lipglue::lipschitz::{pasting_bound_check, restrict_function};
use lipglue::locality::global_bound_from_cover;
use lipglue::pasting::{glued_metric, lp_constant};
use lipglue::{verify_metric, Error, Result, DEFAULT_TOL};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "lipglue",
    version,
    about = "Paste-ability constants, glued metrics, and Lipschitz bounds on finite metric spaces"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Relative tolerance for metric checks and verdicts.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,

    /// Seed for randomized subcommands. Accepted everywhere so pipelines can
    /// pin it; none of the current subcommands draw randomness.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Write the payload to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Payload format; auto picks csv for sweep and json for everything else.
    #[arg(long, global = true, value_enum, default_value_t = Format::Auto)]
    format: Format,
}

#[derive(Subcommand)]
enum Command {
    /// Check a space document against the metric axioms.
    CheckMetric {
        /// Space document: {"labels": [...], "dist": [[...]]}.
        space: PathBuf,
    },
    /// Compute the paste-ability constant of a subset pair.
    Lp {
        space: PathBuf,
        /// Pair document: {"A": [indices], "B": [indices]}.
        pair: PathBuf,
    },
    /// Glue a space along a pair and emit the glued space document.
    Glue { space: PathBuf, pair: PathBuf },
    /// Check the pasting bound for a function on A ∪ B.
    Verify {
        space: PathBuf,
        pair: PathBuf,
        /// Function document: {"domain": space-or-path, "codomain":
        /// space-or-path, "assignment": [indices]}.
        function: PathBuf,
    },
    /// Bound the paste-ability constant through a cover of the intersection.
    Local {
        space: PathBuf,
        pair: PathBuf,
        /// Cover document: {"regions": [[indices], ...]}.
        cover: PathBuf,
    },
    /// Sample one of the built-in geometries as a cloud, space, and pair.
    Sample(SampleArgs),
    /// Refine a sample family over a list of target spacings h.
    Sweep(SweepArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// Two curves meeting tangentially at the origin.
    TangentialParabola,
    /// The two coordinate axes of the plane.
    TransverseLines,
    /// Two great circles of the unit sphere with intrinsic distances.
    GreatCircles,
    /// Two axis-aligned affine subspaces in a box.
    Linear,
}

#[derive(Args)]
struct SampleArgs {
    family: Family,

    /// Points per curve, line, or circle.
    #[arg(long)]
    n: Option<usize>,

    /// Smallest positive parabola parameter (tangential-parabola only).
    #[arg(long)]
    t_min: Option<f64>,

    /// Angle between the circles in radians, in (0, pi) (great-circles only).
    #[arg(long)]
    angle: Option<f64>,

    /// Odd number of grid points per axis (linear only).
    #[arg(long)]
    grid: Option<usize>,

    /// Dimensions only the first subspace spans (linear only).
    #[arg(long)]
    du: Option<usize>,

    /// Dimensions only the second subspace spans (linear only).
    #[arg(long)]
    dv: Option<usize>,

    /// Dimensions shared by both subspaces (linear only).
    #[arg(long, default_value_t = 0)]
    dw: usize,
}

#[derive(Args)]
struct SweepArgs {
    family: Family,

    /// Comma-separated target spacings, strictly decreasing.
    #[arg(long, value_delimiter = ',', required = true)]
    h_values: Vec<f64>,

    /// Angle between the circles in radians (great-circles only).
    #[arg(long)]
    angle: Option<f64>,

    /// Dimensions only the first subspace spans (linear only).
    #[arg(long)]
    du: Option<usize>,

    /// Dimensions only the second subspace spans (linear only).
    #[arg(long)]
    dv: Option<usize>,

    /// Dimensions shared by both subspaces (linear only).
    #[arg(long, default_value_t = 0)]
    dw: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Auto,
    Json,
    Csv,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            match err {
                Error::NotAMetric { .. } => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let json_only = |format: Format| -> Result<()> {
        if format == Format::Csv {
            return Err(Error::InvalidInput(
                "csv output only applies to sweep".into(),
            ));
        }
        Ok(())
    };

    match &cli.command {
        Command::CheckMetric { space } => {
            json_only(cli.format)?;
            let s = load_space(space)?;
            let violations = verify_metric(&s, cli.tol);
            emit(&to_pretty_json(&violations)?, &cli.out)?;
            if violations.is_empty() {
                eprintln!("{} points; all metric axioms hold", s.n());
                Ok(ExitCode::SUCCESS)
            } else {
                eprintln!(
                    "{} points; {} violation(s), see payload",
                    s.n(),
                    violations.len()
                );
                Ok(ExitCode::from(1))
            }
        }

        Command::Lp { space, pair } => {
            json_only(cli.format)?;
            let s = load_space(space)?;
            let p = load_pair(pair, s.n())?;
            let report = lp_constant(&s, &p)?;
            emit(&to_pretty_json(&report)?, &cli.out)?;
            match (report.k, report.separation) {
                (Some(k), _) => eprintln!("k = {k}"),
                (None, Some(sep)) => {
                    eprintln!("A and B are disjoint; separation = {sep}")
                }
                (None, None) => {}
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Glue { space, pair } => {
            json_only(cli.format)?;
            let s = load_space(space)?;
            let p = load_pair(pair, s.n())?;
            match glued_metric(&s, &p, cli.tol) {
                Ok(glued) => {
                    emit(
                        &to_pretty_json(&SpaceDoc::from_space(&glued.delta))?,
                        &cli.out,
                    )?;
                    eprintln!(
                        "glued {} points, routing through {} shared",
                        glued.base.n(),
                        glued.pair.intersection().len()
                    );
                    Ok(ExitCode::SUCCESS)
                }
                // The axiom check failing means the input matrix was not a
                // metric on A ∪ B; the violation list is the payload.
                Err(Error::NotAMetric { violations }) => {
                    emit(&to_pretty_json(&violations)?, &cli.out)?;
                    eprintln!(
                        "input is not a metric on the union: {} violation(s)",
                        violations.len()
                    );
                    Ok(ExitCode::from(1))
                }
                Err(other) => Err(other),
            }
        }

        Command::Verify {
            space,
            pair,
            function,
        } => {
            json_only(cli.format)?;
            let s = load_space(space)?;
            let p = load_pair(pair, s.n())?;
            let f = load_function(function)?;
            if f.domain() != &s {
                return Err(Error::InvalidInput(
                    "the function's domain is not the supplied space".into(),
                ));
            }
            let lp = lp_constant(&s, &p)?;
            let (union, upair) = p.reindex_to_union();
            let restricted = restrict_function(&f, &union)?;
            let report = pasting_bound_check(&restricted, &upair, &lp, cli.tol)?;
            emit(&to_pretty_json(&report)?, &cli.out)?;
            let word = if report.verdict { "holds" } else { "FAILS" };
            eprintln!(
                "Lip f = {} against bound {}: the pasting inequality {}{}",
                report.lip_f,
                report.bound,
                word,
                if report.tight { " with equality" } else { "" }
            );
            Ok(exit_by(report.verdict))
        }

        Command::Local { space, pair, cover } => {
            json_only(cli.format)?;
            let s = load_space(space)?;
            let p = load_pair(pair, s.n())?;
            let c = load_cover(cover, s.n())?;
            let report = global_bound_from_cover(&s, &p, &c, cli.tol)?;
            emit(&to_pretty_json(&report)?, &cli.out)?;
            let word = if report.verdict { "<=" } else { "EXCEEDS" };
            eprintln!(
                "direct k = {} {} cover bound {} from {} region(s), {} leftover pair(s)",
                report.direct_k,
                word,
                report.global_bound,
                report.local_ks.len(),
                report.complement_size
            );
            Ok(exit_by(report.verdict))
        }

        Command::Sample(args) => {
            json_only(cli.format)?;
            let sample = build_sample(args)?;
            let (space, pair) = sample.realize()?;
            let bundle = SampleBundle {
                cloud: CloudDoc::from_sample(&sample),
                space: SpaceDoc::from_space(&space),
                pair: PairDoc::from_pair(&pair),
            };
            emit(&to_pretty_json(&bundle)?, &cli.out)?;
            eprintln!(
                "{} points in R^{}; |A| = {}, |B| = {}, |A ∩ B| = {}",
                space.n(),
                sample.dim(),
                pair.a().len(),
                pair.b().len(),
                pair.intersection().len()
            );
            Ok(ExitCode::SUCCESS)
        }

        Command::Sweep(args) => {
            let family = build_family(args)?;
            let records = density_sweep(family, &args.h_values)?;
            let payload = match cli.format {
                Format::Auto | Format::Csv => sweep_csv(&records),
                Format::Json => to_pretty_json(&records)?,
            };
            emit(&payload, &cli.out)?;
            let first = records.first().expect("density_sweep rejects empty lists");
            let last = records.last().expect("density_sweep rejects empty lists");
            eprintln!(
                "{} record(s); k = {} at h = {} down to k = {} at h = {}",
                records.len(),
                first.k,
                first.h,
                last.k,
                last.h
            );
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn exit_by(verdict: bool) -> ExitCode {
    if verdict {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn emit(payload: &str, out: &Option<PathBuf>) -> Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, payload)?;
            eprintln!("wrote {}", path.display());
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(payload.as_bytes())?;
        }
    }
    Ok(())
}

/// Everything `sample` emits: the raw embedded points next to the realized
/// space and pair, each in its own interchange shape.
#[derive(Serialize)]
struct SampleBundle {
    cloud: CloudDoc,
    space: SpaceDoc,
    pair: PairDoc,
}

fn build_sample(args: &SampleArgs) -> Result<EmbeddedSample> {
    match args.family {
        Family::TangentialParabola => {
            let n = require(args.n, "--n", "tangential-parabola")?;
            let t_min = require(args.t_min, "--t-min", "tangential-parabola")?;
            tangential_parabola_sample(n, t_min)
        }
        Family::TransverseLines => {
            transverse_lines_sample(require(args.n, "--n", "transverse-lines")?)
        }
        Family::GreatCircles => {
            let n = require(args.n, "--n", "great-circles")?;
            let angle = require(args.angle, "--angle", "great-circles")?;
            great_circles_sample(n, angle)
        }
        Family::Linear => {
            let grid = require(args.grid, "--grid", "linear")?;
            let chart = LinearChart::new(
                require(args.du, "--du", "linear")?,
                require(args.dv, "--dv", "linear")?,
                args.dw,
            )?;
            linear_transverse_sample(chart, grid)
        }
    }
}

fn build_family(args: &SweepArgs) -> Result<SweepFamily> {
    match args.family {
        Family::TangentialParabola => Ok(SweepFamily::TangentialParabola),
        Family::TransverseLines => Ok(SweepFamily::TransverseLines),
        Family::GreatCircles => Ok(SweepFamily::GreatCircles {
            angle: require(args.angle, "--angle", "great-circles")?,
        }),
        Family::Linear => Ok(SweepFamily::LinearTransverse {
            chart: LinearChart::new(
                require(args.du, "--du", "linear")?,
                require(args.dv, "--dv", "linear")?,
                args.dw,
            )?,
        }),
    }
}

fn require<T>(value: Option<T>, flag: &str, family: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidInput(format!("{family} needs {flag}")))
}
