use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use curvkit::sampling::{sample_quadruple, substream};
use curvkit::{
    cross_ratio, distance, hilbert_distance, lift, project, run_suite, BallSpec, ChartPoint,
    CollinearQuadruple, Geometry, GeometryError, ModelPoint, ProjectionKind, Suite, SuiteConfig,
    Threads,
};

#[derive(Parser)]
#[command(
    name = "curvkit",
    version,
    about = "Cross ratios, projections and Hilbert metrics in constant curvature"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a single quantity on points read as JSON.
    Compute {
        kind: Kind,
        #[arg(long)]
        geometry: Option<Geometry>,
        #[arg(long)]
        n: Option<usize>,
        /// Input file, or `-` for standard input.
        #[arg(long)]
        input: String,
        /// Ball radius for `hilbert`; overrides the `radius` field of the input.
        #[arg(long)]
        radius: Option<f64>,
    },
    /// Run a seeded verification suite and emit its report.
    Verify {
        suite: String,
        /// Run a single dimension instead of the suite's default set.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        tol: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Report destination; standard output if absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Replace the projection in theorem1/theorem2 by a perturbed one.
        #[arg(long, value_name = "DELTA", num_args = 0..=1, default_missing_value = "1e-3")]
        inject_fault: Option<f64>,
    },
    /// Draw random configurations.
    Sample {
        #[command(subcommand)]
        what: SampleKind,
    },
}

#[derive(Subcommand)]
enum SampleKind {
    /// A collinear quadruple, printed in the `compute` input schema.
    Quadruple {
        #[arg(long)]
        geometry: Geometry,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Distance,
    CrossRatio,
    Hilbert,
    Project,
    Lift,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Input {
    geometry: Geometry,
    n: usize,
    points: Vec<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    radius: Option<f64>,
}

enum Failure {
    Verdict,
    Schema(String),
    Domain(GeometryError),
    Unwritable(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verdict => 1,
            Failure::Schema(_) => 2,
            Failure::Domain(_) => 3,
            Failure::Unwritable(_) => 4,
        }
    }
}

impl From<GeometryError> for Failure {
    fn from(e: GeometryError) -> Self {
        Failure::Domain(e)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Compute {
            kind,
            geometry,
            n,
            input,
            radius,
        } => compute(kind, geometry, n, &input, radius),
        Command::Verify {
            suite,
            n,
            samples,
            seed,
            tol,
            format,
            out,
            inject_fault,
        } => verify(&suite, n, samples, seed, tol, format, out, inject_fault),
        Command::Sample {
            what: SampleKind::Quadruple { geometry, n, seed },
        } => sample(geometry, n, seed),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            match &failure {
                Failure::Verdict => {}
                Failure::Schema(msg) => eprintln!("error: {msg}"),
                Failure::Domain(e) => eprintln!("{}: {e}", e.name()),
                Failure::Unwritable(msg) => eprintln!("error: {msg}"),
            }
            ExitCode::from(failure.code())
        }
    }
}

/// Formats with 15 significant digits, switching to exponent notation for
/// very large or small magnitudes.
fn sig15(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let sci = format!("{x:.14e}");
    let exp: i32 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    if (-5..15).contains(&exp) {
        format!("{:.*}", (14 - exp) as usize, x)
    } else {
        sci
    }
}

fn print_coords(coords: &[f64]) {
    let line: Vec<String> = coords.iter().map(|&c| sig15(c)).collect();
    println!("{}", line.join(" "));
}

fn read_input(path: &str) -> Result<Input, Failure> {
    let text = if path == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Schema(format!("cannot read standard input: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Schema(format!("cannot read {path}: {e}")))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::Schema(format!("malformed input: {e}")))
}

fn expect_count(points: &[Vec<f64>], count: usize, kind: &str) -> Result<(), Failure> {
    if points.len() == count {
        Ok(())
    } else {
        Err(Failure::Schema(format!(
            "{kind} needs {count} points, got {}",
            points.len()
        )))
    }
}

fn compute(
    kind: Kind,
    geometry: Option<Geometry>,
    n: Option<usize>,
    path: &str,
    radius: Option<f64>,
) -> Result<(), Failure> {
    let input = read_input(path)?;
    if geometry.is_some_and(|g| g != input.geometry) {
        return Err(Failure::Schema(
            "--geometry disagrees with the input".into(),
        ));
    }
    if n.is_some_and(|n| n != input.n) {
        return Err(Failure::Schema("--n disagrees with the input".into()));
    }
    if input.n == 0 {
        return Err(Failure::Schema("n must be at least 1".into()));
    }
    let g = input.geometry;
    // `lift` takes chart coordinates; everything else uses the model convention.
    let width = match (kind, g) {
        (Kind::Lift, _) | (_, Geometry::Euclidean) => input.n,
        _ => input.n + 1,
    };
    if let Some(p) = input.points.iter().find(|p| p.len() != width) {
        return Err(Failure::Schema(format!(
            "point of length {} where {width} coordinates are expected",
            p.len()
        )));
    }
    let points = || -> Result<Vec<ModelPoint>, Failure> {
        input
            .points
            .iter()
            .map(|c| ModelPoint::from_coords(g, c).map_err(Failure::from))
            .collect()
    };

    match kind {
        Kind::Distance => {
            expect_count(&input.points, 2, "distance")?;
            let p = points()?;
            println!("{}", sig15(distance(&p[0], &p[1])?));
        }
        Kind::CrossRatio => {
            expect_count(&input.points, 4, "cross-ratio")?;
            let p: [ModelPoint; 4] = points()?.try_into().expect("four points");
            let q = CollinearQuadruple::new(p)?;
            println!("{}", sig15(cross_ratio(&q).value()));
        }
        Kind::Hilbert => {
            expect_count(&input.points, 2, "hilbert")?;
            let rho = radius
                .or(input.radius)
                .ok_or_else(|| Failure::Schema("hilbert needs a radius".into()))?;
            let ball = BallSpec::new(g, rho)?;
            let p = points()?;
            println!("{}", sig15(hilbert_distance(&ball, &p[0], &p[1])?));
        }
        Kind::Project => {
            for p in points()? {
                print_coords(project(&p)?.coords());
            }
        }
        Kind::Lift => {
            let proj = ProjectionKind::for_geometry(g)
                .ok_or_else(|| Failure::Schema("lift needs a curved geometry".into()))?;
            for c in &input.points {
                let u = ChartPoint::from_coords(c)?;
                print_coords(lift(proj, &u)?.coords());
            }
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn verify(
    suite: &str,
    n: Option<usize>,
    samples: Option<usize>,
    seed: u64,
    tol: Option<f64>,
    format: Format,
    out: Option<PathBuf>,
    fault: Option<f64>,
) -> Result<(), Failure> {
    let suite: Suite = suite.parse().map_err(|e: curvkit::SuiteError| {
        let known: Vec<&str> = Suite::ALL.iter().map(|s| s.name()).collect();
        Failure::Schema(format!("{e}; known suites: {}", known.join(", ")))
    })?;
    let mut cfg = SuiteConfig::new(suite);
    if let Some(n) = n {
        cfg.dims = vec![n];
    }
    if let Some(k) = samples {
        cfg.samples = k;
    }
    if let Some(t) = tol {
        cfg.tol = t;
    }
    cfg.seed = seed;
    cfg.threads = Threads::from_env();
    cfg.fault = fault;
    let report = run_suite(&cfg).map_err(|e| Failure::Schema(e.to_string()))?;
    let text = match format {
        Format::Json => report.to_json() + "\n",
        Format::Csv => report.to_csv(),
    };
    match out {
        Some(path) => fs::write(&path, text)
            .map_err(|e| Failure::Unwritable(format!("cannot write {}: {e}", path.display())))?,
        None => io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Unwritable(format!("cannot write report: {e}")))?,
    }
    eprintln!(
        "{}: {} samples, max residual {:e}, {} failures, {}",
        report.suite,
        report.samples_run,
        report.max_residual,
        report.failures.len(),
        if report.passed() { "pass" } else { "fail" }
    );
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verdict)
    }
}

fn sample(geometry: Geometry, n: usize, seed: u64) -> Result<(), Failure> {
    if n == 0 {
        return Err(Failure::Schema("n must be at least 1".into()));
    }
    let q = sample_quadruple(&mut substream(seed, 0), geometry, n);
    let out = Input {
        geometry,
        n,
        points: q.points().iter().map(|p| p.coords().to_vec()).collect(),
        radius: None,
    };
    println!(
        "{}",
        serde_json::to_string_pretty(&out).expect("input serializes")
    );
    Ok(())
}
