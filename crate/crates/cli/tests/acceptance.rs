//! Acceptance gate: one line per criterion, non-zero exit if any fails.
//!
//! Suites are run through the `curvkit` binary at their default sizes and
//! tolerances; closed-form spot checks go through the library.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use curvkit::{
    bk_isometry, distance, hilbert_distance, pencil_transfer, BallSpec, CollinearQuadruple,
    Geometry, ModelPoint, RealVector, SweepReport, TwoPlane,
};

const BIN: &str = env!("CARGO_BIN_EXE_curvkit");
const TIME_LIMIT: Duration = Duration::from_secs(10);

// High-precision closed forms: 2·atanh(tan 0.2) and atanh(tanh 0.3 / tanh 1).
const SPHERICAL_SPOT: f64 = 0.411_114_219_868_596_6;
const HYPERBOLIC_SPOT: f64 = 0.402_989_212_549_757_1;

type Check<'a> = Box<dyn Fn() -> Result<String, String> + 'a>;

struct Run {
    report: SweepReport,
    json: String,
    elapsed: Duration,
    code: i32,
}

fn verify(dir: &Path, suite: &str, extra: &[&str], threads: Option<&str>) -> Run {
    let out = dir.join(format!("{suite}-{}.json", threads.unwrap_or("auto")));
    let mut cmd = Command::new(BIN);
    cmd.args(["verify", suite, "--out"]).arg(&out).args(extra);
    match threads {
        Some(t) => cmd.env("CURVKIT_THREADS", t),
        None => cmd.env_remove("CURVKIT_THREADS"),
    };
    let start = Instant::now();
    let status = cmd.output().expect("binary runs").status;
    let elapsed = start.elapsed();
    let json = std::fs::read_to_string(&out).expect("report written");
    let report = SweepReport::from_json(&json).expect("report parses");
    Run {
        report,
        json,
        elapsed,
        code: status.code().unwrap_or(-1),
    }
}

/// Checks a default-size suite run: exit 0, no failures, residual within
/// tolerance, expected sample count and the time limit.
fn suite_ok(run: &Run, samples: usize, tol: f64) -> Result<String, String> {
    let r = &run.report;
    let summary = format!(
        "{} samples, max residual {:.2e}, {} failures, {:.2} s",
        r.samples_run,
        r.max_residual,
        r.failures.len(),
        run.elapsed.as_secs_f64()
    );
    let ok = run.code == 0
        && r.passed()
        && r.failures.is_empty()
        && r.samples_run == samples
        && r.tolerance == tol
        && r.max_residual <= tol
        && run.elapsed < TIME_LIMIT;
    if ok {
        Ok(summary)
    } else {
        Err(summary)
    }
}

fn both(a: Result<String, String>, b: Result<String, String>) -> Result<String, String> {
    match (a, b) {
        (Ok(x), Ok(y)) => Ok(format!("{x}; {y}")),
        (Ok(x) | Err(x), Ok(y) | Err(y)) => Err(format!("{x}; {y}")),
    }
}

fn point(g: Geometry, c: &[f64]) -> ModelPoint {
    ModelPoint::from_coords(g, c).unwrap()
}

fn pencil_example() -> Result<String, String> {
    let e = Geometry::Euclidean;
    let source = CollinearQuadruple::new([
        point(e, &[0.0, 0.0]),
        point(e, &[1.0, 0.0]),
        point(e, &[2.0, 0.0]),
        point(e, &[4.0, 0.0]),
    ])
    .map_err(|err| err.to_string())?;
    let target = TwoPlane::new(
        RealVector::new(vec![0.0, 0.5, 1.0]).unwrap(),
        RealVector::new(vec![1.0, 0.5, 1.0]).unwrap(),
    )
    .unwrap();
    let image =
        pencil_transfer(&point(e, &[0.0, 1.0]), &source, &target).map_err(|err| err.to_string())?;
    let expected = [[0.0, 0.5], [0.5, 0.5], [1.0, 0.5], [2.0, 0.5]];
    let err = image
        .points()
        .iter()
        .zip(expected)
        .flat_map(|(p, q)| {
            p.coords()
                .iter()
                .zip(q)
                .map(|(a, b)| (a - b).abs())
                .collect::<Vec<_>>()
        })
        .fold(0.0, f64::max);
    let line = format!("worked example error {err:.1e}");
    if err <= 1e-12 {
        Ok(line)
    } else {
        Err(line)
    }
}

fn spot_values() -> Result<String, String> {
    let s = Geometry::Spherical;
    let ball = BallSpec::new(s, std::f64::consts::FRAC_PI_4).unwrap();
    let y = point(s, &[0.2f64.sin(), 0.2f64.cos()]);
    let hs = hilbert_distance(&ball, &ball.center(1), &y).map_err(|e| e.to_string())?;

    let h = Geometry::Hyperbolic;
    let ball = BallSpec::new(h, 1.0).unwrap();
    let x = point(h, &[0.3f64.sinh(), 0.3f64.cosh()]);
    let image = ModelPoint::Hyperboloid(bk_isometry(&ball, &x).map_err(|e| e.to_string())?);
    let apex = ModelPoint::reference(h, 1);
    let dh = distance(&apex, &image).map_err(|e| e.to_string())?;

    let line = format!("spot values {hs:.15} and {dh:.15}");
    if (hs - SPHERICAL_SPOT).abs() <= 1e-9 && (dh - HYPERBOLIC_SPOT).abs() <= 1e-9 {
        Ok(line)
    } else {
        Err(line)
    }
}

fn determinism(dir: &Path) -> Result<String, String> {
    let mut mismatched = Vec::new();
    let suites = [
        "theorem1",
        "theorem2",
        "distance-identities",
        "pencil-invariance",
        "sine-rule",
        "hilbert-isometry-s",
        "hilbert-isometry-h",
        "homothety",
        "bk-factor2",
        "degenerate-limit",
    ];
    for suite in suites {
        let args = ["--samples", "300", "--seed", "2024"];
        let one = verify(dir, suite, &args, Some("1"));
        let eight = verify(dir, suite, &args, Some("8"));
        let auto = verify(dir, suite, &args, None);
        let again = verify(dir, suite, &args, Some("8"));
        if one.json != eight.json || one.json != auto.json || eight.json != again.json {
            mismatched.push(suite);
        }
    }
    if mismatched.is_empty() {
        Ok(format!(
            "{} suites byte-identical across 1, 8 and default threads",
            suites.len()
        ))
    } else {
        Err(format!("reports differ for {}", mismatched.join(", ")))
    }
}

fn main() {
    let dir = tempfile::tempdir().expect("temp dir");
    let d = dir.path();
    let criteria: Vec<(&str, Check)> = vec![
        (
            "theorem1",
            Box::new(|| suite_ok(&verify(d, "theorem1", &[], None), 40_000, 1e-9)),
        ),
        (
            "theorem2",
            Box::new(|| suite_ok(&verify(d, "theorem2", &[], None), 40_000, 1e-9)),
        ),
        (
            "distance identities",
            Box::new(|| suite_ok(&verify(d, "distance-identities", &[], None), 60_000, 1e-12)),
        ),
        (
            "pencil invariance",
            Box::new(|| {
                both(
                    suite_ok(&verify(d, "pencil-invariance", &[], None), 6_000, 1e-9),
                    pencil_example(),
                )
            }),
        ),
        (
            "sine rule",
            Box::new(|| suite_ok(&verify(d, "sine-rule", &[], None), 6_000, 1e-9)),
        ),
        (
            "hilbert projection isometry",
            Box::new(|| {
                both(
                    suite_ok(&verify(d, "hilbert-isometry-s", &[], None), 40_000, 1e-9),
                    suite_ok(&verify(d, "hilbert-isometry-h", &[], None), 40_000, 1e-9),
                )
            }),
        ),
        (
            "beltrami-klein factor 2",
            Box::new(|| {
                both(
                    suite_ok(&verify(d, "bk-factor2", &[], None), 80_000, 1e-9),
                    spot_values(),
                )
            }),
        ),
        (
            "homothety",
            Box::new(|| suite_ok(&verify(d, "homothety", &[], None), 27_000, 1e-12)),
        ),
        (
            "degenerate limit",
            Box::new(|| {
                let run = verify(d, "degenerate-limit", &[], None);
                let r = &run.report;
                let ratios: Vec<f64> = r.records.iter().filter_map(|x| x.residual).collect();
                let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
                let hi = ratios.iter().cloned().fold(0.0, f64::max);
                let line = format!(
                    "{} samples, decay ratios in [{lo:.2}, {hi:.2}], {} failures, {:.2} s",
                    r.samples_run,
                    r.failures.len(),
                    run.elapsed.as_secs_f64()
                );
                let ok = run.code == 0
                    && r.passed()
                    && ratios.len() == 6_000
                    && lo >= 50.0
                    && hi <= 200.0
                    && run.elapsed < TIME_LIMIT;
                if ok {
                    Ok(line)
                } else {
                    Err(line)
                }
            }),
        ),
        ("determinism", Box::new(|| determinism(d))),
    ];

    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail}", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
