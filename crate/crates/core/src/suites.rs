//! Seeded verification suites, one per geometric claim.
//!
//! A suite enumerates a list of cases (geometry, dimension, radius, …) and
//! draws `samples` configurations for each. Sample `i` of the whole sweep uses
//! the random stream `(seed, i)`, so reports are identical whatever the
//! thread count.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_6};
use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::cross_ratio::{bracket, cross_ratio, CollinearQuadruple};
use crate::error::Result as GeoResult;
use crate::hilbert::{bk_isometry, hilbert_distance, BallSpec};
use crate::linalg::{RealVector, TwoPlane};
use crate::model::{
    chart_sin_distance, chart_sinh_distance, distance, geodesic_point, ChartPoint, Geometry,
    ModelPoint,
};
use crate::parallel::{map_indexed, Threads};
use crate::projective::{lift, pencil_transfer, perspectivity_check, project, ProjectionKind};
use crate::report::{FailureRecord, SampleRecord, SweepReport};
use crate::sampling::{
    point_in_ball, random_point, random_unit, sample_quadruple, sample_shrinkable, sample_triangle,
    substream, SampleRng, EQUATOR_CLEARANCE, MIN_PARAMETER_GAP,
};
use crate::triangle::sine_rule_residual;

/// Fraction of the radius within which Hilbert-metric sample points are drawn.
pub const BALL_FILL: f64 = 0.98;

/// Shrink factors compared by the degenerate-limit suite.
pub const SHRINK_SCALES: [f64; 2] = [1e-2, 1e-3];

/// Accepted range for the ratio of residuals between the two shrink scales.
pub const DECAY_RATIO_RANGE: (f64, f64) = (50.0, 200.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Theorem1,
    Theorem2,
    DistanceIdentities,
    PencilInvariance,
    SineRule,
    HilbertIsometryS,
    HilbertIsometryH,
    Homothety,
    BkFactor2,
    DegenerateLimit,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::Theorem1,
        Suite::Theorem2,
        Suite::DistanceIdentities,
        Suite::PencilInvariance,
        Suite::SineRule,
        Suite::HilbertIsometryS,
        Suite::HilbertIsometryH,
        Suite::Homothety,
        Suite::BkFactor2,
        Suite::DegenerateLimit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Theorem1 => "theorem1",
            Suite::Theorem2 => "theorem2",
            Suite::DistanceIdentities => "distance-identities",
            Suite::PencilInvariance => "pencil-invariance",
            Suite::SineRule => "sine-rule",
            Suite::HilbertIsometryS => "hilbert-isometry-s",
            Suite::HilbertIsometryH => "hilbert-isometry-h",
            Suite::Homothety => "homothety",
            Suite::BkFactor2 => "bk-factor2",
            Suite::DegenerateLimit => "degenerate-limit",
        }
    }

    pub fn default_samples(self) -> usize {
        match self {
            Suite::PencilInvariance
            | Suite::SineRule
            | Suite::Homothety
            | Suite::DegenerateLimit => 1_000,
            _ => 10_000,
        }
    }

    pub fn default_tol(self) -> f64 {
        match self {
            Suite::DistanceIdentities | Suite::Homothety => 1e-12,
            _ => 1e-9,
        }
    }

    pub fn default_dims(self) -> Vec<usize> {
        match self {
            Suite::Theorem1 | Suite::Theorem2 => vec![1, 2, 3, 5],
            Suite::DistanceIdentities | Suite::Homothety | Suite::DegenerateLimit => vec![1, 2, 3],
            _ => vec![2, 3],
        }
    }

    /// Smallest dimension the suite can run in.
    pub fn min_dim(self) -> usize {
        match self {
            Suite::PencilInvariance | Suite::SineRule => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = SuiteError;

    fn from_str(s: &str) -> Result<Self, SuiteError> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| SuiteError::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SuiteError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub dims: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub tol: f64,
    pub threads: Threads,
    /// Test hook for `theorem1`/`theorem2`: the candidate projection adds this
    /// amount to the last ambient coordinate before dividing by it.
    pub fault: Option<f64>,
}

impl SuiteConfig {
    pub fn new(suite: Suite) -> Self {
        SuiteConfig {
            suite,
            dims: suite.default_dims(),
            samples: suite.default_samples(),
            seed: 42,
            tol: suite.default_tol(),
            threads: Threads::Auto,
            fault: None,
        }
    }

    pub fn validate(&self) -> Result<(), SuiteError> {
        if self.samples == 0 {
            return Err(SuiteError::InvalidConfig(
                "sample count must be at least 1".into(),
            ));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(SuiteError::InvalidConfig(
                "tolerance must be positive".into(),
            ));
        }
        if self.dims.is_empty() {
            return Err(SuiteError::InvalidConfig("no dimensions given".into()));
        }
        let min = self.suite.min_dim();
        if let Some(&n) = self.dims.iter().find(|&&n| n < min) {
            return Err(SuiteError::InvalidConfig(format!(
                "suite {} needs n >= {min}, got {n}",
                self.suite
            )));
        }
        Ok(())
    }
}

type Outcome = (SampleRecord, Option<FailureRecord>);

/// Runs a suite and returns its report.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SweepReport, SuiteError> {
    cfg.validate()?;
    let mut report = match cfg.suite {
        Suite::Theorem1 => theorem(cfg, Geometry::Spherical),
        Suite::Theorem2 => theorem(cfg, Geometry::Hyperbolic),
        Suite::DistanceIdentities => distance_identities(cfg),
        Suite::PencilInvariance => pencil_invariance(cfg),
        Suite::SineRule => sine_rule(cfg),
        Suite::HilbertIsometryS => {
            hilbert_isometry(cfg, Geometry::Spherical, &[FRAC_PI_6, FRAC_PI_3])
        }
        Suite::HilbertIsometryH => hilbert_isometry(cfg, Geometry::Hyperbolic, &[0.3, 1.2]),
        Suite::Homothety => homothety(cfg),
        Suite::BkFactor2 => bk_factor2(cfg),
        Suite::DegenerateLimit => degenerate_limit(cfg),
    };
    report.seed = cfg.seed;
    Ok(report)
}

fn sweep<C, F>(cfg: &SuiteConfig, cases: &[C], eval: F) -> SweepReport
where
    C: Sync,
    F: Fn(&C, u64, &mut SampleRng) -> Outcome + Sync,
{
    let total = cases.len() * cfg.samples;
    let outcomes = map_indexed(total, cfg.threads, |i| {
        let case = &cases[i as usize / cfg.samples];
        let mut rng = substream(cfg.seed, i);
        eval(case, i, &mut rng)
    });
    SweepReport::from_outcomes(cfg.suite.name(), cfg.tol, outcomes)
}

/// Outcome for a residual compared against `tol`.
#[allow(clippy::too_many_arguments)]
fn judge(
    index: u64,
    geometry: Geometry,
    n: usize,
    inputs: &[&ModelPoint],
    expected: f64,
    actual: f64,
    residual: f64,
    tol: f64,
) -> Outcome {
    let pass = residual <= tol;
    let record = SampleRecord::new(index, geometry, n, Some(residual), pass);
    let failure = (!pass).then(|| FailureRecord {
        sample_index: index,
        geometry,
        n,
        inputs: inputs.iter().map(|p| p.coords().to_vec()).collect(),
        expected: Some(expected),
        actual: Some(actual),
        residual: Some(residual),
        reason: "ResidualExceedsTolerance".into(),
    });
    (record, failure)
}

fn domain_failure(
    index: u64,
    geometry: Geometry,
    n: usize,
    inputs: &[&ModelPoint],
    err: &str,
) -> Outcome {
    (
        SampleRecord::new(index, geometry, n, None, false),
        Some(FailureRecord {
            sample_index: index,
            geometry,
            n,
            inputs: inputs.iter().map(|p| p.coords().to_vec()).collect(),
            expected: None,
            actual: None,
            residual: None,
            reason: err.to_string(),
        }),
    )
}

/// Central projection, optionally with the last coordinate perturbed.
fn candidate_projection(
    fault: Option<f64>,
) -> impl Fn(&ModelPoint) -> GeoResult<ModelPoint> + Sync {
    move |p: &ModelPoint| match fault {
        None => project(p).map(ModelPoint::Chart),
        Some(delta) => {
            let mut c = p.position().clone().into_vec();
            let last = c.len() - 1;
            c[last] += delta;
            let w = c[last];
            let mut chart: Vec<f64> = c[..last].iter().map(|x| x / w).collect();
            chart.push(1.0);
            ChartPoint::from_ambient(RealVector::new(chart)?).map(ModelPoint::Chart)
        }
    }
}

fn theorem(cfg: &SuiteConfig, geometry: Geometry) -> SweepReport {
    let dims = &cfg.dims;
    let samples = cfg.samples;
    let seed = cfg.seed;
    let sampler = |i: u64| {
        let n = dims[i as usize / samples];
        sample_quadruple(&mut substream(seed, i), geometry, n)
    };
    perspectivity_check(
        cfg.suite.name(),
        candidate_projection(cfg.fault),
        sampler,
        dims.len() * samples,
        cfg.tol,
        cfg.threads,
    )
}

fn cases_by_geometry(geometries: &[Geometry], dims: &[usize]) -> Vec<(Geometry, usize)> {
    geometries
        .iter()
        .flat_map(|&g| dims.iter().map(move |&n| (g, n)))
        .collect()
}

/// A random chart point: in `[−3, 3]ⁿ` for spherical lifts, in the disc of
/// radius 0.95 for hyperbolic ones.
fn random_chart(rng: &mut SampleRng, geometry: Geometry, n: usize) -> ChartPoint {
    use rand::Rng;
    let coords: Vec<f64> = match geometry {
        Geometry::Hyperbolic => {
            let dir = random_unit(rng, n);
            let u: f64 = rng.random_range(0.0..1.0);
            let r = 0.95 * u.powf(1.0 / n as f64);
            dir.into_iter().map(|x| x * r).collect()
        }
        _ => (0..n).map(|_| rng.random_range(-3.0..=3.0)).collect(),
    };
    ChartPoint::from_coords(&coords).expect("finite chart point")
}

fn distance_identities(cfg: &SuiteConfig) -> SweepReport {
    let cases = cases_by_geometry(&[Geometry::Spherical, Geometry::Hyperbolic], &cfg.dims);
    sweep(cfg, &cases, |&(g, n), i, rng| {
        let kind = ProjectionKind::for_geometry(g).expect("curved geometry");
        // Lifted points carry rounding of order 1e-16, which is of relative
        // size 1e-16/d in the oracle; pairs closer than the sampler gap are redrawn.
        let (u, v, d) = loop {
            let u = random_chart(rng, g, n);
            let v = random_chart(rng, g, n);
            let lifted = lift(kind, &u).and_then(|a| Ok((a, lift(kind, &v)?)));
            let (a, b) = match lifted {
                Ok(pair) => pair,
                Err(e) => {
                    let (cu, cv) = (ModelPoint::Chart(u), ModelPoint::Chart(v));
                    return domain_failure(i, g, n, &[&cu, &cv], e.name());
                }
            };
            let d = distance(&a, &b).expect("same model");
            if d >= MIN_PARAMETER_GAP {
                break (u, v, d);
            }
        };
        let (cu, cv) = (ModelPoint::Chart(u.clone()), ModelPoint::Chart(v.clone()));
        let (chart, oracle) = match g {
            Geometry::Spherical => (chart_sin_distance(&u, &v), d.sin()),
            _ => (chart_sinh_distance(&u, &v), d.sinh()),
        };
        match chart {
            Ok(c) => {
                let residual = (c - oracle).abs() / oracle.abs().max(f64::MIN_POSITIVE);
                judge(i, g, n, &[&cu, &cv], oracle, c, residual, cfg.tol)
            }
            Err(e) => domain_failure(i, g, n, &[&cu, &cv], e.name()),
        }
    })
}

/// Orthonormal (Euclidean) basis of the span of three vectors, or `None` if
/// they are nearly dependent.
fn orthonormal3(v: [&RealVector; 3]) -> Option<[RealVector; 3]> {
    let mut out: Vec<RealVector> = Vec::with_capacity(3);
    for x in v {
        let mut w = x.clone();
        for _ in 0..2 {
            for q in &out {
                let c: f64 = q
                    .as_slice()
                    .iter()
                    .zip(w.as_slice())
                    .map(|(a, b)| a * b)
                    .sum();
                w = w.add_scaled(-c, q);
            }
        }
        let norm = w.norm();
        if norm < 1e-3 * x.norm() {
            return None;
        }
        out.push(w.scale(1.0 / norm));
    }
    out.try_into().ok()
}

/// A random pencil configuration: source quadruple, apex, and the image on a
/// random target geodesic in their common 3-space. Configurations whose
/// transfer leaves the model, or whose images crowd together or run far out,
/// are redrawn.
pub fn sample_pencil(
    rng: &mut SampleRng,
    geometry: Geometry,
    n: usize,
) -> (ModelPoint, CollinearQuadruple, TwoPlane, CollinearQuadruple) {
    use rand::Rng;
    use rand_distr::StandardNormal;
    loop {
        let source = sample_quadruple(rng, geometry, n);
        let apex = random_point(rng, geometry, n);
        let pts = source.points();
        let Some(basis) = orthonormal3([pts[0].position(), pts[3].position(), apex.position()])
        else {
            continue;
        };
        // One target vector is a positive mix of model points, so the target
        // geodesic meets the model; the other is a random vector of the 3-space.
        let w: [f64; 3] = [0; 3].map(|_| rng.random_range(0.1..1.0));
        let t1 = apex
            .position()
            .scale(w[0])
            .add_scaled(w[1], pts[1].position())
            .add_scaled(w[2], pts[2].position());
        let g: [f64; 3] = [0; 3].map(|_| rng.sample(StandardNormal));
        let t2 = basis[0]
            .scale(g[0])
            .add_scaled(g[1], &basis[1])
            .add_scaled(g[2], &basis[2]);
        let Ok(target) = TwoPlane::new(t1, t2) else {
            continue;
        };
        let Ok(image) = pencil_transfer(&apex, &source, &target) else {
            continue;
        };
        if well_conditioned(&image) {
            return (apex, source, target, image);
        }
    }
}

fn well_conditioned(q: &CollinearQuadruple) -> bool {
    let p = q.points();
    for i in 0..4 {
        for j in (i + 1)..4 {
            if distance(&p[i], &p[j]).expect("same model") < MIN_PARAMETER_GAP {
                return false;
            }
        }
    }
    let origin = ModelPoint::reference(q.geometry(), q.n());
    p.iter().all(|x| match q.geometry() {
        Geometry::Euclidean => x.coords().iter().all(|c| c.abs() <= 1e3),
        Geometry::Spherical => x.position().last() >= EQUATOR_CLEARANCE.sin(),
        Geometry::Hyperbolic => distance(&origin, x).expect("same model") <= 5.0,
    })
}

fn pencil_invariance(cfg: &SuiteConfig) -> SweepReport {
    let cases = cases_by_geometry(&Geometry::ALL, &cfg.dims);
    sweep(cfg, &cases, |&(g, n), i, rng| {
        let (apex, source, _, image) = sample_pencil(rng, g, n);
        let expected = cross_ratio(&source).value();
        let actual = cross_ratio(&image).value();
        let residual = (actual - expected).abs() / (1.0 + expected);
        let inputs: Vec<&ModelPoint> = std::iter::once(&apex).chain(source.points()).collect();
        judge(i, g, n, &inputs, expected, actual, residual, cfg.tol)
    })
}

fn sine_rule(cfg: &SuiteConfig) -> SweepReport {
    let cases = cases_by_geometry(&Geometry::ALL, &cfg.dims);
    sweep(cfg, &cases, |&(g, n), i, rng| {
        let t = sample_triangle(rng, g, n);
        let v = t.vertices();
        let inputs = [&v[0], &v[1], &v[2]];
        match sine_rule_residual(&t) {
            Ok(r) => judge(i, g, n, &inputs, 0.0, r, r, cfg.tol),
            Err(e) => domain_failure(i, g, n, &inputs, e.name()),
        }
    })
}

fn distinct_pair(rng: &mut SampleRng, ball: &BallSpec, n: usize) -> (ModelPoint, ModelPoint) {
    loop {
        let x = point_in_ball(rng, ball, n, BALL_FILL);
        let y = point_in_ball(rng, ball, n, BALL_FILL);
        if distance(&x, &y).expect("same model") >= 1e-6 {
            return (x, y);
        }
    }
}

fn cases_by_radius(radii: &[f64], dims: &[usize]) -> Vec<(f64, usize)> {
    radii
        .iter()
        .flat_map(|&r| dims.iter().map(move |&n| (r, n)))
        .collect()
}

fn hilbert_isometry(cfg: &SuiteConfig, geometry: Geometry, radii: &[f64]) -> SweepReport {
    let cases = cases_by_radius(radii, &cfg.dims);
    sweep(cfg, &cases, |&(rho, n), i, rng| {
        let ball = BallSpec::new(geometry, rho).expect("valid radius");
        let (x, y) = distinct_pair(rng, &ball, n);
        let curved = hilbert_distance(&ball, &x, &y);
        let flat = project(&x)
            .and_then(|u| Ok((u, project(&y)?)))
            .and_then(|(u, v)| {
                hilbert_distance(
                    &ball.chart_ball(),
                    &ModelPoint::Chart(u),
                    &ModelPoint::Chart(v),
                )
            });
        match (curved, flat) {
            (Ok(h), Ok(e)) => judge(i, geometry, n, &[&x, &y], e, h, (h - e).abs(), cfg.tol),
            (Err(e), _) | (_, Err(e)) => domain_failure(i, geometry, n, &[&x, &y], e.name()),
        }
    })
}

fn homothety(cfg: &SuiteConfig) -> SweepReport {
    let mut cases = Vec::new();
    for rho in [0.3, 0.7, 1.2] {
        for lambda in [0.5, 3.0, 10.0] {
            for &n in &cfg.dims {
                cases.push((rho, lambda, n));
            }
        }
    }
    let g = Geometry::Euclidean;
    sweep(cfg, &cases, |&(rho, lambda, n), i, rng| {
        let ball = BallSpec::new(g, rho).expect("valid radius");
        let big = BallSpec::new(g, lambda * rho).expect("valid radius");
        let (x, y) = distinct_pair(rng, &ball, n);
        let scale = |p: &ModelPoint| {
            let c: Vec<f64> = p.coords().iter().map(|c| c * lambda).collect();
            ModelPoint::from_coords(g, &c)
        };
        let result = hilbert_distance(&ball, &x, &y).and_then(|h| {
            let (sx, sy) = (scale(&x)?, scale(&y)?);
            Ok((h, hilbert_distance(&big, &sx, &sy)?))
        });
        match result {
            Ok((h, hs)) => judge(i, g, n, &[&x, &y], h, hs, (hs - h).abs(), cfg.tol),
            Err(e) => domain_failure(i, g, n, &[&x, &y], e.name()),
        }
    })
}

fn bk_factor2(cfg: &SuiteConfig) -> SweepReport {
    let mut cases = Vec::new();
    for (g, radii) in [
        (Geometry::Spherical, [FRAC_PI_6, FRAC_PI_3]),
        (Geometry::Hyperbolic, [0.3, 1.2]),
    ] {
        for rho in radii {
            for &n in &cfg.dims {
                cases.push((g, rho, n));
            }
        }
    }
    sweep(cfg, &cases, |&(g, rho, n), i, rng| {
        let ball = BallSpec::new(g, rho).expect("valid radius");
        let (x, y) = distinct_pair(rng, &ball, n);
        let result = hilbert_distance(&ball, &x, &y).and_then(|h| {
            let a = ModelPoint::Hyperboloid(bk_isometry(&ball, &x)?);
            let b = ModelPoint::Hyperboloid(bk_isometry(&ball, &y)?);
            Ok((h, 2.0 * distance(&a, &b)?))
        });
        match result {
            Ok((h, twice)) => judge(i, g, n, &[&x, &y], h, twice, (h - twice).abs(), cfg.tol),
            Err(e) => domain_failure(i, g, n, &[&x, &y], e.name()),
        }
    })
}

/// Euclidean cross ratio of four arclength parameters.
fn parameter_cross_ratio(t: &[f64; 4]) -> f64 {
    let d = |i: usize, j: usize| (t[i] - t[j]).abs();
    (d(1, 3) / d(2, 3)) * (d(2, 0) / d(1, 0))
}

fn degenerate_limit(cfg: &SuiteConfig) -> SweepReport {
    let cases = cases_by_geometry(&[Geometry::Spherical, Geometry::Hyperbolic], &cfg.dims);
    let (lo, hi) = DECAY_RATIO_RANGE;
    sweep(cfg, &cases, |&(g, n), i, rng| {
        let (ray, params) = sample_shrinkable(rng, g, n);
        let flat = parameter_cross_ratio(&params);
        let residual_at = |scale: f64| -> GeoResult<f64> {
            let pts: GeoResult<Vec<ModelPoint>> = params
                .iter()
                .map(|&t| geodesic_point(&ray, scale * t))
                .collect();
            let pts: [ModelPoint; 4] = pts?.try_into().expect("four points");
            let q = CollinearQuadruple::new(pts)?;
            Ok((bracket(q.points()) - flat).abs())
        };
        let base = ray.base().clone();
        match (residual_at(SHRINK_SCALES[0]), residual_at(SHRINK_SCALES[1])) {
            (Ok(coarse), Ok(fine)) => {
                let ratio = coarse / fine;
                let pass = (lo..=hi).contains(&ratio);
                let record = SampleRecord::new(i, g, n, Some(ratio), pass);
                let failure = (!pass).then(|| FailureRecord {
                    sample_index: i,
                    geometry: g,
                    n,
                    inputs: vec![
                        base.coords().to_vec(),
                        ray.direction().as_slice().to_vec(),
                        params.to_vec(),
                    ],
                    expected: Some((SHRINK_SCALES[0] / SHRINK_SCALES[1]).powi(2)),
                    actual: Some(ratio),
                    residual: Some(ratio),
                    reason: "NonQuadraticDecay".into(),
                });
                (record, failure)
            }
            (Err(e), _) | (_, Err(e)) => domain_failure(i, g, n, &[&base], e.name()),
        }
    })
}
