//! The three model spaces.
//!
//! Every point is carried as a vector of ℝⁿ⁺¹:
//!
//! * Euclidean points live on the affine chart `{x_{n+1} = 1}`;
//! * spherical points are unit vectors of the open upper hemisphere;
//! * hyperbolic points lie on the upper sheet of `⟨x,x⟩_M = −1`.
//!
//! Geodesics of all three are the traces of 2-planes through the origin.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::linalg::{dot_unchecked, gram2_unchecked, numeric_rank, FormKind, RealVector, TwoPlane};

/// Tolerance on the defining equation when accepting a curved-model point.
pub const MODEL_TOL: f64 = 1e-10;

/// Margin keeping hyperbolic chart points inside the open unit disc.
pub const DISC_MARGIN: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Geometry {
    Euclidean,
    Spherical,
    Hyperbolic,
}

impl Geometry {
    pub const ALL: [Geometry; 3] = [
        Geometry::Euclidean,
        Geometry::Spherical,
        Geometry::Hyperbolic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Geometry::Euclidean => "euclidean",
            Geometry::Spherical => "spherical",
            Geometry::Hyperbolic => "hyperbolic",
        }
    }

    /// The function applied to lengths in cross ratios and the sine rule:
    /// identity, `sin` or `sinh`.
    pub fn length_function(self, d: f64) -> f64 {
        match self {
            Geometry::Euclidean => d,
            Geometry::Spherical => d.sin(),
            Geometry::Hyperbolic => d.sinh(),
        }
    }

    pub(crate) fn form(self) -> FormKind {
        match self {
            Geometry::Hyperbolic => FormKind::Minkowski,
            _ => FormKind::Euclidean,
        }
    }
}

impl fmt::Display for Geometry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Geometry {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "euclidean" => Ok(Geometry::Euclidean),
            "spherical" => Ok(Geometry::Spherical),
            "hyperbolic" => Ok(Geometry::Hyperbolic),
            other => Err(format!("unknown geometry `{other}`")),
        }
    }
}

/// A point of the affine chart `{x_{n+1} = 1}`, identified with ℝⁿ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint(RealVector);

impl ChartPoint {
    /// From the n chart coordinates.
    pub fn from_coords(coords: &[f64]) -> Result<Self> {
        if coords.is_empty() {
            return Err(GeometryError::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        let mut v = coords.to_vec();
        v.push(1.0);
        Ok(ChartPoint(RealVector::new(v)?))
    }

    /// From an ambient vector whose last coordinate is exactly 1.
    pub fn from_ambient(v: RealVector) -> Result<Self> {
        if v.len() < 2 {
            return Err(GeometryError::DimensionMismatch {
                expected: 2,
                found: v.len(),
            });
        }
        if !v.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        if v.last() != 1.0 {
            return Err(GeometryError::InvalidPoint(
                "chart point must have last coordinate 1".into(),
            ));
        }
        Ok(ChartPoint(v))
    }

    /// Divides by the last coordinate, which must be nonzero.
    pub(crate) fn dehomogenize(v: &RealVector) -> Result<Self> {
        let w = v.last();
        let mut c: Vec<f64> = v.space_part().iter().map(|x| x / w).collect();
        c.push(1.0);
        let out = RealVector::from_vec_unchecked(c);
        if !out.is_finite() {
            return Err(GeometryError::NonFinite);
        }
        Ok(ChartPoint(out))
    }

    pub fn n(&self) -> usize {
        self.0.len() - 1
    }

    pub fn coords(&self) -> &[f64] {
        self.0.space_part()
    }

    /// The lift `(u, 1)` in ℝⁿ⁺¹.
    pub fn ambient(&self) -> &RealVector {
        &self.0
    }

    /// Euclidean norm of the chart coordinates.
    pub fn radius(&self) -> f64 {
        self.coords().iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

/// A unit vector of ℝⁿ⁺¹ with positive last coordinate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint(RealVector);

impl SpherePoint {
    pub fn new(p: RealVector) -> Result<Self> {
        check_ambient(&p)?;
        let sq = dot_unchecked(FormKind::Euclidean, p.as_slice(), p.as_slice());
        if (sq - 1.0).abs() > MODEL_TOL {
            return Err(GeometryError::InvalidPoint(format!(
                "sphere point has squared norm {sq}"
            )));
        }
        if p.last() <= 0.0 {
            return Err(GeometryError::OutOfHemisphere);
        }
        Ok(SpherePoint(p))
    }

    /// Radially normalizes a nonzero vector onto the sphere.
    pub fn normalize(v: &RealVector) -> Result<Self> {
        check_ambient(v)?;
        let norm = v.norm();
        if norm == 0.0 {
            return Err(GeometryError::InvalidPoint("zero vector".into()));
        }
        let p = v.scale(1.0 / norm);
        if p.last() <= 0.0 {
            return Err(GeometryError::OutOfHemisphere);
        }
        Ok(SpherePoint(p))
    }

    pub fn position(&self) -> &RealVector {
        &self.0
    }
}

/// A point on the upper sheet of the hyperboloid `⟨x,x⟩_M = −1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HyperboloidPoint(RealVector);

impl HyperboloidPoint {
    pub fn new(p: RealVector) -> Result<Self> {
        check_ambient(&p)?;
        let sq = dot_unchecked(FormKind::Minkowski, p.as_slice(), p.as_slice());
        let scale = p.last().abs().max(1.0);
        if (sq + 1.0).abs() > MODEL_TOL * scale * scale {
            return Err(GeometryError::InvalidPoint(format!(
                "hyperboloid point has Minkowski square {sq}"
            )));
        }
        if p.last() < 1.0 - MODEL_TOL {
            return Err(GeometryError::InvalidPoint(
                "hyperboloid point is not on the upper sheet".into(),
            ));
        }
        Ok(HyperboloidPoint(p))
    }

    /// Normalizes a future-pointing time-like vector onto the upper sheet.
    pub fn normalize(v: &RealVector) -> Result<Self> {
        check_ambient(v)?;
        let sq = dot_unchecked(FormKind::Minkowski, v.as_slice(), v.as_slice());
        if sq >= 0.0 || v.last() <= 0.0 {
            return Err(GeometryError::InvalidPoint(
                "vector is not future time-like".into(),
            ));
        }
        Ok(HyperboloidPoint(v.scale(1.0 / (-sq).sqrt())))
    }

    /// The apex `(0, …, 0, 1)`.
    pub fn apex(n: usize) -> Self {
        HyperboloidPoint(RealVector::basis(n + 1, n))
    }

    pub fn position(&self) -> &RealVector {
        &self.0
    }
}

fn check_ambient(v: &RealVector) -> Result<()> {
    if v.len() < 2 {
        return Err(GeometryError::DimensionMismatch {
            expected: 2,
            found: v.len(),
        });
    }
    if !v.is_finite() {
        return Err(GeometryError::NonFinite);
    }
    Ok(())
}

/// A point of one of the three model spaces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", content = "coords", rename_all = "lowercase")]
pub enum ModelPoint {
    Chart(ChartPoint),
    Sphere(SpherePoint),
    Hyperboloid(HyperboloidPoint),
}

impl ModelPoint {
    /// Builds a point from the coordinates used by the CLI: n chart
    /// coordinates for Euclidean, n+1 ambient coordinates otherwise.
    pub fn from_coords(geometry: Geometry, coords: &[f64]) -> Result<Self> {
        match geometry {
            Geometry::Euclidean => ChartPoint::from_coords(coords).map(ModelPoint::Chart),
            Geometry::Spherical => {
                SpherePoint::new(RealVector::new(coords.to_vec())?).map(ModelPoint::Sphere)
            }
            Geometry::Hyperbolic => HyperboloidPoint::new(RealVector::new(coords.to_vec())?)
                .map(ModelPoint::Hyperboloid),
        }
    }

    /// The reference point `(0, …, 0, 1)` of the given model.
    pub fn reference(geometry: Geometry, n: usize) -> Self {
        let e = RealVector::basis(n + 1, n);
        match geometry {
            Geometry::Euclidean => ModelPoint::Chart(ChartPoint(e)),
            Geometry::Spherical => ModelPoint::Sphere(SpherePoint(e)),
            Geometry::Hyperbolic => ModelPoint::Hyperboloid(HyperboloidPoint(e)),
        }
    }

    pub fn geometry(&self) -> Geometry {
        match self {
            ModelPoint::Chart(_) => Geometry::Euclidean,
            ModelPoint::Sphere(_) => Geometry::Spherical,
            ModelPoint::Hyperboloid(_) => Geometry::Hyperbolic,
        }
    }

    /// Position vector in ℝⁿ⁺¹ (chart points are lifted to `(u, 1)`).
    pub fn position(&self) -> &RealVector {
        match self {
            ModelPoint::Chart(c) => c.ambient(),
            ModelPoint::Sphere(s) => s.position(),
            ModelPoint::Hyperboloid(h) => h.position(),
        }
    }

    pub fn n(&self) -> usize {
        self.position().len() - 1
    }

    /// Coordinates in the CLI convention (see [`ModelPoint::from_coords`]).
    pub fn coords(&self) -> &[f64] {
        match self {
            ModelPoint::Chart(c) => c.coords(),
            other => other.position().as_slice(),
        }
    }
}

pub(crate) fn check_same_model(p: &ModelPoint, q: &ModelPoint) -> Result<()> {
    if p.geometry() != q.geometry() {
        return Err(GeometryError::ModelMismatch);
    }
    if p.n() != q.n() {
        return Err(GeometryError::DimensionMismatch {
            expected: p.n(),
            found: q.n(),
        });
    }
    Ok(())
}

/// Geodesic distance within one model.
///
/// The curved cases use the half-chord forms `2·asin(|p−q|/2)` and
/// `2·asinh(‖p−q‖_M/2)`, equal to `arccos⟨p,q⟩` and `arccosh(−⟨p,q⟩_M)` but
/// accurate down to very small separations. The asin argument is clamped to
/// at most 1 and the Minkowski square of the chord to at least 0.
pub fn distance(p: &ModelPoint, q: &ModelPoint) -> Result<f64> {
    check_same_model(p, q)?;
    Ok(distance_unchecked(p, q))
}

pub(crate) fn distance_unchecked(p: &ModelPoint, q: &ModelPoint) -> f64 {
    match (p, q) {
        (ModelPoint::Chart(a), ModelPoint::Chart(b)) => a
            .coords()
            .iter()
            .zip(b.coords())
            .map(|(x, y)| (x - y) * (x - y))
            .sum::<f64>()
            .sqrt(),
        (ModelPoint::Sphere(a), ModelPoint::Sphere(b)) => {
            let a = a.position().scale(1.0 / a.position().norm());
            let b = b.position().scale(1.0 / b.position().norm());
            let half_chord = (&a - &b).norm() / 2.0;
            2.0 * half_chord.min(1.0).asin()
        }
        (ModelPoint::Hyperboloid(a), ModelPoint::Hyperboloid(b)) => {
            let a = minkowski_unit(a.position());
            let b = minkowski_unit(b.position());
            let chord = &a - &b;
            let sq = dot_unchecked(FormKind::Minkowski, chord.as_slice(), chord.as_slice());
            2.0 * (sq.max(0.0).sqrt() / 2.0).asinh()
        }
        _ => unreachable!("model checked by caller"),
    }
}

fn minkowski_unit(v: &RealVector) -> RealVector {
    let sq = dot_unchecked(FormKind::Minkowski, v.as_slice(), v.as_slice());
    v.scale(1.0 / (-sq).sqrt())
}

/// `sin d([u],[v])` for the radial lifts of two chart points, computed from
/// the Gram determinant: `√gram2_E(u,v) / (‖u‖‖v‖)`.
pub fn chart_sin_distance(u: &ChartPoint, v: &ChartPoint) -> Result<f64> {
    if u.n() != v.n() {
        return Err(GeometryError::DimensionMismatch {
            expected: u.n(),
            found: v.n(),
        });
    }
    let (a, b) = (u.ambient().as_slice(), v.ambient().as_slice());
    let g = gram2_unchecked(FormKind::Euclidean, a, b).max(0.0);
    Ok(g.sqrt() / (u.ambient().norm() * v.ambient().norm()))
}

/// `sinh d([u],[v])` for the hyperboloid lifts of two chart points of the
/// open unit disc: `√(−gram2_M(u,v)) / √(⟨u,u⟩_M ⟨v,v⟩_M)`.
pub fn chart_sinh_distance(u: &ChartPoint, v: &ChartPoint) -> Result<f64> {
    if u.n() != v.n() {
        return Err(GeometryError::DimensionMismatch {
            expected: u.n(),
            found: v.n(),
        });
    }
    if u.radius() >= 1.0 - DISC_MARGIN || v.radius() >= 1.0 - DISC_MARGIN {
        return Err(GeometryError::OutOfDisc);
    }
    let (a, b) = (u.ambient().as_slice(), v.ambient().as_slice());
    let g = (-gram2_unchecked(FormKind::Minkowski, a, b)).max(0.0);
    let uu = dot_unchecked(FormKind::Minkowski, a, a);
    let vv = dot_unchecked(FormKind::Minkowski, b, b);
    Ok(g.sqrt() / (uu * vv).sqrt())
}

/// The 2-plane through the origin carrying the geodesic through `p` and `q`.
pub fn geodesic_span(p: &ModelPoint, q: &ModelPoint) -> Result<TwoPlane> {
    check_same_model(p, q)?;
    TwoPlane::new(p.position().clone(), q.position().clone())
}

/// Whether all points lie on one geodesic: their position vectors span at
/// most a 2-plane.
pub fn collinear_check(points: &[ModelPoint], tol: f64) -> bool {
    let vectors: Vec<RealVector> = points.iter().map(|p| p.position().clone()).collect();
    numeric_rank(&vectors, tol) <= 2
}

/// A unit-speed geodesic ray: base point and unit tangent direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeodesicRay {
    base: ModelPoint,
    direction: RealVector,
}

impl GeodesicRay {
    /// Validates that `direction` is a unit tangent at `base`.
    pub fn new(base: ModelPoint, direction: RealVector) -> Result<Self> {
        if direction.len() != base.position().len() {
            return Err(GeometryError::DimensionMismatch {
                expected: base.position().len(),
                found: direction.len(),
            });
        }
        let form = base.geometry().form();
        let d = direction.as_slice();
        let tangency = match base.geometry() {
            Geometry::Euclidean => direction.last(),
            _ => dot_unchecked(form, base.position().as_slice(), d),
        };
        let unit = dot_unchecked(form, d, d);
        if tangency.abs() > MODEL_TOL || (unit - 1.0).abs() > MODEL_TOL {
            return Err(GeometryError::InvalidDirection);
        }
        Ok(GeodesicRay { base, direction })
    }

    /// The ray from `p` through `q`.
    pub fn toward(p: &ModelPoint, q: &ModelPoint) -> Result<Self> {
        check_same_model(p, q)?;
        let diff = q.position() - p.position();
        let base = p.position();
        // Tangential part of q − p; the normal correction is small and
        // computed from the difference, not from ⟨p,q⟩.
        let tangent = match p.geometry() {
            Geometry::Euclidean => diff,
            Geometry::Spherical => {
                let c = dot_unchecked(FormKind::Euclidean, base.as_slice(), diff.as_slice());
                diff.add_scaled(-c, base)
            }
            Geometry::Hyperbolic => {
                let c = dot_unchecked(FormKind::Minkowski, base.as_slice(), diff.as_slice());
                diff.add_scaled(c, base)
            }
        };
        let form = p.geometry().form();
        let sq = dot_unchecked(form, tangent.as_slice(), tangent.as_slice());
        if sq.is_nan() || sq <= 0.0 {
            return Err(GeometryError::CoincidentPoints);
        }
        Ok(GeodesicRay {
            base: p.clone(),
            direction: tangent.scale(1.0 / sq.sqrt()),
        })
    }

    pub fn base(&self) -> &ModelPoint {
        &self.base
    }

    pub fn direction(&self) -> &RealVector {
        &self.direction
    }

    pub fn geometry(&self) -> Geometry {
        self.base.geometry()
    }
}

/// The point at arclength `s` along the ray.
pub fn geodesic_point(ray: &GeodesicRay, s: f64) -> Result<ModelPoint> {
    let b = ray.base.position();
    let d = &ray.direction;
    match ray.geometry() {
        Geometry::Euclidean => {
            let v = b.add_scaled(s, d);
            ChartPoint::from_ambient(v).map(ModelPoint::Chart)
        }
        Geometry::Spherical => {
            let v = b.scale(s.cos()).add_scaled(s.sin(), d);
            SpherePoint::normalize(&v).map(ModelPoint::Sphere)
        }
        Geometry::Hyperbolic => {
            let v = b.scale(s.cosh()).add_scaled(s.sinh(), d);
            HyperboloidPoint::normalize(&v).map(ModelPoint::Hyperboloid)
        }
    }
}
