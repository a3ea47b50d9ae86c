//! Hilbert metrics on geodesic balls centred at the reference point, and the
//! maps realizing them as Beltrami–Klein models of hyperbolic space.
//!
//! Boundary points are found in the Euclidean chart, where a geodesic ball of
//! radius ρ is the round ball of radius ρ, `tan ρ` or `tanh ρ` and the chord
//! through two points is a straight segment.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::cross_ratio::DISTINCT_TOL;
use crate::error::{GeometryError, Result};
use crate::linalg::RealVector;
use crate::model::{
    check_same_model, distance_unchecked, ChartPoint, Geometry, HyperboloidPoint, ModelPoint,
    SpherePoint,
};
use crate::projective::project;

/// Margin by which points must lie inside the ball.
pub const INTERIOR_MARGIN: f64 = 1e-9;

/// Hyperbolic radii whose chart radius `tanh ρ` is within this of 1 are
/// rejected; the chart ball would touch the unit sphere in double precision.
const MAX_TANH: f64 = 1.0 - 1e-12;

/// Geodesic ball of radius ρ around the reference point `(0, …, 0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallSpec {
    geometry: Geometry,
    radius: f64,
}

impl BallSpec {
    pub fn new(geometry: Geometry, radius: f64) -> Result<Self> {
        let ok = radius.is_finite()
            && radius > 0.0
            && match geometry {
                Geometry::Euclidean => true,
                Geometry::Spherical => radius < FRAC_PI_2,
                Geometry::Hyperbolic => radius.tanh() < MAX_TANH,
            };
        if !ok {
            return Err(GeometryError::RadiusOutOfRange(radius));
        }
        Ok(BallSpec { geometry, radius })
    }

    pub fn geometry(&self) -> Geometry {
        self.geometry
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn center(&self, n: usize) -> ModelPoint {
        ModelPoint::reference(self.geometry, n)
    }

    /// Radius of the image of the ball in the chart.
    pub fn chart_radius(&self) -> f64 {
        match self.geometry {
            Geometry::Euclidean => self.radius,
            Geometry::Spherical => self.radius.tan(),
            Geometry::Hyperbolic => self.radius.tanh(),
        }
    }

    /// The Euclidean ball that this one projects onto.
    pub fn chart_ball(&self) -> BallSpec {
        BallSpec {
            geometry: Geometry::Euclidean,
            radius: self.chart_radius(),
        }
    }

    fn check_inside(&self, p: &ModelPoint) -> Result<()> {
        if p.geometry() != self.geometry {
            return Err(GeometryError::ModelMismatch);
        }
        if distance_unchecked(&self.center(p.n()), p) > self.radius - INTERIOR_MARGIN {
            return Err(GeometryError::PointOutsideBall);
        }
        Ok(())
    }
}

/// Where the ray from `x` through `y` leaves the ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryHit {
    pub point: ModelPoint,
    /// Arclength from `x` to `point`.
    pub ray_parameter: f64,
}

pub fn boundary_hit(ball: &BallSpec, x: &ModelPoint, y: &ModelPoint) -> Result<BoundaryHit> {
    check_same_model(x, y)?;
    ball.check_inside(x)?;
    ball.check_inside(y)?;
    if distance_unchecked(x, y) < DISTINCT_TOL {
        return Err(GeometryError::CoincidentPoints);
    }
    let point = exit_point(ball, x, y)?;
    let ray_parameter = distance_unchecked(x, &point);
    Ok(BoundaryHit {
        point,
        ray_parameter,
    })
}

/// Exit point of the ray x → y, by intersecting the chart chord with the
/// chart ball and lifting back.
fn exit_point(ball: &BallSpec, x: &ModelPoint, y: &ModelPoint) -> Result<ModelPoint> {
    let u = project(x)?;
    let v = project(y)?;
    let u = u.coords();
    let w: Vec<f64> = v.coords().iter().zip(u).map(|(a, b)| a - b).collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();

    let r = ball.chart_radius();
    let a = dot(&w, &w);
    if a == 0.0 {
        return Err(GeometryError::CoincidentPoints);
    }
    let b = 2.0 * dot(u, &w);
    let c = dot(u, u) - r * r;
    // c < 0 for interior u, so the roots have opposite signs; pick the
    // positive one without cancellation.
    let sq = (b * b - 4.0 * a * c).max(0.0).sqrt();
    let t = if b >= 0.0 {
        2.0 * c / (-b - sq)
    } else {
        (-b + sq) / (2.0 * a)
    };
    let hit: Vec<f64> = u.iter().zip(&w).map(|(p, d)| p + t * d).collect();
    let chart = ChartPoint::from_coords(&hit)?;
    match ball.geometry {
        Geometry::Euclidean => Ok(ModelPoint::Chart(chart)),
        Geometry::Spherical => SpherePoint::normalize(chart.ambient()).map(ModelPoint::Sphere),
        Geometry::Hyperbolic => {
            HyperboloidPoint::normalize(chart.ambient()).map(ModelPoint::Hyperboloid)
        }
    }
}

/// Hilbert distance in the ball: the log of
/// `L(d(x,b⁺))/L(d(y,b⁺)) · L(d(y,b⁻))/L(d(x,b⁻))` with `b⁺ = b(x,y)`,
/// `b⁻ = b(y,x)` and `L` the identity, `sin` or `sinh`. Zero when `x = y`.
pub fn hilbert_distance(ball: &BallSpec, x: &ModelPoint, y: &ModelPoint) -> Result<f64> {
    check_same_model(x, y)?;
    ball.check_inside(x)?;
    ball.check_inside(y)?;
    if x.position() == y.position() {
        return Ok(0.0);
    }
    let forward = exit_point(ball, x, y)?;
    let backward = exit_point(ball, y, x)?;
    let l =
        |p: &ModelPoint, q: &ModelPoint| ball.geometry.length_function(distance_unchecked(p, q));
    let ratio = (l(x, &forward) / l(y, &forward)) * (l(y, &backward) / l(x, &backward));
    Ok(ratio.ln())
}

/// Sends a point of the ball to the hyperboloid so that Hilbert distances
/// become twice hyperbolic distances: project to the chart, rescale the chart
/// ball onto the unit disc, and lift.
pub fn bk_isometry(ball: &BallSpec, x: &ModelPoint) -> Result<HyperboloidPoint> {
    ball.check_inside(x)?;
    let u = project(x)?;
    let r = ball.chart_radius();
    let mut k: Vec<f64> = u.coords().iter().map(|c| c / r).collect();
    k.push(1.0);
    HyperboloidPoint::normalize(&RealVector::new(k)?)
}
