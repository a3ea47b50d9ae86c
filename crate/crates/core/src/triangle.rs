//! Geodesic triangles and the sine rule.

use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use crate::cross_ratio::DISTINCT_TOL;
use crate::error::{GeometryError, Result};
use crate::linalg::{dot_unchecked, numeric_rank, RealVector, DEFAULT_RANK_TOL};
use crate::model::{check_same_model, distance_unchecked, GeodesicRay, Geometry, ModelPoint};

/// Largest admissible side of a spherical triangle.
pub const MAX_SPHERICAL_SIDE: f64 = FRAC_PI_2 - 1e-6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Triangle {
    vertices: [ModelPoint; 3],
}

impl Triangle {
    pub fn new(a: ModelPoint, b: ModelPoint, c: ModelPoint) -> Result<Self> {
        check_same_model(&a, &b)?;
        check_same_model(&a, &c)?;
        let vertices = [a, b, c];
        let sides = side_lengths(&vertices);
        if sides.iter().any(|&s| s < DISTINCT_TOL) {
            return Err(GeometryError::DegenerateTriangle);
        }
        let positions: Vec<RealVector> = vertices.iter().map(|v| v.position().clone()).collect();
        if numeric_rank(&positions, DEFAULT_RANK_TOL) < 3 {
            return Err(GeometryError::DegenerateTriangle);
        }
        if vertices[0].geometry() == Geometry::Spherical
            && sides.iter().any(|&s| s > MAX_SPHERICAL_SIDE)
        {
            return Err(GeometryError::TriangleTooLarge);
        }
        Ok(Triangle { vertices })
    }

    pub fn geometry(&self) -> Geometry {
        self.vertices[0].geometry()
    }

    pub fn vertices(&self) -> &[ModelPoint; 3] {
        &self.vertices
    }

    /// Side lengths `(a, b, c)`, each opposite the vertex of the same index.
    pub fn sides(&self) -> [f64; 3] {
        side_lengths(&self.vertices)
    }
}

fn side_lengths(v: &[ModelPoint; 3]) -> [f64; 3] {
    [
        distance_unchecked(&v[1], &v[2]),
        distance_unchecked(&v[2], &v[0]),
        distance_unchecked(&v[0], &v[1]),
    ]
}

/// Interior angles at the three vertices, from the unit tangents toward the
/// two other vertices.
pub fn triangle_angles(t: &Triangle) -> Result<[f64; 3]> {
    let v = &t.vertices;
    let form = t.geometry().form();
    let mut angles = [0.0; 3];
    for (i, angle) in angles.iter_mut().enumerate() {
        let at = &v[i];
        let to_p = GeodesicRay::toward(at, &v[(i + 1) % 3])
            .map_err(|_| GeometryError::DegenerateTriangle)?;
        let to_q = GeodesicRay::toward(at, &v[(i + 2) % 3])
            .map_err(|_| GeometryError::DegenerateTriangle)?;
        let c = dot_unchecked(
            form,
            to_p.direction().as_slice(),
            to_q.direction().as_slice(),
        );
        *angle = c.clamp(-1.0, 1.0).acos();
        if !(*angle > 0.0 && *angle < std::f64::consts::PI) {
            return Err(GeometryError::DegenerateTriangle);
        }
    }
    Ok(angles)
}

/// Largest pairwise difference between `L(a)/sin A`, `L(b)/sin B` and
/// `L(c)/sin C`, with `L` the identity, `sin` or `sinh`.
pub fn sine_rule_residual(t: &Triangle) -> Result<f64> {
    let angles = triangle_angles(t)?;
    let sides = t.sides();
    let g = t.geometry();
    let ratios: Vec<f64> = sides
        .iter()
        .zip(&angles)
        .map(|(&s, &a)| g.length_function(s) / a.sin())
        .collect();
    let mut worst: f64 = 0.0;
    for i in 0..3 {
        for j in (i + 1)..3 {
            worst = worst.max((ratios[i] - ratios[j]).abs());
        }
    }
    Ok(worst)
}
