//! Cross ratios of four points on a geodesic.
//!
//! For an ordered quadruple `(A₁, A₂, A₃, A₄)` the value is the bracket
//! `[A₂, A₃, A₄, A₁] = L(A₂A₄)/L(A₃A₄) · L(A₃A₁)/L(A₂A₁)` where `L` is the
//! identity, `sin` or `sinh` according to the geometry and `AᵢAⱼ` is the
//! unsigned geodesic distance.

use serde::{Deserialize, Serialize};

use crate::error::{GeometryError, Result};
use crate::linalg::DEFAULT_RANK_TOL;
use crate::model::{check_same_model, collinear_check, distance_unchecked, Geometry, ModelPoint};

/// Minimum pairwise distance for points to count as distinct.
pub const DISTINCT_TOL: f64 = 1e-9;

/// Four ordered, pairwise distinct points on one geodesic.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CollinearQuadruple {
    points: [ModelPoint; 4],
}

impl CollinearQuadruple {
    pub fn new(points: [ModelPoint; 4]) -> Result<Self> {
        for p in &points[1..] {
            check_same_model(&points[0], p)?;
        }
        for i in 0..4 {
            for j in (i + 1)..4 {
                if distance_unchecked(&points[i], &points[j]) < DISTINCT_TOL {
                    return Err(GeometryError::NotDistinct);
                }
            }
        }
        if !collinear_check(&points, DEFAULT_RANK_TOL) {
            return Err(GeometryError::NotCollinear);
        }
        Ok(CollinearQuadruple { points })
    }

    pub fn geometry(&self) -> Geometry {
        self.points[0].geometry()
    }

    pub fn points(&self) -> &[ModelPoint; 4] {
        &self.points
    }

    pub fn n(&self) -> usize {
        self.points[0].n()
    }

    pub fn into_points(self) -> [ModelPoint; 4] {
        self.points
    }
}

/// A cross-ratio value; positive for valid quadruples.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CrossRatio(pub f64);

impl CrossRatio {
    pub fn value(self) -> f64 {
        self.0
    }
}

pub fn cross_ratio(q: &CollinearQuadruple) -> CrossRatio {
    CrossRatio(bracket(&q.points))
}

/// The bracket evaluated on any four points of one model, collinear or not.
/// Used to score candidate perspectivities whose images may fail the
/// quadruple invariants.
pub(crate) fn bracket(p: &[ModelPoint; 4]) -> f64 {
    let g = p[0].geometry();
    let l = |i: usize, j: usize| g.length_function(distance_unchecked(&p[i], &p[j]));
    // Indices are 0-based: A₁ = p[0], …, A₄ = p[3].
    (l(1, 3) / l(2, 3)) * (l(2, 0) / l(1, 0))
}
