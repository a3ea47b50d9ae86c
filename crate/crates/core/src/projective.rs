//! Central projections from the origin onto the chart `{x_{n+1} = 1}`,
//! their inverse lifts, pencil transfers, and a sampled perspectivity check.

use serde::{Deserialize, Serialize};

use crate::cross_ratio::{bracket, CollinearQuadruple};
use crate::error::{GeometryError, Result};
use crate::linalg::{
    dot_unchecked, numeric_rank, plane_intersect_in_3space, FormKind, RealVector, TwoPlane,
    DEFAULT_RANK_TOL,
};
use crate::model::{
    collinear_check, ChartPoint, Geometry, HyperboloidPoint, ModelPoint, SpherePoint, DISC_MARGIN,
};
use crate::parallel::{map_indexed, Threads};
use crate::report::{FailureRecord, SampleRecord, SweepReport};

/// Smallest last coordinate a sphere point may have and still be projected.
pub const EQUATOR_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ProjectionKind {
    SphereToChart,
    HyperboloidToChart,
}

impl ProjectionKind {
    pub fn geometry(self) -> Geometry {
        match self {
            ProjectionKind::SphereToChart => Geometry::Spherical,
            ProjectionKind::HyperboloidToChart => Geometry::Hyperbolic,
        }
    }

    pub fn for_geometry(g: Geometry) -> Option<Self> {
        match g {
            Geometry::Spherical => Some(ProjectionKind::SphereToChart),
            Geometry::Hyperbolic => Some(ProjectionKind::HyperboloidToChart),
            Geometry::Euclidean => None,
        }
    }
}

/// `p ↦ p / p_{n+1}`. Chart points are returned unchanged.
pub fn project(p: &ModelPoint) -> Result<ChartPoint> {
    match p {
        ModelPoint::Chart(c) => Ok(c.clone()),
        ModelPoint::Sphere(s) => {
            if s.position().last() < EQUATOR_TOL {
                return Err(GeometryError::EquatorPoint);
            }
            ChartPoint::dehomogenize(s.position())
        }
        ModelPoint::Hyperboloid(h) => ChartPoint::dehomogenize(h.position()),
    }
}

/// Radial normalization of a chart point onto the sphere or hyperboloid.
pub fn lift(kind: ProjectionKind, u: &ChartPoint) -> Result<ModelPoint> {
    match kind {
        ProjectionKind::SphereToChart => {
            SpherePoint::normalize(u.ambient()).map(ModelPoint::Sphere)
        }
        ProjectionKind::HyperboloidToChart => {
            if u.radius() >= 1.0 - DISC_MARGIN {
                return Err(GeometryError::OutOfDisc);
            }
            HyperboloidPoint::normalize(u.ambient()).map(ModelPoint::Hyperboloid)
        }
    }
}

/// Transfers a quadruple along the pencil of geodesics through `apex` onto
/// the geodesic carried by `target`.
///
/// The i-th image is the intersection of the plane spanned by `apex` and the
/// i-th source point with `target`, normalized into the model. Source order
/// is preserved.
pub fn pencil_transfer(
    apex: &ModelPoint,
    source: &CollinearQuadruple,
    target: &TwoPlane,
) -> Result<CollinearQuadruple> {
    let g = source.geometry();
    if apex.geometry() != g {
        return Err(GeometryError::ModelMismatch);
    }
    if apex.n() != source.n() || target.dim() != apex.n() + 1 {
        return Err(GeometryError::DimensionMismatch {
            expected: source.n() + 1,
            found: target.dim(),
        });
    }
    let mut all: Vec<RealVector> = source
        .points()
        .iter()
        .map(|p| p.position().clone())
        .collect();
    all.push(apex.position().clone());
    if numeric_rank(&all, DEFAULT_RANK_TOL) <= 2 {
        return Err(GeometryError::ApexOnLine);
    }
    all.extend(target.basis().iter().cloned());
    if numeric_rank(&all, DEFAULT_RANK_TOL) > 3 {
        return Err(GeometryError::NonCoplanarConfiguration);
    }

    let mut images = Vec::with_capacity(4);
    for p in source.points() {
        let line = TwoPlane::new(apex.position().clone(), p.position().clone())?;
        let dir = match plane_intersect_in_3space(&line, target) {
            Ok(d) => d,
            // The target geodesic passes through the apex.
            Err(GeometryError::IdenticalPlanes) => return Err(GeometryError::ApexOnLine),
            Err(e) => return Err(e),
        };
        images.push(direction_to_model(g, dir)?);
    }
    let images: [ModelPoint; 4] = images.try_into().expect("four images");
    CollinearQuadruple::new(images)
}

/// The model point carried by a line through the origin.
fn direction_to_model(g: Geometry, dir: RealVector) -> Result<ModelPoint> {
    const ZERO: f64 = 1e-12;
    // `dir` is a unit vector with non-negative last coordinate.
    match g {
        Geometry::Euclidean => {
            if dir.last() < ZERO {
                return Err(GeometryError::NoIntersection);
            }
            ChartPoint::dehomogenize(&dir).map(ModelPoint::Chart)
        }
        Geometry::Spherical => {
            if dir.last() < ZERO {
                return Err(GeometryError::NoIntersection);
            }
            SpherePoint::normalize(&dir).map(ModelPoint::Sphere)
        }
        Geometry::Hyperbolic => {
            let sq = dot_unchecked(FormKind::Minkowski, dir.as_slice(), dir.as_slice());
            if sq > -ZERO || dir.last() <= 0.0 {
                return Err(GeometryError::NoIntersection);
            }
            HyperboloidPoint::normalize(&dir).map(ModelPoint::Hyperboloid)
        }
    }
}

/// Checks that `map` sends sampled collinear quadruples to collinear
/// quadruples with the same cross ratio.
///
/// `sampler(i)` produces the i-th source quadruple and must be deterministic
/// in `i`. A sample fails when its images are not collinear at the default
/// rank tolerance or when `|CR(images) − CR(source)| > tol·(1 + CR(source))`.
/// The recorded residual is `|CR(images) − CR(source)| / (1 + CR(source))`.
pub fn perspectivity_check<M, S>(
    name: &str,
    map: M,
    sampler: S,
    count: usize,
    tol: f64,
    threads: Threads,
) -> SweepReport
where
    M: Fn(&ModelPoint) -> Result<ModelPoint> + Sync,
    S: Fn(u64) -> CollinearQuadruple + Sync,
{
    let outcomes = map_indexed(count, threads, |i| {
        let source = sampler(i);
        let geometry = source.geometry();
        let n = source.n();
        let expected = bracket(source.points());
        let fail = |actual: Option<f64>, residual: Option<f64>, reason: &str| FailureRecord {
            sample_index: i,
            geometry,
            n,
            inputs: source
                .points()
                .iter()
                .map(|p| p.coords().to_vec())
                .collect(),
            expected: Some(expected),
            actual,
            residual,
            reason: reason.to_string(),
        };
        let images = match source
            .points()
            .iter()
            .map(&map)
            .collect::<Result<Vec<ModelPoint>>>()
        {
            Ok(images) => images,
            Err(e) => {
                let record = SampleRecord::new(i, geometry, n, None, false);
                return (record, Some(fail(None, None, e.name())));
            }
        };
        let images: [ModelPoint; 4] = images.try_into().expect("four images");
        if images
            .iter()
            .any(|p| p.geometry() != images[0].geometry() || p.n() != images[0].n())
        {
            let record = SampleRecord::new(i, geometry, n, None, false);
            return (record, Some(fail(None, None, "ModelMismatch")));
        }
        let actual = bracket(&images);
        let residual = (actual - expected).abs() / (1.0 + expected.abs());
        let collinear = collinear_check(&images, DEFAULT_RANK_TOL);
        let pass = collinear && residual <= tol;
        let record = SampleRecord::new(i, geometry, n, Some(residual), pass);
        if pass {
            (record, None)
        } else {
            let reason = if collinear {
                "CrossRatioMismatch"
            } else {
                "NotCollinear"
            };
            (record, Some(fail(Some(actual), Some(residual), reason)))
        }
    });
    SweepReport::from_outcomes(name, tol, outcomes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cross_ratio::cross_ratio;
    use crate::linalg::RealVector;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn pt(g: Geometry, c: &[f64]) -> ModelPoint {
        ModelPoint::from_coords(g, c).unwrap()
    }

    #[test]
    fn project_examples() {
        let pole = ModelPoint::reference(Geometry::Spherical, 2);
        assert_eq!(project(&pole).unwrap().coords(), &[0.0, 0.0]);
        let s = pt(Geometry::Spherical, &[1f64.sin(), 0.0, 1f64.cos()]);
        assert_relative_eq!(
            project(&s).unwrap().coords()[0],
            1f64.tan(),
            max_relative = 1e-15
        );
        let h = pt(Geometry::Hyperbolic, &[1f64.sinh(), 0.0, 1f64.cosh()]);
        assert_relative_eq!(
            project(&h).unwrap().coords()[0],
            0.7615941559557649,
            max_relative = 1e-15
        );
    }

    #[test]
    fn project_equator_rejected() {
        let p = SpherePoint::normalize(&RealVector::new(vec![1.0, 0.0, 1e-13]).unwrap()).unwrap();
        assert_eq!(
            project(&ModelPoint::Sphere(p)),
            Err(GeometryError::EquatorPoint)
        );
    }

    #[test]
    fn lift_examples() {
        let o = ChartPoint::from_coords(&[0.0, 0.0]).unwrap();
        assert_eq!(
            lift(ProjectionKind::SphereToChart, &o).unwrap(),
            ModelPoint::reference(Geometry::Spherical, 2)
        );
        assert_eq!(
            lift(ProjectionKind::HyperboloidToChart, &o).unwrap(),
            ModelPoint::reference(Geometry::Hyperbolic, 2)
        );
        let u = ChartPoint::from_coords(&[1.0, 0.0]).unwrap();
        let s = lift(ProjectionKind::SphereToChart, &u).unwrap();
        assert_relative_eq!(
            s.position().as_slice(),
            &[FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2][..],
            epsilon = 1e-15
        );
        let u = ChartPoint::from_coords(&[0.5, 0.0]).unwrap();
        let h = lift(ProjectionKind::HyperboloidToChart, &u).unwrap();
        let k = 1.0 / 0.75f64.sqrt();
        assert_relative_eq!(
            h.position().as_slice(),
            &[0.5 * k, 0.0, k][..],
            epsilon = 1e-15
        );
        let out = ChartPoint::from_coords(&[1.0, 0.0]).unwrap();
        assert_eq!(
            lift(ProjectionKind::HyperboloidToChart, &out),
            Err(GeometryError::OutOfDisc)
        );
    }

    fn euclid_quad(pts: &[[f64; 2]; 4]) -> CollinearQuadruple {
        CollinearQuadruple::new(pts.map(|c| pt(Geometry::Euclidean, &c))).unwrap()
    }

    #[test]
    fn euclidean_pencil_halves() {
        let apex = pt(Geometry::Euclidean, &[0.0, 1.0]);
        let source = euclid_quad(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [4.0, 0.0]]);
        let target = TwoPlane::new(
            RealVector::new(vec![0.0, 0.5, 1.0]).unwrap(),
            RealVector::new(vec![1.0, 0.5, 1.0]).unwrap(),
        )
        .unwrap();
        let out = pencil_transfer(&apex, &source, &target).unwrap();
        let expected = [[0.0, 0.5], [0.5, 0.5], [1.0, 0.5], [2.0, 0.5]];
        for (p, e) in out.points().iter().zip(expected) {
            assert_relative_eq!(p.coords(), &e[..], epsilon = 1e-12);
        }
        assert_relative_eq!(
            cross_ratio(&out).value(),
            cross_ratio(&source).value(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn pencil_identity_on_source_plane() {
        let apex = pt(Geometry::Euclidean, &[0.0, 1.0]);
        let source = euclid_quad(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [4.0, 0.0]]);
        let target = TwoPlane::new(
            source.points()[0].position().clone(),
            source.points()[3].position().clone(),
        )
        .unwrap();
        let out = pencil_transfer(&apex, &source, &target).unwrap();
        for (p, q) in out.points().iter().zip(source.points()) {
            assert_relative_eq!(p.coords(), q.coords(), epsilon = 1e-12);
        }
    }

    #[test]
    fn pencil_errors() {
        let source = euclid_quad(&[[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [4.0, 0.0]]);
        let target = TwoPlane::new(
            RealVector::new(vec![0.0, 0.5, 1.0]).unwrap(),
            RealVector::new(vec![1.0, 0.5, 1.0]).unwrap(),
        )
        .unwrap();
        let on_line = pt(Geometry::Euclidean, &[3.0, 0.0]);
        assert_eq!(
            pencil_transfer(&on_line, &source, &target),
            Err(GeometryError::ApexOnLine)
        );
        // Target line y = 1 + x passes through the apex.
        let through_apex = TwoPlane::new(
            RealVector::new(vec![0.0, 1.0, 1.0]).unwrap(),
            RealVector::new(vec![1.0, 2.0, 1.0]).unwrap(),
        )
        .unwrap();
        let apex = pt(Geometry::Euclidean, &[0.0, 1.0]);
        assert!(pencil_transfer(&apex, &source, &through_apex).is_err());
        // Line x + y = 5 is parallel to the apex-to-A₂ line.
        let parallel = TwoPlane::new(
            RealVector::new(vec![0.0, 5.0, 1.0]).unwrap(),
            RealVector::new(vec![1.0, 4.0, 1.0]).unwrap(),
        )
        .unwrap();
        assert_eq!(
            pencil_transfer(&apex, &source, &parallel),
            Err(GeometryError::NoIntersection)
        );
    }

    #[test]
    fn pencil_non_coplanar() {
        let g = Geometry::Euclidean;
        let source = CollinearQuadruple::new(
            [
                [0.0, 0.0, 0.0],
                [1.0, 0.0, 0.0],
                [2.0, 0.0, 0.0],
                [4.0, 0.0, 0.0],
            ]
            .map(|c| pt(g, &c)),
        )
        .unwrap();
        let apex = pt(g, &[0.0, 1.0, 0.0]);
        let target = TwoPlane::new(
            RealVector::new(vec![0.0, 0.0, 1.0, 1.0]).unwrap(),
            RealVector::new(vec![1.0, 0.5, 1.0, 1.0]).unwrap(),
        )
        .unwrap();
        assert_eq!(
            pencil_transfer(&apex, &source, &target),
            Err(GeometryError::NonCoplanarConfiguration)
        );
    }

    #[test]
    fn spherical_pencil_preserves_cross_ratio() {
        let g = Geometry::Spherical;
        let h = FRAC_1_SQRT_2;
        // Source on the meridian in the xz-plane, apex off it.
        let source = CollinearQuadruple::new(
            [-0.4f64, 0.1, 0.3, 0.7].map(|t| pt(g, &[t.sin(), 0.0, t.cos()])),
        )
        .unwrap();
        let apex = pt(g, &[0.0, h, h]);
        let target = TwoPlane::new(
            RealVector::new(vec![0.2, -0.3, 1.0]).unwrap(),
            RealVector::new(vec![-0.5, -0.2, 1.0]).unwrap(),
        )
        .unwrap();
        let out = pencil_transfer(&apex, &source, &target).unwrap();
        assert_relative_eq!(
            cross_ratio(&out).value(),
            cross_ratio(&source).value(),
            max_relative = 1e-9
        );
    }
}
