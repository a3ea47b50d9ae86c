//! Projective geometry of the three constant-curvature spaces.
//!
//! Euclidean space, the sphere and hyperbolic space are all modelled inside
//! ℝⁿ⁺¹: the affine chart `{x_{n+1} = 1}`, the upper unit hemisphere, and the
//! upper sheet of the hyperboloid `⟨x,x⟩_M = −1`. In each, geodesics are
//! traces of 2-planes through the origin, so central projection from the
//! origin carries geodesics of the curved models onto straight lines of the
//! chart. This crate provides
//!
//! * the Euclidean and Minkowski forms and the linear algebra around them
//!   ([`linalg`]),
//! * points, distances, geodesics and triangles of each model ([`model`],
//!   [`triangle`]),
//! * cross ratios with `sin`/`sinh` of distances in the curved cases
//!   ([`cross_ratio`]),
//! * central projections, pencil transfers and a sampled perspectivity check
//!   ([`projective`]),
//! * Hilbert metrics on geodesic balls and their Beltrami–Klein maps
//!   ([`hilbert`]),
//! * seeded property sweeps with JSON/CSV reports ([`suites`], [`report`]).
//!
//! Sweeps run on rayon when the default `parallel` feature is on; without it
//! every sweep is sequential. Results are identical either way.

pub mod cross_ratio;
pub mod error;
pub mod hilbert;
pub mod linalg;
pub mod model;
pub mod parallel;
pub mod projective;
pub mod report;
pub mod sampling;
pub mod suites;
pub mod triangle;

pub use cross_ratio::{cross_ratio, CollinearQuadruple, CrossRatio};
pub use error::{GeometryError, Result};
pub use hilbert::{bk_isometry, boundary_hit, hilbert_distance, BallSpec, BoundaryHit};
pub use linalg::{
    dot, gram2, numeric_rank, plane_intersect_in_3space, FormKind, RealVector, TwoPlane,
};
pub use model::{
    chart_sin_distance, chart_sinh_distance, collinear_check, distance, geodesic_point,
    geodesic_span, ChartPoint, GeodesicRay, Geometry, HyperboloidPoint, ModelPoint, SpherePoint,
};
pub use parallel::Threads;
pub use projective::{lift, pencil_transfer, perspectivity_check, project, ProjectionKind};
pub use report::{SweepReport, Verdict};
pub use suites::{run_suite, Suite, SuiteConfig, SuiteError};
pub use triangle::{sine_rule_residual, triangle_angles, Triangle};
