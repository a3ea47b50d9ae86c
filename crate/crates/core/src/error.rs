use thiserror::Error;

/// Errors raised by the geometric operations.
///
/// Variant names are part of the CLI contract: `curvkit compute` prints the
/// variant name on stderr when a domain error aborts a computation.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("vector has non-finite entries")]
    NonFinite,

    #[error("points belong to different model spaces")]
    ModelMismatch,

    #[error("point violates the model invariant: {0}")]
    InvalidPoint(String),

    #[error("tangent direction is not a unit tangent at the base point")]
    InvalidDirection,

    #[error("the two planes coincide")]
    IdenticalPlanes,

    #[error("the two planes do not lie in a common 3-dimensional subspace")]
    NoCommon3Space,

    #[error("point pair does not span a 2-plane")]
    DegeneratePair,

    #[error("chart point lies outside the open unit disc")]
    OutOfDisc,

    #[error("point lies outside the open upper hemisphere")]
    OutOfHemisphere,

    #[error("point lies on the equator and projects to infinity")]
    EquatorPoint,

    #[error("triangle is degenerate")]
    DegenerateTriangle,

    #[error("spherical triangle does not fit in a hemisphere")]
    TriangleTooLarge,

    #[error("apex lies on the source or target geodesic")]
    ApexOnLine,

    #[error("transferred point falls outside the model domain")]
    NoIntersection,

    #[error("apex, source and target do not share a 3-dimensional subspace")]
    NonCoplanarConfiguration,

    #[error("points are not on a common geodesic")]
    NotCollinear,

    #[error("points are not pairwise distinct")]
    NotDistinct,

    #[error("ray endpoints coincide")]
    CoincidentPoints,

    #[error("point lies outside the open ball")]
    PointOutsideBall,

    #[error("ball radius out of range for this geometry: {0}")]
    RadiusOutOfRange(f64),
}

impl GeometryError {
    /// Bare variant name, used for CLI diagnostics.
    pub fn name(&self) -> &'static str {
        match self {
            GeometryError::DimensionMismatch { .. } => "DimensionMismatch",
            GeometryError::NonFinite => "NonFinite",
            GeometryError::ModelMismatch => "ModelMismatch",
            GeometryError::InvalidPoint(_) => "InvalidPoint",
            GeometryError::InvalidDirection => "InvalidDirection",
            GeometryError::IdenticalPlanes => "IdenticalPlanes",
            GeometryError::NoCommon3Space => "NoCommon3Space",
            GeometryError::DegeneratePair => "DegeneratePair",
            GeometryError::OutOfDisc => "OutOfDisc",
            GeometryError::OutOfHemisphere => "OutOfHemisphere",
            GeometryError::EquatorPoint => "EquatorPoint",
            GeometryError::DegenerateTriangle => "DegenerateTriangle",
            GeometryError::TriangleTooLarge => "TriangleTooLarge",
            GeometryError::ApexOnLine => "ApexOnLine",
            GeometryError::NoIntersection => "NoIntersection",
            GeometryError::NonCoplanarConfiguration => "NonCoplanarConfiguration",
            GeometryError::NotCollinear => "NotCollinear",
            GeometryError::NotDistinct => "NotDistinct",
            GeometryError::CoincidentPoints => "CoincidentPoints",
            GeometryError::PointOutsideBall => "PointOutsideBall",
            GeometryError::RadiusOutOfRange(_) => "RadiusOutOfRange",
        }
    }
}

pub type Result<T> = std::result::Result<T, GeometryError>;
