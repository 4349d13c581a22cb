use thiserror::Error;

/// Errors surfaced by the geometric kernel and the summation layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("disk radius must be nonzero; curvature-0 disks are lines")]
    ZeroRadius,
    #[error("line normal must be a unit vector")]
    NonUnitNormal,
    #[error("coordinates violate the inversive constraint xd^2 + yd^2 - b*b_co = 1")]
    ConstraintViolation,
    #[error("disks are not tangent")]
    NotTangent,
    #[error("the four disks do not form a Descartes configuration")]
    InvalidQuad,
    #[error("row depth {0} exceeds the configured maximum {1}")]
    DepthOverflow(u32, u32),
    #[error("quadratic form is not positive definite")]
    NotPositiveDefinite,
    #[error("form is singular and the base curvature is nonzero")]
    SingularForm,
    #[error("exponent rho must be greater than 1")]
    RhoTooSmall,
    #[error("series exponent must be greater than 2")]
    SeriesExponentTooSmall,
    #[error("truncation bound must be at least 1")]
    ZeroTruncation,
    #[error("term base vanishes at (m, n) = ({0}, {1})")]
    ZeroTermBase(i64, i64),
    #[error("negative term base at (m, n) = ({0}, {1}) with non-integer rho")]
    NegativeTermBase(i64, i64),
    #[error("frame determinant {det} does not match base curvature {base}")]
    FrameMismatch { det: String, base: String },
    #[error("index (m, n) = ({0}, {1}) is not coprime")]
    NonCoprimeIndex(i64, i64),
    #[error("transform determinant must be +1 or -1")]
    NotUnimodular,
    #[error("disk is not a member of the packing")]
    NotInPacking,
    #[error("corona member has nonpositive curvature; its area is unbounded")]
    NonPositiveMemberCurvature,
    #[error("curvature bound {0} is below the largest seed curvature")]
    BoundBelowSeed(String),
    #[error("operation requires an exact spinor: {0}")]
    InexactSpinor(&'static str),
    #[error("operation is undefined for a line here: {0}")]
    LineUnsupported(&'static str),
    #[error("frame entries do not fit exact integer evaluation")]
    NonIntegralFrame,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
