use thiserror::Error;

/// Every failure the library can report.
///
/// The variant name doubles as the machine-readable error code emitted by the
/// command-line front end (see [`Error::code`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("cluster is empty")]
    EmptyCluster,
    #[error("point ids must be consecutive from 1: found id {found} at position {expected}")]
    NonConsecutiveIds { expected: usize, found: usize },
    #[error("point {point} cannot be satellite of {target}: p{prev} is not proximate to p{target}")]
    SatelliteTargetInvalid {
        point: usize,
        target: usize,
        prev: usize,
    },
    #[error("point {point} cannot be satellite of itself, a later point or of no point ({target})")]
    SatelliteOfSelfOrLater { point: usize, target: usize },
    #[error("index {index} out of range 1..={len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("expected i < j, got i = {i}, j = {j}")]
    OrderViolation { i: usize, j: usize },
    #[error("dual graph vertex {vertex} has degree {degree}")]
    MalformedGraph { vertex: usize, degree: usize },
    #[error("not a multiplicity sequence: {0}")]
    NotAMultiplicitySequence(String),
    #[error("eta = {eta} is not adjacent to E_{r} in the dual graph")]
    EtaNotAdjacent { eta: usize, r: usize },
    #[error("eta must differ from r = {r}")]
    EtaEqualsR { r: usize },
    #[error("invalid branch: {0}")]
    BranchInvalid(String),
    #[error("mu-hat must be positive")]
    NonPositiveMuhat,
    #[error("operation requires a satellite flag point")]
    FreeFlagHasNoEta,
    #[error("curve is not supraminimal: nu_r(f)^2 = {value_sq} <= deg^2 * betabar = {bound}")]
    NotSupraminimal { value_sq: String, bound: String },
    #[error("certificate value pair {claimed} does not match the computed value {computed}")]
    CertificateInconsistent { claimed: String, computed: String },
    #[error("line support must be an initial segment 1..s (s >= 2) of free points: {0}")]
    LineSupportInvalid(String),
    #[error("non-positive at infinity requires r >= 2, got r = {0}")]
    RTooSmall(usize),
    #[error("valuation is not non-positive at infinity")]
    NotNpi,
    #[error("t = {t} lies outside [0, {max}]")]
    TOutOfRange { t: String, max: String },
    #[error("branch {branch} has slope matching neither boundary line of the value cone")]
    BranchSlopeUnrecognized { branch: usize },
    #[error("slope-based and graph-based classification disagree on branch {branch}")]
    ClassificationMismatch { branch: usize },
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("degenerate polygon: {0}")]
    DegeneratePolygon(String),
    #[error("radicands {0} and {1} cannot be mixed")]
    MixedRadicals(String, String),
    #[error("radicand {0} is not squarefree")]
    NotSquarefree(String),
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("malformed document: {0}")]
    Schema(String),
}

impl Error {
    /// Stable error code (the variant name).
    pub fn code(&self) -> &'static str {
        match self {
            Error::EmptyCluster => "EmptyCluster",
            Error::NonConsecutiveIds { .. } => "NonConsecutiveIds",
            Error::SatelliteTargetInvalid { .. } => "SatelliteTargetInvalid",
            Error::SatelliteOfSelfOrLater { .. } => "SatelliteOfSelfOrLater",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::OrderViolation { .. } => "OrderViolation",
            Error::MalformedGraph { .. } => "MalformedGraph",
            Error::NotAMultiplicitySequence(_) => "NotAMultiplicitySequence",
            Error::EtaNotAdjacent { .. } => "EtaNotAdjacent",
            Error::EtaEqualsR { .. } => "EtaEqualsR",
            Error::BranchInvalid(_) => "BranchInvalid",
            Error::NonPositiveMuhat => "NonPositiveMuhat",
            Error::FreeFlagHasNoEta => "FreeFlagHasNoEta",
            Error::NotSupraminimal { .. } => "NotSupraminimal",
            Error::CertificateInconsistent { .. } => "CertificateInconsistent",
            Error::LineSupportInvalid(_) => "LineSupportInvalid",
            Error::RTooSmall(_) => "RTooSmall",
            Error::NotNpi => "NotNPI",
            Error::TOutOfRange { .. } => "TOutOfRange",
            Error::BranchSlopeUnrecognized { .. } => "BranchSlopeUnrecognized",
            Error::ClassificationMismatch { .. } => "ClassificationMismatch",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::DegeneratePolygon(_) => "DegeneratePolygon",
            Error::MixedRadicals(..) => "MixedRadicals",
            Error::NotSquarefree(_) => "NotSquarefree",
            Error::ParseRational(_) => "ParseRational",
            Error::DivisionByZero => "DivisionByZero",
            Error::Schema(_) => "Schema",
        }
    }

    /// True for failures of the input's shape (bad cluster, bad branch data),
    /// false for failed mathematical preconditions on otherwise valid input.
    pub fn is_schema_error(&self) -> bool {
        matches!(
            self,
            Error::EmptyCluster
                | Error::NonConsecutiveIds { .. }
                | Error::SatelliteTargetInvalid { .. }
                | Error::SatelliteOfSelfOrLater { .. }
                | Error::IndexOutOfRange { .. }
                | Error::EtaNotAdjacent { .. }
                | Error::EtaEqualsR { .. }
                | Error::BranchInvalid(_)
                | Error::LineSupportInvalid(_)
                | Error::ParseRational(_)
                | Error::NotAMultiplicitySequence(_)
                | Error::Schema(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
