use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("boundary composite does not vanish at degree {degree}")]
    ComplexInvalid { degree: i64 },

    #[error("matrix shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("requested cutoff {requested} exceeds the spectrum's validity cutoff {validity}")]
    CutoffExceedsValidity { requested: String, validity: String },

    #[error("cannot compare actions with different units ({0} vs {1})")]
    UnitMismatch(String, String),

    #[error("malformed orbit spectrum: {0}")]
    InvalidSpectrum(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("resonant parameter: {0}")]
    ResonantParameter(String),

    #[error("genericity check failed: {0}")]
    GenericityFailed(String),

    #[error("spectrum has not passed a genericity check")]
    GenericityUnchecked,

    #[error("orbit records without Conley-Zehnder index: {0}")]
    MissingIndices(String),

    #[error("good-orbit index set is not lacunary: {first} and {second} both occur")]
    LacunarityFailed { first: i64, second: i64 },

    #[error("degree window reaches the escaping top class at degree {escaping_degree}")]
    WindowTooWide { escaping_degree: i64 },

    #[error("pinching violated: R2^2 = {r2_squared} is not below 2 R1^2 = 2 * {r1_squared}")]
    PinchingViolated { r1_squared: String, r2_squared: String },

    #[error("action window is empty: a_n R2^2 = {lower} is not below 2 a_1 R1^2 = {upper}")]
    WindowEmpty { lower: String, upper: String },

    #[error("generators not certified geometrically distinct: {failed} does not hold")]
    DistinctnessUnproven { failed: String },

    #[error("modules use different grading conventions")]
    ConventionMismatch,

    #[error("unknown catalog {0:?} (expected \"cp\" or \"grassmannian\")")]
    UnknownCatalog(String),

    #[error("bad dimension: {0}")]
    BadDimension(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
}

impl Error {
    /// True for failures of a theorem hypothesis, as opposed to misuse of the API.
    pub fn is_hypothesis_failure(&self) -> bool {
        matches!(
            self,
            Error::LacunarityFailed { .. }
                | Error::PinchingViolated { .. }
                | Error::WindowEmpty { .. }
                | Error::DistinctnessUnproven { .. }
                | Error::GenericityFailed(_)
                | Error::ResonantParameter(_)
        )
    }

    pub fn kind(&self) -> &'static str {
        match self {
            Error::ComplexInvalid { .. } => "ComplexInvalid",
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::CutoffExceedsValidity { .. } => "CutoffExceedsValidity",
            Error::UnitMismatch(..) => "UnitMismatch",
            Error::InvalidSpectrum(_) => "InvalidSpectrum",
            Error::InvalidParams(_) => "InvalidParams",
            Error::ResonantParameter(_) => "ResonantParameter",
            Error::GenericityFailed(_) => "GenericityFailed",
            Error::GenericityUnchecked => "GenericityUnchecked",
            Error::MissingIndices(_) => "MissingIndices",
            Error::LacunarityFailed { .. } => "LacunarityFailed",
            Error::WindowTooWide { .. } => "WindowTooWide",
            Error::PinchingViolated { .. } => "PinchingViolated",
            Error::WindowEmpty { .. } => "WindowEmpty",
            Error::DistinctnessUnproven { .. } => "DistinctnessUnproven",
            Error::ConventionMismatch => "ConventionMismatch",
            Error::UnknownCatalog(_) => "UnknownCatalog",
            Error::BadDimension(_) => "BadDimension",
            Error::Parse { .. } => "ParseError",
        }
    }
}
