use thiserror::Error;

/// Errors raised by the geometry kernels.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid rational `{0}`")]
    InvalidRational(String),

    #[error("zero denominator in `{0}`")]
    ZeroDenominator(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("invalid cone: {0}")]
    InvalidCone(String),

    #[error("invalid fan: {0}")]
    InvalidFan(String),

    #[error("cone is not simplicial ({rays} rays spanning dimension {dim})")]
    NotSimplicial { rays: usize, dim: usize },

    #[error("vector {0} lies outside the support of the fan")]
    OutsideSupport(String),

    #[error("monomial {0} is not a regular function on the chart")]
    NotRegular(String),

    #[error("action is not injective: {0}")]
    NonInjective(String),

    #[error("inconsistent character: {0}")]
    InconsistentCharacter(String),

    #[error("not a face: {0}")]
    NotAFace(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("map is not an isomorphism of the data: {0}")]
    NotAnIsomorphism(String),

    #[error("chart is not a cone of the fan: {0}")]
    ChartNotInFan(String),
}

impl Error {
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
