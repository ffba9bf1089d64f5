use thiserror::Error;

/// Library-wide error type.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A point violated a domain invariant (half-plane, disc, unit circle).
    #[error("invalid point: {0}")]
    InvalidPoint(String),

    /// A measure violated a construction invariant.
    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    /// A triplet violated a construction invariant.
    #[error("invalid triplet: {0}")]
    InvalidTriplet(String),

    /// The adaptive quadrature could not reach the requested tolerance
    /// within its node budget.
    #[error("quadrature failure: estimated error {error:.3e} above tolerance {tolerance:.3e} after {evals} evaluations")]
    QuadratureFailure {
        error: f64,
        tolerance: f64,
        evals: usize,
    },

    /// An operation was applied to a map of the wrong dynamical class.
    #[error("classification error: {0}")]
    Classification(String),

    /// A limit claim could not be settled within the iteration budget.
    #[error("undetermined: {0}")]
    Undetermined(String),

    /// Pommerenke normalization is invalid when the drift coefficient vanishes.
    #[error("drift coefficient {0:.3e} below threshold; construction requires positive hyperbolic step")]
    DriftZero(f64),

    /// Two determinate verdict routes disagreed. The routes are theorem-equivalent,
    /// so this always indicates a bug or a tolerance failure, never a property of the map.
    #[error("contradiction between verdict routes: {0}")]
    Contradiction(String),

    /// A scalar argument was outside its allowed domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// A map-spec document could not be parsed or resolved.
    #[error("spec error: {0}")]
    Spec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
