use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max |M - M^dagger| = {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("eigensolver failed: {0}")]
    EigensolverFailure(String),

    #[error("matrix function undefined on spectrum (eigenvalue {eigenvalue:e} <= 0)")]
    NonPositiveSpectrum { eigenvalue: f64 },

    #[error("operator is not positive semi-definite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("operator is not positive definite (min eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("arity mismatch: expected {expected} variables, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("ordering preset needs at least {min} variables, got {got}")]
    UnsupportedArity { min: usize, got: usize },

    #[error("invalid ordering weights: {0}")]
    InvalidWeights(String),

    #[error("logarithm branch undefined: |value| = {modulus:e} at theta = {theta}")]
    BranchAmbiguity { theta: f64, modulus: f64 },

    #[error("post-selection probability {probability:e} is below tolerance")]
    ZeroPostSelection { probability: f64 },

    #[error("state is not pure (mixedness {mixedness:e})")]
    NotPure { mixedness: f64 },

    #[error("pre- and post-selected states are orthogonal (overlap {overlap:e})")]
    OrthogonalSelection { overlap: f64 },

    #[error("outcome {0} is not in the spectrum of the observable")]
    UnknownOutcome(f64),

    #[error("even dimension {0} is not supported by the discrete phase space")]
    EvenDimension(usize),

    #[error("reconstructed operator is not a state: {0}")]
    NotAState(String),

    #[error("system of {n_spins} spins exceeds the dense limit of {max}")]
    TooLarge { n_spins: usize, max: usize },

    #[error("Jacobian is singular")]
    SingularJacobian,

    #[error("weighting matrix is singular")]
    SingularWeighting,

    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    MaxIterations { iterations: usize, residual: f64 },

    #[error("sampler failed: {0}")]
    SamplerFailure(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for failures of the numerics themselves, as opposed to invalid input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::EigensolverFailure(_)
                | Error::BranchAmbiguity { .. }
                | Error::SingularJacobian
                | Error::SingularWeighting
                | Error::MaxIterations { .. }
                | Error::SamplerFailure(_)
        )
    }
}
