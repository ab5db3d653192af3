use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("deformation parameter must be non-negative, got {0}")]
    NegativeLambda(f64),

    #[error("invalid quantum numbers: {0}")]
    InvalidState(String),

    /// The Coulomb-shifted exponent is not real; the message names the violated inequality.
    #[error("complex exponent: {0} violated")]
    ComplexExponent(String),

    #[error("de Sitter radicand is negative ({0:e}); no bound state for these quantum numbers")]
    UnphysicalRadicand(f64),

    #[error("trial energy outside the admissible domain: {0}")]
    OutOfDomain(String),

    #[error("no sign change of the quantization residual in the admissible interval")]
    NoRoot,

    #[error("zero deformation: {0}")]
    ZeroDeformation(&'static str),

    #[error("radial coordinate outside the domain: {0}")]
    Domain(String),

    #[error("invalid hypergeometric parameter: {0}")]
    InvalidParameter(String),

    #[error("the g1 reconstruction prefactor vanishes")]
    SingularMixing,

    #[error("normalization integral failed: {0}")]
    NonIntegrable(String),

    #[error("no eigenvalue found: {0}")]
    NoEigenvalue(String),

    #[error("integrator step size collapsed at t = {0}")]
    StiffFailure(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
