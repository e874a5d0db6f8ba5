use thiserror::Error;

/// Errors raised by the numerical routines.
///
/// Soft conditions (truncation warnings, ill-conditioning, loss of accuracy)
/// are reported as flags on the returned values, not as errors.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(
        "quadrature did not converge: estimate {estimate:e}, error {error:e} at level {level}"
    )]
    NonConvergence {
        estimate: f64,
        error: f64,
        level: u32,
    },
    #[error("gamma function pole at z = {0}")]
    PoleError(f64),
    #[error("singular factor: |{what}| = {value:e}")]
    SingularFactor { what: &'static str, value: f64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("symmetric eigensolver failed to converge")]
    EigenFailure,
    #[error("zero vector has no Rayleigh quotient")]
    ZeroVector,
    #[error("eigenvalue {0:e} too close to the origin")]
    SingularEigenvalue(f64),
    #[error("resolvent (I + i y J) is singular for y = {0}")]
    SingularResolvent(f64),
    #[error("argument lies on the real axis (|Im| = {0:e})")]
    OnRealAxis(f64),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("denominator near the real axis at s = {s}: |Im L| = {im:e}")]
    DenominatorNearRealAxis { s: f64, im: f64 },
    #[error("box boundary passes too close to a zero after {0} re-inflations")]
    BoundaryTooCloseToZero(u32),
    #[error("Newton iteration did not converge from seed {sigma} + {t}i")]
    NoConvergence { sigma: f64, t: f64 },
    #[error("derivative underflow at {sigma} + {t}i: |G_sigma| = {deriv:e}")]
    DerivativeUnderflow { sigma: f64, t: f64, deriv: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
