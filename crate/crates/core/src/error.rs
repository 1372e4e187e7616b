use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "singular canonical transformation: Omega = (epsH - eps0)(epsB - eps0) - J0^2 vanishes"
    )]
    SingularTransformation,

    #[error(
        "quadrature did not converge on [{lower}, {upper}]: estimate {estimate:e}, \
         error {error:e} after {intervals} intervals"
    )]
    Quadrature {
        lower: f64,
        upper: f64,
        estimate: f64,
        error: f64,
        intervals: usize,
    },

    #[error("configuration mismatch: {0}")]
    Config(String),

    #[error("non-finite tensor entry after step {step}")]
    NonFinite { step: usize },

    #[error("step size underflow at t = {t} fs (h = {h:e} fs)")]
    StepUnderflow { t: f64, h: f64 },
}
