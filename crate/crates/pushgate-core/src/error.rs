use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: &'static str },
    #[error("quadrature did not converge (estimated error {estimate:e})")]
    QuadratureFailed { estimate: f64 },
    #[error("ODE step size underflow at t = {t:e}")]
    StepSizeUnderflow { t: f64 },
    #[error("operator is not unitary (deviation {deviation:e})")]
    NotUnitary { deviation: f64 },
    #[error("density matrix violates {what} (deviation {deviation:e})")]
    InvalidDensity { what: &'static str, deviation: f64 },
    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(name: &'static str, reason: &'static str) -> Error {
    Error::InvalidParameter { name, reason }
}

pub(crate) fn ensure(cond: bool, name: &'static str, reason: &'static str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(invalid(name, reason))
    }
}
