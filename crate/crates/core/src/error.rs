use thiserror::Error;

/// Errors reported by the numerical routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("operator is not Hermitian (max asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },

    #[error("Jacobi eigensolver did not converge in {sweeps} sweeps")]
    EigenNoConvergence { sweeps: usize },

    #[error("operator basis is linearly dependent")]
    SingularBasis,

    #[error("quadrature did not converge: value {value:e}, error estimate {error:e} after {subdivisions} subdivisions")]
    Quadrature {
        value: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("Volterra step unstable at t = {t}: |G| = {modulus}")]
    Unstable { t: f64, modulus: f64 },

    #[error("decay rate undefined: |G| falls below {floor:e} at t = {t}")]
    SingularRate { t: f64, floor: f64 },

    #[error("map not invertible at t = {t}: factor modulus {modulus:e}")]
    SingularMap { t: f64, modulus: f64 },

    #[error("ODE step size underflow at t = {t}")]
    StepUnderflow { t: f64 },

    #[error("population leaked out of the single-excitation sector: {leak:e}")]
    SectorLeak { leak: f64 },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check(cond: bool, name: &'static str, reason: impl Into<String>) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name,
            reason: reason.into(),
        })
    }
}
