//! Bath spectral densities and the correlation integrals built from them.

mod engineered;
mod lorentzian;
mod ohmic;
mod quadrature;

pub use engineered::{engineered_fsq, engineered_g, EngineeredDistribution};
pub use lorentzian::{bath_corr_f, LorentzianBath};
pub use ohmic::{dephasing_g, dephasing_h, OhmicBath};
pub use quadrature::{
    fourier_semi_infinite, gauss_legendre, gauss_legendre_panels, integrate, integrate_real,
    integrate_to_infinity, simpson_adaptive, Kernel, Quadrature, QuadratureSpec,
};

/// The three bath families.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SpectralModel {
    Lorentzian(LorentzianBath),
    Ohmic(OhmicBath),
    Engineered(EngineeredDistribution),
}

impl SpectralModel {
    /// J(ω) for the two physical baths, |f(ω)|² for the engineered model.
    pub fn density(&self, omega: f64) -> f64 {
        match self {
            SpectralModel::Lorentzian(b) => b.density(omega),
            SpectralModel::Ohmic(b) => b.density(omega),
            SpectralModel::Engineered(d) => d.fsq(omega),
        }
    }
}
