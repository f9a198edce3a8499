//! Reduced dynamics and exact correlators of the solvable qubit models.

mod decay;
mod dephasing;
mod gksl;
mod volterra;

use std::fmt;
use std::sync::Arc;

pub use decay::{
    closed_g_and_derivative, closed_g_lorentzian, decay_damping_basis, decay_rates, exact_tpcf_decay, DecayModel,
    DecayRates, RATE_FLOOR,
};
pub use dephasing::{exact_tpcf_dephasing, exact_tpcf_engineered, EngineeredDephasing, ThermalDephasing};
pub use gksl::GkslDephasing;
#[allow(non_snake_case)]
pub use volterra::{solve_G_volterra, solve_G_volterra_unchecked, solve_volterra, DecayAmplitude};

use crate::error::{Error, Result};
use crate::qalg::{DampingBasis, MapFactors, C64};

/// Factors below this modulus make a map non-invertible.
pub const INVERSE_FLOOR: f64 = 1e-12;

type FactorFn = dyn Fn(f64) -> Result<[C64; 4]> + Send + Sync;

/// A user-supplied family Φ₀ᵗ, diagonal in a fixed basis.
#[derive(Clone)]
pub struct CustomFamily {
    pub name: String,
    pub basis: DampingBasis,
    factors: Arc<FactorFn>,
}

impl CustomFamily {
    pub fn new(name: impl Into<String>, basis: DampingBasis, factors: impl Fn(f64) -> Result<[C64; 4]> + Send + Sync + 'static) -> Self {
        CustomFamily {
            name: name.into(),
            basis,
            factors: Arc::new(factors),
        }
    }
}

impl fmt::Debug for CustomFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomFamily").field("name", &self.name).finish_non_exhaustive()
    }
}

/// A family of reduced maps Φ₀ᵗ sharing one time-independent damping basis.
#[derive(Clone, Debug)]
pub enum ModelMap {
    Decay(DecayModel),
    Thermal(ThermalDephasing),
    Engineered(EngineeredDephasing),
    Gksl(GkslDephasing),
    Custom(CustomFamily),
}

impl ModelMap {
    pub fn name(&self) -> &str {
        match self {
            ModelMap::Decay(_) => "decay",
            ModelMap::Thermal(_) => "dephasing_thermal",
            ModelMap::Engineered(_) => "dephasing_engineered",
            ModelMap::Gksl(_) => "gksl",
            ModelMap::Custom(c) => &c.name,
        }
    }

    pub fn basis(&self) -> DampingBasis {
        match self {
            ModelMap::Decay(_) => DampingBasis::decay(),
            ModelMap::Thermal(_) | ModelMap::Engineered(_) | ModelMap::Gksl(_) => DampingBasis::dephasing(),
            ModelMap::Custom(c) => c.basis,
        }
    }

    /// Scalar factors of Φ₀ᵗ.
    pub fn factors(&self, t: f64) -> Result<[C64; 4]> {
        if !(t >= 0.0) {
            return Err(Error::InvalidParameter {
                name: "t",
                reason: format!("must be ≥ 0, got {t}"),
            });
        }
        match self {
            ModelMap::Decay(m) => m.factors(t),
            ModelMap::Thermal(m) => m.factors(t),
            ModelMap::Engineered(m) => Ok(m.factors(t)),
            ModelMap::Gksl(m) => Ok(m.factors(t)),
            ModelMap::Custom(c) => (c.factors)(t),
        }
    }

    pub fn from_zero(&self, t: f64) -> Result<MapFactors> {
        Ok(MapFactors::new(self.basis(), self.factors(t)?))
    }

    /// Φ_{t₁}^{t₂} = Φ₀^{t₂}∘(Φ₀^{t₁})⁻¹, factor by factor.
    pub fn two_time(&self, t1: f64, t2: f64) -> Result<MapFactors> {
        if t2 < t1 {
            return Err(Error::InvalidParameter {
                name: "t2",
                reason: format!("must not precede t1 ({t2} < {t1})"),
            });
        }
        let basis = self.basis();
        if t1 == t2 {
            return Ok(MapFactors::identity(basis));
        }
        let f1 = self.factors(t1)?;
        let f2 = self.factors(t2)?;
        let mut scale = [C64::new(0.0, 0.0); 4];
        for i in 0..4 {
            if f1[i].norm() < INVERSE_FLOOR {
                return Err(Error::SingularMap {
                    t: t1,
                    modulus: f1[i].norm(),
                });
            }
            scale[i] = f2[i] / f1[i];
        }
        Ok(MapFactors::new(basis, scale))
    }

    /// The leg map Φ₀^{t₂−t₁}: evolution restarted from a product state at t₁.
    pub fn restart(&self, t1: f64, t2: f64) -> Result<MapFactors> {
        if t2 < t1 {
            return Err(Error::InvalidParameter {
                name: "t2",
                reason: format!("must not precede t1 ({t2} < {t1})"),
            });
        }
        self.from_zero(t2 - t1)
    }
}

/// Φ_{t₁}^{t₂} of `model`.
pub fn model_map(model: &ModelMap, t1: f64, t2: f64) -> Result<MapFactors> {
    model.two_time(t1, t2)
}
