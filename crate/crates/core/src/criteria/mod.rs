//! Markovianity criteria: map-built correlators and ε, BLP, RHP, and the
//! divisible completion of a map family.

mod blp;
mod completion;
mod epsilon;
mod qrt;
mod rhp;

pub use blp::{antipodal_pairs, blp_max, blp_measure};
pub use completion::{divisible_completion, generator, GENERATOR_STEP};
pub use epsilon::{epsilon, EpsilonRecord, DEGENERATE_FLOOR};
pub use qrt::{correlator_pair, exact_tpcf, qrt_npcf, qrt_npcf_contraction, qrt_npcf_superoperator, LegMap};
pub use rhp::{rhp_divisibility, rhp_rate, rhp_rate_backward, RHP_CLAMP};

use crate::error::{check, Result};

/// Uniform time grid 0, dt, ..., t_max. The last step is shortened if
/// t_max is not a multiple of dt.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub t_max: f64,
    pub dt: f64,
}

impl GridSpec {
    pub fn new(t_max: f64, dt: f64) -> Result<Self> {
        check(t_max > 0.0 && t_max.is_finite(), "t_max", "must be finite and > 0")?;
        check(dt > 0.0 && dt <= t_max, "dt", "must lie in (0, t_max]")?;
        Ok(GridSpec { t_max, dt })
    }

    pub fn times(&self) -> Vec<f64> {
        let n = (self.t_max / self.dt - 1e-9).ceil() as usize;
        (0..=n).map(|k| (k as f64 * self.dt).min(self.t_max)).collect()
    }
}

/// A measure value with the time intervals that contribute to it.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasureResult {
    pub value: f64,
    pub contributing_intervals: Vec<(f64, f64)>,
    pub grid: GridSpec,
}
