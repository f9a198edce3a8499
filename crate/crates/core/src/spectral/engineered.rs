use std::f64::consts::PI;

use super::quadrature::{integrate, integrate_real, QuadratureSpec};
use crate::error::{check, Result};
use crate::qalg::C64;

/// Photon frequency distribution |f(ω)|² of the engineered dephasing model:
/// an equal mixture of two Gaussians at ω̄ ± δ, δ = δ_max|2γ₀ − 1|.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EngineeredDistribution {
    pub gamma0: f64,
    pub omega_bar: f64,
    pub delta_max: f64,
    pub sigma: f64,
    pub delta_n: f64,
}

impl EngineeredDistribution {
    pub fn new(gamma0: f64, omega_bar: f64, delta_max: f64, sigma: f64, delta_n: f64) -> Result<Self> {
        check((0.0..=1.0).contains(&gamma0), "gamma0", "must lie in [0, 1]")?;
        check(sigma > 0.0 && sigma.is_finite(), "sigma", "must be finite and > 0")?;
        check(delta_max >= 0.0 && delta_max.is_finite(), "delta_max", "must be finite and ≥ 0")?;
        check(omega_bar.is_finite(), "omega_bar", "must be finite")?;
        check(delta_n.is_finite() && delta_n != 0.0, "delta_n", "must be finite and nonzero")?;
        Ok(EngineeredDistribution {
            gamma0,
            omega_bar,
            delta_max,
            sigma,
            delta_n,
        })
    }

    /// ω̄ = 1, δ_max = 0.5, σ = 0.1, Δn = 1.
    pub fn with_defaults(gamma0: f64) -> Self {
        EngineeredDistribution {
            gamma0,
            omega_bar: 1.0,
            delta_max: 0.5,
            sigma: 0.1,
            delta_n: 1.0,
        }
    }

    pub fn half_separation(&self) -> f64 {
        self.delta_max * (2.0 * self.gamma0 - 1.0).abs()
    }

    pub fn fsq(&self, omega: f64) -> f64 {
        let d = self.half_separation();
        0.5 * (normal(omega, self.omega_bar - d, self.sigma) + normal(omega, self.omega_bar + d, self.sigma))
    }

    /// Closed form of g(t) = ∫|f(ω)|² e^{−iΔn ω t} dω.
    pub fn g(&self, t: f64) -> C64 {
        let dn = self.delta_n;
        let env = (-0.5 * (self.sigma * dn * t).powi(2)).exp() * (self.half_separation() * dn * t).cos();
        C64::from_polar(env, -dn * self.omega_bar * t)
    }

    /// g(t) by quadrature over ω̄ ± (δ + 12σ).
    pub fn g_quadrature(&self, t: f64, spec: &QuadratureSpec) -> Result<C64> {
        let (lo, hi) = self.support();
        let mut spec = *spec;
        if t != 0.0 {
            spec = spec.with_period(2.0 * PI / (self.delta_n * t).abs());
        }
        Ok(integrate(|w| C64::from_polar(self.fsq(w), -self.delta_n * w * t), lo, hi, &spec)?.value)
    }

    /// Interval holding all but ~1e-30 of the probability mass.
    pub fn support(&self) -> (f64, f64) {
        let d = self.half_separation();
        (self.omega_bar - d - 12.0 * self.sigma, self.omega_bar + d + 12.0 * self.sigma)
    }

    pub fn normalization(&self, spec: &QuadratureSpec) -> Result<f64> {
        let (lo, hi) = self.support();
        integrate_real(|w| self.fsq(w), lo, hi, spec)
    }

    /// Number of local maxima of |f(ω)|² on a 4001-point grid over the support.
    pub fn peak_count(&self) -> usize {
        let (lo, hi) = self.support();
        let n = 4001;
        let v: Vec<f64> = (0..n)
            .map(|k| self.fsq(lo + (hi - lo) * k as f64 / (n - 1) as f64))
            .collect();
        v.windows(3).filter(|w| w[1] > w[0] && w[1] > w[2]).count()
    }
}

fn normal(x: f64, mu: f64, sigma: f64) -> f64 {
    let z = (x - mu) / sigma;
    (-0.5 * z * z).exp() / (sigma * (2.0 * PI).sqrt())
}

pub fn engineered_fsq(dist: &EngineeredDistribution, omega: f64) -> f64 {
    dist.fsq(omega)
}

pub fn engineered_g(dist: &EngineeredDistribution, t: f64) -> C64 {
    dist.g(t)
}
