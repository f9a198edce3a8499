use std::f64::consts::PI;

use super::quadrature::{fourier_semi_infinite, integrate, Kernel, Quadrature, QuadratureSpec};
use crate::error::{check, Result};
use crate::qalg::C64;

/// Lorentzian bath of the decay model,
/// J(ω) = (2π)⁻¹ γ₀λ² / ((ω − ω₀ + Δ)² + λ²).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LorentzianBath {
    pub gamma0: f64,
    pub lambda: f64,
    pub delta: f64,
    pub omega0: f64,
}

impl LorentzianBath {
    pub fn new(gamma0: f64, lambda: f64, delta: f64, omega0: f64) -> Result<Self> {
        check(gamma0 >= 0.0 && gamma0.is_finite(), "gamma0", "must be finite and ≥ 0")?;
        check(lambda > 0.0 && lambda.is_finite(), "lambda", "must be finite and > 0")?;
        check(delta.is_finite(), "delta", "must be finite")?;
        check(omega0.is_finite(), "omega0", "must be finite")?;
        Ok(LorentzianBath {
            gamma0,
            lambda,
            delta,
            omega0,
        })
    }

    /// ω₀ = 20, λ = 1.1, Δ = 0.2.
    pub fn fig1(gamma0: f64) -> Self {
        LorentzianBath {
            gamma0,
            lambda: 1.1,
            delta: 0.2,
            omega0: 20.0,
        }
    }

    pub fn density(&self, omega: f64) -> f64 {
        let u = omega - self.omega0 + self.delta;
        self.gamma0 * self.lambda * self.lambda / (2.0 * PI * (u * u + self.lambda * self.lambda))
    }

    /// Frequency at which J peaks.
    pub fn peak(&self) -> f64 {
        self.omega0 - self.delta
    }

    /// ∫J over the whole real line.
    pub fn total_weight(&self) -> f64 {
        0.5 * self.gamma0 * self.lambda
    }

    /// ∫J over [lo, hi].
    pub fn weight_between(&self, lo: f64, hi: f64) -> f64 {
        let c = self.peak();
        let l = self.lambda;
        self.gamma0 * l / (2.0 * PI) * (((hi - c) / l).atan() - ((lo - c) / l).atan())
    }

    /// f(t) = ∫J(ω)e^{−i(ω−ω₀)t}dω over the real line, (γ₀λ/2)e^{−λt + iΔt}.
    pub fn corr_f(&self, t: f64) -> C64 {
        C64::from_polar(0.5 * self.gamma0 * self.lambda * (-self.lambda * t).exp(), self.delta * t)
    }

    /// f(t) by quadrature over the physical window ω ∈ [0, ω₀ + 40λ].
    ///
    /// Differs from [`corr_f`](Self::corr_f) by the Lorentzian mass outside
    /// the window, bounded by [`window_tail_weight`](Self::window_tail_weight).
    pub fn corr_f_window(&self, t: f64, spec: &QuadratureSpec) -> Result<Quadrature> {
        let hi = self.omega0 + 40.0 * self.lambda;
        let mut spec = *spec;
        if t > 0.0 {
            spec = spec.with_period(2.0 * PI / t);
        }
        integrate(
            |w| C64::from_polar(self.density(w), -(w - self.omega0) * t),
            0.0,
            hi,
            &spec,
        )
    }

    /// Mass of J outside [0, ω₀ + 40λ]; bounds |corr_f − corr_f_window|.
    pub fn window_tail_weight(&self) -> f64 {
        self.total_weight() - self.weight_between(0.0, self.omega0 + 40.0 * self.lambda)
    }

    /// f(t) by quadrature over the full real line, written as the cosine
    /// transform e^{iΔt}(γ₀λ²/π)∫₀^∞cos(ut)/(u²+λ²)du.
    pub fn corr_f_full_line(&self, t: f64, spec: &QuadratureSpec) -> Result<C64> {
        let l2 = self.lambda * self.lambda;
        let c = fourier_semi_infinite(|u| 1.0 / (u * u + l2), t, Kernel::Cos, self.lambda, spec)?;
        Ok(C64::from_polar(self.gamma0 * l2 / PI * c, self.delta * t))
    }
}

/// Bath correlation function f(t) of the Lorentzian bath, closed form.
pub fn bath_corr_f(bath: &LorentzianBath, t: f64) -> C64 {
    bath.corr_f(t)
}
