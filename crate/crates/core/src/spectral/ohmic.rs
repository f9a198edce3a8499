use std::f64::consts::PI;

use super::quadrature::{fourier_semi_infinite, integrate_real, integrate_to_infinity, Kernel, QuadratureSpec};
use crate::error::{check, Result};
use crate::qalg::C64;

/// Ohmic bath with Lorentz cutoff for pure dephasing,
/// J(ω) = (2π)⁻¹ γ₀λ²ω / (ω² + λ²), at inverse temperature β.
///
/// `beta = f64::INFINITY` is the zero-temperature bath.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OhmicBath {
    pub gamma0: f64,
    pub lambda: f64,
    pub beta: f64,
}

impl OhmicBath {
    pub fn new(gamma0: f64, lambda: f64, beta: f64) -> Result<Self> {
        check(gamma0 >= 0.0 && gamma0.is_finite(), "gamma0", "must be finite and ≥ 0")?;
        check(lambda > 0.0 && lambda.is_finite(), "lambda", "must be finite and > 0")?;
        check(beta > 0.0, "beta", "must be > 0")?;
        Ok(OhmicBath { gamma0, lambda, beta })
    }

    pub fn density(&self, omega: f64) -> f64 {
        self.gamma0 * self.lambda * self.lambda * omega / (2.0 * PI * (omega * omega + self.lambda * self.lambda))
    }

    /// coth(βω/2), equal to 1 at zero temperature.
    pub fn thermal_factor(&self, omega: f64) -> f64 {
        if self.beta.is_infinite() {
            1.0
        } else {
            1.0 / (0.5 * self.beta * omega).tanh()
        }
    }

    /// J(ω)/ω², with the Ohmic ω cancelled analytically.
    fn j_over_w2(&self, omega: f64) -> f64 {
        self.gamma0 * self.lambda * self.lambda / (2.0 * PI * omega * (omega * omega + self.lambda * self.lambda))
    }

    fn thermal_amplitude(&self, omega: f64) -> f64 {
        self.j_over_w2(omega) * self.thermal_factor(omega)
    }

    /// ∫₀^∞ (J/ω²) coth(βω/2) (1 − cos ωt) dω.
    pub fn kc(&self, t: f64, spec: &QuadratureSpec) -> Result<f64> {
        fourier_semi_infinite(|w| self.thermal_amplitude(w), t.abs(), Kernel::OneMinusCos, self.lambda, spec)
    }

    /// ∫₀^∞ (J/ω²) sin ωt dω = γ₀(1 − e^{−λ|t|})/4 · sign(t).
    pub fn s(&self, t: f64) -> f64 {
        0.25 * self.gamma0 * (1.0 - (-self.lambda * t.abs()).exp()) * t.signum()
    }

    /// [`s`](Self::s) by quadrature.
    pub fn s_quadrature(&self, t: f64, spec: &QuadratureSpec) -> Result<f64> {
        let v = fourier_semi_infinite(|w| self.j_over_w2(w), t.abs(), Kernel::Sin, self.lambda, spec)?;
        Ok(v * t.signum())
    }

    /// Decoherence exponent g(t) = 4∫(J/ω²)(1 − cos ωt) coth(βω/2) dω.
    pub fn g(&self, t: f64, spec: &QuadratureSpec) -> Result<f64> {
        Ok(4.0 * self.kc(t, spec)?)
    }

    /// The two-time exponent h(t₁, t₂), t₁ ≥ t₂, as
    /// 2[K(t₁) + K(t₂) − K(t₁−t₂)] + 2i[S(t₁) − S(t₂) − S(t₁−t₂)].
    ///
    /// Satisfies h(t, t) = g(t) and 2 Re h = g(t₁) + g(t₂) − g(t₁ − t₂).
    pub fn h(&self, t1: f64, t2: f64, spec: &QuadratureSpec) -> Result<C64> {
        let tau = t1 - t2;
        let re = 2.0 * (self.kc(t1, spec)? + self.kc(t2, spec)? - self.kc(tau, spec)?);
        let im = 2.0 * (self.s(t1) - self.s(t2) - self.s(tau));
        Ok(C64::new(re, im))
    }

    /// Integrand of h at frequency ω, with a = ωt₁, b = ωt₂:
    /// 2(J/ω²)[((1−cos a)(1−cos b) + sin a sin b)coth(βω/2) + i(sin a − sin b − sin(a−b))].
    pub fn h_integrand(&self, omega: f64, t1: f64, t2: f64) -> C64 {
        let (sa, ca) = (omega * t1).sin_cos();
        let (sb, cb) = (omega * t2).sin_cos();
        let re = ((1.0 - ca) * (1.0 - cb) + sa * sb) * self.thermal_factor(omega);
        let im = sa - sb - (omega * (t1 - t2)).sin();
        C64::new(re, im) * (2.0 * self.j_over_w2(omega))
    }

    /// h by direct integration of [`h_integrand`](Self::h_integrand).
    ///
    /// Slower than [`h`](Self::h); used to cross-check it.
    pub fn h_direct(&self, t1: f64, t2: f64, spec: &QuadratureSpec) -> Result<C64> {
        let tmin = [t1, t2, t1 - t2]
            .into_iter()
            .filter(|t| *t > 0.0)
            .fold(f64::INFINITY, f64::min);
        if tmin.is_infinite() {
            return Ok(C64::new(0.0, 0.0));
        }
        let w = (400.0 * self.lambda).max(4000.0 / tmin);
        let head_spec = spec.with_period(2.0 * PI / t1.max(t2).max(t1 - t2));
        let re = integrate_real(|x| self.h_integrand(x, t1, t2).re, 0.0, w, &head_spec)?;
        let im = integrate_real(|x| self.h_integrand(x, t1, t2).im, 0.0, w, &head_spec)?;
        // the constant part of 1 − cos a − cos b + cos(a−b) survives in the tail
        let zero = |t: f64| if t == 0.0 { 1.0 } else { 0.0 };
        let constant = 1.0 - zero(t1) - zero(t2) + zero(t1 - t2);
        let tail = 2.0 * constant * integrate_to_infinity(|x| self.thermal_amplitude(x), w, spec)?;
        Ok(C64::new(re + tail, im))
    }
}

pub fn dephasing_g(bath: &OhmicBath, t: f64) -> Result<f64> {
    bath.g(t, &QuadratureSpec::default())
}

pub fn dephasing_h(bath: &OhmicBath, t1: f64, t2: f64) -> Result<C64> {
    bath.h(t1, t2, &QuadratureSpec::default())
}
