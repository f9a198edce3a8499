use std::sync::Arc;

use super::volterra::{solve_G_volterra, DecayAmplitude};
use crate::error::{Error, Result};
use crate::qalg::{DampingBasis, C64, I};
use crate::spectral::LorentzianBath;

/// Below this |G| the decay rates and map inverses are reported as singular.
pub const RATE_FLOOR: f64 = 1e-8;

/// Closed-form G(t) for the Lorentzian kernel (γ₀λ/2)e^{−at}, a = λ − iΔ:
/// e^{−at/2}[cosh(dt/2) + (a/d) sinh(dt/2)], d = √(a² − 2γ₀λ).
pub fn closed_g_lorentzian(bath: &LorentzianBath, t: f64) -> C64 {
    closed_g_and_derivative(bath, t).0
}

/// G(t) and G'(t) = −(γ₀λ/d) e^{−at/2} sinh(dt/2).
pub fn closed_g_and_derivative(bath: &LorentzianBath, t: f64) -> (C64, C64) {
    let a = C64::new(bath.lambda, -bath.delta);
    let k = bath.gamma0 * bath.lambda;
    let d = (a * a - 2.0 * k).sqrt();
    let x = d * (0.5 * t);
    let env = (-a * (0.5 * t)).exp();
    // sinh(x)/x
    let sinhc = if (d * t).norm() < 1e-4 {
        let x2 = x * x;
        1.0 + x2 / 6.0 + x2 * x2 / 120.0
    } else {
        x.sinh() / x
    };
    let g = env * (x.cosh() + a * (0.5 * t) * sinhc);
    let dg = -env * k * (0.5 * t) * sinhc;
    (g, dg)
}

/// Rates of the time-local master equation, γ(t) + iS(t) = −2G'/G.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayRates {
    pub gamma: f64,
    pub s: f64,
}

impl DecayRates {
    /// λ₀..λ₃ of the decay damping basis.
    pub fn eigenvalues(&self, omega0: f64) -> [C64; 4] {
        let l1 = -I * (omega0 + 0.5 * self.s) - 0.5 * self.gamma;
        [C64::new(0.0, 0.0), l1, l1.conj(), C64::new(-self.gamma, 0.0)]
    }
}

/// γ and S from a solved amplitude; fails if |G| has reached the rate floor by time t.
pub fn decay_rates(a: &DecayAmplitude, t: f64) -> Result<DecayRates> {
    if let Some(tc) = a.first_below(RATE_FLOOR) {
        if tc <= t {
            return Err(Error::SingularRate { t: tc, floor: RATE_FLOOR });
        }
    }
    rates_from(a.at(t)?, a.derivative_at(t)?, t)
}

fn rates_from(g: C64, dg: C64, t: f64) -> Result<DecayRates> {
    if g.norm() <= RATE_FLOOR {
        return Err(Error::SingularRate { t, floor: RATE_FLOOR });
    }
    let r = -2.0 * dg / g;
    Ok(DecayRates { gamma: r.re, s: r.im })
}

/// The damping basis of the decay model, Λ₀ = (𝟙−σ_z)/2, σ⁺, σ⁻, σ_z.
pub fn decay_damping_basis() -> DampingBasis {
    DampingBasis::decay()
}

#[derive(Clone, Debug, PartialEq)]
enum Source {
    Closed,
    Grid(Arc<DecayAmplitude>),
}

/// Spontaneous decay of a qubit into a zero-temperature Lorentzian bath.
///
/// Schrödinger-picture phases: the excited amplitude is c₁(t) = G(t)e^{−iω₀t/2}
/// and the ground amplitude carries e^{+iω₀t/2}. Both the map and the exact
/// correlator use this convention.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayModel {
    pub bath: LorentzianBath,
    source: Source,
}

impl DecayModel {
    /// G from the closed form.
    pub fn closed(bath: LorentzianBath) -> Self {
        DecayModel {
            bath,
            source: Source::Closed,
        }
    }

    /// G from the Volterra solver on [0, t_max].
    pub fn volterra(bath: LorentzianBath, t_max: f64, dt: f64) -> Result<Self> {
        let a = solve_G_volterra(&bath, t_max, dt)?;
        Ok(DecayModel {
            bath,
            source: Source::Grid(Arc::new(a)),
        })
    }

    pub fn amplitude(&self, t: f64) -> Result<C64> {
        match &self.source {
            Source::Closed => Ok(closed_g_lorentzian(&self.bath, t)),
            Source::Grid(a) => a.at(t),
        }
    }

    pub fn amplitude_derivative(&self, t: f64) -> Result<C64> {
        match &self.source {
            Source::Closed => Ok(closed_g_and_derivative(&self.bath, t).1),
            Source::Grid(a) => a.derivative_at(t),
        }
    }

    pub fn rates(&self, t: f64) -> Result<DecayRates> {
        match &self.source {
            Source::Closed => {
                let (g, dg) = closed_g_and_derivative(&self.bath, t);
                rates_from(g, dg, t)
            }
            Source::Grid(a) => decay_rates(a, t),
        }
    }

    /// Factors of Φ₀ᵗ: (1, G e^{−iω₀t}, conj, |G|²).
    pub fn factors(&self, t: f64) -> Result<[C64; 4]> {
        let g = self.amplitude(t)?;
        let coh = g * C64::from_polar(1.0, -self.bath.omega0 * t);
        Ok([C64::new(1.0, 0.0), coh, coh.conj(), C64::new(g.norm_sqr(), 0.0)])
    }

    /// ∫_{t₁}^{t₂} λᵢ as logarithms of factor ratios (principal branch).
    pub fn eigenvalue_integrals(&self, t1: f64, t2: f64) -> Result<[C64; 4]> {
        let g1 = self.amplitude(t1)?;
        let g2 = self.amplitude(t2)?;
        if g1.norm() <= RATE_FLOOR {
            return Err(Error::SingularRate { t: t1, floor: RATE_FLOOR });
        }
        let l1 = -I * self.bath.omega0 * (t2 - t1) + (g2 / g1).ln();
        Ok([C64::new(0.0, 0.0), l1, l1.conj(), C64::new(2.0 * (g2.norm() / g1.norm()).ln(), 0.0)])
    }

    /// ⟨σ⁺(t₂)σ⁻(t₁)⟩ for the initially excited atom and vacuum bath,
    /// G(t₁)G*(t₂)e^{iω₀(t₂−t₁)}, with t₁ ≤ t₂.
    pub fn exact_tpcf(&self, t1: f64, t2: f64) -> Result<C64> {
        if t2 < t1 {
            return Err(Error::InvalidParameter {
                name: "t2",
                reason: format!("must not precede t1 ({t2} < {t1})"),
            });
        }
        let g1 = self.amplitude(t1)?;
        let g2 = self.amplitude(t2)?;
        Ok(g1 * g2.conj() * C64::from_polar(1.0, self.bath.omega0 * (t2 - t1)))
    }
}

/// Exact ⟨σ⁺(t₂)σ⁻(t₁)⟩ for the decay model with closed-form G.
pub fn exact_tpcf_decay(bath: &LorentzianBath, t1: f64, t2: f64) -> Result<C64> {
    DecayModel::closed(*bath).exact_tpcf(t1, t2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_at_zero() {
        let b = LorentzianBath::fig1(1.0);
        assert_eq!(closed_g_lorentzian(&b, 0.0), C64::new(1.0, 0.0));
    }

    #[test]
    fn confluent_limit() {
        // γ₀λ = a²/2 with Δ = 0
        let lam = 1.1;
        let b = LorentzianBath::new(lam / 2.0, lam, 0.0, 20.0).unwrap();
        for t in [0.0, 0.5, 2.0, 7.0] {
            let want = (-lam * t / 2.0).exp() * (1.0 + lam * t / 2.0);
            assert!((closed_g_lorentzian(&b, t) - want).norm() < 1e-14, "t={t}");
        }
        // just off the confluent point the two branches agree
        let near = LorentzianBath::new(lam / 2.0 + 1e-12, lam, 0.0, 20.0).unwrap();
        assert!((closed_g_lorentzian(&near, 3.0) - closed_g_lorentzian(&b, 3.0)).norm() < 1e-10);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let b = LorentzianBath::fig1(1.0);
        for t in [0.3, 1.7, 4.0] {
            let h = 1e-5;
            let fd = (closed_g_lorentzian(&b, t + h) - closed_g_lorentzian(&b, t - h)) / (2.0 * h);
            assert!((closed_g_and_derivative(&b, t).1 - fd).norm() < 1e-9);
        }
    }

    #[test]
    fn markov_limit_rate() {
        // γ(1) → γ₀ as λ → ∞ with corrections of order γ₀/λ
        let flat = DecayModel::closed(LorentzianBath::new(1.0, 100.0, 0.0, 20.0).unwrap());
        assert!((flat.rates(1.0).unwrap().gamma - 1.0).abs() < 1e-2);
        let b50 = LorentzianBath::new(1.0, 50.0, 0.0, 20.0).unwrap();
        let g50 = DecayModel::closed(b50).rates(1.0).unwrap().gamma;
        // at λ = 50 the rate is −2s₊, s₊ the slow root of s² + λs + γ₀λ/2
        let d = (50.0f64 * 50.0 - 100.0).sqrt();
        let s_plus = (-50.0 + d) / 2.0;
        assert!((g50 + 2.0 * s_plus).abs() < 1e-12);
        assert!((g50 - 1.0).abs() > 1e-2);
    }

    #[test]
    fn strong_coupling_negative_rate() {
        let m = DecayModel::closed(LorentzianBath::new(5.0, 1.1, 0.0, 20.0).unwrap());
        let mut t = 0.0;
        let mut found = false;
        while t < 10.0 {
            match m.rates(t) {
                Ok(r) if r.gamma < 0.0 => {
                    found = true;
                    break;
                }
                Ok(_) => t += 1e-3,
                Err(_) => break,
            }
        }
        assert!(found);
    }

    #[test]
    fn zero_coupling_rates_vanish() {
        let m = DecayModel::closed(LorentzianBath::fig1(0.0));
        let r = m.rates(2.0).unwrap();
        assert_eq!((r.gamma, r.s), (0.0, 0.0));
    }

    #[test]
    fn population_factor_is_modulus_squared() {
        let m = DecayModel::volterra(LorentzianBath::fig1(1.0), 5.0, 1e-3).unwrap();
        for t in [0.5, 2.0, 4.5] {
            let f = m.factors(t).unwrap();
            let g = closed_g_lorentzian(&m.bath, t);
            assert!((f[3].re - g.norm_sqr()).abs() < 1e-9);
            // e^{L₃} from the integrated rate
            let l = m.eigenvalue_integrals(0.0, t).unwrap();
            assert!((l[3].exp().re - g.norm_sqr()).abs() < 1e-9);
        }
    }

    #[test]
    fn exact_tpcf_limits() {
        let b = LorentzianBath::fig1(1.0);
        assert_eq!(exact_tpcf_decay(&b, 0.0, 0.0).unwrap(), C64::new(1.0, 0.0));
        let free = LorentzianBath::fig1(0.0);
        let v = exact_tpcf_decay(&free, 0.3, 1.1).unwrap();
        assert!((v - C64::from_polar(1.0, 20.0 * 0.8)).norm() < 1e-14);
        // equal times give the excited population
        let t = 1.3;
        let p = closed_g_lorentzian(&b, t).norm_sqr();
        assert!((exact_tpcf_decay(&b, t, t).unwrap() - p).norm() < 1e-12);
        assert!(exact_tpcf_decay(&b, 1.0, 0.5).is_err());
    }
}
