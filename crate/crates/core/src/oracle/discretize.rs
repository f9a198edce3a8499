use std::f64::consts::PI;

use crate::error::{check, Result};
use crate::spectral::{gauss_legendre, LorentzianBath, OhmicBath, SpectralModel};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// Cell centres of N equal cells, |g_k|² = J(ω_k)Δω.
    Midpoint,
    /// Composite Gauss–Legendre nodes, |g_k|² = J(ω_k)w_k.
    Gauss,
}

/// Bath modes ω_k with real couplings g_k.
#[derive(Clone, Debug, PartialEq)]
pub struct DiscretizedBath {
    pub omega: Vec<f64>,
    pub coupling: Vec<f64>,
    pub scheme: Scheme,
    pub window: (f64, f64),
    /// Fraction of the spectral mass outside the window, when the mass is finite.
    pub missing_mass: Option<f64>,
}

impl DiscretizedBath {
    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    /// Σ|g_k|².
    pub fn total_weight(&self) -> f64 {
        self.coupling.iter().map(|g| g * g).sum()
    }

    /// 2π/Δω for a uniform grid; infinite otherwise.
    pub fn recurrence_time(&self) -> f64 {
        match self.scheme {
            Scheme::Midpoint => 2.0 * PI * self.omega.len() as f64 / (self.window.1 - self.window.0),
            Scheme::Gauss => f64::INFINITY,
        }
    }

    /// Latest time at which comparisons against the continuum are trusted.
    pub fn horizon(&self) -> f64 {
        0.5 * self.recurrence_time()
    }

    /// More than 1% of the spectral mass lies outside the window.
    pub fn window_warning(&self) -> bool {
        self.missing_mass.is_some_and(|m| m > 0.01)
    }
}

/// Midpoint discretization of J(ω) on `window` with `n` modes.
pub fn discretize(model: &SpectralModel, n: usize, window: (f64, f64)) -> Result<DiscretizedBath> {
    check(n >= 1, "n", "need at least one mode")?;
    check(window.1 > window.0, "window", "must be a nonempty interval")?;
    let dw = (window.1 - window.0) / n as f64;
    let omega: Vec<f64> = (0..n).map(|k| window.0 + dw * (k as f64 + 0.5)).collect();
    let coupling = omega.iter().map(|&w| (model.density(w).max(0.0) * dw).sqrt()).collect();
    let missing_mass = match model {
        SpectralModel::Lorentzian(b) if b.total_weight() > 0.0 => {
            Some(1.0 - b.weight_between(window.0, window.1) / b.total_weight())
        }
        SpectralModel::Engineered(_) => Some(0.0),
        _ => None,
    };
    Ok(DiscretizedBath {
        omega,
        coupling,
        scheme: Scheme::Midpoint,
        window,
        missing_mass,
    })
}

/// Midpoint modes over the peak of J ± 40λ.
pub fn discretize_lorentzian(bath: &LorentzianBath, n: usize) -> Result<DiscretizedBath> {
    let c = bath.peak();
    discretize(&SpectralModel::Lorentzian(*bath), n, (c - 40.0 * bath.lambda, c + 40.0 * bath.lambda))
}

/// Gauss–Legendre modes for the Ohmic bath on (0, ω_max]: 8-node panels,
/// with widths growing geometrically from the origin so that `n` modes
/// resolve low frequencies finely and the 1/ω³ tail coarsely.
pub fn discretize_ohmic(bath: &OhmicBath, n: usize, omega_max: f64, first_width: f64) -> Result<DiscretizedBath> {
    const ORDER: usize = 8;
    check(n >= ORDER && n % ORDER == 0, "n", "must be a positive multiple of 8")?;
    check(omega_max > 0.0 && first_width > 0.0 && first_width * (n / ORDER) as f64 <= omega_max, "omega_max", "panels cannot cover the window")?;
    let panels = n / ORDER;
    // widths h·r^p, p = 0..panels, summing to omega_max
    let total = |r: f64| if (r - 1.0).abs() < 1e-15 { first_width * panels as f64 } else { first_width * (r.powi(panels as i32) - 1.0) / (r - 1.0) };
    let (mut lo, mut hi) = (1.0, 2.0);
    while total(hi) < omega_max {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if total(mid) < omega_max {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let r = 0.5 * (lo + hi);
    let (x, w) = gauss_legendre(ORDER);
    let mut omega = Vec::with_capacity(n);
    let mut coupling = Vec::with_capacity(n);
    let mut a = 0.0;
    let mut h = first_width;
    for _ in 0..panels {
        for (xi, wi) in x.iter().zip(&w) {
            let om = a + 0.5 * h * (xi + 1.0);
            omega.push(om);
            coupling.push((bath.density(om) * 0.5 * h * wi).sqrt());
        }
        a += h;
        h *= r;
    }
    Ok(DiscretizedBath {
        omega,
        coupling,
        scheme: Scheme::Gauss,
        window: (0.0, a),
        missing_mass: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_flat_mode() {
        let d = discretize(&SpectralModel::Engineered(crate::spectral::EngineeredDistribution::with_defaults(0.5)), 1, (0.9, 1.1)).unwrap();
        let want = crate::spectral::engineered_fsq(&crate::spectral::EngineeredDistribution::with_defaults(0.5), 1.0) * 0.2;
        assert_eq!(d.len(), 1);
        assert!((d.total_weight() - want).abs() < 1e-15);
    }

    #[test]
    fn lorentzian_weight_consistent() {
        let b = LorentzianBath::fig1(1.0);
        let d = discretize_lorentzian(&b, 512).unwrap();
        let (lo, hi) = d.window;
        let want = b.weight_between(lo, hi);
        assert!((d.total_weight() / want - 1.0).abs() < 5e-3);
        // ±40λ leaves about 1.6% of a Lorentzian outside
        assert!(d.window_warning());
        assert!((d.horizon() - PI * 512.0 / 88.0).abs() < 1e-12);
    }

    #[test]
    fn ohmic_panels_cover_window() {
        let b = OhmicBath::new(1.0, 1.0, 10.0).unwrap();
        let d = discretize_ohmic(&b, 1024, 2000.0, 0.05).unwrap();
        assert!((d.window.1 - 2000.0).abs() < 1e-6);
        assert!(d.omega.windows(2).all(|w| w[1] > w[0]));
        assert!(discretize_ohmic(&b, 1001, 2000.0, 0.05).is_err());
    }
}
