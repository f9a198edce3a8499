//! Volterra integro-differential solver for G' = −∫₀ᵗ f(t−s) G(s) ds.

use crate::error::{check, Error, Result};
use crate::qalg::C64;
use crate::spectral::LorentzianBath;

/// Samples of G and G' on a uniform grid starting at t = 0.
#[derive(Clone, Debug, PartialEq)]
pub struct DecayAmplitude {
    pub dt: f64,
    pub g: Vec<C64>,
    pub dg: Vec<C64>,
}

impl DecayAmplitude {
    pub fn t_max(&self) -> f64 {
        self.dt * (self.g.len() - 1) as f64
    }

    fn locate(&self, t: f64) -> Result<(usize, f64)> {
        let tol = 1e-9 * self.dt;
        if !(t >= -tol && t <= self.t_max() + tol) {
            return Err(Error::InvalidParameter {
                name: "t",
                reason: format!("{t} outside the solved range [0, {}]", self.t_max()),
            });
        }
        let x = (t / self.dt).max(0.0);
        let k = (x.floor() as usize).min(self.g.len() - 2);
        Ok((k, x - k as f64))
    }

    /// G(t) by cubic Hermite interpolation on G and G'.
    pub fn at(&self, t: f64) -> Result<C64> {
        let (k, s) = self.locate(t)?;
        let h = self.dt;
        let (h00, h10, h01, h11) = hermite(s);
        Ok(self.g[k] * h00 + self.dg[k] * (h * h10) + self.g[k + 1] * h01 + self.dg[k + 1] * (h * h11))
    }

    /// G'(t), derivative of the Hermite interpolant.
    pub fn derivative_at(&self, t: f64) -> Result<C64> {
        let (k, s) = self.locate(t)?;
        let h = self.dt;
        let d00 = 6.0 * s * s - 6.0 * s;
        let d10 = 3.0 * s * s - 4.0 * s + 1.0;
        let d01 = -d00;
        let d11 = 3.0 * s * s - 2.0 * s;
        Ok(self.g[k] * (d00 / h) + self.dg[k] * d10 + self.g[k + 1] * (d01 / h) + self.dg[k + 1] * d11)
    }

    /// First grid time at which |G| drops to `floor` or below.
    pub fn first_below(&self, floor: f64) -> Option<f64> {
        self.g
            .iter()
            .position(|v| v.norm() <= floor)
            .map(|k| k as f64 * self.dt)
    }
}

fn hermite(s: f64) -> (f64, f64, f64, f64) {
    let s2 = s * s;
    let s3 = s2 * s;
    (
        2.0 * s3 - 3.0 * s2 + 1.0,
        s3 - 2.0 * s2 + s,
        -2.0 * s3 + 3.0 * s2,
        s3 - s2,
    )
}

/// Trapezoidal product-integration solver for a general kernel.
///
/// The implicit trapezoidal step is linear in the new value and is solved
/// exactly. Second order in `dt`. Fails if |G| exceeds 1 + 1e-6.
pub fn solve_volterra(kernel: impl Fn(f64) -> C64, t_max: f64, dt: f64) -> Result<DecayAmplitude> {
    check(dt > 0.0 && dt.is_finite(), "dt", "must be finite and > 0")?;
    check(t_max >= 0.0 && t_max.is_finite(), "t_max", "must be finite and ≥ 0")?;
    let n = (t_max / dt).round() as usize;
    let n = n.max(1);
    let f: Vec<C64> = (0..=n).map(|k| kernel(k as f64 * dt)).collect();
    let mut g = Vec::with_capacity(n + 1);
    let mut dg = Vec::with_capacity(n + 1);
    g.push(C64::new(1.0, 0.0));
    dg.push(C64::new(0.0, 0.0));
    let denom = C64::new(1.0, 0.0) + f[0] * (0.25 * dt * dt);
    for m in 1..=n {
        // S = dt[½ f_m G_0 + Σ_{k=1}^{m−1} f_{m−k} G_k]
        let mut s = f[m] * g[0] * 0.5;
        for k in 1..m {
            s += f[m - k] * g[k];
        }
        s *= dt;
        let gm = (g[m - 1] + (dg[m - 1] - s) * (0.5 * dt)) / denom;
        let vm = -(s + f[0] * gm * (0.5 * dt));
        if gm.norm() > 1.0 + 1e-6 || !gm.re.is_finite() || !gm.im.is_finite() {
            return Err(Error::Unstable {
                t: m as f64 * dt,
                modulus: gm.norm(),
            });
        }
        g.push(gm);
        dg.push(vm);
    }
    Ok(DecayAmplitude { dt, g, dg })
}

/// G for the Lorentzian bath: one Richardson step on grids dt and dt/2.
///
/// Requires dt ≤ min(1/λ, 1/√(γ₀λ))/50.
#[allow(non_snake_case)]
pub fn solve_G_volterra(bath: &LorentzianBath, t_max: f64, dt: f64) -> Result<DecayAmplitude> {
    let bound = (1.0 / bath.lambda).min(1.0 / (bath.gamma0 * bath.lambda).sqrt()) / 50.0;
    check(dt <= bound, "dt", format!("{dt} exceeds the resolution bound {bound}"))?;
    solve_G_volterra_unchecked(bath, t_max, dt)
}

/// [`solve_G_volterra`] without the step-size precondition.
#[allow(non_snake_case)]
pub fn solve_G_volterra_unchecked(bath: &LorentzianBath, t_max: f64, dt: f64) -> Result<DecayAmplitude> {
    let coarse = solve_volterra(|t| bath.corr_f(t), t_max, dt)?;
    let fine = solve_volterra(|t| bath.corr_f(t), t_max, 0.5 * dt)?;
    let g = coarse
        .g
        .iter()
        .enumerate()
        .map(|(k, c)| (fine.g[2 * k] * 4.0 - c) / 3.0)
        .collect();
    let dg = coarse
        .dg
        .iter()
        .enumerate()
        .map(|(k, c)| (fine.dg[2 * k] * 4.0 - c) / 3.0)
        .collect();
    Ok(DecayAmplitude { dt, g, dg })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::closed_g_lorentzian;

    #[test]
    fn zero_coupling_is_constant() {
        let bath = LorentzianBath::fig1(0.0);
        let a = solve_G_volterra(&bath, 5.0, 1e-2).unwrap();
        assert!(a.g.iter().all(|v| *v == C64::new(1.0, 0.0)));
    }

    #[test]
    fn second_order_convergence() {
        let bath = LorentzianBath::new(1.0, 1.1, 0.0, 20.0).unwrap();
        let err = |dt: f64| {
            let a = solve_volterra(|t| bath.corr_f(t), 5.0, dt).unwrap();
            a.g.iter()
                .enumerate()
                .map(|(k, v)| (v - closed_g_lorentzian(&bath, k as f64 * dt)).norm())
                .fold(0.0, f64::max)
        };
        let e1 = err(0.02);
        let e2 = err(0.01);
        let ratio = e1 / e2;
        assert!((3.6..4.4).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn interpolation_between_nodes() {
        let bath = LorentzianBath::fig1(1.0);
        let a = solve_G_volterra(&bath, 3.0, 1e-2).unwrap();
        for t in [0.0, 0.0137, 1.2345, 2.999, 3.0] {
            let want = closed_g_lorentzian(&bath, t);
            assert!((a.at(t).unwrap() - want).norm() < 1e-7, "t={t}");
        }
        assert!(a.at(3.5).is_err());
    }

    #[test]
    fn precondition_enforced() {
        let bath = LorentzianBath::new(5.0, 1.1, 0.0, 20.0).unwrap();
        assert!(matches!(
            solve_G_volterra(&bath, 1.0, 0.05),
            Err(Error::InvalidParameter { name: "dt", .. })
        ));
    }

    #[test]
    fn growth_detected() {
        // an anti-damping kernel makes |G| grow
        let r = solve_volterra(|_| C64::new(-1.0, 0.0), 2.0, 1e-2);
        assert!(matches!(r, Err(Error::Unstable { .. })));
    }
}
