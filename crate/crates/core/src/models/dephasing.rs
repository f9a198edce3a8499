use crate::error::{Error, Result};
use crate::qalg::{Operator2, C64};
use crate::spectral::{EngineeredDistribution, OhmicBath, QuadratureSpec};

/// σ_z sign of a basis index: +1 for the excited (or H) state, −1 otherwise.
fn sign(i: usize) -> f64 {
    if i == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Σ_{abc} ρ_ca (o_late)_ab (o_early)_bc · w(a, b, c).
fn weighted_trace(o_late: &Operator2, o_early: &Operator2, rho: &Operator2, w: impl Fn(usize, usize, usize) -> C64) -> C64 {
    let mut s = C64::new(0.0, 0.0);
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                let term = rho.0[c][a] * o_late.0[a][b] * o_early.0[b][c];
                if term != C64::new(0.0, 0.0) {
                    s += term * w(a, b, c);
                }
            }
        }
    }
    s
}

fn check_order(t_early: f64, t_late: f64) -> Result<()> {
    if t_late < t_early || t_early < 0.0 {
        return Err(Error::InvalidParameter {
            name: "t_late",
            reason: format!("need 0 ≤ t_early ≤ t_late, got ({t_early}, {t_late})"),
        });
    }
    Ok(())
}

/// Pure dephasing by a thermal Ohmic bath, in the frame rotating with the qubit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalDephasing {
    pub bath: OhmicBath,
    pub quadrature: QuadratureSpec,
}

impl ThermalDephasing {
    pub fn new(bath: OhmicBath) -> Self {
        ThermalDephasing {
            bath,
            quadrature: QuadratureSpec::default(),
        }
    }

    pub fn g(&self, t: f64) -> Result<f64> {
        self.bath.g(t, &self.quadrature)
    }

    /// Factors of Φ₀ᵗ in the basis 𝟙, σ⁺, σ⁻, σ_z: (1, e^{−g}, e^{−g}, 1).
    pub fn factors(&self, t: f64) -> Result<[C64; 4]> {
        let e = C64::new((-self.g(t)?).exp(), 0.0);
        let one = C64::new(1.0, 0.0);
        Ok([one, e, e, one])
    }

    /// f₁..f₄ for the later time t₁ and earlier time t₂.
    pub fn weights(&self, t1: f64, t2: f64) -> Result<[C64; 4]> {
        let e1 = (-self.g(t1)?).exp();
        let e2 = (-self.g(t2)?).exp();
        let x = (-self.g(t1)? - self.g(t2)? + 2.0 * self.bath.h(t1, t2, &self.quadrature)?).exp();
        let one = C64::new(1.0, 0.0);
        Ok([
            (one + e1 + e2 + x) * 0.25,
            (one - e1 - e2 + x) * 0.25,
            (one + e1 - e2 - x) * 0.25,
            (one - e1 + e2 - x) * 0.25,
        ])
    }

    /// ⟨o_late(t_late) o_early(t_early)⟩ for the system state ρ and thermal bath:
    /// Tr[(f₁ o_l o_e + f₂ σ_z o_l o_e σ_z + f₃ o_l σ_z o_e σ_z + f₄ σ_z o_l σ_z o_e) ρ].
    pub fn exact_tpcf(&self, o_late: &Operator2, o_early: &Operator2, t_early: f64, t_late: f64, rho: &Operator2) -> Result<C64> {
        check_order(t_early, t_late)?;
        let f = self.weights(t_late, t_early)?;
        Ok(weighted_trace(o_late, o_early, rho, |a, b, c| {
            let (sa, sb, sc) = (sign(a), sign(b), sign(c));
            f[0] + f[1] * (sa * sc) + f[2] * (sb * sc) + f[3] * (sa * sb)
        }))
    }
}

/// Exact thermal-dephasing correlator with default quadrature.
pub fn exact_tpcf_dephasing(bath: &OhmicBath, o_late: &Operator2, o_early: &Operator2, t_early: f64, t_late: f64, rho: &Operator2) -> Result<C64> {
    ThermalDephasing::new(*bath).exact_tpcf(o_late, o_early, t_early, t_late, rho)
}

/// Polarization dephasing of a photon in a birefringent medium.
///
/// Index 0 is H. The joint evolution is U = exp(+i s Δn Ω t/2) with s = ±1 for
/// H/V and Ω the photon frequency, which gives the map
/// Π_HρΠ_H + Π_VρΠ_V + g*(t)Π_HρΠ_V + g(t)Π_VρΠ_H.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EngineeredDephasing {
    pub dist: EngineeredDistribution,
}

impl EngineeredDephasing {
    pub fn new(dist: EngineeredDistribution) -> Self {
        EngineeredDephasing { dist }
    }

    /// Factors of Φ₀ᵗ in the basis 𝟙, σ⁺, σ⁻, σ_z: (1, g*, g, 1).
    pub fn factors(&self, t: f64) -> [C64; 4] {
        let g = self.dist.g(t);
        let one = C64::new(1.0, 0.0);
        [one, g.conj(), g, one]
    }

    /// ⟨o_late(t_late) o_early(t_early)⟩: the eight projector terms
    /// Π_a o_l Π_b o_e Π_c weighted by g(−[(s_b−s_a)t_l + (s_c−s_b)t_e]/2).
    pub fn exact_tpcf(&self, o_late: &Operator2, o_early: &Operator2, t_early: f64, t_late: f64, rho: &Operator2) -> Result<C64> {
        check_order(t_early, t_late)?;
        Ok(weighted_trace(o_late, o_early, rho, |a, b, c| {
            let x = 0.5 * ((sign(b) - sign(a)) * t_late + (sign(c) - sign(b)) * t_early);
            self.dist.g(-x)
        }))
    }
}

/// Exact engineered-dephasing correlator.
pub fn exact_tpcf_engineered(dist: &EngineeredDistribution, o_late: &Operator2, o_early: &Operator2, t_early: f64, t_late: f64, rho: &Operator2) -> Result<C64> {
    EngineeredDephasing::new(*dist).exact_tpcf(o_late, o_early, t_early, t_late, rho)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plus() -> Operator2 {
        Operator2::from_bloch(1.0, 0.0, 0.0)
    }

    #[test]
    fn weights_sum_to_one() {
        let m = ThermalDephasing::new(OhmicBath::new(1.0, 1.0, 10.0).unwrap());
        for (t1, t2) in [(0.5, 0.2), (3.0, 1.0), (4.0, 4.0)] {
            let f = m.weights(t1, t2).unwrap();
            assert!((f.iter().sum::<C64>() - 1.0).norm() < 1e-14);
        }
    }

    #[test]
    fn sigma_z_pair_is_one() {
        let m = ThermalDephasing::new(OhmicBath::new(1.0, 1.0, 10.0).unwrap());
        let sz = Operator2::sigma_z();
        let v = m.exact_tpcf(&sz, &sz, 1.0, 2.5, &plus()).unwrap();
        assert!((v - 1.0).norm() < 1e-14);
        let e = EngineeredDephasing::new(EngineeredDistribution::with_defaults(0.2));
        let v = e.exact_tpcf(&sz, &sz, 1.0, 2.5, &plus()).unwrap();
        assert!((v - 1.0).norm() < 1e-14);
    }

    #[test]
    fn equal_zero_times_reduce_to_trace() {
        let e = EngineeredDephasing::new(EngineeredDistribution::with_defaults(0.7));
        let m = ThermalDephasing::new(OhmicBath::new(0.5, 1.0, 3.0).unwrap());
        let rho = Operator2::from_bloch(0.3, -0.2, 0.5);
        let (a, b) = (Operator2::sigma_plus(), Operator2::sigma_minus() + Operator2::sigma_z());
        let want = (a * b * rho).trace();
        assert!((e.exact_tpcf(&a, &b, 0.0, 0.0, &rho).unwrap() - want).norm() < 1e-14);
        assert!((m.exact_tpcf(&a, &b, 0.0, 0.0, &rho).unwrap() - want).norm() < 1e-14);
    }

    #[test]
    fn engineered_single_time_mean() {
        // ⟨σ⁻(t)⟩ with 𝟙 at the later time equals Tr[σ⁻Φ₀ᵗρ]
        let e = EngineeredDephasing::new(EngineeredDistribution::with_defaults(0.3));
        let rho = plus();
        let sm = Operator2::sigma_minus();
        let t = 1.7;
        let v = e.exact_tpcf(&Operator2::identity(), &sm, t, t, &rho).unwrap();
        // Tr[σ⁻ρ(t)] = ρ(t)₀₁ = g*(t)ρ₀₁
        let want = e.dist.g(t).conj() * rho.0[0][1];
        assert!((v - want).norm() < 1e-14);
    }

    #[test]
    fn order_checked() {
        let e = EngineeredDephasing::new(EngineeredDistribution::with_defaults(0.3));
        let id = Operator2::identity();
        assert!(e.exact_tpcf(&id, &id, 2.0, 1.0, &plus()).is_err());
    }
}
