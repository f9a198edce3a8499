use std::sync::Arc;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::discretize::DiscretizedBath;
use crate::error::{check, Error, Result};
use crate::models::{CustomFamily, ModelMap};
use crate::ode::{dopri45, OdeSpec};
use crate::qalg::{DampingBasis, Operator2, C64};

/// Population that may leave the 0/1-excitation sector before evaluation aborts.
pub const LEAK_TOLERANCE: f64 = 1e-8;

/// Amplitudes in the frame rotating at ω₀/2: c̃₀ on |g,0⟩, c̃₁ on |e,0⟩ and
/// λ̃_q on |g,1_q⟩.
#[derive(Clone, Debug, PartialEq)]
pub struct DilationState {
    pub c0: C64,
    pub c1: C64,
    pub lambda: Vec<C64>,
}

impl DilationState {
    /// |e⟩ ⊗ vacuum.
    pub fn excited(n: usize) -> Self {
        DilationState {
            c0: C64::new(0.0, 0.0),
            c1: C64::new(1.0, 0.0),
            lambda: vec![C64::new(0.0, 0.0); n],
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c0.norm_sqr() + self.c1.norm_sqr() + self.lambda.iter().map(|v| v.norm_sqr()).sum::<f64>()
    }
}

/// Spectral decomposition of the one-excitation Hamiltonian in the rotating
/// frame: 0 on |e,0⟩, ω_q − ω₀ on |g,1_q⟩, couplings g_q.
#[derive(Clone, Debug)]
pub struct SectorDynamics {
    pub omega0: f64,
    pub bath: DiscretizedBath,
    energies: DVector<f64>,
    vectors: DMatrix<f64>,
}

impl SectorDynamics {
    pub fn new(bath: &DiscretizedBath, omega0: f64) -> Result<Self> {
        let n = bath.len();
        let mut h = DMatrix::<f64>::zeros(n + 1, n + 1);
        for q in 0..n {
            h[(q + 1, q + 1)] = bath.omega[q] - omega0;
            h[(0, q + 1)] = bath.coupling[q];
            h[(q + 1, 0)] = bath.coupling[q];
        }
        let eig = SymmetricEigen::try_new(h, 1e-15, 10_000).ok_or(Error::EigenNoConvergence { sweeps: 10_000 })?;
        Ok(SectorDynamics {
            omega0,
            bath: bath.clone(),
            energies: eig.eigenvalues,
            vectors: eig.eigenvectors,
        })
    }

    pub fn modes(&self) -> usize {
        self.bath.len()
    }

    /// Ũ(t) on a one-excitation vector (c̃₁, λ̃₁, ..., λ̃_N).
    fn propagate_rotating(&self, v: &[C64], t: f64) -> Vec<C64> {
        let m = self.energies.len();
        let mut coeff = vec![C64::new(0.0, 0.0); m];
        for j in 0..m {
            let mut s = C64::new(0.0, 0.0);
            for i in 0..m {
                s += v[i] * self.vectors[(i, j)];
            }
            coeff[j] = s * C64::from_polar(1.0, -self.energies[j] * t);
        }
        (0..m)
            .map(|i| (0..m).map(|j| coeff[j] * self.vectors[(i, j)]).sum())
            .collect()
    }

    /// Ũ(t) as a dense matrix.
    fn rotating_propagator(&self, t: f64) -> DMatrix<C64> {
        let m = self.energies.len();
        let phased = DMatrix::<C64>::from_fn(m, m, |i, j| C64::from_polar(self.vectors[(i, j)], -self.energies[j] * t));
        let vt = DMatrix::<C64>::from_fn(m, m, |i, j| C64::new(self.vectors[(j, i)], 0.0));
        phased * vt
    }

    /// G_N(t) = c̃₁(t) for the excited initial state.
    pub fn amplitude(&self, t: f64) -> C64 {
        let m = self.energies.len();
        (0..m)
            .map(|j| C64::from_polar(self.vectors[(0, j)] * self.vectors[(0, j)], -self.energies[j] * t))
            .sum()
    }

    /// Schrödinger-picture propagator on the full sector
    /// (|g,0⟩, |e,0⟩, |g,1_q⟩): e^{iω₀t/2} on |g,0⟩, e^{−iω₀t/2}Ũ(t) elsewhere.
    pub fn propagator(&self, t: f64) -> DMatrix<C64> {
        let m = self.energies.len();
        let mut u = DMatrix::<C64>::zeros(m + 1, m + 1);
        u[(0, 0)] = C64::from_polar(1.0, 0.5 * self.omega0 * t);
        let block = self.rotating_propagator(t) * C64::from_polar(1.0, -0.5 * self.omega0 * t);
        u.view_mut((1, 1), (m, m)).copy_from(&block);
        u
    }

    /// Schrödinger-picture propagation of a full-sector vector.
    pub fn propagate(&self, v: &[C64], t: f64) -> Vec<C64> {
        let mut out = Vec::with_capacity(v.len());
        out.push(v[0] * C64::from_polar(1.0, 0.5 * self.omega0 * t));
        let phase = C64::from_polar(1.0, -0.5 * self.omega0 * t);
        out.extend(self.propagate_rotating(&v[1..], t).into_iter().map(|x| x * phase));
        out
    }

    /// The reduced map of this discretized model, Φ₀ᵗ with vacuum bath.
    pub fn reduced_map(self: &Arc<Self>) -> ModelMap {
        let dynamics = Arc::clone(self);
        ModelMap::Custom(CustomFamily::new("decay_discretized", DampingBasis::decay(), move |t| {
            let g = dynamics.amplitude(t);
            let coh = g * C64::from_polar(1.0, -dynamics.omega0 * t);
            Ok([C64::new(1.0, 0.0), coh, coh.conj(), C64::new(g.norm_sqr(), 0.0)])
        }))
    }

    fn check_horizon(&self, t: f64) -> Result<()> {
        check(t >= 0.0, "t", "must be ≥ 0")?;
        check(t < self.bath.horizon(), "t", format!("beyond the recurrence horizon {}", self.bath.horizon()))
    }
}

/// Evolves a dilation state by the spectral decomposition.
pub fn evolve_decay(dynamics: &SectorDynamics, psi: &DilationState, t: f64) -> Result<DilationState> {
    check(t >= 0.0, "t", "must be ≥ 0")?;
    let mut v = Vec::with_capacity(psi.lambda.len() + 1);
    v.push(psi.c1);
    v.extend_from_slice(&psi.lambda);
    let out = dynamics.propagate_rotating(&v, t);
    Ok(DilationState {
        c0: psi.c0,
        c1: out[0],
        lambda: out[1..].to_vec(),
    })
}

/// Evolves a dilation state by integrating
/// dc̃₁/dt = −iΣ g_q λ̃_q, dλ̃_q/dt = −i(ω_q − ω₀)λ̃_q − i g_q c̃₁.
pub fn evolve_decay_rk45(bath: &DiscretizedBath, omega0: f64, psi: &DilationState, t: f64, spec: &OdeSpec) -> Result<DilationState> {
    let mut y = Vec::with_capacity(psi.lambda.len() + 1);
    y.push(psi.c1);
    y.extend_from_slice(&psi.lambda);
    let mi = C64::new(0.0, -1.0);
    let detuning: Vec<f64> = bath.omega.iter().map(|w| w - omega0).collect();
    let sol = dopri45(
        |_, y, dy| {
            let mut s = C64::new(0.0, 0.0);
            for (q, g) in bath.coupling.iter().enumerate() {
                s += y[q + 1] * *g;
                dy[q + 1] = mi * (y[q + 1] * detuning[q] + y[0] * *g);
            }
            dy[0] = mi * s;
        },
        0.0,
        &y,
        t,
        spec,
    )?;
    Ok(DilationState {
        c0: psi.c0,
        c1: sol.y[0],
        lambda: sol.y[1..].to_vec(),
    })
}

/// (o ⊗ 𝟙)|v⟩ on a full-sector vector; fails if weight leaves the sector.
pub(crate) fn apply_system_op(o: &Operator2, v: &[C64]) -> Result<Vec<C64>> {
    let (ee, eg, ge, gg) = (o.0[0][0], o.0[0][1], o.0[1][0], o.0[1][1]);
    let mut out = Vec::with_capacity(v.len());
    out.push(gg * v[0] + ge * v[1]);
    out.push(eg * v[0] + ee * v[1]);
    let mut leak = 0.0;
    for x in &v[2..] {
        out.push(gg * x);
        leak += (eg * x).norm_sqr();
    }
    if leak > LEAK_TOLERANCE {
        return Err(Error::SectorLeak { leak });
    }
    Ok(out)
}

/// ⟨ψ₀|U†(t_late) o_late U(t_late) U†(t_early) o_early U(t_early)|ψ₀⟩ for
/// ψ₀ = (a_e|e⟩ + a_g|g⟩) ⊗ vacuum, by explicit state propagation.
pub fn oracle_tpcf_decay_with(
    dynamics: &SectorDynamics,
    o_late: &Operator2,
    o_early: &Operator2,
    t_early: f64,
    t_late: f64,
    psi_sys: [C64; 2],
) -> Result<C64> {
    check(t_late >= t_early, "t_late", "must not precede t_early")?;
    dynamics.check_horizon(t_late)?;
    let mut psi0 = vec![C64::new(0.0, 0.0); dynamics.modes() + 2];
    psi0[1] = psi_sys[0];
    psi0[0] = psi_sys[1];
    let ket = dynamics.propagate(&psi0, t_early);
    let ket = apply_system_op(o_early, &ket)?;
    let ket = dynamics.propagate(&ket, t_late - t_early);
    let ket = apply_system_op(o_late, &ket)?;
    let bra = dynamics.propagate(&psi0, t_late);
    Ok(bra.iter().zip(&ket).map(|(b, k)| b.conj() * k).sum())
}

/// ⟨σ⁺(t₂)σ⁻(t₁)⟩ for the excited atom in the discretized bath.
pub fn oracle_tpcf_decay(dynamics: &SectorDynamics, t1: f64, t2: f64) -> Result<C64> {
    oracle_tpcf_decay_with(
        dynamics,
        &Operator2::sigma_plus(),
        &Operator2::sigma_minus(),
        t1,
        t2,
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
    )
}

#[cfg(test)]
mod tests {
    use super::super::discretize::{discretize, discretize_lorentzian, Scheme};
    use super::*;
    use crate::models::{closed_g_lorentzian, exact_tpcf_decay};
    use crate::spectral::{LorentzianBath, SpectralModel};

    fn single_mode(g: f64, omega: f64) -> DiscretizedBath {
        DiscretizedBath {
            omega: vec![omega],
            coupling: vec![g],
            scheme: Scheme::Midpoint,
            window: (omega - 0.5, omega + 0.5),
            missing_mass: None,
        }
    }

    #[test]
    fn uncoupled_stays_excited() {
        let b = LorentzianBath::fig1(0.0);
        let db = discretize_lorentzian(&b, 32).unwrap();
        let d = SectorDynamics::new(&db, 20.0).unwrap();
        let s = evolve_decay(&d, &DilationState::excited(32), 0.7).unwrap();
        assert!((s.c1 - 1.0).norm() < 1e-13);
        let v = oracle_tpcf_decay(&d, 0.2, 0.9).unwrap();
        assert!((v - C64::from_polar(1.0, 20.0 * 0.7)).norm() < 1e-12);
    }

    #[test]
    fn resonant_rabi() {
        let db = single_mode(0.8, 20.0);
        let d = SectorDynamics::new(&db, 20.0).unwrap();
        for t in [0.3, 1.0, 2.5] {
            let s = evolve_decay(&d, &DilationState::excited(1), t).unwrap();
            assert!((s.c1 - (0.8 * t).cos()).norm() < 1e-13);
            assert!((d.amplitude(t) - (0.8 * t).cos()).norm() < 1e-13);
        }
    }

    #[test]
    fn norm_conserved_and_paths_agree() {
        let b = LorentzianBath::fig1(1.0);
        let db = discretize_lorentzian(&b, 128).unwrap();
        let d = SectorDynamics::new(&db, b.omega0).unwrap();
        let psi = DilationState::excited(128);
        let spec = OdeSpec {
            rel_tol: 1e-12,
            abs_tol: 1e-14,
            ..OdeSpec::default()
        };
        let a = evolve_decay(&d, &psi, 3.0).unwrap();
        let r = evolve_decay_rk45(&db, b.omega0, &psi, 3.0, &spec).unwrap();
        assert!((a.norm_sqr() - 1.0).abs() < 1e-12);
        assert!((r.norm_sqr() - 1.0).abs() < 1e-10);
        assert!((a.c1 - r.c1).norm() < 1e-9);
    }

    #[test]
    fn continuum_amplitude() {
        let b = LorentzianBath::fig1(1.0);
        let d = SectorDynamics::new(&discretize_lorentzian(&b, 512).unwrap(), b.omega0).unwrap();
        for t in [0.5, 1.0, 2.0, 5.0] {
            let g = closed_g_lorentzian(&b, t);
            assert!((d.amplitude(t) - g).norm() / g.norm() < 1e-3, "t={t}");
        }
    }

    #[test]
    fn oracle_at_origin_and_figure_point() {
        let b = LorentzianBath::fig1(1.0);
        let d = SectorDynamics::new(&discretize_lorentzian(&b, 512).unwrap(), b.omega0).unwrap();
        assert!((oracle_tpcf_decay(&d, 0.0, 0.0).unwrap() - 1.0).norm() < 1e-12);
        let o = oracle_tpcf_decay(&d, 0.1, 0.6).unwrap();
        let e = exact_tpcf_decay(&b, 0.1, 0.6).unwrap();
        assert!((o - e).norm() / o.norm() < 1e-3);
    }

    #[test]
    fn horizon_and_leak_enforced() {
        let b = LorentzianBath::fig1(1.0);
        let d = SectorDynamics::new(&discretize(&SpectralModel::Lorentzian(b), 16, (0.0, 40.0)).unwrap(), b.omega0).unwrap();
        assert!(oracle_tpcf_decay(&d, 0.0, 2.0).is_err());
        let d = SectorDynamics::new(&discretize_lorentzian(&b, 64).unwrap(), b.omega0).unwrap();
        // σ⁺ on the one-photon components leaves the sector
        let r = oracle_tpcf_decay_with(&d, &Operator2::identity(), &Operator2::sigma_plus(), 1.0, 1.0, [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]);
        assert!(matches!(r, Err(Error::SectorLeak { .. })));
    }
}
