use crate::error::{Error, Result};
use crate::models::ModelMap;
use crate::qalg::linalg::{mat4_apply, Mat4};
use crate::qalg::{MapFactors, Operator2, C64};

/// How each leg Φ_{tₖ₋₁}^{tₖ} of the map-built correlator is formed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum LegMap {
    /// Φ₀^{tₖ−tₖ₋₁}: the bath is reset to its initial state at each insertion.
    #[default]
    Restart,
    /// Φ₀^{tₖ}∘(Φ₀^{tₖ₋₁})⁻¹.
    Ratio,
}

impl LegMap {
    pub fn leg(&self, model: &ModelMap, t1: f64, t2: f64) -> Result<MapFactors> {
        match self {
            LegMap::Restart => model.restart(t1, t2),
            LegMap::Ratio => model.two_time(t1, t2),
        }
    }
}

fn check_times(ops: &[Operator2], times: &[f64]) -> Result<()> {
    if ops.len() != times.len() {
        return Err(Error::InvalidParameter {
            name: "times",
            reason: format!("{} times for {} operators", times.len(), ops.len()),
        });
    }
    let mut prev = 0.0;
    for &t in times {
        if !(t >= prev) {
            return Err(Error::InvalidParameter {
                name: "times",
                reason: format!("must be nondecreasing from 0, got {times:?}"),
            });
        }
        prev = t;
    }
    Ok(())
}

/// Tr[oₙ Φ_{tₙ₋₁}^{tₙ} ··· o₁ Φ₀^{t₁} ρ₀], by applying each leg map to the
/// full operator and multiplying on the left.
pub fn qrt_npcf(model: &ModelMap, ops: &[Operator2], times: &[f64], rho0: &Operator2, leg: LegMap) -> Result<C64> {
    check_times(ops, times)?;
    let mut x = *rho0;
    let mut prev = 0.0;
    for (o, &t) in ops.iter().zip(times) {
        x = *o * leg.leg(model, prev, t)?.apply(&x);
        prev = t;
    }
    Ok(x.trace())
}

/// Same correlator by damping-basis contraction: the state is held as
/// coefficients cⁱ, each leg scales them by vᵢ and each insertion applies
/// the matrix (A_o)ᵢʲ.
pub fn qrt_npcf_contraction(model: &ModelMap, ops: &[Operator2], times: &[f64], rho0: &Operator2, leg: LegMap) -> Result<C64> {
    check_times(ops, times)?;
    let basis = model.basis();
    let mut c = basis.expand(rho0);
    let mut prev = 0.0;
    for (o, &t) in ops.iter().zip(times) {
        let v = leg.leg(model, prev, t)?.scale;
        let a = basis.correlator_matrix(o);
        let scaled: [C64; 4] = std::array::from_fn(|i| c[i] * v[i]);
        c = std::array::from_fn(|j| (0..4).map(|i| a[i][j] * scaled[i]).sum());
        prev = t;
    }
    let tr = basis.traces();
    Ok((0..4).map(|j| c[j] * tr[j]).sum())
}

/// The correlator with legs given as superoperators on row-major vec(X).
pub fn qrt_npcf_superoperator(leg: impl Fn(f64, f64) -> Result<Mat4>, ops: &[Operator2], times: &[f64], rho0: &Operator2) -> Result<C64> {
    check_times(ops, times)?;
    let mut x = *rho0;
    let mut prev = 0.0;
    for (o, &t) in ops.iter().zip(times) {
        x = *o * Operator2::from_vec4(mat4_apply(&leg(prev, t)?, &x.to_vec4()));
        prev = t;
    }
    Ok(x.trace())
}

/// Exact ⟨o_late(t_late) o_early(t_early)⟩ of a physical model.
///
/// The decay model is solved for the excited initial state with
/// o_early = σ⁻ and o_late = σ⁺ only.
pub fn exact_tpcf(model: &ModelMap, o_late: &Operator2, o_early: &Operator2, t_early: f64, t_late: f64, rho0: &Operator2) -> Result<C64> {
    match model {
        ModelMap::Decay(m) => {
            let supported = o_late.max_abs_diff(&Operator2::sigma_plus()) == 0.0
                && o_early.max_abs_diff(&Operator2::sigma_minus()) == 0.0
                && rho0.max_abs_diff(&Operator2::excited()) == 0.0;
            if !supported {
                return Err(Error::InvalidParameter {
                    name: "observables",
                    reason: "the decay correlator is available for ⟨σ⁺σ⁻⟩ from the excited state".into(),
                });
            }
            m.exact_tpcf(t_early, t_late)
        }
        ModelMap::Thermal(m) => m.exact_tpcf(o_late, o_early, t_early, t_late, rho0),
        ModelMap::Engineered(m) => m.exact_tpcf(o_late, o_early, t_early, t_late, rho0),
        ModelMap::Gksl(_) | ModelMap::Custom(_) => Err(Error::InvalidParameter {
            name: "model",
            reason: format!("{} has no dilation", model.name()),
        }),
    }
}

/// Exact and map-built values of ⟨o_late(t + τ) o_early(t)⟩.
pub fn correlator_pair(model: &ModelMap, o_late: &Operator2, o_early: &Operator2, t: f64, tau: f64, rho0: &Operator2, leg: LegMap) -> Result<(C64, C64)> {
    let exact = exact_tpcf(model, o_late, o_early, t, t + tau, rho0)?;
    let markov = qrt_npcf(model, &[*o_early, *o_late], &[t, t + tau], rho0, leg)?;
    Ok((exact, markov))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{DecayModel, EngineeredDephasing, GkslDephasing, ThermalDephasing};
    use crate::spectral::{EngineeredDistribution, LorentzianBath, OhmicBath};
    use proptest::prelude::*;

    fn op() -> impl Strategy<Value = Operator2> {
        proptest::array::uniform8(-1.0f64..1.0).prop_map(|v| {
            Operator2::new([[C64::new(v[0], v[1]), C64::new(v[2], v[3])], [C64::new(v[4], v[5]), C64::new(v[6], v[7])]])
        })
    }

    fn model(kind: usize, g: f64) -> ModelMap {
        match kind {
            0 => ModelMap::Decay(DecayModel::closed(LorentzianBath::fig1(g))),
            1 => ModelMap::Engineered(EngineeredDephasing::new(EngineeredDistribution::with_defaults(g))),
            2 => ModelMap::Thermal(ThermalDephasing::new(OhmicBath::new(g, 1.0, 5.0).unwrap())),
            _ => ModelMap::Gksl(GkslDephasing::new(g, 1.5).unwrap()),
        }
    }

    #[test]
    fn single_insertion_is_mean_value() {
        let m = model(0, 1.0);
        let rho = Operator2::excited();
        let sz = Operator2::sigma_z();
        let v = qrt_npcf(&m, &[sz], &[2.0], &rho, LegMap::Restart).unwrap();
        let want = (sz * m.from_zero(2.0).unwrap().apply(&rho)).trace();
        assert!((v - want).norm() < 1e-15);
    }

    #[test]
    fn zero_times_give_operator_product() {
        let m = model(1, 0.2);
        let rho = Operator2::from_bloch(0.1, 0.2, 0.3);
        let ops = [Operator2::sigma_minus(), Operator2::sigma_x(), Operator2::sigma_plus()];
        let v = qrt_npcf(&m, &ops, &[0.0; 3], &rho, LegMap::Ratio).unwrap();
        let want = (ops[2] * ops[1] * ops[0] * rho).trace();
        assert!((v - want).norm() < 1e-15);
    }

    #[test]
    fn bad_times_rejected() {
        let m = model(3, 0.5);
        let id = Operator2::identity();
        assert!(qrt_npcf(&m, &[id, id], &[1.0, 0.5], &id, LegMap::Restart).is_err());
        assert!(qrt_npcf(&m, &[id], &[1.0, 2.0], &id, LegMap::Restart).is_err());
    }

    #[test]
    fn legs_agree_for_semigroup() {
        let m = model(3, 0.4);
        let rho = Operator2::from_bloch(0.5, 0.0, 0.5);
        let ops = [Operator2::sigma_minus(), Operator2::sigma_plus()];
        let a = qrt_npcf(&m, &ops, &[0.7, 1.9], &rho, LegMap::Restart).unwrap();
        let b = qrt_npcf(&m, &ops, &[0.7, 1.9], &rho, LegMap::Ratio).unwrap();
        assert!((a - b).norm() < 1e-15);
    }

    #[test]
    fn decay_exact_restricted() {
        let m = model(0, 1.0);
        let sz = Operator2::sigma_z();
        assert!(exact_tpcf(&m, &sz, &sz, 0.0, 1.0, &Operator2::excited()).is_err());
        assert!(exact_tpcf(&model(3, 1.0), &sz, &sz, 0.0, 1.0, &Operator2::excited()).is_err());
    }

    proptest! {
        #[test]
        fn contraction_matches_direct(kind in 0usize..4, g in 0.0f64..1.0, o1 in op(), o2 in op(),
                                      t1 in 0.0f64..3.0, tau in 0.0f64..3.0, x in -0.5f64..0.5, z in -0.5f64..0.5, ratio in any::<bool>()) {
            let m = model(kind, g);
            let rho = Operator2::from_bloch(x, 0.1, z);
            let leg = if ratio { LegMap::Ratio } else { LegMap::Restart };
            let a = qrt_npcf(&m, &[o1, o2], &[t1, t1 + tau], &rho, leg);
            let b = qrt_npcf_contraction(&m, &[o1, o2], &[t1, t1 + tau], &rho, leg);
            if let (Ok(a), Ok(b)) = (a, b) {
                prop_assert!((a - b).norm() < 1e-12, "{a} vs {b}");
            }
        }
    }
}
