use crate::error::{Error, Result};
use crate::models::{ModelMap, INVERSE_FLOOR};
use crate::ode::{dopri45, OdeSpec};
use crate::qalg::{MapFactors, C64};

/// Step of the finite-difference generator.
pub const GENERATOR_STEP: f64 = 1e-4;

/// Eigenvalues λᵢ(t) of the generator 𝒢(t) = Φ̇₀ᵗ(Φ₀ᵗ)⁻¹, by a five-point
/// central difference (one-sided near t = 0).
pub fn generator(model: &ModelMap, t: f64) -> Result<[C64; 4]> {
    let h = GENERATOR_STEP;
    let f0 = model.factors(t)?;
    for v in &f0 {
        if v.norm() < INVERSE_FLOOR {
            return Err(Error::SingularMap { t, modulus: v.norm() });
        }
    }
    let df: [C64; 4] = if t >= 2.0 * h {
        let (m2, m1, p1, p2) = (model.factors(t - 2.0 * h)?, model.factors(t - h)?, model.factors(t + h)?, model.factors(t + 2.0 * h)?);
        std::array::from_fn(|i| (m2[i] - m1[i] * 8.0 + p1[i] * 8.0 - p2[i]) / (12.0 * h))
    } else {
        let f: Vec<[C64; 4]> = (1..=4).map(|k| model.factors(t + k as f64 * h)).collect::<Result<_>>()?;
        std::array::from_fn(|i| (f0[i] * -25.0 + f[0][i] * 48.0 - f[1][i] * 36.0 + f[2][i] * 16.0 - f[3][i] * 3.0) / (12.0 * h))
    };
    Ok(std::array::from_fn(|i| df[i] / f0[i]))
}

/// The divisible completion 𝒟_{t₁}^{t₂} = T exp ∫ 𝒢, integrated as
/// ẏᵢ = λᵢ(t)yᵢ from yᵢ(t₁) = 1.
pub fn divisible_completion(model: &ModelMap, t1: f64, t2: f64) -> Result<MapFactors> {
    if t2 < t1 || t1 < 0.0 {
        return Err(Error::InvalidParameter {
            name: "t2",
            reason: format!("need 0 ≤ t1 ≤ t2, got ({t1}, {t2})"),
        });
    }
    let basis = model.basis();
    if t1 == t2 {
        return Ok(MapFactors::identity(basis));
    }
    let spec = OdeSpec {
        rel_tol: 1e-12,
        abs_tol: 1e-14,
        initial_step: 1e-3,
        min_step: 1e-13,
    };
    let mut failure = None;
    let sol = dopri45(
        |t, y, dy| match generator(model, t) {
            Ok(l) => {
                for i in 0..4 {
                    dy[i] = l[i] * y[i];
                }
            }
            Err(e) => {
                failure.get_or_insert(e);
                dy.fill(C64::new(0.0, 0.0));
            }
        },
        t1,
        &[C64::new(1.0, 0.0); 4],
        t2,
        &spec,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(MapFactors::new(basis, std::array::from_fn(|i| sol.y[i])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{model_map, DecayModel, EngineeredDephasing, GkslDephasing, ThermalDephasing};
    use crate::spectral::{EngineeredDistribution, LorentzianBath, OhmicBath};
    use proptest::prelude::*;

    fn analytic_models(g: f64) -> Vec<ModelMap> {
        vec![
            ModelMap::Decay(DecayModel::closed(LorentzianBath::fig1(g))),
            ModelMap::Engineered(EngineeredDephasing::new(EngineeredDistribution::with_defaults(g))),
            ModelMap::Gksl(GkslDephasing::new(g, 2.0).unwrap()),
        ]
    }

    #[test]
    fn equal_times_identity() {
        for m in analytic_models(0.5) {
            assert_eq!(divisible_completion(&m, 1.0, 1.0).unwrap().scale, [C64::new(1.0, 0.0); 4]);
        }
    }

    #[test]
    fn decay_completion_matches_map() {
        let m = ModelMap::Decay(DecayModel::closed(LorentzianBath::fig1(1.0)));
        for (t1, t2) in [(0.0, 0.5), (0.1, 2.0), (1.0, 4.0), (2.5, 3.0)] {
            let d = divisible_completion(&m, t1, t2).unwrap();
            let f = model_map(&m, t1, t2).unwrap();
            assert!(d.max_scale_diff(&f) < 1e-10, "({t1},{t2}) {}", d.max_scale_diff(&f));
        }
    }

    #[test]
    fn thermal_completion_matches_map() {
        let m = ModelMap::Thermal(ThermalDephasing::new(OhmicBath::new(1.0, 1.0, 10.0).unwrap()));
        let d = divisible_completion(&m, 0.5, 2.0).unwrap();
        let f = model_map(&m, 0.5, 2.0).unwrap();
        assert!(d.max_scale_diff(&f) < 1e-8, "{}", d.max_scale_diff(&f));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]
        #[test]
        fn semigroup_chain(g in 0.0f64..1.0, a in 0.0f64..3.0, b in 0.0f64..3.0, c in 0.0f64..3.0, kind in 0usize..3) {
            let mut t = [a, b, c];
            t.sort_by(f64::total_cmp);
            let m = &analytic_models(g)[kind];
            let d12 = divisible_completion(m, t[0], t[1]).unwrap();
            let d23 = divisible_completion(m, t[1], t[2]).unwrap();
            let d13 = divisible_completion(m, t[0], t[2]).unwrap();
            prop_assert!(d23.after(&d12).max_scale_diff(&d13) < 1e-10);
            prop_assert!(d13.max_scale_diff(&model_map(m, t[0], t[2]).unwrap()) < 1e-10);
        }
    }
}
