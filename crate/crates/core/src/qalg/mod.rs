//! Dense 2×2 and 4×4 complex algebra for qubit maps.

mod basis;
mod jacobi;
pub mod linalg;
mod map;
mod operator;

pub use basis::{damping_expand, DampingBasis};
pub use jacobi::{eigenvalues_hermitian4, trace_norm_4};
pub use map::{apply_map, choi_state, MapFactors};
pub use operator::{Operator2, Operator4, C64};
pub(crate) use operator::I;

use crate::error::Result;

/// Trace distance ½ Σ|χᵢ| with χᵢ the eigenvalues of ρ₁ − ρ₂.
///
/// Errors if either input is non-Hermitian beyond 1e-10.
pub fn trace_distance(rho1: &Operator2, rho2: &Operator2) -> Result<f64> {
    rho1.eigenvalues_hermitian()?;
    rho2.eigenvalues_hermitian()?;
    let ev = (*rho1 - *rho2).eigenvalues_hermitian()?;
    Ok(0.5 * (ev[0].abs() + ev[1].abs()))
}

/// Smallest eigenvalue of the Choi state of `f`.
pub fn choi_min_eigenvalue(f: &MapFactors) -> Result<f64> {
    Ok(eigenvalues_hermitian4(&choi_state(f))?[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use super::operator::ONE;
    use proptest::prelude::*;

    fn density() -> impl Strategy<Value = Operator2> {
        (0.0f64..=1.0, -1.0f64..=1.0, 0.0f64..std::f64::consts::TAU).prop_map(|(r, cz, phi)| {
            let s = (1.0 - cz * cz).max(0.0).sqrt();
            Operator2::from_bloch(r * s * phi.cos(), r * s * phi.sin(), r * cz)
        })
    }

    #[test]
    fn orthogonal_pure_states() {
        let d = trace_distance(&Operator2::excited(), &Operator2::ground()).unwrap();
        assert_eq!(d, 1.0);
    }

    #[test]
    fn dephased_plus_minus() {
        let e = (-0.7f64).exp();
        let plus = Operator2::from_bloch(e, 0.0, 0.0);
        let minus = Operator2::from_bloch(-e, 0.0, 0.0);
        let d = trace_distance(&plus, &minus).unwrap();
        assert!((d - 0.496_585_303_791_409_5).abs() < 1e-15);
    }

    #[test]
    fn rejects_non_hermitian() {
        assert!(trace_distance(&Operator2::sigma_plus(), &Operator2::excited()).is_err());
    }

    proptest! {
        #[test]
        fn metric_axioms(a in density(), b in density(), c in density()) {
            let ab = trace_distance(&a, &b).unwrap();
            let ba = trace_distance(&b, &a).unwrap();
            prop_assert!(ab >= 0.0 && ab <= 1.0 + 1e-12);
            prop_assert_eq!(ab, ba);
            prop_assert!(trace_distance(&a, &a).unwrap() == 0.0);
            let ac = trace_distance(&a, &c).unwrap();
            let cb = trace_distance(&c, &b).unwrap();
            prop_assert!(ac + cb - ab >= -1e-12);
        }

        #[test]
        fn expansion_reconstructs(re in proptest::array::uniform4(-2.0f64..2.0), im in proptest::array::uniform4(-2.0f64..2.0)) {
            let o = Operator2::from_vec4(std::array::from_fn(|k| C64::new(re[k], im[k])));
            for b in [DampingBasis::decay(), DampingBasis::dephasing()] {
                prop_assert!(b.reconstruct(&b.expand(&o)).max_abs_diff(&o) < 1e-13);
            }
        }

        #[test]
        fn contractive_dephasing_choi_positive(v in 0.0f64..=1.0, phi in 0.0f64..std::f64::consts::TAU) {
            let z = C64::from_polar(v, phi);
            let f = MapFactors::new(DampingBasis::dephasing(), [ONE, z.conj(), z, ONE]);
            prop_assert!(choi_min_eigenvalue(&f).unwrap() >= -1e-12);
            prop_assert!((trace_norm_4(&choi_state(&f)).unwrap() - 1.0).abs() < 1e-12);
        }
    }
}
