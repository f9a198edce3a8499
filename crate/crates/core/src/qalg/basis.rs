use super::linalg::{mat4_inverse, Mat4};
use super::operator::{Operator2, C64, ZERO};
use crate::error::{Error, Result};

/// An operator basis Λ₀..Λ₃ together with its dual Λ̌⁰..Λ̌³, Tr[Λ̌ⁱΛⱼ] = δⁱⱼ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DampingBasis {
    basis: [Operator2; 4],
    duals: [Operator2; 4],
}

impl DampingBasis {
    /// Builds the dual basis by inverting the matrix of vectorized elements.
    pub fn new(basis: [Operator2; 4]) -> Result<Self> {
        let mut b: Mat4 = [[ZERO; 4]; 4];
        for (j, op) in basis.iter().enumerate() {
            for (k, v) in op.to_vec4().into_iter().enumerate() {
                b[k][j] = v;
            }
        }
        let w = mat4_inverse(&b).ok_or(Error::SingularBasis)?;
        // Tr[X Y] = Σ X_ab Y_ba, so row i of B⁻¹ is vec(Λ̌ⁱᵀ).
        let duals = std::array::from_fn(|i| Operator2::from_vec4(w[i]).transpose());
        Ok(DampingBasis { basis, duals })
    }

    /// Λ₀ = (𝟙−σ_z)/2, Λ₁ = σ⁺, Λ₂ = σ⁻, Λ₃ = σ_z.
    pub fn decay() -> Self {
        let id = Operator2::identity();
        let sz = Operator2::sigma_z();
        Self::new([
            (id - sz) * 0.5,
            Operator2::sigma_plus(),
            Operator2::sigma_minus(),
            sz,
        ])
        .expect("decay basis is linearly independent")
    }

    /// Λ₀ = 𝟙, Λ₁ = σ⁺, Λ₂ = σ⁻, Λ₃ = σ_z, the basis of both dephasing models.
    pub fn dephasing() -> Self {
        Self::new([
            Operator2::identity(),
            Operator2::sigma_plus(),
            Operator2::sigma_minus(),
            Operator2::sigma_z(),
        ])
        .expect("dephasing basis is linearly independent")
    }

    pub fn elements(&self) -> &[Operator2; 4] {
        &self.basis
    }

    pub fn duals(&self) -> &[Operator2; 4] {
        &self.duals
    }

    /// Coefficients cⁱ = Tr[Λ̌ⁱ O].
    pub fn expand(&self, o: &Operator2) -> [C64; 4] {
        std::array::from_fn(|i| (self.duals[i] * *o).trace())
    }

    pub fn reconstruct(&self, c: &[C64; 4]) -> Operator2 {
        let mut out = Operator2::zero();
        for (ci, op) in c.iter().zip(&self.basis) {
            out += op.scale(*ci);
        }
        out
    }

    /// The matrix (A)ᵢʲ = Tr[Λ̌ʲ O Λᵢ], stored as `a[i][j]`.
    ///
    /// Left multiplication by `O` maps Λᵢ to Σⱼ (A)ᵢʲ Λⱼ.
    pub fn correlator_matrix(&self, o: &Operator2) -> [[C64; 4]; 4] {
        std::array::from_fn(|i| {
            let oi = *o * self.basis[i];
            std::array::from_fn(|j| (self.duals[j] * oi).trace())
        })
    }

    /// Tr[Λᵢ] for each element.
    pub fn traces(&self) -> [C64; 4] {
        std::array::from_fn(|i| self.basis[i].trace())
    }

    /// Largest deviation of Tr[Λ̌ⁱΛⱼ] from δⁱⱼ.
    pub fn biorthogonality_defect(&self) -> f64 {
        let mut d: f64 = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                let want = if i == j { 1.0 } else { 0.0 };
                d = d.max(((self.duals[i] * self.basis[j]).trace() - want).norm());
            }
        }
        d
    }
}

/// Free-function form of [`DampingBasis::expand`].
pub fn damping_expand(o: &Operator2, basis: &DampingBasis) -> [C64; 4] {
    basis.expand(o)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qalg::operator::ONE;

    #[test]
    fn decay_duals() {
        let b = DampingBasis::decay();
        assert!(b.biorthogonality_defect() < 1e-14);
        // Λ̌⁰ = 𝟙 and Λ̌³ = Π_excited
        assert!(b.duals()[0].max_abs_diff(&Operator2::identity()) < 1e-15);
        assert!(b.duals()[3].max_abs_diff(&Operator2::excited()) < 1e-15);
        assert!(b.duals()[1].max_abs_diff(&Operator2::sigma_minus()) < 1e-15);
    }

    #[test]
    fn expand_identity_in_decay_basis() {
        // 𝟙 = 2Λ₀ + Λ₃
        let c = damping_expand(&Operator2::identity(), &DampingBasis::decay());
        assert_eq!(c, [ONE * 2.0, ZERO, ZERO, ONE]);
    }

    #[test]
    fn expand_basis_element() {
        let b = DampingBasis::decay();
        let c = b.expand(&Operator2::sigma_minus());
        assert_eq!(c, [ZERO, ZERO, ONE, ZERO]);
    }

    #[test]
    fn expand_excited_state_dephasing_basis() {
        let c = DampingBasis::dephasing().expand(&Operator2::excited());
        assert_eq!(c, [ONE * 0.5, ZERO, ZERO, ONE * 0.5]);
    }

    #[test]
    fn correlator_matrix_of_identity() {
        for b in [DampingBasis::decay(), DampingBasis::dephasing()] {
            let a = b.correlator_matrix(&Operator2::identity());
            for i in 0..4 {
                for j in 0..4 {
                    let want = if i == j { ONE } else { ZERO };
                    assert!((a[i][j] - want).norm() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn dependent_basis_rejected() {
        let id = Operator2::identity();
        let r = DampingBasis::new([id, Operator2::sigma_plus(), Operator2::sigma_minus(), id * 2.0]);
        assert_eq!(r, Err(Error::SingularBasis));
    }
}
