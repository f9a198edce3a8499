use nalgebra::Matrix4;

use crate::error::{check, Result};
use crate::qalg::linalg::Mat4;
use crate::qalg::{DampingBasis, MapFactors, Operator2, C64, I};

/// Constant-rate Lindblad dephasing: H = (ω/2)σ_z, one jump operator
/// √(γ/2) σ_z. The semigroup e^{ℒt} is diagonal in 𝟙, σ⁺, σ⁻, σ_z.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GkslDephasing {
    pub gamma: f64,
    pub omega: f64,
}

impl GkslDephasing {
    pub fn new(gamma: f64, omega: f64) -> Result<Self> {
        check(gamma >= 0.0 && gamma.is_finite(), "gamma", "must be finite and ≥ 0")?;
        check(omega.is_finite(), "omega", "must be finite")?;
        Ok(GkslDephasing { gamma, omega })
    }

    pub fn basis(&self) -> DampingBasis {
        DampingBasis::dephasing()
    }

    /// λ₀..λ₃ = 0, −iω − γ, iω − γ, 0.
    pub fn eigenvalues(&self) -> [C64; 4] {
        let l1 = -I * self.omega - self.gamma;
        [C64::new(0.0, 0.0), l1, l1.conj(), C64::new(0.0, 0.0)]
    }

    pub fn factors(&self, t: f64) -> [C64; 4] {
        self.eigenvalues().map(|l| (l * t).exp())
    }

    pub fn map(&self, t: f64) -> MapFactors {
        MapFactors::new(self.basis(), self.factors(t))
    }

    /// ℒ on row-major vec(X), built from H and the jump operator.
    pub fn lindbladian(&self) -> Mat4 {
        let h = Operator2::sigma_z() * (0.5 * self.omega);
        let j = Operator2::sigma_z() * (0.5 * self.gamma).sqrt();
        let jdj = j.dagger() * j;
        let mut out = [[C64::new(0.0, 0.0); 4]; 4];
        for l in 0..4 {
            let x = Operator2::unit(l / 2, l % 2);
            let y = (h * x - x * h) * (-I) + j * x * j.dagger() - (jdj * x + x * jdj) * 0.5;
            let v = y.to_vec4();
            for k in 0..4 {
                out[k][l] = v[k];
            }
        }
        out
    }

    /// e^{ℒt} as a matrix exponential, independent of the damping basis.
    pub fn propagator(&self, t: f64) -> Mat4 {
        let l = self.lindbladian();
        let m = Matrix4::from_fn(|r, c| l[r][c] * t).exp();
        std::array::from_fn(|r| std::array::from_fn(|c| m[(r, c)]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qalg::linalg::mat4_max_abs_diff;

    #[test]
    fn propagator_matches_damping_factors() {
        let m = GkslDephasing::new(0.7, 3.0).unwrap();
        for t in [0.0, 0.4, 2.5] {
            let direct = m.propagator(t);
            let diag = m.map(t).superoperator();
            assert!(mat4_max_abs_diff(&direct, &diag) < 1e-13, "t={t}");
        }
    }

    #[test]
    fn sigma_plus_decays_at_gamma() {
        let m = GkslDephasing::new(0.5, 0.0).unwrap();
        let out = m.map(2.0).apply(&Operator2::sigma_plus());
        assert!((out.0[0][1] - (-1.0f64).exp()).norm() < 1e-15);
    }
}
