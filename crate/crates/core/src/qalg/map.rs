use super::basis::DampingBasis;
use super::linalg::Mat4;
use super::operator::{Operator2, Operator4, C64, ONE, ZERO};

/// A map diagonal in a damping basis: Φ(Λᵢ) = vᵢ Λᵢ.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MapFactors {
    pub basis: DampingBasis,
    pub scale: [C64; 4],
}

impl MapFactors {
    pub fn new(basis: DampingBasis, scale: [C64; 4]) -> Self {
        MapFactors { basis, scale }
    }

    pub fn identity(basis: DampingBasis) -> Self {
        MapFactors { basis, scale: [ONE; 4] }
    }

    pub fn apply(&self, o: &Operator2) -> Operator2 {
        let mut c = self.basis.expand(o);
        for (ci, vi) in c.iter_mut().zip(&self.scale) {
            *ci *= vi;
        }
        self.basis.reconstruct(&c)
    }

    /// `self ∘ first`, assuming both share the basis.
    pub fn after(&self, first: &MapFactors) -> MapFactors {
        MapFactors {
            basis: self.basis,
            scale: std::array::from_fn(|i| self.scale[i] * first.scale[i]),
        }
    }

    /// Matrix S with vec(Φ(X)) = S·vec(X) in the row-major matrix-unit basis.
    pub fn superoperator(&self) -> Mat4 {
        let mut s = [[ZERO; 4]; 4];
        for l in 0..4 {
            let out = self.apply(&Operator2::unit(l / 2, l % 2)).to_vec4();
            for k in 0..4 {
                s[k][l] = out[k];
            }
        }
        s
    }

    pub fn max_scale_diff(&self, other: &MapFactors) -> f64 {
        self.scale
            .iter()
            .zip(&other.scale)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

pub fn apply_map(f: &MapFactors, o: &Operator2) -> Operator2 {
    f.apply(o)
}

/// Choi state (Φ⊗𝟙)|Ψ⟩⟨Ψ| with |Ψ⟩ = (|00⟩+|11⟩)/√2, map on the first factor.
pub fn choi_state(f: &MapFactors) -> Operator4 {
    choi_of(|x| f.apply(x))
}

pub(crate) fn choi_of(phi: impl Fn(&Operator2) -> Operator2) -> Operator4 {
    let mut c = Operator4::zero();
    for i in 0..2 {
        for j in 0..2 {
            let block = Operator4::kron(&phi(&Operator2::unit(i, j)), &Operator2::unit(i, j));
            c = c + block;
        }
    }
    for row in c.0.iter_mut() {
        for v in row.iter_mut() {
            *v *= 0.5;
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qalg::jacobi::{eigenvalues_hermitian4, trace_norm_4};

    fn dephasing(v: f64) -> MapFactors {
        let v = C64::new(v, 0.0);
        MapFactors::new(DampingBasis::dephasing(), [ONE, v, v, ONE])
    }

    #[test]
    fn identity_map_is_identity() {
        let rho = Operator2::from_bloch(0.1, 0.2, -0.3);
        let f = MapFactors::identity(DampingBasis::decay());
        assert!(apply_map(&f, &rho).max_abs_diff(&rho) < 1e-15);
    }

    #[test]
    fn dephasing_scales_coherence() {
        let g: f64 = 0.7;
        let f = dephasing((-g).exp());
        let out = apply_map(&f, &Operator2::sigma_plus());
        assert!(out.max_abs_diff(&(Operator2::sigma_plus() * (-g).exp())) < 1e-15);
        // ½(1+e⁻ᵍ)ρ + ½(1−e⁻ᵍ)σ_zρσ_z
        let rho = Operator2::from_bloch(0.6, -0.2, 0.3);
        let sz = Operator2::sigma_z();
        let e = (-g).exp();
        let direct = rho * (0.5 * (1.0 + e)) + sz * rho * sz * (0.5 * (1.0 - e));
        assert!(apply_map(&f, &rho).max_abs_diff(&direct) < 1e-15);
    }

    #[test]
    fn decay_map_populations() {
        let g2 = 0.37;
        let f = MapFactors::new(
            DampingBasis::decay(),
            [ONE, ZERO, ZERO, C64::new(g2, 0.0)],
        );
        let out = f.apply(&Operator2::excited());
        assert!(out.max_abs_diff(&Operator2::from_real([[g2, 0.0], [0.0, 1.0 - g2]])) < 1e-15);
    }

    #[test]
    fn choi_of_identity_is_bell_projector() {
        let c = choi_state(&MapFactors::identity(DampingBasis::dephasing()));
        let mut want = Operator4::zero();
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            want.0[i][j] = C64::new(0.5, 0.0);
        }
        assert!(c.max_abs_diff(&want) < 1e-15);
        assert!((trace_norm_4(&c).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn choi_full_dephasing() {
        let c = choi_state(&dephasing(0.0));
        assert!(c.max_abs_diff(&Operator4::diag([0.5, 0.0, 0.0, 0.5])) < 1e-15);
    }

    #[test]
    fn choi_half_dephasing_is_positive() {
        let c = choi_state(&dephasing(0.5));
        let ev = eigenvalues_hermitian4(&c).unwrap();
        // block [[½, ¼], [¼, ½]] on {|00⟩, |11⟩}
        let want = [0.0, 0.0, 0.25, 0.75];
        for (a, b) in ev.iter().zip(want) {
            assert!((a - b).abs() < 1e-13, "{ev:?}");
        }
        assert!((trace_norm_4(&c).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn choi_decay_half_population() {
        // |G|² = 0.5, coherence factor √0.5
        let g = C64::new(0.5f64.sqrt(), 0.0);
        let f = MapFactors::new(DampingBasis::decay(), [ONE, g, g, C64::new(0.5, 0.0)]);
        let c = choi_state(&f);
        // system ground, ancilla excited: ½·Φ(|e⟩⟨e|)_gg = ½·(1−|G|²)
        assert!((c.0[2][2] - C64::new(0.25, 0.0)).norm() < 1e-15);
        assert!((c.trace() - ONE).norm() < 1e-15);
    }

    #[test]
    fn superoperator_matches_apply() {
        let f = dephasing(0.3);
        let s = f.superoperator();
        let rho = Operator2::from_bloch(0.2, 0.5, 0.1);
        let v = crate::qalg::linalg::mat4_apply(&s, &rho.to_vec4());
        assert!(Operator2::from_vec4(v).max_abs_diff(&f.apply(&rho)) < 1e-15);
    }
}
