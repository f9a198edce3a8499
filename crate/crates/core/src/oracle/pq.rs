use nalgebra::DMatrix;

use super::decay::{SectorDynamics, LEAK_TOLERANCE};
use crate::error::{check, Error, Result};
use crate::qalg::{Operator2, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projection {
    P,
    Q,
}

/// The eight terms Tr_S[o₂ Tr_E[X₃ S o₁ X₂ S X₁ ρ]], X ∈ {𝒫, 𝒬},
/// stored as `terms[x3][x2][x1]` with index 0 for 𝒫.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PQTerms {
    pub terms: [[[C64; 2]; 2]; 2],
}

impl PQTerms {
    pub fn get(&self, x3: Projection, x2: Projection, x1: Projection) -> C64 {
        let i = |p: Projection| (p == Projection::Q) as usize;
        self.terms[i(x3)][i(x2)][i(x1)]
    }

    pub fn sum(&self) -> C64 {
        self.terms.iter().flatten().flatten().sum()
    }

    /// The fully factorized term (𝒫, 𝒫, 𝒫).
    pub fn ppp(&self) -> C64 {
        self.terms[0][0][0]
    }
}

/// Tr_E of a sector operator, as a qubit operator (index 0 = excited).
fn partial_trace(y: &DMatrix<C64>) -> Operator2 {
    let mut gg = y[(0, 0)];
    for k in 2..y.nrows() {
        gg += y[(k, k)];
    }
    Operator2::new([[y[(1, 1)], y[(1, 0)]], [y[(0, 1)], gg]])
}

/// ρ_S ⊗ |0⟩⟨0| in the sector basis.
fn with_vacuum(rho: &Operator2, dim: usize) -> DMatrix<C64> {
    let mut y = DMatrix::<C64>::zeros(dim, dim);
    y[(1, 1)] = rho.0[0][0];
    y[(1, 0)] = rho.0[0][1];
    y[(0, 1)] = rho.0[1][0];
    y[(0, 0)] = rho.0[1][1];
    y
}

fn project(p: Projection, y: &DMatrix<C64>) -> DMatrix<C64> {
    let factorized = with_vacuum(&partial_trace(y), y.nrows());
    match p {
        Projection::P => factorized,
        Projection::Q => y - factorized,
    }
}

/// (o ⊗ 𝟙)Y, rejecting weight that would leave the sector.
fn left_multiply(o: &Operator2, y: &DMatrix<C64>) -> Result<DMatrix<C64>> {
    let (ee, eg, ge, gg) = (o.0[0][0], o.0[0][1], o.0[1][0], o.0[1][1]);
    let mut out = y * gg;
    let mut leak = 0.0;
    for c in 0..y.ncols() {
        out[(0, c)] = gg * y[(0, c)] + ge * y[(1, c)];
        out[(1, c)] = eg * y[(0, c)] + ee * y[(1, c)];
        for r in 2..y.nrows() {
            leak += (eg * y[(r, c)]).norm_sqr();
        }
    }
    if leak > LEAK_TOLERANCE {
        return Err(Error::SectorLeak { leak });
    }
    Ok(out)
}

/// Eight-term decomposition of ⟨o₂(t₂)o₁(t₁)⟩ for ρ_S ⊗ vacuum, with
/// 𝒫[Y] = Tr_E[Y] ⊗ |0⟩⟨0| and 𝒬 = ℐ − 𝒫.
pub fn pq_decomposition(dynamics: &SectorDynamics, o1: &Operator2, o2: &Operator2, t1: f64, t2: f64, rho_s: &Operator2) -> Result<PQTerms> {
    check(t2 >= t1 && t1 >= 0.0, "t2", "need 0 ≤ t1 ≤ t2")?;
    check(t2 < dynamics.bath.horizon(), "t2", "beyond the recurrence horizon")?;
    let dim = dynamics.modes() + 2;
    let rho0 = with_vacuum(rho_s, dim);
    let u1 = dynamics.propagator(t1);
    let u2 = dynamics.propagator(t2 - t1);
    let evolve = |u: &DMatrix<C64>, y: &DMatrix<C64>| u * y * u.adjoint();
    let both = [Projection::P, Projection::Q];
    let mut terms = [[[C64::new(0.0, 0.0); 2]; 2]; 2];
    for (i1, &x1) in both.iter().enumerate() {
        let a = evolve(&u1, &project(x1, &rho0));
        for (i2, &x2) in both.iter().enumerate() {
            let b = evolve(&u2, &left_multiply(o1, &project(x2, &a))?);
            for (i3, &x3) in both.iter().enumerate() {
                terms[i3][i2][i1] = (*o2 * partial_trace(&project(x3, &b))).trace();
            }
        }
    }
    Ok(PQTerms { terms })
}
