use super::discretize::DiscretizedBath;
use crate::error::{check, Result};
use crate::qalg::{Operator2, C64};

/// Mode amplitude γ_k(t) = (g_k/ω_k)(1 − e^{iω_k t}).
fn gamma(g: f64, omega: f64, t: f64) -> C64 {
    (1.0 - C64::from_polar(1.0, omega * t)) * (g / omega)
}

fn coth_half(beta: f64, omega: f64) -> f64 {
    if beta.is_infinite() {
        1.0
    } else {
        1.0 / (0.5 * beta * omega).tanh()
    }
}

/// log Tr_B[U_a†(t_l)U_b(t_l)U_b†(t_e)U_c(t_e)ρ_β] for σ_z-coupled modes,
/// with s_a, s_b, s_c = ±1.
///
/// Per mode, U_a†U_b at equal times is the displacement D((s_b−s_a)γ_k(t)),
/// and D(x)D(y) = e^{(xy*−x*y)/2}D(x+y) with Tr[D(z)ρ_β] = e^{−|z|²coth(βω/2)/2}.
pub fn log_influence(bath: &DiscretizedBath, beta: f64, t_early: f64, t_late: f64, s: [f64; 3]) -> C64 {
    let (da, db) = (s[1] - s[0], s[2] - s[1]);
    let mut total = C64::new(0.0, 0.0);
    for (w, g) in bath.omega.iter().zip(&bath.coupling) {
        let x = gamma(*g, *w, t_late) * da;
        let y = gamma(*g, *w, t_early) * db;
        let cross = 0.5 * (x * y.conj() - x.conj() * y);
        total += cross - 0.5 * (x + y).norm_sqr() * coth_half(beta, *w);
    }
    total
}

/// ⟨o_late(t_late) o_early(t_early)⟩ for a qubit dephased by discrete modes
/// H = Σω_k b_k†b_k + σ_z Σ g_k(b_k + b_k†) at inverse temperature β,
/// assembled from the per-mode influence factors.
pub fn oracle_tpcf_dephasing(
    bath: &DiscretizedBath,
    beta: f64,
    o_late: &Operator2,
    o_early: &Operator2,
    t_early: f64,
    t_late: f64,
    rho: &Operator2,
) -> Result<C64> {
    check(t_late >= t_early && t_early >= 0.0, "t_late", "need 0 ≤ t_early ≤ t_late")?;
    check(beta > 0.0, "beta", "must be > 0")?;
    let sign = |i: usize| if i == 0 { 1.0 } else { -1.0 };
    let mut out = C64::new(0.0, 0.0);
    for a in 0..2 {
        for b in 0..2 {
            for c in 0..2 {
                let amp = rho.0[c][a] * o_late.0[a][b] * o_early.0[b][c];
                if amp != C64::new(0.0, 0.0) {
                    out += amp * log_influence(bath, beta, t_early, t_late, [sign(a), sign(b), sign(c)]).exp();
                }
            }
        }
    }
    Ok(out)
}
