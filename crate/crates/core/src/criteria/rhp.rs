use super::{GridSpec, MeasureResult};
use crate::error::{check, Result};
use crate::models::ModelMap;
use crate::qalg::{choi_state, trace_norm_4, MapFactors};

/// d(t) values below this are treated as zero.
pub const RHP_CLAMP: f64 = 1e-9;

fn rate(step: &MapFactors, eps: f64) -> Result<f64> {
    Ok((trace_norm_4(&choi_state(step))? - 1.0) / eps)
}

/// d(t) = (‖(Φ_t^{t+ε}⊗𝟙)|Ψ⟩⟨Ψ|‖₁ − 1)/ε with one Richardson step over (ε, ε/2),
/// clamped to zero below [`RHP_CLAMP`].
pub fn rhp_rate(model: &ModelMap, t: f64, eps_step: f64) -> Result<f64> {
    check(eps_step > 0.0, "eps_step", "must be > 0")?;
    let d1 = rate(&model.two_time(t, t + eps_step)?, eps_step)?;
    let d2 = rate(&model.two_time(t, t + 0.5 * eps_step)?, 0.5 * eps_step)?;
    let d = 2.0 * d2 - d1;
    Ok(if d < RHP_CLAMP { 0.0 } else { d })
}

/// Left-sided d(t), built from Φ_{t−ε}^t. Needs t ≥ ε.
pub fn rhp_rate_backward(model: &ModelMap, t: f64, eps_step: f64) -> Result<f64> {
    check(eps_step > 0.0 && t >= eps_step, "eps_step", "must lie in (0, t]")?;
    let d1 = rate(&model.two_time(t - eps_step, t)?, eps_step)?;
    let d2 = rate(&model.two_time(t - 0.5 * eps_step, t)?, 0.5 * eps_step)?;
    let d = 2.0 * d2 - d1;
    Ok(if d < RHP_CLAMP { 0.0 } else { d })
}

/// RHP measure: trapezoidal integral of d(t) over the grid. Contributing
/// intervals are the maximal runs of grid cells with a positive endpoint.
/// The last grid point uses the left-sided rate, so the map is never needed
/// beyond the grid.
pub fn rhp_divisibility(model: &ModelMap, grid: GridSpec, eps_step: f64) -> Result<MeasureResult> {
    let times = grid.times();
    let last = times.len() - 1;
    let d = times
        .iter()
        .enumerate()
        .map(|(k, &t)| {
            if k == last && k > 0 {
                rhp_rate_backward(model, t, eps_step)
            } else {
                rhp_rate(model, t, eps_step)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let mut value = 0.0;
    let mut intervals: Vec<(f64, f64)> = Vec::new();
    for k in 0..d.len() - 1 {
        if d[k] > 0.0 || d[k + 1] > 0.0 {
            let h = times[k + 1] - times[k];
            value += 0.5 * h * (d[k] + d[k + 1]);
            match intervals.last_mut() {
                Some(last) if last.1 == times[k] => last.1 = times[k + 1],
                _ => intervals.push((times[k], times[k + 1])),
            }
        }
    }
    Ok(MeasureResult {
        value,
        contributing_intervals: intervals,
        grid,
    })
}
