use std::f64::consts::PI;

use super::{GridSpec, MeasureResult};
use crate::error::Result;
use crate::models::ModelMap;
use crate::qalg::{trace_distance, MapFactors, Operator2, C64};

const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// Φ₀ᵗ sampled on a uniform grid.
struct Sampled<'a> {
    model: &'a ModelMap,
    times: Vec<f64>,
    factors: Vec<[C64; 4]>,
}

impl<'a> Sampled<'a> {
    fn new(model: &'a ModelMap, grid: &GridSpec) -> Result<Self> {
        let times = grid.times();
        let factors = times.iter().map(|&t| model.factors(t)).collect::<Result<Vec<_>>>()?;
        Ok(Sampled { model, times, factors })
    }

    fn distance_with(&self, f: [C64; 4], pair: (&Operator2, &Operator2)) -> Result<f64> {
        let m = MapFactors::new(self.model.basis(), f);
        trace_distance(&m.apply(pair.0), &m.apply(pair.1))
    }

    fn distance_at(&self, t: f64, pair: (&Operator2, &Operator2)) -> Result<f64> {
        self.distance_with(self.model.factors(t)?, pair)
    }

    /// Golden-section search for the extremum of D on [a, b]; `sign` = +1 maximizes.
    fn refine(&self, a: f64, b: f64, sign: f64, pair: (&Operator2, &Operator2)) -> Result<(f64, f64)> {
        let (mut a, mut b) = (a, b);
        let mut c = b - GOLDEN * (b - a);
        let mut d = a + GOLDEN * (b - a);
        let mut fc = sign * self.distance_at(c, pair)?;
        let mut fd = sign * self.distance_at(d, pair)?;
        while b - a > 1e-10 * (1.0 + b.abs()) {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - GOLDEN * (b - a);
                fc = sign * self.distance_at(c, pair)?;
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + GOLDEN * (b - a);
                fd = sign * self.distance_at(d, pair)?;
            }
        }
        Ok(if fc > fd { (c, sign * fc) } else { (d, sign * fd) })
    }

    fn measure(&self, pair: (&Operator2, &Operator2), grid: GridSpec) -> Result<MeasureResult> {
        let d = self
            .factors
            .iter()
            .map(|f| self.distance_with(*f, pair))
            .collect::<Result<Vec<_>>>()?;
        let n = d.len() - 1;
        let mut intervals = Vec::new();
        let mut value = 0.0;
        let mut k = 0;
        while k < n {
            if d[k + 1] <= d[k] {
                k += 1;
                continue;
            }
            let i = k;
            while k < n && d[k + 1] > d[k] {
                k += 1;
            }
            let j = k;
            let (mut t_lo, mut d_lo) = (self.times[i], d[i]);
            if i > 0 {
                let (t, v) = self.refine(self.times[i - 1], self.times[i + 1], -1.0, pair)?;
                if v < d_lo {
                    (t_lo, d_lo) = (t, v);
                }
            }
            let (mut t_hi, mut d_hi) = (self.times[j], d[j]);
            if j < n {
                let (t, v) = self.refine(self.times[j - 1], self.times[j + 1], 1.0, pair)?;
                if v > d_hi {
                    (t_hi, d_hi) = (t, v);
                }
            }
            value += d_hi - d_lo;
            intervals.push((t_lo, t_hi));
        }
        Ok(MeasureResult {
            value,
            contributing_intervals: intervals,
            grid,
        })
    }
}

/// BLP measure for one initial pair: the total rise of D(Φ₀ᵗρ₁, Φ₀ᵗρ₂)
/// over [0, t_max], with each turning point refined between grid nodes.
pub fn blp_measure(model: &ModelMap, pair: (&Operator2, &Operator2), grid: GridSpec) -> Result<MeasureResult> {
    Sampled::new(model, &grid)?.measure(pair, grid)
}

/// The antipodal pure pairs searched by [`blp_max`]: |±⟩ first, then a
/// 12×12 grid in (θ, φ).
pub fn antipodal_pairs() -> Vec<(Operator2, Operator2)> {
    let mut out = vec![(Operator2::from_bloch(1.0, 0.0, 0.0), Operator2::from_bloch(-1.0, 0.0, 0.0))];
    for i in 0..12 {
        let theta = PI * (i as f64 + 0.5) / 12.0;
        for j in 0..12 {
            let phi = 2.0 * PI * j as f64 / 12.0;
            let n = [theta.sin() * phi.cos(), theta.sin() * phi.sin(), theta.cos()];
            out.push((Operator2::from_bloch(n[0], n[1], n[2]), Operator2::from_bloch(-n[0], -n[1], -n[2])));
        }
    }
    out
}

/// Largest BLP measure over [`antipodal_pairs`], with the maximizing pair.
/// Ties keep the earlier pair.
pub fn blp_max(model: &ModelMap, grid: GridSpec) -> Result<(MeasureResult, (Operator2, Operator2))> {
    let s = Sampled::new(model, &grid)?;
    let mut best: Option<(MeasureResult, (Operator2, Operator2))> = None;
    for (a, b) in antipodal_pairs() {
        let r = s.measure((&a, &b), grid)?;
        if best.as_ref().map_or(true, |(m, _)| r.value > m.value) {
            best = Some((r, (a, b)));
        }
    }
    Ok(best.expect("pair list is nonempty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{EngineeredDephasing, ThermalDephasing};
    use crate::spectral::{EngineeredDistribution, OhmicBath};

    fn pm() -> (Operator2, Operator2) {
        antipodal_pairs()[0]
    }

    fn engineered(g: f64) -> ModelMap {
        ModelMap::Engineered(EngineeredDephasing::new(EngineeredDistribution::with_defaults(g)))
    }

    #[test]
    fn thermal_has_no_backflow() {
        let m = ModelMap::Thermal(ThermalDephasing::new(OhmicBath::new(1.0, 1.0, 10.0).unwrap()));
        let (a, b) = pm();
        let r = blp_measure(&m, (&a, &b), GridSpec::new(10.0, 0.05).unwrap()).unwrap();
        assert!(r.value.abs() <= 1e-10);
    }

    #[test]
    fn single_peak_has_no_backflow() {
        let (a, b) = pm();
        let r = blp_measure(&engineered(0.5), (&a, &b), GridSpec::new(5.0 * PI, 0.01).unwrap()).unwrap();
        assert!(r.value <= 1e-8);
        assert!(r.contributing_intervals.is_empty());
    }

    #[test]
    fn double_peak_rises_match_closed_form() {
        let d = EngineeredDistribution::with_defaults(0.0);
        let (a, b) = pm();
        let t_max = PI / (2.0 * d.sigma * d.delta_n);
        let r = blp_measure(&engineered(0.0), (&a, &b), GridSpec::new(t_max, 0.01).unwrap()).unwrap();
        // |g| = e^{−σ²t²/2}|cos δt|: zeros at (k+½)π/δ, maxima where tan δt = −σ²t/δ
        let delta = d.half_separation();
        let dg = |t: f64| -d.sigma * d.sigma * t * (delta * t).cos() - delta * (delta * t).sin();
        let mut want = 0.0;
        let mut k = 0;
        loop {
            let zero = (k as f64 + 0.5) * PI / delta;
            if zero >= t_max {
                break;
            }
            let (mut lo, mut hi) = (zero, (k as f64 + 1.0) * PI / delta);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if dg(lo) * dg(mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            want += d.g(lo.min(t_max)).norm();
            k += 1;
        }
        assert_eq!(r.contributing_intervals.len(), 2);
        assert!((r.value - want).abs() < 1e-9, "{} vs {want}", r.value);
    }

    #[test]
    fn grid_convergence() {
        let (a, b) = pm();
        let m = engineered(0.1);
        let g = GridSpec::new(15.0, 0.02).unwrap();
        let coarse = blp_measure(&m, (&a, &b), g).unwrap().value;
        let fine = blp_measure(&m, (&a, &b), GridSpec::new(15.0, 0.01).unwrap()).unwrap().value;
        assert!(coarse > 0.0 && (coarse - fine).abs() < 1e-6);
    }

    #[test]
    fn equatorial_pair_is_optimal_for_dephasing() {
        let m = engineered(1.0);
        let grid = GridSpec::new(15.0, 0.02).unwrap();
        let (best, _) = blp_max(&m, grid).unwrap();
        let (a, b) = pm();
        let eq = blp_measure(&m, (&a, &b), grid).unwrap();
        assert!((best.value - eq.value).abs() < 1e-12);
    }
}
