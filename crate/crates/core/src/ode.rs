//! Dormand–Prince 5(4) integrator for complex linear and nonlinear systems.

use crate::error::{check, Error, Result};
use crate::qalg::C64;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OdeSpec {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub initial_step: f64,
    pub min_step: f64,
}

impl Default for OdeSpec {
    fn default() -> Self {
        OdeSpec {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            initial_step: 1e-3,
            min_step: 1e-14,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct OdeSolution {
    pub y: Vec<C64>,
    pub steps: usize,
    pub rejected: usize,
}

const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
// fifth-order minus embedded fourth-order weights
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// Integrates y' = f(t, y) from `t0` to `t1` (t1 ≥ t0).
///
/// `f(t, y, dy)` writes the derivative into `dy`.
pub fn dopri45(mut f: impl FnMut(f64, &[C64], &mut [C64]), t0: f64, y0: &[C64], t1: f64, spec: &OdeSpec) -> Result<OdeSolution> {
    check(t1 >= t0, "t1", "must not precede t0")?;
    let n = y0.len();
    let mut y = y0.to_vec();
    if t1 == t0 || n == 0 {
        return Ok(OdeSolution { y, steps: 0, rejected: 0 });
    }
    let mut k: Vec<Vec<C64>> = vec![vec![C64::new(0.0, 0.0); n]; 7];
    let mut tmp = vec![C64::new(0.0, 0.0); n];
    let mut t = t0;
    let mut h = spec.initial_step.min(t1 - t0);
    let (mut steps, mut rejected) = (0, 0);
    f(t, &y, &mut k[0]);
    while t < t1 {
        if t + h > t1 {
            h = t1 - t;
        }
        for s in 1..7 {
            for i in 0..n {
                let mut acc = y[i];
                for (j, kj) in k.iter().enumerate().take(s) {
                    if A[s][j] != 0.0 {
                        acc += kj[i] * (h * A[s][j]);
                    }
                }
                tmp[i] = acc;
            }
            f(t + C[s] * h, &tmp, &mut k[s]);
        }
        // tmp holds the fifth-order solution, identical to the stage-7 input
        let mut err: f64 = 0.0;
        for i in 0..n {
            let mut e = C64::new(0.0, 0.0);
            for (s, ks) in k.iter().enumerate() {
                if E[s] != 0.0 {
                    e += ks[i] * E[s];
                }
            }
            let scale = spec.abs_tol + spec.rel_tol * y[i].norm().max(tmp[i].norm());
            err = err.max((e * h).norm() / scale);
        }
        if !err.is_finite() {
            return Err(Error::StepUnderflow { t });
        }
        if err <= 1.0 {
            t = if h == t1 - t { t1 } else { t + h };
            y.copy_from_slice(&tmp);
            // first-same-as-last
            k.swap(0, 6);
            steps += 1;
        } else {
            rejected += 1;
        }
        let factor = if err == 0.0 { 5.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 5.0) };
        h *= factor;
        if h < spec.min_step && t < t1 {
            return Err(Error::StepUnderflow { t });
        }
    }
    Ok(OdeSolution { y, steps, rejected })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotating_decay() {
        let l = C64::new(-0.3, 2.0);
        let sol = dopri45(|_, y, dy| dy[0] = l * y[0], 0.0, &[C64::new(1.0, 0.0)], 4.0, &OdeSpec::default()).unwrap();
        assert!((sol.y[0] - (l * 4.0).exp()).norm() < 1e-9);
    }

    #[test]
    fn time_dependent_rate() {
        // y' = 2t y, y = e^{t²}
        let sol = dopri45(|t, y, dy| dy[0] = y[0] * (2.0 * t), 0.0, &[C64::new(1.0, 0.0)], 1.5, &OdeSpec::default()).unwrap();
        assert!((sol.y[0].re - 2.25f64.exp()).abs() < 1e-8 * 2.25f64.exp());
    }

    #[test]
    fn rabi_oscillation_conserves_norm() {
        let w = 1.3;
        let sol = dopri45(
            |_, y, dy| {
                dy[0] = C64::new(0.0, -w) * y[1];
                dy[1] = C64::new(0.0, -w) * y[0];
            },
            0.0,
            &[C64::new(1.0, 0.0), C64::new(0.0, 0.0)],
            10.0,
            &OdeSpec {
                rel_tol: 1e-12,
                abs_tol: 1e-14,
                ..OdeSpec::default()
            },
        )
        .unwrap();
        assert!((sol.y[0].re - (w * 10.0).cos()).abs() < 1e-10);
        assert!((sol.y[0].norm_sqr() + sol.y[1].norm_sqr() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn empty_interval() {
        let sol = dopri45(|_, _, _| unreachable!(), 1.0, &[C64::new(2.0, 0.0)], 1.0, &OdeSpec::default()).unwrap();
        assert_eq!(sol.steps, 0);
    }
}
