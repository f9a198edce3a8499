//! Adaptive Gauss–Kronrod quadrature and a few fixed reference rules.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::qalg::C64;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Tolerances and limits for [`integrate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Split the interval at multiples of this period before refining.
    pub oscillation_period_hint: Option<f64>,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec {
            abs_tol: 1e-10,
            rel_tol: 1e-9,
            max_subdivisions: 1 << 14,
            oscillation_period_hint: None,
        }
    }
}

impl QuadratureSpec {
    pub fn with_period(mut self, period: f64) -> Self {
        self.oscillation_period_hint = Some(period);
        self
    }

    pub fn with_tolerances(mut self, abs_tol: f64, rel_tol: f64) -> Self {
        self.abs_tol = abs_tol;
        self.rel_tol = rel_tol;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature {
    pub value: C64,
    pub error: f64,
    pub subdivisions: usize,
}

#[derive(Clone, Copy)]
struct Segment {
    a: f64,
    b: f64,
    value: C64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gk21(f: &impl Fn(f64) -> C64, a: f64, b: f64) -> Segment {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kron = fc * WGK[10];
    let mut gauss = C64::new(0.0, 0.0);
    let mut fv = [C64::new(0.0, 0.0); 21];
    fv[20] = fc;
    for j in 0..10 {
        let x = h * XGK[j];
        let f1 = f(c - x);
        let f2 = f(c + x);
        fv[2 * j] = f1;
        fv[2 * j + 1] = f2;
        kron += (f1 + f2) * WGK[j];
        if j % 2 == 1 {
            gauss += (f1 + f2) * WG[j / 2];
        }
    }
    let mean = kron * 0.5;
    let mut resasc = WGK[10] * (fc - mean).norm();
    for j in 0..10 {
        resasc += WGK[j] * ((fv[2 * j] - mean).norm() + (fv[2 * j + 1] - mean).norm());
    }
    let resasc = resasc * h.abs();
    let mut err = ((kron - gauss) * h).norm();
    if resasc != 0.0 && err != 0.0 {
        err = resasc * (200.0 * err / resasc).powf(1.5).min(1.0);
    }
    Segment {
        a,
        b,
        value: kron * h,
        error: err,
    }
}

/// Adaptive 21-point Gauss–Kronrod integration of a complex integrand on [a, b].
///
/// ```
/// use qregress::spectral::{integrate, QuadratureSpec};
/// let q = integrate(|x: f64| x.sin().into(), 0.0, std::f64::consts::PI, &QuadratureSpec::default()).unwrap();
/// assert!((q.value.re - 2.0).abs() < 1e-12);
/// ```
pub fn integrate(f: impl Fn(f64) -> C64, a: f64, b: f64, spec: &QuadratureSpec) -> Result<Quadrature> {
    if a == b {
        return Ok(Quadrature {
            value: C64::new(0.0, 0.0),
            error: 0.0,
            subdivisions: 0,
        });
    }
    let pieces = match spec.oscillation_period_hint {
        Some(p) if p > 0.0 && p.is_finite() => {
            (((b - a).abs() / p).ceil() as usize).clamp(1, spec.max_subdivisions / 2)
        }
        _ => 1,
    };
    let mut heap = BinaryHeap::with_capacity(pieces * 2);
    let width = (b - a) / pieces as f64;
    for k in 0..pieces {
        let lo = a + width * k as f64;
        let hi = if k + 1 == pieces { b } else { a + width * (k + 1) as f64 };
        heap.push(gk21(&f, lo, hi));
    }
    let mut count = pieces;
    let (mut value, mut error) = totals(&heap);
    loop {
        if error <= spec.abs_tol.max(spec.rel_tol * value.norm()) {
            let (value, error) = totals(&heap);
            return Ok(Quadrature {
                value,
                error,
                subdivisions: count,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if count >= spec.max_subdivisions || mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            heap.push(worst);
            let (value, error) = totals(&heap);
            return Err(Error::Quadrature {
                value: value.norm(),
                error,
                subdivisions: count,
            });
        }
        let left = gk21(&f, worst.a, mid);
        let right = gk21(&f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        count += 1;
        if count % 256 == 0 {
            (value, error) = totals(&heap);
        }
    }
}

fn totals(heap: &BinaryHeap<Segment>) -> (C64, f64) {
    // summed in interval order so the result does not depend on heap layout
    let mut segs: Vec<&Segment> = heap.iter().collect();
    segs.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut v = C64::new(0.0, 0.0);
    let mut e = 0.0;
    for s in segs {
        v += s.value;
        e += s.error;
    }
    (v, e)
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real(f: impl Fn(f64) -> f64, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    Ok(integrate(|x| C64::new(f(x), 0.0), a, b, spec)?.value.re)
}

/// ∫ₐ^∞ f for a non-oscillatory integrand decaying at least like x⁻²,
/// using x = a + (1 − s)/s.
pub fn integrate_to_infinity(f: impl Fn(f64) -> f64, a: f64, spec: &QuadratureSpec) -> Result<f64> {
    let g = |s: f64| {
        let x = a + (1.0 - s) / s;
        C64::new(f(x) / (s * s), 0.0)
    };
    let spec = QuadratureSpec {
        oscillation_period_hint: None,
        ..*spec
    };
    Ok(integrate(g, 0.0, 1.0, &spec)?.value.re)
}

/// Trigonometric kernels for [`fourier_semi_infinite`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kernel {
    Cos,
    Sin,
    OneMinusCos,
}

/// ∫₀^∞ A(ω)·K(ωt) dω for a smooth amplitude decaying at least like ω⁻².
///
/// `scale` is the frequency beyond which A is in its asymptotic tail. The
/// integral is split at W = max(200·scale, 1000/t); the head is integrated
/// period by period, the non-oscillatory part of the tail by substitution and
/// the oscillatory part of the tail by two integration-by-parts terms.
pub fn fourier_semi_infinite(
    amp: impl Fn(f64) -> f64,
    t: f64,
    kernel: Kernel,
    scale: f64,
    spec: &QuadratureSpec,
) -> Result<f64> {
    if t == 0.0 {
        return match kernel {
            Kernel::Cos => integrate_to_infinity(amp, 0.0, spec),
            Kernel::Sin | Kernel::OneMinusCos => Ok(0.0),
        };
    }
    let t = t.abs();
    let w = (200.0 * scale).max(1000.0 / t);
    let head_spec = spec.with_period(2.0 * PI / t);
    let head = match kernel {
        Kernel::Cos => integrate_real(|x| amp(x) * (x * t).cos(), 0.0, w, &head_spec)?,
        Kernel::Sin => integrate_real(|x| amp(x) * (x * t).sin(), 0.0, w, &head_spec)?,
        Kernel::OneMinusCos => integrate_real(
            |x| {
                let s = (0.5 * x * t).sin();
                amp(x) * 2.0 * s * s
            },
            0.0,
            w,
            &head_spec,
        )?,
    };
    let a0 = amp(w);
    let dw = w * 1e-4;
    let a1 = (amp(w + dw) - amp(w - dw)) / (2.0 * dw);
    let (sn, cs) = (w * t).sin_cos();
    let cos_tail = -a0 * sn / t - a1 * cs / (t * t);
    let sin_tail = a0 * cs / t - a1 * sn / (t * t);
    let tail = match kernel {
        Kernel::Cos => cos_tail,
        Kernel::Sin => sin_tail,
        Kernel::OneMinusCos => integrate_to_infinity(&amp, w, spec)? - cos_tail,
    };
    Ok(head + tail)
}

/// Gauss–Legendre nodes and weights on [−1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// Composite Gauss–Legendre rule with `panels` equal panels of `order` nodes.
pub fn gauss_legendre_panels(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize, order: usize) -> f64 {
    let (x, w) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let c = a + h * (p as f64 + 0.5);
        let s: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * f(c + 0.5 * h * xi)).sum();
        total += 0.5 * h * s;
    }
    total
}

/// Adaptive Simpson rule with Richardson correction.
pub fn simpson_adaptive(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let c = 0.5 * (a + b);
    let (fa, fb, fc) = (f(a), f(b), f(c));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fc + fb);
    simpson_step(f, a, b, fa, fb, fc, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(f: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fb: f64, fc: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let c = 0.5 * (a + b);
    let (d, e) = (0.5 * (a + c), 0.5 * (c + b));
    let (fd, fe) = (f(d), f(e));
    let left = (c - a) / 6.0 * (fa + 4.0 * fd + fc);
    let right = (b - c) / 6.0 * (fc + 4.0 * fe + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, c, fa, fc, fd, left, 0.5 * tol, depth - 1)
        + simpson_step(f, c, b, fc, fb, fe, right, 0.5 * tol, depth - 1)
}
