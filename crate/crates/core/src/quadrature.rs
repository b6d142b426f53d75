//! Adaptive Gauss–Kronrod (10/21 point) integration and fixed
//! Gauss–Legendre rules.

use std::collections::BinaryHeap;
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// Values a quadrature rule can accumulate.
pub trait QuadValue: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<f64, Output = Self> {
    fn zero() -> Self;
    fn magnitude(self) -> f64;
}

impl QuadValue for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(self) -> f64 {
        self.abs()
    }
}

impl QuadValue for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(self) -> f64 {
        self.norm()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig { abs_tol: 1e-13, rel_tol: 1e-11, max_intervals: 2000 }
    }
}

impl QuadConfig {
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        QuadConfig { abs_tol, rel_tol, ..Default::default() }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Estimate<V> {
    pub value: V,
    pub error: f64,
    pub evaluations: usize,
}

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

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_208_031_846_581,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// Gauss weights for the odd-indexed Kronrod nodes XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

fn gk21<V: QuadValue, F: FnMut(f64) -> V>(f: &mut F, a: f64, b: f64) -> (V, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = fc * WGK[10];
    let mut gauss = V::zero();
    for i in 0..10 {
        let dx = half * XGK[i];
        let pair = f(center - dx) + f(center + dx);
        kronrod = kronrod + pair * WGK[i];
        if i % 2 == 1 {
            gauss = gauss + pair * WG[i / 2];
        }
    }
    let value = kronrod * half;
    let err = (kronrod - gauss).magnitude() * half.abs();
    (value, err)
}

struct Interval<V> {
    a: f64,
    b: f64,
    value: V,
    error: f64,
}

impl<V> PartialEq for Interval<V> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<V> Eq for Interval<V> {}
impl<V> PartialOrd for Interval<V> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl<V> Ord for Interval<V> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Globally adaptive bisection driven by the largest local error estimate.
pub fn integrate<V, F>(mut f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<Estimate<V>>
where
    V: QuadValue,
    F: FnMut(f64) -> V,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::InvalidArgument("integration limits must be finite".into()));
    }
    if a == b {
        return Ok(Estimate { value: V::zero(), error: 0.0, evaluations: 0 });
    }
    let (v0, e0) = gk21(&mut f, a, b);
    let mut evaluations = 21;
    let mut heap = BinaryHeap::new();
    heap.push(Interval { a, b, value: v0, error: e0 });
    let mut total = v0;
    let mut total_err = e0;
    loop {
        let tol = cfg.abs_tol.max(cfg.rel_tol * total.magnitude());
        if total_err <= tol {
            break;
        }
        if heap.len() >= cfg.max_intervals {
            return Err(Error::Quadrature(format!(
                "error estimate {total_err:.3e} above tolerance {tol:.3e} after {} intervals",
                heap.len()
            )));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a.min(worst.b) || mid >= worst.a.max(worst.b) {
            // Interval cannot be split further in floating point.
            heap.push(worst);
            return Err(Error::Quadrature("interval collapsed below machine resolution".into()));
        }
        let (vl, el) = gk21(&mut f, worst.a, mid);
        let (vr, er) = gk21(&mut f, mid, worst.b);
        evaluations += 42;
        total = total - worst.value + vl + vr;
        total_err = total_err - worst.error + el + er;
        heap.push(Interval { a: worst.a, b: mid, value: vl, error: el });
        heap.push(Interval { a: mid, b: worst.b, value: vr, error: er });
    }
    // Re-sum to shed drift from incremental updates.
    let mut value = V::zero();
    let mut error = 0.0;
    for iv in heap.iter() {
        value = value + iv.value;
        error += iv.error;
    }
    Ok(Estimate { value, error, evaluations })
}

/// ∫_a^∞ f(x) dx through x = a + t/(1-t).
pub fn integrate_to_infinity<V, F>(mut f: F, a: f64, cfg: &QuadConfig) -> Result<Estimate<V>>
where
    V: QuadValue,
    F: FnMut(f64) -> V,
{
    integrate(
        |t: f64| {
            let s = 1.0 - t;
            f(a + t / s) * (1.0 / (s * s))
        },
        0.0,
        1.0,
        cfg,
    )
}

/// ∫_{-∞}^{∞} f(x) dx as two half-lines split at `split`.
pub fn integrate_real_line<V, F>(mut f: F, split: f64, cfg: &QuadConfig) -> Result<Estimate<V>>
where
    V: QuadValue,
    F: FnMut(f64) -> V,
{
    let right = integrate_to_infinity(&mut f, split, cfg)?;
    let left = integrate_to_infinity(|x| f(2.0 * split - x), split, cfg)?;
    Ok(Estimate {
        value: right.value + left.value,
        error: right.error + left.error,
        evaluations: right.evaluations + left.evaluations,
    })
}

/// Nested adaptive integration over the rectangle [x0,x1]×[y0,y1].
pub fn integrate_2d<V, F>(mut f: F, x: (f64, f64), y: (f64, f64), cfg: &QuadConfig) -> Result<Estimate<V>>
where
    V: QuadValue,
    F: FnMut(f64, f64) -> V,
{
    let inner_cfg = QuadConfig { abs_tol: cfg.abs_tol / (y.1 - y.0).abs().max(1.0), ..*cfg };
    let mut failure = None;
    let mut evaluations = 0;
    let outer = integrate(
        |yy| match integrate(|xx| f(xx, yy), x.0, x.1, &inner_cfg) {
            Ok(e) => {
                evaluations += e.evaluations;
                e.value
            }
            Err(err) => {
                failure.get_or_insert(err);
                V::zero()
            }
        },
        y.0,
        y.1,
        cfg,
    )?;
    if let Some(err) = failure {
        return Err(err);
    }
    Ok(Estimate { value: outer.value, error: outer.error, evaluations })
}

/// Fixed n-point Gauss–Legendre rule on [-1, 1].
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("Gauss–Legendre rule needs n >= 1".into()));
        }
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Ok(GaussLegendre { nodes, weights })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn integrate<V: QuadValue, F: FnMut(f64) -> V>(&self, mut f: F, a: f64, b: f64) -> V {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut acc = V::zero();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(c + h * x) * *w;
        }
        acc * h
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}
