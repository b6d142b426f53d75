//! Determinantal kernels of the complex ensembles: complex Ginibre, complex
//! elliptic and truncated unitary, with their correlation functions and the
//! large-N limit formulas.
//!
//! Every finite-N kernel has the form K(z1, z2) = √(w(z1) w(z2)) Σ_{n<N}
//! p_n(z1) conj(p_n(z2)) / h_n. The sums run in log-scaled arithmetic so
//! that N of a few hundred does not overflow.

use std::f64::consts::PI;

use faer::Mat;
use num_complex::Complex64;

use crate::ensembles::{EnsembleSpec, SymmetryClass, Variant};
use crate::error::{invalid, Error, Result};
use crate::linalg::hermitian_det;
use crate::quadrature::{integrate, QuadConfig};
use crate::scaled::Scaled;
use crate::specfun::{erfc, hermite_q_sequence, regularized_incomplete_beta, regularized_upper_gamma};

/// Below this τ the elliptic kernel is evaluated as the Ginibre kernel.
const ELLIPTIC_TAU_FLOOR: f64 = 1e-8;
/// Switch to the plain binomial sum when z1 z2* is this close to 1.
const TRUNCATION_DIRECT_RADIUS: f64 = 1e-3;
const MAX_POINTS: usize = 8;

fn limit_quad() -> QuadConfig {
    QuadConfig::with_tol(1e-15, 1e-12)
}

/// Evaluation context for one complex-class determinantal kernel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DetKernel {
    spec: EnsembleSpec,
    degree: usize,
}

impl DetKernel {
    pub fn ginibre(n: usize) -> Result<Self> {
        Self::from_spec(&EnsembleSpec::circular(SymmetryClass::Complex, n)?)
    }

    pub fn elliptic(n: usize, tau: f64) -> Result<Self> {
        Self::from_spec(&EnsembleSpec::elliptic(SymmetryClass::Complex, n, tau)?)
    }

    pub fn truncated_unitary(m: usize, l: usize) -> Result<Self> {
        Self::from_spec(&EnsembleSpec::truncated_unitary(m, l)?)
    }

    pub fn from_spec(spec: &EnsembleSpec) -> Result<Self> {
        if spec.class() != SymmetryClass::Complex {
            return Err(invalid(format!("determinantal kernels need the complex class, got {}", spec.class().name())));
        }
        Ok(DetKernel { spec: *spec, degree: spec.dim() })
    }

    pub fn spec(&self) -> &EnsembleSpec {
        &self.spec
    }

    /// Number of polynomial terms in the kernel sum.
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Natural log of the weight; `-inf` where the weight vanishes.
    fn ln_weight(&self, z: Complex64) -> f64 {
        match self.spec.variant() {
            Variant::Circular => -z.norm_sqr(),
            Variant::Elliptic { tau } => {
                let s = 1.0 - tau * tau;
                -(PI * s.sqrt()).ln() + (-z.norm_sqr() + tau * (z * z).re) / s
            }
            Variant::TruncatedUnitary { l, .. } => {
                let r2 = z.norm_sqr();
                if r2 >= 1.0 {
                    f64::NEG_INFINITY
                } else {
                    (l as f64 - 1.0) * (-r2).ln_1p()
                }
            }
        }
    }

    pub fn weight(&self, z: Complex64) -> f64 {
        self.ln_weight(z).exp()
    }

    /// K(z1, z2); Hermitian in its arguments.
    pub fn kernel(&self, z1: Complex64, z2: Complex64) -> Result<Complex64> {
        let value = match self.spec.variant() {
            Variant::Circular => ginibre_kernel(self.degree, z1, z2),
            Variant::Elliptic { tau } if tau < ELLIPTIC_TAU_FLOOR => ginibre_kernel(self.degree, z1, z2),
            Variant::Elliptic { tau } => elliptic_kernel(self.degree, tau, z1, z2),
            Variant::TruncatedUnitary { m, l } => truncation_kernel(m, l, z1, z2, false)?,
        };
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::Overflow(format!("kernel at ({z1}, {z2}) left the double range")));
        }
        Ok(value)
    }

    /// R_1(z) = K(z, z).
    pub fn density(&self, z: Complex64) -> Result<f64> {
        match self.spec.variant() {
            Variant::Circular => Ok(regularized_upper_gamma(self.degree as u32, z.norm_sqr())? / PI),
            Variant::TruncatedUnitary { m, l } => {
                if z.norm_sqr() >= 1.0 {
                    Ok(0.0)
                } else {
                    truncation_strong_density(m, l, z)
                }
            }
            Variant::Elliptic { .. } => Ok(self.kernel(z, z)?.re.max(0.0)),
        }
    }

    /// R_n(z_1, …, z_n) = det[K(z_i, z_j)].
    pub fn correlation(&self, points: &[Complex64]) -> Result<f64> {
        check_point_count(points.len(), MAX_POINTS)?;
        if points.len() == 1 {
            return self.density(points[0]);
        }
        let n = points.len();
        let mut m = Mat::<Complex64>::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(self.kernel(points[i], points[i])?.re, 0.0);
            for j in i + 1..n {
                let k = self.kernel(points[i], points[j])?;
                m[(i, j)] = k;
                m[(j, i)] = k.conj();
            }
        }
        hermitian_det(&m)
    }

    /// Binomial-sum form of the truncated-unitary kernel, kept as an
    /// independent evaluation path.
    pub fn kernel_binomial_sum(&self, z1: Complex64, z2: Complex64) -> Result<Complex64> {
        match self.spec.variant() {
            Variant::TruncatedUnitary { m, l } => truncation_kernel(m, l, z1, z2, true),
            _ => Err(invalid("kernel_binomial_sum applies to truncated unitary kernels only")),
        }
    }
}

fn check_point_count(n: usize, max: usize) -> Result<()> {
    if n == 0 || n > max {
        return Err(invalid(format!("correlation needs between 1 and {max} points, got {n}")));
    }
    Ok(())
}

fn ginibre_kernel(n: usize, z1: Complex64, z2: Complex64) -> Complex64 {
    let x = z1 * z2.conj();
    let mut term = Scaled::new(Complex64::new(1.0, 0.0));
    let mut sum = term;
    for k in 1..n {
        term = term.scale(x / k as f64);
        sum = sum.add(term);
    }
    sum.to_complex_with(-0.5 * (z1.norm_sqr() + z2.norm_sqr()) - PI.ln())
}

fn elliptic_kernel(n: usize, tau: f64, z1: Complex64, z2: Complex64) -> Complex64 {
    let q1 = hermite_q_sequence(n, tau, z1);
    let q2 = hermite_q_sequence(n, tau, z2);
    let mut sum = Scaled::zero();
    for (a, b) in q1.iter().zip(&q2) {
        sum = sum.add(a.mul(Scaled { mantissa: b.mantissa.conj(), log_scale: b.log_scale }));
    }
    let s = 1.0 - tau * tau;
    let ln_w = |z: Complex64| -(PI * s.sqrt()).ln() + (-z.norm_sqr() + tau * (z * z).re) / s;
    sum.to_complex_with(0.5 * (ln_w(z1) + ln_w(z2)))
}

/// Σ_{m<M} C(L+m, m) x^m in log-scaled form.
fn truncation_series(m: usize, l: usize, x: Complex64) -> Scaled {
    let mut term = Scaled::new(Complex64::new(1.0, 0.0));
    let mut sum = term;
    for k in 0..m.saturating_sub(1) {
        term = term.scale(x * ((l + k + 1) as f64 / (k + 1) as f64));
        sum = sum.add(term);
    }
    sum
}

fn truncation_kernel(m: usize, l: usize, z1: Complex64, z2: Complex64, force_direct: bool) -> Result<Complex64> {
    let (r1, r2) = (z1.norm_sqr(), z2.norm_sqr());
    if r1 >= 1.0 || r2 >= 1.0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    let ln_prefactor = (l as f64 / PI).ln() + 0.5 * (l as f64 - 1.0) * ((-r1).ln_1p() + (-r2).ln_1p());
    let x = z1 * z2.conj();
    let one_minus = Complex64::new(1.0, 0.0) - x;
    if force_direct || one_minus.norm() < TRUNCATION_DIRECT_RADIUS {
        return Ok(truncation_series(m, l, x).to_complex_with(ln_prefactor));
    }
    // Σ_{m<M} C(L+m, m) x^m = (1 − I_x(M, L+1)) / (1 − x)^{L+1}
    let complement = crate::specfun::incomplete_beta_complement_complex(x, m as u32, l as u32 + 1)?;
    if complement == Complex64::new(0.0, 0.0) {
        return Ok(complement);
    }
    let log_value = complement.ln() - one_minus.ln() * (l as f64 + 1.0) + ln_prefactor;
    Ok(log_value.exp())
}

/// Bulk limit of the Ginibre correlations at the origin,
/// (1/πⁿ) e^{−Σ|z_j|²} det[e^{z_i z_j*}].
pub fn ginibre_bulk_limit_correlation(points: &[Complex64]) -> Result<f64> {
    check_point_count(points.len(), MAX_POINTS)?;
    let n = points.len();
    // Fold e^{-(|z_i|²+|z_j|²)/2} into each entry to keep the determinant well scaled.
    let m = Mat::from_fn(n, n, |i, j| {
        let (a, b) = (points[i], points[j]);
        (a * b.conj() - 0.5 * (a.norm_sqr() + b.norm_sqr())).exp() / PI
    });
    hermitian_det(&m)
}

/// Edge profile of the Ginibre density, (1/2π) erfc(√2 x), where x is the
/// signed distance past radius √N.
pub fn ginibre_edge_profile(x: f64) -> f64 {
    erfc(std::f64::consts::SQRT_2 * x) / (2.0 * PI)
}

/// Exact truncated-unitary density (L/π)(1 − I_{|z|²}(M, L+1))/(1 − |z|²)².
pub fn truncation_strong_density(m: usize, l: usize, z: Complex64) -> Result<f64> {
    if m == 0 || l == 0 {
        return Err(invalid("truncation density needs M, L >= 1"));
    }
    let r2 = z.norm_sqr();
    if r2 >= 1.0 {
        return Err(invalid(format!("truncation density needs |z| < 1, got {}", r2.sqrt())));
    }
    let complement = 1.0 - regularized_incomplete_beta(r2, m as u32, l as u32 + 1)?;
    Ok(l as f64 / PI * complement / ((1.0 - r2) * (1.0 - r2)))
}

fn ln_weak_truncation_prefactor(l: usize, y: f64) -> f64 {
    (l as f64 - 1.0) * (2.0 * y).ln() - crate::specfun::ln_factorial(l as u64 - 1) - PI.ln()
}

fn check_weak_truncation(l: usize, y: f64) -> Result<()> {
    if l == 0 || !(y > 0.0) || !y.is_finite() {
        return Err(invalid(format!("weak truncation limit needs L >= 1 and y > 0, got L = {l}, y = {y}")));
    }
    Ok(())
}

/// Density in the weak non-unitarity limit with the M² factor removed:
/// (1/π)((2y)^{L−1}/(L−1)!) ∫₀¹ e^{−2yt} t^L dt.
pub fn truncation_weak_density(l: usize, y: f64) -> Result<f64> {
    check_weak_truncation(l, y)?;
    let integral = integrate(|t: f64| (-2.0 * y * t).exp() * t.powi(l as i32), 0.0, 1.0, &limit_quad())?.value;
    Ok(ln_weak_truncation_prefactor(l, y).exp() * integral)
}

/// Correlations in the weak non-unitarity limit; each point is (y_j, φ_j).
pub fn truncation_weak_correlation(l: usize, points: &[(f64, f64)]) -> Result<f64> {
    check_point_count(points.len(), 6)?;
    for &(y, phi) in points {
        check_weak_truncation(l, y)?;
        if !phi.is_finite() {
            return Err(invalid("weak truncation angle must be finite"));
        }
    }
    let n = points.len();
    let mut m = Mat::<Complex64>::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let c = Complex64::new(points[i].0 + points[j].0, points[i].1 - points[j].1);
            let v = integrate(|t: f64| (-c * t).exp() * t.powi(l as i32), 0.0, 1.0, &limit_quad())?.value;
            let v = if i == j { Complex64::new(v.re, 0.0) } else { v };
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
        }
    }
    let ln_pref: f64 = points.iter().map(|&(y, _)| ln_weak_truncation_prefactor(l, y)).sum();
    Ok(hermitian_det(&m)? * ln_pref.exp())
}

/// Wigner semicircle ρ_sc(x) = (1/π)√(N − x²/4).
pub fn semicircle_density(n: usize, x: f64) -> Result<f64> {
    let edge = 2.0 * (n as f64).sqrt();
    if n == 0 || !(x.abs() <= edge) {
        return Err(invalid(format!("semicircle needs |x| <= 2√N = {edge}, got {x}")));
    }
    Ok((n as f64 - x * x / 4.0).max(0.0).sqrt() / PI)
}

/// Weak non-Hermiticity setting: control parameter `a`, reference point `x`
/// on the real axis and matrix size `n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WeakLimitContext {
    a: f64,
    x: f64,
    n: usize,
}

impl WeakLimitContext {
    pub fn new(a: f64, x: f64, n: usize) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(invalid(format!("control parameter a must be positive, got {a}")));
        }
        if n == 0 || !(x.abs() < 2.0 * (n as f64).sqrt()) {
            return Err(invalid(format!("reference point must satisfy |x| < 2√N, got x = {x}, N = {n}")));
        }
        Ok(WeakLimitContext { a, x, n })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Mean eigenvalue density ρ_sc(x) of the Hermitian limit.
    pub fn local_density(&self) -> f64 {
        (self.n as f64 - self.x * self.x / 4.0).sqrt() / PI
    }

    /// α in 1 − τ = α²/N, from a = α ρ_sc(x)/√N.
    pub fn alpha(&self) -> f64 {
        self.a * (self.n as f64).sqrt() / self.local_density()
    }

    /// The finite-N asymmetry parameter τ = 1 − α²/N this context describes.
    pub fn tau(&self) -> f64 {
        1.0 - self.alpha().powi(2) / self.n as f64
    }

    /// Density of the projected finite-τ spectrum at x,
    /// √(4Nσ² − x²)/(2πσ²) with σ² = (1 + τ)/2. It tends to ρ_sc(x) as
    /// τ → 1 and removes the O(1/N) drift of the unfolded correlations.
    pub fn unfolding_density(&self) -> f64 {
        let var = (1.0 + self.tau()) / 2.0;
        (4.0 * self.n as f64 * var - self.x * self.x).max(0.0).sqrt() / (2.0 * PI * var)
    }

    /// Unfolded coordinate ζ = (z − x) ρ_τ(x).
    pub fn unfold(&self, z: Complex64) -> Complex64 {
        (z - self.x) * self.unfolding_density()
    }

    /// Inverse of [`WeakLimitContext::unfold`].
    pub fn fold(&self, zeta: Complex64) -> Complex64 {
        zeta / self.unfolding_density() + self.x
    }
}

/// Unfolded n-point correlation at weak non-Hermiticity,
/// (1/(√π a))ⁿ e^{−Σ(Im ζ_j)²/a²} det[∫₀¹ e^{−π²a²u²} cos(πu(ζ_i − ζ_j*)) du].
pub fn weak_correlation(ctx: &WeakLimitContext, zetas: &[Complex64]) -> Result<f64> {
    check_point_count(zetas.len(), 6)?;
    let a = ctx.a;
    let n = zetas.len();
    let mut m = Mat::<Complex64>::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let d = zetas[i] - zetas[j].conj();
            let v = integrate(|u: f64| (d * (PI * u)).cos() * (-(PI * a * u).powi(2)).exp(), 0.0, 1.0, &limit_quad())?
                .value;
            let v = if i == j { Complex64::new(v.re, 0.0) } else { v };
            m[(i, j)] = v;
            m[(j, i)] = v.conj();
        }
    }
    let ln_pref: f64 = zetas.iter().map(|z| -(PI.sqrt() * a).ln() - (z.im / a).powi(2)).sum();
    Ok(hermitian_det(&m)? * ln_pref.exp())
}

/// Unfolded density at weak non-Hermiticity,
/// (1/(√π a)) e^{−y²/a²} ∫₀¹ e^{−π²a²u²} cosh(2πuy) du with y = Im ζ.
pub fn weak_density(ctx: &WeakLimitContext, zeta: Complex64) -> Result<f64> {
    let (a, y) = (ctx.a, zeta.im.abs());
    // e^{-y²/a²} cosh(2πuy) folded into two exponentials to avoid overflow
    let integral = integrate(
        |u: f64| {
            let base = -(PI * a * u).powi(2) - (y / a).powi(2);
            0.5 * ((base + 2.0 * PI * u * y).exp() + (base - 2.0 * PI * u * y).exp())
        },
        0.0,
        1.0,
        &limit_quad(),
    )?
    .value;
    Ok(integral / (PI.sqrt() * a))
}

/// Mehler's closed form (1−τ²)^{−1/2} exp{z1 z2*/(1−τ²) − τ(z1² + z2*²)/(2(1−τ²))},
/// the N → ∞ value of Σ_n p_n(z1) conj(p_n(z2)) / n!.
pub fn mehler_closed_form(tau: f64, z1: Complex64, z2: Complex64) -> Result<Complex64> {
    if !(0.0..1.0).contains(&tau) {
        return Err(invalid(format!("Mehler's formula needs 0 <= tau < 1, got {tau}")));
    }
    let s = 1.0 - tau * tau;
    let w = z2.conj();
    Ok((z1 * w / s - tau * (z1 * z1 + w * w) / (2.0 * s)).exp() / s.sqrt())
}
