//! Pfaffian point processes of the real and quaternion-real Ginibre
//! ensembles and their elliptic deformations.
//!
//! Kernels are built from skew-orthogonal polynomials written in terms of
//! the monic scaled Hermite polynomials p_n, which satisfy
//! p_{n+1} = z p_n − nτ p_{n−1}. For evaluation every polynomial is carried
//! in the normalized form q_n = p_n/√(n!) with a separate log scale.

use std::f64::consts::{PI, SQRT_2};
use std::ops::{Add, Div, Mul, Neg, Sub};

use faer::linalg::solvers::DenseSolveCore;
use faer::Mat;
use num_complex::Complex64;

use crate::ensembles::{EnsembleSpec, SymmetryClass, Variant};
use crate::error::{invalid, Error, Result};
use crate::quadrature::{integrate, integrate_2d, integrate_to_infinity, QuadConfig};
use crate::scaled::Scaled;
use crate::specfun::{
    erf_complex, hermite_q_sequence, ln_erfc, ln_factorial, ln_gamma, ln_gamma_star, regularized_upper_gamma,
    SpecFunConfig,
};

const MAX_UPPER_POINTS: usize = 4;

fn limit_quad() -> QuadConfig {
    QuadConfig::with_tol(1e-15, 1e-12)
}

// ---------------------------------------------------------------------------
// Pfaffian

/// Scalars the Pfaffian routine works over.
pub trait PfaffianScalar:
    Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Div<Output = Self> + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn modulus(self) -> f64;
}

impl PfaffianScalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn modulus(self) -> f64 {
        self.abs()
    }
}

impl PfaffianScalar for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn modulus(self) -> f64 {
        self.norm()
    }
}

/// Pfaffian of an even-dimensional antisymmetric matrix by skew-symmetric
/// Gaussian elimination with partial pivoting.
pub fn pfaffian<T: PfaffianScalar>(a: &Mat<T>) -> Result<T> {
    let n = a.nrows();
    if a.ncols() != n {
        return Err(invalid("pfaffian needs a square matrix"));
    }
    if n % 2 == 1 {
        return Err(invalid(format!("pfaffian needs even dimension, got {n}")));
    }
    let mut m: Vec<T> = (0..n * n).map(|k| a[(k / n, k % n)]).collect();
    let idx = |i: usize, j: usize| i * n + j;
    let (mut norm, mut asym) = (0.0f64, 0.0f64);
    for i in 0..n {
        for j in 0..n {
            norm = norm.max(m[idx(i, j)].modulus());
            asym = asym.max((m[idx(i, j)] + m[idx(j, i)]).modulus());
        }
    }
    if asym > 1e-12 * norm {
        return Err(invalid(format!("matrix is not antisymmetric: |A + Aᵀ| = {asym:e}")));
    }
    let mut pf = T::one();
    for k in (0..n).step_by(2) {
        let pivot = (k + 1..n)
            .max_by(|&x, &y| m[idx(x, k)].modulus().total_cmp(&m[idx(y, k)].modulus()))
            .expect("k + 1 < n for even n");
        if pivot != k + 1 {
            for c in 0..n {
                m.swap(idx(k + 1, c), idx(pivot, c));
            }
            for r in 0..n {
                m.swap(idx(r, k + 1), idx(r, pivot));
            }
            pf = -pf;
        }
        let head = m[idx(k, k + 1)];
        if head.modulus() == 0.0 {
            return Ok(T::zero());
        }
        pf = pf * head;
        // C' = C − (b cᵀ − c bᵀ)/a with b, c the rows k and k+1
        for i in k + 2..n {
            let bi = m[idx(k, i)];
            let ci = m[idx(k + 1, i)];
            for j in k + 2..n {
                let update = (bi * m[idx(k + 1, j)] - ci * m[idx(k, j)]) / head;
                m[idx(i, j)] = m[idx(i, j)] - update;
            }
        }
    }
    Ok(pf)
}

// ---------------------------------------------------------------------------
// Weights

fn check_pfaff_class(class: SymmetryClass) -> Result<()> {
    if class == SymmetryClass::Complex {
        return Err(invalid("Pfaffian kernels need the real or quaternion class"));
    }
    Ok(())
}

fn check_tau(tau: f64) -> Result<()> {
    if !(tau > -1.0 && tau < 1.0) {
        return Err(invalid(format!("tau must lie in (-1, 1), got {tau}")));
    }
    Ok(())
}

/// ln f_τ(z)²; `-inf` where the weight vanishes.
fn ln_f_squared(class: SymmetryClass, tau: f64, z: Complex64) -> f64 {
    let s = 1.0 - tau * tau;
    match class {
        SymmetryClass::Real => ln_erfc(SQRT_2 * z.im.abs() / s.sqrt()) - (z * z).re / (1.0 + tau),
        _ => (2.0 * z.im.abs() / s.sqrt()).ln() + (-z.norm_sqr() + tau * (z * z).re) / s,
    }
}

/// The weight f_τ(z) ≥ 0 of the jpdf; pass τ = 0 for the circular ensembles.
pub fn f_weight(class: SymmetryClass, tau: f64, z: Complex64) -> Result<f64> {
    check_pfaff_class(class)?;
    check_tau(tau)?;
    Ok((0.5 * ln_f_squared(class, tau, z)).exp())
}

// ---------------------------------------------------------------------------
// Skew-orthogonal basis

/// Skew-orthogonal monic polynomials P_k, k < N, and their norms r_k.
#[derive(Clone, Debug, PartialEq)]
pub struct SkewBasis {
    class: SymmetryClass,
    tau: f64,
    n: usize,
    ln_norms: Vec<f64>,
}

impl SkewBasis {
    pub fn new(class: SymmetryClass, tau: f64, n: usize) -> Result<Self> {
        check_pfaff_class(class)?;
        check_tau(tau)?;
        if n == 0 || n % 2 == 1 {
            return Err(invalid(format!("skew-orthogonal basis needs even N >= 2, got {n}")));
        }
        let ln_norms = (0..n)
            .map(|k| {
                let m = (k / 2) as u64;
                match class {
                    SymmetryClass::Real => (2.0 * (2.0 * PI).sqrt()).ln() + ln_factorial(2 * m) + (1.0 + tau).ln(),
                    _ => (2.0 * PI).ln() + ln_factorial(2 * m + 1) + (1.0 - tau).ln(),
                }
            })
            .collect();
        Ok(SkewBasis { class, tau, n, ln_norms })
    }

    pub fn class(&self) -> SymmetryClass {
        self.class
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// r_k; r_{2m} = r_{2m+1}.
    pub fn norm(&self, k: usize) -> f64 {
        self.ln_norms[k].exp()
    }

    pub fn ln_norm(&self, k: usize) -> f64 {
        self.ln_norms[k]
    }

    fn check_index(&self, k: usize) -> Result<()> {
        if k >= self.n {
            return Err(invalid(format!("polynomial index {k} out of range for N = {}", self.n)));
        }
        Ok(())
    }

    /// Coefficients of z^0..z^k in the monic P_k.
    pub fn coefficients(&self, k: usize) -> Result<Vec<f64>> {
        self.check_index(k)?;
        let mut p: Vec<Vec<f64>> = vec![vec![1.0]];
        for j in 1..=k {
            let mut next = vec![0.0; j + 1];
            for (i, c) in p[j - 1].iter().enumerate() {
                next[i + 1] += c;
            }
            if j >= 2 {
                for (i, c) in p[j - 2].iter().enumerate() {
                    next[i] -= (j - 1) as f64 * self.tau * c;
                }
            }
            p.push(next);
        }
        let out = match (self.class, k % 2) {
            (SymmetryClass::Real, 1) if k >= 3 => {
                let mut c = p[k].clone();
                for (i, v) in p[k - 2].iter().enumerate() {
                    c[i] -= (k - 1) as f64 * v;
                }
                c
            }
            (SymmetryClass::Quaternion, 0) => {
                // P_{2n} = Σ_{l≤n} (2ⁿ n!/(2ˡ l!)) p_{2l}
                let half = k / 2;
                let mut c = vec![0.0; k + 1];
                for l in 0..=half {
                    let w = ((half - l) as f64 * 2f64.ln() + ln_factorial(half as u64) - ln_factorial(l as u64)).exp();
                    for (i, v) in p[2 * l].iter().enumerate() {
                        c[i] += w * v;
                    }
                }
                c
            }
            _ => p[k].clone(),
        };
        if out.iter().any(|c| !c.is_finite()) {
            return Err(Error::Overflow(format!("coefficients of P_{k} exceed the double range")));
        }
        Ok(out)
    }

    /// P_k(z) evaluated through the p_n recurrence.
    pub fn eval(&self, k: usize, z: Complex64) -> Result<Complex64> {
        self.check_index(k)?;
        let mut p = vec![Complex64::new(1.0, 0.0), z];
        for j in 1..k {
            let next = z * p[j] - p[j - 1] * (j as f64 * self.tau);
            p.push(next);
        }
        Ok(match (self.class, k % 2) {
            (SymmetryClass::Real, 1) if k >= 3 => p[k] - p[k - 2] * (k - 1) as f64,
            (SymmetryClass::Quaternion, 0) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for l in 0..=k / 2 {
                    acc = acc * (2.0 * l as f64) + p[2 * l];
                }
                acc
            }
            _ => p[k],
        })
    }

    fn ln_prefactor(&self) -> f64 {
        match self.class {
            SymmetryClass::Real => -(2.0 * (2.0 * PI).sqrt() * (1.0 + self.tau)).ln(),
            _ => -(2.0 * PI * (1.0 - self.tau)).ln(),
        }
    }

    fn sequence(&self, z: Complex64) -> Vec<Scaled> {
        hermite_q_sequence(self.n, self.tau, z)
    }

    /// Σ_m [P_{2m+1}(z1)P_{2m}(z2) − P_{2m}(z1)P_{2m+1}(z2)]/r_{2m} without
    /// the common prefactor, from the normalized sequences at z1 and z2.
    fn kernel_sum(&self, q1: &[Scaled], q2: &[Scaled]) -> Scaled {
        let mut sum = Scaled::zero();
        match self.class {
            SymmetryClass::Real => {
                // (√(2m+1) q_{2m+1} − √(2m) q_{2m−1}) at z1 times q_{2m} at z2, antisymmetrized
                for m in 0..self.n / 2 {
                    let odd = |q: &[Scaled]| {
                        let lead = q[2 * m + 1].scale(Complex64::new(((2 * m + 1) as f64).sqrt(), 0.0));
                        if m == 0 {
                            lead
                        } else {
                            lead.sub(q[2 * m - 1].scale(Complex64::new(((2 * m) as f64).sqrt(), 0.0)))
                        }
                    };
                    let term = odd(q1).mul(q2[2 * m]).sub(q1[2 * m].mul(odd(q2)));
                    sum = sum.add(term);
                }
            }
            _ => {
                // R_m = q_{2m} + √(2m/(2m−1)) R_{m−1}; term (q_{2m+1} ⊗ R_m − R_m ⊗ q_{2m+1})/√(2m+1)
                let mut r1 = Scaled::zero();
                let mut r2 = Scaled::zero();
                for m in 0..self.n / 2 {
                    let carry = if m == 0 { 0.0 } else { ((2 * m) as f64 / (2 * m - 1) as f64).sqrt() };
                    r1 = q1[2 * m].add(r1.scale(Complex64::new(carry, 0.0)));
                    r2 = q2[2 * m].add(r2.scale(Complex64::new(carry, 0.0)));
                    let term = q1[2 * m + 1].mul(r2).sub(r1.mul(q2[2 * m + 1]));
                    sum = sum.add(term.scale(Complex64::new(1.0 / ((2 * m + 1) as f64).sqrt(), 0.0)));
                }
            }
        }
        sum
    }
}

// ---------------------------------------------------------------------------
// Finite-N kernel

/// Evaluation context for 𝒦_N(z1, z2) with its weight.
#[derive(Clone, Debug, PartialEq)]
pub struct PfaffKernel {
    basis: SkewBasis,
}

impl PfaffKernel {
    pub fn new(class: SymmetryClass, tau: f64, n: usize) -> Result<Self> {
        Ok(PfaffKernel { basis: SkewBasis::new(class, tau, n)? })
    }

    pub fn from_spec(spec: &EnsembleSpec) -> Result<Self> {
        let tau = match spec.variant() {
            Variant::Circular => 0.0,
            Variant::Elliptic { tau } => tau,
            Variant::TruncatedUnitary { .. } => return Err(invalid("no Pfaffian kernel for truncated unitary")),
        };
        Self::new(spec.class(), tau, spec.dim())
    }

    pub fn basis(&self) -> &SkewBasis {
        &self.basis
    }

    pub fn class(&self) -> SymmetryClass {
        self.basis.class
    }

    pub fn tau(&self) -> f64 {
        self.basis.tau
    }

    pub fn n(&self) -> usize {
        self.basis.n
    }

    /// f(z) for this kernel's class and τ.
    pub fn weight(&self, z: Complex64) -> f64 {
        (0.5 * self.ln_weight_sq(z)).exp()
    }

    fn ln_weight_sq(&self, z: Complex64) -> f64 {
        ln_f_squared(self.basis.class, self.basis.tau, z)
    }

    fn scaled_kernel(&self, z1: Complex64, z2: Complex64) -> Scaled {
        self.basis.kernel_sum(&self.basis.sequence(z1), &self.basis.sequence(z2))
    }

    /// 𝒦_N(z1, z2) times exp(extra_log).
    fn kernel_times(&self, z1: Complex64, z2: Complex64, extra_log: f64) -> Result<Complex64> {
        let v = self.scaled_kernel(z1, z2).to_complex_with(extra_log + self.basis.ln_prefactor());
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::Overflow(format!("Pfaffian kernel at ({z1}, {z2}) left the double range")));
        }
        Ok(v)
    }

    /// 𝒦_N(z1, z2); antisymmetric in its arguments.
    pub fn kernel(&self, z1: Complex64, z2: Complex64) -> Result<Complex64> {
        self.kernel_times(z1, z2, 0.0)
    }

    /// Density of complex eigenvalues R^C(z) = 2 f(z) f(z*) |𝒦_N(z, z*)|.
    pub fn density_complex(&self, z: Complex64) -> Result<f64> {
        if !(z.im > 0.0) {
            return Err(invalid(format!("density_complex needs Im z > 0, got {z}")));
        }
        let ln_w = self.ln_weight_sq(z);
        if ln_w == f64::NEG_INFINITY {
            return Ok(0.0);
        }
        let k = self.scaled_kernel(z, z.conj());
        if k.mantissa.norm() == 0.0 {
            return Ok(0.0);
        }
        Ok((2f64.ln() + ln_w + k.log_magnitude() + self.basis.ln_prefactor()).exp())
    }

    /// Density of real eigenvalues R^R(x) = f(x) ∫ f(t) sgn(t − x) 𝒦_N(t, x) dt;
    /// zero for the quaternion class.
    pub fn density_real(&self, x: f64) -> Result<f64> {
        if self.basis.class == SymmetryClass::Quaternion {
            return Ok(0.0);
        }
        if !x.is_finite() {
            return Err(invalid("density_real needs finite x"));
        }
        let zx = Complex64::new(x, 0.0);
        let qx = self.basis.sequence(zx);
        let ln_fx = 0.5 * self.ln_weight_sq(zx);
        let pref = self.basis.ln_prefactor();
        let integrand = |t: f64| {
            let zt = Complex64::new(t, 0.0);
            let k = self.basis.kernel_sum(&self.basis.sequence(zt), &qx);
            k.to_complex_with(ln_fx + 0.5 * self.ln_weight_sq(zt) + pref).re
        };
        let cfg = QuadConfig::with_tol(1e-14, 1e-10);
        let right = integrate_to_infinity(integrand, x, &cfg)?.value;
        let left = integrate_to_infinity(|s: f64| integrand(2.0 * x - s), x, &cfg)?.value;
        Ok(right - left)
    }

    /// R_n at points strictly inside the upper half-plane: the Pfaffian of the
    /// 2n×2n matrix of 2×2 blocks [[K_kl, G_kl], [−G_lk, W_kl]].
    pub fn correlations_upper(&self, points: &[Complex64]) -> Result<f64> {
        let n = points.len();
        if n == 0 || n > MAX_UPPER_POINTS {
            return Err(invalid(format!("correlations_upper needs 1 to {MAX_UPPER_POINTS} points, got {n}")));
        }
        if let Some(z) = points.iter().find(|z| !(z.im > 0.0)) {
            return Err(invalid(format!("point {z} is not in the upper half-plane")));
        }
        if n == 1 {
            return self.density_complex(points[0]);
        }
        // Rows and columns of point k are scaled by f(z_k); the Pfaffian then
        // carries Π f(z_k)², the weight each point contributes.
        let ln_f: Vec<f64> = points.iter().map(|&z| 0.5 * self.ln_weight_sq(z)).collect();
        if ln_f.contains(&f64::NEG_INFINITY) {
            return Ok(0.0);
        }
        let mut q = Mat::<Complex64>::zeros(2 * n, 2 * n);
        let minus_two_i = Complex64::new(0.0, -2.0);
        for k in 0..n {
            for l in 0..n {
                let w = ln_f[k] + ln_f[l];
                let (zk, zl) = (points[k], points[l]);
                if l > k {
                    let kk = self.kernel_times(zk, zl, w)?;
                    q[(2 * k, 2 * l)] = kk;
                    q[(2 * l, 2 * k)] = -kk;
                    let ww = self.kernel_times(zk.conj(), zl.conj(), w)? * -4.0;
                    q[(2 * k + 1, 2 * l + 1)] = ww;
                    q[(2 * l + 1, 2 * k + 1)] = -ww;
                }
                let g = self.kernel_times(zk, zl.conj(), w)? * minus_two_i;
                q[(2 * k, 2 * l + 1)] = g;
                q[(2 * l + 1, 2 * k)] = -g;
            }
        }
        let pf = pfaffian(&q)?;
        let scale: f64 = (0..2 * n).map(|i| (0..2 * n).map(|j| q[(i, j)].norm()).fold(0.0, f64::max)).product();
        if pf.im.abs() > 1e-8 * scale.max(pf.norm()) {
            return Err(Error::Numerical(format!("correlation Pfaffian has imaginary part {:e}", pf.im)));
        }
        Ok(pf.re)
    }
}

// ---------------------------------------------------------------------------
// Circular real closed forms

fn check_even_dim(n: usize) -> Result<()> {
    if n < 2 || n % 2 == 1 {
        return Err(invalid(format!("N must be even and at least 2, got {n}")));
    }
    Ok(())
}

/// Circular real kernel (z1 − z2)/(2√(2π)) Σ_{n=0}^{N−2} (z1 z2)ⁿ/n!.
pub fn kernel_real_circular(n: usize, z1: Complex64, z2: Complex64) -> Result<Complex64> {
    if n < 2 {
        return Err(invalid("circular real kernel needs N >= 2"));
    }
    let x = z1 * z2;
    let mut term = Scaled::new(Complex64::new(1.0, 0.0));
    let mut sum = term;
    for k in 1..n - 1 {
        term = term.scale(x / k as f64);
        sum = sum.add(term);
    }
    Ok(sum.scale(z1 - z2).to_complex_with(-(2.0 * (2.0 * PI).sqrt()).ln()))
}

/// Circular real density of complex eigenvalues
/// (2|y|/√(2π)) e^{2y²} erfc(√2|y|) Q(N−1, |z|²).
pub fn density_complex_real_circular(n: usize, z: Complex64) -> Result<f64> {
    if n < 2 {
        return Err(invalid("circular real density needs N >= 2"));
    }
    let y = z.im.abs();
    if y == 0.0 {
        return Ok(0.0);
    }
    let q = regularized_upper_gamma(n as u32 - 1, z.norm_sqr())?;
    Ok((2.0 * y / (2.0 * PI).sqrt()).ln().exp() * (2.0 * y * y + ln_erfc(SQRT_2 * y)).exp() * q)
}

/// Circular real density of real eigenvalues,
/// Q(N−1, x²)/√(2π) + e^{−x²/2} |x|^{2N−2} γ*((N−1)/2, x²/2) / (2^{N−1/2} Γ(N/2)).
pub fn density_real_circular(n: usize, x: f64) -> Result<f64> {
    if n < 2 {
        return Err(invalid("circular real density needs N >= 2"));
    }
    if !x.is_finite() {
        return Err(invalid("density_real needs finite x"));
    }
    let nf = n as f64;
    let first = regularized_upper_gamma(n as u32 - 1, x * x)? / (2.0 * PI).sqrt();
    if x == 0.0 {
        return Ok(first);
    }
    let ln_second = -x * x / 2.0 + (2.0 * nf - 2.0) * x.abs().ln() + ln_gamma_star((nf - 1.0) / 2.0, x * x / 2.0)
        - (nf - 0.5) * 2f64.ln()
        - ln_gamma(nf / 2.0);
    Ok(first + ln_second.exp())
}

/// Mean number of real eigenvalues of an N×N real Ginibre matrix,
/// 1 + (√2/π) ∫₀¹ t^{1/2}(1 − t^{N−1}) / ((1 − t)^{3/2}(1 + t)) dt.
pub fn expected_real_count(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(invalid("expected_real_count needs N >= 1"));
    }
    if n == 1 {
        return Ok(1.0);
    }
    // t = 1 − s² removes the (1 − t)^{−1/2} endpoint singularity
    let integrand = |s: f64| {
        let t = 1.0 - s * s;
        let mut geometric = 0.0;
        let mut power = 1.0;
        for _ in 0..n - 1 {
            geometric += power;
            power *= t;
        }
        2.0 * t.sqrt() * geometric / (1.0 + t)
    };
    let integral = integrate(integrand, 0.0, 1.0, &QuadConfig::with_tol(1e-14, 1e-13))?.value;
    Ok(1.0 + SQRT_2 / PI * integral)
}

// ---------------------------------------------------------------------------
// Skew moments and normalization

/// The moment matrix A_kl = ∫∫ 𝓕(z1, z2) z1^{k−1} z2^{l−1} and its inverse.
#[derive(Clone, Debug)]
pub struct SkewMoments {
    a: Mat<f64>,
    inverse: Mat<f64>,
}

impl SkewMoments {
    pub fn matrix(&self) -> &Mat<f64> {
        &self.a
    }

    pub fn inverse(&self) -> &Mat<f64> {
        &self.inverse
    }

    /// 𝒦_N(z1, z2) = Σ_kl A⁻¹_kl z1^{k−1} z2^{l−1}.
    pub fn kernel(&self, z1: Complex64, z2: Complex64) -> Complex64 {
        let n = self.a.nrows();
        let mut sum = Complex64::new(0.0, 0.0);
        let mut p1 = Complex64::new(1.0, 0.0);
        for k in 0..n {
            let mut p2 = Complex64::new(1.0, 0.0);
            for l in 0..n {
                sum += p1 * p2 * self.inverse[(k, l)];
                p2 *= z2;
            }
            p1 *= z1;
        }
        sum
    }
}

/// a_k = 2^{k/2} Γ(k/2), as a log.
fn ln_a(k: usize) -> f64 {
    k as f64 / 2.0 * 2f64.ln() + ln_gamma(k as f64 / 2.0)
}

/// ε⁻¹ in 1-based indices: +1 at (k odd, l even) with k < l, antisymmetric.
fn eps_inverse(k: usize, l: usize) -> f64 {
    if k < l && k % 2 == 1 && l % 2 == 0 {
        1.0
    } else if l < k && l % 2 == 1 && k % 2 == 0 {
        -1.0
    } else {
        0.0
    }
}

/// ε = tridiag(1, 0, −1): 1 below the diagonal, −1 above.
fn eps(k: usize, l: usize) -> f64 {
    if k == l + 1 {
        1.0
    } else if l == k + 1 {
        -1.0
    } else {
        0.0
    }
}

/// Moment matrix of the skew form. At τ = 0 the closed forms are used;
/// otherwise the monomial moments are integrated numerically (N ≤ 10).
pub fn skew_moment_matrix(class: SymmetryClass, tau: f64, n: usize) -> Result<SkewMoments> {
    check_pfaff_class(class)?;
    check_tau(tau)?;
    check_even_dim(n)?;
    if tau == 0.0 {
        let (a, inverse) = match class {
            SymmetryClass::Real => (
                Mat::from_fn(n, n, |i, j| eps_inverse(i + 1, j + 1) * (ln_a(i + 1) + ln_a(j + 1)).exp()),
                Mat::from_fn(n, n, |i, j| eps(i + 1, j + 1) * (-ln_a(i + 1) - ln_a(j + 1)).exp()),
            ),
            _ => (
                Mat::from_fn(n, n, |i, j| -(PI / 2.0).sqrt() * eps(i + 1, j + 1) * (ln_a(i + 2) + ln_a(j + 2)).exp()),
                Mat::from_fn(n, n, |i, j| {
                    -(2.0 / PI).sqrt() * eps_inverse(i + 1, j + 1) * (-ln_a(i + 2) - ln_a(j + 2)).exp()
                }),
            ),
        };
        if a.col_iter().flat_map(|c| c.iter().copied().collect::<Vec<_>>()).any(|v: f64| !v.is_finite()) {
            return Err(Error::Overflow(format!("moment matrix for N = {n} exceeds the double range")));
        }
        return Ok(SkewMoments { a, inverse });
    }
    if n > 10 {
        return Err(invalid("numeric skew moments are limited to N <= 10"));
    }
    let extent = (n as f64).sqrt() * (1.0 + tau.abs()) + 8.0;
    let cfg = QuadConfig::with_tol(1e-11, 1e-10);
    let mut a = Mat::<f64>::zeros(n, n);
    for k in 0..n {
        for l in k + 1..n {
            let v = skew_form(class, tau, extent, |z| z.powu(k as u32), |z| z.powu(l as u32), &cfg)?;
            a[(k, l)] = v;
            a[(l, k)] = -v;
        }
    }
    let inverse = a.full_piv_lu().inverse();
    Ok(SkewMoments { a, inverse })
}

/// ⟨p, q⟩ = ∫∫ 𝓕(z1, z2) p(z1) q(z2) for polynomials with real
/// coefficients, integrated over the box |x|, |y| ≤ extent.
///
/// The paired part reduces to −4 ∫_{y>0} f² Im(p conj q) d²z, the real part
/// to ∫∫ f(x1) f(x2) sgn(x2 − x1) p(x1) q(x2).
pub fn skew_form<P, Q>(class: SymmetryClass, tau: f64, extent: f64, p: P, q: Q, cfg: &QuadConfig) -> Result<f64>
where
    P: Fn(Complex64) -> Complex64,
    Q: Fn(Complex64) -> Complex64,
{
    check_pfaff_class(class)?;
    check_tau(tau)?;
    let c = |x: f64, y: f64| Complex64::new(x, y);
    let paired = integrate_2d(
        |x, y| {
            let z = c(x, y);
            let w = ln_f_squared(class, tau, z).exp();
            if w == 0.0 {
                0.0
            } else {
                -4.0 * w * (p(z) * q(z).conj()).im
            }
        },
        (-extent, extent),
        (0.0, extent),
        cfg,
    )?
    .value;
    if class == SymmetryClass::Quaternion {
        return Ok(paired);
    }
    let f = |x: f64| (0.5 * ln_f_squared(class, tau, c(x, 0.0))).exp();
    let inner_cfg = QuadConfig { abs_tol: cfg.abs_tol / (2.0 * extent), ..*cfg };
    let total_p = integrate(|x| f(x) * p(c(x, 0.0)).re, -extent, extent, &inner_cfg)?.value;
    let mut failure = None;
    // ∫ dx2 f q(x2) [∫_{x1<x2} f p − ∫_{x1>x2} f p] = ∫ dx2 f q (2F(x2) − F_total)
    let real = integrate(
        |x2| {
            let below = match integrate(|x| f(x) * p(c(x, 0.0)).re, -extent, x2, &inner_cfg) {
                Ok(e) => e.value,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            };
            f(x2) * q(c(x2, 0.0)).re * (2.0 * below - total_p)
        },
        -extent,
        extent,
        cfg,
    )?
    .value;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(paired + real)
}

/// ln(1/C_{N,τ}) = Σ_{m<N/2} ln r_{2m}.
pub fn ln_normalization(class: SymmetryClass, tau: f64, n: usize) -> Result<f64> {
    check_even_dim(n)?;
    let basis = SkewBasis::new(class, tau, n)?;
    Ok((0..n / 2).map(|m| basis.ln_norm(2 * m)).sum())
}

// ---------------------------------------------------------------------------
// Large-N limits

/// Scaling regime for [`limit_kernel`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum LimitRegime {
    /// τ = 0, bulk of the circle.
    CircularBulk,
    /// Fixed τ, bulk of the ellipse.
    EllipticBulk { tau: f64 },
    /// τ = 1 − α²/N with N large and z of order 1/√N.
    Weak { n: usize, alpha: f64 },
}

/// Large-N forms of 𝒦_N.
pub fn limit_kernel(class: SymmetryClass, regime: LimitRegime, z1: Complex64, z2: Complex64) -> Result<Complex64> {
    check_pfaff_class(class)?;
    let real = class == SymmetryClass::Real;
    match regime {
        LimitRegime::CircularBulk if real => Ok((z1 - z2) * (z1 * z2).exp() / (2.0 * (2.0 * PI).sqrt())),
        LimitRegime::CircularBulk => {
            if z1 == z2 {
                return Err(invalid("circular qu-r bulk kernel has a pole at z1 = z2"));
            }
            Ok((z1 * z2).exp() / ((z2 - z1) * (2.0 * PI)))
        }
        LimitRegime::EllipticBulk { tau } => {
            check_tau(tau)?;
            let s = 1.0 - tau * tau;
            if real {
                let e = (z1 * z2 / s - (z1 * z1 + z2 * z2) * (tau / (2.0 * s))).exp();
                Ok((z1 - z2) * e / (2.0 * (2.0 * PI).sqrt() * s.powf(1.5)))
            } else {
                let e = ((z1 * z1 + z2 * z2) / (2.0 * (1.0 + tau))).exp();
                let arg = (z1 - z2) / (2.0 * s).sqrt();
                Ok(e * erf_complex(arg, &SpecFunConfig::default())? / (2.0 * (2.0 * PI).sqrt() * s))
            }
        }
        LimitRegime::Weak { n, alpha } => {
            if n == 0 || !(alpha > 0.0) {
                return Err(invalid("weak regime needs N >= 1 and alpha > 0"));
            }
            let sn = (n as f64).sqrt();
            let d = (z1 - z2) * sn;
            if real {
                let v =
                    integrate(|u: f64| (d * u).sin() * (u * (-(alpha * u).powi(2)).exp()), 0.0, 1.0, &limit_quad())?
                        .value;
                Ok(v * (n as f64 / (2.0 * PI)))
            } else {
                let v =
                    integrate(|u: f64| (d * u).sin() * ((-(alpha * u).powi(2)).exp() / u), 0.0, 1.0, &limit_quad())?
                        .value;
                Ok(v * (PI.powf(1.5) / (4.0 * alpha.powi(3))))
            }
        }
    }
}

/// e^b sinh(c) for c ≥ 0 without intermediate overflow.
fn exp_sinh(b: f64, c: f64) -> f64 {
    if c < 1.0 {
        b.exp() * c.sinh()
    } else {
        0.5 * ((b + c).exp() - (b - c).exp())
    }
}

/// Weak non-Hermiticity density P(y, a) in unfolded units, split into the
/// weight of δ(y) (real eigenvalues) and the smooth part.
pub fn weak_density_profile(class: SymmetryClass, y: f64, a: f64) -> Result<(f64, f64)> {
    check_pfaff_class(class)?;
    if !(a > 0.0) || !a.is_finite() {
        return Err(invalid(format!("control parameter a must be positive, got {a}")));
    }
    if !y.is_finite() {
        return Err(invalid("y must be finite"));
    }
    let gauss = |u: f64| -(PI * a * u).powi(2);
    let y = y.abs();
    match class {
        SymmetryClass::Real => {
            let singular = integrate(|u: f64| gauss(u).exp(), 0.0, 1.0, &limit_quad())?.value;
            let ln_e = ln_erfc(y / a);
            let smooth = PI
                * integrate(|u: f64| u * exp_sinh(gauss(u) + ln_e, 2.0 * PI * u * y), 0.0, 1.0, &limit_quad())?.value;
            Ok((singular, smooth))
        }
        _ => {
            if y == 0.0 {
                return Ok((0.0, 0.0));
            }
            let b = -(y / a).powi(2);
            let integral =
                integrate(|u: f64| exp_sinh(gauss(u) + b, 2.0 * PI * u * y) / u, 0.0, 1.0, &limit_quad())?.value;
            Ok((0.0, y / (PI.powf(1.5) * a.powi(3)) * integral))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn pfaffian_small_cases() {
        let a = Mat::from_fn(2, 2, |i, j| match (i, j) {
            (0, 1) => 3.5,
            (1, 0) => -3.5,
            _ => 0.0,
        });
        assert_eq!(pfaffian(&a).unwrap(), 3.5);
        let up = [[0.0, 1.0, 2.0, 3.0], [0.0, 0.0, 4.0, 5.0], [0.0, 0.0, 0.0, 6.0]];
        let m = Mat::from_fn(4, 4, |i, j| {
            if i < j {
                up[i][j]
            } else if j < i {
                -up[j][i]
            } else {
                0.0
            }
        });
        let want = 1.0 * 6.0 - 2.0 * 5.0 + 3.0 * 4.0;
        assert!((pfaffian(&m).unwrap() - want).abs() < 1e-14);
        assert!(pfaffian(&Mat::<f64>::zeros(3, 3)).is_err());
        let bad = Mat::from_fn(2, 2, |i, j| if i == 0 && j == 1 { 1.0 } else { 0.0 });
        assert!(pfaffian(&bad).is_err());
    }

    #[test]
    fn pfaffian_squared_is_determinant() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for trial in 0..200 {
            let n = 2 * (1 + trial % 8);
            let mut m = Mat::<Complex64>::zeros(n, n);
            for i in 0..n {
                for j in i + 1..n {
                    let v = c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                    m[(i, j)] = v;
                    m[(j, i)] = -v;
                }
            }
            let pf = pfaffian(&m).unwrap();
            let det = m.as_ref().determinant();
            assert!(rel(pf * pf, det) < 1e-9, "n={n}");
        }
    }

    #[test]
    fn weights() {
        assert!((f_weight(SymmetryClass::Real, 0.0, c(1.3, 0.0)).unwrap() - (-1.3f64 * 1.3 / 2.0).exp()).abs() < 1e-15);
        assert_eq!(f_weight(SymmetryClass::Quaternion, 0.0, c(0.7, 0.0)).unwrap(), 0.0);
        // mpmath, 40 digits
        let fr = f_weight(SymmetryClass::Real, 0.5, c(1.0, 1.0)).unwrap();
        assert!((fr / 0.14464209393462896 - 1.0).abs() < 1e-14);
        let fq = f_weight(SymmetryClass::Quaternion, 0.5, c(1.0, 1.0)).unwrap();
        assert!((fq / 0.40058102435192158 - 1.0).abs() < 1e-14);
        assert_eq!(
            f_weight(SymmetryClass::Real, 0.5, c(0.3, 0.8)).unwrap(),
            f_weight(SymmetryClass::Real, 0.5, c(0.3, -0.8)).unwrap()
        );
        assert!(f_weight(SymmetryClass::Real, 1.0, c(0.0, 0.0)).is_err());
        assert!(f_weight(SymmetryClass::Complex, 0.0, c(0.0, 0.0)).is_err());
    }

    #[test]
    fn basis_polynomials() {
        let b = SkewBasis::new(SymmetryClass::Real, 0.0, 4).unwrap();
        for k in 0..4 {
            let coeffs = b.coefficients(k).unwrap();
            assert!(coeffs.iter().enumerate().all(|(j, &v)| v == if j == k { 1.0 } else { 0.0 }) || k == 3);
        }
        // P_3 = p_3 − 2 p_1 = z³ − 2z at τ = 0
        assert_eq!(b.coefficients(3).unwrap(), vec![0.0, -2.0, 0.0, 1.0]);
        let b = SkewBasis::new(SymmetryClass::Real, 0.5, 4).unwrap();
        assert_eq!(b.coefficients(2).unwrap(), vec![-0.5, 0.0, 1.0]);
        let q = SkewBasis::new(SymmetryClass::Quaternion, 0.5, 4).unwrap();
        assert_eq!(q.coefficients(2).unwrap(), vec![1.5, 0.0, 1.0]);
        let z = c(0.4, -1.1);
        for basis in [&b, &q] {
            for k in 0..4 {
                let coeffs = basis.coefficients(k).unwrap();
                let horner = coeffs.iter().rev().fold(c(0.0, 0.0), |acc, &v| acc * z + v);
                assert!((horner - basis.eval(k, z).unwrap()).norm() < 1e-13);
                assert_eq!(coeffs[k], 1.0);
            }
        }
        assert!(b.coefficients(4).is_err());
        assert!(SkewBasis::new(SymmetryClass::Real, 0.2, 5).is_err());
    }

    #[test]
    fn norms_and_normalization() {
        let b = SkewBasis::new(SymmetryClass::Real, 0.0, 4).unwrap();
        assert!((b.norm(0) - 2.0 * (2.0 * PI).sqrt()).abs() < 1e-14);
        assert!((b.norm(3) - 2.0 * 2.0 * (2.0 * PI).sqrt()).abs() < 1e-13);
        assert!(
            (ln_normalization(SymmetryClass::Real, 0.0, 2).unwrap() - (2.0 * (2.0 * PI).sqrt()).ln()).abs() < 1e-15
        );
        assert!((ln_normalization(SymmetryClass::Quaternion, 0.0, 2).unwrap() - (2.0 * PI).ln()).abs() < 1e-15);
        let want = 2.0 * (2.0 * (2.0 * PI).sqrt()).ln() + 2f64.ln();
        assert!((ln_normalization(SymmetryClass::Real, 0.0, 4).unwrap() - want).abs() < 1e-14);
        let shift = ln_normalization(SymmetryClass::Real, 0.3, 6).unwrap()
            - ln_normalization(SymmetryClass::Real, 0.0, 6).unwrap();
        assert!((shift - 3.0 * 1.3f64.ln()).abs() < 1e-14);
        assert!(ln_normalization(SymmetryClass::Real, 0.0, 3).is_err());
    }

    #[test]
    fn kernel_is_antisymmetric() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for (class, tau) in [(SymmetryClass::Real, 0.0), (SymmetryClass::Real, 0.6), (SymmetryClass::Quaternion, -0.4)]
        {
            let k = PfaffKernel::new(class, tau, 16).unwrap();
            for _ in 0..50 {
                let z1 = c(rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0));
                let z2 = c(rng.random_range(-4.0..4.0), rng.random_range(-4.0..4.0));
                assert_eq!(k.kernel(z1, z2).unwrap(), -k.kernel(z2, z1).unwrap());
            }
            assert_eq!(k.kernel(c(0.3, 0.2), c(0.3, 0.2)).unwrap(), c(0.0, 0.0));
        }
    }

    #[test]
    fn real_circular_two_paths() {
        let (z1, z2) = (c(1.0, 1.0), c(2.0, -1.0));
        let closed = kernel_real_circular(12, z1, z2).unwrap();
        // mpmath, 40 digits
        assert!(rel(closed, c(-8.9112236730620901, 0.96073322182387346)) < 1e-14);
        let basis = PfaffKernel::new(SymmetryClass::Real, 0.0, 12).unwrap().kernel(z1, z2).unwrap();
        assert!(rel(basis, closed) < 1e-10);
        let two = kernel_real_circular(2, z1, z2).unwrap();
        assert!(rel(two, (z1 - z2) / (2.0 * (2.0 * PI).sqrt())) < 1e-15);
    }

    #[test]
    fn moments_reconstruct_kernels() {
        let (z1, z2) = (c(0.4, 0.9), c(-1.1, 0.3));
        let real = skew_moment_matrix(SymmetryClass::Real, 0.0, 6).unwrap();
        assert!(rel(real.kernel(z1, z2), kernel_real_circular(6, z1, z2).unwrap()) < 1e-10);
        let qr = skew_moment_matrix(SymmetryClass::Quaternion, 0.0, 6).unwrap();
        assert!((qr.matrix()[(0, 1)] - 2.0 * PI).abs() < 1e-12);
        let k = PfaffKernel::new(SymmetryClass::Quaternion, 0.0, 6).unwrap();
        assert!(rel(qr.kernel(z1, z2), k.kernel(z1, z2).unwrap()) < 1e-10);
        for m in [&real, &qr] {
            let prod = m.matrix() * m.inverse();
            for i in 0..6 {
                for j in 0..6 {
                    assert!((prod[(i, j)] - if i == j { 1.0 } else { 0.0 }).abs() < 1e-10);
                }
            }
        }
        // ε ε⁻¹ = I at N = 8
        for i in 1..=8 {
            for j in 1..=8 {
                let s: f64 = (1..=8).map(|k| eps(i, k) * eps_inverse(k, j)).sum();
                assert_eq!(s, if i == j { 1.0 } else { 0.0 });
            }
        }
    }

    #[test]
    fn qr_density_against_mehta_sum() {
        // mpmath: Mehta's double sum at N = 6, z = 0.7 + 0.9i
        let k = PfaffKernel::new(SymmetryClass::Quaternion, 0.0, 6).unwrap();
        let d = k.density_complex(c(0.7, 0.9)).unwrap();
        assert!((d / 0.39962917320592256 - 1.0).abs() < 1e-12, "{d}");
    }

    #[test]
    fn complex_density_two_paths() {
        let k = PfaffKernel::new(SymmetryClass::Real, 0.0, 20).unwrap();
        let z = c(1.0, 0.5);
        let closed = density_complex_real_circular(20, z).unwrap();
        assert!((closed / 0.20870928052036765 - 1.0).abs() < 1e-13);
        assert!((k.density_complex(z).unwrap() / closed - 1.0).abs() < 1e-10);
        let big = PfaffKernel::new(SymmetryClass::Real, 0.0, 400).unwrap();
        assert!((big.density_complex(c(0.5, 6.0)).unwrap() * PI - 1.0).abs() < 0.02);
        let q = PfaffKernel::new(SymmetryClass::Quaternion, 0.0, 10).unwrap();
        assert!(q.density_complex(c(0.4, 1e-4)).unwrap() < 1e-6);
        assert!(k.density_complex(c(1.0, 0.0)).is_err());
    }

    #[test]
    fn real_density_closed_form() {
        // mpmath, 40 digits
        assert!((density_real_circular(20, 1.3).unwrap() / 0.39894228040143261 - 1.0).abs() < 1e-13);
        assert!((density_real_circular(20, 5.0).unwrap() / 0.19729657701682074 - 1.0).abs() < 1e-12);
        assert!((density_real_circular(100, 0.0).unwrap() - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-3);
        let k = PfaffKernel::new(SymmetryClass::Real, 0.0, 20).unwrap();
        for x in [0.0, 1.3, 4.2, 5.0, -6.0] {
            let a = k.density_real(x).unwrap();
            let b = density_real_circular(20, x).unwrap();
            assert!((a / b - 1.0).abs() < 1e-8, "x={x} {a} {b}");
        }
        assert_eq!(PfaffKernel::new(SymmetryClass::Quaternion, 0.0, 4).unwrap().density_real(0.1).unwrap(), 0.0);
    }

    #[test]
    fn real_density_edge_profile() {
        let n = 100;
        for u in [-1.0f64, 0.0, 1.0] {
            let exact = density_real_circular(n, (n as f64).sqrt() + u).unwrap();
            let profile = crate::specfun::erfc(SQRT_2 * u) / (2.0 * (2.0 * PI).sqrt())
                + (-u * u).exp() * crate::specfun::erfc(-u) / (4.0 * PI.sqrt());
            assert!((exact - profile).abs() < 2e-2, "u={u}");
        }
    }

    #[test]
    fn expected_real_counts() {
        assert_eq!(expected_real_count(1).unwrap(), 1.0);
        assert!((expected_real_count(2).unwrap() - SQRT_2).abs() < 1e-13);
        // mpmath quadrature, 40 digits
        assert!((expected_real_count(10).unwrap() - 2.9279934909691738).abs() < 1e-12);
        let integral = integrate_to_infinity(|x| density_real_circular(10, x).unwrap(), 0.0, &QuadConfig::default())
            .unwrap()
            .value;
        assert!((2.0 * integral - expected_real_count(10).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn upper_half_plane_correlations() {
        let k = PfaffKernel::new(SymmetryClass::Real, 0.0, 20).unwrap();
        let z = c(1.0, 1.0);
        assert!((k.correlations_upper(&[z]).unwrap() - k.density_complex(z).unwrap()).abs() < 1e-12);
        assert!(k.correlations_upper(&[z, z]).unwrap().abs() < 1e-10);
        let r2 = k.correlations_upper(&[z, c(1.5, 0.8)]).unwrap();
        assert!(r2 > 0.0);
        // far apart points decorrelate
        let (a, b) = (c(-2.5, 1.2), c(2.5, 1.5));
        let r2 = k.correlations_upper(&[a, b]).unwrap();
        let prod = k.density_complex(a).unwrap() * k.density_complex(b).unwrap();
        assert!((r2 / prod - 1.0).abs() < 1e-6, "{r2} {prod}");
        // N = 2 has at most one pair in the upper half-plane
        let two = PfaffKernel::new(SymmetryClass::Real, 0.0, 2).unwrap();
        assert!(two.correlations_upper(&[c(0.3, 0.5), c(-0.4, 0.9)]).unwrap().abs() < 1e-14);
        assert!(k.correlations_upper(&[c(1.0, -0.1)]).is_err());
        let q = PfaffKernel::new(SymmetryClass::Quaternion, 0.3, 2).unwrap();
        assert!(q.correlations_upper(&[c(0.3, 0.5), c(-0.4, 0.9)]).unwrap().abs() < 1e-14);
    }

    #[test]
    fn limit_kernels() {
        let (z1, z2) = (c(1.0, 1.0), c(0.5, -0.3));
        let cr = limit_kernel(SymmetryClass::Real, LimitRegime::CircularBulk, z1, z2).unwrap();
        assert_eq!(limit_kernel(SymmetryClass::Real, LimitRegime::CircularBulk, z1, z1).unwrap(), c(0.0, 0.0));
        let crt = limit_kernel(SymmetryClass::Real, LimitRegime::EllipticBulk { tau: 0.0 }, z1, z2).unwrap();
        assert!(rel(crt, cr) < 1e-15);
        let finite = PfaffKernel::new(SymmetryClass::Real, 0.0, 200).unwrap().kernel(z1, z2).unwrap();
        assert!(rel(finite, cr) < 1e-6);
        assert!(limit_kernel(SymmetryClass::Quaternion, LimitRegime::CircularBulk, z1, z1).is_err());
        let a = limit_kernel(SymmetryClass::Quaternion, LimitRegime::EllipticBulk { tau: 0.3 }, z1, z2).unwrap();
        let b = limit_kernel(SymmetryClass::Quaternion, LimitRegime::EllipticBulk { tau: 0.3 }, z2, z1).unwrap();
        assert!((a + b).norm() < 1e-14 * a.norm());
    }

    #[test]
    fn elliptic_bulk_densities() {
        // the bulk limit kernels give R^C → 1/(π(1−τ²)) away from the axis
        for (class, tau) in [(SymmetryClass::Real, 0.5), (SymmetryClass::Quaternion, 0.5), (SymmetryClass::Real, -0.3)]
        {
            let z = c(0.2, 6.0);
            let k = limit_kernel(class, LimitRegime::EllipticBulk { tau }, z, z.conj()).unwrap();
            let d = 2.0 * ln_f_squared(class, tau, z).exp() * k.norm();
            assert!((d * PI * (1.0 - tau * tau) - 1.0).abs() < 0.02, "{class:?} {tau} {d}");
        }
    }

    #[test]
    fn weak_profiles() {
        let (s, sm) = weak_density_profile(SymmetryClass::Real, 0.3, 1e-3).unwrap();
        assert!((s - 1.0).abs() < 1e-4 && sm >= 0.0);
        assert_eq!(weak_density_profile(SymmetryClass::Quaternion, 0.0, 0.7).unwrap(), (0.0, 0.0));
        let small = weak_density_profile(SymmetryClass::Quaternion, 1e-4, 0.7).unwrap().1;
        assert!(small < 1e-6);
        assert!(weak_density_profile(SymmetryClass::Real, 0.3, 0.0).is_err());
        for a in [0.3, 1.0] {
            let (singular, _) = weak_density_profile(SymmetryClass::Real, 0.0, a).unwrap();
            let smooth = integrate_to_infinity(
                |y| weak_density_profile(SymmetryClass::Real, y, a).unwrap().1,
                0.0,
                &QuadConfig::with_tol(1e-12, 1e-10),
            )
            .unwrap()
            .value;
            assert!((singular + 2.0 * smooth - 1.0).abs() < 1e-6, "a={a}");
        }
    }
}
