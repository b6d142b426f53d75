use faer::Mat;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{EnsembleSpec, SymmetryClass, Variant};
use crate::error::{invalid, Result};

pub type ComplexMatrix = Mat<Complex64>;

/// Independent random stream for sample `index` under `seed`.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn normal<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    rng.sample(StandardNormal)
}

/// Complex Gaussian with ⟨|z|²⟩ = 1.
fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(normal(rng), normal(rng)) * std::f64::consts::FRAC_1_SQRT_2
}

fn complex_ginibre<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let mut m = Mat::zeros(n, n);
    for j in 0..n {
        for i in 0..n {
            m[(i, j)] = complex_normal(rng);
        }
    }
    m
}

fn quaternion_ginibre<R: Rng + ?Sized>(n: usize, rng: &mut R) -> ComplexMatrix {
    let mut m = Mat::zeros(n, n);
    for q in 0..n / 2 {
        for p in 0..n / 2 {
            let a = complex_normal(rng);
            let b = complex_normal(rng);
            m[(2 * p, 2 * q)] = a;
            m[(2 * p, 2 * q + 1)] = b;
            m[(2 * p + 1, 2 * q)] = -b.conj();
            m[(2 * p + 1, 2 * q + 1)] = a.conj();
        }
    }
    m
}

/// √(1+τ)·(X+X†)/2 + √(1-τ)·(Y-Y†)/2.
fn mix_hermitian_parts(x: &ComplexMatrix, y: &ComplexMatrix, tau: f64) -> ComplexMatrix {
    let n = x.nrows();
    let (s, t) = ((1.0 + tau).sqrt(), (1.0 - tau).sqrt());
    Mat::from_fn(n, n, |i, j| (x[(i, j)] + x[(j, i)].conj()) * (0.5 * s) + (y[(i, j)] - y[(j, i)].conj()) * (0.5 * t))
}

/// Complex elliptic matrix, τ ∈ [0, 1]; τ = 1 gives a GUE-type Hermitian matrix.
pub fn sample_complex_elliptic<R: Rng + ?Sized>(n: usize, tau: f64, rng: &mut R) -> Result<ComplexMatrix> {
    if n == 0 || !(0.0..=1.0).contains(&tau) {
        return Err(invalid(format!("complex elliptic sampler needs n >= 1 and tau in [0, 1], got tau = {tau}")));
    }
    let x = complex_ginibre(n, rng);
    let y = complex_ginibre(n, rng);
    Ok(mix_hermitian_parts(&x, &y, tau))
}

/// Real elliptic matrix, τ ∈ [-1, 1]; τ = ±1 give symmetric and antisymmetric matrices.
pub fn sample_real_elliptic<R: Rng + ?Sized>(n: usize, tau: f64, rng: &mut R) -> Result<ComplexMatrix> {
    if n == 0 || !(-1.0..=1.0).contains(&tau) {
        return Err(invalid(format!("real elliptic sampler needs n >= 1 and tau in [-1, 1], got tau = {tau}")));
    }
    let mix = (1.0 - tau * tau).max(0.0).sqrt();
    let diag_sd = (1.0 + tau).sqrt();
    let mut m = Mat::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(diag_sd * normal(rng), 0.0);
        for j in i + 1..n {
            let u = normal(rng);
            let v = normal(rng);
            m[(i, j)] = Complex64::new(u, 0.0);
            m[(j, i)] = Complex64::new(tau * u + mix * v, 0.0);
        }
    }
    Ok(m)
}

/// Quaternion-real elliptic matrix in 2×2 block form, τ ∈ [-1, 1].
pub fn sample_quaternion_elliptic<R: Rng + ?Sized>(n: usize, tau: f64, rng: &mut R) -> Result<ComplexMatrix> {
    if n == 0 || n % 2 == 1 || !(-1.0..=1.0).contains(&tau) {
        return Err(invalid(format!(
            "quaternion elliptic sampler needs even n >= 2 and tau in [-1, 1], got n = {n}, tau = {tau}"
        )));
    }
    let x = quaternion_ginibre(n, rng);
    if tau == 0.0 {
        return Ok(x);
    }
    let y = quaternion_ginibre(n, rng);
    Ok(mix_hermitian_parts(&x, &y, tau))
}

/// Haar-distributed n×n unitary: QR of a complex Ginibre matrix with the
/// phases of R's diagonal moved into Q.
pub fn haar_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ComplexMatrix> {
    if n == 0 {
        return Err(invalid("haar_unitary needs n >= 1"));
    }
    let g = complex_ginibre(n, rng);
    let qr = g.qr();
    let r = qr.R();
    let mut q = qr.compute_Q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { Complex64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    Ok(q)
}

/// Draw one matrix from the ensemble.
pub fn sample_matrix<R: Rng + ?Sized>(spec: &EnsembleSpec, rng: &mut R) -> Result<ComplexMatrix> {
    let n = spec.dim();
    match (spec.class(), spec.variant()) {
        (SymmetryClass::Complex, Variant::Circular) => Ok(complex_ginibre(n, rng)),
        (SymmetryClass::Complex, Variant::Elliptic { tau }) => sample_complex_elliptic(n, tau, rng),
        (SymmetryClass::Real, Variant::Circular) => sample_real_elliptic(n, 0.0, rng),
        (SymmetryClass::Real, Variant::Elliptic { tau }) => sample_real_elliptic(n, tau, rng),
        (SymmetryClass::Quaternion, Variant::Circular) => Ok(quaternion_ginibre(n, rng)),
        (SymmetryClass::Quaternion, Variant::Elliptic { tau }) => sample_quaternion_elliptic(n, tau, rng),
        (SymmetryClass::Complex, Variant::TruncatedUnitary { m, l }) => {
            let u = haar_unitary(m + l, rng)?;
            Ok(Mat::from_fn(m, m, |i, j| u[(i, j)]))
        }
        (class, variant) => Err(invalid(format!("unsupported combination {class:?} / {variant:?}"))),
    }
}
