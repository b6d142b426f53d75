use std::cmp::Ordering;

use faer::Mat;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::sampler::{sample_matrix, substream, ComplexMatrix};
use super::{EnsembleSpec, SymmetryClass};
use crate::error::{invalid, Error, Result};

/// One sampled eigenvalue set. Complex-class spectra keep every eigenvalue
/// in `complex_eigs`; real and quaternion spectra split into real
/// eigenvalues and one upper-half-plane representative per conjugate pair.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub dim: usize,
    pub class: SymmetryClass,
    pub real_eigs: Vec<f64>,
    pub pair_reps: Vec<Complex64>,
    pub complex_eigs: Vec<Complex64>,
}

impl Spectrum {
    /// All N eigenvalues, conjugates of pair representatives included.
    pub fn eigenvalues(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.dim);
        out.extend(self.real_eigs.iter().map(|&x| Complex64::new(x, 0.0)));
        for z in &self.pair_reps {
            out.push(*z);
            out.push(z.conj());
        }
        out.extend_from_slice(&self.complex_eigs);
        out
    }

    pub fn real_count(&self) -> usize {
        self.real_eigs.len()
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues().iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

/// Seed, parallelism and eigen-extraction tolerances.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SamplerConfig {
    pub seed: u64,
    pub worker_count: usize,
    /// Relative backward-error target for the eigensolver.
    pub eig_tol: f64,
    /// Imaginary-part threshold for calling an eigenvalue real;
    /// `None` means 1e-8·√N.
    pub real_axis_tol: Option<f64>,
}

impl SamplerConfig {
    pub fn new(seed: u64) -> Self {
        SamplerConfig { seed, worker_count: 1, eig_tol: 1e-10, real_axis_tol: None }
    }

    pub fn with_workers(mut self, worker_count: usize) -> Self {
        self.worker_count = worker_count;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.worker_count == 0 {
            return Err(invalid("worker_count must be at least 1"));
        }
        if !(self.eig_tol > 0.0) || self.real_axis_tol.is_some_and(|t| !(t > 0.0)) {
            return Err(invalid("tolerances must be positive"));
        }
        Ok(())
    }

    fn real_axis_tol_for(&self, n: usize) -> f64 {
        self.real_axis_tol.unwrap_or(1e-8 * (n as f64).sqrt())
    }
}

fn lexicographic(a: &Complex64, b: &Complex64) -> Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

fn frobenius(j: &ComplexMatrix) -> f64 {
    let mut s = 0.0;
    for c in 0..j.ncols() {
        for r in 0..j.nrows() {
            s += j[(r, c)].norm_sqr();
        }
    }
    s.sqrt()
}

/// Compare Σλ and Σλ² with tr J and tr J²; a cheap check that the solver
/// returned eigenvalues of this matrix to the requested accuracy.
fn check_traces(j: &ComplexMatrix, eigs: &[Complex64], eig_tol: f64) -> Result<()> {
    let n = j.nrows();
    let norm = frobenius(j).max(f64::MIN_POSITIVE);
    let mut tr = Complex64::new(0.0, 0.0);
    let mut tr2 = Complex64::new(0.0, 0.0);
    for a in 0..n {
        tr += j[(a, a)];
        for b in 0..n {
            tr2 += j[(a, b)] * j[(b, a)];
        }
    }
    let s1: Complex64 = eigs.iter().sum();
    let s2: Complex64 = eigs.iter().map(|z| z * z).sum();
    let scale = n as f64 * eig_tol;
    if (s1 - tr).norm() > scale * norm || (s2 - tr2).norm() > scale * norm * norm {
        return Err(Error::Eigen(format!(
            "eigenvalues inconsistent with traces: |Σλ - tr J| = {:.3e}, |Σλ² - tr J²| = {:.3e}",
            (s1 - tr).norm(),
            (s2 - tr2).norm()
        )));
    }
    Ok(())
}

/// Eigenvalues of `j`, classified for the given symmetry class.
pub fn spectrum(j: &ComplexMatrix, cfg: &SamplerConfig, class: SymmetryClass) -> Result<Spectrum> {
    cfg.validate()?;
    let n = j.nrows();
    if n != j.ncols() {
        return Err(invalid(format!("matrix is {}x{}, expected square", j.nrows(), j.ncols())));
    }
    if n == 0 {
        return Err(invalid("empty matrix"));
    }
    let eigs: Vec<Complex64> = if class == SymmetryClass::Real {
        let mut real = Mat::<f64>::zeros(n, n);
        for c in 0..n {
            for r in 0..n {
                let v = j[(r, c)];
                if v.im != 0.0 {
                    return Err(invalid("real symmetry class needs a real matrix"));
                }
                real[(r, c)] = v.re;
            }
        }
        real.eigenvalues().map_err(|e| Error::Eigen(format!("{e:?}")))?
    } else {
        j.eigenvalues().map_err(|e| Error::Eigen(format!("{e:?}")))?
    };
    if eigs.len() != n || eigs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Eigen("solver returned non-finite or missing eigenvalues".into()));
    }
    check_traces(j, &eigs, cfg.eig_tol)?;

    if class == SymmetryClass::Complex {
        let mut complex_eigs = eigs;
        complex_eigs.sort_by(lexicographic);
        return Ok(Spectrum { dim: n, class, real_eigs: vec![], pair_reps: vec![], complex_eigs });
    }

    let tol = cfg.real_axis_tol_for(n);
    let mut real_eigs = Vec::new();
    let mut upper = Vec::new();
    let mut lower = Vec::new();
    for z in eigs {
        if z.im.abs() <= tol {
            real_eigs.push(z.re);
        } else if z.im > 0.0 {
            upper.push(z);
        } else {
            lower.push(z.conj());
        }
    }
    if upper.len() != lower.len() {
        return Err(Error::Eigen(format!("{} eigenvalues above the real axis but {} below", upper.len(), lower.len())));
    }
    let pair_tol = 1e3 * cfg.eig_tol * frobenius(j).max(1.0);
    let mut used = vec![false; lower.len()];
    let mut pair_reps = Vec::with_capacity(upper.len());
    for u in &upper {
        let mut best = None;
        let mut best_d = f64::INFINITY;
        for (k, l) in lower.iter().enumerate() {
            if !used[k] {
                let d = (u - l).norm();
                if d < best_d {
                    best_d = d;
                    best = Some(k);
                }
            }
        }
        match best {
            Some(k) if best_d <= pair_tol => {
                used[k] = true;
                pair_reps.push((u + lower[k]) * 0.5);
            }
            _ => {
                return Err(Error::Eigen(format!(
                    "eigenvalue {u} has no conjugate partner within {pair_tol:.1e} (closest {best_d:.3e})"
                )))
            }
        }
    }
    real_eigs.sort_by(f64::total_cmp);
    pair_reps.sort_by(lexicographic);
    Ok(Spectrum { dim: n, class, real_eigs, pair_reps, complex_eigs: vec![] })
}

fn sample_one(spec: &EnsembleSpec, cfg: &SamplerConfig, index: u64) -> Result<Spectrum> {
    let mut rng = substream(cfg.seed, index);
    sample_matrix(spec, &mut rng)
        .and_then(|j| spectrum(&j, cfg, spec.class()))
        .map_err(|e| Error::Sample { index, source: Box::new(e) })
}

/// Spectra in sample-index order, computed in parallel batches. The output
/// depends only on (seed, spec, count), never on `worker_count`.
pub struct SpectrumStream {
    spec: EnsembleSpec,
    cfg: SamplerConfig,
    pool: rayon::ThreadPool,
    next: u64,
    end: u64,
    buffer: std::vec::IntoIter<Result<Spectrum>>,
    batch: u64,
}

impl SpectrumStream {
    fn refill(&mut self) {
        let hi = (self.next + self.batch).min(self.end);
        let (spec, cfg) = (self.spec, self.cfg);
        let range = self.next..hi;
        let out: Vec<Result<Spectrum>> =
            self.pool.install(|| range.into_par_iter().map(|i| sample_one(&spec, &cfg, i)).collect());
        self.next = hi;
        self.buffer = out.into_iter();
    }

    pub fn remaining(&self) -> u64 {
        self.end - self.next + self.buffer.len() as u64
    }
}

impl Iterator for SpectrumStream {
    type Item = Result<Spectrum>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.buffer.len() == 0 {
            if self.next >= self.end {
                return None;
            }
            self.refill();
        }
        self.buffer.next()
    }
}

/// Draw `count` spectra; sample `i` uses the substream (seed, i).
pub fn sample_spectra(spec: &EnsembleSpec, count: u64, cfg: &SamplerConfig) -> Result<SpectrumStream> {
    cfg.validate()?;
    if count == 0 {
        return Err(invalid("count must be at least 1"));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.worker_count)
        .build()
        .map_err(|e| invalid(format!("could not start worker pool: {e}")))?;
    Ok(SpectrumStream {
        spec: *spec,
        cfg: *cfg,
        pool,
        next: 0,
        end: count,
        buffer: Vec::new().into_iter(),
        batch: 64 * cfg.worker_count as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real_matrix(rows: &[&[f64]]) -> ComplexMatrix {
        Mat::from_fn(rows.len(), rows.len(), |i, j| Complex64::new(rows[i][j], 0.0))
    }

    #[test]
    fn diagonal_real_matrix() {
        let j = real_matrix(&[&[3.0, 0.0, 0.0], &[0.0, 1.0, 0.0], &[0.0, 0.0, 2.0]]);
        let s = spectrum(&j, &SamplerConfig::new(0), SymmetryClass::Real).unwrap();
        assert_eq!(s.real_eigs.len(), 3);
        for (got, want) in s.real_eigs.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got - want).abs() < 1e-14);
        }
        assert!(s.pair_reps.is_empty());
    }

    #[test]
    fn rotation_gives_one_pair() {
        let j = real_matrix(&[&[0.0, 1.0], &[-1.0, 0.0]]);
        let s = spectrum(&j, &SamplerConfig::new(0), SymmetryClass::Real).unwrap();
        assert!(s.real_eigs.is_empty());
        assert_eq!(s.pair_reps.len(), 1);
        assert!((s.pair_reps[0] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    fn rejects_non_square_and_complex_input_for_real_class() {
        let cfg = SamplerConfig::new(0);
        let j = Mat::<Complex64>::zeros(2, 3);
        assert!(spectrum(&j, &cfg, SymmetryClass::Complex).is_err());
        let mut j = Mat::<Complex64>::zeros(2, 2);
        j[(0, 1)] = Complex64::new(0.0, 1.0);
        assert!(spectrum(&j, &cfg, SymmetryClass::Real).is_err());
    }

    #[test]
    fn unpaired_eigenvalue_is_an_error() {
        // Complex diagonal matrix declared quaternion: i has no partner -i.
        let mut j = Mat::<Complex64>::zeros(2, 2);
        j[(0, 0)] = Complex64::new(0.0, 1.0);
        j[(1, 1)] = Complex64::new(0.5, 2.0);
        assert!(spectrum(&j, &SamplerConfig::new(0), SymmetryClass::Quaternion).is_err());
    }

    #[test]
    fn counts_add_up() {
        for (class, n) in [(SymmetryClass::Real, 9), (SymmetryClass::Quaternion, 10), (SymmetryClass::Complex, 7)] {
            let spec = EnsembleSpec::circular(class, n).unwrap();
            for s in sample_spectra(&spec, 20, &SamplerConfig::new(3)).unwrap() {
                let s = s.unwrap();
                assert_eq!(s.real_eigs.len() + 2 * s.pair_reps.len() + s.complex_eigs.len(), n);
                assert!(s.pair_reps.iter().all(|z| z.im > 0.0));
            }
        }
    }

    #[test]
    fn stream_is_deterministic_and_worker_independent() {
        let spec = EnsembleSpec::circular(SymmetryClass::Real, 12).unwrap();
        let run = |workers| -> Vec<Spectrum> {
            sample_spectra(&spec, 150, &SamplerConfig::new(42).with_workers(workers))
                .unwrap()
                .map(|s| s.unwrap())
                .collect()
        };
        let a = run(1);
        assert_eq!(a, run(1));
        assert_eq!(a, run(8));
    }

    #[test]
    fn symmetric_matrices_have_real_spectra() {
        let mut rng = substream(2, 0);
        let j = super::super::sample_real_elliptic(30, 1.0, &mut rng).unwrap();
        let s = spectrum(&j, &SamplerConfig::new(0), SymmetryClass::Real).unwrap();
        assert_eq!(s.real_eigs.len(), 30);
    }

    #[test]
    fn truncated_spectrum_inside_unit_disk() {
        let spec = EnsembleSpec::truncated_unitary(20, 3).unwrap();
        for s in sample_spectra(&spec, 30, &SamplerConfig::new(1)).unwrap() {
            assert!(s.unwrap().spectral_radius() < 1.0 + 1e-10);
        }
    }

    #[test]
    fn zero_count_and_zero_workers_rejected() {
        let spec = EnsembleSpec::circular(SymmetryClass::Complex, 3).unwrap();
        assert!(sample_spectra(&spec, 0, &SamplerConfig::new(0)).is_err());
        assert!(sample_spectra(&spec, 5, &SamplerConfig::new(0).with_workers(0)).is_err());
    }
}
