//! End-to-end checks: sample an ensemble once, feed every requested
//! estimator, and compare each against the exact formula.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{
    compare, DensityAccumulator, DensityEstimate, DensityGrid, Empirical, GapAccumulator, PairAccumulator,
    VerificationReport,
};
use crate::det_kernels::DetKernel;
use crate::ensembles::{sample_spectra, EnsembleSpec, SamplerConfig, SymmetryClass, Variant};
use crate::error::{invalid, Error, Result};
use crate::gap_stats::gap_ginibre;
use crate::pfaff_kernels::{density_complex_real_circular, density_real_circular, expected_real_count, PfaffKernel};
use crate::quadrature::{integrate, integrate_to_infinity, GaussLegendre, QuadConfig};

/// Bins whose expected count is below this are left out of density reports.
pub const MIN_EXPECTED_COUNT: f64 = 10.0;
/// Radius of the disk around the origin whose eigenvalues serve as centres.
pub const PAIR_CENTER_RADIUS: f64 = 1.0;
pub const GAP_CENTER_RADIUS: f64 = 0.5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Density,
    RealCount,
    Pair,
    Gap,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::Density, Suite::RealCount, Suite::Pair, Suite::Gap];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Density => "density",
            Suite::RealCount => "real_count",
            Suite::Pair => "pair",
            Suite::Gap => "gap",
        }
    }

    /// Whether the suite has an exact reference for this ensemble.
    pub fn supports(self, spec: &EnsembleSpec) -> bool {
        let circular_complex = spec.class() == SymmetryClass::Complex && spec.variant() == Variant::Circular;
        match self {
            Suite::Density => true,
            Suite::RealCount => spec.class() == SymmetryClass::Real,
            Suite::Pair | Suite::Gap => circular_complex,
        }
    }
}

impl std::str::FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.name() == s)
            .ok_or_else(|| invalid(format!("unknown verification suite '{s}'")))
    }
}

/// Sampling and grid settings of a verification run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteOptions {
    pub seed: u64,
    pub samples: u64,
    pub workers: usize,
    /// Bin width; each suite has its own default.
    pub step: Option<f64>,
    /// Upper end of the grid (radius, |x| or s); each suite has its own default.
    pub extent: Option<f64>,
    pub threshold: f64,
}

impl SuiteOptions {
    pub fn new(seed: u64, samples: u64) -> Self {
        SuiteOptions { seed, samples, workers: 1, step: None, extent: None, threshold: super::DEFAULT_Z_THRESHOLD }
    }
}

fn grid_edges(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !(hi > lo) || !step.is_finite() || !hi.is_finite() || !lo.is_finite() {
        return Err(invalid(format!("grid [{lo}, {hi}] with step {step} is empty or invalid")));
    }
    let n = ((hi - lo) / step - 1e-9).ceil().max(1.0) as usize;
    Ok((0..=n).map(|i| (lo + i as f64 * step).min(hi)).collect())
}

/// Eigenvalue density of an ensemble, split into the part on the real
/// axis (per unit length) and the part off it (per unit area). Real
/// circular ensembles use the closed forms, other Pfaffian cases the
/// skew-orthogonal kernel.
pub struct ExactDensity {
    spec: EnsembleSpec,
    det: Option<DetKernel>,
    pfaff: Option<PfaffKernel>,
}

impl ExactDensity {
    pub fn new(spec: &EnsembleSpec) -> Result<Self> {
        let (det, pfaff) = match spec.class() {
            SymmetryClass::Complex => (Some(DetKernel::from_spec(spec)?), None),
            _ => (None, Some(PfaffKernel::from_spec(spec)?)),
        };
        Ok(ExactDensity { spec: *spec, det, pfaff })
    }

    fn circular_real(&self) -> bool {
        self.spec.class() == SymmetryClass::Real && self.spec.variant() == Variant::Circular
    }

    /// Density per unit area; zero on the real axis of the real and
    /// quaternion classes, mirrored for Im z < 0.
    pub fn plane(&self, z: Complex64) -> Result<f64> {
        if let Some(k) = &self.det {
            return k.density(z);
        }
        let k = self.pfaff.as_ref().expect("one kernel is set");
        let w = Complex64::new(z.re, z.im.abs());
        if w.im == 0.0 {
            return Ok(0.0);
        }
        if self.circular_real() {
            return density_complex_real_circular(self.spec.dim(), w);
        }
        k.density_complex(w)
    }

    /// Density of real eigenvalues; zero unless the class is real.
    pub fn real_axis(&self, x: f64) -> Result<f64> {
        match &self.pfaff {
            Some(_) if self.circular_real() => density_real_circular(self.spec.dim(), x),
            Some(k) => k.density_real(x),
            None => Ok(0.0),
        }
    }
}

fn default_extent(spec: &EnsembleSpec) -> f64 {
    match spec.variant() {
        Variant::TruncatedUnitary { .. } => 1.0,
        _ => (spec.dim() as f64).sqrt() * (1.0 + spec.tau().abs()) + 1.0,
    }
}

/// Density grids appropriate for the ensemble.
fn density_grids(spec: &EnsembleSpec, opts: &SuiteOptions) -> Result<Vec<(&'static str, DensityGrid)>> {
    let extent = opts.extent.unwrap_or_else(|| default_extent(spec));
    let rotation_invariant =
        spec.class() == SymmetryClass::Complex && !matches!(spec.variant(), Variant::Elliptic { .. });
    if rotation_invariant {
        let step =
            opts.step.unwrap_or(if matches!(spec.variant(), Variant::TruncatedUnitary { .. }) { 0.05 } else { 0.25 });
        return Ok(vec![("density_radial", DensityGrid::Radial { edges: grid_edges(0.0, extent, step)? })]);
    }
    let step = opts.step.unwrap_or(0.5);
    let x_edges = grid_edges(-extent, extent, step)?;
    let mut out = Vec::new();
    match spec.class() {
        SymmetryClass::Complex => {
            let y_extent = match spec.variant() {
                Variant::Elliptic { tau } => (spec.dim() as f64).sqrt() * (1.0 - tau) + 1.0,
                _ => extent,
            };
            out.push((
                "density_plane",
                DensityGrid::Plane { x_edges, y_edges: grid_edges(-y_extent, y_extent, step)? },
            ));
        }
        class => {
            if class == SymmetryClass::Real {
                out.push(("density_real_axis", DensityGrid::RealAxis { edges: x_edges.clone() }));
            }
            let y_extent = (spec.dim() as f64).sqrt() * (1.0 - spec.tau()) + 1.0;
            out.push(("density_complex", DensityGrid::Plane { x_edges, y_edges: grid_edges(0.0, y_extent, step)? }));
        }
    }
    Ok(out)
}

/// Exact bin averages for a density grid.
fn exact_bin_averages(exact: &ExactDensity, grid: &DensityGrid) -> Result<Vec<f64>> {
    match grid {
        DensityGrid::Radial { edges } => {
            let cfg = QuadConfig::with_tol(1e-12, 1e-9);
            edges
                .windows(2)
                .map(|w| {
                    let mut failure = None;
                    let mass = integrate(
                        |r: f64| match exact.plane(Complex64::new(r, 0.0)) {
                            Ok(v) => 2.0 * PI * r * v,
                            Err(e) => {
                                failure.get_or_insert(e);
                                0.0
                            }
                        },
                        w[0],
                        w[1],
                        &cfg,
                    )?
                    .value;
                    if let Some(e) = failure {
                        return Err(e);
                    }
                    Ok(mass / (PI * (w[1] * w[1] - w[0] * w[0])))
                })
                .collect()
        }
        DensityGrid::RealAxis { edges } => {
            let gl = GaussLegendre::new(8)?;
            edges
                .windows(2)
                .map(|w| {
                    let mut failure = None;
                    let v = gl.integrate(
                        |x| {
                            exact.real_axis(x).unwrap_or_else(|e| {
                                failure.get_or_insert(e);
                                0.0
                            })
                        },
                        w[0],
                        w[1],
                    );
                    failure.map_or(Ok(v / (w[1] - w[0])), Err)
                })
                .collect()
        }
        DensityGrid::Plane { x_edges, y_edges } => {
            let gl = GaussLegendre::new(4)?;
            let mut out = Vec::with_capacity(grid.bin_count());
            for yw in y_edges.windows(2) {
                for xw in x_edges.windows(2) {
                    let mut failure = None;
                    let v = gl.integrate(
                        |y| {
                            gl.integrate(
                                |x| {
                                    exact.plane(Complex64::new(x, y)).unwrap_or_else(|e| {
                                        failure.get_or_insert(e);
                                        0.0
                                    })
                                },
                                xw[0],
                                xw[1],
                            )
                        },
                        yw[0],
                        yw[1],
                    );
                    if let Some(e) = failure {
                        return Err(e);
                    }
                    out.push(v / ((xw[1] - xw[0]) * (yw[1] - yw[0])));
                }
            }
            Ok(out)
        }
    }
}

/// Compare a density estimate with exact bin averages, keeping the bins
/// with an expected count of at least [`MIN_EXPECTED_COUNT`].
pub fn density_report(
    name: &str,
    estimate: &DensityEstimate,
    exact: &[f64],
    seed: u64,
    threshold: f64,
) -> Result<VerificationReport> {
    let measures = estimate.grid.measures();
    let centers = estimate.grid.centers();
    let mut grid = Vec::new();
    let (mut ex, mut est, mut se) = (Vec::new(), Vec::new(), Vec::new());
    for i in 0..exact.len() {
        if exact[i] * measures[i] * estimate.samples as f64 >= MIN_EXPECTED_COUNT {
            // plane bins are labelled by a flat index, the others by their centre
            grid.push(match estimate.grid {
                DensityGrid::Plane { .. } => i as f64,
                _ => centers[i].re,
            });
            ex.push(exact[i]);
            est.push(estimate.density[i]);
            se.push(estimate.stderr[i]);
        }
    }
    if grid.is_empty() {
        return Err(Error::InsufficientData(format!("{name}: no bin reaches {MIN_EXPECTED_COUNT} expected counts")));
    }
    compare(name, &ex, Empirical { grid, estimate: est, stderr: se, seed, samples: estimate.samples }, threshold)
}

/// Bin average of 1 − e^{−s²} over the annulus a ≤ s < b, weighted by area.
pub fn ginibre_pair_ratio_bin(a: f64, b: f64) -> f64 {
    1.0 - ((-a * a).exp() - (-b * b).exp()) / (b * b - a * a)
}

enum Job {
    Density(&'static str, DensityAccumulator),
    RealCount { n: u64, sum: f64, sum_sq: f64 },
    Pair(PairAccumulator),
    Gap(GapAccumulator),
}

/// Run the requested suites on one shared sample stream. Suites the
/// ensemble does not support are rejected.
pub fn run_suites(spec: &EnsembleSpec, suites: &[Suite], opts: &SuiteOptions) -> Result<Vec<VerificationReport>> {
    if suites.is_empty() {
        return Err(invalid("no verification suite selected"));
    }
    for s in suites {
        if !s.supports(spec) {
            return Err(invalid(format!("the {} suite does not apply to this ensemble", s.name())));
        }
    }
    let mut jobs = Vec::new();
    for s in suites {
        match s {
            Suite::Density => {
                for (name, grid) in density_grids(spec, opts)? {
                    jobs.push(Job::Density(name, DensityAccumulator::new(grid)?));
                }
            }
            Suite::RealCount => jobs.push(Job::RealCount { n: 0, sum: 0.0, sum_sq: 0.0 }),
            Suite::Pair => {
                let step = opts.step.unwrap_or(0.2);
                let edges = grid_edges(0.2, opts.extent.unwrap_or(2.0), step)?;
                jobs.push(Job::Pair(PairAccumulator::new(Complex64::new(0.0, 0.0), PAIR_CENTER_RADIUS, edges)?));
            }
            Suite::Gap => {
                let step = opts.step.unwrap_or(0.1);
                let grid = grid_edges(0.0, opts.extent.unwrap_or(2.0), step)?;
                jobs.push(Job::Gap(GapAccumulator::new(grid, GAP_CENTER_RADIUS)?));
            }
        }
    }
    let cfg = SamplerConfig::new(opts.seed).with_workers(opts.workers);
    for s in sample_spectra(spec, opts.samples, &cfg)? {
        let s = s?;
        for job in &mut jobs {
            match job {
                Job::Density(_, acc) => acc.push(&s),
                Job::RealCount { n, sum, sum_sq } => {
                    let c = s.real_count() as f64;
                    *n += 1;
                    *sum += c;
                    *sum_sq += c * c;
                }
                Job::Pair(acc) => acc.push(&s),
                Job::Gap(acc) => acc.push(&s),
            }
        }
    }
    let mut reports = Vec::new();
    let exact_density = ExactDensity::new(spec)?;
    for job in jobs {
        reports.push(match job {
            Job::Density(name, acc) => {
                let est = acc.finish()?;
                let exact = exact_bin_averages(&exact_density, &est.grid)?;
                density_report(name, &est, &exact, opts.seed, opts.threshold)?
            }
            Job::RealCount { n, sum, sum_sq } => {
                if n < 2 {
                    return Err(Error::InsufficientData(format!("real count needs at least 2 samples, got {n}")));
                }
                let nf = n as f64;
                let mean = sum / nf;
                let var = (sum_sq / nf - mean * mean).max(0.0) * nf / (nf - 1.0);
                let exact = exact_real_count(spec, &exact_density)?;
                compare(
                    "real_count",
                    &[exact],
                    Empirical {
                        grid: vec![spec.dim() as f64],
                        estimate: vec![mean],
                        stderr: vec![(var / nf).sqrt()],
                        seed: opts.seed,
                        samples: n,
                    },
                    opts.threshold,
                )?
            }
            Job::Pair(acc) => {
                let pc = acc.finish()?;
                let (ratio, err) = pc.ratio(1.0 / PI);
                let grid = super::midpoints(&pc.s_edges);
                let exact: Vec<f64> = pc.s_edges.windows(2).map(|w| ginibre_pair_ratio_bin(w[0], w[1])).collect();
                compare(
                    "pair_ratio",
                    &exact,
                    Empirical {
                        grid,
                        estimate: ratio.iter().map(|v| v.unwrap_or(0.0)).collect(),
                        stderr: err.iter().map(|v| v.unwrap_or(0.0)).collect(),
                        seed: opts.seed,
                        samples: pc.samples,
                    },
                    opts.threshold,
                )?
            }
            Job::Gap(acc) => {
                let g = acc.finish()?;
                let exact = g.s_grid.iter().map(|&s| gap_ginibre(Some(spec.dim()), s)).collect::<Result<Vec<_>>>()?;
                compare(
                    "gap",
                    &exact,
                    Empirical { grid: g.s_grid, estimate: g.h, stderr: g.stderr, seed: opts.seed, samples: g.samples },
                    opts.threshold,
                )?
            }
        });
    }
    Ok(reports)
}

fn exact_real_count(spec: &EnsembleSpec, exact: &ExactDensity) -> Result<f64> {
    if spec.variant() == Variant::Circular {
        return expected_real_count(spec.dim());
    }
    let mut failure = None;
    let half = integrate_to_infinity(
        |x| {
            exact.real_axis(x).unwrap_or_else(|e| {
                failure.get_or_insert(e);
                0.0
            })
        },
        0.0,
        &QuadConfig::with_tol(1e-10, 1e-9),
    )?
    .value;
    failure.map_or(Ok(2.0 * half), Err)
}
