//! Monte Carlo estimators over sampled spectra and their comparison with
//! exact curves.
//!
//! Every estimator is an accumulator: feed spectra in sample-index order
//! with `push`, then `finish`. Standard errors come from the empirical
//! variance of the per-sample contributions, which is valid because samples
//! are independent even though eigenvalues within one sample are not.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ensembles::{Spectrum, SymmetryClass};
use crate::error::{invalid, Error, Result};

mod suites;

pub use suites::{
    density_report, ginibre_pair_ratio_bin, run_suites, ExactDensity, Suite, SuiteOptions, MIN_EXPECTED_COUNT,
};

/// Minimum number of spectra for a density estimate.
pub const MIN_DENSITY_SAMPLES: u64 = 100;
/// Minimum number of conditioning events for the gap estimator.
pub const MIN_GAP_EVENTS: u64 = 1000;
/// Default |z| threshold of [`compare`].
pub const DEFAULT_Z_THRESHOLD: f64 = 4.0;

fn check_edges(edges: &[f64], what: &str) -> Result<()> {
    if edges.len() < 2 {
        return Err(invalid(format!("{what} needs at least two edges")));
    }
    if edges.iter().any(|e| !e.is_finite()) || edges.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(invalid(format!("{what} edges must be finite and strictly increasing")));
    }
    Ok(())
}

fn bin_of(edges: &[f64], v: f64) -> Option<usize> {
    if !(v >= edges[0]) || v >= edges[edges.len() - 1] {
        return None;
    }
    Some(edges.partition_point(|&e| e <= v) - 1)
}

fn midpoints(edges: &[f64]) -> Vec<f64> {
    edges.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
}

/// Per-bin sums of a per-sample quantity and of its square.
#[derive(Clone, Debug, Default)]
struct Moments {
    sum: Vec<f64>,
    sum_sq: Vec<f64>,
    scratch: Vec<f64>,
    touched: Vec<usize>,
}

impl Moments {
    fn new(bins: usize) -> Self {
        Moments { sum: vec![0.0; bins], sum_sq: vec![0.0; bins], scratch: vec![0.0; bins], touched: Vec::new() }
    }

    fn add(&mut self, bin: usize, v: f64) {
        if self.scratch[bin] == 0.0 {
            self.touched.push(bin);
        }
        self.scratch[bin] += v;
    }

    /// Close the current sample.
    fn commit(&mut self) {
        for &b in &self.touched {
            let v = self.scratch[b];
            self.sum[b] += v;
            self.sum_sq[b] += v * v;
            self.scratch[b] = 0.0;
        }
        self.touched.clear();
    }

    /// Mean and standard error of the mean for each bin.
    fn mean_and_stderr(&self, samples: u64) -> (Vec<f64>, Vec<f64>) {
        let n = samples as f64;
        let mean: Vec<f64> = self.sum.iter().map(|s| s / n).collect();
        let se = self
            .sum_sq
            .iter()
            .zip(&mean)
            .map(|(s2, m)| {
                let var = (s2 / n - m * m).max(0.0) * n / (n - 1.0).max(1.0);
                (var / n).sqrt()
            })
            .collect();
        (mean, se)
    }
}

// ---------------------------------------------------------------------------
// One-point densities

/// Where the eigenvalues of a density estimate are binned.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DensityGrid {
    /// Annuli by |z|, all eigenvalues.
    Radial { edges: Vec<f64> },
    /// Intervals of the real axis, real eigenvalues only.
    RealAxis { edges: Vec<f64> },
    /// Rectangles of the plane, non-real eigenvalues including conjugates.
    Plane { x_edges: Vec<f64>, y_edges: Vec<f64> },
}

impl DensityGrid {
    fn validate(&self) -> Result<()> {
        match self {
            DensityGrid::Radial { edges } => {
                check_edges(edges, "radial grid")?;
                if edges[0] < 0.0 {
                    return Err(invalid("radial edges must be nonnegative"));
                }
                Ok(())
            }
            DensityGrid::RealAxis { edges } => check_edges(edges, "real-axis grid"),
            DensityGrid::Plane { x_edges, y_edges } => {
                check_edges(x_edges, "plane grid (x)")?;
                check_edges(y_edges, "plane grid (y)")
            }
        }
    }

    pub fn bin_count(&self) -> usize {
        match self {
            DensityGrid::Radial { edges } | DensityGrid::RealAxis { edges } => edges.len() - 1,
            DensityGrid::Plane { x_edges, y_edges } => (x_edges.len() - 1) * (y_edges.len() - 1),
        }
    }

    /// Lebesgue measure of each bin (length for the real axis).
    pub fn measures(&self) -> Vec<f64> {
        match self {
            DensityGrid::Radial { edges } => {
                edges.windows(2).map(|w| std::f64::consts::PI * (w[1] * w[1] - w[0] * w[0])).collect()
            }
            DensityGrid::RealAxis { edges } => edges.windows(2).map(|w| w[1] - w[0]).collect(),
            DensityGrid::Plane { x_edges, y_edges } => {
                let mut out = Vec::with_capacity(self.bin_count());
                for yw in y_edges.windows(2) {
                    for xw in x_edges.windows(2) {
                        out.push((xw[1] - xw[0]) * (yw[1] - yw[0]));
                    }
                }
                out
            }
        }
    }

    /// Bin centres; for the plane grid row-major in y, as (x, y) pairs.
    pub fn centers(&self) -> Vec<Complex64> {
        match self {
            DensityGrid::Radial { edges } | DensityGrid::RealAxis { edges } => {
                midpoints(edges).into_iter().map(|r| Complex64::new(r, 0.0)).collect()
            }
            DensityGrid::Plane { x_edges, y_edges } => {
                let (xs, ys) = (midpoints(x_edges), midpoints(y_edges));
                ys.iter().flat_map(|&y| xs.iter().map(move |&x| Complex64::new(x, y))).collect()
            }
        }
    }

    fn locate(&self, z: Complex64) -> Option<usize> {
        match self {
            DensityGrid::Radial { edges } => bin_of(edges, z.norm()),
            DensityGrid::RealAxis { edges } => bin_of(edges, z.re),
            DensityGrid::Plane { x_edges, y_edges } => {
                let i = bin_of(x_edges, z.re)?;
                let j = bin_of(y_edges, z.im)?;
                Some(j * (x_edges.len() - 1) + i)
            }
        }
    }
}

/// Density estimate: mean count per bin divided by the bin measure.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityEstimate {
    pub grid: DensityGrid,
    pub samples: u64,
    pub counts: Vec<u64>,
    /// Eigenvalues that fell outside every bin.
    pub outside: u64,
    pub density: Vec<f64>,
    pub stderr: Vec<f64>,
}

/// Streaming accumulator behind [`estimate_density`].
#[derive(Clone, Debug)]
pub struct DensityAccumulator {
    grid: DensityGrid,
    moments: Moments,
    counts: Vec<u64>,
    outside: u64,
    samples: u64,
}

impl DensityAccumulator {
    pub fn new(grid: DensityGrid) -> Result<Self> {
        grid.validate()?;
        let bins = grid.bin_count();
        Ok(DensityAccumulator { grid, moments: Moments::new(bins), counts: vec![0; bins], outside: 0, samples: 0 })
    }

    pub fn push(&mut self, s: &Spectrum) {
        let add = |acc: &mut Self, z: Complex64| match acc.grid.locate(z) {
            Some(b) => {
                acc.counts[b] += 1;
                acc.moments.add(b, 1.0);
            }
            None => acc.outside += 1,
        };
        match self.grid {
            DensityGrid::RealAxis { .. } => {
                for &x in &s.real_eigs {
                    add(self, Complex64::new(x, 0.0));
                }
            }
            DensityGrid::Plane { .. } => {
                for z in s.pair_reps.iter().flat_map(|z| [*z, z.conj()]).chain(s.complex_eigs.iter().copied()) {
                    add(self, z);
                }
            }
            DensityGrid::Radial { .. } => {
                for z in s.eigenvalues() {
                    add(self, z);
                }
            }
        }
        self.moments.commit();
        self.samples += 1;
    }

    pub fn finish(self) -> Result<DensityEstimate> {
        if self.samples < MIN_DENSITY_SAMPLES {
            return Err(Error::InsufficientData(format!(
                "density estimate needs at least {MIN_DENSITY_SAMPLES} samples, got {}",
                self.samples
            )));
        }
        let (mean, se) = self.moments.mean_and_stderr(self.samples);
        let measures = self.grid.measures();
        let density = mean.iter().zip(&measures).map(|(m, a)| m / a).collect();
        let stderr = se.iter().zip(&measures).map(|(s, a)| s / a).collect();
        Ok(DensityEstimate {
            grid: self.grid,
            samples: self.samples,
            counts: self.counts,
            outside: self.outside,
            density,
            stderr,
        })
    }
}

/// Bin the spectra of a stream and estimate the one-point density.
pub fn estimate_density<I>(spectra: I, grid: DensityGrid) -> Result<DensityEstimate>
where
    I: IntoIterator<Item = Result<Spectrum>>,
{
    let mut acc = DensityAccumulator::new(grid)?;
    for s in spectra {
        acc.push(&s?);
    }
    acc.finish()
}

// ---------------------------------------------------------------------------
// Real eigenvalue count

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeanEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub samples: u64,
}

/// Sample mean of the number of real eigenvalues.
pub fn estimate_real_count<I>(spectra: I) -> Result<MeanEstimate>
where
    I: IntoIterator<Item = Result<Spectrum>>,
{
    let (mut n, mut sum, mut sum_sq) = (0u64, 0.0, 0.0);
    for s in spectra {
        let s = s?;
        if s.class != SymmetryClass::Real {
            return Err(invalid(format!("real count needs real-class spectra, got {}", s.class.name())));
        }
        let c = s.real_count() as f64;
        n += 1;
        sum += c;
        sum_sq += c * c;
    }
    if n < 2 {
        return Err(Error::InsufficientData(format!("real count needs at least 2 samples, got {n}")));
    }
    let nf = n as f64;
    let mean = sum / nf;
    let var = (sum_sq / nf - mean * mean).max(0.0) * nf / (nf - 1.0);
    Ok(MeanEstimate { mean, stderr: (var / nf).sqrt(), samples: n })
}

// ---------------------------------------------------------------------------
// Pair correlation

/// Angular average of R2(z, z + s e^{iθ}) over centres z in a disk.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairCorrelation {
    pub z0: [f64; 2],
    pub center_radius: f64,
    pub s_edges: Vec<f64>,
    pub samples: u64,
    pub counts: Vec<u64>,
    /// R2 estimate per s bin; `None` for bins without any pair.
    pub r2: Vec<Option<f64>>,
    pub r2_stderr: Vec<Option<f64>>,
}

impl PairCorrelation {
    /// R2/ρ² for a homogeneous reference density ρ, with matching errors.
    pub fn ratio(&self, rho: f64) -> (Vec<Option<f64>>, Vec<Option<f64>>) {
        let k = rho * rho;
        (self.r2.iter().map(|v| v.map(|v| v / k)).collect(), self.r2_stderr.iter().map(|v| v.map(|v| v / k)).collect())
    }
}

/// Streaming accumulator behind [`estimate_pair_correlation`].
#[derive(Clone, Debug)]
pub struct PairAccumulator {
    z0: Complex64,
    center_radius: f64,
    s_edges: Vec<f64>,
    moments: Moments,
    counts: Vec<u64>,
    samples: u64,
}

impl PairAccumulator {
    pub fn new(z0: Complex64, center_radius: f64, s_edges: Vec<f64>) -> Result<Self> {
        check_edges(&s_edges, "pair-distance grid")?;
        if s_edges[0] < 0.0 {
            return Err(invalid("pair distances must be nonnegative"));
        }
        if !(center_radius > 0.0) || !center_radius.is_finite() {
            return Err(invalid(format!("centre radius must be positive, got {center_radius}")));
        }
        if !(z0.re.is_finite() && z0.im.is_finite()) {
            return Err(invalid("z0 must be finite"));
        }
        let bins = s_edges.len() - 1;
        Ok(PairAccumulator {
            z0,
            center_radius,
            s_edges,
            moments: Moments::new(bins),
            counts: vec![0; bins],
            samples: 0,
        })
    }

    pub fn push(&mut self, s: &Spectrum) {
        let eigs = s.eigenvalues();
        let s_max = self.s_edges[self.s_edges.len() - 1];
        for (i, &c) in eigs.iter().enumerate() {
            if (c - self.z0).norm() >= self.center_radius {
                continue;
            }
            for (j, &p) in eigs.iter().enumerate() {
                if i == j {
                    continue;
                }
                let d = (p - c).norm();
                if d >= s_max {
                    continue;
                }
                if let Some(b) = bin_of(&self.s_edges, d) {
                    self.counts[b] += 1;
                    self.moments.add(b, 1.0);
                }
            }
        }
        self.moments.commit();
        self.samples += 1;
    }

    pub fn finish(self) -> Result<PairCorrelation> {
        if self.samples < 2 {
            return Err(Error::InsufficientData("pair correlation needs at least 2 samples".into()));
        }
        let (mean, se) = self.moments.mean_and_stderr(self.samples);
        let disk = std::f64::consts::PI * self.center_radius * self.center_radius;
        let mut r2 = Vec::with_capacity(mean.len());
        let mut r2_stderr = Vec::with_capacity(mean.len());
        for (b, w) in self.s_edges.windows(2).enumerate() {
            let area = disk * std::f64::consts::PI * (w[1] * w[1] - w[0] * w[0]);
            if self.counts[b] == 0 {
                r2.push(None);
                r2_stderr.push(None);
            } else {
                r2.push(Some(mean[b] / area));
                r2_stderr.push(Some(se[b] / area));
            }
        }
        Ok(PairCorrelation {
            z0: [self.z0.re, self.z0.im],
            center_radius: self.center_radius,
            s_edges: self.s_edges,
            samples: self.samples,
            counts: self.counts,
            r2,
            r2_stderr,
        })
    }
}

/// Ordered pairs with the first point within `center_radius` of z0, binned
/// by their distance.
pub fn estimate_pair_correlation<I>(
    spectra: I,
    z0: Complex64,
    center_radius: f64,
    s_edges: Vec<f64>,
) -> Result<PairCorrelation>
where
    I: IntoIterator<Item = Result<Spectrum>>,
{
    let mut acc = PairAccumulator::new(z0, center_radius, s_edges)?;
    for s in spectra {
        acc.push(&s?);
    }
    acc.finish()
}

// ---------------------------------------------------------------------------
// Gap probability

/// Empirical H(s): fraction of eigenvalues near the origin whose nearest
/// neighbour is farther than s.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GapEstimate {
    pub s_grid: Vec<f64>,
    pub h: Vec<f64>,
    pub stderr: Vec<f64>,
    pub events: u64,
    pub samples: u64,
}

/// Streaming accumulator behind [`estimate_gap`].
#[derive(Clone, Debug)]
pub struct GapAccumulator {
    s_grid: Vec<f64>,
    center_radius: f64,
    survivors: Moments,
    // per-sample Σ n_i, Σ n_i², Σ n_i c_i(s)
    events: u64,
    events_sq: f64,
    cross: Vec<f64>,
    samples: u64,
}

impl GapAccumulator {
    pub fn new(s_grid: Vec<f64>, center_radius: f64) -> Result<Self> {
        if s_grid.is_empty() || s_grid[0] < 0.0 {
            return Err(invalid("gap grid must be nonempty and nonnegative"));
        }
        if s_grid.len() > 1 {
            check_edges(&s_grid, "gap grid")?;
        }
        if !(center_radius > 0.0) || !center_radius.is_finite() {
            return Err(invalid(format!("centre radius must be positive, got {center_radius}")));
        }
        let bins = s_grid.len();
        Ok(GapAccumulator {
            s_grid,
            center_radius,
            survivors: Moments::new(bins),
            events: 0,
            events_sq: 0.0,
            cross: vec![0.0; bins],
            samples: 0,
        })
    }

    pub fn push(&mut self, s: &Spectrum) {
        let eigs = s.eigenvalues();
        let mut n_i = 0u64;
        for (i, &c) in eigs.iter().enumerate() {
            if c.norm() >= self.center_radius {
                continue;
            }
            n_i += 1;
            let nn = eigs
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, &p)| (p - c).norm())
                .fold(f64::INFINITY, f64::min);
            for (k, &sk) in self.s_grid.iter().enumerate() {
                if nn > sk {
                    self.survivors.add(k, 1.0);
                } else {
                    break;
                }
            }
        }
        for &k in &self.survivors.touched {
            self.cross[k] += n_i as f64 * self.survivors.scratch[k];
        }
        self.survivors.commit();
        self.events += n_i;
        self.events_sq += (n_i * n_i) as f64;
        self.samples += 1;
    }

    pub fn finish(self) -> Result<GapEstimate> {
        if self.events < MIN_GAP_EVENTS {
            return Err(Error::InsufficientData(format!(
                "gap estimate needs at least {MIN_GAP_EVENTS} conditioning events, got {}",
                self.events
            )));
        }
        let n = self.samples as f64;
        let mean_n = self.events as f64 / n;
        let var_n = self.events_sq / n - mean_n * mean_n;
        let mut h = Vec::with_capacity(self.s_grid.len());
        let mut stderr = Vec::with_capacity(self.s_grid.len());
        for k in 0..self.s_grid.len() {
            let mean_c = self.survivors.sum[k] / n;
            let ratio = mean_c / mean_n;
            // delta method for a ratio of means: Var(c − R n)/(n N̄²)
            let var_c = self.survivors.sum_sq[k] / n - mean_c * mean_c;
            let cov = self.cross[k] / n - mean_c * mean_n;
            let var = (var_c - 2.0 * ratio * cov + ratio * ratio * var_n).max(0.0) * n / (n - 1.0).max(1.0);
            h.push(ratio);
            stderr.push((var / n).sqrt() / mean_n);
        }
        Ok(GapEstimate { s_grid: self.s_grid, h, stderr, events: self.events, samples: self.samples })
    }
}

/// Empirical gap probability at the origin from all eigenvalues within
/// `center_radius` of it.
pub fn estimate_gap<I>(spectra: I, s_grid: Vec<f64>, center_radius: f64) -> Result<GapEstimate>
where
    I: IntoIterator<Item = Result<Spectrum>>,
{
    let mut acc = GapAccumulator::new(s_grid, center_radius)?;
    for s in spectra {
        acc.push(&s?);
    }
    acc.finish()
}

// ---------------------------------------------------------------------------
// Reports

/// One exact-versus-empirical comparison.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub statistic: String,
    pub grid: Vec<f64>,
    pub exact: Vec<f64>,
    pub estimate: Vec<f64>,
    pub stderr: Vec<f64>,
    pub z: Vec<f64>,
    pub pass: bool,
    pub seed: u64,
    pub samples: u64,
    pub threshold: f64,
}

impl VerificationReport {
    pub fn max_abs_z(&self) -> f64 {
        self.z.iter().fold(0.0, |m, z| m.max(z.abs()))
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

fn z_score(exact: f64, estimate: f64, stderr: f64) -> f64 {
    let diff = estimate - exact;
    if stderr > 0.0 {
        diff / stderr
    } else if diff == 0.0 {
        0.0
    } else {
        diff.signum() * f64::MAX
    }
}

/// Measured values to compare with an exact curve.
#[derive(Clone, Debug, PartialEq)]
pub struct Empirical {
    pub grid: Vec<f64>,
    pub estimate: Vec<f64>,
    pub stderr: Vec<f64>,
    pub seed: u64,
    pub samples: u64,
}

/// Per-bin z-scores; passes iff every |z| ≤ threshold and at most 5% of
/// bins have |z| in (threshold − 1, threshold].
pub fn compare(statistic: &str, exact: &[f64], empirical: Empirical, threshold: f64) -> Result<VerificationReport> {
    let n = exact.len();
    if n == 0 || empirical.grid.len() != n || empirical.estimate.len() != n || empirical.stderr.len() != n {
        return Err(invalid(format!(
            "grid mismatch: {} exact values, {} grid points, {} estimates, {} errors",
            n,
            empirical.grid.len(),
            empirical.estimate.len(),
            empirical.stderr.len()
        )));
    }
    if !(threshold > 1.0) || !threshold.is_finite() {
        return Err(invalid(format!("z threshold must exceed 1, got {threshold}")));
    }
    if exact.iter().chain(&empirical.estimate).any(|v| !v.is_finite())
        || empirical.stderr.iter().any(|s| !(*s >= 0.0) || !s.is_finite())
    {
        return Err(invalid("values must be finite and errors nonnegative"));
    }
    let z: Vec<f64> = (0..n).map(|i| z_score(exact[i], empirical.estimate[i], empirical.stderr[i])).collect();
    let within = z.iter().all(|v| v.abs() <= threshold);
    let marginal = z.iter().filter(|v| v.abs() > threshold - 1.0 && v.abs() <= threshold).count();
    let pass = within && (marginal as f64) <= 0.05 * n as f64;
    Ok(VerificationReport {
        statistic: statistic.to_string(),
        grid: empirical.grid,
        exact: exact.to_vec(),
        estimate: empirical.estimate,
        stderr: empirical.stderr,
        z,
        pass,
        seed: empirical.seed,
        samples: empirical.samples,
        threshold,
    })
}
