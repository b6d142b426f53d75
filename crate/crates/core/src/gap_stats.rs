//! Gap probabilities H(s) at the origin and the nearest-neighbour spacing
//! density p(s) = −dH/ds for the complex Ginibre and truncated unitary
//! ensembles.
//!
//! Both are products over the rotation-invariant radial factors: for
//! Ginibre H(s) = Π_{n=1}^{N−1} Q(n+1, s²), for truncations
//! H(s) = Π_{m=1}^{M−1} (1 − I_{s²}(m+1, L)).

use crate::ensembles::EnsembleSpec;
use crate::error::{invalid, Result};
use crate::specfun::{
    ln_factorial, ln_gamma, regularized_incomplete_beta, regularized_lower_gamma, regularized_upper_gamma,
};

/// Default cutoff for the infinite Ginibre product: factors with
/// 1 − Q(n+1, s²) below this are dropped.
pub const DEFAULT_TRUNCATION: f64 = 1e-16;

/// Which product a gap curve is built from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GapModel {
    /// Complex Ginibre; `None` is the N → ∞ limit.
    Ginibre(Option<usize>),
    /// Truncation of an (M+L)-dimensional Haar unitary to its M×M corner.
    Truncation { m: usize, l: usize },
}

impl GapModel {
    pub fn from_spec(spec: &EnsembleSpec) -> Result<Self> {
        use crate::ensembles::{SymmetryClass, Variant};
        match (spec.class(), spec.variant()) {
            (SymmetryClass::Complex, Variant::Circular) => Ok(GapModel::Ginibre(Some(spec.dim()))),
            (SymmetryClass::Complex, Variant::TruncatedUnitary { m, l }) => Ok(GapModel::Truncation { m, l }),
            _ => Err(invalid("gap probabilities exist for complex Ginibre and truncated unitary only")),
        }
    }

    /// Largest admissible s, exclusive for truncations.
    pub fn s_limit(&self) -> f64 {
        match self {
            GapModel::Ginibre(_) => f64::INFINITY,
            GapModel::Truncation { .. } => 1.0,
        }
    }

    pub fn gap(&self, s: f64) -> Result<f64> {
        match *self {
            GapModel::Ginibre(n) => gap_ginibre(n, s),
            GapModel::Truncation { m, l } => gap_truncation(m, l, s),
        }
    }

    pub fn nn_density(&self, s: f64) -> Result<f64> {
        match *self {
            GapModel::Ginibre(n) => nn_density_ginibre(n, s),
            GapModel::Truncation { m, l } => nn_density_truncation(m, l, s),
        }
    }
}

fn check_s(s: f64) -> Result<()> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(invalid(format!("s must be finite and nonnegative, got {s}")));
    }
    Ok(())
}

fn check_n(n: Option<usize>) -> Result<()> {
    if n == Some(0) {
        return Err(invalid("N must be at least 1"));
    }
    Ok(())
}

/// Indices n = 1, 2, … of the Ginibre product together with ln Q(n+1, s²),
/// stopped at N−1 or once P = 1 − Q falls below `cutoff`.
fn ginibre_factors(n: Option<usize>, x: f64, cutoff: f64) -> Result<Vec<(u32, f64)>> {
    let last = n.map_or(u32::MAX, |n| n.saturating_sub(1).min(u32::MAX as usize) as u32);
    let mut out = Vec::new();
    let mut k = 1u32;
    while k <= last {
        let p = regularized_lower_gamma(k + 1, x)?;
        // P(n+1, x) decreases in n, so every later factor is closer to one
        if k as f64 > x && p < cutoff {
            break;
        }
        let ln_q = if p < 0.5 { (-p).ln_1p() } else { regularized_upper_gamma(k + 1, x)?.ln() };
        out.push((k, ln_q));
        k += 1;
    }
    Ok(out)
}

/// ln H(s) for Ginibre with an explicit truncation cutoff.
pub fn ln_gap_ginibre_with_cutoff(n: Option<usize>, s: f64, cutoff: f64) -> Result<f64> {
    check_n(n)?;
    check_s(s)?;
    if !(cutoff > 0.0 && cutoff < 1.0) {
        return Err(invalid(format!("cutoff must lie in (0, 1), got {cutoff}")));
    }
    let x = s * s;
    // finite N uses a cutoff far below double resolution
    let cutoff = if n.is_some() { cutoff.min(1e-300) } else { cutoff };
    Ok(ginibre_factors(n, x, cutoff)?.iter().map(|&(_, ln_q)| ln_q).sum())
}

/// H(s) = Π_{n=1}^{N−1} Q(n+1, s²); `None` gives the N → ∞ product.
pub fn gap_ginibre(n: Option<usize>, s: f64) -> Result<f64> {
    Ok(ln_gap_ginibre_with_cutoff(n, s, DEFAULT_TRUNCATION)?.exp())
}

/// p(s) = −dH/ds by logarithmic differentiation, using
/// dQ(n, x)/dx = −e^{−x} x^{n−1}/Γ(n).
pub fn nn_density_ginibre(n: Option<usize>, s: f64) -> Result<f64> {
    check_n(n)?;
    check_s(s)?;
    if s == 0.0 {
        return Ok(0.0);
    }
    let x = s * s;
    let cutoff = if n.is_some() { 1e-300 } else { DEFAULT_TRUNCATION };
    let factors = ginibre_factors(n, x, cutoff)?;
    let mut ln_h = 0.0;
    let mut slope = 0.0;
    for &(k, ln_q) in &factors {
        ln_h += ln_q;
        // −d ln Q(k+1, s²)/ds = 2s e^{−x} x^k / (k! Q)
        slope += (2f64.ln() + s.ln() - x + k as f64 * x.ln() - ln_factorial(k as u64) - ln_q).exp();
    }
    Ok(ln_h.exp() * slope)
}

fn check_truncation(m: usize, l: usize, s: f64) -> Result<()> {
    if m == 0 || l == 0 {
        return Err(invalid(format!("truncation needs M, L >= 1, got M = {m}, L = {l}")));
    }
    if m > u32::MAX as usize || l > u32::MAX as usize {
        return Err(invalid("truncation sizes exceed the supported range"));
    }
    if !(0.0..1.0).contains(&s) {
        return Err(invalid(format!("truncation gap needs 0 <= s < 1, got {s}")));
    }
    Ok(())
}

/// ln(1 − I_x(a, b)), taking the complement directly once I passes ½.
fn ln_beta_complement(x: f64, a: u32, b: u32) -> Result<f64> {
    let i = regularized_incomplete_beta(x, a, b)?;
    if i < 0.5 {
        Ok((-i).ln_1p())
    } else {
        Ok(regularized_incomplete_beta(1.0 - x, b, a)?.ln())
    }
}

/// H(s) = Π_{m=1}^{M−1} (1 − I_{s²}(m+1, L)) for 0 ≤ s < 1.
pub fn gap_truncation(m: usize, l: usize, s: f64) -> Result<f64> {
    check_truncation(m, l, s)?;
    let x = s * s;
    let mut ln_h = 0.0;
    for k in 1..m {
        ln_h += ln_beta_complement(x, k as u32 + 1, l as u32)?;
    }
    Ok(ln_h.exp())
}

/// p(s) = −dH/ds for the truncation product, with
/// dI_x(a, b)/dx = x^{a−1}(1−x)^{b−1}/B(a, b).
pub fn nn_density_truncation(m: usize, l: usize, s: f64) -> Result<f64> {
    check_truncation(m, l, s)?;
    if s == 0.0 {
        return Ok(0.0);
    }
    let x = s * s;
    let b = l as f64;
    let mut ln_h = 0.0;
    let mut slope = 0.0;
    for k in 1..m {
        let a = k as f64 + 1.0;
        let ln_q = ln_beta_complement(x, k as u32 + 1, l as u32)?;
        ln_h += ln_q;
        let ln_beta = ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b);
        slope += (2f64.ln() + s.ln() + (a - 1.0) * x.ln() + (b - 1.0) * (-x).ln_1p() - ln_beta - ln_q).exp();
    }
    Ok(ln_h.exp() * slope)
}

/// H sampled on a grid of s values.
#[derive(Clone, Debug, PartialEq)]
pub struct GapCurve {
    model: GapModel,
    s_grid: Vec<f64>,
    h_values: Vec<f64>,
}

impl GapCurve {
    /// Evaluate H on an increasing grid of nonnegative s.
    pub fn compute(model: GapModel, s_grid: Vec<f64>) -> Result<Self> {
        if s_grid.is_empty() {
            return Err(invalid("gap curve needs at least one grid point"));
        }
        if s_grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("gap grid must be strictly increasing"));
        }
        let mut h_values = s_grid.iter().map(|&s| model.gap(s)).collect::<Result<Vec<_>>>()?;
        // rounding may break monotonicity by an ulp where H is flat
        for i in 1..h_values.len() {
            h_values[i] = h_values[i].min(h_values[i - 1]);
        }
        Ok(GapCurve { model, s_grid, h_values })
    }

    pub fn model(&self) -> GapModel {
        self.model
    }

    /// The ensemble this curve describes; `None` for the infinite Ginibre limit.
    pub fn ensemble(&self) -> Option<EnsembleSpec> {
        match self.model {
            GapModel::Ginibre(Some(n)) => EnsembleSpec::circular(crate::ensembles::SymmetryClass::Complex, n).ok(),
            GapModel::Ginibre(None) => None,
            GapModel::Truncation { m, l } => EnsembleSpec::truncated_unitary(m, l).ok(),
        }
    }

    pub fn s_grid(&self) -> &[f64] {
        &self.s_grid
    }

    pub fn h_values(&self) -> &[f64] {
        &self.h_values
    }

    /// p(s) on the same grid.
    pub fn nn_density(&self) -> Result<Vec<f64>> {
        self.s_grid.iter().map(|&s| self.model.nn_density(s)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ginibre_small_s_series() {
        assert_eq!(gap_ginibre(None, 0.0).unwrap(), 1.0);
        let s: f64 = 0.1;
        let series = 1.0 - s.powi(4) / 2.0 + s.powi(6) / 6.0 - s.powi(8) / 24.0;
        assert!((gap_ginibre(None, s).unwrap() - series).abs() < 1e-11);
        let p = nn_density_ginibre(None, 0.05).unwrap();
        assert!((p / (2.0 * 0.05f64.powi(3)) - 1.0).abs() < 1e-2);
        assert_eq!(nn_density_ginibre(None, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn ginibre_large_s() {
        // mpmath, 40 digits; the two leading terms alone are still 15% off at s = 3
        let ln_h = ln_gap_ginibre_with_cutoff(None, 3.0, DEFAULT_TRUNCATION).unwrap();
        assert!((ln_h / -25.569605946066024 - 1.0).abs() < 1e-12);
        let s: f64 = 5.0;
        let lead = -s.powi(4) / 4.0 - s * s * s.ln();
        let ln_h = ln_gap_ginibre_with_cutoff(None, s, DEFAULT_TRUNCATION).unwrap();
        assert!((ln_h / -178.88699724082383 - 1.0).abs() < 1e-12);
        assert!((ln_h / lead - 1.0).abs() < 0.1, "{ln_h} {lead}");
    }

    #[test]
    fn analytic_derivative_matches_finite_difference() {
        let h = 1e-5;
        for model in [GapModel::Ginibre(None), GapModel::Ginibre(Some(10)), GapModel::Truncation { m: 8, l: 5 }] {
            let s = if matches!(model, GapModel::Truncation { .. }) { 0.5 } else { 1.0 };
            let fd = (model.gap(s - h).unwrap() - model.gap(s + h).unwrap()) / (2.0 * h);
            let p = model.nn_density(s).unwrap();
            assert!((fd - p).abs() < 1e-7, "{model:?}: {fd} {p}");
        }
    }

    #[test]
    fn truncation_cutoff_is_stable() {
        for s in [0.5, 1.0, 2.0, 3.0] {
            let a = ln_gap_ginibre_with_cutoff(None, s, 1e-16).unwrap().exp();
            let b = ln_gap_ginibre_with_cutoff(None, s, 1e-14).unwrap().exp();
            assert!((a - b).abs() < 1e-12, "s={s}");
        }
    }

    #[test]
    fn finite_n_is_strictly_decreasing() {
        for n in [8usize, 20] {
            let mut prev = gap_ginibre(Some(n), 0.0).unwrap();
            for i in 1..=400 {
                let h = gap_ginibre(Some(n), i as f64 * 0.01).unwrap();
                assert!(h < prev, "n={n} s={}", i as f64 * 0.01);
                prev = h;
            }
        }
        assert_eq!(gap_ginibre(Some(1), 2.0).unwrap(), 1.0);
    }

    #[test]
    fn truncation_gap_values() {
        assert_eq!(gap_truncation(2, 3, 0.0).unwrap(), 1.0);
        // 1 − I_{0.25}(2, 3) = Σ_{j<2} C(4, j) x^j (1−x)^{4−j}
        let x: f64 = 0.25;
        let want = (1.0 - x).powi(4) + 4.0 * x * (1.0 - x).powi(3);
        assert!((gap_truncation(2, 3, 0.5).unwrap() - want).abs() < 1e-15);
        assert!(gap_truncation(2, 3, 1.0).is_err());
        for s in [0.5, 1.0, 2.0] {
            let t = gap_truncation(150, 150, s / 150f64.sqrt()).unwrap();
            assert!((t - gap_ginibre(None, s).unwrap()).abs() < 1e-2, "s={s}");
        }
    }

    #[test]
    fn curve_is_monotone() {
        let grid: Vec<f64> = (0..=300).map(|i| i as f64 * 0.01).collect();
        let curve = GapCurve::compute(GapModel::Ginibre(None), grid).unwrap();
        assert_eq!(curve.h_values()[0], 1.0);
        assert!(curve.h_values().windows(2).all(|w| w[1] <= w[0]));
        assert!(curve.ensemble().is_none());
        assert!(GapCurve::compute(GapModel::Ginibre(None), vec![0.2, 0.1]).is_err());
        let p = curve.nn_density().unwrap();
        assert!(p.iter().all(|&v| v >= 0.0));
    }
}
