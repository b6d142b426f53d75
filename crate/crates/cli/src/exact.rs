use ginlab::config::{Dim, RunConfig};
use ginlab::det_kernels::{ginibre_edge_profile, weak_density, DetKernel, WeakLimitContext};
use ginlab::ensembles::{EnsembleSpec, SymmetryClass, Variant};
use ginlab::gap_stats::{GapCurve, GapModel};
use ginlab::mc_verify::ExactDensity;
use ginlab::pfaff_kernels::{weak_density_profile, PfaffKernel};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::args::Curve;
use crate::{Failure, Outcome};

const MAX_GRID_POINTS: usize = 10_000_000;

pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn to_json(&self) -> Value {
        json!({ "columns": self.columns, "rows": self.rows })
    }
}

/// `round((max − min)/step) + 1` points starting at `min`.
fn grid(cfg: &RunConfig, min: f64, max: f64, step: f64) -> Outcome<Vec<f64>> {
    let (min, max, step) = (cfg.grid_min.unwrap_or(min), cfg.s_max.unwrap_or(max), cfg.step.unwrap_or(step));
    if !(step > 0.0) || !min.is_finite() || !max.is_finite() || !step.is_finite() || max < min {
        return Err(Failure::Usage(format!("grid needs min <= max and step > 0, got min={min} max={max} step={step}")));
    }
    let count = ((max - min) / step).round() + 1.0;
    if count > MAX_GRID_POINTS as f64 {
        return Err(Failure::Usage(format!("grid would have {count} points, more than {MAX_GRID_POINTS}")));
    }
    Ok((0..count as usize).map(|i| min + i as f64 * step).collect())
}

fn finite_spec(cfg: &RunConfig, curve: &str) -> Outcome<EnsembleSpec> {
    if cfg.dim() == Dim::Infinite {
        return Err(Failure::Usage(format!("dim 'inf' is only valid for the gap and nn curves, not {curve}")));
    }
    Ok(cfg.ensemble()?)
}

fn incompatible(curve: &str, what: &str) -> Failure {
    Failure::Usage(format!("the {curve} curve needs {what}"))
}

pub fn tabulate(curve: Curve, cfg: &RunConfig) -> Outcome<Table> {
    match curve {
        Curve::Density => density(cfg),
        Curve::RealDensity => {
            let spec = finite_spec(cfg, "real_density")?;
            if spec.class() != SymmetryClass::Real {
                return Err(incompatible("real_density", "--class real"));
            }
            let edge = (spec.dim() as f64).sqrt() * (1.0 + spec.tau().abs()) + 2.0;
            let exact = ExactDensity::new(&spec)?;
            let rows = grid(cfg, -edge, edge, 0.1)?
                .into_iter()
                .map(|x| Ok(vec![x, exact.real_axis(x)?]))
                .collect::<ginlab::Result<_>>()?;
            Ok(Table { columns: vec!["x", "density"], rows })
        }
        Curve::Edge => {
            let spec = finite_spec(cfg, "edge")?;
            if spec.class() != SymmetryClass::Complex || spec.variant() != Variant::Circular {
                return Err(incompatible("edge", "the complex circular ensemble"));
            }
            let kernel = DetKernel::from_spec(&spec)?;
            let r0 = (spec.dim() as f64).sqrt();
            let rows = grid(cfg, -3.0, 3.0, 0.1)?
                .into_iter()
                .map(|x| Ok(vec![x, kernel.density(Complex64::new(r0 + x, 0.0))?, ginibre_edge_profile(x)]))
                .collect::<ginlab::Result<_>>()?;
            Ok(Table { columns: vec!["x", "density", "erfc_profile"], rows })
        }
        Curve::Gap | Curve::Nn => {
            let model = match cfg.dim() {
                Dim::Infinite => {
                    if cfg.class() != SymmetryClass::Complex
                        || cfg.variant.is_some_and(|v| v != ginlab::config::VariantName::Circular)
                    {
                        return Err(incompatible("gap", "the complex circular ensemble when dim is inf"));
                    }
                    GapModel::Ginibre(None)
                }
                Dim::Finite(_) => GapModel::from_spec(&cfg.ensemble()?).map_err(|e| {
                    Failure::Usage(format!("gap curves need the complex circular or truncated ensemble: {e}"))
                })?,
            };
            let s_max = if matches!(model, GapModel::Truncation { .. }) { 0.99 } else { 3.0 };
            let g = grid(cfg, 0.0, s_max, 0.01)?;
            let gc = GapCurve::compute(model, g)?;
            let rows = if curve == Curve::Gap {
                gc.s_grid().iter().zip(gc.h_values()).map(|(&s, &h)| vec![s, h]).collect()
            } else {
                gc.s_grid().iter().zip(gc.nn_density()?).map(|(&s, p)| vec![s, p]).collect()
            };
            Ok(Table { columns: vec!["s", if curve == Curve::Gap { "h" } else { "p" }], rows })
        }
        Curve::WeakDensity => {
            let a = cfg.a.unwrap_or(1.0);
            let ys = grid(cfg, 0.0, 3.0, 0.05)?;
            match cfg.class() {
                SymmetryClass::Complex => {
                    let n = match cfg.dim() {
                        Dim::Finite(n) => n,
                        Dim::Infinite => 1,
                    };
                    let ctx = WeakLimitContext::new(a, 0.0, n)?;
                    let rows = ys
                        .into_iter()
                        .map(|y| Ok(vec![y, weak_density(&ctx, Complex64::new(0.0, y))?]))
                        .collect::<ginlab::Result<_>>()?;
                    Ok(Table { columns: vec!["y", "density"], rows })
                }
                class => {
                    let rows = ys
                        .into_iter()
                        .map(|y| {
                            let (singular, smooth) = weak_density_profile(class, y, a)?;
                            Ok(vec![y, singular, smooth])
                        })
                        .collect::<ginlab::Result<_>>()?;
                    Ok(Table { columns: vec!["y", "singular", "smooth"], rows })
                }
            }
        }
        Curve::KernelSlice => {
            let spec = finite_spec(cfg, "kernel_slice")?;
            let im = cfg.im.unwrap_or(0.0);
            let origin = Complex64::new(0.0, 0.0);
            let xs = grid(cfg, 0.0, 3.0, 0.1)?;
            let values: Vec<Complex64> = if spec.class() == SymmetryClass::Complex {
                let k = DetKernel::from_spec(&spec)?;
                xs.iter().map(|&x| k.kernel(Complex64::new(x, im), origin)).collect::<ginlab::Result<_>>()?
            } else {
                let k = PfaffKernel::from_spec(&spec)?;
                xs.iter().map(|&x| k.kernel(Complex64::new(x, im), origin)).collect::<ginlab::Result<_>>()?
            };
            let rows = xs.iter().zip(values).map(|(&x, v)| vec![x, v.re, v.im]).collect();
            Ok(Table { columns: vec!["x", "re", "im"], rows })
        }
    }
}

/// Density at t + i·im; with im = 0 the real and quaternion classes report
/// the density of real eigenvalues.
fn density(cfg: &RunConfig) -> Outcome<Table> {
    let spec = finite_spec(cfg, "density")?;
    let im = cfg.im.unwrap_or(0.0);
    let max = match spec.variant() {
        Variant::TruncatedUnitary { .. } => 0.99,
        _ => (spec.dim() as f64).sqrt() * (1.0 + spec.tau().abs()) + 2.0,
    };
    let exact = ExactDensity::new(&spec)?;
    let on_axis = im == 0.0 && spec.class() != SymmetryClass::Complex;
    let rows = grid(cfg, 0.0, max, 0.1)?
        .into_iter()
        .map(|x| {
            let v = if on_axis { exact.real_axis(x)? } else { exact.plane(Complex64::new(x, im))? };
            Ok(vec![x, v])
        })
        .collect::<ginlab::Result<_>>()?;
    Ok(Table { columns: vec!["x", "density"], rows })
}
