//! Ensemble descriptions, matrix samplers and eigenvalue extraction.

mod csv_io;
mod sampler;
mod spectrum;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

pub use csv_io::{group_rows, read_spectra_csv, write_spectra_csv, EigenKind, SpectrumRow};
pub use sampler::{
    haar_unitary, sample_complex_elliptic, sample_matrix, sample_quaternion_elliptic, sample_real_elliptic, substream,
    ComplexMatrix,
};
pub use spectrum::{sample_spectra, spectrum, SamplerConfig, Spectrum, SpectrumStream};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryClass {
    Complex,
    Real,
    Quaternion,
}

impl SymmetryClass {
    pub fn name(self) -> &'static str {
        match self {
            SymmetryClass::Complex => "complex",
            SymmetryClass::Real => "real",
            SymmetryClass::Quaternion => "quaternion",
        }
    }
}

impl std::str::FromStr for SymmetryClass {
    type Err = crate::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complex" => Ok(SymmetryClass::Complex),
            "real" => Ok(SymmetryClass::Real),
            "quaternion" | "qu-r" => Ok(SymmetryClass::Quaternion),
            other => Err(invalid(format!("unknown symmetry class '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Variant {
    Circular,
    Elliptic { tau: f64 },
    TruncatedUnitary { m: usize, l: usize },
}

/// Which ensemble a sampler or kernel refers to. Construct with
/// [`EnsembleSpec::new`], which enforces the parameter invariants.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnsembleSpec {
    class: SymmetryClass,
    variant: Variant,
    dim: usize,
}

impl EnsembleSpec {
    pub fn new(class: SymmetryClass, variant: Variant, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(invalid("dim must be at least 1"));
        }
        if class == SymmetryClass::Quaternion && dim % 2 == 1 {
            return Err(invalid("dim must be even"));
        }
        match variant {
            Variant::Circular => {}
            Variant::Elliptic { tau } => {
                let ok = match class {
                    SymmetryClass::Complex => (0.0..1.0).contains(&tau),
                    _ => tau > -1.0 && tau < 1.0,
                };
                if !ok {
                    let range = if class == SymmetryClass::Complex { "[0, 1)" } else { "(-1, 1)" };
                    return Err(invalid(format!("tau = {tau} outside {range} for the {} class", class.name())));
                }
            }
            Variant::TruncatedUnitary { m, l } => {
                if class != SymmetryClass::Complex {
                    return Err(invalid("truncated unitary ensembles are complex only"));
                }
                if m != dim {
                    return Err(invalid(format!("truncation size M = {m} must equal dim = {dim}")));
                }
                if l == 0 {
                    return Err(invalid("truncation needs L >= 1"));
                }
            }
        }
        Ok(EnsembleSpec { class, variant, dim })
    }

    pub fn circular(class: SymmetryClass, dim: usize) -> Result<Self> {
        Self::new(class, Variant::Circular, dim)
    }

    pub fn elliptic(class: SymmetryClass, dim: usize, tau: f64) -> Result<Self> {
        Self::new(class, Variant::Elliptic { tau }, dim)
    }

    pub fn truncated_unitary(m: usize, l: usize) -> Result<Self> {
        Self::new(SymmetryClass::Complex, Variant::TruncatedUnitary { m, l }, m)
    }

    pub fn class(&self) -> SymmetryClass {
        self.class
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// τ of the elliptic variant, 0 for circular ensembles.
    pub fn tau(&self) -> f64 {
        match self.variant {
            Variant::Elliptic { tau } => tau,
            _ => 0.0,
        }
    }
}

impl<'de> Deserialize<'de> for EnsembleSpec {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            class: SymmetryClass,
            variant: Variant,
            dim: usize,
        }
        let raw = Raw::deserialize(d)?;
        EnsembleSpec::new(raw.class, raw.variant, raw.dim).map_err(serde::de::Error::custom)
    }
}
