//! Run configuration shared by the command-line tool: an optional JSON file
//! whose keys are the long flag names, overlaid by explicit flags.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use sha2::{Digest, Sha256};

use crate::ensembles::{EnsembleSpec, SymmetryClass, Variant};
use crate::error::{invalid, Error, Result};

/// Environment variable consulted when no seed is given.
pub const SEED_ENV: &str = "GINLAB_SEED";

pub const DEFAULT_DIM: usize = 64;
pub const DEFAULT_SAMPLES: u64 = 1000;

/// Library version embedded in every output header.
pub fn library_version() -> &'static str {
    env!("CARGO_PKG_VERSION")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VariantName {
    Circular,
    Elliptic,
    Truncated,
}

impl FromStr for VariantName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "circular" => Ok(VariantName::Circular),
            "elliptic" => Ok(VariantName::Elliptic),
            "truncated" | "truncated_unitary" => Ok(VariantName::Truncated),
            other => Err(invalid(format!("unknown variant '{other}'"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(invalid(format!("unknown output format '{other}'"))),
        }
    }
}

/// A matrix dimension, or `inf` for the N → ∞ gap curves.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dim {
    Finite(usize),
    Infinite,
}

impl FromStr for Dim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "inf" {
            return Ok(Dim::Infinite);
        }
        s.parse::<usize>()
            .map(Dim::Finite)
            .map_err(|_| invalid(format!("dim must be a positive integer or 'inf', got '{s}'")))
    }
}

impl fmt::Display for Dim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dim::Finite(n) => write!(f, "{n}"),
            Dim::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Dim {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Dim::Finite(n) => s.serialize_u64(*n as u64),
            Dim::Infinite => s.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for Dim {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Number(u64),
            Text(String),
        }
        match Raw::deserialize(d)? {
            Raw::Number(n) => usize::try_from(n).map(Dim::Finite).map_err(serde::de::Error::custom),
            Raw::Text(t) => t.parse().map_err(serde::de::Error::custom),
        }
    }
}

/// Every setting is optional so that a file and the flags can be merged.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub class: Option<SymmetryClass>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub variant: Option<VariantName>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<Dim>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trunc_m: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trunc_l: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid_min: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_max: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub im: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_threshold: Option<f64>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("config file: {e}")))
    }

    /// Values set in `other` replace those in `self`.
    pub fn overlay(self, other: RunConfig) -> RunConfig {
        macro_rules! pick {
            ($($f:ident),*) => { RunConfig { $($f: other.$f.or(self.$f)),* } };
        }
        pick!(
            class,
            variant,
            dim,
            tau,
            trunc_m,
            trunc_l,
            seed,
            samples,
            workers,
            out,
            format,
            grid_min,
            s_max,
            step,
            im,
            a,
            z_threshold
        )
    }

    /// Fill the seed from [`SEED_ENV`] when neither file nor flags set it.
    pub fn with_env_seed(mut self, env_value: Option<&str>) -> Result<Self> {
        if self.seed.is_none() {
            if let Some(v) = env_value {
                let seed = v
                    .trim()
                    .parse()
                    .map_err(|_| invalid(format!("{SEED_ENV} must be an unsigned integer, got '{v}'")))?;
                self.seed = Some(seed);
            }
        }
        Ok(self)
    }

    pub fn class(&self) -> SymmetryClass {
        self.class.unwrap_or(SymmetryClass::Complex)
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(0)
    }

    pub fn samples(&self) -> Result<u64> {
        match self.samples.unwrap_or(DEFAULT_SAMPLES) {
            0 => Err(invalid("samples must be at least 1")),
            n => Ok(n),
        }
    }

    pub fn workers(&self) -> Result<usize> {
        match self.workers.unwrap_or(1) {
            0 => Err(invalid("workers must be at least 1")),
            n => Ok(n),
        }
    }

    pub fn dim(&self) -> Dim {
        self.dim.unwrap_or(match (self.variant, self.trunc_m) {
            (Some(VariantName::Truncated), Some(m)) => Dim::Finite(m),
            _ => Dim::Finite(DEFAULT_DIM),
        })
    }

    /// The ensemble these settings describe; `inf` is rejected here.
    pub fn ensemble(&self) -> Result<EnsembleSpec> {
        let dim = match self.dim() {
            Dim::Finite(n) => n,
            Dim::Infinite => return Err(invalid("dim 'inf' is only valid for the gap and nn curves")),
        };
        let variant =
            self.variant.unwrap_or(if self.tau.is_some() { VariantName::Elliptic } else { VariantName::Circular });
        let variant = match variant {
            VariantName::Circular => {
                if self.tau.is_some_and(|t| t != 0.0) {
                    return Err(invalid("--tau needs the elliptic variant"));
                }
                Variant::Circular
            }
            VariantName::Elliptic => {
                Variant::Elliptic { tau: self.tau.ok_or_else(|| invalid("elliptic variant needs --tau"))? }
            }
            VariantName::Truncated => Variant::TruncatedUnitary {
                m: self.trunc_m.unwrap_or(dim),
                l: self.trunc_l.ok_or_else(|| invalid("truncated variant needs --trunc-l"))?,
            },
        };
        EnsembleSpec::new(self.class(), variant, dim)
    }

    /// SHA-256 over the settings that determine the output, as hex. The
    /// output path and worker count are excluded: they never change the
    /// bytes written.
    pub fn hash(&self) -> String {
        let canonical = RunConfig { out: None, workers: None, ..self.clone() };
        let json = serde_json::to_string(&canonical).expect("config serializes");
        let digest = Sha256::digest(json.as_bytes());
        digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_keys_match_flag_names() {
        let cfg = RunConfig::from_json(r#"{"class": "real", "dim": 20, "trunc-l": 3, "s-max": 2.5, "format": "json"}"#)
            .unwrap();
        assert_eq!(cfg.class, Some(SymmetryClass::Real));
        assert_eq!(cfg.dim, Some(Dim::Finite(20)));
        assert_eq!(cfg.trunc_l, Some(3));
        assert_eq!(cfg.s_max, Some(2.5));
        assert!(RunConfig::from_json(r#"{"dimension": 3}"#).is_err());
        assert_eq!(RunConfig::from_json(r#"{"dim": "inf"}"#).unwrap().dim, Some(Dim::Infinite));
        assert!(RunConfig::from_json(r#"{"dim": -3}"#).is_err());
    }

    #[test]
    fn flags_override_file_and_env() {
        let file = RunConfig { seed: Some(1), dim: Some(Dim::Finite(8)), ..Default::default() };
        let flags = RunConfig { seed: Some(2), ..Default::default() };
        let merged = file.clone().overlay(flags);
        assert_eq!((merged.seed, merged.dim), (Some(2), Some(Dim::Finite(8))));
        assert_eq!(file.with_env_seed(Some("9")).unwrap().seed, Some(1));
        assert_eq!(RunConfig::default().with_env_seed(Some("9")).unwrap().seed, Some(9));
        assert!(RunConfig::default().with_env_seed(Some("x")).is_err());
    }

    #[test]
    fn ensemble_resolution() {
        let cfg = RunConfig { class: Some(SymmetryClass::Quaternion), dim: Some(Dim::Finite(7)), ..Default::default() };
        assert!(cfg.ensemble().unwrap_err().to_string().contains("dim must be even"));
        let cfg = RunConfig { tau: Some(0.5), ..Default::default() };
        assert_eq!(cfg.ensemble().unwrap().variant(), Variant::Elliptic { tau: 0.5 });
        let cfg = RunConfig {
            variant: Some(VariantName::Truncated),
            trunc_m: Some(5),
            trunc_l: Some(3),
            ..Default::default()
        };
        assert_eq!(cfg.ensemble().unwrap().dim(), 5);
        let cfg = RunConfig { variant: Some(VariantName::Elliptic), ..Default::default() };
        assert!(cfg.ensemble().is_err());
    }

    #[test]
    fn hash_ignores_output_location() {
        let a = RunConfig { seed: Some(3), out: Some("a.csv".into()), workers: Some(4), ..Default::default() };
        let b = RunConfig { seed: Some(3), ..Default::default() };
        let c = RunConfig { seed: Some(4), ..Default::default() };
        assert_eq!(a.hash(), b.hash());
        assert_ne!(a.hash(), c.hash());
        assert_eq!(a.hash().len(), 16);
    }
}
