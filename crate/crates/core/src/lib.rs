pub mod config;
pub mod det_kernels;
pub mod ensembles;
pub mod error;
pub mod gap_stats;
mod linalg;
pub mod mc_verify;
pub mod pfaff_kernels;
pub mod quadrature;
mod scaled;
pub mod specfun;

pub use error::{Error, Result};
