//! Batch front-end for the transparency toolkit: sweep configuration,
//! machine-readable reports, the sweep runner, the entanglement-protection
//! demo, and decomposition certificates.

pub mod certify;
pub mod config;
pub mod demo;
pub mod report;
pub mod runner;

pub use config::{OutputFormat, SweepConfig, SystemNoiseKind};
pub use report::{ReportRecord, SweepReport, SweepSummary};
pub use runner::run_transparency_sweep;
