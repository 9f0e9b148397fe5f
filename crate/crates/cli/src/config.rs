//! Sweep configuration: defaults, TOML config files, and CLI overrides.
//!
//! The config file is a flat key-value document; any value given on the
//! command line replaces the file value.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use qct_core::channel::{named_channel, random_cptp, KrausChannel};
use qct_core::protocol::{AncillaNoiseKind, AncillaOrder, CorrectionVariant};
use qct_core::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Json,
    Csv,
}

impl OutputFormat {
    pub fn as_str(&self) -> &'static str {
        match self {
            Self::Json => "json",
            Self::Csv => "csv",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Self::Json),
            "csv" => Ok(Self::Csv),
            other => Err(Error::InvalidParam(format!(
                "unknown output format '{other}' (expected json|csv)"
            ))),
        }
    }
}

/// System-noise load for one sweep cell.
#[derive(Debug, Clone, PartialEq)]
pub enum SystemNoiseKind {
    /// Seeded random CPTP channel; the Kraus rank cycles through
    /// 1..=max_rank with the cell seed.
    Random { max_rank: usize },
    /// Identity channel in any dimension.
    Identity,
    /// A named qubit channel with one parameter, e.g. `depolarizing:0.5`.
    Named { name: String, param: f64 },
}

impl SystemNoiseKind {
    pub fn parse(s: &str) -> Result<Self> {
        if s == "identity" {
            return Ok(Self::Identity);
        }
        if s == "random" {
            return Ok(Self::Random { max_rank: 4 });
        }
        if let Some(rest) = s.strip_prefix("random:") {
            let max_rank: usize = rest.parse().map_err(|_| {
                Error::InvalidParam(format!("bad random rank in '{s}'"))
            })?;
            if max_rank == 0 {
                return Err(Error::InvalidParam("random rank must be >= 1".into()));
            }
            return Ok(Self::Random { max_rank });
        }
        if let Some((name, param)) = s.split_once(':') {
            let param: f64 = param.parse().map_err(|_| {
                Error::InvalidParam(format!("bad parameter in system noise '{s}'"))
            })?;
            return Ok(Self::Named {
                name: name.to_string(),
                param,
            });
        }
        Err(Error::InvalidParam(format!(
            "unknown system noise '{s}' (expected identity, random[:rank], or name:param)"
        )))
    }

    pub fn as_str(&self) -> String {
        match self {
            Self::Random { max_rank } => format!("random:{max_rank}"),
            Self::Identity => "identity".into(),
            Self::Named { name, param } => format!("{name}:{param}"),
        }
    }

    /// Only qubit channels have named textbook loads.
    pub fn supports_dim(&self, d: usize) -> bool {
        match self {
            Self::Random { .. } | Self::Identity => true,
            Self::Named { .. } => d == 2,
        }
    }

    pub fn build(&self, d: usize, seed: u64) -> Result<KrausChannel> {
        match self {
            Self::Random { max_rank } => {
                let rank = (seed % *max_rank as u64) as usize + 1;
                random_cptp(d, rank, seed)
            }
            Self::Identity => Ok(KrausChannel::identity(d)),
            Self::Named { name, param } => named_channel(name, &[*param]),
        }
    }
}

/// Full description of one sweep: the case grid, the tolerance, and the
/// output destination.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub d_list: Vec<usize>,
    pub seeds_per_case: u64,
    pub system_noise_kinds: Vec<SystemNoiseKind>,
    pub ancilla_noise_kinds: Vec<AncillaNoiseKind>,
    pub v_variants: Vec<CorrectionVariant>,
    pub ab_orders: Vec<AncillaOrder>,
    pub tolerance: f64,
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
    /// Zero out wall-time fields so reruns emit byte-identical files.
    pub omit_timing: bool,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            d_list: vec![2],
            seeds_per_case: 100,
            system_noise_kinds: vec![SystemNoiseKind::Random { max_rank: 4 }],
            ancilla_noise_kinds: vec![AncillaNoiseKind::Identity],
            v_variants: vec![CorrectionVariant::DirectUnitary],
            ab_orders: vec![AncillaOrder::AB],
            tolerance: 1e-9,
            output_path: None,
            output_format: OutputFormat::Json,
            omit_timing: false,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.d_list.is_empty() {
            return Err(Error::InvalidParam("d_list must not be empty".into()));
        }
        for &d in &self.d_list {
            if !(2..=5).contains(&d) {
                return Err(Error::InvalidParam(format!(
                    "dimension {d} out of the supported range 2..=5"
                )));
            }
        }
        if self.seeds_per_case < 1 {
            return Err(Error::InvalidParam("seeds_per_case must be >= 1".into()));
        }
        if self.tolerance <= 0.0 || !self.tolerance.is_finite() {
            return Err(Error::InvalidParam(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.system_noise_kinds.is_empty()
            || self.ancilla_noise_kinds.is_empty()
            || self.v_variants.is_empty()
            || self.ab_orders.is_empty()
        {
            return Err(Error::InvalidParam(
                "noise kinds, variants, and orders must not be empty".into(),
            ));
        }
        for kind in &self.system_noise_kinds {
            for &d in &self.d_list {
                if !kind.supports_dim(d) {
                    return Err(Error::InvalidParam(format!(
                        "system noise '{}' is qubit-only but d_list contains {d}",
                        kind.as_str()
                    )));
                }
            }
        }
        for variant in &self.v_variants {
            if *variant == CorrectionVariant::HadamardConjugated
                && self.d_list.iter().any(|&d| d != 2)
            {
                return Err(Error::InvalidParam(
                    "the hadamard variant is qubit-only but d_list contains d > 2".into(),
                ));
            }
        }
        Ok(())
    }

    /// Load file values (if any), then apply CLI overrides.
    pub fn from_sources(file: Option<&Path>, overrides: &ConfigOverrides) -> Result<SweepConfig> {
        let mut config = SweepConfig::default();
        if let Some(path) = file {
            let text = std::fs::read_to_string(path).map_err(|e| {
                Error::InvalidParam(format!("cannot read config {}: {e}", path.display()))
            })?;
            let raw: RawConfig = toml::from_str(&text).map_err(|e| {
                Error::InvalidParam(format!("cannot parse config {}: {e}", path.display()))
            })?;
            raw.apply(&mut config)?;
        }
        overrides.apply(&mut config)?;
        Ok(config)
    }
}

/// Values collected from CLI flags; `None` means "keep the current value".
#[derive(Debug, Clone, Default)]
pub struct ConfigOverrides {
    pub dims: Option<String>,
    pub seeds: Option<u64>,
    pub system_noise: Option<String>,
    pub ancilla_noise: Option<String>,
    pub variants: Option<String>,
    pub ab_orders: Option<String>,
    pub tolerance: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: Option<String>,
    pub omit_timing: bool,
}

impl ConfigOverrides {
    fn apply(&self, config: &mut SweepConfig) -> Result<()> {
        if let Some(dims) = &self.dims {
            config.d_list = parse_list(dims, |s| {
                s.parse::<usize>()
                    .map_err(|_| Error::InvalidParam(format!("bad dimension '{s}'")))
            })?;
        }
        if let Some(seeds) = self.seeds {
            config.seeds_per_case = seeds;
        }
        if let Some(kinds) = &self.system_noise {
            config.system_noise_kinds = parse_list(kinds, SystemNoiseKind::parse)?;
        }
        if let Some(kinds) = &self.ancilla_noise {
            config.ancilla_noise_kinds = parse_list(kinds, AncillaNoiseKind::parse)?;
        }
        if let Some(variants) = &self.variants {
            config.v_variants = parse_list(variants, CorrectionVariant::parse)?;
        }
        if let Some(orders) = &self.ab_orders {
            config.ab_orders = parse_list(orders, AncillaOrder::parse)?;
        }
        if let Some(tolerance) = self.tolerance {
            config.tolerance = tolerance;
        }
        if let Some(out) = &self.out {
            config.output_path = Some(out.clone());
        }
        if let Some(format) = &self.format {
            config.output_format = OutputFormat::parse(format)?;
        }
        if self.omit_timing {
            config.omit_timing = true;
        }
        Ok(())
    }
}

fn parse_list<T>(csv: &str, parse: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    csv.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(parse)
        .collect()
}

/// Flat key-value config file contents, all optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    d_list: Option<Vec<usize>>,
    seeds_per_case: Option<u64>,
    system_noise_kinds: Option<Vec<String>>,
    ancilla_noise_kinds: Option<Vec<String>>,
    v_variants: Option<Vec<String>>,
    ab_orders: Option<Vec<String>>,
    tolerance: Option<f64>,
    output_path: Option<PathBuf>,
    output_format: Option<String>,
    omit_timing: Option<bool>,
}

impl RawConfig {
    fn apply(self, config: &mut SweepConfig) -> Result<()> {
        if let Some(v) = self.d_list {
            config.d_list = v;
        }
        if let Some(v) = self.seeds_per_case {
            config.seeds_per_case = v;
        }
        if let Some(v) = self.system_noise_kinds {
            config.system_noise_kinds = v
                .iter()
                .map(|s| SystemNoiseKind::parse(s))
                .collect::<Result<_>>()?;
        }
        if let Some(v) = self.ancilla_noise_kinds {
            config.ancilla_noise_kinds = v
                .iter()
                .map(|s| AncillaNoiseKind::parse(s))
                .collect::<Result<_>>()?;
        }
        if let Some(v) = self.v_variants {
            config.v_variants = v
                .iter()
                .map(|s| CorrectionVariant::parse(s))
                .collect::<Result<_>>()?;
        }
        if let Some(v) = self.ab_orders {
            config.ab_orders = v
                .iter()
                .map(|s| AncillaOrder::parse(s))
                .collect::<Result<_>>()?;
        }
        if let Some(v) = self.tolerance {
            config.tolerance = v;
        }
        if let Some(v) = self.output_path {
            config.output_path = Some(v);
        }
        if let Some(v) = self.output_format {
            config.output_format = OutputFormat::parse(&v)?;
        }
        if let Some(v) = self.omit_timing {
            config.omit_timing = v;
        }
        Ok(())
    }
}
