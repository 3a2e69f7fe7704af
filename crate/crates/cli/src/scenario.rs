//! Scenario files.
//!
//! A scenario is a TOML document describing the network, cache, edge
//! deployment, services and access paths to evaluate. Unknown keys are
//! rejected. Relative file references resolve against the scenario's
//! directory.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use sha2::{Digest, Sha256};

use ubb_core::service::{builtin_catalog, lookup, ServiceKind};
use ubb_core::throughput::DEFAULT_TRAP_THRESHOLD;
use ubb_core::{
    BitRate, LossRatio, MovarParams, PathMetrics, Seconds, ServiceProfile, TopologyParams, TrafficDistribution,
};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: Option<String>,
    #[serde(default)]
    pub topology: TopologySection,
    #[serde(default)]
    pub traffic: TrafficSection,
    pub cache: Option<CacheSection>,
    pub ecc: Option<EccSection>,
    #[serde(default)]
    pub trap: TrapSection,
    #[serde(default)]
    pub movar: MovarSection,
    #[serde(default)]
    pub services: ServicesSection,
    #[serde(default, rename = "path")]
    pub paths: Vec<PathSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TopologySection {
    #[serde(default = "d_n_core")]
    pub n_core: usize,
    #[serde(default = "d_metro_per_ring")]
    pub metro_per_ring: usize,
    #[serde(default = "d_access_per_ring")]
    pub access_per_ring: usize,
    pub n_metro: Option<usize>,
    pub n_access: Option<usize>,
}

fn d_n_core() -> usize {
    5
}
fn d_metro_per_ring() -> usize {
    5
}
fn d_access_per_ring() -> usize {
    10
}

impl Default for TopologySection {
    fn default() -> Self {
        Self {
            n_core: d_n_core(),
            metro_per_ring: d_metro_per_ring(),
            access_per_ring: d_access_per_ring(),
            n_metro: None,
            n_access: None,
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrafficSection {
    #[serde(default = "d_metro_exponent")]
    pub metro_exponent: f64,
    #[serde(default = "d_access_exponent")]
    pub access_exponent: f64,
    #[serde(default = "d_total_gbps")]
    pub total_throughput_gbps: f64,
}

fn d_metro_exponent() -> f64 {
    -0.6
}
fn d_access_exponent() -> f64 {
    -0.99
}
fn d_total_gbps() -> f64 {
    100.0
}

impl Default for TrafficSection {
    fn default() -> Self {
        Self {
            metro_exponent: d_metro_exponent(),
            access_exponent: d_access_exponent(),
            total_throughput_gbps: d_total_gbps(),
        }
    }
}

/// Either a Zipf catalog with a stored amount, or an explicit hit ratio.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CacheSection {
    pub items: Option<usize>,
    pub alpha: Option<f64>,
    pub stored_fraction: Option<f64>,
    pub stored_items: Option<usize>,
    pub hit_ratio: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum OrderSource {
    #[default]
    Traffic,
    Greedy,
    File,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EccSection {
    pub rtt_with_ms: f64,
    pub rtt_without_ms: Option<f64>,
    pub calibrate_target: Option<f64>,
    pub max_ratio: Option<f64>,
    #[serde(default)]
    pub order: OrderSource,
    pub order_file: Option<PathBuf>,
    pub equipped: Option<usize>,
    pub plr_without_pct: Option<f64>,
    pub plr_with_pct: Option<f64>,
    #[serde(default, rename = "node")]
    pub nodes: Vec<EccNodeSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EccNodeSection {
    pub id: usize,
    pub rtt_with_ms: Option<f64>,
    pub rtt_without_ms: Option<f64>,
    pub hit_ratio: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrapSection {
    #[serde(default = "d_threshold")]
    pub threshold: f64,
}

fn d_threshold() -> f64 {
    DEFAULT_TRAP_THRESHOLD
}

impl Default for TrapSection {
    fn default() -> Self {
        Self {
            threshold: d_threshold(),
        }
    }
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct MovarSection {
    pub total_pixels: Option<f64>,
    pub bits_per_pixel: Option<f64>,
    pub frame_rate: Option<f64>,
    pub compression_min: Option<f64>,
    pub compression_max: Option<f64>,
    pub foveation_divisor: Option<f64>,
}

#[derive(Debug, Clone, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct ServicesSection {
    #[serde(default)]
    pub names: Vec<String>,
    pub catalog_file: Option<PathBuf>,
    pub compression_factor: Option<f64>,
    #[serde(default)]
    pub inline: Vec<ServiceEntry>,
}

/// One catalog row, as written in scenario `[[services.inline]]` tables
/// and in catalog files (`[[service]]`).
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ServiceEntry {
    pub name: String,
    pub throughput_mbps: f64,
    pub range_mbps: Option<[f64; 2]>,
    #[serde(default)]
    pub live: bool,
    pub max_rtt_ms: Option<f64>,
    pub max_time_of_use_min: Option<u32>,
    #[serde(default)]
    pub kind: EntryKind,
    #[serde(default)]
    pub notes: String,
}

#[derive(Debug, Clone, Copy, Deserialize, Default, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum EntryKind {
    #[default]
    Video,
    Movar,
}

impl ServiceEntry {
    pub fn to_profile(&self) -> Result<ServiceProfile> {
        let kind = match self.kind {
            EntryKind::Video => ServiceKind::Video,
            EntryKind::Movar => ServiceKind::Movar,
        };
        let mut p = ServiceProfile::new(self.name.clone(), kind, BitRate::from_mbps(self.throughput_mbps))?;
        p.throughput_range = self
            .range_mbps
            .map(|[lo, hi]| (BitRate::from_mbps(lo), BitRate::from_mbps(hi)));
        p.live = self.live;
        p.max_rtt = self.max_rtt_ms.map(Seconds::from_millis);
        p.max_time_of_use_min = self.max_time_of_use_min;
        p.notes = self.notes.clone();
        p.validate()?;
        Ok(p)
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogFile {
    #[serde(default)]
    service: Vec<ServiceEntry>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PathSection {
    pub name: String,
    pub rtt_ms: f64,
    pub plr_pct: f64,
    #[serde(default = "d_mss")]
    pub mss_bytes: f64,
    #[serde(default = "d_c")]
    pub c: f64,
    pub bit_rate_mbps: f64,
    #[serde(default = "d_flows")]
    pub flows: usize,
}

fn d_mss() -> f64 {
    ubb_core::throughput::DEFAULT_MSS_BYTES
}
fn d_c() -> f64 {
    ubb_core::throughput::DEFAULT_C
}
fn d_flows() -> usize {
    1
}

/// A named access path carrying `flows` identical flows.
#[derive(Debug, Clone)]
pub struct NamedPath {
    pub name: String,
    pub metrics: PathMetrics,
    pub flows: usize,
}

/// Parsed, validated scenario.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub file: ScenarioFile,
    pub base_dir: PathBuf,
    /// First 16 hex digits of the SHA-256 of the file bytes.
    pub hash: String,
    pub topology: TopologyParams,
    pub traffic: TrafficDistribution,
    pub paths: Vec<NamedPath>,
    pub catalog: Vec<ServiceProfile>,
    pub movar: MovarParams,
}

pub fn content_hash(bytes: &[u8]) -> String {
    hex::encode(&Sha256::digest(bytes)[..8])
}

impl Scenario {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read scenario {}: {e}", path.display())))?;
        let base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Self::parse(&text, &base_dir)
    }

    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let file: ScenarioFile = toml::from_str(text).map_err(|e| CliError::Validation(format!("scenario: {e}")))?;
        let t = &file.topology;
        let topology = TopologyParams {
            n_core: t.n_core,
            n_metro: t.n_metro.unwrap_or(t.n_core * t.metro_per_ring),
            n_access: t.n_access.unwrap_or(t.n_core * t.metro_per_ring * t.access_per_ring),
            metro_per_ring: t.metro_per_ring,
            access_per_ring: t.access_per_ring,
        };
        topology.validate()?;
        let traffic = TrafficDistribution::new(
            file.traffic.metro_exponent,
            file.traffic.access_exponent,
            BitRate::from_gbps(file.traffic.total_throughput_gbps),
        )?;

        let mut paths = Vec::with_capacity(file.paths.len());
        for p in &file.paths {
            if p.flows == 0 {
                return Err(CliError::Validation(format!("path {:?}: flows must be >= 1", p.name)));
            }
            if paths.iter().any(|q: &NamedPath| q.name == p.name) {
                return Err(CliError::Validation(format!("path {:?} defined twice", p.name)));
            }
            let metrics = PathMetrics::with_params(
                Seconds::from_millis(p.rtt_ms),
                LossRatio::from_percent(p.plr_pct)?,
                p.mss_bytes,
                p.c,
                BitRate::from_mbps(p.bit_rate_mbps),
            )
            .map_err(|e| CliError::Validation(format!("path {:?}: {e}", p.name)))?;
            paths.push(NamedPath {
                name: p.name.clone(),
                metrics,
                flows: p.flows,
            });
        }

        let mut catalog = builtin_catalog();
        if let Some(f) = &file.services.catalog_file {
            let f = base_dir.join(f);
            let text = std::fs::read_to_string(&f)
                .map_err(|e| CliError::Io(format!("cannot read catalog {}: {e}", f.display())))?;
            merge_catalog(&mut catalog, parse_catalog(&text)?);
        }
        let inline = file
            .services
            .inline
            .iter()
            .map(ServiceEntry::to_profile)
            .collect::<Result<Vec<_>>>()?;
        merge_catalog(&mut catalog, inline);
        for name in &file.services.names {
            lookup(&catalog, name)?;
        }
        if let Some(f) = file.services.compression_factor {
            if f.is_nan() || f < 1.0 {
                return Err(CliError::Validation(format!("compression_factor {f} must be >= 1")));
            }
        }

        let m = &file.movar;
        let d = MovarParams::default();
        let movar = MovarParams {
            total_pixels: m.total_pixels.unwrap_or(d.total_pixels),
            bits_per_pixel: m.bits_per_pixel.unwrap_or(d.bits_per_pixel),
            frame_rate: m.frame_rate.unwrap_or(d.frame_rate),
            compression_min: m.compression_min.unwrap_or(d.compression_min),
            compression_max: m.compression_max.unwrap_or(d.compression_max),
            foveation_divisor: m.foveation_divisor,
        };
        movar.validate()?;

        Ok(Self {
            hash: content_hash(text.as_bytes()),
            base_dir: base_dir.to_path_buf(),
            topology,
            traffic,
            paths,
            catalog,
            movar,
            file,
        })
    }

    /// Services selected for the feasibility matrix.
    pub fn services(&self) -> Vec<&ServiceProfile> {
        if self.file.services.names.is_empty() {
            return self.catalog.iter().collect();
        }
        self.file
            .services
            .names
            .iter()
            .map(|n| lookup(&self.catalog, n).expect("resolved at load"))
            .collect()
    }

    pub fn resolve(&self, relative: &Path) -> PathBuf {
        self.base_dir.join(relative)
    }
}

/// Parses a catalog file: a list of `[[service]]` tables.
pub fn parse_catalog(text: &str) -> Result<Vec<ServiceProfile>> {
    let file: CatalogFile = toml::from_str(text).map_err(|e| CliError::Validation(format!("catalog: {e}")))?;
    file.service.iter().map(ServiceEntry::to_profile).collect()
}

/// Same-named entries are replaced, new ones appended.
pub fn merge_catalog(catalog: &mut Vec<ServiceProfile>, entries: Vec<ServiceProfile>) {
    for e in entries {
        match catalog.iter_mut().find(|s| s.name.eq_ignore_ascii_case(&e.name)) {
            Some(slot) => *slot = e,
            None => catalog.push(e),
        }
    }
}
