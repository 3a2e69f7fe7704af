//! Capacity-planning models for ultra-broadband networks.
//!
//! * [`throughput`]: loss/latency throughput bound, utilization ratio,
//!   loss composition and the access bit-rate trap.
//! * [`topology`]: three-tier hierarchy with power-law traffic shares.
//! * [`zipf`]: Zipf-like popularity and top-K cache hit ratio.
//! * [`ecc`]: node and network speed-up from edge caches.
//! * [`service`]: service requirement catalog and feasibility checks.
//!
//! Models are generic over [`Scalar`] (`f32` or `f64`). The type aliases at
//! the crate root fix the scalar to `f64`; [`single`] holds the `f32` ones.

// `!(x > y)` is used on purpose so NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ecc;
pub mod error;
pub mod scalar;
pub mod service;
pub mod throughput;
pub mod topology;
pub mod units;
pub mod zipf;

pub use error::{Error, Result};
pub use scalar::Scalar;
pub use topology::{NodeId, TopologyParams};
pub use zipf::CachePolicy;

pub type Seconds = units::Seconds<f64>;
pub type BitRate = units::BitRate<f64>;
pub type LossRatio = units::LossRatio<f64>;
pub type PathMetrics = throughput::PathMetrics<f64>;
pub type PlrBreakdown = throughput::PlrBreakdown<f64>;
pub type ThroughputEstimate = throughput::ThroughputEstimate<f64>;
pub type TrapAssessment = throughput::TrapAssessment<f64>;
pub type TrafficDistribution = topology::TrafficDistribution<f64>;
pub type NodeTraffic = topology::NodeTraffic<f64>;
pub type ZipfCatalog = zipf::ZipfCatalog<f64>;
pub type HarmonicTable = zipf::HarmonicTable<f64>;
pub type NodeEccConfig = ecc::NodeEccConfig<f64>;
pub type SpeedupCurve = ecc::SpeedupCurve<f64>;
pub type ServiceProfile = service::ServiceProfile<f64>;
pub type MovarParams = service::MovarParams<f64>;
pub type MovarRequirement = service::MovarRequirement<f64>;
pub type Feasibility = service::Feasibility<f64>;

/// Single-precision aliases.
pub mod single {
    pub type Seconds = crate::units::Seconds<f32>;
    pub type BitRate = crate::units::BitRate<f32>;
    pub type LossRatio = crate::units::LossRatio<f32>;
    pub type PathMetrics = crate::throughput::PathMetrics<f32>;
    pub type PlrBreakdown = crate::throughput::PlrBreakdown<f32>;
    pub type ThroughputEstimate = crate::throughput::ThroughputEstimate<f32>;
    pub type TrapAssessment = crate::throughput::TrapAssessment<f32>;
    pub type TrafficDistribution = crate::topology::TrafficDistribution<f32>;
    pub type NodeTraffic = crate::topology::NodeTraffic<f32>;
    pub type ZipfCatalog = crate::zipf::ZipfCatalog<f32>;
    pub type HarmonicTable = crate::zipf::HarmonicTable<f32>;
    pub type NodeEccConfig = crate::ecc::NodeEccConfig<f32>;
    pub type SpeedupCurve = crate::ecc::SpeedupCurve<f32>;
    pub type ServiceProfile = crate::service::ServiceProfile<f32>;
    pub type MovarParams = crate::service::MovarParams<f32>;
    pub type MovarRequirement = crate::service::MovarRequirement<f32>;
    pub type Feasibility = crate::service::Feasibility<f32>;
}
