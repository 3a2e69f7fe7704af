//! Three-tier core / metro / access hierarchy and power-law traffic shares.
//!
//! Metro nodes hang off core nodes in rings of `metro_per_ring`, access
//! nodes hang off metro nodes in rings of `access_per_ring`. Rings only
//! define parentage here; links carry no capacity.
//!
//! Traffic is split among metro nodes as `i^m` (normalized) and each metro
//! node's traffic is split among its ring of access nodes as `k^m'`. An
//! access node's share of network traffic is the product of the two.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};
use crate::units::BitRate;

/// 1-based node identifier within one tier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub usize);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<usize> for NodeId {
    fn from(id: usize) -> Self {
        NodeId(id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TopologyParams {
    pub n_core: usize,
    pub n_metro: usize,
    pub n_access: usize,
    pub metro_per_ring: usize,
    pub access_per_ring: usize,
}

impl Default for TopologyParams {
    fn default() -> Self {
        Self {
            n_core: 5,
            n_metro: 25,
            n_access: 250,
            metro_per_ring: 5,
            access_per_ring: 10,
        }
    }
}

impl TopologyParams {
    /// Regular hierarchy with `n_core` rings of `metro_per_ring` metro
    /// nodes, each metro node feeding one ring of `access_per_ring` access nodes.
    pub fn regular(n_core: usize, metro_per_ring: usize, access_per_ring: usize) -> Result<Self> {
        let params = Self {
            n_core,
            n_metro: n_core * metro_per_ring,
            n_access: n_core * metro_per_ring * access_per_ring,
            metro_per_ring,
            access_per_ring,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("n_core", self.n_core),
            ("n_metro", self.n_metro),
            ("n_access", self.n_access),
            ("metro_per_ring", self.metro_per_ring),
            ("access_per_ring", self.access_per_ring),
        ] {
            if v == 0 {
                return Err(Error::invalid(name, "count must be >= 1"));
            }
        }
        if self.n_metro != self.n_core * self.metro_per_ring {
            return Err(Error::IrregularTopology(format!(
                "n_metro = {} but n_core x metro_per_ring = {} x {}",
                self.n_metro, self.n_core, self.metro_per_ring
            )));
        }
        if self.n_access != self.n_metro * self.access_per_ring {
            return Err(Error::IrregularTopology(format!(
                "n_access = {} but n_metro x access_per_ring = {} x {}",
                self.n_access, self.n_metro, self.access_per_ring
            )));
        }
        Ok(())
    }

    /// Core node whose ring carries `metro`.
    pub fn core_of(&self, metro: NodeId) -> Option<NodeId> {
        (1..=self.n_metro)
            .contains(&metro.0)
            .then(|| NodeId((metro.0 - 1) / self.metro_per_ring + 1))
    }

    /// Metro node whose ring carries `access`.
    pub fn metro_of(&self, access: NodeId) -> Option<NodeId> {
        (1..=self.n_access)
            .contains(&access.0)
            .then(|| NodeId((access.0 - 1) / self.access_per_ring + 1))
    }

    pub fn access_ids(&self) -> impl Iterator<Item = NodeId> {
        (1..=self.n_access).map(NodeId)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrafficDistribution<T> {
    /// Exponent of the metro-tier power law (`m`).
    pub metro_exponent: T,
    /// Exponent of the within-ring access power law (`m'`).
    pub access_exponent: T,
    /// Network-wide peak downstream throughput.
    pub total_throughput: BitRate<T>,
}

impl<T: Scalar> TrafficDistribution<T> {
    pub fn new(metro_exponent: T, access_exponent: T, total_throughput: BitRate<T>) -> Result<Self> {
        let dist = Self {
            metro_exponent,
            access_exponent,
            total_throughput,
        };
        dist.validate()?;
        Ok(dist)
    }

    /// Default exponents (-0.6 metro, -0.99 access) over `total_throughput`.
    pub fn with_total(total_throughput: BitRate<T>) -> Result<Self> {
        Self::new(T::lit(-0.6), T::lit(-0.99), total_throughput)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.metro_exponent <= T::zero()) {
            return Err(Error::invalid("metro_exponent", "must be <= 0"));
        }
        if !(self.access_exponent <= T::zero()) {
            return Err(Error::invalid("access_exponent", "must be <= 0"));
        }
        if !(self.total_throughput.bps() > T::zero()) || !self.total_throughput.bps().is_finite() {
            return Err(Error::invalid("total_throughput", "must be > 0"));
        }
        Ok(())
    }
}

/// Traffic carried by one access node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeTraffic<T> {
    pub node_id: NodeId,
    pub metro_id: NodeId,
    /// Fraction of total network throughput.
    pub share: T,
    pub throughput: BitRate<T>,
}

/// `i^exponent / sum_j j^exponent` for `i = 1..=n`.
pub fn power_law_weights<T: Scalar>(n: usize, exponent: T) -> Vec<T> {
    let raw: Vec<T> = (1..=n).map(|i| T::from_count(i).powf(exponent)).collect();
    let norm = scalar::sum(raw.iter().copied());
    raw.into_iter().map(|w| w / norm).collect()
}

/// Fraction of network traffic handled by each metro node, index 0 = metro 1.
pub fn metro_shares<T: Scalar>(params: &TopologyParams, dist: &TrafficDistribution<T>) -> Vec<T> {
    power_law_weights(params.n_metro.max(1), dist.metro_exponent)
}

/// Traffic of every access node, in node-id order.
///
/// Access node `(i - 1) * access_per_ring + k` is ring position `k` under metro `i`.
pub fn access_shares<T: Scalar>(params: &TopologyParams, dist: &TrafficDistribution<T>) -> Result<Vec<NodeTraffic<T>>> {
    params.validate()?;
    dist.validate()?;
    let metro = metro_shares(params, dist);
    let ring = power_law_weights(params.access_per_ring, dist.access_exponent);
    let total = dist.total_throughput.bps();
    let mut out = Vec::with_capacity(params.n_access);
    for (i, &m) in metro.iter().enumerate() {
        for (k, &w) in ring.iter().enumerate() {
            let share = m * w;
            out.push(NodeTraffic {
                node_id: NodeId(i * params.access_per_ring + k + 1),
                metro_id: NodeId(i + 1),
                share,
                throughput: BitRate::from_bps(share * total),
            });
        }
    }
    Ok(out)
}

/// Node ids by descending share; equal shares keep ascending id order.
pub fn sort_by_traffic<T: Scalar>(nodes: &[NodeTraffic<T>]) -> Vec<NodeId> {
    let mut sorted: Vec<&NodeTraffic<T>> = nodes.iter().collect();
    sorted.sort_by(|a, b| {
        b.share
            .partial_cmp(&a.share)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.node_id.cmp(&b.node_id))
    });
    sorted.into_iter().map(|n| n.node_id).collect()
}

/// Parses a placement-order override: one access-node id per line.
///
/// Blank lines and `#` comments are skipped. The ids must be a permutation
/// of `1..=n_access`.
pub fn parse_order(text: &str, n_access: usize) -> Result<Vec<NodeId>> {
    let mut seen = vec![false; n_access];
    let mut order = Vec::with_capacity(n_access);
    for (lineno, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let id: usize = line
            .parse()
            .map_err(|_| Error::InvalidOrder(format!("line {}: {line:?} is not a node id", lineno + 1)))?;
        if id == 0 || id > n_access {
            return Err(Error::InvalidOrder(format!(
                "line {}: node {id} outside 1..={n_access}",
                lineno + 1
            )));
        }
        if std::mem::replace(&mut seen[id - 1], true) {
            return Err(Error::InvalidOrder(format!("line {}: node {id} repeated", lineno + 1)));
        }
        order.push(NodeId(id));
    }
    if order.len() != n_access {
        return Err(Error::InvalidOrder(format!(
            "{} ids given, expected a permutation of 1..={n_access}",
            order.len()
        )));
    }
    Ok(order)
}
