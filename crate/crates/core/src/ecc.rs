//! Speed-up from edge caches placed in access nodes.
//!
//! A node whose cache answers a fraction `HR` of requests from `RTT_q`
//! instead of `RTT` speeds up by `HR * (RTT / RTT_q - 1) + 1`, loss being
//! equal on both paths. The network speed-up with the first `k` nodes of a
//! placement order equipped is the traffic-weighted mix of equipped node
//! speed-ups and unequipped unit factors, normalized by total traffic.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::scalar::{Accumulator, Scalar};
use crate::topology::{NodeId, NodeTraffic};
use crate::units::{LossRatio, Seconds};

/// Largest RTT ratio a calibration may produce unless told otherwise.
pub const DEFAULT_MAX_RTT_RATIO: f64 = 1e4;

/// Tolerance on `sum(shares) == 1`.
const SHARE_NORMALIZATION_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeEccConfig<T> {
    node_id: NodeId,
    rtt_without: Seconds<T>,
    rtt_with: Seconds<T>,
    hit_ratio: T,
    /// `(plr without, plr with)`; `None` keeps loss equal on both paths.
    loss: Option<(LossRatio<T>, LossRatio<T>)>,
}

impl<T: Scalar> NodeEccConfig<T> {
    pub fn new(node_id: NodeId, rtt_without: Seconds<T>, rtt_with: Seconds<T>, hit_ratio: T) -> Result<Self> {
        if rtt_with.secs() == T::zero() {
            return Err(Error::Domain(format!("node {node_id}: rtt with cache is 0")));
        }
        if !(rtt_with.secs() > T::zero()) || !rtt_without.secs().is_finite() {
            return Err(Error::invalid("rtt_with", format!("node {node_id}: must be > 0")));
        }
        if !(rtt_with <= rtt_without) {
            return Err(Error::invalid(
                "rtt_with",
                format!(
                    "node {node_id}: {} ms exceeds rtt without cache {} ms",
                    rtt_with.millis(),
                    rtt_without.millis()
                ),
            ));
        }
        if !(hit_ratio >= T::zero() && hit_ratio <= T::one()) {
            return Err(Error::invalid(
                "hit_ratio",
                format!("node {node_id}: {hit_ratio} not in [0, 1]"),
            ));
        }
        Ok(Self {
            node_id,
            rtt_without,
            rtt_with,
            hit_ratio,
            loss: None,
        })
    }

    /// Lets the cache path see lower loss than the origin path.
    pub fn with_loss(mut self, without: LossRatio<T>, with: LossRatio<T>) -> Result<Self> {
        if with.fraction() == T::zero() || without.fraction() == T::zero() {
            return Err(Error::Domain("loss override requires plr > 0".into()));
        }
        if with > without {
            return Err(Error::invalid("plr_with", "must not exceed plr without cache"));
        }
        self.loss = Some((without, with));
        Ok(self)
    }

    pub fn node_id(&self) -> NodeId {
        self.node_id
    }

    pub fn rtt_without(&self) -> Seconds<T> {
        self.rtt_without
    }

    pub fn rtt_with(&self) -> Seconds<T> {
        self.rtt_with
    }

    pub fn hit_ratio(&self) -> T {
        self.hit_ratio
    }

    /// Throughput gain of a cache hit: `RTT / RTT_q`, times `sqrt(PLR / PLR_q)` with a loss override.
    fn hit_gain(&self) -> T {
        let gain = self.rtt_without.secs() / self.rtt_with.secs();
        match self.loss {
            None => gain,
            Some((without, with)) => gain * (without.fraction() / with.fraction()).sqrt(),
        }
    }
}

/// Speed-up of a single access node.
pub fn node_speedup<T: Scalar>(cfg: &NodeEccConfig<T>) -> T {
    cfg.hit_ratio * (cfg.hit_gain() - T::one()) + T::one()
}

/// The first `equipped_count` nodes of `order` carry a cache.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PlacementPlan {
    order: Vec<NodeId>,
    equipped_count: usize,
}

impl PlacementPlan {
    /// `order` must be a permutation of `1..=n_access`.
    pub fn new(order: Vec<NodeId>, equipped_count: usize) -> Result<Self> {
        let n = order.len();
        let mut seen = vec![false; n];
        for id in &order {
            if id.0 == 0 || id.0 > n || std::mem::replace(&mut seen[id.0 - 1], true) {
                return Err(Error::InvalidOrder(format!("order is not a permutation of 1..={n}")));
            }
        }
        if equipped_count > n {
            return Err(Error::invalid(
                "equipped_count",
                format!("{equipped_count} exceeds {n} access nodes"),
            ));
        }
        Ok(Self { order, equipped_count })
    }

    pub fn order(&self) -> &[NodeId] {
        &self.order
    }

    pub fn equipped_count(&self) -> usize {
        self.equipped_count
    }

    pub fn equipped(&self) -> &[NodeId] {
        &self.order[..self.equipped_count]
    }

    pub fn with_equipped(&self, equipped_count: usize) -> Result<Self> {
        Self::new(self.order.clone(), equipped_count)
    }
}

/// Network speed-up after equipping `k` nodes, for `k = 0..=n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpeedupCurve<T> {
    /// `(k, NSU(k))`, starting at `(0, 1)`.
    pub points: Vec<(usize, T)>,
    /// Node equipped at step `k` (index `k - 1`) and its own speed-up.
    pub steps: Vec<(NodeId, T)>,
}

impl<T: Scalar> SpeedupCurve<T> {
    pub fn endpoint(&self) -> T {
        self.points.last().map(|p| p.1).unwrap_or_else(T::one)
    }

    pub fn is_non_decreasing(&self) -> bool {
        self.points.windows(2).all(|w| w[1].1 >= w[0].1)
    }
}

/// Shares and node speed-ups indexed by position in the traffic list.
struct SpeedupModel<T> {
    ids: HashMap<NodeId, usize>,
    shares: Vec<T>,
    speedups: Vec<Option<T>>,
}

impl<T: Scalar> SpeedupModel<T> {
    fn new(traffic: &[NodeTraffic<T>], configs: &[NodeEccConfig<T>]) -> Result<Self> {
        let mut ids = HashMap::with_capacity(traffic.len());
        for (pos, node) in traffic.iter().enumerate() {
            if ids.insert(node.node_id, pos).is_some() {
                return Err(Error::InvalidOrder(format!(
                    "node {} listed twice in traffic",
                    node.node_id
                )));
            }
        }
        let total: T = traffic.iter().map(|n| n.share).collect::<Accumulator<T>>().value();
        let total = total.to_f64().unwrap_or(f64::NAN);
        if !((total - 1.0).abs() <= SHARE_NORMALIZATION_TOL) {
            return Err(Error::NotNormalized(total));
        }
        let mut speedups = vec![None; traffic.len()];
        for cfg in configs {
            let pos = *ids.get(&cfg.node_id).ok_or(Error::UnknownNode(cfg.node_id.0))?;
            speedups[pos] = Some(node_speedup(cfg));
        }
        Ok(Self {
            ids,
            shares: traffic.iter().map(|n| n.share).collect(),
            speedups,
        })
    }

    fn position(&self, id: NodeId) -> Result<usize> {
        self.ids.get(&id).copied().ok_or(Error::UnknownNode(id.0))
    }

    fn speedup_at(&self, pos: usize, id: NodeId) -> Result<T> {
        self.speedups[pos].ok_or(Error::UnknownNode(id.0))
    }

    /// NSU for an equipped mask; sums run in traffic-list order so the
    /// value depends only on the equipped set.
    fn evaluate(&self, equipped: &[bool]) -> T {
        let mut with = Accumulator::new();
        let mut without = Accumulator::new();
        for (pos, &share) in self.shares.iter().enumerate() {
            without.add(share);
            match (equipped[pos], self.speedups[pos]) {
                (true, Some(su)) => with.add(share * su),
                _ => with.add(share),
            }
        }
        with.value() / without.value()
    }
}

/// Network speed-up of one placement.
pub fn network_speedup<T: Scalar>(
    traffic: &[NodeTraffic<T>],
    configs: &[NodeEccConfig<T>],
    plan: &PlacementPlan,
) -> Result<T> {
    let model = SpeedupModel::new(traffic, configs)?;
    check_plan_covers(&model, plan.order())?;
    let mut mask = vec![false; traffic.len()];
    for &id in plan.equipped() {
        let pos = model.position(id)?;
        model.speedup_at(pos, id)?;
        mask[pos] = true;
    }
    Ok(model.evaluate(&mask))
}

fn check_plan_covers<T: Scalar>(model: &SpeedupModel<T>, order: &[NodeId]) -> Result<()> {
    if order.len() != model.shares.len() {
        return Err(Error::InvalidOrder(format!(
            "order has {} nodes, traffic has {}",
            order.len(),
            model.shares.len()
        )));
    }
    for &id in order {
        model.position(id)?;
    }
    Ok(())
}

/// Network speed-up as nodes are equipped one by one along `order`.
pub fn speedup_curve<T: Scalar>(
    traffic: &[NodeTraffic<T>],
    configs: &[NodeEccConfig<T>],
    order: &[NodeId],
) -> Result<SpeedupCurve<T>> {
    let model = SpeedupModel::new(traffic, configs)?;
    check_plan_covers(&model, order)?;
    let mut mask = vec![false; traffic.len()];
    let mut points = Vec::with_capacity(order.len() + 1);
    let mut steps = Vec::with_capacity(order.len());
    points.push((0, model.evaluate(&mask)));
    for (k, &id) in order.iter().enumerate() {
        let pos = model.position(id)?;
        if mask[pos] {
            return Err(Error::InvalidOrder(format!("node {id} repeated")));
        }
        let su = model.speedup_at(pos, id)?;
        mask[pos] = true;
        steps.push((id, su));
        points.push((k + 1, model.evaluate(&mask)));
    }
    Ok(SpeedupCurve { points, steps })
}

/// Order by `share * (SU - 1)` descending, ties by ascending node id.
///
/// Every prefix of this order maximizes the network speed-up among node
/// sets of the same size.
pub fn greedy_order<T: Scalar>(traffic: &[NodeTraffic<T>], configs: &[NodeEccConfig<T>]) -> Result<Vec<NodeId>> {
    let model = SpeedupModel::new(traffic, configs)?;
    let mut keyed = Vec::with_capacity(traffic.len());
    for (pos, node) in traffic.iter().enumerate() {
        let su = model.speedup_at(pos, node.node_id)?;
        keyed.push((node.share * (su - T::one()), node.node_id));
    }
    keyed.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.1.cmp(&b.1))
    });
    Ok(keyed.into_iter().map(|(_, id)| id).collect())
}

/// RTT ratio `RTT / RTT_q` at which every node's speed-up equals `target_nsu`.
///
/// With uniform node speed-ups the network speed-up at full deployment
/// equals that same value whatever the traffic split.
pub fn calibrate_uniform_scenario<T: Scalar>(target_nsu: T, hit_ratio: T, max_ratio: T) -> Result<T> {
    if !(target_nsu >= T::one()) || !target_nsu.is_finite() {
        return Err(Error::invalid("target_nsu", format!("{target_nsu} must be >= 1")));
    }
    if !(hit_ratio >= T::zero() && hit_ratio <= T::one()) {
        return Err(Error::invalid("hit_ratio", format!("{hit_ratio} not in [0, 1]")));
    }
    if !(max_ratio >= T::one()) {
        return Err(Error::invalid("max_ratio", format!("{max_ratio} must be >= 1")));
    }
    if target_nsu == T::one() {
        return Ok(T::one());
    }
    if hit_ratio == T::zero() {
        return Err(Error::Infeasible(format!(
            "speed-up {target_nsu} unreachable with a cache that never hits"
        )));
    }
    let ratio = (target_nsu - T::one()) / hit_ratio + T::one();
    if ratio > max_ratio {
        return Err(Error::Infeasible(format!(
            "speed-up {target_nsu} at hit ratio {hit_ratio} needs RTT ratio {ratio} > cap {max_ratio}"
        )));
    }
    Ok(ratio)
}

/// Same cache and RTTs at every traffic node.
pub fn uniform_configs<T: Scalar>(
    traffic: &[NodeTraffic<T>],
    rtt_without: Seconds<T>,
    rtt_with: Seconds<T>,
    hit_ratio: T,
) -> Result<Vec<NodeEccConfig<T>>> {
    traffic
        .iter()
        .map(|n| NodeEccConfig::new(n.node_id, rtt_without, rtt_with, hit_ratio))
        .collect()
}
