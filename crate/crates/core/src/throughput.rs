//! Steady-state TCP throughput bound and the access bit-rate trap.
//!
//! A single TCP flow with window-based congestion control cannot move data
//! faster than `c * MSS / (RTT * sqrt(PLR))`, and never faster than the
//! bit-rate it is given. All outputs here are upper-bound estimates, not
//! measurements.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};
use crate::units::{BitRate, LossRatio, Seconds};

/// Segment size used for video services when none is given.
pub const DEFAULT_MSS_BYTES: f64 = 1460.0;

/// Congestion-control constant used when none is given.
pub const DEFAULT_C: f64 = 1.0;

/// Headroom above which the access bit-rate is considered wasted.
pub const DEFAULT_TRAP_THRESHOLD: f64 = 1.0;

/// End-to-end parameters of one flow.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathMetrics<T> {
    rtt: Seconds<T>,
    plr: LossRatio<T>,
    mss_bytes: T,
    c: T,
    bit_rate: BitRate<T>,
}

impl<T: Scalar> PathMetrics<T> {
    /// Builds a path with the default MSS (1460 bytes) and `c = 1`.
    pub fn new(rtt: Seconds<T>, plr: LossRatio<T>, bit_rate: BitRate<T>) -> Result<Self> {
        Self::with_params(rtt, plr, T::lit(DEFAULT_MSS_BYTES), T::lit(DEFAULT_C), bit_rate)
    }

    pub fn with_params(rtt: Seconds<T>, plr: LossRatio<T>, mss_bytes: T, c: T, bit_rate: BitRate<T>) -> Result<Self> {
        check_rtt(rtt)?;
        check_plr(plr)?;
        check_mss(mss_bytes)?;
        check_c(c)?;
        if !(bit_rate.bps() > T::zero()) || !bit_rate.bps().is_finite() {
            return Err(Error::invalid(
                "bit_rate",
                format!("{} bit/s must be > 0", bit_rate.bps()),
            ));
        }
        Ok(Self {
            rtt,
            plr,
            mss_bytes,
            c,
            bit_rate,
        })
    }

    pub fn rtt(&self) -> Seconds<T> {
        self.rtt
    }

    pub fn plr(&self) -> LossRatio<T> {
        self.plr
    }

    pub fn mss_bytes(&self) -> T {
        self.mss_bytes
    }

    pub fn c(&self) -> T {
        self.c
    }

    pub fn bit_rate(&self) -> BitRate<T> {
        self.bit_rate
    }

    pub fn with_rtt(self, rtt: Seconds<T>) -> Result<Self> {
        Self::with_params(rtt, self.plr, self.mss_bytes, self.c, self.bit_rate)
    }

    pub fn with_plr(self, plr: LossRatio<T>) -> Result<Self> {
        Self::with_params(self.rtt, plr, self.mss_bytes, self.c, self.bit_rate)
    }

    pub fn with_bit_rate(self, bit_rate: BitRate<T>) -> Result<Self> {
        Self::with_params(self.rtt, self.plr, self.mss_bytes, self.c, bit_rate)
    }
}

fn check_rtt<T: Scalar>(rtt: Seconds<T>) -> Result<()> {
    let s = rtt.secs();
    if s == T::zero() {
        return Err(Error::Domain("rtt = 0 makes the throughput bound unbounded".into()));
    }
    if !(s > T::zero()) || !s.is_finite() {
        return Err(Error::invalid("rtt", format!("{s} s must be > 0")));
    }
    Ok(())
}

fn check_plr<T: Scalar>(plr: LossRatio<T>) -> Result<()> {
    if plr.fraction() == T::zero() {
        return Err(Error::Domain("plr = 0 makes the throughput bound unbounded".into()));
    }
    Ok(())
}

fn check_mss<T: Scalar>(mss_bytes: T) -> Result<()> {
    if !(mss_bytes > T::zero()) || !mss_bytes.is_finite() {
        return Err(Error::invalid("mss", format!("{mss_bytes} bytes must be > 0")));
    }
    Ok(())
}

fn check_c<T: Scalar>(c: T) -> Result<()> {
    if !(c >= T::lit(0.5) && c <= T::lit(2.0)) {
        return Err(Error::invalid("c", format!("{c} outside the sanity range [0.5, 2]")));
    }
    Ok(())
}

/// Which side of the `min` bound determines the estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Limit {
    LatencyLoss,
    BitRate,
}

impl fmt::Display for Limit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Limit::LatencyLoss => "latency-loss",
            Limit::BitRate => "bit-rate",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThroughputEstimate<T> {
    /// `c * MSS / (RTT * sqrt(PLR))`.
    pub mathis_term: BitRate<T>,
    /// Upper-bound throughput: the smaller of `mathis_term` and the bit-rate.
    pub throughput: BitRate<T>,
    /// Bandwidth utilization ratio `throughput / bit_rate`.
    pub utilization: T,
    pub limited_by: Limit,
}

fn loss_latency_term<T: Scalar>(rtt: Seconds<T>, plr: LossRatio<T>, mss_bytes: T, c: T) -> BitRate<T> {
    BitRate::from_bps(c * mss_bytes * T::lit(8.0) / (rtt.secs() * plr.fraction().sqrt()))
}

/// Throughput upper bound of one flow.
pub fn mathis_throughput<T: Scalar>(path: &PathMetrics<T>) -> ThroughputEstimate<T> {
    let mathis_term = loss_latency_term(path.rtt, path.plr, path.mss_bytes, path.c);
    let bit_rate = path.bit_rate;
    if bit_rate.bps() <= mathis_term.bps() {
        ThroughputEstimate {
            mathis_term,
            throughput: bit_rate,
            utilization: T::one(),
            limited_by: Limit::BitRate,
        }
    } else {
        ThroughputEstimate {
            mathis_term,
            throughput: mathis_term,
            utilization: mathis_term.bps() / bit_rate.bps(),
            limited_by: Limit::LatencyLoss,
        }
    }
}

/// Loss/latency bound for every `(plr, rtt)` grid cell, ignoring bit-rate.
///
/// Rows follow `plr_grid`, columns follow `rtt_grid`.
pub fn throughput_table<T: Scalar>(
    rtt_grid: &[Seconds<T>],
    plr_grid: &[LossRatio<T>],
    mss_bytes: T,
    c: T,
) -> Result<Vec<Vec<BitRate<T>>>> {
    if rtt_grid.is_empty() || plr_grid.is_empty() {
        return Err(Error::invalid("grid", "rtt and plr grids must be non-empty"));
    }
    check_mss(mss_bytes)?;
    check_c(c)?;
    for &rtt in rtt_grid {
        check_rtt(rtt)?;
    }
    plr_grid
        .iter()
        .map(|&plr| {
            check_plr(plr)?;
            Ok(rtt_grid
                .iter()
                .map(|&rtt| loss_latency_term(rtt, plr, mss_bytes, c))
                .collect())
        })
        .collect()
}

/// Largest RTT at which the loss/latency bound still reaches `target`.
pub fn required_rtt_for_throughput<T: Scalar>(
    target: BitRate<T>,
    plr: LossRatio<T>,
    mss_bytes: T,
    c: T,
) -> Result<Seconds<T>> {
    if target.bps() == T::zero() {
        return Err(Error::Domain("target throughput = 0 has no finite RTT bound".into()));
    }
    if !(target.bps() > T::zero()) {
        return Err(Error::invalid("target", format!("{} bit/s must be > 0", target.bps())));
    }
    check_plr(plr)?;
    check_mss(mss_bytes)?;
    check_c(c)?;
    Ok(Seconds::from_secs(
        c * mss_bytes * T::lit(8.0) / (target.bps() * plr.fraction().sqrt()),
    ))
}

/// Loss split into its wide-area (queuing) and access (physical layer) parts.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlrBreakdown<T> {
    plr1: LossRatio<T>,
    plr2: LossRatio<T>,
}

impl<T: Scalar> PlrBreakdown<T> {
    pub fn new(queuing: LossRatio<T>, access: LossRatio<T>) -> Result<Self> {
        if queuing.fraction() + access.fraction() > T::one() {
            return Err(Error::invalid("plr", "plr1 + plr2 exceeds 1"));
        }
        Ok(Self {
            plr1: queuing,
            plr2: access,
        })
    }

    pub fn queuing(&self) -> LossRatio<T> {
        self.plr1
    }

    pub fn access(&self) -> LossRatio<T> {
        self.plr2
    }
}

/// Total end-to-end loss; the two components are treated as independent and additive.
pub fn compose_plr<T: Scalar>(breakdown: &PlrBreakdown<T>) -> LossRatio<T> {
    LossRatio::from_fraction(breakdown.plr1.fraction() + breakdown.plr2.fraction()).expect("validated at construction")
}

/// How much access capacity sits above what the flows can use.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WasteBand {
    /// headroom ≤ 1
    None,
    /// 1 < headroom ≤ 2
    Low,
    /// 2 < headroom ≤ 10
    High,
    /// headroom > 10
    Severe,
}

impl WasteBand {
    pub fn classify<T: Scalar>(headroom: T) -> Self {
        if headroom <= T::one() {
            WasteBand::None
        } else if headroom <= T::lit(2.0) {
            WasteBand::Low
        } else if headroom <= T::lit(10.0) {
            WasteBand::High
        } else {
            WasteBand::Severe
        }
    }
}

impl fmt::Display for WasteBand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            WasteBand::None => "none",
            WasteBand::Low => "1-2x",
            WasteBand::High => "2-10x",
            WasteBand::Severe => ">10x",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapAssessment<T> {
    /// Sum over flows of `MSS / (RTT * sqrt(PLR))`.
    pub required_rate: BitRate<T>,
    /// `access_bit_rate / required_rate`.
    pub headroom: T,
    pub trapped: bool,
    pub band: WasteBand,
}

impl<T: Scalar> TrapAssessment<T> {
    /// Fraction of the access bit-rate the flows can use, capped at 1.
    pub fn utilization(&self) -> T {
        if self.headroom <= T::one() {
            T::one()
        } else {
            T::one() / self.headroom
        }
    }
}

/// Compares an access bit-rate against what `flows` can use at best.
///
/// Each flow's constant is taken as `c = 1`; each flow's own `c` and
/// bit-rate are ignored. The line is trapped when `headroom > threshold`.
pub fn ubb_trap_headroom<T: Scalar>(
    access_bit_rate: BitRate<T>,
    flows: &[PathMetrics<T>],
    threshold: T,
) -> Result<TrapAssessment<T>> {
    if flows.is_empty() {
        return Err(Error::invalid("flows", "at least one flow is required"));
    }
    if !(access_bit_rate.bps() > T::zero()) {
        return Err(Error::invalid("access_bit_rate", "must be > 0"));
    }
    if !(threshold > T::zero()) {
        return Err(Error::invalid("trap_threshold", "must be > 0"));
    }
    let required = scalar::sum(
        flows
            .iter()
            .map(|p| loss_latency_term(p.rtt, p.plr, p.mss_bytes, T::one()).bps()),
    );
    let headroom = access_bit_rate.bps() / required;
    Ok(TrapAssessment {
        required_rate: BitRate::from_bps(required),
        headroom,
        trapped: headroom > threshold,
        band: WasteBand::classify(headroom),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(rtt_ms: f64, plr_pct: f64, br_mbps: f64) -> PathMetrics<f64> {
        PathMetrics::new(
            Seconds::from_millis(rtt_ms),
            LossRatio::from_percent(plr_pct).unwrap(),
            BitRate::from_mbps(br_mbps),
        )
        .unwrap()
    }

    #[test]
    fn table_cells_from_point_evaluation() {
        let e = mathis_throughput(&path(1.0, 1.0, 10_000.0));
        assert!((e.mathis_term.mbps() - 116.8).abs() < 1e-9);
        assert_eq!(e.mathis_term.mbps().round(), 117.0);
        assert_eq!(e.limited_by, Limit::LatencyLoss);

        let e = mathis_throughput(&path(5.0, 0.10, 10_000.0));
        assert_eq!(e.mathis_term.mbps().round(), 74.0);
        let e = mathis_throughput(&path(10.0, 0.30, 10_000.0));
        assert_eq!(e.mathis_term.mbps().round(), 21.0);
    }

    #[test]
    fn bit_rate_equal_to_bound_is_bit_rate_limited() {
        let p = path(1.0, 1.0, 1.0);
        let term = mathis_throughput(&p).mathis_term;
        let p = p.with_bit_rate(term).unwrap();
        let e = mathis_throughput(&p);
        assert_eq!(e.limited_by, Limit::BitRate);
        assert_eq!(e.utilization, 1.0);
        assert_eq!(e.throughput, term);
    }

    #[test]
    fn zero_loss_and_zero_rtt_are_domain_errors() {
        let r = PathMetrics::new(Seconds::from_millis(1.0), LossRatio::zero(), BitRate::from_mbps(1.0));
        assert!(matches!(r, Err(Error::Domain(_))));
        let r = PathMetrics::new(
            Seconds::from_secs(0.0),
            LossRatio::from_percent(1.0).unwrap(),
            BitRate::from_mbps(1.0),
        );
        assert!(matches!(r, Err(Error::Domain(_))));
    }

    #[test]
    fn rejects_bad_mss_and_c() {
        let rtt = Seconds::from_millis(1.0);
        let plr = LossRatio::from_percent(1.0).unwrap();
        let br = BitRate::from_mbps(1.0);
        assert!(PathMetrics::with_params(rtt, plr, 0.0, 1.0, br).is_err());
        assert!(PathMetrics::with_params(rtt, plr, 1460.0, 0.4, br).is_err());
        assert!(PathMetrics::with_params(rtt, plr, 1460.0, 2.1, br).is_err());
        assert!(PathMetrics::with_params(rtt, plr, 1460.0, 1.2, BitRate::from_bps(0.0)).is_err());
    }

    #[test]
    fn single_cell_table() {
        let t = throughput_table(
            &[Seconds::from_millis(0.5f64)],
            &[LossRatio::from_percent(0.05).unwrap()],
            1460.0,
            1.0,
        )
        .unwrap();
        assert_eq!(t.len(), 1);
        assert!((t[0][0].mbps() - 1044.7).abs() < 0.05);
        assert_eq!(t[0][0].mbps().round(), 1045.0);
    }

    #[test]
    fn halving_rtt_doubles_every_cell() {
        let plrs: Vec<LossRatio<f64>> = [0.05, 0.3, 1.0]
            .iter()
            .map(|&p| LossRatio::from_percent(p).unwrap())
            .collect();
        let rtts: Vec<_> = [1.0, 4.0, 10.0].iter().map(|&r| Seconds::from_millis(r)).collect();
        let half: Vec<_> = [0.5, 2.0, 5.0].iter().map(|&r| Seconds::from_millis(r)).collect();
        let a = throughput_table(&rtts, &plrs, 1460.0, 1.0).unwrap();
        let b = throughput_table(&half, &plrs, 1460.0, 1.0).unwrap();
        for (ra, rb) in a.iter().zip(&b) {
            for (x, y) in ra.iter().zip(rb) {
                assert!((y.bps() / x.bps() - 2.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn empty_grid_rejected() {
        assert!(throughput_table::<f64>(&[], &[LossRatio::from_percent(1.0).unwrap()], 1460.0, 1.0).is_err());
    }

    #[test]
    fn trap_single_flow() {
        let flow = path(10.0, 0.25, 100.0);
        let a = ubb_trap_headroom(BitRate::from_mbps(100.0), &[flow], 1.0).unwrap();
        assert!((a.required_rate.mbps() - 23.36).abs() < 1e-9);
        assert!((a.headroom - 4.280_821_917_808_219).abs() < 1e-12);
        assert!(a.trapped);
        assert_eq!(a.band, WasteBand::High);
        assert_eq!(a.required_rate.mbps().round(), 23.0);
    }

    #[test]
    fn trap_boundary_and_linearity() {
        let flow = path(10.0, 0.25, 100.0);
        let one = ubb_trap_headroom(BitRate::from_mbps(100.0), &[flow], 1.0).unwrap();
        let two = ubb_trap_headroom(BitRate::from_mbps(100.0), &[flow, flow], 1.0).unwrap();
        assert!((two.required_rate.bps() - 2.0 * one.required_rate.bps()).abs() < 1e-6);

        let exact = ubb_trap_headroom(one.required_rate, &[flow], 1.0).unwrap();
        assert_eq!(exact.headroom, 1.0);
        assert!(!exact.trapped);
        assert_eq!(exact.band, WasteBand::None);
        assert_eq!(exact.utilization(), 1.0);
    }

    #[test]
    fn trap_ignores_flow_constant() {
        let base = path(10.0, 0.25, 100.0);
        let tuned = PathMetrics::with_params(base.rtt(), base.plr(), 1460.0, 1.2, base.bit_rate()).unwrap();
        let a = ubb_trap_headroom(BitRate::from_mbps(100.0), &[base], 1.0).unwrap();
        let b = ubb_trap_headroom(BitRate::from_mbps(100.0), &[tuned], 1.0).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn waste_bands() {
        assert_eq!(WasteBand::classify(0.5), WasteBand::None);
        assert_eq!(WasteBand::classify(1.5), WasteBand::Low);
        assert_eq!(WasteBand::classify(2.0), WasteBand::Low);
        assert_eq!(WasteBand::classify(9.0), WasteBand::High);
        assert_eq!(WasteBand::classify(10.5), WasteBand::Severe);
    }

    #[test]
    fn plr_composition() {
        let f = |x: f64| LossRatio::from_fraction(x).unwrap();
        let total = compose_plr(&PlrBreakdown::new(f(0.001), f(0.002)).unwrap());
        assert!((total.fraction() - 0.003).abs() < 1e-18);
        let total = compose_plr(&PlrBreakdown::new(f(0.0), f(0.0042)).unwrap());
        assert_eq!(total.fraction(), 0.0042);
        assert!(PlrBreakdown::new(f(0.6), f(0.5)).is_err());
    }

    #[test]
    fn measured_mobile_loss_range_is_accepted() {
        for pct in [0.38, 0.83] {
            let plr = LossRatio::from_percent(pct).unwrap();
            let p = PathMetrics::new(Seconds::from_millis(20.0), plr, BitRate::from_mbps(50.0));
            assert!(p.is_ok());
        }
    }

    #[test]
    fn required_rtt_examples() {
        let plr = LossRatio::from_fraction(1e-4f64).unwrap();
        let rtt = required_rtt_for_throughput(BitRate::from_gbps(1.0), plr, 1460.0, 1.0).unwrap();
        assert!((rtt.millis() - 1.168).abs() < 1e-12);
        let rtt2 = required_rtt_for_throughput(BitRate::from_gbps(2.0), plr, 1460.0, 1.0).unwrap();
        assert!((rtt2.secs() * 2.0 - rtt.secs()).abs() < 1e-18);
        assert!(matches!(
            required_rtt_for_throughput(BitRate::from_bps(0.0), plr, 1460.0, 1.0),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn required_rtt_recovers_table_cell() {
        let p = path(10.0, 0.30, 10_000.0);
        let term = mathis_throughput(&p).mathis_term;
        let rtt = required_rtt_for_throughput(term, p.plr(), 1460.0, 1.0).unwrap();
        assert!((rtt.millis() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn works_in_single_precision() {
        let p = PathMetrics::new(
            Seconds::from_millis(1.0f32),
            LossRatio::from_percent(1.0f32).unwrap(),
            BitRate::from_gbps(10.0f32),
        )
        .unwrap();
        assert_eq!(mathis_throughput(&p).mathis_term.mbps().round(), 117.0);
    }
}
