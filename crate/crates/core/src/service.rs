//! Service throughput requirements and feasibility against a path.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::throughput::{mathis_throughput, required_rtt_for_throughput, PathMetrics, ThroughputEstimate};
use crate::units::{BitRate, Seconds};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ServiceKind {
    Video,
    Movar,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ServiceProfile<T> {
    pub name: String,
    pub kind: ServiceKind,
    /// Throughput to plan for; the upper end when a range is published.
    pub required_throughput: BitRate<T>,
    /// Published range, when the source gives one.
    pub throughput_range: Option<(BitRate<T>, BitRate<T>)>,
    pub max_rtt: Option<Seconds<T>>,
    pub live: bool,
    /// Maximum continuous viewing time, minutes.
    pub max_time_of_use_min: Option<u32>,
    pub notes: String,
}

impl<T: Scalar> ServiceProfile<T> {
    pub fn new(name: impl Into<String>, kind: ServiceKind, required_throughput: BitRate<T>) -> Result<Self> {
        let p = Self {
            name: name.into(),
            kind,
            required_throughput,
            throughput_range: None,
            max_rtt: None,
            live: false,
            max_time_of_use_min: None,
            notes: String::new(),
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(Error::invalid("name", "service name is empty"));
        }
        let r = self.required_throughput.bps();
        if !(r > T::zero()) || !r.is_finite() {
            return Err(Error::invalid(
                "required_throughput",
                format!("{}: must be > 0", self.name),
            ));
        }
        if let Some(rtt) = self.max_rtt {
            if !(rtt.secs() > T::zero()) {
                return Err(Error::invalid("max_rtt", format!("{}: must be > 0", self.name)));
            }
        }
        if let Some((lo, hi)) = self.throughput_range {
            if !(lo.bps() > T::zero() && lo <= hi) {
                return Err(Error::invalid("throughput_range", format!("{}: bad range", self.name)));
            }
        }
        Ok(())
    }

    fn range_mbps(mut self, lo: f64, hi: f64) -> Self {
        self.throughput_range = Some((BitRate::from_mbps(T::lit(lo)), BitRate::from_mbps(T::lit(hi))));
        self.required_throughput = BitRate::from_mbps(T::lit(hi));
        self
    }

    fn live(mut self) -> Self {
        self.live = true;
        self
    }

    fn notes(mut self, notes: &str) -> Self {
        self.notes = notes.to_string();
        self
    }

    fn time_of_use(mut self, minutes: u32) -> Self {
        self.max_time_of_use_min = Some(minutes);
        self
    }
}

fn video<T: Scalar>(name: &str, mbps: f64) -> ServiceProfile<T> {
    ServiceProfile::new(name, ServiceKind::Video, BitRate::from_mbps(T::lit(mbps))).expect("catalog entry")
}

fn movar<T: Scalar>(name: &str, mbps: f64) -> ServiceProfile<T> {
    ServiceProfile::new(name, ServiceKind::Movar, BitRate::from_mbps(T::lit(mbps))).expect("catalog entry")
}

/// Published video-platform and VR/AR stage requirements.
pub fn builtin_catalog<T: Scalar>() -> Vec<ServiceProfile<T>> {
    vec![
        video("Netflix SD", 3.0).notes("TV"),
        video("Netflix HD", 5.0).notes("TV"),
        video("Netflix UHD", 25.0).notes("TV"),
        video("YouTube SD Smartphone", 0.5).notes("smartphone"),
        video("YouTube SD TV", 3.0).notes("TV"),
        video("YouTube HD Smartphone", 3.0).notes("smartphone"),
        video("YouTube HD TV", 5.0)
            .range_mbps(2.5, 5.0)
            .notes("TV; 2.5 at 720p"),
        video("YouTube HD TV live", 13.0)
            .range_mbps(7.0, 13.0)
            .live()
            .notes("TV; live"),
        video("YouTube UHD", 25.0).range_mbps(15.0, 25.0).notes("TV"),
        video("Amazon Prime Video SD", 0.9).notes("TV"),
        video("Amazon Prime Video HD", 3.5).notes("TV"),
        video("Apple TV SD", 2.5).notes("TV"),
        video("Apple TV HD", 8.0).notes("TV; 1080p (6.0 at 720p mid definition)"),
        video("DAZN SD Smartphone", 2.0).notes("smartphone"),
        video("DAZN HD Smartphone", 3.5).notes("smartphone"),
        video("DAZN HD TV", 8.0)
            .range_mbps(6.5, 8.0)
            .notes("TV; high frame rate"),
        video("VoD-4K", 15.0).notes("4K video on demand minimum"),
        video("live-4K", 25.0).live().notes("4K live streaming"),
        movar("MoVAR-ES", 25.0)
            .time_of_use(20)
            .notes("Early stage; 2016; 90 deg FOV; 2K 3840x1920; 8 bit; 30 fps; 165:1; 240p"),
        movar("MoVAR-EL", 100.0)
            .time_of_use(20)
            .notes("Entry level; 2018; 90 deg FOV; 4K 7680x3840; 8 bit; 30 fps; 165:1; SD"),
        movar("MoVAR-AE", 400.0)
            .time_of_use(60)
            .notes("Advanced experience; 2021; 120 deg FOV; 8K 11520x5760; 10 bit; 60 fps; 215:1; HD"),
        {
            let mut ue = movar("MoVAR-UE", 1000.0)
                .time_of_use(60)
                .notes("Ultimate experience; >2021; 120 deg FOV; 16K 23040x11520; 12 bit; 120 fps; 350:1; UHD");
            ue.max_rtt = Some(Seconds::from_millis(T::one()));
            ue
        },
    ]
}

/// Case-insensitive lookup by name.
pub fn lookup<'a, T>(catalog: &'a [ServiceProfile<T>], name: &str) -> Result<&'a ServiceProfile<T>> {
    catalog
        .iter()
        .find(|s| s.name.eq_ignore_ascii_case(name.trim()))
        .ok_or_else(|| Error::UnknownService(name.to_string()))
}

/// Pixel budget behind a VR/AR throughput requirement.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MovarParams<T> {
    /// Foveal plus peripheral pixels.
    pub total_pixels: T,
    pub bits_per_pixel: T,
    /// Frames per second.
    pub frame_rate: T,
    pub compression_min: T,
    pub compression_max: T,
    /// Optional workload reduction from foveated rendering, applied before compression.
    pub foveation_divisor: Option<T>,
}

impl<T: Scalar> Default for MovarParams<T> {
    fn default() -> Self {
        Self {
            total_pixels: T::lit(215e6),
            bits_per_pixel: T::lit(8.0),
            frame_rate: T::lit(30.0),
            compression_min: T::lit(15.0),
            compression_max: T::lit(30.0),
            foveation_divisor: None,
        }
    }
}

impl<T: Scalar> MovarParams<T> {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("total_pixels", self.total_pixels),
            ("bits_per_pixel", self.bits_per_pixel),
            ("frame_rate", self.frame_rate),
            ("compression_min", self.compression_min),
            ("compression_max", self.compression_max),
        ] {
            if !(v > T::zero()) || !v.is_finite() {
                return Err(Error::invalid(name, format!("{v} must be > 0")));
            }
        }
        if self.compression_min > self.compression_max {
            return Err(Error::invalid("compression_min", "exceeds compression_max"));
        }
        if let Some(d) = self.foveation_divisor {
            if !(d >= T::one()) {
                return Err(Error::invalid("foveation_divisor", format!("{d} must be >= 1")));
            }
        }
        Ok(())
    }
}

/// Figures printed alongside the 215 Mpixel / 8 bit / 30 fps budget.
/// They do not follow from those inputs and are carried for comparison only.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrintedMovarFigures<T> {
    pub gross_rate: BitRate<T>,
    pub net_rate_min: BitRate<T>,
    pub net_rate_max: BitRate<T>,
}

impl<T: Scalar> PrintedMovarFigures<T> {
    pub fn published() -> Self {
        Self {
            gross_rate: BitRate::from_gbps(T::lit(48.0)),
            net_rate_min: BitRate::from_gbps(T::lit(0.7)),
            net_rate_max: BitRate::from_gbps(T::lit(1.4)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MovarRequirement<T> {
    pub gross_rate: BitRate<T>,
    pub net_rate_min: BitRate<T>,
    pub net_rate_max: BitRate<T>,
    pub printed: PrintedMovarFigures<T>,
    /// Computed figures differ from the printed ones by more than 0.1 %.
    pub discrepancy: bool,
}

impl<T: Scalar> MovarRequirement<T> {
    pub fn discrepancy_note(&self) -> Option<String> {
        self.discrepancy.then(|| {
            format!(
                "computed gross {} Gbit/s, net {}-{} Gbit/s; printed reference gross {} Gbit/s, net {}-{} Gbit/s",
                self.gross_rate.gbps(),
                self.net_rate_min.gbps(),
                self.net_rate_max.gbps(),
                self.printed.gross_rate.gbps(),
                self.printed.net_rate_min.gbps(),
                self.printed.net_rate_max.gbps(),
            )
        })
    }
}

pub fn movar_requirement<T: Scalar>(p: &MovarParams<T>) -> Result<MovarRequirement<T>> {
    p.validate()?;
    let mut gross = p.total_pixels * p.bits_per_pixel * p.frame_rate;
    if let Some(d) = p.foveation_divisor {
        gross = gross / d;
    }
    let printed = PrintedMovarFigures::published();
    let net_min = gross / p.compression_max;
    let net_max = gross / p.compression_min;
    let off = |a: T, b: BitRate<T>| ((a - b.bps()) / b.bps()).abs() > T::lit(1e-3);
    let discrepancy =
        off(gross, printed.gross_rate) || off(net_min, printed.net_rate_min) || off(net_max, printed.net_rate_max);
    Ok(MovarRequirement {
        gross_rate: BitRate::from_bps(gross),
        net_rate_min: BitRate::from_bps(net_min),
        net_rate_max: BitRate::from_bps(net_max),
        printed,
        discrepancy,
    })
}

/// Constraint that rules a service out on a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Binding {
    LatencyLoss,
    BitRate,
    None,
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Binding::LatencyLoss => "latency-loss",
            Binding::BitRate => "bit-rate",
            Binding::None => "none",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Feasibility<T> {
    pub feasible: bool,
    pub binding: Binding,
    /// Largest RTT at which the loss/latency bound still meets the requirement.
    pub rtt_needed: Seconds<T>,
    pub estimate: ThroughputEstimate<T>,
}

/// Whether `path` can carry `service`.
///
/// A bit-rate below the requirement is reported as the binding constraint
/// even when the loss/latency bound also falls short.
pub fn feasibility<T: Scalar>(service: &ServiceProfile<T>, path: &PathMetrics<T>) -> Result<Feasibility<T>> {
    service.validate()?;
    let need = service.required_throughput;
    let estimate = mathis_throughput(path);
    let rtt_needed = required_rtt_for_throughput(need, path.plr(), path.mss_bytes(), path.c())?;
    let binding = if path.bit_rate() < need {
        Binding::BitRate
    } else if estimate.mathis_term < need || service.max_rtt.is_some_and(|max| path.rtt() > max) {
        Binding::LatencyLoss
    } else {
        Binding::None
    };
    Ok(Feasibility {
        feasible: binding == Binding::None,
        binding,
        rtt_needed,
        estimate,
    })
}

/// Rate after a source compression gain of `factor`.
pub fn compression_gain<T: Scalar>(current_rate: BitRate<T>, factor: T) -> Result<BitRate<T>> {
    if !(factor >= T::one()) || !factor.is_finite() {
        return Err(Error::invalid("compression_factor", format!("{factor} must be >= 1")));
    }
    Ok(BitRate::from_bps(current_rate.bps() / factor))
}
