//! Unit-carrying newtypes.
//!
//! Every quantity is stored in one canonical unit (seconds, bits per second,
//! loss fraction). Other units only appear in the named constructors and
//! accessors, so a millisecond value can never be mistaken for seconds.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// A time interval, stored in seconds.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Seconds<T>(T);

impl<T: Scalar> Seconds<T> {
    pub fn from_secs(secs: T) -> Self {
        Seconds(secs)
    }

    pub fn from_millis(ms: T) -> Self {
        Seconds(ms / T::lit(1e3))
    }

    pub fn secs(self) -> T {
        self.0
    }

    pub fn millis(self) -> T {
        self.0 * T::lit(1e3)
    }
}

impl<T: Scalar> fmt::Display for Seconds<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ms", self.millis())
    }
}

/// A data rate, stored in bits per second.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct BitRate<T>(T);

impl<T: Scalar> BitRate<T> {
    pub fn from_bps(bps: T) -> Self {
        BitRate(bps)
    }

    pub fn from_kbps(kbps: T) -> Self {
        BitRate(kbps * T::lit(1e3))
    }

    pub fn from_mbps(mbps: T) -> Self {
        BitRate(mbps * T::lit(1e6))
    }

    pub fn from_gbps(gbps: T) -> Self {
        BitRate(gbps * T::lit(1e9))
    }

    pub fn bps(self) -> T {
        self.0
    }

    pub fn kbps(self) -> T {
        self.0 / T::lit(1e3)
    }

    pub fn mbps(self) -> T {
        self.0 / T::lit(1e6)
    }

    pub fn gbps(self) -> T {
        self.0 / T::lit(1e9)
    }
}

impl<T: Scalar> fmt::Display for BitRate<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} Mbit/s", self.mbps())
    }
}

/// Packet-loss ratio, stored as a fraction in `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct LossRatio<T>(T);

impl<T: Scalar> LossRatio<T> {
    pub fn from_fraction(fraction: T) -> Result<Self> {
        if !(fraction >= T::zero() && fraction <= T::one()) {
            return Err(Error::invalid("plr", format!("{fraction} is not a fraction in [0, 1]")));
        }
        Ok(LossRatio(fraction))
    }

    pub fn from_percent(percent: T) -> Result<Self> {
        Self::from_fraction(percent / T::lit(100.0))
    }

    pub fn zero() -> Self {
        LossRatio(T::zero())
    }

    pub fn fraction(self) -> T {
        self.0
    }

    pub fn percent(self) -> T {
        self.0 * T::lit(100.0)
    }
}

impl<T: Scalar> fmt::Display for LossRatio<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} %", self.percent())
    }
}
