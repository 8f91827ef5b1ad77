//! Unit-safe value types used throughout the engine.
//!
//! Every quantity is an integer fixed-point value with an explicit scale,
//! so dimensioning arithmetic is exact and reproducible. The only
//! floating-point entry points are the scenario-file constructors, which
//! round once (half-up) onto the fixed grid.

use std::fmt;

use crate::error::{Error, Result};

/// Round-half-up integer division; ties round toward +infinity.
pub(crate) fn div_round_half_up(num: i128, den: i128) -> i128 {
    debug_assert!(den > 0, "divisor must be positive");
    (2 * num + den).div_euclid(2 * den)
}

/// Convert a scenario-file decimal to a fixed-point integer at `scale`.
pub(crate) fn decimal_to_scaled(value: f64, scale: i128, field: &str) -> Result<i128> {
    if !value.is_finite() {
        return Err(Error::validation(field, "must be a finite number"));
    }
    let scaled = value * scale as f64;
    if scaled.abs() >= 9.0e15 {
        return Err(Error::validation(field, "magnitude too large"));
    }
    Ok((scaled + 0.5).floor() as i128)
}

/// Link or aggregate throughput in kilobits per second.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DataRate(u64);

impl DataRate {
    pub const ZERO: DataRate = DataRate(0);
    /// Rates are capped at 10^12 kb/s so sums and integer scaling stay exact.
    pub const MAX_KBPS: u64 = 1_000_000_000_000;

    pub const fn from_kbps(kbps: u64) -> DataRate {
        DataRate(kbps)
    }

    pub const fn from_mbps(mbps: u64) -> DataRate {
        DataRate(mbps * 1000)
    }

    pub fn from_mbps_f64(mbps: f64, field: &str) -> Result<DataRate> {
        let kbps = decimal_to_scaled(mbps, 1000, field)?;
        if kbps < 0 {
            return Err(Error::validation(field, "must be non-negative"));
        }
        if kbps as u64 > Self::MAX_KBPS {
            return Err(Error::validation(field, "exceeds 10^12 kb/s"));
        }
        Ok(DataRate(kbps as u64))
    }

    pub const fn kbps(self) -> u64 {
        self.0
    }

    pub fn mbps_f64(self) -> f64 {
        self.0 as f64 / 1000.0
    }

    pub fn scale(self, count: u64) -> DataRate {
        DataRate(self.0.checked_mul(count).expect("data rate overflow"))
    }
}

impl std::ops::Add for DataRate {
    type Output = DataRate;
    fn add(self, rhs: DataRate) -> DataRate {
        DataRate(self.0.checked_add(rhs.0).expect("data rate overflow"))
    }
}

impl fmt::Display for DataRate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 < 1000 && self.0 != 0 {
            return write!(f, "{} kb/s", self.0);
        }
        let whole = self.0 / 1000;
        let frac = self.0 % 1000;
        if frac == 0 {
            write!(f, "{whole} Mb/s")
        } else {
            let mut digits = format!("{frac:03}");
            while digits.ends_with('0') {
                digits.pop();
            }
            write!(f, "{whole}.{digits} Mb/s")
        }
    }
}

/// Surface area in km², fixed point with two fractional digits.
/// Strictly positive: zero-area coverage or service zones are rejected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Area(u64);

impl Area {
    pub const fn from_hundredths_km2(hundredths: u64) -> Area {
        debug_assert!(hundredths > 0);
        Area(hundredths)
    }

    pub const fn from_km2(km2: u64) -> Area {
        debug_assert!(km2 > 0);
        Area(km2 * 100)
    }

    pub fn from_km2_f64(km2: f64, field: &str) -> Result<Area> {
        let hundredths = decimal_to_scaled(km2, 100, field)?;
        if hundredths <= 0 {
            return Err(Error::validation(field, "must be strictly positive"));
        }
        Ok(Area(hundredths as u64))
    }

    pub const fn hundredths_km2(self) -> u64 {
        self.0
    }

    pub fn km2_f64(self) -> f64 {
        self.0 as f64 / 100.0
    }
}

impl fmt::Display for Area {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let whole = self.0 / 100;
        let frac = self.0 % 100;
        if frac == 0 {
            write!(f, "{whole} km²")
        } else {
            write!(f, "{whole}.{frac:02} km²")
        }
    }
}

/// Long-run fraction of time a link meets its rate target, in [0, 1).
///
/// Stored as parts per billion (nine fractional digits): scenario inputs
/// use at most four digits, availability algebra carries nine internally
/// and reports results rounded to six.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Availability(u64);

impl Availability {
    pub const SCALE: u64 = 1_000_000_000;
    /// Highest representable value, 0.999999999.
    pub const MAX: Availability = Availability(Self::SCALE - 1);

    pub fn from_ppb(ppb: u64) -> Result<Availability> {
        if ppb >= Self::SCALE {
            return Err(Error::validation("availability", "must be below 1"));
        }
        Ok(Availability(ppb))
    }

    /// Const constructor for compile-time catalog values.
    pub const fn const_from_ppb(ppb: u64) -> Availability {
        assert!(ppb < Availability::SCALE);
        Availability(ppb)
    }

    pub fn from_fraction_f64(fraction: f64, field: &str) -> Result<Availability> {
        let ppb = decimal_to_scaled(fraction, Self::SCALE as i128, field)?;
        if ppb < 0 || ppb as u64 >= Self::SCALE {
            return Err(Error::validation(field, "must lie in [0, 1)"));
        }
        Ok(Availability(ppb as u64))
    }

    pub const fn ppb(self) -> u64 {
        self.0
    }

    /// Unavailability `1 − a`, also in parts per billion.
    pub const fn complement_ppb(self) -> u64 {
        Self::SCALE - self.0
    }

    pub fn fraction_f64(self) -> f64 {
        self.0 as f64 / Self::SCALE as f64
    }

    /// Round to six fractional digits (reporting precision), half-up.
    /// A value that would round up to 1.0 is capped at 0.999999.
    pub fn round_to_micro(self) -> Availability {
        let rounded = div_round_half_up(self.0 as i128, 1000) as u64 * 1000;
        if rounded >= Self::SCALE {
            Availability(Self::SCALE - 1000)
        } else {
            Availability(rounded)
        }
    }
}

impl fmt::Display for Availability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut digits = format!("{:09}", self.0);
        while digits.len() > 1 && digits.ends_with('0') {
            digits.pop();
        }
        write!(f, "0.{digits}")
    }
}

/// Subscriber density in subscribers per km², four fractional digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SubscriberDensity(u64);

impl SubscriberDensity {
    pub const fn from_e4(e4: u64) -> SubscriberDensity {
        SubscriberDensity(e4)
    }

    pub const fn from_per_km2(per_km2: u64) -> SubscriberDensity {
        SubscriberDensity(per_km2 * 10_000)
    }

    pub fn from_per_km2_f64(value: f64, field: &str) -> Result<SubscriberDensity> {
        let e4 = decimal_to_scaled(value, 10_000, field)?;
        if e4 < 0 {
            return Err(Error::validation(field, "must be non-negative"));
        }
        Ok(SubscriberDensity(e4 as u64))
    }

    pub const fn e4(self) -> u64 {
        self.0
    }
}

impl fmt::Display for SubscriberDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_fixed(self.0 as i128, 10_000))?;
        write!(f, " /km²")
    }
}

/// Oversubscription factor between sold and provisioned capacity,
/// two fractional digits, at least 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ContentionRatio(u32);

impl ContentionRatio {
    pub const fn from_hundredths(hundredths: u32) -> ContentionRatio {
        debug_assert!(hundredths >= 100);
        ContentionRatio(hundredths)
    }

    pub fn from_f64(value: f64, field: &str) -> Result<ContentionRatio> {
        let hundredths = decimal_to_scaled(value, 100, field)?;
        if hundredths < 100 {
            return Err(Error::validation(field, "must be at least 1"));
        }
        if hundredths > u32::MAX as i128 {
            return Err(Error::validation(field, "too large"));
        }
        Ok(ContentionRatio(hundredths as u32))
    }

    pub const fn hundredths(self) -> u32 {
        self.0
    }
}

impl fmt::Display for ContentionRatio {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:1", format_fixed(self.0 as i128, 100))
    }
}

/// Spectral efficiency in bit/s per Hz, four fractional digits, positive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpectralEfficiency(u32);

impl SpectralEfficiency {
    pub const fn from_e4(e4: u32) -> SpectralEfficiency {
        debug_assert!(e4 > 0);
        SpectralEfficiency(e4)
    }

    pub fn from_f64(value: f64, field: &str) -> Result<SpectralEfficiency> {
        let e4 = decimal_to_scaled(value, 10_000, field)?;
        if e4 <= 0 {
            return Err(Error::validation(field, "must be strictly positive"));
        }
        if e4 > u32::MAX as i128 {
            return Err(Error::validation(field, "too large"));
        }
        Ok(SpectralEfficiency(e4 as u32))
    }

    pub const fn e4(self) -> u32 {
        self.0
    }
}

impl fmt::Display for SpectralEfficiency {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} b/s/Hz", format_fixed(self.0 as i128, 10_000))
    }
}

/// Redundancy share of a cell layout, four fractional digits in [0, 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RedundancyFraction(u32);

impl RedundancyFraction {
    pub const fn from_e4(e4: u32) -> RedundancyFraction {
        debug_assert!(e4 < 10_000);
        RedundancyFraction(e4)
    }

    pub fn from_f64(value: f64, field: &str) -> Result<RedundancyFraction> {
        let e4 = decimal_to_scaled(value, 10_000, field)?;
        if !(0..10_000).contains(&e4) {
            return Err(Error::validation(field, "must lie in [0, 1)"));
        }
        Ok(RedundancyFraction(e4 as u32))
    }

    pub const fn e4(self) -> u32 {
        self.0
    }
}

impl fmt::Display for RedundancyFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", format_fixed(self.0 as i128, 10_000))
    }
}

/// Radio-frequency bandwidth at 0.1 MHz resolution.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BandwidthMhz(u64);

impl BandwidthMhz {
    pub const fn from_tenths(tenths: u64) -> BandwidthMhz {
        BandwidthMhz(tenths)
    }

    pub const fn tenths(self) -> u64 {
        self.0
    }

    pub fn mhz_f64(self) -> f64 {
        self.0 as f64 / 10.0
    }
}

impl fmt::Display for BandwidthMhz {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{} MHz", self.0 / 10, self.0 % 10)
    }
}

/// Percentage with one fractional digit.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Percent(u32);

impl Percent {
    pub const fn from_tenths(tenths: u32) -> Percent {
        Percent(tenths)
    }

    pub const fn tenths(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Percent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.0 / 10, self.0 % 10)
    }
}

/// Areal throughput in Mb/s per km², two fractional digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ThroughputDensity(u64);

impl ThroughputDensity {
    pub const fn from_hundredths(hundredths: u64) -> ThroughputDensity {
        ThroughputDensity(hundredths)
    }

    pub const fn hundredths(self) -> u64 {
        self.0
    }
}

impl fmt::Display for ThroughputDensity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:02} Mb/s/km²", self.0 / 100, self.0 % 100)
    }
}

/// Yearly downtime in hours, two fractional digits.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DowntimeHours(u64);

impl DowntimeHours {
    pub const fn from_hundredths(hundredths: u64) -> DowntimeHours {
        DowntimeHours(hundredths)
    }

    pub const fn hundredths(self) -> u64 {
        self.0
    }
}

impl fmt::Display for DowntimeHours {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:02} h", self.0 / 100, self.0 % 100)
    }
}

/// Render `value / scale` as a plain decimal, trimming trailing zeros.
fn format_fixed(value: i128, scale: i128) -> String {
    let whole = value / scale;
    let frac = (value % scale).unsigned_abs();
    if frac == 0 {
        return whole.to_string();
    }
    let width = (scale.ilog10()) as usize;
    let mut digits = format!("{frac:0width$}");
    while digits.ends_with('0') {
        digits.pop();
    }
    format!("{whole}.{digits}")
}
