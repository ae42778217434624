//! Hour bins and local calendar days.
//!
//! All frequency series are kept at hourly resolution: a [`TimeBin`] is
//! `floor(ts / 3600)` for a UTC epoch timestamp. Daily aggregation groups 24
//! consecutive bins into a local calendar day under a configurable UTC
//! offset, so "day" always means a contiguous block of hour bins and days
//! partition the bin axis exactly.

use crate::error::Error;
use alloc::string::ToString;
use core::fmt;
use core::str::FromStr;

/// Seconds per hour bin.
pub const BIN_SECONDS: u64 = 3600;

/// Hour bins per calendar day.
pub const DAY_BINS: u32 = 24;

/// One hour of wall-clock time; index `floor(ts / 3600)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimeBin(pub u32);

impl TimeBin {
    /// UTC epoch seconds at which this bin starts.
    pub fn start_ts(self) -> u64 {
        u64::from(self.0) * BIN_SECONDS
    }
}

impl fmt::Display for TimeBin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Local calendar day, counted from 1970-01-01 in the configured offset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DayIndex(pub i64);

impl DayIndex {
    pub fn pred(self) -> DayIndex {
        DayIndex(self.0 - 1)
    }

    pub fn succ(self) -> DayIndex {
        DayIndex(self.0 + 1)
    }
}

/// Fixed UTC offset used to align daily aggregation, e.g. `+08:00`.
///
/// Offsets are stored in seconds and accepted in the range ±18 hours. The
/// default is +08:00, which keeps daily aggregation aligned with China
/// Standard Time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TzOffset {
    seconds: i32,
}

const MAX_OFFSET_SECS: i32 = 18 * 3600;

impl TzOffset {
    pub const UTC: TzOffset = TzOffset { seconds: 0 };

    pub fn from_seconds(seconds: i32) -> Result<TzOffset, Error> {
        if seconds.abs() > MAX_OFFSET_SECS {
            return Err(Error::InvalidTzOffset(seconds.to_string()));
        }
        Ok(TzOffset { seconds })
    }

    pub fn seconds(self) -> i32 {
        self.seconds
    }
}

impl Default for TzOffset {
    fn default() -> Self {
        TzOffset { seconds: 8 * 3600 }
    }
}

impl FromStr for TzOffset {
    type Err = Error;

    /// Parses `Z`, `+HH:MM`, or `-HH:MM`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "Z" || s == "z" {
            return Ok(TzOffset::UTC);
        }
        let bad = || Error::InvalidTzOffset(s.to_string());
        let (sign, rest) = match s.as_bytes().first() {
            Some(b'+') => (1i32, &s[1..]),
            Some(b'-') => (-1i32, &s[1..]),
            _ => return Err(bad()),
        };
        let (hh, mm) = rest.split_once(':').ok_or_else(bad)?;
        if hh.len() != 2 || mm.len() != 2 {
            return Err(bad());
        }
        let hours: i32 = hh.parse().map_err(|_| bad())?;
        let minutes: i32 = mm.parse().map_err(|_| bad())?;
        if minutes >= 60 {
            return Err(bad());
        }
        TzOffset::from_seconds(sign * (hours * 3600 + minutes * 60)).map_err(|_| bad())
    }
}

impl fmt::Display for TzOffset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.seconds < 0 { '-' } else { '+' };
        let abs = self.seconds.unsigned_abs();
        write!(f, "{}{:02}:{:02}", sign, abs / 3600, (abs % 3600) / 60)
    }
}

/// Hour bin containing `ts`. Total and monotone in `ts`.
pub fn bin_of(ts: u64) -> TimeBin {
    TimeBin(u32::try_from(ts / BIN_SECONDS).unwrap_or(u32::MAX))
}

/// Local calendar day containing `ts` under `tz`.
pub fn day_of(ts: u64, tz: TzOffset) -> DayIndex {
    let shifted = ts as i64 + i64::from(tz.seconds());
    DayIndex(shifted.div_euclid(86_400))
}

/// Local calendar day containing an hour bin.
///
/// Inverse of [`day_start_bin`]: every day owns exactly [`DAY_BINS`]
/// consecutive bins regardless of the offset value.
pub fn day_of_bin(bin: TimeBin, tz: TzOffset) -> DayIndex {
    let shifted = bin.start_ts() as i64 + i64::from(tz.seconds());
    DayIndex(shifted.div_euclid(86_400))
}

/// First hour bin of a local calendar day.
///
/// Days that start before the epoch clamp to bin 0.
pub fn day_start_bin(day: DayIndex, tz: TzOffset) -> TimeBin {
    let start_ts = day.0 * 86_400 - i64::from(tz.seconds());
    let bin = start_ts.div_euclid(BIN_SECONDS as i64);
    TimeBin(bin.clamp(0, i64::from(u32::MAX)) as u32)
}

/// Position of a bin inside its local day, `0..24`. Drives the diurnal cycle.
pub fn hour_of_day(bin: TimeBin, tz: TzOffset) -> u32 {
    let shifted = bin.start_ts() as i64 + i64::from(tz.seconds());
    (shifted.rem_euclid(86_400) / BIN_SECONDS as i64) as u32
}
