//! Civil date helpers bridging `YYYY-MM-DD` strings and day indexes.

use chrono::{DateTime, NaiveDate, SecondsFormat, Utc};
use pointillist_core::{DayIndex, TimeBin};

fn epoch() -> NaiveDate {
    NaiveDate::from_ymd_opt(1970, 1, 1).expect("epoch date")
}

pub fn day_index_of(date: NaiveDate) -> DayIndex {
    DayIndex((date - epoch()).num_days())
}

pub fn date_of(day: DayIndex) -> NaiveDate {
    epoch() + chrono::Duration::days(day.0)
}

pub fn parse_day(s: &str) -> Result<DayIndex, String> {
    NaiveDate::parse_from_str(s, "%Y-%m-%d")
        .map(day_index_of)
        .map_err(|_| format!("invalid date {s:?} (expected YYYY-MM-DD)"))
}

pub fn format_day(day: DayIndex) -> String {
    date_of(day).format("%Y-%m-%d").to_string()
}

/// ISO-8601 UTC instant at which an hour bin starts, e.g.
/// `2011-08-04T00:00:00Z`.
pub fn bin_start_iso(bin: TimeBin) -> String {
    DateTime::<Utc>::from_timestamp(bin.start_ts() as i64, 0)
        .expect("bin start in range")
        .to_rfc3339_opts(SecondsFormat::Secs, true)
}
