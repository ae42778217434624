//! Burst detection: daily counts scored against a trailing baseline.
//!
//! A gram trends on a day when its count that day is a large multiple of its
//! trailing average. The epsilon floor keeps rise-from-zero grams — the
//! strongest trend signal, since they have no history at all — at finite but
//! very large scores instead of dividing by zero.

use crate::error::Error;
use crate::store::GramStore;
use crate::time::{day_of_bin, day_start_bin, DayIndex};
use alloc::string::{String, ToString};
use alloc::vec::Vec;

/// Detector parameters. Defaults: 30-day baseline, epsilon 0.5, spike
/// threshold 100, minimum day count 5.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrendConfig {
    /// Trailing window length in days, excluding the scored day.
    pub baseline_days: u32,
    /// Floor for the baseline denominator; must be positive.
    pub epsilon: f64,
    /// Minimum spike score for a gram to be reported.
    pub threshold: f64,
    /// Minimum day count for a gram to be reported.
    pub min_count: u64,
}

impl Default for TrendConfig {
    fn default() -> Self {
        TrendConfig {
            baseline_days: 30,
            epsilon: 0.5,
            threshold: 100.0,
            min_count: 5,
        }
    }
}

/// A gram flagged as bursting on a given day.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendCandidate {
    pub gram: String,
    pub day: DayIndex,
    pub day_count: u64,
    /// Mean daily count over the trailing window.
    pub baseline: f64,
    /// `day_count / max(baseline, epsilon)`.
    pub spike_score: f64,
}

/// Result of a day scan; `day_in_range` is false when the requested day lies
/// outside the corpus bin range (the candidate list is then empty).
#[derive(Debug, Clone, PartialEq)]
pub struct TrendScan {
    pub candidates: Vec<TrendCandidate>,
    pub day_in_range: bool,
}

/// Ratio of a day count to its baseline, floored at `epsilon`.
pub fn spike_score(day_count: u64, baseline: f64, epsilon: f64) -> Result<f64, Error> {
    if !(epsilon > 0.0) {
        return Err(Error::NonPositiveEpsilon);
    }
    Ok(day_count as f64 / baseline.max(epsilon))
}

/// Mean daily count over the `window_days` days strictly before `day`.
///
/// Days before the corpus's first bin count as zero; the divisor is always
/// `window_days`.
pub fn baseline(
    store: &GramStore,
    gram: &str,
    day: DayIndex,
    window_days: u32,
) -> Result<f64, Error> {
    if window_days == 0 {
        return Err(Error::ZeroWindowDays);
    }
    let first = DayIndex(day.0 - i64::from(window_days));
    let counts = store.daily_counts(gram, first, day.pred(), store.tz())?;
    Ok(counts.iter().sum::<u64>() as f64 / f64::from(window_days))
}

/// All grams trending on `day`: day count at least `min_count` and spike
/// score at least `threshold`, sorted by spike score descending, then day
/// count descending, then gram ascending.
pub fn trending_grams(
    store: &GramStore,
    day: DayIndex,
    cfg: &TrendConfig,
) -> Result<TrendScan, Error> {
    if !(cfg.epsilon > 0.0) {
        return Err(Error::NonPositiveEpsilon);
    }
    if cfg.baseline_days == 0 {
        return Err(Error::ZeroWindowDays);
    }
    let Some((lo, hi)) = store.bin_range() else {
        return Ok(TrendScan {
            candidates: Vec::new(),
            day_in_range: false,
        });
    };
    let tz = store.tz();
    if day < day_of_bin(lo, tz) || day > day_of_bin(hi, tz) {
        return Ok(TrendScan {
            candidates: Vec::new(),
            day_in_range: false,
        });
    }

    let window_first = DayIndex(day.0 - i64::from(cfg.baseline_days));
    let window_start_bin = day_start_bin(window_first, tz).0;
    let day_start = day_start_bin(day, tz).0;
    let day_end = day_start_bin(day.succ(), tz).0 - 1;

    let mut candidates = Vec::new();
    for series in store.iter_series() {
        let mut day_count = 0u64;
        let mut trailing = 0u64;
        let from = series.runs.partition_point(|&(bin, _)| bin < window_start_bin);
        for &(bin, count) in &series.runs[from..] {
            if bin > day_end {
                break;
            }
            if bin >= day_start {
                day_count += u64::from(count);
            } else {
                trailing += u64::from(count);
            }
        }
        if day_count < cfg.min_count {
            continue;
        }
        let base = trailing as f64 / f64::from(cfg.baseline_days);
        let score = day_count as f64 / base.max(cfg.epsilon);
        if score >= cfg.threshold {
            candidates.push(TrendCandidate {
                gram: series.gram.to_string(),
                day,
                day_count,
                baseline: base,
                spike_score: score,
            });
        }
    }
    candidates.sort_unstable_by(|a, b| {
        b.spike_score
            .total_cmp(&a.spike_score)
            .then_with(|| b.day_count.cmp(&a.day_count))
            .then_with(|| a.gram.cmp(&b.gram))
    });
    Ok(TrendScan {
        candidates,
        day_in_range: true,
    })
}
