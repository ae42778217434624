//! Correlation of count series.
//!
//! Pearson is the default measure; Spearman (Pearson over average ranks) is
//! available for callers that prefer rank correlation. A series with zero
//! variance cannot be correlated, so those return `r = 0.0` with the
//! `zero_variance` flag set instead of failing — flat background grams should
//! silently miss thresholds, not abort a search.

use crate::error::Error;
use crate::math;
use alloc::vec::Vec;

/// Correlation kinds the phrase connector can be configured with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorrelationKind {
    Pearson,
    Spearman,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation {
    pub r: f64,
    /// True when either input was constant; `r` is 0.0 in that case.
    pub zero_variance: bool,
}

/// Pearson product-moment coefficient of two equal-length series.
///
/// Two-pass computation: means first, then centered sums. The result is
/// clamped to `[-1, 1]` and is exactly symmetric in its arguments.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<Correlation, Error> {
    check_pair(x, y)?;
    if is_constant(x) || is_constant(y) {
        return Ok(Correlation {
            r: 0.0,
            zero_variance: true,
        });
    }
    let n = x.len() as f64;
    let mean_x = x.iter().sum::<f64>() / n;
    let mean_y = y.iter().sum::<f64>() / n;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    for (&xi, &yi) in x.iter().zip(y) {
        let dx = xi - mean_x;
        let dy = yi - mean_y;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(Correlation {
            r: 0.0,
            zero_variance: true,
        });
    }
    Ok(Correlation {
        r: (sxy / math::sqrt(sxx * syy)).clamp(-1.0, 1.0),
        zero_variance: false,
    })
}

/// Spearman rank correlation: Pearson over average ranks.
pub fn spearman(x: &[f64], y: &[f64]) -> Result<Correlation, Error> {
    check_pair(x, y)?;
    let rx = average_ranks(x);
    let ry = average_ranks(y);
    pearson(&rx, &ry)
}

pub fn correlation(kind: CorrelationKind, x: &[f64], y: &[f64]) -> Result<Correlation, Error> {
    match kind {
        CorrelationKind::Pearson => pearson(x, y),
        CorrelationKind::Spearman => spearman(x, y),
    }
}

fn check_pair(x: &[f64], y: &[f64]) -> Result<(), Error> {
    if x.len() != y.len() {
        return Err(Error::SeriesLengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(Error::SeriesTooShort { len: x.len() });
    }
    Ok(())
}

fn is_constant(v: &[f64]) -> bool {
    v.iter().all(|&x| x == v[0])
}

/// Ranks with ties assigned the average of the positions they occupy.
fn average_ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_unstable_by(|&a, &b| v[a].total_cmp(&v[b]));
    let mut ranks = alloc::vec![0.0f64; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        // Positions i..=j share the same value; 1-based average rank.
        let rank = (i + j) as f64 / 2.0 + 1.0;
        for &k in &idx[i..=j] {
            ranks[k] = rank;
        }
        i = j + 1;
    }
    ranks
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_series_correlate_perfectly() {
        let r = pearson(&[1.0, 2.0, 3.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(r.r, 1.0);
        assert!(!r.zero_variance);
    }

    #[test]
    fn reversed_series_anticorrelate() {
        let r = pearson(&[1.0, 2.0, 3.0], &[3.0, 2.0, 1.0]).unwrap();
        assert_eq!(r.r, -1.0);
    }

    #[test]
    fn partial_correlation_exact_value() {
        // Verified against the direct centered-sum formula: r = 4 / sqrt(5 * 5).
        let r = pearson(&[1.0, 2.0, 3.0, 4.0], &[1.0, 3.0, 2.0, 4.0]).unwrap();
        assert_eq!(r.r, 0.8);
    }

    #[test]
    fn constant_series_flags_zero_variance() {
        let r = pearson(&[2.0, 2.0, 2.0], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(r.r, 0.0);
        assert!(r.zero_variance);
        // Non-integer constants as well, where centered sums may not cancel.
        let r = pearson(&[0.1, 0.1, 0.1], &[1.0, 2.0, 3.0]).unwrap();
        assert!(r.zero_variance);
    }

    #[test]
    fn parameter_errors() {
        assert!(matches!(
            pearson(&[1.0, 2.0], &[1.0, 2.0, 3.0]),
            Err(Error::SeriesLengthMismatch { left: 2, right: 3 })
        ));
        assert!(matches!(
            pearson(&[1.0], &[1.0]),
            Err(Error::SeriesTooShort { len: 1 })
        ));
    }

    #[test]
    fn spearman_is_rank_based() {
        // Monotone but nonlinear relation: Spearman 1, Pearson below 1.
        let x = [1.0, 2.0, 3.0, 4.0, 5.0];
        let y = [1.0, 4.0, 9.0, 16.0, 125.0];
        assert_eq!(spearman(&x, &y).unwrap().r, 1.0);
        assert!(pearson(&x, &y).unwrap().r < 1.0);
    }

    #[test]
    fn spearman_handles_ties() {
        let x = [1.0, 1.0, 2.0];
        let ranks = average_ranks(&x);
        assert_eq!(ranks, alloc::vec![1.5, 1.5, 3.0]);
    }
}
