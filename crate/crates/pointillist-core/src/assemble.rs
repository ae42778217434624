//! Phrase assembly by chaining overlapping grams with correlated series.
//!
//! Starting from a seed gram, the connector grows candidate words and
//! phrases: a right extension appends one unit by following a gram whose
//! first `n - 1` units overlap the current right edge, a left extension
//! prepends symmetrically. A candidate gram is accepted only when it occurs
//! often enough inside the connection window and its hourly series correlates
//! with the *seed's* series — one fixed reference, so the chain cannot drift.
//!
//! Phrase scores use the minimum edge correlation by default (a bottleneck
//! score: extending a phrase can never raise it); mean aggregation is
//! available through [`ConnectConfig::aggregation`].

use crate::correlate::{correlation, CorrelationKind};
use crate::error::Error;
use crate::store::GramStore;
use crate::time::{day_start_bin, DayIndex, TimeBin, DAY_BINS};
use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

/// The day range around a center day over which series are correlated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConnectionWindow {
    pub center: DayIndex,
    pub days_before: u32,
    pub days_after: u32,
}

impl ConnectionWindow {
    /// Symmetric window, e.g. `around(day, 5)` for five days before through
    /// five days after.
    pub fn around(center: DayIndex, days: u32) -> ConnectionWindow {
        ConnectionWindow {
            center,
            days_before: days,
            days_after: days,
        }
    }

    /// Width in hour bins: `24 * (before + after + 1)`.
    pub fn width_bins(&self) -> u32 {
        DAY_BINS * (self.days_before + self.days_after + 1)
    }

    /// Inclusive bin range under `tz`. Days before the epoch clamp to bin 0,
    /// so the realized width can be smaller than [`width_bins`].
    ///
    /// [`width_bins`]: ConnectionWindow::width_bins
    pub fn bins(&self, tz: crate::time::TzOffset) -> (TimeBin, TimeBin) {
        let first = DayIndex(self.center.0 - i64::from(self.days_before));
        let last = DayIndex(self.center.0 + i64::from(self.days_after));
        let start = day_start_bin(first, tz);
        let end = TimeBin(day_start_bin(last.succ(), tz).0.saturating_sub(1));
        (start, end)
    }
}

/// Connector parameters. Defaults: minimum correlation 0.6, beam width 8,
/// phrase cap 16 units, 3 in-window occurrences per candidate gram, grams
/// repeatable at most twice within a phrase, Pearson, min aggregation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectConfig {
    pub r_min: f64,
    pub beam: usize,
    pub max_len: usize,
    /// Minimum occurrence count of a candidate gram inside the window.
    pub min_count: u64,
    /// How often one gram may appear among a phrase's windows.
    pub max_gram_repeats: usize,
    pub correlation: CorrelationKind,
    pub aggregation: ScoreAggregation,
}

impl Default for ConnectConfig {
    fn default() -> Self {
        ConnectConfig {
            r_min: 0.6,
            beam: 8,
            max_len: 16,
            min_count: 3,
            max_gram_repeats: 2,
            correlation: CorrelationKind::Pearson,
            aggregation: ScoreAggregation::Min,
        }
    }
}

/// How edge correlations combine into a phrase score.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScoreAggregation {
    /// Bottleneck: the weakest accepted edge. Monotone under extension.
    Min,
    /// Arithmetic mean of accepted edges.
    Mean,
}

/// Which side of the current phrase an extension came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// An accepted overlap between two grams: the last `n - 1` units of `left`
/// equal the first `n - 1` units of `right`; `r` is the correlation of the
/// *candidate* gram's series against the seed's series.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapEdge {
    pub left: String,
    pub right: String,
    pub r: f64,
}

/// An assembled unit sequence with its chain score and the side each
/// extension came from, in order. The bare seed scores 1.0.
#[derive(Debug, Clone, PartialEq)]
pub struct PhraseCandidate {
    pub text: String,
    pub score: f64,
    pub trace: Vec<Side>,
}

/// Whether `b` extends `a` by one unit: `a[1..n) == b[0..n-1)`.
pub fn overlaps(a: &str, b: &str) -> Result<bool, Error> {
    let la = a.chars().count();
    let lb = b.chars().count();
    if la != lb || la == 0 {
        return Err(Error::GramLengthMismatch { left: la, right: lb });
    }
    let a_tail = a.char_indices().nth(1).map(|(i, _)| &a[i..]).unwrap_or("");
    let b_head_end = b.char_indices().nth(lb - 1).map(|(i, _)| i).unwrap_or(0);
    Ok(a_tail == &b[..b_head_end])
}

/// Accepted extension edges of `current` on one side, sorted by correlation
/// descending then gram ascending.
///
/// Right-side candidates share `current`'s last `n - 1` units as their
/// prefix; left-side candidates share its first `n - 1` units as their
/// suffix. A candidate is kept when it occurs at least `min_count` times in
/// the window and its series correlates with `seed_series` at `r_min` or
/// better. Zero-variance candidates correlate at 0.0, so any positive
/// `r_min` silently drops flat background grams.
pub fn neighbor_edges(
    store: &GramStore,
    current: &str,
    seed_series: &[f64],
    window: (TimeBin, TimeBin),
    side: Side,
    cfg: &ConnectConfig,
) -> Result<Vec<OverlapEdge>, Error> {
    let n = current.chars().count();
    if n == 0 {
        return Err(Error::ZeroGramOrder);
    }
    let candidates = match side {
        Side::Right => {
            let tail_start = current.char_indices().nth(1).map(|(i, _)| i).unwrap_or(0);
            store.grams_with_prefix(&current[tail_start..])?
        }
        Side::Left => {
            let head_end = current
                .char_indices()
                .nth(n - 1)
                .map(|(i, _)| i)
                .unwrap_or(0);
            store.grams_with_suffix(&current[..head_end])?
        }
    };
    let mut edges = Vec::new();
    for cand in candidates {
        if store.window_total(cand, window)? < cfg.min_count {
            continue;
        }
        let cand_series = to_f64(&store.series(cand, window)?);
        let corr = correlation(cfg.correlation, &cand_series, seed_series)?;
        if corr.r >= cfg.r_min {
            let (left, right) = match side {
                Side::Right => (current.into(), cand.into()),
                Side::Left => (cand.into(), current.into()),
            };
            edges.push(OverlapEdge {
                left,
                right,
                r: corr.r,
            });
        }
    }
    edges.sort_unstable_by(|a, b| {
        let ga = match side {
            Side::Right => &a.right,
            Side::Left => &a.left,
        };
        let gb = match side {
            Side::Right => &b.right,
            Side::Left => &b.left,
        };
        b.r.total_cmp(&a.r).then_with(|| ga.cmp(gb))
    });
    Ok(edges)
}

struct BeamState {
    units: Vec<char>,
    min_r: f64,
    r_sum: f64,
    edge_count: u32,
    trace: Vec<Side>,
}

impl BeamState {
    fn score(&self, agg: ScoreAggregation) -> f64 {
        if self.edge_count == 0 {
            return 1.0;
        }
        match agg {
            ScoreAggregation::Min => self.min_r,
            ScoreAggregation::Mean => self.r_sum / f64::from(self.edge_count),
        }
    }

    fn text(&self) -> String {
        self.units.iter().collect()
    }

    /// Occurrences of `gram` among this phrase's length-n windows.
    fn gram_occurrences(&self, gram: &str, n: usize) -> usize {
        if self.units.len() < n {
            return 0;
        }
        let gram_units: Vec<char> = gram.chars().collect();
        self.units.windows(n).filter(|w| *w == gram_units).count()
    }
}

/// Grows candidate phrases from `seed` by beam search and returns every
/// beam-surviving phrase (the seed included, scored 1.0), sorted by score
/// descending, then length descending, then text ascending, capped at
/// `beam * max_len` entries.
///
/// Rounds alternate sides: each beam state first attempts all right
/// extensions, then all left ones; survivors of a round form the next beam.
pub fn connect(
    store: &GramStore,
    seed: &str,
    window: ConnectionWindow,
    cfg: &ConnectConfig,
) -> Result<Vec<PhraseCandidate>, Error> {
    let n = seed.chars().count();
    if cfg.beam == 0 {
        return Err(Error::ZeroBeam);
    }
    if cfg.max_len < n {
        return Err(Error::MaxLenBelowOrder {
            max_len: cfg.max_len,
            n,
        });
    }
    if !store.contains(seed) {
        return Err(Error::UnknownSeed(seed.into()));
    }
    let bins = window.bins(store.tz());
    let width = bins.1 .0.saturating_sub(bins.0 .0) + 1;
    if width < 2 {
        return Err(Error::DegenerateWindow { bins: width });
    }
    let seed_series = to_f64(&store.series(seed, bins)?);

    let mut survivors: Vec<(String, f64, Vec<Side>)> = Vec::new();
    let mut frontier = alloc::vec![BeamState {
        units: seed.chars().collect(),
        min_r: 1.0,
        r_sum: 0.0,
        edge_count: 0,
        trace: Vec::new(),
    }];
    survivors.push((seed.into(), 1.0, Vec::new()));

    while !frontier.is_empty() {
        let mut children: Vec<BeamState> = Vec::new();
        let mut seen: BTreeSet<String> = BTreeSet::new();
        for state in &frontier {
            if state.units.len() >= cfg.max_len {
                continue;
            }
            for side in [Side::Right, Side::Left] {
                let edge_gram: String = match side {
                    Side::Right => state.units[state.units.len() - n..].iter().collect(),
                    Side::Left => state.units[..n].iter().collect(),
                };
                let edges = neighbor_edges(store, &edge_gram, &seed_series, bins, side, cfg)?;
                for edge in edges {
                    let new_gram = match side {
                        Side::Right => edge.right.as_str(),
                        Side::Left => edge.left.as_str(),
                    };
                    if state.gram_occurrences(new_gram, n) >= cfg.max_gram_repeats {
                        continue;
                    }
                    let mut units = state.units.clone();
                    match side {
                        Side::Right => units.push(new_gram.chars().last().expect("gram nonempty")),
                        Side::Left => units.insert(0, new_gram.chars().next().expect("gram nonempty")),
                    }
                    let child = BeamState {
                        units,
                        min_r: state.min_r.min(edge.r),
                        r_sum: state.r_sum + edge.r,
                        edge_count: state.edge_count + 1,
                        trace: {
                            let mut t = state.trace.clone();
                            t.push(side);
                            t
                        },
                    };
                    // The same text reached along different paths carries the
                    // same edge multiset, hence the same score: first wins.
                    if seen.insert(child.text()) {
                        children.push(child);
                    }
                }
            }
        }
        children.sort_by(|a, b| {
            b.score(cfg.aggregation)
                .total_cmp(&a.score(cfg.aggregation))
                .then_with(|| b.units.len().cmp(&a.units.len()))
                .then_with(|| a.units.cmp(&b.units))
        });
        children.truncate(cfg.beam);
        for child in &children {
            survivors.push((child.text(), child.score(cfg.aggregation), child.trace.clone()));
        }
        frontier = children;
    }

    survivors.sort_by(|a, b| {
        b.1.total_cmp(&a.1)
            .then_with(|| {
                b.0.chars()
                    .count()
                    .cmp(&a.0.chars().count())
            })
            .then_with(|| a.0.cmp(&b.0))
    });
    survivors.truncate(cfg.beam * cfg.max_len);
    Ok(survivors
        .into_iter()
        .map(|(text, score, trace)| PhraseCandidate { text, score, trace })
        .collect())
}

fn to_f64(counts: &[u64]) -> Vec<f64> {
    counts.iter().map(|&c| c as f64).collect()
}
