//! Per-gram hourly count series with prefix/suffix lookup.
//!
//! The store follows a single-writer, multi-reader lifecycle: a
//! [`StoreBuilder`] consumes a stream of posts, then [`StoreBuilder::finish`]
//! freezes everything into an immutable [`GramStore`] that is safe to share
//! across any number of reader threads.
//!
//! Two sorted indexes back the queries: grams in canonical (lexicographic by
//! scalar) order serve prefix lookups as a range scan, and a second index
//! sorted by the reversed gram serves suffix lookups the same way. Counts are
//! kept sparsely per gram as `(bin, count)` runs sorted by bin; a bin with
//! count zero is never stored.

use crate::error::Error;
use crate::text::{char_windows, normalize, BoundarySet, Post};
use crate::time::{bin_of, day_of_bin, day_start_bin, DayIndex, TimeBin, TzOffset};
use alloc::boxed::Box;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

/// Corpus-level totals reported after ingestion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StoreStats {
    pub distinct_grams: u64,
    pub total_occurrences: u64,
    /// Smallest and largest populated bin, `None` for an empty store.
    pub bin_range: Option<(TimeBin, TimeBin)>,
}

/// One gram's sparse hourly series, borrowed from the store.
#[derive(Debug, Clone, Copy)]
pub struct GramSeries<'a> {
    pub n: u8,
    pub gram: &'a str,
    /// `(bin, count)` runs sorted by bin; every count is nonzero.
    pub runs: &'a [(u32, u32)],
    pub total: u64,
}

/// Accumulates gram counts from a post stream.
pub struct StoreBuilder {
    boundaries: BoundarySet,
    tz: TzOffset,
    orders: Vec<u8>,
    maps: Vec<BTreeMap<Box<str>, BTreeMap<u32, u32>>>,
}

impl StoreBuilder {
    /// `orders` is the set of gram orders to count (deduplicated; all >= 1).
    pub fn new(orders: &[u8], boundaries: BoundarySet, tz: TzOffset) -> Result<StoreBuilder, Error> {
        let mut orders = orders.to_vec();
        orders.sort_unstable();
        orders.dedup();
        if orders.is_empty() {
            return Err(Error::EmptyOrders);
        }
        if orders[0] == 0 {
            return Err(Error::ZeroGramOrder);
        }
        let maps = orders.iter().map(|_| BTreeMap::new()).collect();
        Ok(StoreBuilder {
            boundaries,
            tz,
            orders,
            maps,
        })
    }

    pub fn boundaries(&self) -> &BoundarySet {
        &self.boundaries
    }

    /// Counts every extracted gram of every configured order into the post's
    /// hour bin, once per occurrence within the post.
    pub fn add_post(&mut self, post: &Post) {
        let bin = bin_of(post.ts).0;
        let segments = normalize(&post.text, &self.boundaries);
        for (order_idx, &n) in self.orders.iter().enumerate() {
            let map = &mut self.maps[order_idx];
            for seg in &segments {
                for window in char_windows(seg, n as usize) {
                    match map.get_mut(window) {
                        Some(bins) => {
                            let slot = bins.entry(bin).or_insert(0);
                            *slot = slot.saturating_add(1);
                        }
                        None => {
                            let mut bins = BTreeMap::new();
                            bins.insert(bin, 1);
                            map.insert(window.into(), bins);
                        }
                    }
                }
            }
        }
    }

    pub fn add_posts<'a>(&mut self, posts: impl IntoIterator<Item = &'a Post>) {
        for post in posts {
            self.add_post(post);
        }
    }

    /// Freezes the builder into an immutable store.
    pub fn finish(self) -> GramStore {
        self.build(false)
    }

    /// Freezes with the partial flag set, for ingests that aborted mid-stream.
    /// Snapshots of a partial store refuse to load unless explicitly allowed.
    pub fn finish_partial(self) -> GramStore {
        self.build(true)
    }

    fn build(self, partial: bool) -> GramStore {
        let orders = self
            .orders
            .into_iter()
            .zip(self.maps)
            .map(|(n, map)| {
                let entries: Vec<Entry> = map
                    .into_iter()
                    .map(|(gram, bins)| {
                        let runs: Vec<(u32, u32)> = bins.into_iter().collect();
                        let total = runs.iter().map(|&(_, c)| u64::from(c)).sum();
                        Entry { gram, runs, total }
                    })
                    .collect();
                OrderIndex::new(n, entries)
            })
            .collect();
        GramStore::assemble(self.tz, partial, orders)
    }
}

struct Entry {
    gram: Box<str>,
    runs: Vec<(u32, u32)>,
    total: u64,
}

struct OrderIndex {
    n: u8,
    entries: Vec<Entry>,
    /// Entry indices sorted by the reversed gram; parallel to `reversed`.
    by_suffix: Vec<u32>,
    reversed: Vec<Box<str>>,
}

impl OrderIndex {
    fn new(n: u8, entries: Vec<Entry>) -> OrderIndex {
        let mut rev: Vec<(Box<str>, u32)> = entries
            .iter()
            .enumerate()
            .map(|(i, e)| (e.gram.chars().rev().collect::<String>().into(), i as u32))
            .collect();
        rev.sort_unstable();
        let (reversed, by_suffix) = rev.into_iter().unzip();
        OrderIndex {
            n,
            entries,
            by_suffix,
            reversed,
        }
    }

    fn find(&self, gram: &str) -> Option<&Entry> {
        self.entries
            .binary_search_by(|e| e.gram.as_ref().cmp(gram))
            .ok()
            .map(|i| &self.entries[i])
    }
}

/// Raw per-order content used to rebuild a store from a snapshot.
///
/// Entries must be in canonical gram order without duplicates, every gram
/// must have exactly `n` scalars, and runs must be sorted by bin with nonzero
/// counts.
pub struct OrderParts {
    pub n: u8,
    pub entries: Vec<(Box<str>, Vec<(u32, u32)>)>,
}

/// Immutable gram store; all read operations are safe to call concurrently.
pub struct GramStore {
    tz: TzOffset,
    partial: bool,
    orders: Vec<OrderIndex>,
    bin_range: Option<(TimeBin, TimeBin)>,
}

impl GramStore {
    fn assemble(tz: TzOffset, partial: bool, orders: Vec<OrderIndex>) -> GramStore {
        let mut bin_range: Option<(u32, u32)> = None;
        for order in &orders {
            for entry in &order.entries {
                let lo = entry.runs.first().expect("entry has runs").0;
                let hi = entry.runs.last().expect("entry has runs").0;
                bin_range = Some(match bin_range {
                    None => (lo, hi),
                    Some((a, b)) => (a.min(lo), b.max(hi)),
                });
            }
        }
        GramStore {
            tz,
            partial,
            orders,
            bin_range: bin_range.map(|(a, b)| (TimeBin(a), TimeBin(b))),
        }
    }

    /// Rebuilds a store from validated parts (the snapshot load path).
    pub fn from_parts(tz: TzOffset, partial: bool, parts: Vec<OrderParts>) -> Result<GramStore, Error> {
        if parts.is_empty() {
            return Err(Error::EmptyOrders);
        }
        let mut orders = Vec::with_capacity(parts.len());
        let mut prev_n: Option<u8> = None;
        for part in parts {
            if part.n == 0 {
                return Err(Error::ZeroGramOrder);
            }
            if let Some(p) = prev_n {
                if part.n <= p {
                    return Err(Error::InvalidParts("orders must be strictly increasing"));
                }
            }
            prev_n = Some(part.n);
            let mut entries = Vec::with_capacity(part.entries.len());
            let mut prev_gram: Option<&str> = None;
            for (gram, runs) in &part.entries {
                if gram.chars().count() != part.n as usize {
                    return Err(Error::InvalidParts("gram length does not match order"));
                }
                if let Some(p) = prev_gram {
                    if gram.as_ref() <= p {
                        return Err(Error::InvalidParts("grams must be strictly increasing"));
                    }
                }
                if runs.is_empty() {
                    return Err(Error::InvalidParts("entry with no runs"));
                }
                let mut prev_bin: Option<u32> = None;
                for &(bin, count) in runs {
                    if count == 0 {
                        return Err(Error::InvalidParts("zero count run"));
                    }
                    if let Some(p) = prev_bin {
                        if bin <= p {
                            return Err(Error::InvalidParts("runs must be strictly increasing by bin"));
                        }
                    }
                    prev_bin = Some(bin);
                }
                prev_gram = Some(gram.as_ref());
                let total = runs.iter().map(|&(_, c)| u64::from(c)).sum();
                entries.push(Entry {
                    gram: gram.clone(),
                    runs: runs.clone(),
                    total,
                });
            }
            orders.push(OrderIndex::new(part.n, entries));
        }
        Ok(GramStore::assemble(tz, partial, orders))
    }

    pub fn tz(&self) -> TzOffset {
        self.tz
    }

    pub fn is_partial(&self) -> bool {
        self.partial
    }

    /// Configured gram orders, ascending.
    pub fn orders(&self) -> Vec<u8> {
        self.orders.iter().map(|o| o.n).collect()
    }

    /// The smallest configured order; the one the snapshot header reports.
    pub fn primary_order(&self) -> u8 {
        self.orders.first().map(|o| o.n).unwrap_or(0)
    }

    pub fn stats(&self) -> StoreStats {
        let mut distinct = 0u64;
        let mut total = 0u64;
        for order in &self.orders {
            distinct += order.entries.len() as u64;
            total += order.entries.iter().map(|e| e.total).sum::<u64>();
        }
        StoreStats {
            distinct_grams: distinct,
            total_occurrences: total,
            bin_range: self.bin_range,
        }
    }

    pub fn bin_range(&self) -> Option<(TimeBin, TimeBin)> {
        self.bin_range
    }

    /// Number of local calendar days the corpus spans, 0 when empty.
    pub fn day_span(&self) -> u64 {
        match self.bin_range {
            None => 0,
            Some((lo, hi)) => {
                let first = day_of_bin(lo, self.tz).0;
                let last = day_of_bin(hi, self.tz).0;
                (last - first + 1) as u64
            }
        }
    }

    pub fn contains(&self, gram: &str) -> bool {
        self.find(gram).is_some()
    }

    /// Total occurrence count of a gram, 0 when unknown.
    pub fn total(&self, gram: &str) -> u64 {
        self.find(gram).map(|e| e.total).unwrap_or(0)
    }

    fn order_for_len(&self, len: usize) -> Option<&OrderIndex> {
        self.orders.iter().find(|o| usize::from(o.n) == len)
    }

    fn find(&self, gram: &str) -> Option<&Entry> {
        self.order_for_len(gram.chars().count())?.find(gram)
    }

    /// Dense count vector over an inclusive bin window, zero-filled where no
    /// count exists. Unknown grams yield all zeros.
    pub fn series(&self, gram: &str, window: (TimeBin, TimeBin)) -> Result<Vec<u64>, Error> {
        let (start, end) = check_window(window)?;
        let len = (end - start + 1) as usize;
        let mut out = alloc::vec![0u64; len];
        if let Some(entry) = self.find(gram) {
            let from = entry.runs.partition_point(|&(bin, _)| bin < start);
            for &(bin, count) in &entry.runs[from..] {
                if bin > end {
                    break;
                }
                out[(bin - start) as usize] = u64::from(count);
            }
        }
        Ok(out)
    }

    /// Sum of a gram's counts inside an inclusive bin window.
    pub fn window_total(&self, gram: &str, window: (TimeBin, TimeBin)) -> Result<u64, Error> {
        let (start, end) = check_window(window)?;
        let mut sum = 0u64;
        if let Some(entry) = self.find(gram) {
            let from = entry.runs.partition_point(|&(bin, _)| bin < start);
            for &(bin, count) in &entry.runs[from..] {
                if bin > end {
                    break;
                }
                sum += u64::from(count);
            }
        }
        Ok(sum)
    }

    /// Per-day totals over an inclusive local day range: each entry is the
    /// sum of the 24 hour-bin counts of that day under `tz`.
    pub fn daily_counts(
        &self,
        gram: &str,
        first: DayIndex,
        last: DayIndex,
        tz: TzOffset,
    ) -> Result<Vec<u64>, Error> {
        if first > last {
            return Err(Error::InvertedWindow {
                start: first.0,
                end: last.0,
            });
        }
        let days = (last.0 - first.0 + 1) as usize;
        let mut out = alloc::vec![0u64; days];
        if let Some(entry) = self.find(gram) {
            let start_bin = day_start_bin(first, tz).0;
            let from = entry.runs.partition_point(|&(bin, _)| bin < start_bin);
            for &(bin, count) in &entry.runs[from..] {
                let day = day_of_bin(TimeBin(bin), tz);
                if day > last {
                    break;
                }
                if day >= first {
                    out[(day.0 - first.0) as usize] += u64::from(count);
                }
            }
        }
        Ok(out)
    }

    /// Number of distinct local days on which the gram occurs at all.
    pub fn days_present(&self, gram: &str) -> u64 {
        match self.find(gram) {
            None => 0,
            Some(entry) => {
                let mut days = 0u64;
                let mut prev: Option<i64> = None;
                for &(bin, _) in &entry.runs {
                    let day = day_of_bin(TimeBin(bin), self.tz).0;
                    if prev != Some(day) {
                        days += 1;
                        prev = Some(day);
                    }
                }
                days
            }
        }
    }

    /// All stored grams whose first `n - 1` units equal `prefix`, in
    /// canonical order. The gram order is inferred as `|prefix| + 1`.
    pub fn grams_with_prefix(&self, prefix: &str) -> Result<Vec<&str>, Error> {
        let wanted = prefix.chars().count() + 1;
        let order = self
            .order_for_len(wanted)
            .ok_or(Error::NoSuchOrder { wanted })?;
        let from = order
            .entries
            .partition_point(|e| e.gram.as_ref() < prefix);
        let mut out = Vec::new();
        for entry in &order.entries[from..] {
            if !entry.gram.starts_with(prefix) {
                break;
            }
            out.push(entry.gram.as_ref());
        }
        Ok(out)
    }

    /// Mirror of [`grams_with_prefix`] on the last `n - 1` units, served by
    /// the reversed-gram index.
    ///
    /// [`grams_with_prefix`]: GramStore::grams_with_prefix
    pub fn grams_with_suffix(&self, suffix: &str) -> Result<Vec<&str>, Error> {
        let wanted = suffix.chars().count() + 1;
        let order = self
            .order_for_len(wanted)
            .ok_or(Error::NoSuchOrder { wanted })?;
        let rev_suffix: String = suffix.chars().rev().collect();
        let from = order
            .reversed
            .partition_point(|r| r.as_ref() < rev_suffix.as_str());
        let mut out = Vec::new();
        for (rev, &idx) in order.reversed[from..].iter().zip(&order.by_suffix[from..]) {
            if !rev.starts_with(rev_suffix.as_str()) {
                break;
            }
            out.push(order.entries[idx as usize].gram.as_ref());
        }
        // With the suffix fixed only the leading unit varies, so reversed
        // order already coincides with canonical order; sort anyway to keep
        // the contract independent of that argument.
        out.sort_unstable();
        Ok(out)
    }

    /// Every stored gram series, orders ascending then canonical gram order.
    pub fn iter_series(&self) -> impl Iterator<Item = GramSeries<'_>> {
        self.orders.iter().flat_map(|order| {
            order.entries.iter().map(move |e| GramSeries {
                n: order.n,
                gram: e.gram.as_ref(),
                runs: &e.runs,
                total: e.total,
            })
        })
    }

    /// One gram's series view, if stored.
    pub fn gram_series(&self, gram: &str) -> Option<GramSeries<'_>> {
        let len = gram.chars().count();
        let order = self.order_for_len(len)?;
        order.find(gram).map(|e| GramSeries {
            n: order.n,
            gram: e.gram.as_ref(),
            runs: &e.runs,
            total: e.total,
        })
    }
}

fn check_window(window: (TimeBin, TimeBin)) -> Result<(u32, u32), Error> {
    let (TimeBin(start), TimeBin(end)) = window;
    if start > end {
        return Err(Error::InvertedWindow {
            start: i64::from(start),
            end: i64::from(end),
        });
    }
    Ok((start, end))
}

/// Convenience used by tests and small tools: builds a store over default
/// boundaries from in-memory posts.
pub fn ingest_posts(posts: &[Post], orders: &[u8], tz: TzOffset) -> Result<GramStore, Error> {
    let mut builder = StoreBuilder::new(orders, BoundarySet::default(), tz)?;
    builder.add_posts(posts);
    Ok(builder.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::{vec, format};

    fn post(id: &str, ts: u64, text: &str) -> Post {
        Post {
            id: id.to_string(),
            ts,
            text: text.to_string(),
        }
    }

    fn store_of(texts: &[(&str, u64)]) -> GramStore {
        let posts: Vec<Post> = texts
            .iter()
            .enumerate()
            .map(|(i, &(text, ts))| post(&format!("p{i}"), ts, text))
            .collect();
        ingest_posts(&posts, &[3], TzOffset::UTC).unwrap()
    }

    #[test]
    fn same_hour_counts_accumulate() {
        let store = store_of(&[("abc", 100), ("abc", 200)]);
        assert_eq!(store.series("abc", (TimeBin(0), TimeBin(0))).unwrap(), vec![2]);
        assert_eq!(store.total("abc"), 2);
    }

    #[test]
    fn empty_store_stats() {
        let store = ingest_posts(&[], &[3], TzOffset::UTC).unwrap();
        let stats = store.stats();
        assert_eq!(stats.distinct_grams, 0);
        assert_eq!(stats.total_occurrences, 0);
        assert_eq!(stats.bin_range, None);
        assert_eq!(store.day_span(), 0);
    }

    #[test]
    fn series_zero_fills_and_handles_unknown() {
        let store = store_of(&[("abc", 0)]);
        assert_eq!(
            store.series("zzz", (TimeBin(5), TimeBin(9))).unwrap(),
            vec![0, 0, 0, 0, 0]
        );
        assert_eq!(
            store.series("abc", (TimeBin(0), TimeBin(2))).unwrap(),
            vec![1, 0, 0]
        );
    }

    #[test]
    fn series_rejects_inverted_window() {
        let store = store_of(&[("abc", 0)]);
        assert!(matches!(
            store.series("abc", (TimeBin(3), TimeBin(1))),
            Err(Error::InvertedWindow { .. })
        ));
    }

    #[test]
    fn occurrences_within_a_post_count_individually() {
        // "abcabc" -> abc, bca, cab, abc
        let store = store_of(&[("abcabc", 0)]);
        assert_eq!(store.total("abc"), 2);
        assert_eq!(store.total("bca"), 1);
        assert_eq!(store.stats().total_occurrences, 4);
    }

    #[test]
    fn grams_never_cross_boundaries() {
        let store = store_of(&[("ab,cd", 0)]);
        assert_eq!(store.stats().total_occurrences, 0);
        let store = store_of(&[("abc，def", 0)]);
        assert_eq!(store.total("abc"), 1);
        assert_eq!(store.total("def"), 1);
        assert_eq!(store.total("c，d"), 0);
    }

    #[test]
    fn prefix_query_examples() {
        let store = store_of(&[("abc", 0), ("abd", 0), ("xyz", 0)]);
        assert_eq!(store.grams_with_prefix("ab").unwrap(), vec!["abc", "abd"]);
        assert_eq!(store.grams_with_prefix("qq").unwrap(), Vec::<&str>::new());
        assert!(matches!(
            store.grams_with_prefix("a"),
            Err(Error::NoSuchOrder { wanted: 2 })
        ));
    }

    #[test]
    fn suffix_query_examples() {
        let store = store_of(&[("abc", 0), ("xbc", 0), ("abd", 0)]);
        assert_eq!(store.grams_with_suffix("bc").unwrap(), vec!["abc", "xbc"]);
        assert_eq!(store.grams_with_suffix("qq").unwrap(), Vec::<&str>::new());
    }

    #[test]
    fn chain_lookups_inside_phrase() {
        let store = store_of(&[("万为开拓团", 0)]);
        assert_eq!(store.grams_with_prefix("为开").unwrap(), vec!["为开拓"]);
        assert_eq!(store.grams_with_suffix("为开").unwrap(), vec!["万为开"]);
    }

    #[test]
    fn daily_counts_sum_hour_bins() {
        // 24 posts, one per hour bin of local day 0 in UTC.
        let posts: Vec<Post> = (0..24)
            .map(|h| post(&format!("p{h}"), h * 3600, "abc"))
            .collect();
        let store = ingest_posts(&posts, &[3], TzOffset::UTC).unwrap();
        assert_eq!(
            store
                .daily_counts("abc", DayIndex(0), DayIndex(0), TzOffset::UTC)
                .unwrap(),
            vec![24]
        );
        assert_eq!(
            store
                .daily_counts("abc", DayIndex(1), DayIndex(2), TzOffset::UTC)
                .unwrap(),
            vec![0, 0]
        );
        assert_eq!(
            store
                .daily_counts("zzz", DayIndex(0), DayIndex(0), TzOffset::UTC)
                .unwrap(),
            vec![0]
        );
    }

    #[test]
    fn daily_counts_respect_offset() {
        // +08:00: local day d starts at utc ts d*86400 - 28800.
        let tz: TzOffset = "+08:00".parse().unwrap();
        let day = DayIndex(15_190);
        let start = day_start_bin(day, tz);
        let posts = vec![
            post("a", start.start_ts(), "abc"),
            post("b", start.start_ts() + 23 * 3600, "abc"),
            post("c", start.start_ts() + 24 * 3600, "abc"), // next local day
        ];
        let store = ingest_posts(&posts, &[3], tz).unwrap();
        assert_eq!(
            store.daily_counts("abc", day, day, tz).unwrap(),
            vec![2]
        );
        assert_eq!(
            store.daily_counts("abc", day.succ(), day.succ(), tz).unwrap(),
            vec![1]
        );
    }

    #[test]
    fn multiple_orders_coexist() {
        let posts = vec![post("a", 0, "abc")];
        let store = ingest_posts(&posts, &[2, 3], TzOffset::UTC).unwrap();
        assert_eq!(store.orders(), vec![2, 3]);
        assert_eq!(store.total("ab"), 1);
        assert_eq!(store.total("abc"), 1);
        assert_eq!(store.grams_with_prefix("a").unwrap(), vec!["ab"]);
        assert_eq!(store.grams_with_prefix("ab").unwrap(), vec!["abc"]);
        assert_eq!(store.stats().total_occurrences, 3); // ab, bc, abc
    }

    #[test]
    fn builder_rejects_bad_orders() {
        assert!(matches!(
            StoreBuilder::new(&[], BoundarySet::default(), TzOffset::UTC),
            Err(Error::EmptyOrders)
        ));
        assert!(matches!(
            StoreBuilder::new(&[0], BoundarySet::default(), TzOffset::UTC),
            Err(Error::ZeroGramOrder)
        ));
    }

    #[test]
    fn from_parts_validates_layout() {
        let good = || OrderParts {
            n: 3,
            entries: vec![
                ("abc".into(), vec![(0, 1), (5, 2)]),
                ("abd".into(), vec![(1, 1)]),
            ],
        };
        assert!(GramStore::from_parts(TzOffset::UTC, false, vec![good()]).is_ok());

        let unsorted = OrderParts {
            n: 3,
            entries: vec![("abd".into(), vec![(0, 1)]), ("abc".into(), vec![(0, 1)])],
        };
        assert!(GramStore::from_parts(TzOffset::UTC, false, vec![unsorted]).is_err());

        let zero_count = OrderParts {
            n: 3,
            entries: vec![("abc".into(), vec![(0, 0)])],
        };
        assert!(GramStore::from_parts(TzOffset::UTC, false, vec![zero_count]).is_err());

        let wrong_len = OrderParts {
            n: 3,
            entries: vec![("ab".into(), vec![(0, 1)])],
        };
        assert!(GramStore::from_parts(TzOffset::UTC, false, vec![wrong_len]).is_err());
    }

    #[test]
    fn days_present_counts_distinct_days() {
        let posts = vec![
            post("a", 0, "abc"),
            post("b", 3600, "abc"),      // same day
            post("c", 5 * 86_400, "abc"), // later day
        ];
        let store = ingest_posts(&posts, &[3], TzOffset::UTC).unwrap();
        assert_eq!(store.days_present("abc"), 2);
        assert_eq!(store.days_present("zzz"), 0);
        assert_eq!(store.day_span(), 6);
    }
}
