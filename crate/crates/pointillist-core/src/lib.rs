//! Lexicon-free trend mining over character n-gram time series.
//!
//! The pipeline works without any word list or segmenter: text is reduced to
//! overlapping character n-grams, each gram's occurrences are counted into
//! hourly time bins, bursting grams are detected against a trailing daily
//! baseline, and longer words and phrases are reassembled by chaining grams
//! whose hourly series correlate with the bursting seed. Related trends are
//! then linked through tf-idf cosine similarity over their gram vocabularies.
//!
//! This crate is the algorithmic core and is `no_std`-compatible (it only
//! needs `alloc`). Everything that touches the outside world — record
//! parsing, snapshot files, the CLI, the synthetic-corpus generator — lives
//! in the companion `pointillist` crate.
//!
//! Modules, in pipeline order:
//!
//! - [`text`]: normalization into boundary-free segments and n-gram extraction
//! - [`time`]: hour bins, local calendar days, UTC offsets
//! - [`store`]: the immutable per-gram hourly count store with prefix/suffix lookup
//! - [`trend`]: spike scoring of daily counts against a trailing baseline
//! - [`correlate`]: Pearson/Spearman correlation of count series
//! - [`assemble`]: beam-search phrase assembly over the gram overlap graph
//! - [`link`]: tf-idf vectors per trend and cosine linking between trends

#![cfg_attr(not(feature = "std"), no_std)]

#[cfg(not(any(feature = "std", feature = "libm")))]
compile_error!("pointillist-core requires either the `std` or the `libm` feature");

extern crate alloc;

pub mod assemble;
pub mod correlate;
pub mod error;
pub mod link;
mod math;
pub mod store;
pub mod text;
pub mod time;
pub mod trend;

pub use assemble::{
    connect, neighbor_edges, overlaps, ConnectConfig, ConnectionWindow, OverlapEdge,
    PhraseCandidate, ScoreAggregation, Side,
};
pub use correlate::{correlation, pearson, spearman, Correlation, CorrelationKind};
pub use error::Error;
pub use link::{idf, link, TrendCluster, TrendLink, DEFAULT_LINK_THRESHOLD};
pub use store::{GramSeries, GramStore, StoreBuilder, StoreStats};
pub use text::{char_windows, extract_ngrams, normalize, BoundarySet, Post};
pub use time::{bin_of, day_of, day_of_bin, day_start_bin, DayIndex, TimeBin, TzOffset};
pub use trend::{baseline, spike_score, trending_grams, TrendCandidate, TrendConfig, TrendScan};
