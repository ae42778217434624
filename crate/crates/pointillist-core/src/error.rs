//! Error type shared by the core operations.

use alloc::string::String;
use core::fmt;

/// Contract violations reported by the core operations.
///
/// Each variant corresponds to a precondition of one operation; none of them
/// represent I/O or data corruption, which are handled by the `pointillist`
/// companion crate.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Gram order 0 was requested (extraction or store construction).
    ZeroGramOrder,
    /// A store was configured with an empty set of gram orders.
    EmptyOrders,
    /// A bin or day window with `start > end`.
    InvertedWindow { start: i64, end: i64 },
    /// A prefix/suffix query or seed implies a gram order the store does not hold.
    NoSuchOrder { wanted: usize },
    /// Two grams of different unit lengths were compared.
    GramLengthMismatch { left: usize, right: usize },
    /// Two series of different lengths were correlated.
    SeriesLengthMismatch { left: usize, right: usize },
    /// A series shorter than two points was correlated.
    SeriesTooShort { len: usize },
    /// Spike scoring was given a non-positive epsilon floor.
    NonPositiveEpsilon,
    /// A trailing-baseline window of zero days.
    ZeroWindowDays,
    /// An idf computation over a zero-day corpus.
    ZeroCorpusDays,
    /// The connector was given a seed gram absent from the store.
    UnknownSeed(String),
    /// The connection window resolves to fewer than two bins.
    DegenerateWindow { bins: u32 },
    /// Beam width 0.
    ZeroBeam,
    /// A phrase length cap smaller than the gram order.
    MaxLenBelowOrder { max_len: usize, n: usize },
    /// A trend cluster was built from an empty phrase list.
    EmptyCluster,
    /// Similarity was requested against an empty (all-idf-zero) vector.
    EmptyVector,
    /// A UTC offset string could not be parsed or is out of range.
    InvalidTzOffset(String),
    /// Store parts handed to `GramStore::from_parts` violate its layout rules.
    InvalidParts(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ZeroGramOrder => write!(f, "gram order must be at least 1"),
            Error::EmptyOrders => write!(f, "at least one gram order is required"),
            Error::InvertedWindow { start, end } => {
                write!(f, "inverted bin window: start {start} > end {end}")
            }
            Error::NoSuchOrder { wanted } => {
                write!(f, "store holds no grams of order {wanted}")
            }
            Error::GramLengthMismatch { left, right } => {
                write!(f, "gram unit lengths differ: {left} vs {right}")
            }
            Error::SeriesLengthMismatch { left, right } => {
                write!(f, "series lengths differ: {left} vs {right}")
            }
            Error::SeriesTooShort { len } => {
                write!(f, "series of length {len} is too short to correlate (need 2)")
            }
            Error::NonPositiveEpsilon => write!(f, "epsilon floor must be positive"),
            Error::ZeroWindowDays => write!(f, "baseline window must cover at least 1 day"),
            Error::ZeroCorpusDays => write!(f, "corpus must span at least 1 day"),
            Error::UnknownSeed(seed) => write!(f, "seed gram {seed:?} is not in the store"),
            Error::DegenerateWindow { bins } => {
                write!(f, "connection window covers {bins} bins (need at least 2)")
            }
            Error::ZeroBeam => write!(f, "beam width must be at least 1"),
            Error::MaxLenBelowOrder { max_len, n } => {
                write!(f, "max phrase length {max_len} is below the gram order {n}")
            }
            Error::EmptyCluster => write!(f, "cluster has no phrases"),
            Error::EmptyVector => write!(f, "similarity is undefined for an empty vector"),
            Error::InvalidTzOffset(s) => write!(f, "invalid UTC offset {s:?}"),
            Error::InvalidParts(why) => write!(f, "invalid store parts: {why}"),
        }
    }
}

impl core::error::Error for Error {}
