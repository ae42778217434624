//! Linking related trends through tf-idf similarity.
//!
//! Each trend — the phrase set grown from one seed — is summarized as a
//! sparse vector over the grams its phrases contain. This module is a
//! from-scratch construction of that summary: documents are calendar days,
//! term frequency is a gram's occurrence count inside the trend's window,
//! idf is `ln(corpus_days / (1 + days_present))` floored at zero, vectors
//! are L2-normalized, and similarity is their cosine. Scores emitted by it
//! are comparable only to each other, not to any external reference output.

use crate::assemble::PhraseCandidate;
use crate::error::Error;
use crate::math;
use crate::store::GramStore;
use crate::text::char_windows;
use crate::time::TimeBin;
use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

/// Similarity at or above this default marks two trends as related.
pub const DEFAULT_LINK_THRESHOLD: f64 = 0.5;

/// Inverse document frequency of a gram over a corpus of `corpus_days`
/// calendar days: `ln(corpus_days / (1 + days_present))`, floored at zero.
///
/// A gram present every day carries no weight; a gram present on no day
/// carries the maximum `ln(corpus_days)`.
pub fn idf(store: &GramStore, gram: &str, corpus_days: u64) -> Result<f64, Error> {
    if corpus_days == 0 {
        return Err(Error::ZeroCorpusDays);
    }
    let present = store.days_present(gram);
    let ratio = corpus_days as f64 / (1.0 + present as f64);
    Ok(math::ln(ratio).max(0.0))
}

/// A seed's assembled phrase set with its tf-idf summary vector.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendCluster {
    pub seed: String,
    pub phrases: Vec<PhraseCandidate>,
    /// L2-normalized gram weights; empty when every gram weighed zero.
    pub vector: BTreeMap<String, f64>,
    /// True when the vector came out empty (all grams idf-zero or absent
    /// from the window).
    pub zero_vector: bool,
}

impl TrendCluster {
    /// Builds the cluster vector: for each gram appearing in any phrase,
    /// weight = in-window occurrence count x idf, then L2-normalize.
    ///
    /// Phrases are decomposed at the seed's gram order. `corpus_days` is
    /// taken from the store's populated day span.
    pub fn build(
        store: &GramStore,
        seed: String,
        phrases: Vec<PhraseCandidate>,
        window: (TimeBin, TimeBin),
    ) -> Result<TrendCluster, Error> {
        if phrases.is_empty() {
            return Err(Error::EmptyCluster);
        }
        let n = seed.chars().count();
        if n == 0 {
            return Err(Error::ZeroGramOrder);
        }
        let corpus_days = store.day_span();
        if corpus_days == 0 {
            return Err(Error::ZeroCorpusDays);
        }
        let mut grams: BTreeMap<String, f64> = BTreeMap::new();
        for phrase in &phrases {
            for window_gram in char_windows(&phrase.text, n) {
                grams.entry(window_gram.into()).or_insert(0.0);
            }
        }
        for (gram, weight) in grams.iter_mut() {
            let tf = store.window_total(gram, window)? as f64;
            *weight = tf * idf(store, gram, corpus_days)?;
        }
        grams.retain(|_, w| *w > 0.0);
        let norm = math::sqrt(grams.values().map(|w| w * w).sum::<f64>());
        let zero_vector = norm == 0.0;
        if zero_vector {
            grams.clear();
        } else {
            for weight in grams.values_mut() {
                *weight /= norm;
            }
        }
        Ok(TrendCluster {
            seed,
            phrases,
            vector: grams,
            zero_vector,
        })
    }
}

/// Similarity between two trends.
#[derive(Debug, Clone, PartialEq)]
pub struct TrendLink {
    pub a: String,
    pub b: String,
    /// Cosine of the two normalized vectors, clamped to `[0, 1]`.
    pub similarity: f64,
}

/// Cosine similarity of two cluster vectors. Exactly symmetric; errors on an
/// empty vector, where similarity is undefined.
pub fn link(a: &TrendCluster, b: &TrendCluster) -> Result<TrendLink, Error> {
    if a.vector.is_empty() || b.vector.is_empty() {
        return Err(Error::EmptyVector);
    }
    // Iterate the union in key order so link(a, b) and link(b, a) sum the
    // same products in the same order.
    let mut dot = 0.0;
    for (gram, wa) in &a.vector {
        if let Some(wb) = b.vector.get(gram) {
            dot += wa * wb;
        }
    }
    Ok(TrendLink {
        a: a.seed.clone(),
        b: b.seed.clone(),
        similarity: dot.clamp(0.0, 1.0),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::ingest_posts;
    use crate::text::Post;
    use crate::time::{DayIndex, TzOffset};
    use alloc::format;
    use alloc::string::ToString;
    use alloc::vec;

    fn phrase(text: &str) -> PhraseCandidate {
        PhraseCandidate {
            text: text.to_string(),
            score: 1.0,
            trace: vec![],
        }
    }

    /// A corpus spanning `days` days of vocabulary-disjoint background, with
    /// each listed text planted `extra` times on the final day only — so the
    /// planted grams are rare enough to carry idf weight.
    fn corpus(texts: &[&str], days: u64, extra: u64) -> Vec<Post> {
        let mut posts = Vec::new();
        for d in 0..days {
            posts.push(Post {
                id: format!("bg-{d}"),
                ts: d * 86_400 + 3600,
                text: "0000".to_string(),
            });
        }
        for (k, text) in texts.iter().enumerate() {
            for i in 0..extra {
                posts.push(Post {
                    id: format!("t{k}-x{i}"),
                    ts: (days - 1) * 86_400 + 7200 + (i % 12) * 3600,
                    text: text.to_string(),
                });
            }
        }
        posts
    }

    #[test]
    fn idf_examples() {
        // Present every day of a 30-day corpus: ln(30/31) floored to 0.
        let days: Vec<Post> = (0..30)
            .map(|d| Post {
                id: format!("d{d}"),
                ts: d * 86_400,
                text: "abc".into(),
            })
            .collect();
        let store = ingest_posts(&days, &[3], TzOffset::UTC).unwrap();
        assert_eq!(store.day_span(), 30);
        assert_eq!(idf(&store, "abc", 30).unwrap(), 0.0);
        // Absent gram: ln(30 / 1).
        let expect = 3.401_197_381_662_155_5_f64;
        assert!((idf(&store, "zzz", 30).unwrap() - expect).abs() < 1e-12);
        // One-day corpus, gram present that day: ln(1/2) floored to 0.
        let one = ingest_posts(
            &[Post {
                id: "a".into(),
                ts: 0,
                text: "abc".into(),
            }],
            &[3],
            TzOffset::UTC,
        )
        .unwrap();
        assert_eq!(idf(&one, "abc", 1).unwrap(), 0.0);
        assert!(matches!(idf(&store, "abc", 0), Err(Error::ZeroCorpusDays)));
    }

    #[test]
    fn ubiquitous_gram_yields_zero_vector() {
        let days: Vec<Post> = (0..30)
            .map(|d| Post {
                id: format!("d{d}"),
                ts: d * 86_400,
                text: "abc".into(),
            })
            .collect();
        let store = ingest_posts(&days, &[3], TzOffset::UTC).unwrap();
        let window = store.bin_range().unwrap();
        let cluster =
            TrendCluster::build(&store, "abc".into(), vec![phrase("abc")], window).unwrap();
        assert!(cluster.zero_vector);
        assert!(cluster.vector.is_empty());
        let other = cluster.clone();
        assert!(matches!(link(&cluster, &other), Err(Error::EmptyVector)));
    }

    #[test]
    fn equal_tf_idf_normalizes_to_equal_weights() {
        // Two grams, same counts, same presence: weights 1/sqrt(2) each.
        let posts = corpus(&["abcd"], 10, 5);
        let store = ingest_posts(&posts, &[3], TzOffset::UTC).unwrap();
        let window = store.bin_range().unwrap();
        let cluster =
            TrendCluster::build(&store, "abc".into(), vec![phrase("abcd")], window).unwrap();
        assert_eq!(cluster.vector.len(), 2);
        for w in cluster.vector.values() {
            assert!((w - core::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        }
    }

    #[test]
    fn empty_phrase_list_is_an_error() {
        let posts = corpus(&["abcd"], 3, 0);
        let store = ingest_posts(&posts, &[3], TzOffset::UTC).unwrap();
        let window = store.bin_range().unwrap();
        assert!(matches!(
            TrendCluster::build(&store, "abc".into(), vec![], window),
            Err(Error::EmptyCluster)
        ));
    }

    #[test]
    fn identical_clusters_link_at_one() {
        let posts = corpus(&["abcde"], 10, 8);
        let store = ingest_posts(&posts, &[3], TzOffset::UTC).unwrap();
        let window = store.bin_range().unwrap();
        let a = TrendCluster::build(&store, "abc".into(), vec![phrase("abcde")], window).unwrap();
        let b = a.clone();
        let l = link(&a, &b).unwrap();
        assert!((l.similarity - 1.0).abs() < 1e-12);
    }

    #[test]
    fn disjoint_clusters_link_at_zero() {
        let posts = corpus(&["abcd", "wxyz"], 10, 8);
        let store = ingest_posts(&posts, &[3], TzOffset::UTC).unwrap();
        let window = store.bin_range().unwrap();
        let a = TrendCluster::build(&store, "abc".into(), vec![phrase("abcd")], window).unwrap();
        let b = TrendCluster::build(&store, "wxy".into(), vec![phrase("wxyz")], window).unwrap();
        assert_eq!(link(&a, &b).unwrap().similarity, 0.0);
    }

    #[test]
    fn shared_vocabulary_raises_similarity() {
        // Both phrases share the "cdef" block and its grams.
        let posts = corpus(&["abcdef", "xycdef", "mnopqr"], 10, 8);
        let store = ingest_posts(&posts, &[3], TzOffset::UTC).unwrap();
        let window = store.bin_range().unwrap();
        let a = TrendCluster::build(&store, "abc".into(), vec![phrase("abcdef")], window).unwrap();
        let b = TrendCluster::build(&store, "xyc".into(), vec![phrase("xycdef")], window).unwrap();
        let c = TrendCluster::build(&store, "mno".into(), vec![phrase("mnopqr")], window).unwrap();
        let ab = link(&a, &b).unwrap().similarity;
        let ac = link(&a, &c).unwrap().similarity;
        let bc = link(&b, &c).unwrap().similarity;
        assert!(ab > ac && ab > bc);
        assert_eq!(ac, 0.0);
        assert_eq!(bc, 0.0);
        // Symmetry is exact.
        assert_eq!(ab, link(&b, &a).unwrap().similarity);
    }
}
