//! Normalization into boundary-free segments and n-gram extraction.
//!
//! A gram unit is a single Unicode scalar value; no case folding and no
//! Unicode normalization form is applied here, so neologisms keep their exact
//! character identity. Text is split into segments on Unicode whitespace and
//! on a configurable set of boundary punctuation, and n-grams never cross a
//! segment boundary.

use crate::error::Error;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

/// One timestamped text item, the unit of ingestion.
///
/// `ts` is UTC epoch seconds; `id` must be nonempty and unique within one
/// ingestion run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Post {
    pub id: String,
    pub ts: u64,
    pub text: String,
}

/// Boundary punctuation: default is ASCII punctuation plus common CJK
/// full-width punctuation.
///
/// Unicode whitespace always splits, independent of this set. The ranges
/// below are inclusive.
const DEFAULT_BOUNDARY_RANGES: &[(char, char)] = &[
    ('\u{21}', '\u{2F}'),     // ! " # $ % & ' ( ) * + , - . /
    ('\u{3A}', '\u{40}'),     // : ; < = > ? @
    ('\u{5B}', '\u{60}'),     // [ \ ] ^ _ `
    ('\u{7B}', '\u{7E}'),     // { | } ~
    ('\u{B7}', '\u{B7}'),     // ·
    ('\u{2014}', '\u{2014}'), // —
    ('\u{2018}', '\u{2019}'), // ' '
    ('\u{201C}', '\u{201D}'), // " "
    ('\u{2026}', '\u{2026}'), // …
    ('\u{3001}', '\u{3003}'), // 、 。 〃
    ('\u{3008}', '\u{3011}'), // 〈 〉 《 》 「 」 『 』 【 】
    ('\u{3014}', '\u{301F}'), // 〔 〕 〖 〗 〘 〙 〚 〛 〜 〝 〞 〟
    ('\u{30FB}', '\u{30FB}'), // ・
    ('\u{FF01}', '\u{FF0F}'), // ！ ＂ … ，－．／ (full-width ASCII)
    ('\u{FF1A}', '\u{FF20}'), // ：；＜＝＞？＠
    ('\u{FF3B}', '\u{FF40}'), // ［＼］＾＿｀
    ('\u{FF5B}', '\u{FF65}'), // ｛｜｝～｟｠｡｢｣､･
];

/// The set of scalars that terminate a segment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundarySet {
    chars: Vec<char>, // sorted, deduplicated
}

impl BoundarySet {
    /// Set containing no punctuation; whitespace still splits.
    pub fn empty() -> BoundarySet {
        BoundarySet { chars: Vec::new() }
    }

    pub fn from_chars(chars: impl IntoIterator<Item = char>) -> BoundarySet {
        let mut chars: Vec<char> = chars.into_iter().collect();
        chars.sort_unstable();
        chars.dedup();
        BoundarySet { chars }
    }

    /// Whether `c` is in the configured punctuation set.
    pub fn contains(&self, c: char) -> bool {
        self.chars.binary_search(&c).is_ok()
    }

    /// Whether `c` terminates a segment: Unicode whitespace or set member.
    pub fn splits(&self, c: char) -> bool {
        c.is_whitespace() || self.contains(c)
    }

    pub fn iter(&self) -> impl Iterator<Item = char> + '_ {
        self.chars.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }
}

impl Default for BoundarySet {
    fn default() -> Self {
        BoundarySet::from_chars(
            DEFAULT_BOUNDARY_RANGES
                .iter()
                .flat_map(|&(lo, hi)| (lo as u32..=hi as u32).filter_map(char::from_u32)),
        )
    }
}

/// Splits `text` into nonempty segments on whitespace and boundary
/// punctuation, preserving in-segment order and scalars.
pub fn normalize<'a>(text: &'a str, boundaries: &BoundarySet) -> Vec<&'a str> {
    text.split(|c: char| boundaries.splits(c))
        .filter(|seg| !seg.is_empty())
        .collect()
}

/// Sliding n-scalar windows over a segment, as subslices.
///
/// Yields `max(0, |segment| - n + 1)` windows; `n == 0` yields none.
pub fn char_windows(segment: &str, n: usize) -> CharWindows<'_> {
    let mut end = 0usize;
    let mut seen = 0usize;
    for (idx, c) in segment.char_indices() {
        seen += 1;
        if seen == n {
            end = idx + c.len_utf8();
            break;
        }
    }
    let done = n == 0 || seen < n;
    CharWindows {
        segment,
        start: 0,
        end,
        done,
    }
}

pub struct CharWindows<'a> {
    segment: &'a str,
    start: usize,
    end: usize,
    done: bool,
}

impl<'a> Iterator for CharWindows<'a> {
    type Item = &'a str;

    fn next(&mut self) -> Option<&'a str> {
        if self.done {
            return None;
        }
        let out = &self.segment[self.start..self.end];
        let first = self.segment[self.start..].chars().next().expect("window nonempty");
        self.start += first.len_utf8();
        match self.segment[self.end..].chars().next() {
            Some(c) => self.end += c.len_utf8(),
            None => self.done = true,
        }
        Some(out)
    }
}

/// The ordered n-grams of one segment.
///
/// The i-th gram is `units[i..i + n)`; grams never span segment boundaries
/// because segments are boundary-free by construction.
pub fn extract_ngrams(segment: &str, n: usize) -> Result<Vec<String>, Error> {
    if n == 0 {
        return Err(Error::ZeroGramOrder);
    }
    Ok(char_windows(segment, n).map(ToString::to_string).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn normalize_splits_on_fullwidth_comma() {
        let b = BoundarySet::default();
        assert_eq!(
            normalize("中南海管得了南海，钓鱼台管得了钓鱼岛", &b),
            vec!["中南海管得了南海", "钓鱼台管得了钓鱼岛"]
        );
    }

    #[test]
    fn normalize_empty_and_whitespace() {
        let b = BoundarySet::default();
        assert_eq!(normalize("", &b), Vec::<&str>::new());
        assert_eq!(normalize("a b", &b), vec!["a", "b"]);
        assert_eq!(normalize(" \u{3000}\t", &b), Vec::<&str>::new());
    }

    #[test]
    fn normalize_keeps_scalars_and_case() {
        let b = BoundarySet::default();
        assert_eq!(normalize("AbC。ＤeＦ", &b), vec!["AbC", "ＤeＦ"]);
    }

    #[test]
    fn extract_trigram_chain() {
        let grams = extract_ngrams("中华人民共和国", 3).unwrap();
        assert_eq!(grams, vec!["中华人", "华人民", "人民共", "民共和", "共和国"]);
    }

    #[test]
    fn extract_short_segment() {
        assert_eq!(extract_ngrams("ab", 3).unwrap(), Vec::<String>::new());
        assert_eq!(extract_ngrams("abc", 3).unwrap(), vec!["abc"]);
    }

    #[test]
    fn extract_rejects_order_zero() {
        assert_eq!(extract_ngrams("abc", 0), Err(Error::ZeroGramOrder));
    }

    #[test]
    fn window_count_matches_formula() {
        for (text, n) in [("中华人民共和国", 3), ("abcd", 2), ("a", 1), ("", 3)] {
            let len = text.chars().count();
            let expect = (len + 1).saturating_sub(n);
            assert_eq!(char_windows(text, n).count(), expect);
        }
    }

    #[test]
    fn default_boundaries_cover_ascii_and_cjk() {
        let b = BoundarySet::default();
        for c in ['，', '。', '！', '？', '、', '《', '》', '「', '」', ',', '.', '#', '—', '…'] {
            assert!(b.contains(c), "{c:?} should be a boundary");
        }
        for c in ['中', 'a', '0', 'ア', '가'] {
            assert!(!b.contains(c), "{c:?} should not be a boundary");
        }
        // Ideographic space splits via the whitespace rule, not the set.
        assert!(b.splits('\u{3000}'));
        assert!(!b.contains('\u{3000}'));
    }
}
