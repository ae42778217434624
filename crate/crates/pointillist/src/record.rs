//! Line-delimited post records.
//!
//! One JSON object per line with fields `id`, `ts`, and `text`. Timestamps
//! are either integer epoch seconds or an ISO-8601 string carrying an offset;
//! offsets are applied during parsing, never discarded. Errors carry the
//! 1-based line number of the offending record.

use pointillist_core::Post;
use serde::Deserialize;
use std::io::BufRead;
use thiserror::Error;
use unicode_normalization::UnicodeNormalization;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RecordError {
    #[error("line {line}: malformed record: {msg}")]
    Malformed { line: u64, msg: String },
    #[error("line {line}: missing field {field}")]
    MissingField { line: u64, field: &'static str },
    #[error("line {line}: empty id")]
    EmptyId { line: u64 },
    #[error("line {line}: invalid timestamp {value:?} (epoch seconds or ISO-8601 with offset)")]
    InvalidTimestamp { line: u64, value: String },
    #[error("line {line}: timestamp before the epoch")]
    NegativeTimestamp { line: u64 },
}

#[derive(Deserialize)]
struct RawRecord {
    id: Option<String>,
    ts: Option<TsValue>,
    text: Option<String>,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum TsValue {
    Epoch(i64),
    Iso(String),
}

/// Parses one record line into a [`Post`].
pub fn parse_post(line: &str, line_no: u64) -> Result<Post, RecordError> {
    let raw: RawRecord = serde_json::from_str(line).map_err(|e| RecordError::Malformed {
        line: line_no,
        msg: e.to_string(),
    })?;
    let id = raw.id.ok_or(RecordError::MissingField {
        line: line_no,
        field: "id",
    })?;
    if id.is_empty() {
        return Err(RecordError::EmptyId { line: line_no });
    }
    let ts = raw.ts.ok_or(RecordError::MissingField {
        line: line_no,
        field: "ts",
    })?;
    let epoch = match ts {
        TsValue::Epoch(n) => n,
        TsValue::Iso(s) => chrono::DateTime::parse_from_rfc3339(&s)
            .map_err(|_| RecordError::InvalidTimestamp {
                line: line_no,
                value: s,
            })?
            .timestamp(),
    };
    if epoch < 0 {
        return Err(RecordError::NegativeTimestamp { line: line_no });
    }
    let text = raw.text.ok_or(RecordError::MissingField {
        line: line_no,
        field: "text",
    })?;
    Ok(Post {
        id,
        ts: epoch as u64,
        text,
    })
}

#[derive(Debug, Error)]
pub enum ReadError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Record(#[from] RecordError),
}

/// Streams posts out of a line-delimited reader, skipping blank lines.
pub struct PostReader<R> {
    lines: std::io::Lines<R>,
    line_no: u64,
    nfc: bool,
}

impl<R: BufRead> PostReader<R> {
    pub fn new(reader: R) -> PostReader<R> {
        PostReader {
            lines: reader.lines(),
            line_no: 0,
            nfc: false,
        }
    }

    /// Enables an NFC pre-pass over post text. Off by default: exact scalar
    /// identity is the point of gram units.
    pub fn with_nfc(mut self, nfc: bool) -> PostReader<R> {
        self.nfc = nfc;
        self
    }

    /// Line number of the most recently read line.
    pub fn line_no(&self) -> u64 {
        self.line_no
    }
}

impl<R: BufRead> Iterator for PostReader<R> {
    type Item = Result<Post, ReadError>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            let line = match self.lines.next()? {
                Ok(line) => line,
                Err(e) => return Some(Err(e.into())),
            };
            self.line_no += 1;
            if line.trim().is_empty() {
                continue;
            }
            let post = parse_post(&line, self.line_no).map(|mut p| {
                if self.nfc {
                    p.text = p.text.nfc().collect();
                }
                p
            });
            return Some(post.map_err(Into::into));
        }
    }
}
