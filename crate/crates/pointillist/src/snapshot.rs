//! Versioned binary store snapshots, plus a text debug export.
//!
//! All integers are little-endian. Layout:
//!
//! ```text
//! header, 24 bytes
//!   0..4    magic "PNTL"
//!   4..8    format version, u32 (currently 1)
//!   8..12   flags, u32 (bit 0: partial ingest)
//!   12..16  tz offset seconds, i32
//!   16..20  primary (smallest) gram order, u32
//!   20..24  CRC32 (IEEE) of the payload bytes
//! payload
//!   order count, u32
//!   per order, orders ascending:
//!     gram order n, u32
//!     gram count, u64
//!     per gram, canonical order:
//!       gram byte length, u32; UTF-8 bytes
//!       run count, u32; runs as (bin u32, count u32), bins ascending
//!     suffix index: gram count u32 entries — indices into this order's
//!       gram table, sorted by the reversed gram
//! ```
//!
//! The debug export is one `gram TAB bin TAB count` line per run, orders
//! ascending then canonical gram order then bins ascending.

use pointillist_core::{GramStore, OrderParts, TzOffset};
use std::fs;
use std::io::{self, Write};
use std::path::Path;
use thiserror::Error;

pub const MAGIC: [u8; 4] = *b"PNTL";
pub const VERSION: u32 = 1;
pub const FLAG_PARTIAL: u32 = 1;

const HEADER_LEN: usize = 24;

#[derive(Debug, Error)]
pub enum SnapshotError {
    #[error("snapshot i/o: {0}")]
    Io(#[from] io::Error),
    #[error("not a snapshot (bad magic)")]
    BadMagic,
    #[error("unsupported snapshot version {found} (this build reads {VERSION})")]
    Version { found: u32 },
    #[error("checksum mismatch: stored {stored:08x}, computed {computed:08x}")]
    Checksum { stored: u32, computed: u32 },
    #[error("snapshot truncated while reading {0}")]
    Truncated(&'static str),
    #[error("snapshot was written by an aborted ingest; pass --allow-partial to load it anyway")]
    Partial,
    #[error("snapshot corrupt: {0}")]
    Corrupt(String),
}

/// Serializes the store to `path`, atomically enough for a batch pipeline:
/// written to a sibling temp file first, then renamed into place.
pub fn save(store: &GramStore, path: &Path) -> Result<(), SnapshotError> {
    let payload = encode_payload(store);
    let mut file = Vec::with_capacity(HEADER_LEN + payload.len());
    file.extend_from_slice(&MAGIC);
    file.extend_from_slice(&VERSION.to_le_bytes());
    let flags = if store.is_partial() { FLAG_PARTIAL } else { 0 };
    file.extend_from_slice(&flags.to_le_bytes());
    file.extend_from_slice(&store.tz().seconds().to_le_bytes());
    file.extend_from_slice(&u32::from(store.primary_order()).to_le_bytes());
    file.extend_from_slice(&crc32fast::hash(&payload).to_le_bytes());
    file.extend_from_slice(&payload);

    let tmp = path.with_extension("pntl.tmp");
    fs::write(&tmp, &file)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn encode_payload(store: &GramStore) -> Vec<u8> {
    let orders = store.orders();
    let mut buf = Vec::new();
    buf.extend_from_slice(&(orders.len() as u32).to_le_bytes());
    for n in orders {
        let entries: Vec<_> = store
            .iter_series()
            .filter(|s| s.n == n)
            .collect();
        buf.extend_from_slice(&u32::from(n).to_le_bytes());
        buf.extend_from_slice(&(entries.len() as u64).to_le_bytes());
        for entry in &entries {
            let bytes = entry.gram.as_bytes();
            buf.extend_from_slice(&(bytes.len() as u32).to_le_bytes());
            buf.extend_from_slice(bytes);
            buf.extend_from_slice(&(entry.runs.len() as u32).to_le_bytes());
            for &(bin, count) in entry.runs {
                buf.extend_from_slice(&bin.to_le_bytes());
                buf.extend_from_slice(&count.to_le_bytes());
            }
        }
        for idx in suffix_permutation(&entries) {
            buf.extend_from_slice(&idx.to_le_bytes());
        }
    }
    buf
}

fn suffix_permutation(entries: &[pointillist_core::GramSeries<'_>]) -> Vec<u32> {
    let mut perm: Vec<(String, u32)> = entries
        .iter()
        .enumerate()
        .map(|(i, e)| (e.gram.chars().rev().collect(), i as u32))
        .collect();
    perm.sort_unstable();
    perm.into_iter().map(|(_, i)| i).collect()
}

/// Loads a snapshot. A store flagged as partial refuses to load unless
/// `allow_partial` is set.
pub fn load(path: &Path, allow_partial: bool) -> Result<GramStore, SnapshotError> {
    let bytes = fs::read(path)?;
    if bytes.len() < HEADER_LEN {
        return Err(SnapshotError::Truncated("header"));
    }
    if bytes[0..4] != MAGIC {
        return Err(SnapshotError::BadMagic);
    }
    let version = read_u32(&bytes[4..8]);
    if version != VERSION {
        return Err(SnapshotError::Version { found: version });
    }
    let flags = read_u32(&bytes[8..12]);
    let tz_seconds = i32::from_le_bytes(bytes[12..16].try_into().unwrap());
    let stored_crc = read_u32(&bytes[20..24]);
    let payload = &bytes[HEADER_LEN..];
    let computed = crc32fast::hash(payload);
    if stored_crc != computed {
        return Err(SnapshotError::Checksum {
            stored: stored_crc,
            computed,
        });
    }
    let partial = flags & FLAG_PARTIAL != 0;
    if partial && !allow_partial {
        return Err(SnapshotError::Partial);
    }
    let tz = TzOffset::from_seconds(tz_seconds)
        .map_err(|e| SnapshotError::Corrupt(e.to_string()))?;

    let mut reader = Reader { buf: payload, pos: 0 };
    let order_count = reader.u32("order count")?;
    let mut parts = Vec::new();
    let mut permutations = Vec::new();
    for _ in 0..order_count {
        let n = reader.u32("gram order")?;
        let n = u8::try_from(n).map_err(|_| SnapshotError::Corrupt(format!("order {n} out of range")))?;
        let gram_count = reader.u64("gram count")?;
        let gram_count = usize::try_from(gram_count)
            .map_err(|_| SnapshotError::Corrupt("gram count out of range".into()))?;
        let mut entries = Vec::with_capacity(gram_count.min(1 << 20));
        for _ in 0..gram_count {
            let len = reader.u32("gram length")? as usize;
            let bytes = reader.take(len, "gram bytes")?;
            let gram = std::str::from_utf8(bytes)
                .map_err(|_| SnapshotError::Corrupt("gram is not UTF-8".into()))?;
            let run_count = reader.u32("run count")? as usize;
            let mut runs = Vec::with_capacity(run_count.min(1 << 20));
            for _ in 0..run_count {
                let bin = reader.u32("run bin")?;
                let count = reader.u32("run count value")?;
                runs.push((bin, count));
            }
            entries.push((Box::<str>::from(gram), runs));
        }
        let mut perm = Vec::with_capacity(gram_count.min(1 << 20));
        for _ in 0..gram_count {
            perm.push(reader.u32("suffix index")?);
        }
        permutations.push(perm);
        parts.push(OrderParts { n, entries });
    }
    if reader.pos != payload.len() {
        return Err(SnapshotError::Corrupt("trailing bytes after payload".into()));
    }

    // Cross-check the stored suffix indexes against a recomputation before
    // handing the parts over; the loaded store always rebuilds its own.
    for part in parts.iter().zip(&permutations) {
        let (part, stored) = part;
        let mut expect: Vec<(String, u32)> = part
            .entries
            .iter()
            .enumerate()
            .map(|(i, (g, _))| (g.chars().rev().collect(), i as u32))
            .collect();
        expect.sort_unstable();
        let expect: Vec<u32> = expect.into_iter().map(|(_, i)| i).collect();
        if &expect != stored {
            return Err(SnapshotError::Corrupt("suffix index mismatch".into()));
        }
    }

    GramStore::from_parts(tz, partial, parts).map_err(|e| SnapshotError::Corrupt(e.to_string()))
}

fn read_u32(bytes: &[u8]) -> u32 {
    u32::from_le_bytes(bytes.try_into().unwrap())
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, len: usize, what: &'static str) -> Result<&'a [u8], SnapshotError> {
        let end = self
            .pos
            .checked_add(len)
            .filter(|&e| e <= self.buf.len())
            .ok_or(SnapshotError::Truncated(what))?;
        let out = &self.buf[self.pos..end];
        self.pos = end;
        Ok(out)
    }

    fn u32(&mut self, what: &'static str) -> Result<u32, SnapshotError> {
        Ok(read_u32(self.take(4, what)?))
    }

    fn u64(&mut self, what: &'static str) -> Result<u64, SnapshotError> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }
}

/// Writes the plain-text debug export: `gram TAB bin TAB count` per run.
pub fn write_debug_export<W: Write>(store: &GramStore, mut w: W) -> io::Result<()> {
    for series in store.iter_series() {
        for &(bin, count) in series.runs {
            writeln!(w, "{}\t{}\t{}", series.gram, bin, count)?;
        }
    }
    Ok(())
}
