//! Bit-exact binary persistence for labellings.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! "BHL1"                      magic, 4 bytes
//! u32 n                       vertex count
//! u32 k                       landmark count
//! k  x u32                    landmark dense ids, in set order
//! k² x u32                    highway matrix, row-major, 0xFFFFFFFF = inf
//! per vertex 0..n:            u32 entry count,
//!                             then (u32 landmark_index, u32 distance) pairs
//!                             sorted by landmark_index
//! u64                         FNV-1a checksum of all preceding bytes
//! ```
//!
//! Deserialization distinguishes a wrong magic, a stream ending early, and a
//! checksum mismatch; structural violations behind a valid checksum (label
//! indices out of range, unsorted rows, trailing bytes, ...) are reported as
//! malformed.

use thiserror::Error;

use crate::graph::VertexId;
use crate::labelling::{Dist, Highway, HighwayCoverLabelling, LabelEntry, LandmarkSet};

const MAGIC: &[u8; 4] = b"BHL1";
const FNV_OFFSET: u64 = 0xcbf29ce484222325;
const FNV_PRIME: u64 = 0x100000001b3;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum StorageError {
    #[error("bad magic: not a labelling file")]
    BadMagic,
    #[error("truncated stream")]
    Truncated,
    #[error("checksum mismatch")]
    ChecksumMismatch,
    #[error("malformed labelling: {0}")]
    Malformed(&'static str),
}

/// 64-bit FNV-1a over `bytes`.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash = FNV_OFFSET;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(FNV_PRIME);
    }
    hash
}

fn push_u32(out: &mut Vec<u8>, x: u32) {
    out.extend_from_slice(&x.to_le_bytes());
}

/// Encodes a labelling into the documented byte layout.
pub fn serialize(gamma: &HighwayCoverLabelling) -> Vec<u8> {
    let n = gamma.n();
    let k = gamma.landmarks.len();
    debug_assert!(n < u32::MAX as usize, "vertex count exceeds the format range");
    let mut out = Vec::new();
    out.extend_from_slice(MAGIC);
    push_u32(&mut out, n as u32);
    push_u32(&mut out, k as u32);
    for &v in gamma.landmarks.vertices() {
        push_u32(&mut out, v.0);
    }
    for i in 0..k {
        for j in 0..k {
            push_u32(&mut out, gamma.highway.dist(i, j).0);
        }
    }
    for v in 0..n {
        let row = gamma.labels(VertexId(v as u32));
        push_u32(&mut out, row.len() as u32);
        for entry in row {
            push_u32(&mut out, entry.landmark_index);
            push_u32(&mut out, entry.distance.0);
        }
    }
    let checksum = fnv1a64(&out);
    out.extend_from_slice(&checksum.to_le_bytes());
    out
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn u32(&mut self) -> Result<u32, StorageError> {
        let end = self.pos + 4;
        if end > self.bytes.len() {
            return Err(StorageError::Truncated);
        }
        let x = u32::from_le_bytes(self.bytes[self.pos..end].try_into().unwrap());
        self.pos = end;
        Ok(x)
    }

    /// Remaining payload must still hold `words` u32 values.
    fn expect_words(&self, words: u64) -> Result<(), StorageError> {
        if (self.bytes.len() - self.pos) as u64 / 4 < words {
            return Err(StorageError::Truncated);
        }
        Ok(())
    }
}

/// Decodes a labelling, validating magic, checksum, and structure.
pub fn deserialize(bytes: &[u8]) -> Result<HighwayCoverLabelling, StorageError> {
    if bytes.len() < MAGIC.len() {
        return Err(StorageError::Truncated);
    }
    if &bytes[..MAGIC.len()] != MAGIC {
        return Err(StorageError::BadMagic);
    }
    if bytes.len() < MAGIC.len() + 8 {
        return Err(StorageError::Truncated);
    }
    // Structure first (so a cut-off stream reports as truncated), then the
    // checksum over everything that precedes it.
    let payload_end = bytes.len() - 8;
    let mut c = Cursor {
        bytes: &bytes[..payload_end],
        pos: MAGIC.len(),
    };

    let n = c.u32()? as usize;
    let k = c.u32()? as usize;
    c.expect_words(k as u64 + (k as u64) * (k as u64))?;
    let mut landmark_ids = Vec::with_capacity(k);
    for _ in 0..k {
        let id = c.u32()?;
        if id as usize >= n {
            return Err(StorageError::Malformed("landmark id out of range"));
        }
        landmark_ids.push(VertexId(id));
    }
    let mut raw = Vec::with_capacity(k * k);
    for _ in 0..k * k {
        raw.push(Dist(c.u32()?));
    }
    let mut highway = Highway::new(k);
    for i in 0..k {
        if raw[i * k + i] != Dist::ZERO {
            return Err(StorageError::Malformed("nonzero highway diagonal"));
        }
        for j in (i + 1)..k {
            if raw[i * k + j] != raw[j * k + i] {
                return Err(StorageError::Malformed("asymmetric highway matrix"));
            }
            highway.set(i, j, raw[i * k + j]);
        }
    }
    let landmarks = LandmarkSet::from_vertices(n, landmark_ids)
        .map_err(|_| StorageError::Malformed("duplicate landmark id"))?;

    // Every vertex row carries at least its count word; checking up front
    // keeps a corrupted vertex count from provoking a huge allocation.
    c.expect_words(n as u64)?;
    let mut labels: Vec<Vec<LabelEntry>> = Vec::with_capacity(n);
    for v in 0..n {
        let count = c.u32()? as usize;
        if count > k {
            return Err(StorageError::Malformed("label row longer than landmark set"));
        }
        if count > 0 && landmarks.contains(VertexId(v as u32)) {
            return Err(StorageError::Malformed("label entries on a landmark"));
        }
        c.expect_words(2 * count as u64)?;
        let mut row = Vec::with_capacity(count);
        let mut prev: Option<u32> = None;
        for _ in 0..count {
            let landmark_index = c.u32()?;
            let distance = Dist(c.u32()?);
            if landmark_index as usize >= k {
                return Err(StorageError::Malformed("label landmark index out of range"));
            }
            if prev.is_some_and(|p| p >= landmark_index) {
                return Err(StorageError::Malformed("label row not sorted"));
            }
            if !distance.is_finite() {
                return Err(StorageError::Malformed("non-finite label distance"));
            }
            prev = Some(landmark_index);
            row.push(LabelEntry {
                landmark_index,
                distance,
            });
        }
        labels.push(row);
    }
    if c.pos != payload_end {
        return Err(StorageError::Malformed("trailing bytes"));
    }

    let stored = u64::from_le_bytes(bytes[payload_end..].try_into().unwrap());
    if fnv1a64(&bytes[..payload_end]) != stored {
        return Err(StorageError::ChecksumMismatch);
    }

    Ok(HighwayCoverLabelling::from_parts(landmarks, highway, labels))
}
