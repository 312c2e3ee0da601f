//! Versioned binary storage for built complexes.
//!
//! Layout, little-endian:
//!
//! ```text
//! magic   8 bytes  "SGNVCPLX"
//! version u32
//! n, m    u8, u8
//! levels  u32                  number of face levels (dimension + 2)
//! per level k: count u64, then count * k element IDs (u32)
//! crc32   u32                  over every preceding byte
//! ```
//!
//! Element IDs index the canonical-text order of `P_{n,m}`, which is
//! rebuilt on load.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::complex::{Face, OrderComplex};
use crate::poset::RankedPoset;

pub const MAGIC: &[u8; 8] = b"SGNVCPLX";
pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum CacheError {
    #[error("cache i/o: {0}")]
    Io(#[from] io::Error),
    #[error("not a complex cache file")]
    BadMagic,
    #[error("cache format version {found}, expected {FORMAT_VERSION}")]
    Version { found: u32 },
    #[error("cache checksum mismatch")]
    Checksum,
    #[error("cache file truncated")]
    Truncated,
    #[error("cache content invalid: {0}")]
    Invalid(String),
}

impl CacheError {
    /// Corruption as opposed to a stale format or a missing file.
    pub fn is_corruption(&self) -> bool {
        !matches!(self, CacheError::Version { .. } | CacheError::Io(_))
    }
}

pub fn cache_file(dir: &Path, n: usize, m: usize) -> PathBuf {
    dir.join(format!("delta-n{n}-m{m}-v{FORMAT_VERSION}.bin"))
}

pub fn encode(k: &OrderComplex) -> Vec<u8> {
    let mut buf = Vec::new();
    buf.extend_from_slice(MAGIC);
    buf.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    buf.push(k.n() as u8);
    buf.push(k.m() as u8);
    buf.extend_from_slice(&(k.faces_by_dim().len() as u32).to_le_bytes());
    for level in k.faces_by_dim() {
        buf.extend_from_slice(&(level.len() as u64).to_le_bytes());
        for face in level {
            for id in face.iter() {
                buf.extend_from_slice(&id.to_le_bytes());
            }
        }
    }
    let crc = crc32fast::hash(&buf);
    buf.extend_from_slice(&crc.to_le_bytes());
    buf
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl Reader<'_> {
    fn take(&mut self, len: usize) -> Result<&[u8], CacheError> {
        let end = self.pos.checked_add(len).ok_or(CacheError::Truncated)?;
        let out = self.buf.get(self.pos..end).ok_or(CacheError::Truncated)?;
        self.pos = end;
        Ok(out)
    }

    fn u32(&mut self) -> Result<u32, CacheError> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64, CacheError> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn u8(&mut self) -> Result<u8, CacheError> {
        Ok(self.take(1)?[0])
    }
}

/// Decodes a cache image and checks it against the expected parameters.
pub fn decode(bytes: &[u8], n: usize, m: usize) -> Result<OrderComplex, CacheError> {
    if bytes.len() < MAGIC.len() + 4 || &bytes[..8] != MAGIC {
        return Err(CacheError::BadMagic);
    }
    let found = u32::from_le_bytes(bytes[8..12].try_into().unwrap());
    if found != FORMAT_VERSION {
        return Err(CacheError::Version { found });
    }
    if bytes.len() < 16 {
        return Err(CacheError::Truncated);
    }
    let (body, tail) = bytes.split_at(bytes.len() - 4);
    if crc32fast::hash(body) != u32::from_le_bytes(tail.try_into().unwrap()) {
        return Err(CacheError::Checksum);
    }
    let mut r = Reader { buf: body, pos: 12 };
    let (fn_, fm) = (r.u8()? as usize, r.u8()? as usize);
    if (fn_, fm) != (n, m) {
        return Err(CacheError::Invalid(format!("file holds n={fn_}, m={fm}")));
    }
    let poset = RankedPoset::build(n, m).map_err(|e| CacheError::Invalid(e.to_string()))?;
    let levels = r.u32()? as usize;
    if levels > n + 1 {
        return Err(CacheError::Invalid(format!("{levels} face levels for n={n}")));
    }
    let mut faces_by_dim: Vec<Vec<Face>> = Vec::with_capacity(levels);
    for len in 0..levels {
        let count = r.u64()? as usize;
        if count.saturating_mul(len * 4) > body.len() {
            return Err(CacheError::Truncated);
        }
        let mut level = Vec::with_capacity(count);
        for _ in 0..count {
            let face = (0..len).map(|_| r.u32()).collect::<Result<Vec<u32>, _>>()?;
            if face.iter().any(|&id| id as usize >= poset.len()) {
                return Err(CacheError::Invalid("element id out of range".into()));
            }
            if face.windows(2).any(|w| !poset.element(w[0]).lt(&poset.element(w[1]))) {
                return Err(CacheError::Invalid("stored face is not a chain".into()));
            }
            level.push(face.into_boxed_slice());
        }
        faces_by_dim.push(level);
    }
    if r.pos != body.len() {
        return Err(CacheError::Invalid("trailing bytes".into()));
    }
    if faces_by_dim.first().map(Vec::len) != Some(1) {
        return Err(CacheError::Invalid("missing empty face".into()));
    }
    Ok(OrderComplex::from_parts(poset, faces_by_dim))
}

pub fn store(path: &Path, k: &OrderComplex) -> io::Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, encode(k))?;
    fs::rename(tmp, path)
}

pub fn load(path: &Path, n: usize, m: usize) -> Result<OrderComplex, CacheError> {
    decode(&fs::read(path)?, n, m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::DEFAULT_FACE_CAP;

    #[test]
    fn round_trip_and_corruption() {
        let k = OrderComplex::build(3, 2, DEFAULT_FACE_CAP).unwrap();
        let bytes = encode(&k);
        let back = decode(&bytes, 3, 2).unwrap();
        assert_eq!(back.faces_by_dim(), k.faces_by_dim());

        let mut flipped = bytes.clone();
        flipped[20] ^= 1;
        assert!(matches!(decode(&flipped, 3, 2), Err(CacheError::Checksum)));

        let mut stale = bytes.clone();
        stale[8] = 99;
        let err = decode(&stale, 3, 2).unwrap_err();
        assert!(matches!(err, CacheError::Version { found: 99 }));
        assert!(!err.is_corruption());

        assert!(matches!(decode(&bytes[..6], 3, 2), Err(CacheError::BadMagic)));
        assert!(matches!(decode(&bytes, 3, 1), Err(CacheError::Invalid(_))));
    }
}
