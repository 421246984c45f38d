//! Versioned single-file model archives.
//!
//! Layout (little-endian): 8-byte magic, `u32` format version, `u8` model
//! kind, `u64` payload length, JSON payload, CRC-32 of the payload.
//! JSON floats are written in shortest round-trip form, so numeric
//! payloads survive a save/load cycle bit for bit.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::autoencoder::FeedforwardNet;
use crate::doc2vec::EmbeddingModel;
use crate::error::{Error, Result};
use crate::lda::LdaModel;

pub const ARCHIVE_VERSION: u32 = 1;
const MAGIC: &[u8; 8] = b"DOCREPMA";
const HEADER_LEN: usize = 8 + 4 + 1 + 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Lda = 1,
    Embedding = 2,
    Autoencoder = 3,
}

impl ModelKind {
    fn from_tag(tag: u8) -> Option<Self> {
        match tag {
            1 => Some(ModelKind::Lda),
            2 => Some(ModelKind::Embedding),
            3 => Some(ModelKind::Autoencoder),
            _ => None,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ModelKind::Lda => "lda",
            ModelKind::Embedding => "embedding",
            ModelKind::Autoencoder => "autoencoder",
        }
    }
}

/// A model type that can be stored in an archive.
pub trait Archived: Serialize + DeserializeOwned {
    const KIND: ModelKind;
}

impl Archived for LdaModel {
    const KIND: ModelKind = ModelKind::Lda;
}

impl Archived for EmbeddingModel {
    const KIND: ModelKind = ModelKind::Embedding;
}

impl Archived for FeedforwardNet {
    const KIND: ModelKind = ModelKind::Autoencoder;
}

pub fn encode<M: Archived>(model: &M) -> Result<Vec<u8>> {
    let payload = serde_json::to_vec(model).map_err(|e| Error::invalid(format!("cannot serialize model: {e}")))?;
    let mut out = Vec::with_capacity(HEADER_LEN + payload.len() + 4);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&ARCHIVE_VERSION.to_le_bytes());
    out.push(M::KIND as u8);
    out.extend_from_slice(&(payload.len() as u64).to_le_bytes());
    out.extend_from_slice(&payload);
    out.extend_from_slice(&crc32fast::hash(&payload).to_le_bytes());
    Ok(out)
}

/// Reads the archive header: format version and model kind.
pub fn peek_kind(bytes: &[u8]) -> Result<ModelKind> {
    if bytes.len() < HEADER_LEN {
        return Err(Error::CorruptArchive(format!("{} bytes is shorter than the header", bytes.len())));
    }
    if &bytes[..8] != MAGIC {
        return Err(Error::CorruptArchive("not a model archive".into()));
    }
    let version = u32::from_le_bytes(bytes[8..12].try_into().expect("4 bytes"));
    if version != ARCHIVE_VERSION {
        return Err(Error::VersionMismatch {
            found: version,
            expected: ARCHIVE_VERSION,
        });
    }
    ModelKind::from_tag(bytes[12]).ok_or_else(|| Error::CorruptArchive(format!("unknown model kind tag {}", bytes[12])))
}

pub fn decode<M: Archived>(bytes: &[u8]) -> Result<M> {
    let kind = peek_kind(bytes)?;
    if kind != M::KIND {
        return Err(Error::KindMismatch {
            found: kind.name().into(),
            expected: M::KIND.name().into(),
        });
    }
    let len = u64::from_le_bytes(bytes[13..HEADER_LEN].try_into().expect("8 bytes"));
    let body = &bytes[HEADER_LEN..];
    let expected_len = usize::try_from(len).ok().and_then(|l| l.checked_add(4));
    if expected_len != Some(body.len()) {
        return Err(Error::CorruptArchive(format!(
            "payload of {len} bytes declared, {} bytes follow the header",
            body.len()
        )));
    }
    let (payload, crc) = body.split_at(body.len() - 4);
    if crc32fast::hash(payload).to_le_bytes() != crc {
        return Err(Error::CorruptArchive("checksum mismatch".into()));
    }
    serde_json::from_slice(payload).map_err(|e| Error::CorruptArchive(e.to_string()))
}

pub fn save_model<M: Archived>(model: &M, path: &Path) -> Result<()> {
    fs::write(path, encode(model)?).map_err(|e| Error::io(path, e))
}

pub fn load_model<M: Archived>(path: &Path) -> Result<M> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    decode(&bytes)
}
