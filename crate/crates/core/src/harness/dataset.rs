//! Offline target-domain transitions and their binary file format.
//!
//! Layout, all integers and floats little-endian:
//!
//! | offset | size | field                                   |
//! |--------|------|-----------------------------------------|
//! | 0      | 4    | magic `DAPD`                            |
//! | 4      | 4    | u32 version (= 1)                       |
//! | 8      | 4    | u32 state_dim                           |
//! | 12     | 4    | u32 action_dim                          |
//! | 16     | 8    | u64 record count M (≥ 1)                |
//! | 24     | ...  | M records of f32: `s ‖ a ‖ s'`          |
//! | end-8  | 8    | u64 sum of all preceding bytes mod 2^64 |
//!
//! Provenance (environment id, behavioural policy id, collection seed) is
//! kept in a `key=value` sidecar next to the file, `<path>.meta`.

use std::path::{Path, PathBuf};

use thiserror::Error;

pub const MAGIC: [u8; 4] = *b"DAPD";
pub const VERSION: u32 = 1;
const HEADER_LEN: usize = 24;
const CHECKSUM_LEN: usize = 8;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("byte {offset}: bad magic {found:?}, expected \"DAPD\"")]
    BadMagic { offset: usize, found: [u8; 4] },
    #[error("byte {offset}: unsupported version {version}")]
    UnsupportedVersion { offset: usize, version: u32 },
    #[error("byte {offset}: {field} must be positive")]
    ZeroDimension { offset: usize, field: &'static str },
    #[error("byte {offset}: dataset holds no records")]
    Empty { offset: usize },
    #[error("byte {offset}: file truncated, {expected} bytes expected")]
    Truncated { offset: usize, expected: usize },
    #[error("byte {offset}: {extra} unexpected trailing bytes")]
    TrailingBytes { offset: usize, extra: usize },
    #[error("byte {offset}: checksum mismatch (stored {stored:#018x}, computed {computed:#018x})")]
    Checksum {
        offset: usize,
        stored: u64,
        computed: u64,
    },
    #[error("byte {offset}: declared sizes overflow")]
    Overflow { offset: usize },
    #[error("metadata: {0}")]
    Metadata(String),
    #[error("record {index} has wrong width")]
    RecordWidth { index: usize },
}

/// Target-domain transitions `(s, a, s')` stored as 32-bit floats.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetDataset {
    pub env_id: String,
    pub behavioral_policy_id: String,
    pub collection_seed: u64,
    state_dim: usize,
    action_dim: usize,
    records: Vec<f32>,
}

impl TargetDataset {
    pub fn new(state_dim: usize, action_dim: usize) -> Self {
        assert!(
            state_dim > 0 && action_dim > 0,
            "dimensions must be positive"
        );
        Self {
            env_id: String::new(),
            behavioral_policy_id: String::new(),
            collection_seed: 0,
            state_dim,
            action_dim,
            records: Vec::new(),
        }
    }

    pub fn state_dim(&self) -> usize {
        self.state_dim
    }

    pub fn action_dim(&self) -> usize {
        self.action_dim
    }

    fn stride(&self) -> usize {
        2 * self.state_dim + self.action_dim
    }

    /// Number of records `M`.
    pub fn len(&self) -> usize {
        self.records.len() / self.stride()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Appends one transition, rounding to f32.
    pub fn push(
        &mut self,
        state: &[f64],
        action: &[f64],
        next_state: &[f64],
    ) -> Result<(), DatasetError> {
        if state.len() != self.state_dim
            || action.len() != self.action_dim
            || next_state.len() != self.state_dim
        {
            return Err(DatasetError::RecordWidth { index: self.len() });
        }
        self.records.extend(
            state
                .iter()
                .chain(action)
                .chain(next_state)
                .map(|v| *v as f32),
        );
        Ok(())
    }

    /// `(s, a, s')` of record `i`.
    pub fn record(&self, i: usize) -> (&[f32], &[f32], &[f32]) {
        let r = &self.records[i * self.stride()..(i + 1) * self.stride()];
        let (s, rest) = r.split_at(self.state_dim);
        let (a, s2) = rest.split_at(self.action_dim);
        (s, a, s2)
    }

    pub fn raw(&self) -> &[f32] {
        &self.records
    }

    /// The first `m` records.
    pub fn truncated(&self, m: usize) -> Self {
        let mut out = self.clone();
        out.records.truncate(m.min(self.len()) * self.stride());
        out
    }

    pub fn to_bytes(&self) -> Result<Vec<u8>, DatasetError> {
        if self.is_empty() {
            return Err(DatasetError::Empty { offset: 16 });
        }
        let mut out = Vec::with_capacity(HEADER_LEN + 4 * self.records.len() + CHECKSUM_LEN);
        out.extend_from_slice(&MAGIC);
        out.extend_from_slice(&VERSION.to_le_bytes());
        out.extend_from_slice(&(self.state_dim as u32).to_le_bytes());
        out.extend_from_slice(&(self.action_dim as u32).to_le_bytes());
        out.extend_from_slice(&(self.len() as u64).to_le_bytes());
        for v in &self.records {
            out.extend_from_slice(&v.to_le_bytes());
        }
        let sum = checksum(&out);
        out.extend_from_slice(&sum.to_le_bytes());
        Ok(out)
    }

    /// Parses the binary layout. Provenance fields are left empty.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, DatasetError> {
        if bytes.len() < HEADER_LEN {
            return Err(DatasetError::Truncated {
                offset: bytes.len(),
                expected: HEADER_LEN,
            });
        }
        let u32_at = |o: usize| u32::from_le_bytes(bytes[o..o + 4].try_into().unwrap());
        let magic: [u8; 4] = bytes[0..4].try_into().unwrap();
        if magic != MAGIC {
            return Err(DatasetError::BadMagic {
                offset: 0,
                found: magic,
            });
        }
        let version = u32_at(4);
        if version != VERSION {
            return Err(DatasetError::UnsupportedVersion { offset: 4, version });
        }
        let state_dim = u32_at(8) as usize;
        if state_dim == 0 {
            return Err(DatasetError::ZeroDimension {
                offset: 8,
                field: "state_dim",
            });
        }
        let action_dim = u32_at(12) as usize;
        if action_dim == 0 {
            return Err(DatasetError::ZeroDimension {
                offset: 12,
                field: "action_dim",
            });
        }
        let m = u64::from_le_bytes(bytes[16..24].try_into().unwrap());
        if m == 0 {
            return Err(DatasetError::Empty { offset: 16 });
        }
        let floats = usize::try_from(m)
            .ok()
            .and_then(|m| m.checked_mul(2 * state_dim + action_dim))
            .ok_or(DatasetError::Overflow { offset: 16 })?;
        let expected = floats
            .checked_mul(4)
            .and_then(|b| b.checked_add(HEADER_LEN + CHECKSUM_LEN))
            .ok_or(DatasetError::Overflow { offset: 16 })?;
        if bytes.len() < expected {
            return Err(DatasetError::Truncated {
                offset: bytes.len(),
                expected,
            });
        }
        if bytes.len() > expected {
            return Err(DatasetError::TrailingBytes {
                offset: expected,
                extra: bytes.len() - expected,
            });
        }
        let body_end = expected - CHECKSUM_LEN;
        let stored = u64::from_le_bytes(bytes[body_end..].try_into().unwrap());
        let computed = checksum(&bytes[..body_end]);
        if stored != computed {
            return Err(DatasetError::Checksum {
                offset: body_end,
                stored,
                computed,
            });
        }
        let records = bytes[HEADER_LEN..body_end]
            .chunks_exact(4)
            .map(|c| f32::from_le_bytes(c.try_into().unwrap()))
            .collect();
        Ok(Self {
            env_id: String::new(),
            behavioral_policy_id: String::new(),
            collection_seed: 0,
            state_dim,
            action_dim,
            records,
        })
    }
}

fn checksum(bytes: &[u8]) -> u64 {
    bytes
        .iter()
        .fold(0u64, |acc, b| acc.wrapping_add(u64::from(*b)))
}

pub fn meta_path(path: &Path) -> PathBuf {
    let mut p = path.as_os_str().to_owned();
    p.push(".meta");
    PathBuf::from(p)
}

/// Writes the binary file and its provenance sidecar.
pub fn save_dataset(dataset: &TargetDataset, path: &Path) -> Result<(), DatasetError> {
    let io = |source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    };
    let bytes = dataset.to_bytes()?;
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent).map_err(io)?;
    }
    std::fs::write(path, bytes).map_err(io)?;
    let meta = format!(
        "env_id={}\nbehavioral_policy_id={}\ncollection_seed={}\n",
        dataset.env_id, dataset.behavioral_policy_id, dataset.collection_seed
    );
    std::fs::write(meta_path(path), meta).map_err(|source| DatasetError::Io {
        path: meta_path(path),
        source,
    })
}

/// Reads a dataset file; the sidecar is optional.
pub fn load_dataset(path: &Path) -> Result<TargetDataset, DatasetError> {
    let bytes = std::fs::read(path).map_err(|source| DatasetError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut dataset = TargetDataset::from_bytes(&bytes)?;
    let meta = meta_path(path);
    if meta.exists() {
        let text = std::fs::read_to_string(&meta).map_err(|source| DatasetError::Io {
            path: meta.clone(),
            source,
        })?;
        for line in text.lines().filter(|l| !l.trim().is_empty()) {
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| DatasetError::Metadata(format!("malformed line `{line}`")))?;
            match k {
                "env_id" => dataset.env_id = v.to_string(),
                "behavioral_policy_id" => dataset.behavioral_policy_id = v.to_string(),
                "collection_seed" => {
                    dataset.collection_seed = v
                        .parse()
                        .map_err(|_| DatasetError::Metadata(format!("bad collection_seed `{v}`")))?
                }
                other => return Err(DatasetError::Metadata(format!("unknown key `{other}`"))),
            }
        }
    }
    Ok(dataset)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> TargetDataset {
        let mut d = TargetDataset::new(2, 1);
        d.push(&[0.5, -1.0], &[0.25], &[0.75, -0.5]).unwrap();
        d.push(&[1.0, 2.0], &[-1.0], &[3.0, 4.0]).unwrap();
        d
    }

    #[test]
    fn empty_dataset_is_rejected() {
        let d = TargetDataset::new(2, 1);
        assert!(matches!(d.to_bytes(), Err(DatasetError::Empty { .. })));
        let mut bytes = tiny().to_bytes().unwrap();
        bytes[16..24].copy_from_slice(&0u64.to_le_bytes());
        assert!(matches!(
            TargetDataset::from_bytes(&bytes),
            Err(DatasetError::Empty { offset: 16 })
        ));
    }

    #[test]
    fn every_header_byte_is_guarded() {
        let good = tiny().to_bytes().unwrap();
        for i in 0..HEADER_LEN {
            let mut bytes = good.clone();
            bytes[i] ^= 0x5a;
            assert!(
                TargetDataset::from_bytes(&bytes).is_err(),
                "corrupting header byte {i} went unnoticed"
            );
        }
    }

    #[test]
    fn payload_corruption_fails_the_checksum() {
        let mut bytes = tiny().to_bytes().unwrap();
        bytes[30] ^= 0x01;
        assert!(matches!(
            TargetDataset::from_bytes(&bytes),
            Err(DatasetError::Checksum { .. })
        ));
    }

    #[test]
    fn truncation_reports_the_offset() {
        let bytes = tiny().to_bytes().unwrap();
        let cut = &bytes[..bytes.len() - 3];
        match TargetDataset::from_bytes(cut) {
            Err(DatasetError::Truncated { offset, expected }) => {
                assert_eq!(offset, cut.len());
                assert_eq!(expected, bytes.len());
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn trailing_bytes_are_rejected() {
        let mut bytes = tiny().to_bytes().unwrap();
        bytes.push(0);
        assert!(matches!(
            TargetDataset::from_bytes(&bytes),
            Err(DatasetError::TrailingBytes { extra: 1, .. })
        ));
    }
}
