//! Phase-flip noise and error-chain datasets.
//!
//! Dataset files are little-endian:
//!
//! ```text
//! magic "TNDS" | version u16 = 1 | L u16 | p_err f64 | M u64 | seed u64
//! M records of ceil(2 L^2 / 8) bytes, link bits packed LSB-first
//! ```
//!
//! Syndromes are not stored; they are recomputed from the chains.

use std::fs;
use std::io::Write;
use std::path::Path;

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::{Chain, Lattice, Syndrome};
use crate::rng::{self, Domain};

pub const DATASET_MAGIC: [u8; 4] = *b"TNDS";
pub const DATASET_VERSION: u16 = 1;
const HEADER_LEN: usize = 4 + 2 + 2 + 8 + 8 + 8;

/// Independent phase flips on every link with probability `p_err`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorModel {
    p_err: f64,
}

impl ErrorModel {
    pub fn new(p_err: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p_err) {
            return Err(Error::InvalidProbability(p_err));
        }
        Ok(ErrorModel { p_err })
    }

    pub fn p_err(&self) -> f64 {
        self.p_err
    }

    pub fn sample_chain<R: Rng + ?Sized>(&self, lattice: &Lattice, rng: &mut R) -> Chain {
        Chain::from_bits(
            (0..lattice.n_links())
                .map(|_| rng.gen_bool(self.p_err))
                .collect(),
        )
    }
}

/// Error probabilities of the benchmark sweep: 0.05 to 0.15 in steps of 0.01.
pub fn default_p_grid() -> Vec<f64> {
    (5..=15).map(|k| k as f64 / 100.0).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub lattice: Lattice,
    pub p_err: f64,
    pub seed: u64,
    pub chains: Vec<Chain>,
}

impl Dataset {
    pub fn len(&self) -> usize {
        self.chains.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chains.is_empty()
    }

    /// `(e, S(e))` pairs.
    pub fn samples(&self) -> impl Iterator<Item = (&Chain, Syndrome)> + '_ {
        self.chains.iter().map(move |c| {
            let s = self.lattice.syndrome_of_bits(c.iter_ones());
            (c, s)
        })
    }
}

/// Draws `count` chains; chain `k` uses substream `k` of `(seed, Dataset)` so the
/// output does not depend on the thread count.
pub fn generate_dataset(lattice: Lattice, model: ErrorModel, count: usize, seed: u64) -> Result<Dataset> {
    if count == 0 {
        return Err(Error::EmptyDataset);
    }
    let chains = (0..count as u64)
        .into_par_iter()
        .map(|k| model.sample_chain(&lattice, &mut rng::stream(seed, Domain::Dataset, k)))
        .collect();
    Ok(Dataset {
        lattice,
        p_err: model.p_err(),
        seed,
        chains,
    })
}

/// Packs bits LSB-first into `ceil(len / 8)` bytes.
pub fn pack_bits(bits: &[bool]) -> Vec<u8> {
    let mut out = vec![0u8; bits.len().div_ceil(8)];
    for (i, _) in bits.iter().enumerate().filter(|(_, &b)| b) {
        out[i / 8] |= 1 << (i % 8);
    }
    out
}

pub fn unpack_bits(bytes: &[u8], len: usize) -> Vec<bool> {
    (0..len).map(|i| bytes[i / 8] >> (i % 8) & 1 == 1).collect()
}

pub fn encode_dataset(dataset: &Dataset) -> Result<Vec<u8>> {
    let l = dataset.lattice.size();
    let l16 = u16::try_from(l).map_err(|_| Error::InvalidArgument(format!("L = {l} does not fit in u16")))?;
    let record = dataset.lattice.n_links().div_ceil(8);
    let mut out = Vec::with_capacity(HEADER_LEN + record * dataset.len());
    out.extend_from_slice(&DATASET_MAGIC);
    out.extend_from_slice(&DATASET_VERSION.to_le_bytes());
    out.extend_from_slice(&l16.to_le_bytes());
    out.extend_from_slice(&dataset.p_err.to_le_bytes());
    out.extend_from_slice(&(dataset.len() as u64).to_le_bytes());
    out.extend_from_slice(&dataset.seed.to_le_bytes());
    for chain in &dataset.chains {
        if chain.len() != dataset.lattice.n_links() {
            return Err(Error::DimensionMismatch {
                what: "chain",
                expected: dataset.lattice.n_links(),
                got: chain.len(),
            });
        }
        out.extend_from_slice(&pack_bits(chain.bits()));
    }
    Ok(out)
}

pub fn decode_dataset(bytes: &[u8]) -> Result<Dataset> {
    if bytes.len() < 4 {
        return Err(Error::Truncated {
            expected: HEADER_LEN as u64,
            found: bytes.len() as u64,
        });
    }
    let magic: [u8; 4] = bytes[..4].try_into().unwrap();
    if magic != DATASET_MAGIC {
        return Err(Error::BadMagic {
            expected: DATASET_MAGIC,
            found: magic,
        });
    }
    if bytes.len() < HEADER_LEN {
        return Err(Error::Truncated {
            expected: HEADER_LEN as u64,
            found: bytes.len() as u64,
        });
    }
    let version = u16::from_le_bytes(bytes[4..6].try_into().unwrap());
    if version != DATASET_VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let l = u16::from_le_bytes(bytes[6..8].try_into().unwrap()) as usize;
    let p_err = f64::from_le_bytes(bytes[8..16].try_into().unwrap());
    let count = u64::from_le_bytes(bytes[16..24].try_into().unwrap());
    let seed = u64::from_le_bytes(bytes[24..32].try_into().unwrap());

    let lattice = Lattice::new(l).map_err(|_| Error::CorruptHeader(format!("lattice size {l}")))?;
    if !(0.0..=1.0).contains(&p_err) {
        return Err(Error::CorruptHeader(format!("error probability {p_err}")));
    }
    if count == 0 {
        return Err(Error::CorruptHeader("zero records".into()));
    }
    let record = lattice.n_links().div_ceil(8);
    let expected = count
        .checked_mul(record as u64)
        .ok_or_else(|| Error::CorruptHeader(format!("record count {count}")))?;
    let payload = &bytes[HEADER_LEN..];
    let found = payload.len() as u64;
    if found < expected {
        return Err(Error::Truncated { expected, found });
    }
    if found > expected {
        return Err(Error::TrailingData(found - expected));
    }
    let chains = payload
        .chunks_exact(record)
        .map(|rec| Chain::from_bits(unpack_bits(rec, lattice.n_links())))
        .collect();
    Ok(Dataset {
        lattice,
        p_err,
        seed,
        chains,
    })
}

pub fn save_dataset(dataset: &Dataset, path: impl AsRef<Path>) -> Result<()> {
    let bytes = encode_dataset(dataset)?;
    let mut file = fs::File::create(path)?;
    file.write_all(&bytes)?;
    file.flush()?;
    Ok(())
}

pub fn load_dataset(path: impl AsRef<Path>) -> Result<Dataset> {
    decode_dataset(&fs::read(path)?)
}

/// Loads a dataset and checks that it was generated on `lattice`.
pub fn load_dataset_for(path: impl AsRef<Path>, lattice: &Lattice) -> Result<Dataset> {
    let ds = load_dataset(path)?;
    if ds.lattice != *lattice {
        return Err(Error::LatticeMismatch {
            expected: lattice.size(),
            found: ds.lattice.size(),
        });
    }
    Ok(ds)
}
