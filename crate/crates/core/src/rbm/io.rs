//! Model files.
//!
//! ```text
//! magic "TNRB" | version u16 = 1 | L u16 | n_h u32 | p_err f64
//! U (n_h x L^2, row-major) | W (n_h x 2L^2, row-major) | b | c | d   all f64 LE
//! ```

use std::fs;
use std::path::Path;

use ndarray::{Array1, Array2};

use super::RbmParams;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::scalar::Scalar;

pub const MODEL_MAGIC: [u8; 4] = *b"TNRB";
pub const MODEL_VERSION: u16 = 1;
const HEADER_LEN: usize = 4 + 2 + 2 + 4 + 8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelHeader {
    pub lattice: Lattice,
    pub n_h: usize,
    /// Error probability of the training data.
    pub p_err: f64,
}

pub fn encode_model<T: Scalar>(header: &ModelHeader, params: &RbmParams<T>) -> Result<Vec<u8>> {
    let lat = header.lattice;
    if params.n_e() != lat.n_links() || params.n_s() != lat.n_vertices() || params.n_h() != header.n_h {
        return Err(Error::DimensionMismatch {
            what: "model parameters",
            expected: lat.n_links() + lat.n_vertices(),
            got: params.n_visible(),
        });
    }
    let l16 = u16::try_from(lat.size())
        .map_err(|_| Error::InvalidArgument(format!("L = {} does not fit in u16", lat.size())))?;
    let n_h32 = u32::try_from(header.n_h)
        .map_err(|_| Error::InvalidArgument(format!("n_h = {} does not fit in u32", header.n_h)))?;
    let n_floats = params.u.len() + params.w.len() + params.n_e() + params.n_h() + params.n_s();
    let mut out = Vec::with_capacity(HEADER_LEN + 8 * n_floats);
    out.extend_from_slice(&MODEL_MAGIC);
    out.extend_from_slice(&MODEL_VERSION.to_le_bytes());
    out.extend_from_slice(&l16.to_le_bytes());
    out.extend_from_slice(&n_h32.to_le_bytes());
    out.extend_from_slice(&header.p_err.to_le_bytes());
    // Row-major iteration order regardless of the in-memory layout.
    let values = params
        .u
        .rows()
        .into_iter()
        .flat_map(|r| r.into_iter())
        .chain(params.w.rows().into_iter().flat_map(|r| r.into_iter()))
        .chain(params.b.iter())
        .chain(params.c.iter())
        .chain(params.d.iter());
    for x in values {
        out.extend_from_slice(&x.to_f64().unwrap_or(f64::NAN).to_le_bytes());
    }
    Ok(out)
}

pub fn decode_model<T: Scalar>(bytes: &[u8]) -> Result<(ModelHeader, RbmParams<T>)> {
    if bytes.len() < 4 {
        return Err(Error::Truncated {
            expected: HEADER_LEN as u64,
            found: bytes.len() as u64,
        });
    }
    let magic: [u8; 4] = bytes[..4].try_into().unwrap();
    if magic != MODEL_MAGIC {
        return Err(Error::BadMagic {
            expected: MODEL_MAGIC,
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
    if version != MODEL_VERSION {
        return Err(Error::UnsupportedVersion(version));
    }
    let l = u16::from_le_bytes(bytes[6..8].try_into().unwrap()) as usize;
    let n_h = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let p_err = f64::from_le_bytes(bytes[12..20].try_into().unwrap());
    let lattice = Lattice::new(l).map_err(|_| Error::CorruptHeader(format!("lattice size {l}")))?;
    if n_h == 0 {
        return Err(Error::CorruptHeader("zero hidden units".into()));
    }
    if !(0.0..=1.0).contains(&p_err) {
        return Err(Error::CorruptHeader(format!("error probability {p_err}")));
    }
    let (n_e, n_s) = (lattice.n_links(), lattice.n_vertices());
    let n_floats = (n_h * n_s + n_h * n_e + n_e + n_h + n_s) as u64;
    let payload = &bytes[HEADER_LEN..];
    let expected = 8 * n_floats;
    let found = payload.len() as u64;
    if found < expected {
        return Err(Error::Truncated { expected, found });
    }
    if found > expected {
        return Err(Error::TrailingData(found - expected));
    }
    let mut values = payload
        .chunks_exact(8)
        .map(|c| T::from_f64_lossy(f64::from_le_bytes(c.try_into().unwrap())));
    let mut take = |n: usize| values.by_ref().take(n).collect::<Vec<T>>();
    let u = Array2::from_shape_vec((n_h, n_s), take(n_h * n_s)).expect("sized above");
    let w = Array2::from_shape_vec((n_h, n_e), take(n_h * n_e)).expect("sized above");
    let b = Array1::from(take(n_e));
    let c = Array1::from(take(n_h));
    let d = Array1::from(take(n_s));
    let params = RbmParams::from_parts(u, w, b, c, d)
        .map_err(|_| Error::CorruptHeader("non-finite parameter in payload".into()))?;
    Ok((ModelHeader { lattice, n_h, p_err }, params))
}

pub fn save_model<T: Scalar>(header: &ModelHeader, params: &RbmParams<T>, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode_model(header, params)?)?;
    Ok(())
}

pub fn load_model<T: Scalar>(path: impl AsRef<Path>) -> Result<(ModelHeader, RbmParams<T>)> {
    decode_model(&fs::read(path)?)
}
