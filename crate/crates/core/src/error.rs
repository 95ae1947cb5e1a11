use std::io;

use thiserror::Error;

/// Errors produced anywhere in the decoder pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {what} has length {got}, expected {expected}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("not a cycle: chain has a non-empty boundary")]
    NotACycle,
    #[error("invalid lattice size {0}: L must be at least 2")]
    InvalidLattice(usize),
    #[error("invalid error probability {0}: must lie in [0, 1]")]
    InvalidProbability(f64),
    #[error("invalid syndrome: odd number of defects ({0})")]
    InvalidSyndrome(usize),
    #[error("instance too large: {defects} defects exceeds the matching limit of {limit}")]
    InstanceTooLarge { defects: usize, limit: usize },
    #[error("oracle size exceeded: {visible} visible units, limit is {limit}")]
    OracleSizeExceeded { visible: usize, limit: usize },
    #[error("empty minibatch")]
    EmptyMinibatch,
    #[error("empty dataset")]
    EmptyDataset,
    #[error("empty hyper-parameter grid")]
    EmptyGrid,
    #[error("invalid hyper-parameters: {0}")]
    InvalidHyperparams(String),
    #[error("syndrome mismatch: recovery does not reproduce the error syndrome")]
    SyndromeMismatch,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("bad magic: expected {expected:?}, found {found:?}")]
    BadMagic { expected: [u8; 4], found: [u8; 4] },
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u16),
    #[error("truncated payload: expected {expected} bytes, found {found}")]
    Truncated { expected: u64, found: u64 },
    #[error("trailing data: {0} unexpected bytes after payload")]
    TrailingData(u64),
    #[error("lattice mismatch: file has L = {found}, expected L = {expected}")]
    LatticeMismatch { expected: usize, found: usize },
    #[error("corrupt header: {0}")]
    CorruptHeader(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    /// True for failures of file parsing or I/O, as opposed to violated preconditions.
    pub fn is_format_or_io(&self) -> bool {
        matches!(
            self,
            Error::BadMagic { .. }
                | Error::UnsupportedVersion(_)
                | Error::Truncated { .. }
                | Error::TrailingData(_)
                | Error::LatticeMismatch { .. }
                | Error::CorruptHeader(_)
                | Error::Io(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_len(what: &'static str, expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::DimensionMismatch {
            what,
            expected,
            got,
        })
    }
}
