//! Decoders map a measured syndrome to a recovery chain with the same boundary.

mod mwpm;
mod neural;

pub use mwpm::{min_weight_matching, mwpm_decode, pair_path, torus_distance, Matching, MwpmDecoder, MAX_DEFECTS};
pub use neural::{ml_decode, neural_decode, MlOutcome, NeuralDecoder};

use crate::error::{Error, Result};
use crate::lattice::{Chain, HomologyClass, Lattice, Syndrome};
use crate::rng::SimRng;

/// Sweep budget after equilibration before a neural decode gives up.
pub const DEFAULT_MAX_SWEEPS: usize = 100_000;
/// Clamped sweeps discarded before the syndrome is first checked.
pub const DEFAULT_N_EQ: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecodeOutcome {
    pub recovery: Chain,
    /// Gibbs sweeps performed, including equilibration. Zero for matching.
    pub sweeps_used: usize,
    /// Set when no chain with the target syndrome was found within budget;
    /// `recovery` is then the last sampled chain.
    pub timed_out: bool,
}

pub trait Decoder: Sync {
    fn name(&self) -> &str;

    fn lattice(&self) -> &Lattice;

    fn decode(&self, syndrome: &Syndrome, rng: &mut SimRng) -> Result<DecodeOutcome>;
}

/// Homology class of `e0 ⊕ r`; trivial means the recovery succeeded.
pub fn evaluate_recovery(lattice: &Lattice, error: &Chain, recovery: &Chain) -> Result<HomologyClass> {
    if lattice.syndrome_of(error)? != lattice.syndrome_of(recovery)? {
        return Err(Error::SyndromeMismatch);
    }
    lattice.homology_class(&error.compose(recovery)?)
}

/// Compares the boundary of a raw bit vector against a target without allocating.
#[derive(Debug, Clone)]
pub(crate) struct SyndromeCheck {
    endpoints: Vec<(u32, u32)>,
    scratch: Vec<bool>,
}

impl SyndromeCheck {
    pub(crate) fn new(lattice: &Lattice) -> Self {
        SyndromeCheck {
            endpoints: (0..lattice.n_links())
                .map(|l| {
                    let (a, b) = lattice.endpoints(l);
                    (a as u32, b as u32)
                })
                .collect(),
            scratch: vec![false; lattice.n_vertices()],
        }
    }

    pub(crate) fn matches(&mut self, chain: &[bool], target: &[bool]) -> bool {
        self.scratch.fill(false);
        for (&(a, b), _) in self.endpoints.iter().zip(chain).filter(|(_, &bit)| bit) {
            self.scratch[a as usize] ^= true;
            self.scratch[b as usize] ^= true;
        }
        self.scratch == target
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluate_recovery_cases() {
        let lat = Lattice::new(4).unwrap();
        let mut e0 = lat.empty_chain();
        e0.toggle(3);
        e0.toggle(20);
        assert_eq!(evaluate_recovery(&lat, &e0, &e0).unwrap(), HomologyClass::TRIVIAL);

        let flipped = e0.compose(&lat.logical_representative(HomologyClass::Z1)).unwrap();
        assert_eq!(evaluate_recovery(&lat, &e0, &flipped).unwrap(), HomologyClass::Z1);

        let stab = e0.compose(&lat.plaquette_boundary(1, 2)).unwrap();
        assert_eq!(evaluate_recovery(&lat, &e0, &stab).unwrap(), HomologyClass::TRIVIAL);

        assert!(matches!(
            evaluate_recovery(&lat, &e0, &lat.empty_chain()),
            Err(Error::SyndromeMismatch)
        ));
    }

    #[test]
    fn syndrome_check_agrees_with_lattice() {
        let lat = Lattice::new(3).unwrap();
        let mut check = SyndromeCheck::new(&lat);
        for code in 0..1u32 << 18 {
            if code % 97 != 0 {
                continue;
            }
            let chain = Chain::from_bits((0..18).map(|i| code >> i & 1 == 1).collect());
            let s = lat.syndrome_of(&chain).unwrap();
            assert!(check.matches(chain.bits(), s.bits()));
            let mut other = s.bits().to_vec();
            other[0] ^= true;
            assert!(!check.matches(chain.bits(), &other));
        }
    }
}
