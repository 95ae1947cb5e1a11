//! Decoding by clamped Gibbs sampling of a trained network.
//!
//! The syndrome layer is fixed at the measured syndrome while the error and
//! hidden layers are resampled. After `n_eq` unchecked sweeps, the first error
//! layer whose boundary equals the measured syndrome becomes the recovery.

use log::debug;

use super::{DecodeOutcome, Decoder, SyndromeCheck};
use crate::error::{check_len, Result};
use crate::lattice::{Chain, HomologyClass, Lattice, Syndrome};
use crate::rbm::{ClampedChain, RbmParams};
use crate::rng::SimRng;
use crate::scalar::Scalar;

fn check_dims<T: Scalar>(lattice: &Lattice, params: &RbmParams<T>, syndrome: &Syndrome) -> Result<()> {
    check_len("model error layer", lattice.n_links(), params.n_e())?;
    check_len("model syndrome layer", lattice.n_vertices(), params.n_s())?;
    check_len("syndrome", lattice.n_vertices(), syndrome.len())
}

fn start_walker<'a, T: Scalar>(
    params: &'a RbmParams<T>,
    syndrome: &Syndrome,
    n_eq: usize,
    rng: &mut SimRng,
) -> Result<ClampedChain<'a, T>> {
    let mut walker = ClampedChain::new(params, syndrome.bits())?;
    walker.randomize(rng);
    for _ in 0..n_eq {
        walker.sweep(rng);
    }
    Ok(walker)
}

/// First compatible chain after equilibration. `max_sweeps` bounds the checked
/// sweeps that follow the `n_eq` equilibration sweeps.
pub fn neural_decode<T: Scalar>(
    lattice: &Lattice,
    params: &RbmParams<T>,
    syndrome: &Syndrome,
    n_eq: usize,
    max_sweeps: usize,
    rng: &mut SimRng,
) -> Result<DecodeOutcome> {
    check_dims(lattice, params, syndrome)?;
    let mut walker = start_walker(params, syndrome, n_eq, rng)?;
    let mut check = SyndromeCheck::new(lattice);
    for t in 1..=max_sweeps {
        walker.sweep(rng);
        if check.matches(walker.error_layer(), syndrome.bits()) {
            return Ok(DecodeOutcome {
                recovery: Chain::from_bits(walker.error_layer().to_vec()),
                sweeps_used: n_eq + t,
                timed_out: false,
            });
        }
    }
    Ok(DecodeOutcome {
        recovery: Chain::from_bits(walker.error_layer().to_vec()),
        sweeps_used: n_eq + max_sweeps,
        timed_out: true,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MlOutcome {
    pub outcome: DecodeOutcome,
    /// Class counts of `r_1 ⊕ r_i` over the collected chains, in
    /// [`HomologyClass::ALL`] order.
    pub histogram: [usize; 4],
    /// The first collected chain `r_1`, the reference of the histogram.
    pub reference: Option<Chain>,
}

impl MlOutcome {
    pub fn samples(&self) -> usize {
        self.histogram.iter().sum()
    }
}

/// Majority-class decoding: collect `n_samples` compatible chains along one
/// clamped walk, histogram their classes relative to the first one and return
/// the first chain seen in the most populated class (lowest index on ties).
pub fn ml_decode<T: Scalar>(
    lattice: &Lattice,
    params: &RbmParams<T>,
    syndrome: &Syndrome,
    n_samples: usize,
    n_eq: usize,
    max_sweeps: usize,
    rng: &mut SimRng,
) -> Result<MlOutcome> {
    check_dims(lattice, params, syndrome)?;
    let n_samples = n_samples.max(1);
    let mut walker = start_walker(params, syndrome, n_eq, rng)?;
    let mut check = SyndromeCheck::new(lattice);
    let mut histogram = [0usize; 4];
    let mut representatives: [Option<Chain>; 4] = Default::default();
    let mut reference: Option<Chain> = None;

    for t in 1..=max_sweeps {
        walker.sweep(rng);
        if !check.matches(walker.error_layer(), syndrome.bits()) {
            continue;
        }
        let chain = Chain::from_bits(walker.error_layer().to_vec());
        let class = match &reference {
            None => HomologyClass::TRIVIAL,
            Some(r1) => lattice.homology_class(&r1.compose(&chain)?)?,
        };
        histogram[class.index()] += 1;
        if reference.is_none() {
            reference = Some(chain.clone());
        }
        if representatives[class.index()].is_none() {
            representatives[class.index()] = Some(chain);
        }
        if histogram.iter().sum::<usize>() == n_samples {
            let best = (0..4).fold(0, |b, i| if histogram[i] > histogram[b] { i } else { b });
            return Ok(MlOutcome {
                outcome: DecodeOutcome {
                    recovery: representatives[best].take().expect("non-empty bin"),
                    sweeps_used: n_eq + t,
                    timed_out: false,
                },
                histogram,
                reference,
            });
        }
    }
    debug!("ml_decode timed out after {max_sweeps} sweeps with partial histogram {histogram:?}");
    Ok(MlOutcome {
        outcome: DecodeOutcome {
            recovery: Chain::from_bits(walker.error_layer().to_vec()),
            sweeps_used: n_eq + max_sweeps,
            timed_out: true,
        },
        histogram,
        reference,
    })
}

/// A trained network bundled with its sampling budget.
#[derive(Debug, Clone)]
pub struct NeuralDecoder<T> {
    lattice: Lattice,
    params: RbmParams<T>,
    pub n_eq: usize,
    pub max_sweeps: usize,
    name: String,
}

impl<T: Scalar> NeuralDecoder<T> {
    pub fn new(lattice: Lattice, params: RbmParams<T>, n_eq: usize, max_sweeps: usize) -> Result<Self> {
        check_len("model error layer", lattice.n_links(), params.n_e())?;
        check_len("model syndrome layer", lattice.n_vertices(), params.n_s())?;
        Ok(NeuralDecoder {
            lattice,
            params,
            n_eq,
            max_sweeps,
            name: "neural".to_string(),
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn params(&self) -> &RbmParams<T> {
        &self.params
    }
}

impl<T: Scalar> Decoder for NeuralDecoder<T> {
    fn name(&self) -> &str {
        &self.name
    }

    fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    fn decode(&self, syndrome: &Syndrome, rng: &mut SimRng) -> Result<DecodeOutcome> {
        neural_decode(&self.lattice, &self.params, syndrome, self.n_eq, self.max_sweeps, rng)
    }
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::rng::{self, Domain};

    fn random_params(lat: &Lattice, n_h: usize, seed: u64) -> RbmParams<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut p = RbmParams::zeros(lat.n_links(), lat.n_vertices(), n_h);
        p.u.mapv_inplace(|_| rng.gen_range(-0.5..0.5));
        p.w.mapv_inplace(|_| rng.gen_range(-0.5..0.5));
        p.b.fill(-1.0);
        p
    }

    #[test]
    fn zero_budget_times_out() {
        let lat = Lattice::new(2).unwrap();
        let p = random_params(&lat, 4, 1);
        let mut r = rng::stream(1, Domain::Decode, 0);
        let out = neural_decode(&lat, &p, &lat.empty_syndrome(), 5, 0, &mut r).unwrap();
        assert!(out.timed_out);
        assert_eq!(out.sweeps_used, 5);
    }

    #[test]
    fn outcomes_reproduce_the_syndrome() {
        let lat = Lattice::new(2).unwrap();
        let p = random_params(&lat, 6, 2);
        for k in 0..200u64 {
            let mut r = rng::stream(2, Domain::Decode, k);
            let e = crate::noise::ErrorModel::new(0.2).unwrap().sample_chain(&lat, &mut r);
            let s = lat.syndrome_of(&e).unwrap();
            let out = neural_decode(&lat, &p, &s, 3, 10_000, &mut r).unwrap();
            assert!(!out.timed_out);
            assert_eq!(lat.syndrome_of(&out.recovery).unwrap(), s);
        }
    }

    #[test]
    fn ml_with_one_sample_equals_neural() {
        let lat = Lattice::new(2).unwrap();
        let p = random_params(&lat, 5, 3);
        let mut s = vec![false; 4];
        s[0] = true;
        s[1] = true;
        let s = Syndrome::from_bits(s);
        for k in 0..50 {
            let a = neural_decode(&lat, &p, &s, 10, 5000, &mut rng::stream(3, Domain::Decode, k)).unwrap();
            let b = ml_decode(&lat, &p, &s, 1, 10, 5000, &mut rng::stream(3, Domain::Decode, k)).unwrap();
            assert_eq!(a, b.outcome);
            assert_eq!(b.samples(), 1);
            assert_eq!(b.histogram[0], 1);
        }
    }

    #[test]
    fn ml_histogram_sums_to_samples_and_picks_mode() {
        let lat = Lattice::new(2).unwrap();
        let p = random_params(&lat, 5, 4);
        let s = lat.empty_syndrome();
        let out = ml_decode(&lat, &p, &s, 300, 10, 1_000_000, &mut rng::stream(4, Domain::Decode, 0)).unwrap();
        assert!(!out.outcome.timed_out);
        assert_eq!(out.samples(), 300);
        let best = out.histogram.iter().max().unwrap();
        let r1 = out.reference.unwrap();
        let class = lat.homology_class(&r1.compose(&out.outcome.recovery).unwrap()).unwrap();
        assert_eq!(out.histogram[class.index()], *best);
        assert_eq!(lat.syndrome_of(&out.outcome.recovery).unwrap(), s);
    }

    #[test]
    fn rejects_mismatched_model() {
        let lat = Lattice::new(3).unwrap();
        let p = RbmParams::<f64>::zeros(8, 4, 2);
        let mut r = rng::stream(0, Domain::Decode, 0);
        assert!(neural_decode(&lat, &p, &lat.empty_syndrome(), 1, 1, &mut r).is_err());
        assert!(NeuralDecoder::new(lat, p, 1, 1).is_err());
    }
}
