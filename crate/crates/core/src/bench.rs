//! Logical failure rates, homology histograms and decoder comparison sweeps.
//!
//! Test chain `k` of a report is drawn from substream `k` of `(seed, Eval)`
//! and decoded with substream `k` of `(seed, Decode)`, so every decoder sees
//! the same test set for a given seed and reports do not depend on the
//! number of worker threads.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decoders::{Decoder, DecodeOutcome, MwpmDecoder, NeuralDecoder, DEFAULT_MAX_SWEEPS, DEFAULT_N_EQ};
use crate::error::{Error, Result};
use crate::lattice::{Chain, Lattice, Syndrome};
use crate::noise::{default_p_grid, ErrorModel};
use crate::rbm::{load_model, RbmParams};
use crate::rng::{self, Domain, SimRng};
use crate::scalar::Scalar;

pub const REPORT_HEADER: &str = "decoder,L,p_err,M,n_fail,p_fail,n_h0,n_z1,n_z2,n_z1z2,n_timeout,seed,wall_time_s";

#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub decoder: String,
    pub lattice_size: usize,
    pub p_err: f64,
    /// Test-set size.
    pub m: usize,
    /// Non-trivial cycles plus timeouts.
    pub n_fail: usize,
    pub p_fail: f64,
    /// Classes of `e ⊕ r` over decodes that returned a compatible chain,
    /// in `(h0, Z1, Z2, Z1Z2)` order.
    pub class_counts: [usize; 4],
    pub n_timeout: usize,
    pub seed: u64,
    pub wall_time_s: f64,
}

impl EvalReport {
    pub fn csv_row(&self) -> String {
        let c = &self.class_counts;
        format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{:.3}",
            self.decoder,
            self.lattice_size,
            self.p_err,
            self.m,
            self.n_fail,
            self.p_fail,
            c[0],
            c[1],
            c[2],
            c[3],
            self.n_timeout,
            self.seed,
            self.wall_time_s
        )
    }

    /// Binomial standard error of `p_fail`.
    pub fn std_error(&self) -> f64 {
        (self.p_fail * (1.0 - self.p_fail) / self.m as f64).sqrt()
    }

    /// Share of the trivial class among all `M` decodes.
    pub fn trivial_share(&self) -> f64 {
        self.class_counts[0] as f64 / self.m as f64
    }
}

pub fn reports_to_csv(reports: &[EvalReport]) -> String {
    let mut out = String::from(REPORT_HEADER);
    out.push('\n');
    for r in reports {
        let _ = writeln!(out, "{}", r.csv_row());
    }
    out
}

/// Failure estimate for an arbitrary decoding rule.
///
/// `decode` receives the sampled error chain as well as its syndrome so that
/// calibration decoders can be expressed; real decoders must only look at the
/// syndrome. Decoder errors on a chain are recorded as timeouts.
pub fn estimate_pfail_with<F>(lattice: &Lattice, name: &str, p_err: f64, m: usize, seed: u64, decode: F) -> Result<EvalReport>
where
    F: Fn(&Chain, &Syndrome, &mut SimRng) -> Result<DecodeOutcome> + Sync,
{
    if m == 0 {
        return Err(Error::InvalidArgument("test-set size M must be at least 1".into()));
    }
    let model = ErrorModel::new(p_err)?;
    let started = Instant::now();
    // Some(class index) for a compatible recovery, None for a timeout.
    let outcomes: Vec<Option<usize>> = (0..m as u64)
        .into_par_iter()
        .map(|k| {
            let error = model.sample_chain(lattice, &mut rng::stream(seed, Domain::Eval, k));
            let syndrome = lattice.syndrome_of(&error).expect("sampled on this lattice");
            let mut rng = rng::stream(seed, Domain::Decode, k);
            match decode(&error, &syndrome, &mut rng) {
                Ok(out) if !out.timed_out => {
                    match crate::decoders::evaluate_recovery(lattice, &error, &out.recovery) {
                        Ok(class) => Some(class.index()),
                        Err(err) => {
                            log::warn!("{name}: chain {k}: {err}");
                            None
                        }
                    }
                }
                Ok(_) => None,
                Err(err) => {
                    log::warn!("{name}: chain {k}: {err}");
                    None
                }
            }
        })
        .collect();

    let mut class_counts = [0usize; 4];
    let mut n_timeout = 0;
    for o in &outcomes {
        match o {
            Some(c) => class_counts[*c] += 1,
            None => n_timeout += 1,
        }
    }
    let n_fail = m - class_counts[0];
    Ok(EvalReport {
        decoder: name.to_string(),
        lattice_size: lattice.size(),
        p_err,
        m,
        n_fail,
        p_fail: n_fail as f64 / m as f64,
        class_counts,
        n_timeout,
        seed,
        wall_time_s: started.elapsed().as_secs_f64(),
    })
}

/// `P_fail = n_fail / M` of `decoder` on `M` fresh chains at `p_err`.
pub fn estimate_pfail(decoder: &dyn Decoder, p_err: f64, m: usize, seed: u64) -> Result<EvalReport> {
    estimate_pfail_with(decoder.lattice(), decoder.name(), p_err, m, seed, |_, s, rng| {
        decoder.decode(s, rng)
    })
}

/// Histogram of homology classes returned by the neural decoder.
pub fn homology_histogram<T: Scalar>(
    lattice: &Lattice,
    params: &RbmParams<T>,
    p_err: f64,
    m: usize,
    seed: u64,
    n_eq: usize,
    max_sweeps: usize,
) -> Result<EvalReport> {
    let decoder = NeuralDecoder::new(*lattice, params.clone(), n_eq, max_sweeps)?;
    estimate_pfail(&decoder, p_err, m, seed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DecoderKind {
    Mwpm,
    Neural,
}

impl DecoderKind {
    pub fn name(self) -> &'static str {
        match self {
            DecoderKind::Mwpm => "mwpm",
            DecoderKind::Neural => "neural",
        }
    }
}

/// A decoder comparison sweep over lattice sizes and error probabilities.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CompareConfig {
    pub lattice_sizes: Vec<usize>,
    pub p_values: Vec<f64>,
    #[serde(rename = "M")]
    pub m: usize,
    pub seed: u64,
    pub decoders: Vec<DecoderKind>,
    /// Model path with `{L}` and `{p}` placeholders, e.g. `models/L{L}_p{p}.tnrb`.
    pub model_template: String,
    pub n_eq: usize,
    pub max_sweeps: usize,
}

impl Default for CompareConfig {
    fn default() -> Self {
        CompareConfig {
            lattice_sizes: vec![4],
            p_values: default_p_grid(),
            m: 10_000,
            seed: 1,
            decoders: vec![DecoderKind::Mwpm, DecoderKind::Neural],
            model_template: "models/L{L}_p{p}.tnrb".to_string(),
            n_eq: DEFAULT_N_EQ,
            max_sweeps: DEFAULT_MAX_SWEEPS,
        }
    }
}

impl CompareConfig {
    pub fn model_path(&self, lattice_size: usize, p_err: f64) -> PathBuf {
        PathBuf::from(
            self.model_template
                .replace("{L}", &lattice_size.to_string())
                .replace("{p}", &format!("{p_err}")),
        )
    }
}

#[derive(Debug)]
pub struct RowError {
    pub decoder: DecoderKind,
    pub lattice_size: usize,
    pub p_err: f64,
    pub error: Error,
}

/// One report per `(decoder, L, p_err)`, ordered by decoder, then `L`, then
/// `p_err`. A row that cannot be produced (missing model, bad input) is
/// returned as an error and the sweep carries on.
pub fn compare_decoders(config: &CompareConfig) -> Vec<std::result::Result<EvalReport, RowError>> {
    let mut decoders = config.decoders.clone();
    decoders.sort();
    decoders.dedup();
    let mut rows = Vec::new();
    for &kind in &decoders {
        for &l in &config.lattice_sizes {
            for &p in &config.p_values {
                let result = run_row(config, kind, l, p).map_err(|error| RowError {
                    decoder: kind,
                    lattice_size: l,
                    p_err: p,
                    error,
                });
                rows.push(result);
            }
        }
    }
    rows
}

fn run_row(config: &CompareConfig, kind: DecoderKind, l: usize, p: f64) -> Result<EvalReport> {
    let lattice = Lattice::new(l)?;
    match kind {
        DecoderKind::Mwpm => estimate_pfail(&MwpmDecoder::new(lattice), p, config.m, config.seed),
        DecoderKind::Neural => {
            let path = config.model_path(l, p);
            let params = load_checked(&path, &lattice)?;
            let decoder = NeuralDecoder::new(lattice, params, config.n_eq, config.max_sweeps)?;
            estimate_pfail(&decoder, p, config.m, config.seed)
        }
    }
}

fn load_checked(path: &Path, lattice: &Lattice) -> Result<RbmParams<f64>> {
    let (header, params) = load_model::<f64>(path)?;
    if header.lattice != *lattice {
        return Err(Error::LatticeMismatch {
            expected: lattice.size(),
            found: header.lattice.size(),
        });
    }
    Ok(params)
}
