//! Contrastive-divergence training and hyper-parameter search.
//!
//! Gradients here are ascent directions of the mean log-likelihood, i.e.
//! `<stat>_data - <stat>_model` for each parameter block, which is the
//! negative of the KL-divergence gradient. [`sgd_step`] adds them.

use std::collections::HashMap;
use std::time::Instant;

use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::seq::SliceRandom;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::decoders::{evaluate_recovery, neural_decode};
use crate::error::{check_len, Error, Result};
use crate::lattice::{Chain, Lattice};
use crate::noise::Dataset;
use crate::rbm::{RbmParams, VisibleConfigs, ORACLE_VISIBLE_LIMIT};
use crate::rng::{self, Domain, SimRng};
use crate::scalar::Scalar;

/// Samples used to monitor the effective energy during training.
const MONITOR_SAMPLES: usize = 1000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Hyperparams {
    /// Learning rate.
    pub eta: f64,
    pub batch_size: usize,
    /// Width of the uniform weight initialization, centred on zero.
    pub init_width: f64,
    /// Gibbs steps in the negative phase.
    pub cd_k: usize,
    /// Weight-decay coefficient, applied to `U` and `W` only.
    pub l2: f64,
    pub n_h: usize,
    pub epochs: usize,
    /// Equilibration sweeps used when the trained model decodes.
    pub n_eq: usize,
}

impl Default for Hyperparams {
    fn default() -> Self {
        Hyperparams {
            eta: 0.05,
            batch_size: 100,
            init_width: 0.1,
            cd_k: 1,
            l2: 0.0,
            n_h: 64,
            epochs: 500,
            n_eq: crate::decoders::DEFAULT_N_EQ,
        }
    }
}

impl Hyperparams {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidHyperparams(msg.to_string()));
        if !(self.eta.is_finite() && self.eta > 0.0) {
            return bad("eta must be positive");
        }
        if self.batch_size == 0 {
            return bad("batch_size must be at least 1");
        }
        if !(self.init_width.is_finite() && self.init_width > 0.0) {
            return bad("init_width must be positive");
        }
        if self.cd_k == 0 {
            return bad("cd_k must be at least 1");
        }
        if !(self.l2.is_finite() && self.l2 >= 0.0) {
            return bad("l2 must be non-negative");
        }
        if self.n_h == 0 {
            return bad("n_h must be at least 1");
        }
        Ok(())
    }

    /// The default search grid for a lattice: `n_h ∈ {2,4,8}·L²`,
    /// `eta ∈ {0.01, 0.05, 0.1}`, `cd_k ∈ {1, 10}`, `l2 ∈ {0, 1e-4}`,
    /// `batch_size ∈ {50, 100}`, `init_width ∈ {0.01, 0.1}`, 144 points.
    pub fn default_grid(lattice: &Lattice) -> Vec<Hyperparams> {
        let n = lattice.n_vertices();
        let mut grid = Vec::with_capacity(144);
        for n_h in [2 * n, 4 * n, 8 * n] {
            for eta in [0.01, 0.05, 0.1] {
                for cd_k in [1, 10] {
                    for l2 in [0.0, 1e-4] {
                        for batch_size in [50, 100] {
                            for init_width in [0.01, 0.1] {
                                grid.push(Hyperparams {
                                    eta,
                                    batch_size,
                                    init_width,
                                    cd_k,
                                    l2,
                                    n_h,
                                    ..Hyperparams::default()
                                });
                            }
                        }
                    }
                }
            }
        }
        grid
    }
}

/// Training data as dense 0/1 matrices, one row per sample.
#[derive(Debug, Clone, PartialEq)]
pub struct VisibleSet<T> {
    pub e: Array2<T>,
    pub s: Array2<T>,
}

impl<T: Scalar> VisibleSet<T> {
    pub fn from_pairs<'a>(n_e: usize, n_s: usize, pairs: impl IntoIterator<Item = (&'a [bool], &'a [bool])>) -> Result<Self> {
        let mut e = Vec::new();
        let mut s = Vec::new();
        let mut rows = 0;
        for (ei, si) in pairs {
            check_len("error sample", n_e, ei.len())?;
            check_len("syndrome sample", n_s, si.len())?;
            e.extend(ei.iter().map(|&b| T::from_bit(b)));
            s.extend(si.iter().map(|&b| T::from_bit(b)));
            rows += 1;
        }
        Ok(VisibleSet {
            e: Array2::from_shape_vec((rows, n_e), e).expect("row lengths checked"),
            s: Array2::from_shape_vec((rows, n_s), s).expect("row lengths checked"),
        })
    }

    /// Error chains with their recomputed syndromes.
    pub fn from_dataset(dataset: &Dataset) -> Self {
        let lat = dataset.lattice;
        let samples: Vec<(&Chain, crate::lattice::Syndrome)> = dataset.samples().collect();
        Self::from_pairs(
            lat.n_links(),
            lat.n_vertices(),
            samples.iter().map(|(e, s)| (e.bits(), s.bits())),
        )
        .expect("dataset chains match the lattice")
    }

    pub fn len(&self) -> usize {
        self.e.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn select(&self, rows: &[usize]) -> Self {
        VisibleSet {
            e: self.e.select(Axis(0), rows),
            s: self.s.select(Axis(0), rows),
        }
    }
}

/// Per-block gradients with the shapes of [`RbmParams`].
#[derive(Debug, Clone, PartialEq)]
pub struct GradientSet<T> {
    pub du: Array2<T>,
    pub dw: Array2<T>,
    pub db: Array1<T>,
    pub dc: Array1<T>,
    pub dd: Array1<T>,
}

impl<T: Scalar> GradientSet<T> {
    pub fn zeros_like(params: &RbmParams<T>) -> Self {
        GradientSet {
            du: Array2::zeros(params.u.raw_dim()),
            dw: Array2::zeros(params.w.raw_dim()),
            db: Array1::zeros(params.b.raw_dim()),
            dc: Array1::zeros(params.c.raw_dim()),
            dd: Array1::zeros(params.d.raw_dim()),
        }
    }

    fn check_shape(&self, params: &RbmParams<T>) -> Result<()> {
        check_len("dU", params.u.len(), self.du.len())?;
        check_len("dU rows", params.u.nrows(), self.du.nrows())?;
        check_len("dW", params.w.len(), self.dw.len())?;
        check_len("dW rows", params.w.nrows(), self.dw.nrows())?;
        check_len("db", params.b.len(), self.db.len())?;
        check_len("dc", params.c.len(), self.dc.len())?;
        check_len("dd", params.d.len(), self.dd.len())
    }

    /// Frobenius norms of `(dU, dW, db, dc, dd)`.
    pub fn norms(&self) -> [f64; 5] {
        let norm = |it: &mut dyn Iterator<Item = &T>| {
            it.map(|x| x.to_f64().unwrap_or(f64::NAN).powi(2)).sum::<f64>().sqrt()
        };
        [
            norm(&mut self.du.iter()),
            norm(&mut self.dw.iter()),
            norm(&mut self.db.iter()),
            norm(&mut self.dc.iter()),
            norm(&mut self.dd.iter()),
        ]
    }
}

/// Weights uniform on `[-w/2, w/2]`, biases zero.
pub fn init_params<T: Scalar, R: Rng + ?Sized>(n_e: usize, n_s: usize, n_h: usize, init_width: f64, rng: &mut R) -> RbmParams<T> {
    let mut p = RbmParams::zeros(n_e, n_s, n_h);
    if init_width > 0.0 {
        let half = init_width / 2.0;
        for x in p.u.iter_mut().chain(p.w.iter_mut()) {
            *x = T::from_f64_lossy(rng.gen_range(-half..=half));
        }
    }
    p
}

/// Parameters sized for `lattice`, initialized from `hyper`.
pub fn init_lattice_params<T: Scalar, R: Rng + ?Sized>(lattice: &Lattice, hyper: &Hyperparams, rng: &mut R) -> RbmParams<T> {
    init_params(lattice.n_links(), lattice.n_vertices(), hyper.n_h, hyper.init_width, rng)
}

/// Hidden probabilities for every row: `σ(E Wᵀ + S Uᵀ + c)`.
fn hidden_probs<T: Scalar>(params: &RbmParams<T>, e: &ArrayView2<'_, T>, s: &ArrayView2<'_, T>) -> Array2<T> {
    let mut field = e.dot(&params.w.t()) + s.dot(&params.u.t());
    field += &params.c;
    field.mapv_into(T::sigmoid)
}

fn sample_matrix<T: Scalar, R: Rng + ?Sized>(probs: &Array2<T>, rng: &mut R) -> Array2<T> {
    probs.mapv(|p| T::from_bit(T::unit_sample(rng) < p))
}

fn mean_rows<T: Scalar>(m: &Array2<T>) -> Array1<T> {
    let n = T::from_usize(m.nrows()).expect("row count fits");
    m.sum_axis(Axis(0)) / n
}

/// CD-κ estimate of the log-likelihood gradient over a minibatch.
///
/// The positive phase uses exact hidden probabilities at the data. The
/// negative phase runs `k` unclamped block-Gibbs sweeps from each data point
/// and evaluates the same statistics at the chain end, again with hidden
/// probabilities rather than sampled hidden units.
pub fn cd_k_gradient<T: Scalar, R: Rng + ?Sized>(
    params: &RbmParams<T>,
    batch: &VisibleSet<T>,
    k: usize,
    rng: &mut R,
) -> Result<GradientSet<T>> {
    if batch.is_empty() {
        return Err(Error::EmptyMinibatch);
    }
    if k == 0 {
        return Err(Error::InvalidHyperparams("cd_k must be at least 1".into()));
    }
    check_len("error columns", params.n_e(), batch.e.ncols())?;
    check_len("syndrome columns", params.n_s(), batch.s.ncols())?;

    let data_ph = hidden_probs(params, &batch.e.view(), &batch.s.view());
    let mut e = batch.e.clone();
    let mut s = batch.s.clone();
    let mut ph = data_ph.clone();
    for _ in 0..k {
        let h = sample_matrix(&ph, rng);
        let mut fe = h.dot(&params.w);
        fe += &params.b;
        e = sample_matrix(&fe.mapv_into(T::sigmoid), rng);
        let mut fs = h.dot(&params.u);
        fs += &params.d;
        s = sample_matrix(&fs.mapv_into(T::sigmoid), rng);
        ph = hidden_probs(params, &e.view(), &s.view());
    }

    let n = T::from_usize(batch.len()).expect("batch size fits");
    Ok(GradientSet {
        du: (data_ph.t().dot(&batch.s) - ph.t().dot(&s)) / n,
        dw: (data_ph.t().dot(&batch.e) - ph.t().dot(&e)) / n,
        db: mean_rows(&batch.e) - mean_rows(&e),
        dc: mean_rows(&data_ph) - mean_rows(&ph),
        dd: mean_rows(&batch.s) - mean_rows(&s),
    })
}

fn check_oracle_size<T: Scalar>(params: &RbmParams<T>) -> Result<()> {
    if params.n_visible() > ORACLE_VISIBLE_LIMIT {
        return Err(Error::OracleSizeExceeded {
            visible: params.n_visible(),
            limit: ORACLE_VISIBLE_LIMIT,
        });
    }
    Ok(())
}

/// Sufficient statistics `(ph ⊗ S, ph ⊗ e, e, ph, S)` of one visible configuration, scaled by `weight`.
fn accumulate<T: Scalar>(g: &mut GradientSet<T>, params: &RbmParams<T>, e: &[bool], s: &[bool], weight: T) -> Result<()> {
    let ph = params.prob_h_given_vis(e, s)?;
    for (i, &p) in ph.iter().enumerate() {
        let wp = weight * p;
        g.dc[i] = g.dc[i] + wp;
        for (k, _) in s.iter().enumerate().filter(|(_, &b)| b) {
            g.du[[i, k]] = g.du[[i, k]] + wp;
        }
        for (j, _) in e.iter().enumerate().filter(|(_, &b)| b) {
            g.dw[[i, j]] = g.dw[[i, j]] + wp;
        }
    }
    for (j, _) in e.iter().enumerate().filter(|(_, &b)| b) {
        g.db[j] = g.db[j] + weight;
    }
    for (k, _) in s.iter().enumerate().filter(|(_, &b)| b) {
        g.dd[k] = g.dd[k] + weight;
    }
    Ok(())
}

fn rows_as_bits<T: Scalar>(data: &VisibleSet<T>) -> impl Iterator<Item = (Vec<bool>, Vec<bool>)> + '_ {
    let half = T::from_f64_lossy(0.5);
    data.e
        .rows()
        .into_iter()
        .zip(data.s.rows())
        .map(move |(e, s)| (e.iter().map(|&x| x > half).collect(), s.iter().map(|&x| x > half).collect()))
}

/// Exact gradient of the mean log-likelihood of `data`: the data average of
/// the sufficient statistics minus their expectation under the model, the
/// latter by enumerating every visible configuration.
pub fn exact_kl_gradient<T: Scalar>(params: &RbmParams<T>, data: &VisibleSet<T>) -> Result<GradientSet<T>> {
    check_oracle_size(params)?;
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    check_len("error columns", params.n_e(), data.e.ncols())?;
    check_len("syndrome columns", params.n_s(), data.s.ncols())?;

    let mut positive = GradientSet::zeros_like(params);
    let inv_m = T::one() / T::from_usize(data.len()).expect("size fits");
    for (e, s) in rows_as_bits(data) {
        accumulate(&mut positive, params, &e, &s, inv_m)?;
    }

    let log_z = params.exact_log_partition()?;
    let mut negative = GradientSet::zeros_like(params);
    for (e, s) in VisibleConfigs::new(params.n_e(), params.n_s()) {
        let p = params.log_prob(&e, &s, log_z)?.exp();
        accumulate(&mut negative, params, &e, &s, p)?;
    }

    Ok(GradientSet {
        du: positive.du - negative.du,
        dw: positive.dw - negative.dw,
        db: positive.db - negative.db,
        dc: positive.dc - negative.dc,
        dd: positive.dd - negative.dd,
    })
}

/// Mean `log p(e, S)` over the data, exactly.
pub fn exact_mean_log_likelihood<T: Scalar>(params: &RbmParams<T>, data: &VisibleSet<T>) -> Result<T> {
    check_oracle_size(params)?;
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let log_z = params.exact_log_partition()?;
    let mut total = T::zero();
    for (e, s) in rows_as_bits(data) {
        total = total + params.log_prob(&e, &s, log_z)?;
    }
    Ok(total / T::from_usize(data.len()).expect("size fits"))
}

/// `KL(p_data ‖ p_model)` with `p_data` the empirical distribution of `data`.
pub fn exact_kl_divergence<T: Scalar>(params: &RbmParams<T>, data: &VisibleSet<T>) -> Result<f64> {
    check_oracle_size(params)?;
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut counts: HashMap<(Vec<bool>, Vec<bool>), usize> = HashMap::new();
    for row in rows_as_bits(data) {
        *counts.entry(row).or_default() += 1;
    }
    let log_z = params.exact_log_partition()?.to_f64().unwrap_or(f64::NAN);
    let m = data.len() as f64;
    let mut kl = 0.0;
    for ((e, s), c) in counts {
        let q = c as f64 / m;
        let log_p = -params.effective_energy(&e, &s)?.to_f64().unwrap_or(f64::NAN) - log_z;
        kl += q * (q.ln() - log_p);
    }
    Ok(kl)
}

/// `λ ← λ + η·g`, with weight decay `-η·l2·λ` on `U` and `W` only.
pub fn sgd_step<T: Scalar>(params: &RbmParams<T>, grad: &GradientSet<T>, hyper: &Hyperparams) -> Result<RbmParams<T>> {
    let mut next = params.clone();
    apply_sgd(&mut next, grad, hyper.eta, hyper.l2)?;
    Ok(next)
}

pub fn apply_sgd<T: Scalar>(params: &mut RbmParams<T>, grad: &GradientSet<T>, eta: f64, l2: f64) -> Result<()> {
    grad.check_shape(params)?;
    let eta = T::from_f64_lossy(eta);
    let decay = T::one() - eta * T::from_f64_lossy(l2);
    params.u.zip_mut_with(&grad.du, |x, &g| *x = *x * decay + eta * g);
    params.w.zip_mut_with(&grad.dw, |x, &g| *x = *x * decay + eta * g);
    params.b.zip_mut_with(&grad.db, |x, &g| *x = *x + eta * g);
    params.c.zip_mut_with(&grad.dc, |x, &g| *x = *x + eta * g);
    params.d.zip_mut_with(&grad.dd, |x, &g| *x = *x + eta * g);
    Ok(())
}

/// Row-wise effective energies of a batch.
pub fn batch_effective_energy<T: Scalar>(params: &RbmParams<T>, data: &VisibleSet<T>) -> Array1<T> {
    let mut field = data.e.dot(&params.w.t()) + data.s.dot(&params.u.t());
    field += &params.c;
    let hidden = field.mapv_into(T::softplus).sum_axis(Axis(1));
    -(data.e.dot(&params.b) + data.s.dot(&params.d) + hidden)
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpochRecord {
    pub epoch: usize,
    pub mean_effective_energy: f64,
    /// Mean over the epoch's minibatches of the Frobenius norm of each block,
    /// in `(U, W, b, c, d)` order.
    pub grad_norms: [f64; 5],
    pub wall_time_s: f64,
}

pub const TRAIN_LOG_HEADER: &str =
    "epoch,mean_effective_energy,grad_norm_U,grad_norm_W,grad_norm_b,grad_norm_c,grad_norm_d,wall_time_s";

impl EpochRecord {
    pub fn csv_row(&self) -> String {
        let [u, w, b, c, d] = self.grad_norms;
        format!(
            "{},{},{u},{w},{b},{c},{d},{:.3}",
            self.epoch, self.mean_effective_energy, self.wall_time_s
        )
    }
}

#[derive(Debug, Clone)]
pub struct TrainOutcome<T> {
    pub params: RbmParams<T>,
    pub log: Vec<EpochRecord>,
}

/// Minibatch CD training on raw visible data. Each epoch draws a fresh
/// permutation, splits it into `batch_size` slices (the last may be short),
/// and applies one gradient step per slice. A pure function of its inputs.
pub fn train_visible<T: Scalar>(
    data: &VisibleSet<T>,
    hyper: &Hyperparams,
    seed: u64,
    mut on_epoch: impl FnMut(&EpochRecord, &RbmParams<T>),
) -> Result<TrainOutcome<T>> {
    hyper.validate()?;
    if data.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut params = init_params(
        data.e.ncols(),
        data.s.ncols(),
        hyper.n_h,
        hyper.init_width,
        &mut rng::stream(seed, Domain::Init, 0),
    );
    let monitor = data.select(&(0..data.len().min(MONITOR_SAMPLES)).collect::<Vec<_>>());
    let start = Instant::now();
    let mut order: Vec<usize> = (0..data.len()).collect();
    let mut log = Vec::with_capacity(hyper.epochs);

    for epoch in 0..hyper.epochs {
        order.shuffle(&mut rng::stream(seed, Domain::Shuffle, epoch as u64));
        let mut chain_rng: SimRng = rng::stream(seed, Domain::Train, epoch as u64);
        let mut norm_sums = [0.0; 5];
        let mut batches = 0usize;
        for rows in order.chunks(hyper.batch_size) {
            let batch = data.select(rows);
            let grad = cd_k_gradient(&params, &batch, hyper.cd_k, &mut chain_rng)?;
            apply_sgd(&mut params, &grad, hyper.eta, hyper.l2)?;
            for (acc, n) in norm_sums.iter_mut().zip(grad.norms()) {
                *acc += n;
            }
            batches += 1;
        }
        let energies = batch_effective_energy(&params, &monitor);
        let record = EpochRecord {
            epoch: epoch + 1,
            mean_effective_energy: energies.iter().map(|x| x.to_f64().unwrap_or(f64::NAN)).sum::<f64>()
                / monitor.len() as f64,
            grad_norms: norm_sums.map(|s| s / batches as f64),
            wall_time_s: start.elapsed().as_secs_f64(),
        };
        on_epoch(&record, &params);
        log.push(record);
    }
    if !params.is_finite() {
        return Err(Error::InvalidHyperparams("training diverged to non-finite parameters".into()));
    }
    Ok(TrainOutcome { params, log })
}

/// Trains a lattice model on a dataset of error chains.
pub fn train<T: Scalar>(dataset: &Dataset, hyper: &Hyperparams, seed: u64) -> Result<TrainOutcome<T>> {
    train_with(dataset, hyper, seed, |_, _| {})
}

pub fn train_with<T: Scalar>(
    dataset: &Dataset,
    hyper: &Hyperparams,
    seed: u64,
    on_epoch: impl FnMut(&EpochRecord, &RbmParams<T>),
) -> Result<TrainOutcome<T>> {
    if dataset.is_empty() {
        return Err(Error::EmptyDataset);
    }
    train_visible(&VisibleSet::from_dataset(dataset), hyper, seed, on_epoch)
}

/// Validation score of one grid point.
#[derive(Debug, Clone, PartialEq)]
pub struct GridScore {
    pub index: usize,
    pub hyper: Hyperparams,
    pub p_fail: f64,
    pub n_fail: usize,
    pub n_timeout: usize,
    pub train_seconds: f64,
}

#[derive(Debug, Clone)]
pub struct GridOutcome<T> {
    pub best_index: usize,
    pub hyper: Hyperparams,
    pub params: RbmParams<T>,
    pub scores: Vec<GridScore>,
}

/// Neural-decoder failure rate of `params` on `validation`; timeouts count as failures.
pub fn validation_failures<T: Scalar>(
    lattice: &Lattice,
    params: &RbmParams<T>,
    validation: &[Chain],
    n_eq: usize,
    max_sweeps: usize,
    seed: u64,
) -> Result<(usize, usize)> {
    let results: Vec<(bool, bool)> = validation
        .par_iter()
        .enumerate()
        .map(|(k, e0)| {
            let s0 = lattice.syndrome_of(e0)?;
            let mut rng = rng::stream(seed, Domain::Validation, k as u64);
            let out = neural_decode(lattice, params, &s0, n_eq, max_sweeps, &mut rng)?;
            if out.timed_out {
                return Ok((true, true));
            }
            Ok((!evaluate_recovery(lattice, e0, &out.recovery)?.is_trivial(), false))
        })
        .collect::<Result<_>>()?;
    Ok((
        results.iter().filter(|r| r.0).count(),
        results.iter().filter(|r| r.1).count(),
    ))
}

/// Trains one model per grid point (same training seed for all) and keeps
/// the one with the lowest neural-decoder failure rate on `validation`,
/// breaking ties by grid order.
pub fn grid_search<T: Scalar>(
    dataset: &Dataset,
    grid: &[Hyperparams],
    validation: &[Chain],
    seed: u64,
    max_sweeps: usize,
) -> Result<GridOutcome<T>> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    if validation.is_empty() {
        return Err(Error::InvalidArgument("empty validation set".into()));
    }
    for h in grid {
        h.validate()?;
    }
    let lattice = dataset.lattice;
    let data = VisibleSet::<T>::from_dataset(dataset);
    let trained: Vec<(RbmParams<T>, GridScore)> = grid
        .par_iter()
        .enumerate()
        .map(|(index, hyper)| {
            let started = Instant::now();
            let params = train_visible(&data, hyper, seed, |_, _| {})?.params;
            let train_seconds = started.elapsed().as_secs_f64();
            let (n_fail, n_timeout) = validation_failures(&lattice, &params, validation, hyper.n_eq, max_sweeps, seed)?;
            log::info!(
                "grid point {index}: n_h={} eta={} k={} l2={} b={} w={} -> p_fail={:.4} ({} timeouts, {:.1}s)",
                hyper.n_h,
                hyper.eta,
                hyper.cd_k,
                hyper.l2,
                hyper.batch_size,
                hyper.init_width,
                n_fail as f64 / validation.len() as f64,
                n_timeout,
                train_seconds
            );
            Ok((
                params,
                GridScore {
                    index,
                    hyper: hyper.clone(),
                    p_fail: n_fail as f64 / validation.len() as f64,
                    n_fail,
                    n_timeout,
                    train_seconds,
                },
            ))
        })
        .collect::<Result<_>>()?;

    let best = trained
        .iter()
        .enumerate()
        .fold(0, |b, (i, (_, s))| if s.n_fail < trained[b].1.n_fail { i } else { b });
    let scores = trained.iter().map(|(_, s)| s.clone()).collect();
    let (params, score) = trained.into_iter().nth(best).expect("non-empty grid");
    Ok(GridOutcome {
        best_index: best,
        hyper: score.hyper,
        params,
        scores,
    })
}
