//! Tri-layer restricted Boltzmann machine over error, syndrome and hidden units.
//!
//! The joint distribution is `p(e, S, h) ∝ exp(-E(e, S, h))` with
//!
//! ```text
//! E = -hᵀ U S - hᵀ W e - bᵀ e - cᵀ h - dᵀ S
//! ```
//!
//! and all units binary in `{0, 1}`. The network is bipartite between the
//! hidden layer and the two visible layers, so each layer is conditionally
//! factorized given the other side and the hidden layer can be summed out in
//! closed form (the effective energy).

mod io;
mod sampler;

pub use io::{decode_model, encode_model, load_model, save_model, ModelHeader, MODEL_MAGIC, MODEL_VERSION};
pub use sampler::ClampedChain;

use ndarray::linalg::general_mat_vec_mul;
use ndarray::{Array1, Array2, ArrayView1};
use rand::Rng;

use crate::error::{check_len, Error, Result};
use crate::scalar::Scalar;

/// Largest visible layer (`n_e + n_s`) the enumeration oracles accept.
pub const ORACLE_VISIBLE_LIMIT: usize = 20;

/// Network parameters: `U` (hidden × syndrome), `W` (hidden × error) and the
/// biases `b` (error), `c` (hidden), `d` (syndrome).
#[derive(Debug, Clone, PartialEq)]
pub struct RbmParams<T> {
    pub u: Array2<T>,
    pub w: Array2<T>,
    pub b: Array1<T>,
    pub c: Array1<T>,
    pub d: Array1<T>,
}

impl<T: Scalar> RbmParams<T> {
    pub fn zeros(n_e: usize, n_s: usize, n_h: usize) -> Self {
        RbmParams {
            u: Array2::zeros((n_h, n_s)),
            w: Array2::zeros((n_h, n_e)),
            b: Array1::zeros(n_e),
            c: Array1::zeros(n_h),
            d: Array1::zeros(n_s),
        }
    }

    /// Assembles parameters, checking that shapes agree and entries are finite.
    pub fn from_parts(u: Array2<T>, w: Array2<T>, b: Array1<T>, c: Array1<T>, d: Array1<T>) -> Result<Self> {
        let n_h = c.len();
        check_len("U rows", n_h, u.nrows())?;
        check_len("W rows", n_h, w.nrows())?;
        check_len("U columns", d.len(), u.ncols())?;
        check_len("W columns", b.len(), w.ncols())?;
        let p = RbmParams { u, w, b, c, d };
        if !p.is_finite() {
            return Err(Error::InvalidArgument("non-finite parameter".into()));
        }
        Ok(p)
    }

    #[inline]
    pub fn n_e(&self) -> usize {
        self.w.ncols()
    }

    #[inline]
    pub fn n_s(&self) -> usize {
        self.u.ncols()
    }

    #[inline]
    pub fn n_h(&self) -> usize {
        self.c.len()
    }

    pub fn n_visible(&self) -> usize {
        self.n_e() + self.n_s()
    }

    pub fn is_finite(&self) -> bool {
        [&self.b, &self.c, &self.d]
            .iter()
            .all(|v| v.iter().all(|x| x.is_finite()))
            && self.u.iter().all(|x| x.is_finite())
            && self.w.iter().all(|x| x.is_finite())
    }

    pub fn cast<S: Scalar>(&self) -> RbmParams<S> {
        let f = |x: &T| S::from_f64_lossy(x.to_f64().unwrap_or(f64::NAN));
        RbmParams {
            u: self.u.map(f),
            w: self.w.map(f),
            b: self.b.map(f),
            c: self.c.map(f),
            d: self.d.map(f),
        }
    }

    fn check_visible(&self, e: &[bool], s: &[bool]) -> Result<()> {
        check_len("error layer", self.n_e(), e.len())?;
        check_len("syndrome layer", self.n_s(), s.len())
    }

    /// `E(e, S, h)`.
    pub fn energy(&self, state: &MachineState) -> Result<T> {
        self.check_visible(&state.e, &state.s)?;
        check_len("hidden layer", self.n_h(), state.h.len())?;
        let mut energy = T::zero();
        for (i, _) in state.h.iter().enumerate().filter(|(_, &h)| h) {
            let urow = self.u.row(i);
            let wrow = self.w.row(i);
            let mut coupling = self.c[i];
            coupling = coupling + masked_sum(urow, &state.s);
            coupling = coupling + masked_sum(wrow, &state.e);
            energy = energy - coupling;
        }
        energy = energy - masked_sum(self.b.view(), &state.e) - masked_sum(self.d.view(), &state.s);
        Ok(energy)
    }

    /// Hidden-unit input fields `c + U S + W e`.
    pub fn hidden_field(&self, e: &[bool], s: &[bool]) -> Result<Array1<T>> {
        self.check_visible(e, s)?;
        let mut field = self.c.clone();
        general_mat_vec_mul(T::one(), &self.u, &bits_to_array::<T>(s), T::one(), &mut field);
        general_mat_vec_mul(T::one(), &self.w, &bits_to_array::<T>(e), T::one(), &mut field);
        Ok(field)
    }

    /// Free energy of a visible configuration with the hidden layer summed out:
    /// `-bᵀe - dᵀS - Σ_i softplus(c_i + (U S)_i + (W e)_i)`.
    pub fn effective_energy(&self, e: &[bool], s: &[bool]) -> Result<T> {
        let field = self.hidden_field(e, s)?;
        let hidden: T = field.iter().map(|&x| x.softplus()).sum();
        Ok(-masked_sum(self.b.view(), e) - masked_sum(self.d.view(), s) - hidden)
    }

    /// `p(h_i = 1 | e, S) = σ(c_i + (U S)_i + (W e)_i)`.
    pub fn prob_h_given_vis(&self, e: &[bool], s: &[bool]) -> Result<Array1<T>> {
        Ok(self.hidden_field(e, s)?.mapv_into(T::sigmoid))
    }

    /// `p(e_j = 1 | h) = σ(b_j + (Wᵀ h)_j)`.
    pub fn prob_e_given_h(&self, h: &[bool]) -> Result<Array1<T>> {
        check_len("hidden layer", self.n_h(), h.len())?;
        let mut field = self.b.clone();
        general_mat_vec_mul(T::one(), &self.w.t(), &bits_to_array::<T>(h), T::one(), &mut field);
        Ok(field.mapv_into(T::sigmoid))
    }

    /// `p(S_k = 1 | h) = σ(d_k + (Uᵀ h)_k)`.
    pub fn prob_s_given_h(&self, h: &[bool]) -> Result<Array1<T>> {
        check_len("hidden layer", self.n_h(), h.len())?;
        let mut field = self.d.clone();
        general_mat_vec_mul(T::one(), &self.u.t(), &bits_to_array::<T>(h), T::one(), &mut field);
        Ok(field.mapv_into(T::sigmoid))
    }

    /// One block-Gibbs sweep: `h ~ p(h | e, S)`, then `e ~ p(e | h)`, then
    /// `S ~ p(S | h)` unless the syndrome layer is clamped.
    pub fn gibbs_sweep<R: Rng + ?Sized>(&self, state: &mut MachineState, clamp_syndrome: bool, rng: &mut R) -> Result<()> {
        let ph = self.prob_h_given_vis(&state.e, &state.s)?;
        check_len("hidden layer", self.n_h(), state.h.len())?;
        sample_bits_into(&ph, &mut state.h, rng);
        let pe = self.prob_e_given_h(&state.h)?;
        sample_bits_into(&pe, &mut state.e, rng);
        if !clamp_syndrome {
            let ps = self.prob_s_given_h(&state.h)?;
            sample_bits_into(&ps, &mut state.s, rng);
        }
        Ok(())
    }

    /// `log Z` by enumerating every visible configuration and summing
    /// `exp(-effective_energy)` in log-sum-exp form.
    pub fn exact_log_partition(&self) -> Result<T> {
        let n_v = self.n_visible();
        if n_v > ORACLE_VISIBLE_LIMIT {
            return Err(Error::OracleSizeExceeded {
                visible: n_v,
                limit: ORACLE_VISIBLE_LIMIT,
            });
        }
        let neg: Vec<T> = VisibleConfigs::new(self.n_e(), self.n_s())
            .map(|(e, s)| self.effective_energy(&e, &s).map(|x| -x))
            .collect::<Result<_>>()?;
        Ok(log_sum_exp(&neg))
    }

    /// `log p(e, S)` given a precomputed `log Z`.
    pub fn log_prob(&self, e: &[bool], s: &[bool], log_partition: T) -> Result<T> {
        Ok(-self.effective_energy(e, s)? - log_partition)
    }
}

/// Unit values of the three layers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MachineState {
    pub e: Vec<bool>,
    pub s: Vec<bool>,
    pub h: Vec<bool>,
}

impl MachineState {
    pub fn zeros(n_e: usize, n_s: usize, n_h: usize) -> Self {
        MachineState {
            e: vec![false; n_e],
            s: vec![false; n_s],
            h: vec![false; n_h],
        }
    }

    /// Independent fair coins on every unit.
    pub fn random<R: Rng + ?Sized>(n_e: usize, n_s: usize, n_h: usize, rng: &mut R) -> Self {
        let mut coin = |n| (0..n).map(|_| rng.gen::<bool>()).collect::<Vec<_>>();
        MachineState {
            e: coin(n_e),
            s: coin(n_s),
            h: coin(n_h),
        }
    }
}

/// Every `(e, S)` pair of the given sizes, with `e` in the low bits of the counter.
#[derive(Debug, Clone)]
pub struct VisibleConfigs {
    n_e: usize,
    n_s: usize,
    next: u64,
    end: u64,
}

impl VisibleConfigs {
    pub fn new(n_e: usize, n_s: usize) -> Self {
        assert!(n_e + n_s < 64);
        VisibleConfigs {
            n_e,
            n_s,
            next: 0,
            end: 1 << (n_e + n_s),
        }
    }
}

impl Iterator for VisibleConfigs {
    type Item = (Vec<bool>, Vec<bool>);

    fn next(&mut self) -> Option<Self::Item> {
        if self.next == self.end {
            return None;
        }
        let code = self.next;
        self.next += 1;
        let e = (0..self.n_e).map(|j| code >> j & 1 == 1).collect();
        let s = (0..self.n_s).map(|k| code >> (self.n_e + k) & 1 == 1).collect();
        Some((e, s))
    }
}

pub fn log_sum_exp<T: Scalar>(xs: &[T]) -> T {
    let max = xs.iter().copied().fold(T::neg_infinity(), T::max);
    if max == T::neg_infinity() {
        return max;
    }
    let sum: T = xs.iter().map(|&x| (x - max).exp()).sum();
    max + sum.ln()
}

pub fn bits_to_array<T: Scalar>(bits: &[bool]) -> Array1<T> {
    bits.iter().map(|&b| T::from_bit(b)).collect()
}

fn masked_sum<T: Scalar>(values: ArrayView1<'_, T>, mask: &[bool]) -> T {
    values
        .iter()
        .zip(mask)
        .filter(|(_, &m)| m)
        .fold(T::zero(), |acc, (&v, _)| acc + v)
}

fn sample_bits_into<T: Scalar, R: Rng + ?Sized>(probs: &Array1<T>, out: &mut [bool], rng: &mut R) {
    for (bit, &p) in out.iter_mut().zip(probs.iter()) {
        *bit = T::unit_sample(rng) < p;
    }
}

#[cfg(test)]
mod tests;
