use ndarray::{Array1, Array2, ArrayView1};
use rand::Rng;

use super::RbmParams;
use crate::error::{check_len, Result};
use crate::scalar::Scalar;

/// A Gibbs walker over `(e, h)` with the syndrome layer held at a fixed value.
///
/// Each sweep draws `h ~ p(h | e, S0)` and then `e ~ p(e | h)`. Fields are
/// accumulated from the rows selected by the active units, which keeps a
/// sweep proportional to the number of set bits rather than the full
/// matrix size.
#[derive(Debug, Clone)]
pub struct ClampedChain<'a, T> {
    params: &'a RbmParams<T>,
    /// `Wᵀ`, so error-unit columns are contiguous.
    w_t: Array2<T>,
    /// `c + U S0`.
    hidden_bias: Array1<T>,
    e: Vec<bool>,
    h: Vec<bool>,
    field: Vec<T>,
}

impl<'a, T: Scalar> ClampedChain<'a, T> {
    /// A walker clamped at `syndrome`, starting from all-zero `e` and `h`.
    pub fn new(params: &'a RbmParams<T>, syndrome: &[bool]) -> Result<Self> {
        check_len("syndrome layer", params.n_s(), syndrome.len())?;
        let mut hidden_bias = params.c.clone();
        for (k, _) in syndrome.iter().enumerate().filter(|(_, &s)| s) {
            hidden_bias.zip_mut_with(&params.u.column(k), |a, &x| *a = *a + x);
        }
        Ok(ClampedChain {
            params,
            w_t: params.w.t().as_standard_layout().into_owned(),
            hidden_bias,
            e: vec![false; params.n_e()],
            h: vec![false; params.n_h()],
            field: Vec::with_capacity(params.n_e().max(params.n_h())),
        })
    }

    /// Fair-coin initial state for `e` and `h`.
    pub fn randomize<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        for bit in self.e.iter_mut().chain(self.h.iter_mut()) {
            *bit = rng.gen();
        }
    }

    pub fn set_state(&mut self, e: &[bool], h: &[bool]) -> Result<()> {
        check_len("error layer", self.e.len(), e.len())?;
        check_len("hidden layer", self.h.len(), h.len())?;
        self.e.copy_from_slice(e);
        self.h.copy_from_slice(h);
        Ok(())
    }

    pub fn error_layer(&self) -> &[bool] {
        &self.e
    }

    pub fn hidden_layer(&self) -> &[bool] {
        &self.h
    }

    /// One clamped sweep, `h` first and then `e`.
    pub fn sweep<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        self.field.clear();
        self.field.extend(self.hidden_bias.iter().copied());
        for (j, _) in self.e.iter().enumerate().filter(|(_, &b)| b) {
            add_row(&mut self.field, self.w_t.row(j));
        }
        for (bit, &x) in self.h.iter_mut().zip(&self.field) {
            *bit = T::unit_sample(rng) < x.sigmoid();
        }

        self.field.clear();
        self.field.extend(self.params.b.iter().copied());
        for (i, _) in self.h.iter().enumerate().filter(|(_, &b)| b) {
            add_row(&mut self.field, self.params.w.row(i));
        }
        for (bit, &x) in self.e.iter_mut().zip(&self.field) {
            *bit = T::unit_sample(rng) < x.sigmoid();
        }
    }
}

#[inline]
fn add_row<T: Scalar>(acc: &mut [T], row: ArrayView1<'_, T>) {
    for (a, &r) in acc.iter_mut().zip(row.iter()) {
        *a = *a + r;
    }
}
