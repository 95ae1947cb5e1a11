//! Floating point abstraction for the network math.
//!
//! Everything in [`crate::rbm`] and [`crate::training`] is written against
//! [`Scalar`], so a model can be trained in `f32` for speed or in `f64` when
//! it is checked against the exact enumeration oracles.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use ndarray::{LinalgScalar, ScalarOperand};
use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};
use rand::Rng;

pub trait Scalar:
    Float
    + NumAssign
    + FromPrimitive
    + ToPrimitive
    + LinalgScalar
    + ScalarOperand
    + Sum
    + Default
    + Debug
    + Display
    + Send
    + Sync
    + 'static
{
    /// Uniform draw on `[0, 1)`.
    fn unit_sample<R: Rng + ?Sized>(rng: &mut R) -> Self;

    fn from_f64_lossy(x: f64) -> Self;

    #[inline]
    fn from_bit(bit: bool) -> Self {
        if bit {
            Self::one()
        } else {
            Self::zero()
        }
    }

    /// Logistic function `1 / (1 + exp(-x))`, evaluated without overflow.
    #[inline]
    fn sigmoid(self) -> Self {
        if self >= Self::zero() {
            Self::one() / (Self::one() + (-self).exp())
        } else {
            let z = self.exp();
            z / (Self::one() + z)
        }
    }

    /// `log(1 + exp(x))`, evaluated without overflow.
    #[inline]
    fn softplus(self) -> Self {
        self.max(Self::zero()) + (-self.abs()).exp().ln_1p()
    }
}

impl Scalar for f64 {
    #[inline]
    fn unit_sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.gen::<f64>()
    }

    #[inline]
    fn from_f64_lossy(x: f64) -> Self {
        x
    }
}

impl Scalar for f32 {
    #[inline]
    fn unit_sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        rng.gen::<f32>()
    }

    #[inline]
    fn from_f64_lossy(x: f64) -> Self {
        x as f32
    }
}
