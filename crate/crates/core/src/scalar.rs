//! Integer backends for the graph engine.
//!
//! Sums and indices are arbitrary precision at the API boundary. The engine
//! runs on `i128` whenever the instance is small enough for every path sum
//! to fit, and on [`BigInt`] otherwise.

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::ops::{Add, Neg, Sub};

/// Signed integer usable as a path sum.
pub trait Scalar:
    Clone
    + Ord
    + Hash
    + Debug
    + Display
    + Send
    + Sync
    + Zero
    + One
    + Signed
    + Add<Output = Self>
    + Sub<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    fn from_bigint(v: &BigInt) -> Option<Self>;
    fn to_bigint(&self) -> BigInt;
    /// Floor of half, for non-negative values.
    fn half(&self) -> Self;
    /// `2^k`.
    fn pow2(k: u32) -> Self;
    /// Number of significant bits of a non-negative value.
    fn bits(&self) -> u64;
}

impl Scalar for i128 {
    fn from_bigint(v: &BigInt) -> Option<Self> {
        v.to_i128()
    }
    fn to_bigint(&self) -> BigInt {
        BigInt::from(*self)
    }
    fn half(&self) -> Self {
        *self >> 1
    }
    fn pow2(k: u32) -> Self {
        1i128 << k
    }
    fn bits(&self) -> u64 {
        (128 - self.leading_zeros()) as u64
    }
}

impl Scalar for BigInt {
    fn from_bigint(v: &BigInt) -> Option<Self> {
        Some(v.clone())
    }
    fn to_bigint(&self) -> BigInt {
        self.clone()
    }
    fn half(&self) -> Self {
        self >> 1u32
    }
    fn pow2(k: u32) -> Self {
        BigInt::one() << k
    }
    fn bits(&self) -> u64 {
        BigInt::bits(self)
    }
}

/// Largest bit length of `A_n` and `n` for which the `i128` backend is used.
/// Path sums stay below `(n + 1) * A_n` and indices below `2^n`.
pub const I128_LIMIT_BITS: u64 = 100;

/// True when an instance with `n` elements and total `total` runs on `i128`.
pub fn fits_i128(n: usize, total_bits: u64) -> bool {
    n as u64 <= I128_LIMIT_BITS && total_bits <= I128_LIMIT_BITS
}
