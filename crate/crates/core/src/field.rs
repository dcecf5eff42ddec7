//! The coefficient field abstraction.
//!
//! Every algebraic layer above the scalars is generic over [`Field`]. Two
//! exact fields implement it: [`ParamScalar`](crate::scalars::ParamScalar)
//! (rational functions in named parameters) and [`BigRational`] (numeric
//! specialisations). Floating point is deliberately absent: every check in
//! this crate is an exact zero test.

use std::fmt::{Debug, Display};
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::modp::Fp;

/// Integer Laurent polynomial in the ring parameters: `(exponents, coefficient)`.
/// Ring-free constants use empty exponent vectors.
pub type FlatTerms = Vec<(smallvec::SmallVec<[i32; 4]>, i64)>;

pub trait Field: Clone + Debug + Display + PartialEq + Eq + Hash + Zero + One + std::ops::Neg<Output = Self> + Send + Sync {
    fn add_ref(&self, rhs: &Self) -> Self;
    fn sub_ref(&self, rhs: &Self) -> Self;
    fn mul_ref(&self, rhs: &Self) -> Self;
    /// `None` exactly when `self` is zero.
    fn inv(&self) -> Option<Self>;
    fn from_bigint(n: BigInt) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_bigint(BigInt::from(n))
    }

    fn div_ref(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul_ref(&r))
    }

    fn add_assign_ref(&mut self, rhs: &Self) {
        *self = self.add_ref(rhs);
    }

    fn neg_ref(&self) -> Self {
        -self.clone()
    }

    /// Integer power; negative exponents invert and fail on zero.
    fn powi(&self, e: i64) -> Option<Self> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut n = e.unsigned_abs();
        let mut acc = Self::one();
        let mut sq = base;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_ref(&sq);
            }
            n >>= 1;
            if n > 0 {
                sq = sq.mul_ref(&sq);
            }
        }
        Some(acc)
    }

    /// `(numerator, denominator)` with both parts cheap to add and multiply;
    /// fields without such a split return `(self, 1)`.
    fn split_fraction(&self) -> (Self, Self) {
        (self.clone(), Self::one())
    }

    /// Image under the ring map sending the `k`-th parameter to `point[k]`
    /// in the prime field; `None` when a denominator vanishes there.
    fn mod_image(&self, point: &[Fp]) -> Option<Fp>;

    /// Canonical text; must round-trip through the matching parser.
    fn to_text(&self) -> String {
        self.to_string()
    }

    /// The value as an integer Laurent polynomial in the parameters, when it
    /// is one with `i64` coefficients. Bulk polynomial products use this to
    /// run on machine integers.
    fn to_flat(&self) -> Option<FlatTerms> {
        None
    }

    /// Inverse of [`Field::to_flat`]; `self` supplies the parameter ring.
    fn rebuild_flat(&self, _terms: Vec<(smallvec::SmallVec<[i32; 4]>, i128)>) -> Option<Self> {
        None
    }
}

impl Field for BigRational {
    fn add_ref(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.recip())
        }
    }
    fn from_bigint(n: BigInt) -> Self {
        BigRational::from_integer(n)
    }
    fn mod_image(&self, _point: &[Fp]) -> Option<Fp> {
        Fp::from_bigint(self.numer().clone()).div_ref(&Fp::from_bigint(self.denom().clone()))
    }
}

/// Generalised binomial coefficient `n (n-1) ... (n-k+1) / k!`, valid for any
/// integer `n`; zero for negative `k`.
pub fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 {
        return BigInt::zero();
    }
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for r in 0..k {
        num *= BigInt::from(n - r);
        den *= BigInt::from(r + 1);
    }
    debug_assert!((&num % &den).is_zero());
    num / den
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_small_values() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(0, 0), BigInt::from(1));
        assert_eq!(binomial(3, 5), BigInt::from(0));
        // (-1 choose k) = (-1)^k, (-2 choose 2) = 3
        assert_eq!(binomial(-1, 3), BigInt::from(-1));
        assert_eq!(binomial(-2, 2), BigInt::from(3));
        assert_eq!(binomial(4, -1), BigInt::from(0));
    }

    #[test]
    fn rational_powers() {
        let half = BigRational::new(1.into(), 2.into());
        assert_eq!(half.powi(-3).unwrap(), BigRational::from_integer(8.into()));
        assert!(BigRational::zero().powi(-1).is_none());
        assert_eq!(BigRational::zero().powi(0).unwrap(), BigRational::one());
    }
}
