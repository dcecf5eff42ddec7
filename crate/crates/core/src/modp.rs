//! The prime field `Z/(2^61 - 1)`, used for cheap images of exact
//! computations: a ring map sends each parameter to a random residue, and a
//! nonzero rational function vanishes there only with negligible probability.

use std::fmt;
use std::ops::{Add, Mul, Neg};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::field::Field;
use crate::random::rng;

pub const PRIME: u64 = (1 << 61) - 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Fp(u64);

impl Fp {
    pub fn new(n: u64) -> Self {
        Fp(n % PRIME)
    }

    pub fn value(self) -> u64 {
        self.0
    }

    fn pow(self, mut e: u64) -> Fp {
        let (mut b, mut r) = (self, Fp(1));
        while e > 0 {
            if e & 1 == 1 {
                r = r * b;
            }
            b = b * b;
            e >>= 1;
        }
        r
    }
}

/// Parameter values for the `seed`-th evaluation point; entry `k` is the
/// image of the `k`-th ring parameter.
pub fn random_point(seed: u64, n: usize) -> Vec<Fp> {
    let mut g = rng(seed);
    (0..n).map(|_| Fp(g.gen_range(2..PRIME))).collect()
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        let s = self.0 + rhs.0;
        Fp(if s >= PRIME { s - PRIME } else { s })
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        Fp((self.0 as u128 * rhs.0 as u128 % PRIME as u128) as u64)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp(if self.0 == 0 { 0 } else { PRIME - self.0 })
    }
}

impl Zero for Fp {
    fn zero() -> Self {
        Fp(0)
    }
    fn is_zero(&self) -> bool {
        self.0 == 0
    }
}

impl One for Fp {
    fn one() -> Self {
        Fp(1)
    }
}

impl Field for Fp {
    fn add_ref(&self, rhs: &Self) -> Self {
        *self + *rhs
    }
    fn sub_ref(&self, rhs: &Self) -> Self {
        *self + -*rhs
    }
    fn mul_ref(&self, rhs: &Self) -> Self {
        *self * *rhs
    }
    fn inv(&self) -> Option<Self> {
        (self.0 != 0).then(|| self.pow(PRIME - 2))
    }
    fn from_bigint(n: BigInt) -> Self {
        Fp(n.mod_floor(&BigInt::from(PRIME)).to_u64().expect("reduced below the prime"))
    }
    fn mod_image(&self, _point: &[Fp]) -> Option<Fp> {
        Some(*self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let a = Fp::from_i64(-3);
        assert_eq!(a + Fp::new(3), Fp::zero());
        assert_eq!(a.mul_ref(&a.inv().unwrap()), Fp::one());
        assert_eq!(Fp::new(PRIME - 1) * Fp::new(PRIME - 1), Fp::one());
        assert!(Fp::zero().inv().is_none());
    }
}
