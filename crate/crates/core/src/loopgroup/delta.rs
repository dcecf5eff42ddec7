//! The formal-series identity behind the wheel pairings, after the
//! relabeling `z_i1 = x`, `z_j1 = γ y`, `z_i2 = q z`:
//!
//! `Σ_{d1,d2} x^{-d1-d2} y^{d1} z^{d2} binom(-d1, k-1)` equals the sum of
//! three rational functions, each expanded in its own region
//! (`|x| ≫ |z| ≫ |y|`, `|z| ≫ |y| ≫ |x|`, `|y| ≫ |x| ≫ |z|`).
//!
//! Both sides are compared on every `(d1, d2)` with `|d1|, |d2| ≤ order`.
//! Each region contributes at most one term per monomial, so expanding its
//! geometric factors to `2 order + 1` terms is already exact there.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::field::binomial;

/// Exponents of `(x, y, z)`.
type Mono = [i64; 3];

/// `c * m0 / ((1 - m1)^k1 (1 - m2)^k2)`, expanded with both ratios small.
struct RegionTerm {
    coef: BigInt,
    prefactor: Mono,
    factors: [(Mono, i64); 2],
}

fn add(a: Mono, b: Mono, s: i64) -> Mono {
    [a[0] + s * b[0], a[1] + s * b[1], a[2] + s * b[2]]
}

fn expand(terms: &[RegionTerm], n_max: i64, out: &mut BTreeMap<Mono, BigInt>) {
    for t in terms {
        let [(m1, k1), (m2, k2)] = t.factors;
        for n1 in 0..=n_max {
            // 1/(1-u)^k = Σ_n binom(n + k - 1, k - 1) u^n
            let c1 = binomial(n1 + k1 - 1, k1 - 1);
            for n2 in 0..=n_max {
                let c2 = binomial(n2 + k2 - 1, k2 - 1);
                let m = add(add(t.prefactor, m1, n1), m2, n2);
                *out.entry(m).or_insert_with(BigInt::zero) += &t.coef * &c1 * &c2;
            }
        }
    }
}

const X: Mono = [1, 0, 0];
const Y: Mono = [0, 1, 0];
const Z: Mono = [0, 0, 1];

fn ratio(a: Mono, b: Mono) -> Mono {
    add(a, b, -1)
}

fn sign(odd: bool) -> BigInt {
    if odd {
        -BigInt::one()
    } else {
        BigInt::one()
    }
}

fn compare(lhs: impl Fn(i64, i64) -> BigInt, regions: &[RegionTerm], order: i64) -> Vec<(i64, i64, BigInt, BigInt)> {
    let mut rhs = BTreeMap::new();
    expand(regions, 2 * order + 1, &mut rhs);
    let mut bad = Vec::new();
    for d1 in -order..=order {
        for d2 in -order..=order {
            let l = lhs(d1, d2);
            let r = rhs.get(&[-d1 - d2, d1, d2]).cloned().unwrap_or_else(BigInt::zero);
            if l != r {
                bad.push((d1, d2, l, r));
            }
        }
    }
    bad
}

/// Monomials `(d1, d2, lhs, rhs)` where the `k`-th identity fails.
pub fn delta_identity_mismatches(k: i64, order: i64) -> Vec<(i64, i64, BigInt, BigInt)> {
    assert!(k >= 1 && order >= 1);
    let zx = ratio(Z, X);
    let yz = ratio(Y, Z);
    let xy = ratio(X, Y);
    let mut regions = vec![
        // |x| ≫ |z| ≫ |y|
        RegionTerm { coef: sign((k - 1) % 2 == 1), prefactor: add(zx, yz, 1), factors: [(zx, 1), (yz, k)] },
        // |y| ≫ |x| ≫ |z|
        RegionTerm { coef: BigInt::one(), prefactor: add([0; 3], xy, k - 1), factors: [(zx, 1), (xy, k)] },
    ];
    // |z| ≫ |y| ≫ |x|
    for k1 in 1..=k {
        let k2 = k + 1 - k1;
        regions.push(RegionTerm { coef: sign((k1 - 1) % 2 == 1), prefactor: add(yz, xy, k2 - 1), factors: [(yz, k1), (xy, k2)] });
    }
    compare(|d1, _| binomial(-d1, k - 1), &regions, order)
}

/// Mismatches of the unrestricted identity
/// `δ(z/x) δ(y/x) = 1/((1-z/x)(1-y/z)) + (x/y)/((1-y/z)(1-x/y)) + (z/y)/((1-z/x)(1-x/y))`.
pub fn delta_identity_generic_mismatches(order: i64) -> Vec<(i64, i64, BigInt, BigInt)> {
    let zx = ratio(Z, X);
    let yz = ratio(Y, Z);
    let xy = ratio(X, Y);
    let regions = [
        RegionTerm { coef: BigInt::one(), prefactor: [0; 3], factors: [(zx, 1), (yz, 1)] },
        RegionTerm { coef: BigInt::one(), prefactor: xy, factors: [(yz, 1), (xy, 1)] },
        RegionTerm { coef: BigInt::one(), prefactor: add(zx, xy, 1), factors: [(zx, 1), (xy, 1)] },
    ];
    compare(|_, _| BigInt::one(), &regions, order)
}

pub fn verify_delta_identity(k: i64, order: i64) -> bool {
    delta_identity_mismatches(k, order).is_empty()
}

pub fn verify_delta_identity_generic(order: i64) -> bool {
    delta_identity_generic_mismatches(order).is_empty()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identities_hold() {
        assert!(verify_delta_identity_generic(6));
        assert_eq!(delta_identity_mismatches(1, 6), vec![]);
        assert_eq!(delta_identity_mismatches(2, 6), vec![]);
        assert_eq!(delta_identity_mismatches(3, 4), vec![]);
    }

    #[test]
    fn detects_a_wrong_sign() {
        // flipping the first region's sign breaks the k = 2 identity
        let zx = ratio(Z, X);
        let yz = ratio(Y, Z);
        let regions = [RegionTerm { coef: BigInt::one(), prefactor: add(zx, yz, 1), factors: [(zx, 1), (yz, 2)] }];
        assert!(!compare(|d1, _| binomial(-d1, 1), &regions, 3).is_empty());
    }
}
