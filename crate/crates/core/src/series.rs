//! Univariate Laurent polynomials `Σ_{k} c_k x^{low + k}` and power-series
//! reciprocals.

use crate::field::Field;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Laurent1<F> {
    /// Exponent of `coeffs[0]`.
    pub low: i32,
    pub coeffs: Vec<F>,
}

impl<F: Field> Laurent1<F> {
    pub fn one() -> Self {
        Laurent1 { low: 0, coeffs: vec![F::one()] }
    }

    /// `a + b x`
    pub fn linear(a: F, b: F) -> Self {
        Laurent1 { low: 0, coeffs: vec![a, b] }.trimmed()
    }

    /// `a x^-1 + b`
    pub fn inverse_linear(a: F, b: F) -> Self {
        Laurent1 { low: -1, coeffs: vec![a, b] }.trimmed()
    }

    pub fn monomial(e: i32, c: F) -> Self {
        Laurent1 { low: e, coeffs: vec![c] }.trimmed()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn high(&self) -> i32 {
        self.low + self.coeffs.len() as i32 - 1
    }

    pub fn coeff(&self, e: i32) -> F {
        let k = e - self.low;
        if k < 0 {
            return F::zero();
        }
        self.coeffs.get(k as usize).cloned().unwrap_or_else(F::zero)
    }

    /// Nonzero terms as `(exponent, coefficient)`.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &F)> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(move |(k, c)| (self.low + k as i32, c))
    }

    fn trimmed(mut self) -> Self {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead == self.coeffs.len() {
            return Laurent1 { low: 0, coeffs: Vec::new() };
        }
        self.coeffs.drain(..lead);
        self.low += lead as i32;
        self
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Laurent1 { low: 0, coeffs: Vec::new() };
        }
        let mut c = vec![F::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (a, x) in self.coeffs.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in other.coeffs.iter().enumerate() {
                c[a + b].add_assign_ref(&x.mul_ref(y));
            }
        }
        Laurent1 { low: self.low + other.low, coeffs: c }.trimmed()
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// `f(x) -> f(1/x)`
    pub fn invert_variable(&self) -> Self {
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Laurent1 { low: -self.high(), coeffs }
    }

    pub fn scale(&self, s: &F) -> Self {
        Laurent1 { low: self.low, coeffs: self.coeffs.iter().map(|c| c.mul_ref(s)).collect() }.trimmed()
    }
}

/// Extends the power series `num / den` (both given from their constant
/// terms upward; `den[0]` invertible) to at least `len` coefficients.
pub fn extend_quotient<F: Field>(num: &[F], den: &[F], out: &mut Vec<F>, len: usize) {
    let inv0 = den[0].inv().expect("series denominator has invertible constant term");
    while out.len() < len {
        let k = out.len();
        let mut acc = num.get(k).cloned().unwrap_or_else(F::zero);
        for (l, d) in den.iter().enumerate().skip(1).take(k) {
            if !d.is_zero() && !out[k - l].is_zero() {
                acc = acc.sub_ref(&d.mul_ref(&out[k - l]));
            }
        }
        out.push(acc.mul_ref(&inv0));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        Q::from_integer(n.into())
    }

    #[test]
    fn geometric_series() {
        let mut out = Vec::new();
        extend_quotient(&[q(1)], &[q(1), q(-2)], &mut out, 5);
        assert_eq!(out, vec![q(1), q(2), q(4), q(8), q(16)]);
    }

    #[test]
    fn product_and_inversion() {
        let a = Laurent1::linear(q(1), q(-1)); // 1 - x
        let b = Laurent1::inverse_linear(q(2), q(1)); // 2/x + 1
        let p = a.mul(&b); // 2/x - 1 - x
        assert_eq!((p.low, p.coeffs.clone()), (-1, vec![q(2), q(-1), q(-1)]));
        let r = p.invert_variable();
        assert_eq!((r.low, r.coeffs), (-1, vec![q(-1), q(-1), q(2)]));
    }
}
