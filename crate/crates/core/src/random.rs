//! Seeded random inputs for property checks.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use smallvec::SmallVec;

use crate::field::Field;
use crate::polynomials::{ColorSignature, Exps, LaurentPoly, SymLaurent};
use crate::words::{Letter, Word};

pub use rand::SeedableRng;
pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random exponent vector of length `n` summing to `total`, entries near
/// `total / n` within `spread`.
pub fn random_exps(rng: &mut Rng8, n: usize, total: i64, spread: i64) -> Exps {
    let mut e: Exps = SmallVec::from_elem(0, n);
    if n == 0 {
        return e;
    }
    let mut left = total;
    for slot in e.iter_mut().take(n - 1) {
        let x = rng.gen_range(-spread..=spread) + total.div_euclid(n as i64);
        *slot = x as i32;
        left -= x;
    }
    e[n - 1] = left as i32;
    e
}

/// `Sym` of a few random monomials of total degree `vdeg` with small
/// nonzero integer coefficients. May be zero only when `sig` is empty.
pub fn random_symmetric<F: Field>(rng: &mut Rng8, sig: &ColorSignature, vdeg: i64, terms: usize, spread: i64) -> SymLaurent<F> {
    loop {
        let mut p = LaurentPoly::zero(sig.clone());
        for _ in 0..terms {
            let c = rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 };
            p.add_term(random_exps(rng, sig.total(), vdeg, spread), F::from_i64(c));
        }
        let s = p.symmetrize();
        if !s.is_zero() || sig.total() == 0 {
            return SymLaurent { poly: s, vdeg };
        }
    }
}

/// A random word with the given vertex counts and exponent sum.
pub fn random_word(rng: &mut Rng8, sig: &ColorSignature, vdeg: i64, spread: i64) -> Word {
    let mut vertices: Vec<usize> = sig.counts().iter().enumerate().flat_map(|(v, &c)| std::iter::repeat_n(v, c)).collect();
    for k in (1..vertices.len()).rev() {
        vertices.swap(k, rng.gen_range(0..=k));
    }
    let e = random_exps(rng, vertices.len(), vdeg, spread);
    Word::new(vertices.into_iter().zip(e).map(|(v, x)| Letter::new(v, x as i64)).collect())
}

/// Exponents in `[lo, hi]` summing to `total`; `None` if that is impossible.
pub fn random_exps_bounded(rng: &mut Rng8, n: usize, total: i64, lo: i64, hi: i64) -> Option<Exps> {
    let nn = n as i64;
    if total < nn * lo || total > nn * hi {
        return None;
    }
    let mut e: Exps = SmallVec::from_elem(0, n);
    let mut left = total;
    for k in 0..n {
        let rest = nn - k as i64 - 1;
        // keep the remainder reachable
        let a = lo.max(left - rest * hi);
        let b = hi.min(left - rest * lo);
        let x = rng.gen_range(a..=b);
        e[k] = x as i32;
        left -= x;
    }
    Some(e)
}

/// Like [`random_symmetric`] with every exponent in `[lo, hi]`.
pub fn random_symmetric_bounded<F: Field>(rng: &mut Rng8, sig: &ColorSignature, vdeg: i64, terms: usize, lo: i64, hi: i64) -> Option<SymLaurent<F>> {
    random_exps_bounded(rng, sig.total(), vdeg, lo, hi)?;
    loop {
        let mut p = LaurentPoly::zero(sig.clone());
        for _ in 0..terms {
            let c = rng.gen_range(1..=5) * if rng.gen_bool(0.5) { 1 } else { -1 };
            p.add_term(random_exps_bounded(rng, sig.total(), vdeg, lo, hi)?, F::from_i64(c));
        }
        let s = p.symmetrize();
        if !s.is_zero() || sig.total() == 0 {
            return Some(SymLaurent { poly: s, vdeg });
        }
    }
}
