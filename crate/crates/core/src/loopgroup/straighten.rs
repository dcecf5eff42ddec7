//! Expansion of a word combination in the non-increasing basis.
//!
//! Test polynomials are triangular against words: `⟨e_u, T_v⟩ = 0` for
//! `u > v` and `≠ 0` for `u = v`. A combination `x` only involves
//! non-increasing words `≥ min word of x`, so the coefficients follow from
//! the smallest candidate upward: `c_v = ⟨x - Σ_{u<v} c_u e_u, T_v⟩ / ⟨e_v, T_v⟩`.
//! Candidates live in an exponent window; the residual is then checked
//! against the test polynomials of a window twice as wide and against random
//! symmetric polynomials, widening on failure.
//!
//! Most candidates get coefficient zero, and exact pairings with far-out
//! test polynomials are expensive. So the full solve runs first in prime
//! field images; the exact solve then visits only the union of their
//! supports, and must reproduce both images. Any disagreement falls back to
//! the exact solve over the whole window.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use super::pairing::pair_word;
use super::UElement;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::modp::{random_point, Fp};
use crate::polynomials::{ColorSignature, SymLaurent};
use crate::quiver::Quiver;
use crate::random::{random_symmetric, rng};
use crate::words::{enumerate_non_increasing, is_non_increasing, test_polynomial, Word};

#[derive(Debug, Clone)]
pub struct StraightenOptions {
    /// Added to `n (1 + max #)` for the initial window half-width.
    pub window_slack: i64,
    pub max_widenings: usize,
    pub random_checks: usize,
    pub seed: u64,
}

impl Default for StraightenOptions {
    fn default() -> Self {
        StraightenOptions { window_slack: 4, max_widenings: 6, random_checks: 4, seed: 0x5eed }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Straightened<F> {
    /// Nonzero coefficients over non-increasing words.
    pub coeffs: BTreeMap<Word, F>,
    /// The exponent window that was accepted.
    pub window: (i64, i64),
    pub widenings: usize,
}

impl<F: Field> Straightened<F> {
    pub fn to_element(&self) -> UElement<F> {
        UElement::from_terms(self.coeffs.iter().map(|(w, c)| (w.clone(), c.clone())))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

fn pair_elem<F: Field>(quiver: &Quiver<F>, x: &UElement<F>, r: &SymLaurent<F>) -> F {
    x.terms().iter().fold(F::zero(), |acc, (w, c)| {
        let v = pair_word(quiver, w, r);
        if v.is_zero() {
            acc
        } else {
            acc.add_ref(&v.mul_ref(c))
        }
    })
}

fn exp_range<F: Field>(x: &UElement<F>) -> (i64, i64) {
    let exps = x.terms().keys().flat_map(|w| w.letters().iter().map(|l| l.exp));
    exps.fold((i64::MAX, i64::MIN), |(lo, hi), e| (lo.min(e), hi.max(e)))
}

/// The unique expansion of `x` over non-increasing words.
pub fn straighten<F: Field>(quiver: &Quiver<F>, x: &UElement<F>, opts: &StraightenOptions) -> Result<Straightened<F>> {
    let (y, den) = x.cleared();
    let mut s = match straighten_by_support(quiver, &y, opts)? {
        Some(s) => s,
        None => straighten_cleared(quiver, &y, opts)?,
    };
    if !den.is_one() {
        let inv = den.inv().ok_or(Error::DivisionByZero)?;
        s.coeffs.values_mut().for_each(|c| *c = c.mul_ref(&inv));
    }
    Ok(s)
}

/// Prime field images whose supports are merged.
const IMAGES: u64 = 2;
/// Parameters per evaluation point; rings with more fall back to the exact solve.
const POINT_LEN: usize = 64;

/// `None` when an image is unusable or disagrees with the exact values.
fn straighten_by_support<F: Field>(quiver: &Quiver<F>, x: &UElement<F>, opts: &StraightenOptions) -> Result<Option<Straightened<F>>> {
    let Some((sig, d)) = x.grading(quiver.num_vertices())? else {
        return Ok(None);
    };
    let mut support = BTreeSet::new();
    let mut images = Vec::new();
    let (mut window, mut widenings) = ((0, 0), 0);
    for k in 0..IMAGES {
        let point = random_point(opts.seed.wrapping_add(k), POINT_LEN);
        let img = |c: &F| c.mod_image(&point).ok_or(Error::DivisionByZero);
        let (Ok(qp), Ok(xp)) = (quiver.map_params(img), x.map_coeffs(img)) else {
            return Ok(None);
        };
        let s = match straighten_cleared(&qp, &xp, opts) {
            Ok(s) => s,
            Err(e @ Error::WindowExhausted { .. }) => return Err(e),
            Err(_) => return Ok(None),
        };
        support.extend(s.coeffs.keys().cloned());
        if s.widenings >= widenings {
            (window, widenings) = (s.window, s.widenings);
        }
        images.push((point, s.coeffs));
    }
    let mut solved: Vec<(Word, F)> = Vec::new();
    for v in &support {
        let t = test_polynomial(quiver, v)?;
        let mut val = pair_elem(quiver, x, &t);
        for (u, c) in &solved {
            let p = pair_word(quiver, u, &t);
            if !p.is_zero() {
                val = val.sub_ref(&p.mul_ref(c));
            }
        }
        if val.is_zero() {
            continue;
        }
        let Some(c) = val.div_ref(&pair_word(quiver, v, &t)) else {
            return Ok(None);
        };
        solved.push((v.clone(), c));
    }
    for (point, coeffs) in &images {
        let mut exact: BTreeMap<Word, Fp> = BTreeMap::new();
        for (w, c) in &solved {
            let Some(c) = c.mod_image(point) else {
                return Ok(None);
            };
            if c != Fp::new(0) {
                exact.insert(w.clone(), c);
            }
        }
        if exact != *coeffs {
            return Ok(None);
        }
    }
    let sol = UElement::from_terms(solved);
    if !random_checks_vanish(quiver, &x.sub(&sol), &sig, d, opts) {
        return Ok(None);
    }
    Ok(Some(Straightened { coeffs: sol.terms().clone(), window, widenings }))
}

fn straighten_cleared<F: Field>(quiver: &Quiver<F>, x: &UElement<F>, opts: &StraightenOptions) -> Result<Straightened<F>> {
    let nv = quiver.num_vertices();
    let Some((sig, d)) = x.grading(nv)? else {
        return Ok(Straightened { coeffs: BTreeMap::new(), window: (0, 0), widenings: 0 });
    };
    // already in the basis
    if x.len() == 1 {
        let (w, c) = x.terms().iter().next().unwrap();
        if is_non_increasing(quiver, w) {
            let (lo, hi) = exp_range(x);
            return Ok(Straightened { coeffs: [(w.clone(), c.clone())].into(), window: (lo, hi), widenings: 0 });
        }
    }
    let n = sig.total() as i64;
    let (lo, hi) = exp_range(x);
    let min_word = x.min_word().unwrap().clone();
    let mut half = n * (1 + quiver.max_total() as i64) + opts.window_slack;
    let mut tests: BTreeMap<Word, SymLaurent<F>> = BTreeMap::new();
    let mut cached_test = |v: &Word| -> Result<SymLaurent<F>> {
        if let Some(t) = tests.get(v) {
            return Ok(t.clone());
        }
        let t = test_polynomial(quiver, v)?;
        tests.insert(v.clone(), t.clone());
        Ok(t)
    };
    for attempt in 0..=opts.max_widenings {
        let window = (lo - half, hi + half);
        let mut candidates = enumerate_non_increasing(quiver, &sig, d, window, Some(&min_word), None);
        candidates.reverse();
        let tv: Vec<SymLaurent<F>> = candidates.iter().map(&mut cached_test).collect::<Result<_>>()?;
        let px: Vec<F> = tv.par_iter().map(|t| pair_elem(quiver, x, t)).collect();
        let mut solved: Vec<(Word, F)> = Vec::new();
        for (k, v) in candidates.iter().enumerate() {
            let mut val = px[k].clone();
            for (u, c) in &solved {
                let p = pair_word(quiver, u, &tv[k]);
                if !p.is_zero() {
                    val = val.sub_ref(&p.mul_ref(c));
                }
            }
            if val.is_zero() {
                continue;
            }
            let diag = pair_word(quiver, v, &tv[k]);
            let c = val.div_ref(&diag).ok_or_else(|| Error::InvalidArgument(format!("test polynomial of {v} pairs to zero with its word")))?;
            solved.push((v.clone(), c));
        }
        let sol = UElement::from_terms(solved.iter().cloned());
        let residual = x.sub(&sol);
        if residual_vanishes(quiver, &residual, &sig, d, (lo - 2 * half, hi + 2 * half), &min_word, opts, &mut cached_test)? {
            return Ok(Straightened { coeffs: sol.terms().clone(), window, widenings: attempt });
        }
        half *= 2;
    }
    Err(Error::WindowExhausted { attempts: opts.max_widenings })
}

#[allow(clippy::too_many_arguments)]
fn residual_vanishes<F: Field>(
    quiver: &Quiver<F>,
    residual: &UElement<F>,
    sig: &ColorSignature,
    d: i64,
    window: (i64, i64),
    min_word: &Word,
    opts: &StraightenOptions,
    cached_test: &mut impl FnMut(&Word) -> Result<SymLaurent<F>>,
) -> Result<bool> {
    if residual.is_zero() {
        return Ok(true);
    }
    let check = enumerate_non_increasing(quiver, sig, d, window, Some(min_word), None);
    let tv: Vec<SymLaurent<F>> = check.iter().map(cached_test).collect::<Result<_>>()?;
    if !tv.par_iter().all(|t| pair_elem(quiver, residual, t).is_zero()) {
        return Ok(false);
    }
    Ok(random_checks_vanish(quiver, residual, sig, d, opts))
}

fn random_checks_vanish<F: Field>(quiver: &Quiver<F>, residual: &UElement<F>, sig: &ColorSignature, d: i64, opts: &StraightenOptions) -> bool {
    let mut g = rng(opts.seed);
    (0..opts.random_checks).all(|_| {
        let r = random_symmetric(&mut g, sig, -d, 3, 3);
        pair_elem(quiver, residual, &r).is_zero()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::loopgroup::{pair, quadratic_relation};
    use crate::quiver::catalog;
    use crate::scalars::{sym, ParamScalar};
    use crate::words::Letter;

    type S = ParamScalar;

    fn w(letters: &[(usize, i64)]) -> Word {
        Word::new(letters.iter().map(|&(v, e)| Letter::new(v, e)).collect())
    }

    #[test]
    fn basis_word_is_fixed() {
        let (quiver, _) = catalog::a2();
        let v = w(&[(0, 1), (1, 1)]);
        assert!(is_non_increasing(&quiver, &v));
        let s = straighten(&quiver, &UElement::<S>::word(v.clone()), &StraightenOptions::default()).unwrap();
        assert_eq!(s.to_element(), UElement::word(v));
    }

    #[test]
    fn a2_fixture() {
        let (quiver, ring) = catalog::a2();
        let q = sym(&ring, "q");
        let t = sym(&ring, "t");
        let x = UElement::<S>::word(w(&[(0, 2), (1, 0)]));
        let s = straighten(&quiver, &x, &StraightenOptions::default()).unwrap();
        let qt = q.checked_div(&t).unwrap();
        let expect = UElement::from_terms([
            (w(&[(0, 1), (1, 1)]), qt.clone()),
            (w(&[(1, 1), (0, 1)]), -q.checked_div(&(t.clone() * t)).unwrap()),
            (w(&[(1, 0), (0, 2)]), qt),
        ]);
        assert_eq!(s.to_element(), expect);
    }

    #[test]
    fn relations_straighten_to_zero() {
        for (_, (quiver, _)) in catalog::test_quivers() {
            let rel = quadratic_relation(&quiver, 0, quiver.num_vertices() - 1, 1, 0);
            assert!(straighten(&quiver, &rel, &StraightenOptions::default()).unwrap().is_zero());
        }
    }

    #[test]
    fn pairings_preserved() {
        let (quiver, _) = catalog::jordan(1);
        let x = UElement::<S>::from_terms([(w(&[(0, 0), (0, 2), (0, -1)]), S::from_int(2)), (w(&[(0, 3), (0, -2), (0, 0)]), S::from_int(-1))]);
        let s = straighten(&quiver, &x, &StraightenOptions::default()).unwrap();
        let (sig, d) = x.grading(1).unwrap().unwrap();
        let mut g = rng(7);
        for _ in 0..5 {
            let r = random_symmetric(&mut g, &sig, -d, 3, 3);
            assert_eq!(pair(&quiver, &x, &r).unwrap(), pair(&quiver, &s.to_element(), &r).unwrap());
        }
    }

    #[test]
    fn support_path_matches_full_solve() {
        let (quiver, _) = catalog::a2();
        let x = UElement::<S>::from_terms([(w(&[(0, 2), (1, -1)]), S::from_int(3)), (w(&[(1, 1), (0, 0)]), S::from_int(-1))]);
        let fast = straighten_by_support(&quiver, &x, &StraightenOptions::default()).unwrap().unwrap();
        let full = straighten_cleared(&quiver, &x, &StraightenOptions::default()).unwrap();
        assert_eq!(fast.coeffs, full.coeffs);
    }
}
