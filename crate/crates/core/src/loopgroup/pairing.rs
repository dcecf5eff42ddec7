//! The pairing `⟨e_w, R⟩`: constant term of
//! `z^d R(z) ∏_{a<b} 1/ζ_{i_b i_a}(z_b/z_a)` expanded in `|z_1| ≫ ... ≫ |z_n|`.
//!
//! Writing `1/ζ_{i_b i_a}(u) = u^{L_ab} Σ_k s_ab[k] u^k`, a monomial `z^m` of
//! `R` contributes `∏ s_ab[k_ab]` for every choice of `k_ab ≥ 0` that makes the
//! exponent of each `z_c` vanish:
//! `Σ_{b>c} k_cb - Σ_{a<c} k_ac = e_c := d_c + m_c + Σ_{a<c} L_ac - Σ_{b>c} L_cb`.
//! The flow out of the prefix `1..c` is `P_c = e_1 + ... + e_c`, so every
//! `k_ab ≤ max_c P_c`: that bound makes the truncation exact.

use std::sync::Arc;

use super::UElement;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::polynomials::SymLaurent;
use crate::quiver::Quiver;
use crate::words::Word;

struct Kernel<F> {
    n: usize,
    /// `var_index` of each position's slot.
    index: Vec<usize>,
    lead: Vec<Vec<i64>>,
    series: Vec<Vec<Arc<Vec<F>>>>,
}

impl<F: Field> Kernel<F> {
    fn new(quiver: &Quiver<F>, w: &Word, r: &SymLaurent<F>, order: usize) -> Self {
        let n = w.len();
        let sig = r.sig();
        let index = w.slots().into_iter().map(|v| sig.var_index(v)).collect();
        let letters = w.letters();
        let mut lead = vec![vec![0i64; n]; n];
        let mut series = vec![Vec::new(); n];
        for a in 0..n {
            for b in 0..n {
                if b > a {
                    let (ia, ib) = (letters[a].vertex, letters[b].vertex);
                    lead[a][b] = quiver.recip_lead(ib, ia) as i64;
                    series[a].push(quiver.recip_series(ib, ia, order + 1));
                } else {
                    series[a].push(Arc::new(Vec::new()));
                }
            }
        }
        Kernel { n, index, lead, series }
    }

    fn excess(&self, w: &Word, m: &[i32]) -> Vec<i64> {
        let letters = w.letters();
        (0..self.n)
            .map(|c| {
                let mut e = letters[c].exp + m[self.index[c]] as i64;
                for a in 0..c {
                    e += self.lead[a][c];
                }
                for b in c + 1..self.n {
                    e -= self.lead[c][b];
                }
                e
            })
            .collect()
    }
}

fn prefix_bound(e: &[i64]) -> Option<usize> {
    let mut p = 0i64;
    let mut best = 0i64;
    for &x in e {
        p += x;
        if p < 0 {
            return None;
        }
        best = best.max(p);
    }
    // total flow must vanish
    (p == 0).then_some(best as usize)
}

/// Smallest truncation order at which `⟨e_w, R⟩` is exact.
pub fn truncation_bound<F: Field>(quiver: &Quiver<F>, w: &Word, r: &SymLaurent<F>) -> usize {
    if w.signature(quiver.num_vertices()) != *r.sig() {
        return 0;
    }
    let k = Kernel::new(quiver, w, r, 0);
    r.poly.terms().filter_map(|(m, _)| prefix_bound(&k.excess(w, m))).max().unwrap_or(0)
}

/// `⟨e_w, R⟩` with every kernel series cut after `u^order` beyond its lead.
pub fn pair_word_truncated<F: Field>(quiver: &Quiver<F>, w: &Word, r: &SymLaurent<F>, order: usize) -> F {
    if w.signature(quiver.num_vertices()) != *r.sig() || w.vdeg() + r.vdeg != 0 {
        return F::zero();
    }
    if w.is_empty() {
        return r.poly.coeff(&[]);
    }
    let k = Kernel::new(quiver, w, r, order);
    let mut total = F::zero();
    let mut inflow = vec![0i64; k.n];
    for (m, c) in r.poly.terms() {
        let e = k.excess(w, m);
        if prefix_bound(&e).is_none() {
            continue;
        }
        inflow.iter_mut().for_each(|x| *x = 0);
        let mut acc = F::zero();
        position(&k, &e, order, 0, &mut inflow, F::one(), &mut acc);
        if !acc.is_zero() {
            total = total.add_ref(&acc.mul_ref(c));
        }
    }
    total
}

fn position<F: Field>(k: &Kernel<F>, e: &[i64], order: usize, c: usize, inflow: &mut [i64], coef: F, acc: &mut F) {
    let out = e[c] + inflow[c];
    if out < 0 {
        return;
    }
    if c + 1 == k.n {
        if out == 0 {
            acc.add_assign_ref(&coef);
        }
        return;
    }
    distribute(k, e, order, c, c + 1, out, inflow, coef, acc);
}

#[allow(clippy::too_many_arguments)]
fn distribute<F: Field>(k: &Kernel<F>, e: &[i64], order: usize, c: usize, b: usize, left: i64, inflow: &mut [i64], coef: F, acc: &mut F) {
    let s = &k.series[c][b];
    if b + 1 == k.n {
        // the last target takes the rest
        let amount = left as usize;
        if amount > order || s[amount].is_zero() {
            return;
        }
        inflow[b] += left;
        position(k, e, order, c + 1, inflow, coef.mul_ref(&s[amount]), acc);
        inflow[b] -= left;
        return;
    }
    for amount in 0..=(left as usize).min(order) {
        if s[amount].is_zero() {
            continue;
        }
        inflow[b] += amount as i64;
        distribute(k, e, order, c, b + 1, left - amount as i64, inflow, coef.mul_ref(&s[amount]), acc);
        inflow[b] -= amount as i64;
    }
}

/// `⟨e_w, R⟩` at the exact truncation bound, without the stability recheck.
pub fn pair_word<F: Field>(quiver: &Quiver<F>, w: &Word, r: &SymLaurent<F>) -> F {
    let bound = truncation_bound(quiver, w, r);
    pair_word_truncated(quiver, w, r, bound)
}

/// `⟨x, R⟩`. Each word is evaluated at its exact bound and again two orders
/// higher; a disagreement means the bound is wrong and is reported.
pub fn pair<F: Field>(quiver: &Quiver<F>, x: &UElement<F>, r: &SymLaurent<F>) -> Result<F> {
    let (x, den) = x.cleared();
    let mut total = F::zero();
    for (w, c) in x.terms() {
        let bound = truncation_bound(quiver, w, r);
        let v = pair_word_truncated(quiver, w, r, bound);
        if v != pair_word_truncated(quiver, w, r, bound + 2) {
            return Err(Error::TruncationUnstable { lo: bound, hi: bound + 2 });
        }
        total = total.add_ref(&v.mul_ref(c));
    }
    total.div_ref(&den).ok_or(Error::DivisionByZero)
}
