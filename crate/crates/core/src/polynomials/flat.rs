//! Machine-integer fast paths for polynomials whose coefficients are integer
//! Laurent polynomials in the parameters (see [`Field::to_flat`]). Such a
//! polynomial is one integer polynomial in the `z` variables and the
//! parameters together, so products and sums need no per-coefficient
//! allocation.

use std::collections::BTreeMap;
use std::ops::Range;

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use super::Exps;
use crate::field::Field;

type PMono = SmallVec<[i32; 4]>;

/// Coefficients flattened to `(z exponents, parameter exponents, integer)`.
pub(crate) struct Flat<'a, F> {
    pub terms: Vec<(&'a Exps, PMono, i64)>,
    pub nparams: usize,
    /// A coefficient carrying the parameter ring, if any does.
    pub like: Option<&'a F>,
}

pub(crate) fn flatten<'a, F: Field>(terms: impl Iterator<Item = (&'a Exps, &'a F)>) -> Option<Flat<'a, F>> {
    let mut out = Vec::new();
    let mut nparams = 0;
    let mut like = None;
    for (e, c) in terms {
        let f = c.to_flat()?;
        for (m, v) in f {
            if !m.is_empty() {
                if nparams == 0 {
                    nparams = m.len();
                    like = Some(c);
                } else if m.len() != nparams {
                    return None;
                }
            }
            out.push((e, m, v));
        }
        like = like.or(Some(c));
    }
    Some(Flat { terms: out, nparams, like })
}

fn pad(m: &PMono, n: usize) -> PMono {
    if m.len() == n {
        m.clone()
    } else {
        SmallVec::from_elem(0, n)
    }
}

/// Rebuilds coefficients from integer sums keyed by `(z, parameters)`.
pub(crate) fn rebuild<F: Field>(like: &F, sums: impl IntoIterator<Item = ((Exps, PMono), i128)>) -> Option<BTreeMap<Exps, F>> {
    let mut grouped: BTreeMap<Exps, Vec<(PMono, i128)>> = BTreeMap::new();
    for ((e, m), c) in sums {
        if c != 0 {
            grouped.entry(e).or_default().push((m, c));
        }
    }
    let mut out = BTreeMap::new();
    for (e, terms) in grouped {
        let c = like.rebuild_flat(terms)?;
        if !c.is_zero() {
            out.insert(e, c);
        }
    }
    Some(out)
}

/// A product of flattened polynomials, every exponent packed into one `u128`
/// key. Each variable gets a field wide enough for the sum of the factors'
/// exponent ranges, so partial products never carry between fields.
pub(crate) struct Packed<'a, F> {
    nz: usize,
    offsets: Vec<u32>,
    widths: Vec<u32>,
    base: Vec<i64>,
    pub terms: Vec<(u128, i128)>,
    like: Option<&'a F>,
}

impl<F: Field> Packed<'_, F> {
    /// `(z exponents, parameter exponents)` of a key.
    pub fn unpack(&self, k: u128) -> (Exps, PMono) {
        let mut e: Exps = SmallVec::with_capacity(self.nz);
        let mut m: PMono = SmallVec::new();
        for v in 0..self.base.len() {
            let w = self.widths[v];
            let field = if w == 0 { 0 } else { ((k >> self.offsets[v]) & ((1u128 << w) - 1)) as i64 };
            let val = (field + self.base[v]) as i32;
            if v < self.nz {
                e.push(val);
            } else {
                m.push(val);
            }
        }
        (e, m)
    }

    /// Coefficients regrouped by `z` monomial.
    pub fn into_terms(self) -> Option<BTreeMap<Exps, F>> {
        let Some(like) = self.like else {
            return Some(BTreeMap::new());
        };
        rebuild(like, self.terms.iter().map(|&(k, c)| (self.unpack(k), c)))
    }

    /// `Σ_σ sgn(σ) σ(P)` compressed to keys that are strictly decreasing in
    /// every block. `None` on coefficient overflow.
    pub fn antisymmetrize(&self, blocks: &[Range<usize>]) -> Option<Self> {
        let mut sums: FxHashMap<u128, i128> = FxHashMap::default();
        'terms: for &(k, c) in &self.terms {
            let mut odd = false;
            let mut key = k;
            for b in blocks.iter().filter(|b| b.len() > 1) {
                let w = self.widths[b.start];
                let mask = if w == 0 { 0 } else { (1u128 << w) - 1 };
                let mut f: SmallVec<[u128; 8]> = b.clone().map(|v| (k >> self.offsets[v]) & mask).collect();
                // insertion sort, descending; counts transpositions
                for i in 1..f.len() {
                    let mut j = i;
                    while j > 0 && f[j - 1] < f[j] {
                        f.swap(j - 1, j);
                        odd = !odd;
                        j -= 1;
                    }
                    if j > 0 && f[j - 1] == f[j] {
                        continue 'terms;
                    }
                }
                for (x, v) in f.into_iter().zip(b.clone()) {
                    key = (key & !(mask << self.offsets[v])) | (x << self.offsets[v]);
                }
            }
            let slot = sums.entry(key).or_insert(0);
            *slot = slot.checked_add(if odd { -c } else { c })?;
        }
        Some(Packed {
            nz: self.nz,
            offsets: self.offsets.clone(),
            widths: self.widths.clone(),
            base: self.base.clone(),
            terms: sums.into_iter().filter(|&(_, c)| c != 0).collect(),
            like: self.like,
        })
    }
}

/// The product of `factors` in `nz` variables on machine integers. `None`
/// when some coefficient does not flatten, the exponent ranges do not fit in
/// 128 bits, or a coefficient overflows.
///
/// Variables within one of `blocks` share their field layout, so a key can be
/// permuted inside a block without unpacking (see [`Packed::antisymmetrize`]).
pub(crate) fn product<'a, F: Field>(factors: &[&'a BTreeMap<Exps, F>], nz: usize, blocks: &[Range<usize>]) -> Option<Packed<'a, F>> {
    let flats: Vec<Flat<'a, F>> = factors.iter().map(|f| flatten(f.iter())).collect::<Option<_>>()?;
    let np = flats.iter().map(|f| f.nparams).max().unwrap_or(0);
    let like = flats.iter().find(|f| f.nparams == np && f.like.is_some()).and_then(|f| f.like);
    let n = nz + np;
    if flats.iter().any(|f| f.terms.is_empty()) {
        return Some(Packed { nz, offsets: vec![0; n], widths: vec![0; n], base: vec![0; n], terms: Vec::new(), like });
    }
    let full: Vec<Vec<(SmallVec<[i32; 12]>, i64)>> =
        flats.iter().map(|f| f.terms.iter().map(|(e, m, c)| (e.iter().copied().chain(pad(m, np)).collect(), *c)).collect()).collect();
    // block of each variable; parameters are singletons
    let mut group: Vec<usize> = (0..n).collect();
    for b in blocks {
        for v in b.clone() {
            group[v] = b.start;
        }
    }
    let lows: Vec<Vec<i64>> = full
        .iter()
        .map(|f| {
            let mut lo = vec![i64::MAX; n];
            for (x, _) in f {
                for v in 0..n {
                    lo[group[v]] = lo[group[v]].min(x[v] as i64);
                }
            }
            (0..n).map(|v| lo[group[v]]).collect()
        })
        .collect();
    let mut base = vec![0i64; n];
    let mut range = vec![0u64; n];
    for (f, lo) in full.iter().zip(&lows) {
        let mut hi = vec![i64::MIN; n];
        for (x, _) in f {
            for v in 0..n {
                hi[group[v]] = hi[group[v]].max(x[v] as i64);
            }
        }
        for v in 0..n {
            base[v] += lo[v];
            range[v] += (hi[group[v]] - lo[v]) as u64;
        }
    }
    let widths: Vec<u32> = range.iter().map(|r| 64 - r.leading_zeros()).collect();
    let mut offsets = Vec::with_capacity(n);
    let mut bits = 0u32;
    for w in &widths {
        offsets.push(bits);
        bits += w;
    }
    if bits > 128 {
        return None;
    }
    let packed: Vec<Vec<(u128, i64)>> = full
        .iter()
        .zip(&lows)
        .map(|(f, lo)| {
            f.iter().map(|(x, c)| (x.iter().zip(lo).zip(&offsets).fold(0u128, |k, ((&v, l), &o)| k | (((v as i64 - l) as u128) << o)), *c)).collect()
        })
        .collect();
    let sorted = |p: &Vec<(u128, i64)>| -> Vec<(u128, i128)> {
        let mut v: Vec<(u128, i128)> = p.iter().map(|&(k, c)| (k, c as i128)).collect();
        v.sort_unstable_by_key(|t| t.0);
        v
    };
    let mut cur = sorted(&packed[0]);
    for f in &packed[1..] {
        cur = mul_sorted(&cur, &sorted(f))?;
    }
    Some(Packed { nz, offsets, widths, base, terms: cur, like })
}

/// Merges two key-sorted runs, adding coefficients of equal keys.
fn merge(a: &[(u128, i128)], b: &[(u128, i128)]) -> Option<Vec<(u128, i128)>> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = a[i].1.checked_add(b[j].1)?;
                if c != 0 {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some(out)
}

/// Product of two key-sorted packed polynomials. Adding a key never carries
/// between fields, so each shifted copy of the longer factor stays sorted and
/// the product is a merge of those runs; runs are combined in a binary
/// counter to keep memory near the output size.
fn mul_sorted(a: &[(u128, i128)], b: &[(u128, i128)]) -> Option<Vec<(u128, i128)>> {
    let (long, short) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut stack: Vec<(usize, Vec<(u128, i128)>)> = Vec::new();
    for &(ks, cs) in short {
        let mut run: Vec<(u128, i128)> = Vec::with_capacity(long.len());
        for &(kl, cl) in long {
            run.push((kl + ks, cl.checked_mul(cs)?));
        }
        let mut rank = 0;
        while stack.last().is_some_and(|(r, _)| *r == rank) {
            let (_, top) = stack.pop().unwrap();
            run = merge(&top, &run)?;
            rank += 1;
        }
        stack.push((rank, run));
    }
    let mut out = Vec::new();
    while let Some((_, run)) = stack.pop() {
        out = merge(&run, &out)?;
    }
    Some(out)
}

#[cfg(test)]
mod tests {
    use super::super::{ColorSignature, LaurentPoly};
    use crate::scalars::{sym, ParamRing, ParamScalar};
    use crate::Field;

    #[test]
    fn flat_product_matches_generic() {
        let ring = ParamRing::new(&["q", "t"]).unwrap();
        let (q, t) = (sym(&ring, "q"), sym(&ring, "t"));
        let sig = ColorSignature::new(vec![2]);
        let mut a = LaurentPoly::<ParamScalar>::zero(sig.clone());
        let mut b = LaurentPoly::<ParamScalar>::zero(sig.clone());
        for k in -3..4i32 {
            a.add_term([k, 1 - k].into_iter().collect(), q.powi(k as i64).unwrap().add_ref(&t));
            b.add_term([2 * k, -k].into_iter().collect(), ParamScalar::from_i64(k as i64 + 9).sub_ref(&t.powi(-2).unwrap()));
        }
        b.add_term([0, 0].into_iter().collect(), ParamScalar::from_i64(5));
        assert_eq!(a.mul(&b).unwrap(), a.mul_generic(&b));
    }
}
