//! Compressed antisymmetrisation.
//!
//! For a Laurent polynomial `P`, `Antisym(P) = Σ_σ sgn(σ) σ(P)` over
//! color-preserving permutations is a combination `Σ_λ c_λ a_λ` of
//! alternants `a_λ = Antisym(z^λ)`, where each `λ` is strictly decreasing
//! inside every color block. Distinct such `λ` give linearly independent
//! alternants, so `Antisym(P) = 0` iff every `c_λ` vanishes; this test needs
//! no expansion over permutations.

use std::collections::{BTreeMap, HashMap};

use rustc_hash::FxHashMap;
use smallvec::SmallVec;

use super::{color_permutations, flat, ColorSignature, Exps, LaurentPoly};
use crate::field::Field;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alternant<F> {
    sig: ColorSignature,
    coeffs: BTreeMap<Exps, F>,
}

/// Sorts each color block into strictly decreasing order; returns the sign
/// of the sorting permutation, or `None` on a repeated exponent.
fn sort_blocks(sig: &ColorSignature, exps: &Exps) -> Option<(Exps, bool)> {
    let mut out = exps.clone();
    let mut odd = false;
    for block in sig.blocks() {
        let s = &mut out[block];
        // insertion sort; counts transpositions
        for i in 1..s.len() {
            let mut j = i;
            while j > 0 && s[j - 1] < s[j] {
                s.swap(j - 1, j);
                odd = !odd;
                j -= 1;
            }
            if j > 0 && s[j - 1] == s[j] {
                return None;
            }
        }
    }
    Some((out, odd))
}

fn permutation_is_odd(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    let mut odd = false;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut k = start;
        while !seen[k] {
            seen[k] = true;
            k = p[k];
            len += 1;
        }
        if len % 2 == 0 {
            odd = !odd;
        }
    }
    odd
}

impl<F: Field> Alternant<F> {
    pub fn zero(sig: ColorSignature) -> Self {
        Alternant { sig, coeffs: BTreeMap::new() }
    }

    pub fn of(p: &LaurentPoly<F>) -> Self {
        let mut a = Self::zero(p.sig().clone());
        a.add_poly(p);
        a
    }

    /// `Antisym` of the product of `factors`, computed without building the
    /// product as a polynomial when the coefficients flatten.
    pub fn of_product(factors: &[&LaurentPoly<F>]) -> Self {
        let sig = factors[0].sig().clone();
        let maps: Vec<&BTreeMap<Exps, F>> = factors.iter().map(|f| &f.terms).collect();
        let blocks = sig.blocks();
        if let Some(map) = flat::product(&maps, sig.total(), &blocks).and_then(|p| p.antisymmetrize(&blocks)).and_then(|p| p.into_terms()) {
            return Alternant { sig, coeffs: map };
        }
        let mut x = factors[0].clone();
        for f in &factors[1..] {
            x = x.mul(f).expect("factors share a signature");
        }
        Self::of(&x)
    }

    pub fn sig(&self) -> &ColorSignature {
        &self.sig
    }

    pub fn add_monomial(&mut self, exps: &Exps, c: &F) {
        let Some((key, odd)) = sort_blocks(&self.sig, exps) else {
            return;
        };
        let c = if odd { c.neg_ref() } else { c.clone() };
        let slot = self.coeffs.entry(key).or_insert_with(F::zero);
        *slot = slot.add_ref(&c);
    }

    pub fn add_poly(&mut self, p: &LaurentPoly<F>) {
        assert_eq!(p.sig(), &self.sig);
        if let Some(f) = flat::flatten(p.terms.iter()) {
            if let Some(like) = f.like {
                let mut sums: HashMap<(Exps, SmallVec<[i32; 4]>), i128> = HashMap::new();
                for (e, m, c) in f.terms {
                    if let Some((key, odd)) = sort_blocks(&self.sig, e) {
                        *sums.entry((key, m)).or_insert(0) += if odd { -(c as i128) } else { c as i128 };
                    }
                }
                if let Some(map) = flat::rebuild(like, sums) {
                    for (k, c) in map {
                        let slot = self.coeffs.entry(k).or_insert_with(F::zero);
                        *slot = slot.add_ref(&c);
                    }
                    self.prune();
                    return;
                }
            }
        }
        for (e, c) in p.terms() {
            self.add_monomial(e, c);
        }
        self.prune();
    }

    fn prune(&mut self) {
        self.coeffs.retain(|_, c| !c.is_zero());
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.values().all(|c| c.is_zero())
    }

    pub fn scale(&self, s: &F) -> Self {
        let mut r = Alternant { sig: self.sig.clone(), coeffs: self.coeffs.iter().map(|(e, c)| (e.clone(), c.mul_ref(s))).collect() };
        r.prune();
        r
    }

    /// Coefficients `c_λ`, keyed by the strictly decreasing exponent blocks.
    pub fn coefficients(&self) -> &BTreeMap<Exps, F> {
        &self.coeffs
    }

    /// `Σ_λ c_λ a_λ` written out as a polynomial.
    pub fn materialize(&self) -> LaurentPoly<F> {
        let perms: Vec<(Vec<usize>, bool)> = color_permutations(&self.sig)
            .into_iter()
            .map(|p| {
                let o = permutation_is_odd(&p);
                (p, o)
            })
            .collect();
        let mut r = LaurentPoly::zero(self.sig.clone());
        for (lam, c) in &self.coeffs {
            if c.is_zero() {
                continue;
            }
            let neg = c.neg_ref();
            for (p, odd) in &perms {
                let mut e: Exps = SmallVec::from_elem(0, lam.len());
                for (k, &x) in lam.iter().enumerate() {
                    e[p[k]] = x;
                }
                r.add_term(e, if *odd { neg.clone() } else { c.clone() });
            }
        }
        r
    }

    /// The symmetric polynomial `Σ_λ c_λ a_λ / Δ`, with `Δ` the per-color
    /// Vandermonde product. Each `a_λ / Δ` is a Schur polynomial, so the
    /// coefficients on sorted monomials are integer combinations of the `c_λ`
    /// (Kostka numbers); only the final orbits are written out.
    pub fn symmetric_quotient(&self) -> LaurentPoly<F> {
        self.symmetric_quotient_scaled(&F::one())
    }

    /// `scale · symmetric_quotient()`, scaling once per orbit rather than
    /// once per term.
    pub fn symmetric_quotient_scaled(&self, scale: &F) -> LaurentPoly<F> {
        let blocks = self.sig.blocks();
        let mut kostka = Kostka::default();
        let mut expansions: Vec<(&F, Vec<(Exps, u64)>)> = Vec::with_capacity(self.coeffs.len());
        for (lam, c) in &self.coeffs {
            if c.is_zero() {
                continue;
            }
            let per_block: Vec<Vec<(Vec<i32>, u64)>> = blocks
                .iter()
                .map(|b| {
                    let n = b.len();
                    let shape: Vec<i64> = lam[b.clone()].iter().enumerate().map(|(k, &x)| x as i64 - (n - 1 - k) as i64).collect();
                    kostka.expansion(&shape)
                })
                .collect();
            let mut partial: Vec<(Exps, u64)> = vec![(SmallVec::new(), 1)];
            for options in &per_block {
                let mut next = Vec::with_capacity(partial.len() * options.len());
                for (e, k) in &partial {
                    for (mu, kk) in options {
                        let mut e2 = e.clone();
                        e2.extend_from_slice(mu);
                        next.push((e2, k.checked_mul(*kk).expect("Kostka product fits in u64")));
                    }
                }
                partial = next;
            }
            expansions.push((c, partial));
        }
        let sorted = Self::accumulate_flat(&expansions).unwrap_or_else(|| {
            let mut sorted: BTreeMap<Exps, F> = BTreeMap::new();
            for (c, partial) in &expansions {
                for (e, k) in partial {
                    let term = c.mul_ref(&F::from_bigint((*k as i128).into()));
                    let slot = sorted.entry(e.clone()).or_insert_with(F::zero);
                    *slot = slot.add_ref(&term);
                }
            }
            sorted
        });
        let perms = color_permutations(&self.sig);
        let mut r = LaurentPoly::zero(self.sig.clone());
        let mut seen = std::collections::HashSet::new();
        for (mu, c) in sorted {
            if c.is_zero() {
                continue;
            }
            let c = if scale.is_one() { c } else { c.mul_ref(scale) };
            seen.clear();
            for p in &perms {
                let mut e: Exps = SmallVec::from_elem(0, mu.len());
                for (k, &x) in mu.iter().enumerate() {
                    e[p[k]] = x;
                }
                if seen.insert(e.clone()) {
                    r.add_term(e, c.clone());
                }
            }
        }
        r
    }

    /// `Σ K c` on machine integers, when every `c` flattens.
    fn accumulate_flat(expansions: &[(&F, Vec<(Exps, u64)>)]) -> Option<BTreeMap<Exps, F>> {
        let mut like: Option<&F> = None;
        let mut sums: FxHashMap<(Exps, SmallVec<[i32; 4]>), i128> = FxHashMap::default();
        for (c, partial) in expansions {
            let f = c.to_flat()?;
            if f.iter().any(|(m, _)| !m.is_empty()) || like.is_none() {
                like = Some(c);
            }
            for (e, k) in partial {
                for (m, v) in &f {
                    let slot = sums.entry((e.clone(), m.clone())).or_insert(0);
                    *slot = slot.checked_add((*v as i128).checked_mul(*k as i128)?)?;
                }
            }
        }
        let Some(like) = like else {
            return Some(BTreeMap::new());
        };
        flat::rebuild(like, sums)
    }
}

/// Memoised Kostka numbers `K_{λμ}`: semistandard tableaux of shape `λ` and
/// content `μ`, counted by peeling the largest entry off as a horizontal strip.
#[derive(Default)]
struct Kostka {
    counts: HashMap<(Vec<i64>, Vec<i64>), u64>,
    expansions: HashMap<Vec<i64>, Vec<(Vec<i32>, u64)>>,
}

impl Kostka {
    /// `s_shape = Σ_μ K m_μ` over weakly decreasing `μ`, for a weakly
    /// decreasing Laurent shape (shifted by a power of the determinant).
    fn expansion(&mut self, shape: &[i64]) -> Vec<(Vec<i32>, u64)> {
        if let Some(e) = self.expansions.get(shape) {
            return e.clone();
        }
        let n = shape.len();
        let out = if n == 0 {
            vec![(vec![], 1)]
        } else {
            let shift = -shape[n - 1];
            let lam: Vec<i64> = shape.iter().map(|x| x + shift).collect();
            let size: i64 = lam.iter().sum();
            let mut mus = Vec::new();
            weakly_decreasing(n, size, lam[0], &mut Vec::new(), &mut mus);
            mus.into_iter()
                .filter_map(|mu| {
                    let k = self.count(&lam, &mu);
                    (k > 0).then(|| (mu.iter().map(|x| (x - shift) as i32).collect(), k))
                })
                .collect()
        };
        self.expansions.insert(shape.to_vec(), out.clone());
        out
    }

    fn count(&mut self, lam: &[i64], content: &[i64]) -> u64 {
        let k = content.len();
        if lam.iter().filter(|&&x| x > 0).count() > k {
            return 0;
        }
        if k == 0 {
            return 1;
        }
        let key = (lam.to_vec(), content.to_vec());
        if let Some(&c) = self.counts.get(&key) {
            return c;
        }
        let mut strips = Vec::new();
        horizontal_strips(lam, content[k - 1], 0, &mut Vec::new(), &mut strips);
        let total = strips.iter().map(|nu| self.count(nu, &content[..k - 1])).sum();
        self.counts.insert(key, total);
        total
    }
}

/// All weakly decreasing nonnegative sequences of length `n`, sum `size` and
/// entries at most `max`.
fn weakly_decreasing(n: usize, size: i64, max: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if cur.len() == n {
        if size == 0 {
            out.push(cur.clone());
        }
        return;
    }
    let left = (n - cur.len()) as i64;
    for x in (0..=max.min(size)).rev() {
        if x * left < size {
            break;
        }
        cur.push(x);
        weakly_decreasing(n, size - x, x, cur, out);
        cur.pop();
    }
}

/// Shapes `ν ⊆ λ` with `λ/ν` a horizontal strip of `m` boxes.
fn horizontal_strips(lam: &[i64], m: i64, i: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
    if i == lam.len() {
        if m == 0 {
            out.push(cur.clone());
        }
        return;
    }
    let floor = lam.get(i + 1).copied().unwrap_or(0);
    for nu in (floor..=lam[i]).rev() {
        let take = lam[i] - nu;
        if take > m {
            break;
        }
        cur.push(nu);
        horizontal_strips(lam, m - take, i + 1, cur, out);
        cur.pop();
    }
}

/// `∏_i ∏_{a<b} (z[i,a] - z[i,b])`
pub fn vandermonde<F: Field>(sig: &ColorSignature) -> LaurentPoly<F> {
    let mut v = LaurentPoly::one(sig.clone());
    let n = sig.total();
    for block in sig.blocks() {
        for a in block.clone() {
            for b in a + 1..block.end {
                let mut ea: Exps = SmallVec::from_elem(0, n);
                ea[a] = 1;
                let mut eb: Exps = SmallVec::from_elem(0, n);
                eb[b] = 1;
                let lin = LaurentPoly::from_terms(sig.clone(), [(ea, F::one()), (eb, -F::one())]);
                v = v.mul(&lin).expect("same signature");
            }
        }
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn compressed_matches_explicit_antisymmetrisation() {
        let s = ColorSignature::new(vec![3, 2]);
        let mut p = LaurentPoly::<Q>::zero(s.clone());
        p.add_term(SmallVec::from_slice(&[2, -1, 0, 1, 3]), Q::from_integer(3.into()));
        p.add_term(SmallVec::from_slice(&[0, 0, 1, 1, 2]), Q::from_integer(5.into()));
        p.add_term(SmallVec::from_slice(&[1, 0, -1, 2, 2]), Q::from_integer(7.into()));
        let mut explicit = LaurentPoly::zero(s.clone());
        for perm in color_permutations(&s) {
            let t = p.permute(&perm);
            explicit = if permutation_is_odd(&perm) { explicit.sub(&t) } else { explicit.add(&t) }.unwrap();
        }
        assert_eq!(Alternant::of(&p).materialize(), explicit);
    }

    #[test]
    fn schur_quotient_matches_division() {
        let s = ColorSignature::new(vec![3, 2]);
        let mut p = LaurentPoly::<Q>::zero(s.clone());
        p.add_term(SmallVec::from_slice(&[4, -1, 0, 1, 3]), Q::from_integer(3.into()));
        p.add_term(SmallVec::from_slice(&[0, 2, 1, -2, 2]), Q::from_integer((-5).into()));
        p.add_term(SmallVec::from_slice(&[1, 0, -1, 2, 0]), Q::from_integer(7.into()));
        let a = Alternant::of(&p);
        assert_eq!(a.symmetric_quotient(), a.materialize().div_vandermonde().unwrap());
    }

    #[test]
    fn kostka_small_values() {
        let mut k = Kostka::default();
        // s_(2,1) in three variables: m_(2,1,0) + 2 m_(1,1,1)
        let e = k.expansion(&[2, 1, 0]);
        assert_eq!(e, vec![(vec![2, 1, 0], 1), (vec![1, 1, 1], 2)]);
        assert_eq!(k.expansion(&[-1, -1]), vec![(vec![-1, -1], 1)]);
    }

    #[test]
    fn vandermonde_is_the_smallest_alternant() {
        let s = ColorSignature::new(vec![3]);
        let v = vandermonde::<Q>(&s);
        let a = Alternant::of(&v);
        // Antisym(Δ) = 3! Δ, and Δ = a_(2,1,0)
        assert_eq!(a.coefficients().len(), 1);
        let (k, c) = a.coefficients().iter().next().unwrap();
        assert_eq!(k.as_slice(), &[2, 1, 0]);
        assert_eq!(*c, Q::from_integer(6.into()));
        assert!(Alternant::of(&LaurentPoly::<Q>::one(s)).is_zero());
    }
}
