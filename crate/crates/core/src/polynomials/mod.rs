//! Laurent polynomials in colored variables `z[i,a]`.
//!
//! A [`ColorSignature`] assigns to every vertex `i` a count `n_i`; the
//! variables are `z[i,1..=n_i]`, ordered by vertex index and then by slot.
//! Exponent vectors follow that order. Internally slots are 0-based.

mod alternant;
mod flat;
mod text;

use std::collections::BTreeMap;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::field::Field;

pub use alternant::{vandermonde, Alternant};

pub type Exps = SmallVec<[i32; 8]>;

/// Number of variables of each color, indexed by vertex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ColorSignature {
    counts: Vec<usize>,
}

impl ColorSignature {
    pub fn new(counts: Vec<usize>) -> Self {
        ColorSignature { counts }
    }

    pub fn zero(num_vertices: usize) -> Self {
        ColorSignature { counts: vec![0; num_vertices] }
    }

    /// `n_i = 1` at `vertex`, zero elsewhere.
    pub fn unit(num_vertices: usize, vertex: usize) -> Self {
        let mut counts = vec![0; num_vertices];
        counts[vertex] = 1;
        ColorSignature { counts }
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn count(&self, vertex: usize) -> usize {
        self.counts.get(vertex).copied().unwrap_or(0)
    }

    pub fn num_vertices(&self) -> usize {
        self.counts.len()
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    /// Index of the first variable of `vertex` in exponent vectors.
    pub fn offset(&self, vertex: usize) -> usize {
        self.counts[..vertex].iter().sum()
    }

    pub fn var_index(&self, v: Var) -> usize {
        debug_assert!(v.slot < self.counts[v.vertex]);
        self.offset(v.vertex) + v.slot
    }

    pub fn var_at(&self, index: usize) -> Var {
        let mut rest = index;
        for (vertex, &n) in self.counts.iter().enumerate() {
            if rest < n {
                return Var { vertex, slot: rest };
            }
            rest -= n;
        }
        panic!("variable index {index} out of range for {:?}", self.counts)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.counts.len().max(other.counts.len());
        ColorSignature { counts: (0..n).map(|i| self.count(i) + other.count(i)).collect() }
    }

    /// Per-color ranges of variable indices.
    pub fn blocks(&self) -> Vec<std::ops::Range<usize>> {
        let mut start = 0;
        self.counts
            .iter()
            .map(|&n| {
                let r = start..start + n;
                start += n;
                r
            })
            .collect()
    }

    /// `∏ n_i!`
    pub fn factorial_product(&self) -> u128 {
        self.counts.iter().map(|&n| (1..=n as u128).product::<u128>()).product()
    }

    pub fn to_text(&self, names: &[String]) -> String {
        let parts: Vec<String> = self.counts.iter().zip(names).filter(|(n, _)| **n > 0).map(|(n, name)| format!("{name}:{n}")).collect();
        format!("sig: {}", parts.join(" "))
    }
}

/// The variable `z[vertex, slot + 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    pub vertex: usize,
    pub slot: usize,
}

impl Var {
    pub fn new(vertex: usize, slot: usize) -> Self {
        Var { vertex, slot }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LaurentPoly<F> {
    sig: ColorSignature,
    terms: BTreeMap<Exps, F>,
}

fn exps_add(a: &Exps, b: &Exps) -> Exps {
    a.iter().zip(b.iter()).map(|(x, y)| x + y).collect()
}

impl<F: Field> LaurentPoly<F> {
    pub fn zero(sig: ColorSignature) -> Self {
        LaurentPoly { sig, terms: BTreeMap::new() }
    }

    pub fn constant(sig: ColorSignature, c: F) -> Self {
        let n = sig.total();
        Self::monomial(sig, SmallVec::from_elem(0, n), c)
    }

    pub fn one(sig: ColorSignature) -> Self {
        Self::constant(sig, F::one())
    }

    pub fn monomial(sig: ColorSignature, exps: Exps, c: F) -> Self {
        assert_eq!(exps.len(), sig.total(), "exponent vector length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        LaurentPoly { sig, terms }
    }

    /// `z[v]^e`
    pub fn var_power(sig: ColorSignature, v: Var, e: i32) -> Self {
        let mut exps: Exps = SmallVec::from_elem(0, sig.total());
        exps[sig.var_index(v)] = e;
        Self::monomial(sig, exps, F::one())
    }

    pub fn from_terms(sig: ColorSignature, terms: impl IntoIterator<Item = (Exps, F)>) -> Self {
        let mut p = Self::zero(sig);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn sig(&self) -> &ColorSignature {
        &self.sig
    }

    pub fn nvars(&self) -> usize {
        self.sig.total()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending lexicographic order of exponent vectors.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exps, &F)> {
        self.terms.iter()
    }

    pub fn into_terms(self) -> BTreeMap<Exps, F> {
        self.terms
    }

    pub fn coeff(&self, exps: &[i32]) -> F {
        self.terms.get(exps).cloned().unwrap_or_else(F::zero)
    }

    pub fn add_term(&mut self, exps: Exps, c: F) {
        debug_assert_eq!(exps.len(), self.sig.total());
        if c.is_zero() {
            return;
        }
        match self.terms.entry(exps) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get().add_ref(&c);
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    fn check_sig(&self, other: &Self) -> Result<()> {
        if self.sig != other.sig {
            return Err(Error::SignatureMismatch(format!("{:?}", self.sig.counts), format!("{:?}", other.sig.counts)));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_sig(other)?;
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), c.clone());
        }
        Ok(r)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_sig(other)?;
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), c.neg_ref());
        }
        Ok(r)
    }

    pub fn add_assign(&mut self, other: &Self) -> Result<()> {
        self.check_sig(other)?;
        for (e, c) in &other.terms {
            self.add_term(e.clone(), c.clone());
        }
        Ok(())
    }

    pub fn neg(&self) -> Self {
        LaurentPoly { sig: self.sig.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), c.neg_ref())).collect() }
    }

    pub fn scale(&self, s: &F) -> Self {
        if s.is_zero() {
            return Self::zero(self.sig.clone());
        }
        LaurentPoly { sig: self.sig.clone(), terms: self.terms.iter().map(|(e, c)| (e.clone(), c.mul_ref(s))).collect() }
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_sig(other)?;
        if self.terms.len() * other.terms.len() >= 64 {
            if let Some(terms) = flat::product(&[&self.terms, &other.terms], self.sig.total(), &self.sig.blocks()).and_then(|p| p.into_terms()) {
                return Ok(LaurentPoly { sig: self.sig.clone(), terms });
            }
        }
        Ok(self.mul_generic(other))
    }

    /// Term-by-term product in the coefficient field.
    fn mul_generic(&self, other: &Self) -> Self {
        let mut r = Self::zero(self.sig.clone());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                r.add_term(exps_add(ea, eb), ca.mul_ref(cb));
            }
        }
        r
    }

    pub fn mul_monomial(&self, exps: &Exps, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.sig.clone());
        }
        LaurentPoly { sig: self.sig.clone(), terms: self.terms.iter().map(|(e, x)| (exps_add(e, exps), x.mul_ref(c))).collect() }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.sig.clone());
        for _ in 0..k {
            acc = acc.mul(self).expect("same signature");
        }
        acc
    }

    /// Common total degree of all terms; `None` if empty or inhomogeneous.
    pub fn homogeneous_degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|e| e.iter().map(|&x| x as i64).sum::<i64>());
        let d = it.next()?;
        it.all(|x| x == d).then_some(d)
    }

    /// Applies a permutation of variable indices: `z[k] -> z[perm[k]]`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let mut r = Self::zero(self.sig.clone());
        for (e, c) in &self.terms {
            let mut ne: Exps = SmallVec::from_elem(0, e.len());
            for (k, &x) in e.iter().enumerate() {
                ne[perm[k]] = x;
            }
            r.terms.insert(ne, c.clone());
        }
        r
    }

    /// Re-expresses the polynomial in a larger signature, sending slot `a` of
    /// color `i` to slot `a + shift[i]`.
    pub fn embed(&self, target: &ColorSignature, shift: &[usize]) -> Self {
        let mut r = Self::zero(target.clone());
        for (e, c) in &self.terms {
            let mut ne: Exps = SmallVec::from_elem(0, target.total());
            for (k, &x) in e.iter().enumerate() {
                let v = self.sig.var_at(k);
                let tv = Var::new(v.vertex, v.slot + shift.get(v.vertex).copied().unwrap_or(0));
                ne[target.var_index(tv)] = x;
            }
            r.terms.insert(ne, c.clone());
        }
        r
    }

    /// Plain sum over all `∏ n_i!` permutations of same-colored variables.
    pub fn symmetrize(&self) -> Self {
        let mut r = Self::zero(self.sig.clone());
        for perm in color_permutations(&self.sig) {
            r.add_assign(&self.permute(&perm)).expect("same signature");
        }
        r
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.nvars();
        for block in self.sig.blocks() {
            for k in block.start..block.end.saturating_sub(1) {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.swap(k, k + 1);
                if self.permute(&perm) != *self {
                    return false;
                }
            }
        }
        true
    }

    /// Simultaneous substitution `z[from] -> scale * z[to]` for each rule.
    /// Targets must not themselves be substituted.
    pub fn substitute_vars(&self, rules: &[(Var, F, Var)]) -> Self {
        let idx: Vec<(usize, &F, usize)> = rules.iter().map(|(a, s, b)| (self.sig.var_index(*a), s, self.sig.var_index(*b))).collect();
        let mut r = Self::zero(self.sig.clone());
        let mut pow_cache: Vec<BTreeMap<i32, F>> = vec![BTreeMap::new(); idx.len()];
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            let mut coef = c.clone();
            for (k, (from, s, to)) in idx.iter().enumerate() {
                let x = e[*from];
                if x == 0 {
                    continue;
                }
                ne[*from] = 0;
                ne[*to] += x;
                let p = pow_cache[k].entry(x).or_insert_with(|| s.powi(x as i64).expect("nonzero scale")).clone();
                coef = coef.mul_ref(&p);
            }
            r.add_term(ne, coef);
        }
        r
    }

    /// Sets `z[v]` to a nonzero scalar.
    pub fn set_var(&self, v: Var, value: &F) -> Self {
        let k = self.sig.var_index(v);
        let mut r = Self::zero(self.sig.clone());
        for (e, c) in &self.terms {
            let mut ne = e.clone();
            let x = ne[k];
            ne[k] = 0;
            r.add_term(ne, c.mul_ref(&value.powi(x as i64).expect("nonzero value")));
        }
        r
    }

    /// Exact division by `(z[u] - gamma z[v])^k`; `None` unless divisible.
    pub fn divisible_by_power(&self, u: Var, gamma: &F, v: Var, k: u32) -> Option<Self> {
        let mut p = self.clone();
        for _ in 0..k {
            p = p.div_linear(u, gamma, v)?;
        }
        Some(p)
    }

    /// Exact division by `z[u] - gamma z[v]`, treating the polynomial as
    /// univariate in `z[u]`.
    pub fn div_linear(&self, u: Var, gamma: &F, v: Var) -> Option<Self> {
        let iu = self.sig.var_index(u);
        let iv = self.sig.var_index(v);
        assert_ne!(iu, iv, "linear factor needs two distinct variables");
        if self.is_zero() {
            return Some(self.clone());
        }
        // Group by the exponents of all variables but z[u]; within a group
        // the exponent of z[u] runs over a finite set. Division proceeds on
        // the coefficients c_e(other vars) of z[u]^e from the top down:
        // q_{e-1} = c_e + gamma z[v] q_e, remainder c_min + gamma z[v] q_min.
        let min_u = self.terms.keys().map(|e| e[iu]).min().unwrap();
        let mut by_deg: BTreeMap<i32, BTreeMap<Exps, F>> = BTreeMap::new();
        for (e, c) in &self.terms {
            let mut rest = e.clone();
            let d = rest[iu] - min_u;
            rest[iu] = 0;
            by_deg.entry(d).or_default().insert(rest, c.clone());
        }
        let top = *by_deg.keys().next_back().unwrap();
        let mut quotient = Self::zero(self.sig.clone());
        let mut carry: BTreeMap<Exps, F> = BTreeMap::new();
        for d in (0..=top).rev() {
            let mut cur = by_deg.remove(&d).unwrap_or_default();
            for (e, c) in carry {
                let mut ne = e;
                ne[iv] += 1;
                let c = c.mul_ref(gamma);
                let slot = cur.entry(ne).or_insert_with(F::zero);
                *slot = slot.add_ref(&c);
            }
            cur.retain(|_, c| !c.is_zero());
            if d == 0 {
                if !cur.is_empty() {
                    return None;
                }
                break;
            }
            for (e, c) in &cur {
                let mut ne = e.clone();
                ne[iu] = d - 1 + min_u;
                quotient.terms.insert(ne, c.clone());
            }
            carry = cur;
        }
        Some(quotient)
    }

    /// Exact division by the per-color Vandermonde product `∏_{a<b} (z_a - z_b)`.
    pub fn div_vandermonde(&self) -> Option<Self> {
        let mut p = self.clone();
        for block in self.sig.blocks() {
            for a in block.clone() {
                for b in a + 1..block.end {
                    p = p.div_linear(self.sig.var_at(a), &F::one(), self.sig.var_at(b))?;
                }
            }
        }
        Some(p)
    }

    /// Maps every coefficient through `f` (e.g. a specialisation).
    pub fn map_coeffs<G: Field>(&self, f: impl Fn(&F) -> Result<G>) -> Result<LaurentPoly<G>> {
        let mut r = LaurentPoly::zero(self.sig.clone());
        for (e, c) in &self.terms {
            r.add_term(e.clone(), f(c)?);
        }
        Ok(r)
    }
}

/// All permutations of variable indices that preserve colors, identity first.
pub fn color_permutations(sig: &ColorSignature) -> Vec<Vec<usize>> {
    let n = sig.total();
    let mut out = vec![(0..n).collect::<Vec<usize>>()];
    for block in sig.blocks() {
        let len = block.len();
        if len < 2 {
            continue;
        }
        let local = permutations(len);
        let mut next = Vec::with_capacity(out.len() * local.len());
        for base in &out {
            for lp in &local {
                let mut p = base.clone();
                for (k, &x) in lp.iter().enumerate() {
                    p[block.start + k] = block.start + x;
                }
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

/// A symmetric Laurent polynomial with a declared vertical degree.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymLaurent<F> {
    pub poly: LaurentPoly<F>,
    pub vdeg: i64,
}

impl<F: Field> SymLaurent<F> {
    /// Checks symmetry and homogeneity of degree `vdeg`.
    pub fn new(poly: LaurentPoly<F>, vdeg: i64) -> Result<Self> {
        if !poly.is_symmetric() {
            return Err(Error::InvalidArgument("polynomial is not color-symmetric".into()));
        }
        if let Some(d) = poly.homogeneous_degree() {
            if d != vdeg {
                return Err(Error::InvalidArgument(format!("declared degree {vdeg} but polynomial has degree {d}")));
            }
        } else if !poly.is_zero() {
            return Err(Error::InvalidArgument("polynomial is not homogeneous".into()));
        }
        Ok(SymLaurent { poly, vdeg })
    }

    /// Homogeneous symmetric polynomial, degree read off the terms.
    pub fn from_poly(poly: LaurentPoly<F>) -> Result<Self> {
        let d = poly.homogeneous_degree().unwrap_or(0);
        Self::new(poly, d)
    }

    pub fn zero(sig: ColorSignature, vdeg: i64) -> Self {
        SymLaurent { poly: LaurentPoly::zero(sig), vdeg }
    }

    pub fn sig(&self) -> &ColorSignature {
        self.poly.sig()
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
}

impl fmt::Display for ColorSignature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.counts)
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

    fn sig21() -> ColorSignature {
        ColorSignature::new(vec![2, 1])
    }

    #[test]
    fn variable_indexing() {
        let s = sig21();
        assert_eq!(s.var_index(Var::new(0, 1)), 1);
        assert_eq!(s.var_index(Var::new(1, 0)), 2);
        assert_eq!(s.var_at(2), Var::new(1, 0));
        assert_eq!(s.factorial_product(), 2);
    }

    #[test]
    fn symmetrize_sums_all_permutations() {
        let s = ColorSignature::new(vec![3]);
        let m = LaurentPoly::<Q>::monomial(s.clone(), SmallVec::from_slice(&[2, 0, 0]), q(1));
        let sym = m.symmetrize();
        // each of the 3 positions for the exponent 2 arises twice
        assert_eq!(sym.len(), 3);
        assert!(sym.terms().all(|(_, c)| *c == q(2)));
        assert!(sym.is_symmetric());
        assert!(!m.is_symmetric());
    }

    #[test]
    fn mismatched_signatures() {
        let a = LaurentPoly::<Q>::one(sig21());
        let b = LaurentPoly::<Q>::one(ColorSignature::new(vec![1, 1]));
        assert!(matches!(a.add(&b), Err(Error::SignatureMismatch(..))));
        assert!(matches!(a.mul(&b), Err(Error::SignatureMismatch(..))));
    }

    #[test]
    fn linear_division_round_trip() {
        let s = sig21();
        let x = LaurentPoly::<Q>::var_power(s.clone(), Var::new(0, 0), 1);
        let y = LaurentPoly::<Q>::var_power(s.clone(), Var::new(1, 0), 1);
        let w = LaurentPoly::<Q>::var_power(s.clone(), Var::new(0, 1), -2);
        let gamma = q(3);
        let lin = x.sub(&y.scale(&gamma)).unwrap();
        let base = x.mul(&w).unwrap().add(&y.pow(2)).unwrap().add(&w).unwrap();
        let p = base.mul(&lin.pow(2)).unwrap();
        let back = p.divisible_by_power(Var::new(0, 0), &gamma, Var::new(1, 0), 2).unwrap();
        assert_eq!(back, base);
        assert!(p.divisible_by_power(Var::new(0, 0), &gamma, Var::new(1, 0), 3).is_none());
        assert!(base.div_linear(Var::new(0, 0), &q(2), Var::new(1, 0)).is_none());
    }

    #[test]
    fn substitution_merges_variables() {
        let s = sig21();
        let p = LaurentPoly::<Q>::monomial(s.clone(), SmallVec::from_slice(&[1, 2, -1]), q(5));
        let r = p.substitute_vars(&[(Var::new(0, 1), q(2), Var::new(0, 0)), (Var::new(1, 0), q(3), Var::new(0, 0))]);
        // 5 z1 (2 z1)^2 (3 z1)^-1 = 20/3 z1^2
        let expect = LaurentPoly::monomial(s, SmallVec::from_slice(&[2, 0, 0]), Q::new(20.into(), 3.into()));
        assert_eq!(r, expect);
    }

    #[test]
    fn vandermonde_division() {
        let s = ColorSignature::new(vec![3, 1]);
        let v = vandermonde::<Q>(&s);
        let m = LaurentPoly::<Q>::monomial(s.clone(), SmallVec::from_slice(&[1, -1, 0, 4]), q(1)).symmetrize();
        let p = m.mul(&v).unwrap();
        assert_eq!(p.div_vandermonde().unwrap(), m);
    }

    #[test]
    fn permutations_count() {
        assert_eq!(permutations(4).len(), 24);
        assert_eq!(color_permutations(&ColorSignature::new(vec![2, 3])).len(), 12);
    }
}
