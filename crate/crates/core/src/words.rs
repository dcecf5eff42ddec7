//! Letters `i^(d)`, words, their total order, and the non-increasing basis.

use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::polynomials::{ColorSignature, Exps, LaurentPoly, SymLaurent, Var};
use crate::quiver::Quiver;

/// The letter `i^(d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub vertex: usize,
    pub exp: i64,
}

impl Letter {
    pub fn new(vertex: usize, exp: i64) -> Self {
        Letter { vertex, exp }
    }
}

/// `i^(d) < j^(e)` iff `d > e`, or `d = e` and `i < j`.
impl Ord for Letter {
    fn cmp(&self, other: &Self) -> Ordering {
        other.exp.cmp(&self.exp).then(self.vertex.cmp(&other.vertex))
    }
}

impl PartialOrd for Letter {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A word; the derived order is lexicographic with proper prefixes smaller.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn signature(&self, num_vertices: usize) -> ColorSignature {
        let mut counts = vec![0; num_vertices];
        for l in &self.0 {
            counts[l.vertex] += 1;
        }
        ColorSignature::new(counts)
    }

    /// Sum of the letter exponents.
    pub fn vdeg(&self) -> i64 {
        self.0.iter().map(|l| l.exp).sum()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Adds `s` to every exponent.
    pub fn shifted(&self, s: i64) -> Word {
        Word(self.0.iter().map(|l| Letter::new(l.vertex, l.exp + s)).collect())
    }

    /// The variable that position `a` occupies: the next free slot of its color.
    pub fn slots(&self) -> Vec<Var> {
        let mut used: Vec<usize> = Vec::new();
        self.0
            .iter()
            .map(|l| {
                if used.len() <= l.vertex {
                    used.resize(l.vertex + 1, 0);
                }
                let v = Var::new(l.vertex, used[l.vertex]);
                used[l.vertex] += 1;
                v
            })
            .collect()
    }

    pub fn to_text(&self, names: &[String]) -> String {
        let body: Vec<String> = self.0.iter().map(|l| format!("{}^({})", names[l.vertex], l.exp)).collect();
        format!("[{}]", body.join(" "))
    }

    /// Parses `[i^(2) j^(-1)]`; `column` offsets are reported 1-based.
    pub fn parse(text: &str, names: &[String]) -> Result<Word> {
        Self::parse_at(text, names, 1, 1)
    }

    pub(crate) fn parse_at(text: &str, names: &[String], line: usize, col0: usize) -> Result<Word> {
        let t = text.trim();
        let lead = text.len() - text.trim_start().len();
        let inner = t
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| Error::parse(line, col0 + lead, "a word is written `[i^(d) ...]`"))?;
        let mut letters = Vec::new();
        let mut offset = col0 + lead + 1;
        for tok in inner.split(' ') {
            if tok.is_empty() {
                offset += 1;
                continue;
            }
            let err = |m: String| Error::parse(line, offset, m);
            let (name, rest) = tok.split_once('^').ok_or_else(|| err(format!("expected `vertex^(d)`, got `{tok}`")))?;
            let vertex = names.iter().position(|n| n == name).ok_or_else(|| err(format!("unknown vertex `{name}`")))?;
            let e = rest.strip_prefix('(').and_then(|s| s.strip_suffix(')')).unwrap_or(rest);
            let exp = e.parse().map_err(|_| err(format!("bad exponent `{rest}`")))?;
            letters.push(Letter::new(vertex, exp));
            offset += tok.len() + 1;
        }
        Ok(Word(letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.0.iter().map(|l| format!("{}^({})", l.vertex, l.exp)).collect();
        write!(f, "[{}]", body.join(" "))
    }
}

fn total<F: Field>(quiver: &Quiver<F>, i: usize, j: usize) -> i64 {
    quiver.total(i, j) as i64
}

fn arrows<F: Field>(quiver: &Quiver<F>, i: usize, j: usize) -> i64 {
    quiver.arrows(i, j) as i64
}

/// Does letter `b` of `letters` respect the non-increasing inequality against
/// every earlier letter?
fn last_letter_ok<F: Field>(quiver: &Quiver<F>, letters: &[Letter]) -> bool {
    let b = letters.len() - 1;
    let lb = letters[b];
    let mut acc = 0;
    for a in (0..b).rev() {
        acc += total(quiver, letters[a].vertex, lb.vertex);
        let rhs = lb.exp + acc;
        let la = letters[a];
        if !(la.exp < rhs || (la.exp == rhs && la.vertex >= lb.vertex)) {
            return false;
        }
    }
    true
}

/// For all `a < b`: `d_a < d_b + Σ_{a≤s<b} #_{i_s i_b}`, or equality and `i_a ≥ i_b`.
pub fn is_non_increasing<F: Field>(quiver: &Quiver<F>, w: &Word) -> bool {
    (1..=w.len()).all(|b| last_letter_ok(quiver, &w.0[..b]))
}

/// The associated word of an ordered monomial `∏ z_{i_a •_a}^{-k_a}`, given
/// as `(vertex, k_a)` pairs in order.
pub fn associated_word<F: Field>(quiver: &Quiver<F>, ordered: &[(usize, i64)]) -> Word {
    let n = ordered.len();
    let letters = (0..n)
        .map(|a| {
            let (ia, ka) = ordered[a];
            let later: i64 = ordered[a + 1..].iter().map(|&(it, _)| arrows(quiver, ia, it)).sum();
            let earlier: i64 = ordered[..a].iter().map(|&(is, _)| arrows(quiver, is, ia)).sum();
            Letter::new(ia, ka + later - earlier)
        })
        .collect();
    Word(letters)
}

/// Inverse of [`associated_word`] for a fixed vertex sequence: the `k_a`.
fn word_to_k<F: Field>(quiver: &Quiver<F>, w: &Word) -> Vec<i64> {
    let l = &w.0;
    (0..l.len())
        .map(|a| {
            let later: i64 = l[a + 1..].iter().map(|t| arrows(quiver, l[a].vertex, t.vertex)).sum();
            let earlier: i64 = l[..a].iter().map(|s| arrows(quiver, s.vertex, l[a].vertex)).sum();
            l[a].exp - later + earlier
        })
        .collect()
}

/// Distinct orderings of a multiset, by repeated next-permutation.
fn distinct_orderings(mut items: Vec<(usize, i64)>) -> Vec<Vec<(usize, i64)>> {
    items.sort();
    let mut out = vec![items.clone()];
    loop {
        let n = items.len();
        let Some(i) = (1..n).rev().find(|&i| items[i - 1] < items[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| items[j] > items[i - 1]).unwrap();
        items.swap(i - 1, j);
        items[i..].reverse();
        out.push(items.clone());
    }
}

/// Orderings cap for the brute-force leading-word search.
pub const MAX_ORDERING_VARS: usize = 8;

/// All associated words of a monomial, one per distinct ordering of its
/// `(vertex, k)` multiset. Monomial exponents are `-k`.
pub fn associated_words<F: Field>(quiver: &Quiver<F>, sig: &ColorSignature, exps: &[i32]) -> Result<Vec<Word>> {
    if exps.len() > MAX_ORDERING_VARS {
        return Err(Error::TooManyVariables(exps.len()));
    }
    let items: Vec<(usize, i64)> = (0..exps.len()).map(|k| (sig.var_at(k).vertex, -(exps[k] as i64))).collect();
    Ok(distinct_orderings(items).iter().map(|o| associated_word(quiver, o)).collect())
}

/// The lexicographically largest associated word of a monomial.
pub fn monomial_leading_word<F: Field>(quiver: &Quiver<F>, sig: &ColorSignature, exps: &[i32]) -> Result<Word> {
    Ok(associated_words(quiver, sig, exps)?.into_iter().max().unwrap_or_default())
}

/// `lead(R)`: the largest leading word over the monomials of `R`.
pub fn leading_word<F: Field>(quiver: &Quiver<F>, r: &SymLaurent<F>) -> Result<Word> {
    if r.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let sig = r.sig().clone();
    let blocks = sig.blocks();
    let mut best: Option<Word> = None;
    for (e, _) in r.poly.terms() {
        // one representative per orbit: blocks sorted descending
        if !blocks.iter().all(|b| e[b.clone()].windows(2).all(|p| p[0] >= p[1])) {
            continue;
        }
        let w = monomial_leading_word(quiver, &sig, e)?;
        if best.as_ref().is_none_or(|b| w > *b) {
            best = Some(w);
        }
    }
    Ok(best.expect("symmetric polynomials contain sorted representatives"))
}

/// `Sym μ` for the monomial `μ` whose associated word in the order of `w` is `w`.
pub fn test_polynomial<F: Field>(quiver: &Quiver<F>, w: &Word) -> Result<SymLaurent<F>> {
    if !is_non_increasing(quiver, w) {
        return Err(Error::NotNonIncreasing(w.to_text(quiver.vertices())));
    }
    let sig = w.signature(quiver.num_vertices());
    let ks = word_to_k(quiver, w);
    let mut e: Exps = SmallVec::from_elem(0, sig.total());
    for (v, k) in w.slots().into_iter().zip(ks) {
        e[sig.var_index(v)] = -(k as i32);
    }
    let mu = LaurentPoly::monomial(sig, e, F::one());
    SymLaurent::from_poly(mu.symmetrize())
}

/// Non-increasing words of degree `(sig, d)` with all exponents in `[lo, hi]`,
/// optionally restricted to `lower ≤ w ≤ upper`; sorted descending.
pub fn enumerate_non_increasing<F: Field>(
    quiver: &Quiver<F>,
    sig: &ColorSignature,
    d: i64,
    window: (i64, i64),
    lower: Option<&Word>,
    upper: Option<&Word>,
) -> Vec<Word> {
    let (lo, hi) = window;
    let n = sig.total();
    let mut out = Vec::new();
    if lo > hi || d < lo * n as i64 || d > hi * n as i64 {
        return out;
    }
    let mut remaining: Vec<usize> = sig.counts().to_vec();
    let mut cur: Vec<Letter> = Vec::with_capacity(n);
    // Tracks whether the prefix is still equal to the bound's prefix.
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Field>(
        quiver: &Quiver<F>,
        n: usize,
        left: i64,
        window: (i64, i64),
        bounds: (Option<&Word>, Option<&Word>),
        tight: (bool, bool),
        remaining: &mut Vec<usize>,
        cur: &mut Vec<Letter>,
        out: &mut Vec<Word>,
    ) {
        let pos = cur.len();
        if pos == n {
            if left == 0 {
                let w = Word(cur.clone());
                // a tight prefix equal to a longer bound is smaller than it
                if tight.0 && bounds.0.is_some_and(|b| w < *b) {
                    return;
                }
                out.push(w);
            }
            return;
        }
        let rest = (n - pos - 1) as i64;
        for vertex in 0..remaining.len() {
            if remaining[vertex] == 0 {
                continue;
            }
            for exp in window.0..=window.1 {
                let after = left - exp;
                if after < rest * window.0 || after > rest * window.1 {
                    continue;
                }
                let l = Letter::new(vertex, exp);
                let mut t = tight;
                if t.0 {
                    if let Some(b) = bounds.0 {
                        match b.0.get(pos) {
                            Some(bl) if l < *bl => continue,
                            Some(bl) if l > *bl => t.0 = false,
                            Some(_) => {}
                            None => t.0 = false,
                        }
                    }
                }
                if t.1 {
                    if let Some(b) = bounds.1 {
                        match b.0.get(pos) {
                            Some(bl) if l > *bl => continue,
                            Some(bl) if l < *bl => t.1 = false,
                            Some(_) => {}
                            None => continue,
                        }
                    }
                }
                cur.push(l);
                if last_letter_ok(quiver, cur) {
                    remaining[vertex] -= 1;
                    rec(quiver, n, after, window, bounds, t, remaining, cur, out);
                    remaining[vertex] += 1;
                }
                cur.pop();
            }
        }
    }
    rec(quiver, n, d, window, (lower, upper), (lower.is_some(), upper.is_some()), &mut remaining, &mut cur, &mut out);
    out.sort_by(|a, b| b.cmp(a));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::catalog;
    use crate::scalars::ParamScalar;
    use proptest::prelude::*;

    fn w(letters: &[(usize, i64)]) -> Word {
        Word(letters.iter().map(|&(v, e)| Letter::new(v, e)).collect())
    }

    #[test]
    fn letter_and_word_order() {
        assert!(Letter::new(0, 3) < Letter::new(0, 2));
        assert!(Letter::new(0, 0) < Letter::new(1, 0));
        assert!(w(&[(0, 0)]) < w(&[(0, 0), (1, 5)]));
        assert!(w(&[(0, 1), (1, 0)]) > w(&[(0, 2), (1, 0)]));
    }

    #[test]
    fn non_increasing_examples() {
        let (a2, _) = catalog::a2();
        assert!(is_non_increasing(&a2, &w(&[(0, 7)])));
        assert!(!is_non_increasing(&a2, &w(&[(0, 2), (1, 0)])));
        let (j1, _) = catalog::jordan(1);
        assert!(is_non_increasing(&j1, &w(&[(0, 0), (0, 1)])));
    }

    #[test]
    fn associated_words_a2() {
        let (a2, _) = catalog::a2();
        assert_eq!(associated_word(&a2, &[(0, 0), (1, 0)]), w(&[(0, 1), (1, -1)]));
        let rev = associated_word(&a2, &[(1, 0), (0, 0)]);
        assert_eq!(rev, w(&[(1, 0), (0, 0)]));
        assert!(is_non_increasing(&a2, &rev));
        assert!(!is_non_increasing(&a2, &w(&[(0, 1), (1, -1)])));
        let sig = ColorSignature::new(vec![1, 1]);
        assert_eq!(monomial_leading_word(&a2, &sig, &[0, 0]).unwrap(), rev);
    }

    #[test]
    fn single_variable_leading_word() {
        let (j1, _) = catalog::jordan(1);
        let sig = ColorSignature::new(vec![1]);
        let r = SymLaurent::from_poly(LaurentPoly::<ParamScalar>::var_power(sig, Var::new(0, 0), -4)).unwrap();
        assert_eq!(leading_word(&j1, &r).unwrap(), w(&[(0, 4)]));
        let t = test_polynomial(&j1, &w(&[(0, 4)])).unwrap();
        assert_eq!(t, r);
        let zero = SymLaurent::<ParamScalar>::zero(ColorSignature::new(vec![1]), 0);
        assert_eq!(leading_word(&j1, &zero), Err(Error::ZeroPolynomial));
    }

    #[test]
    fn text_round_trip() {
        let names = vec!["i".to_string(), "j".to_string()];
        let word = w(&[(0, 2), (1, -1), (0, 0)]);
        let s = word.to_text(&names);
        assert_eq!(s, "[i^(2) j^(-1) i^(0)]");
        assert_eq!(Word::parse(&s, &names).unwrap(), word);
        assert_eq!(Word::parse("[]", &names).unwrap(), Word::empty());
        assert!(matches!(Word::parse("[i^(2) k^(0)]", &names), Err(Error::Parse { column: 8, .. })));
    }

    #[test]
    fn enumeration_matches_brute_force() {
        let (a2, _) = catalog::a2();
        let sig = ColorSignature::new(vec![1, 1]);
        let got = enumerate_non_increasing(&a2, &sig, 0, (-2, 2), None, None);
        let mut expect = Vec::new();
        for (u, v) in [(0, 1), (1, 0)] {
            for d in -2..=2 {
                let cand = w(&[(u, d), (v, -d)]);
                if is_non_increasing(&a2, &cand) {
                    expect.push(cand);
                }
            }
        }
        expect.sort_by(|a, b| b.cmp(a));
        assert_eq!(got, expect);
        assert!(!got.is_empty());
        let single = enumerate_non_increasing(&a2, &ColorSignature::unit(2, 0), 5, (-9, 9), None, None);
        assert_eq!(single, vec![w(&[(0, 5)])]);
        assert!(enumerate_non_increasing(&a2, &sig, 0, (3, 9), None, None).is_empty());
    }

    #[test]
    fn enumeration_respects_bounds() {
        let (j1, _) = catalog::jordan(1);
        let sig = ColorSignature::new(vec![3]);
        let all = enumerate_non_increasing(&j1, &sig, 1, (-6, 6), None, None);
        let lower = all[all.len() / 2].clone();
        let upper = all[all.len() / 4].clone();
        let some = enumerate_non_increasing(&j1, &sig, 1, (-6, 6), Some(&lower), Some(&upper));
        let expect: Vec<Word> = all.iter().filter(|x| **x >= lower && **x <= upper).cloned().collect();
        assert_eq!(some, expect);
    }

    fn quiver_strategy() -> impl Strategy<Value = (usize, Vec<(usize, usize)>)> {
        (1usize..=3).prop_flat_map(|nv| {
            let edge = (0..nv, 0..nv);
            (Just(nv), proptest::collection::vec(edge, 0..=4))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn word_order_is_total(a in proptest::collection::vec((0usize..2, -3i64..3), 0..4),
                               b in proptest::collection::vec((0usize..2, -3i64..3), 0..4),
                               c in proptest::collection::vec((0usize..2, -3i64..3), 0..4)) {
            let (a, b, c) = (w(&a), w(&b), w(&c));
            let n = [a < b, a == b, a > b].iter().filter(|x| **x).count();
            prop_assert_eq!(n, 1);
            if a < b && b < c { prop_assert!(a < c); }
        }

        #[test]
        fn unique_non_increasing_associated_word((nv, edges) in quiver_strategy(),
                                                 exps in proptest::collection::vec((0usize..3, -3i32..3), 1..=4)) {
            let quiver = crate::quiver::Quiver::<num_rational::BigRational>::new(
                (0..nv).map(|k| format!("v{k}")).collect(),
                edges.iter().map(|&(src, dst)| crate::quiver::Edge { src, dst }).collect(),
                num_rational::BigRational::from_integer(7.into()),
                edges.iter().enumerate().map(|(k, _)| num_rational::BigRational::from_integer((k as i64 + 2).into())).collect(),
            ).unwrap();
            let mut counts = vec![0; nv];
            let mut vars: Vec<(usize, i32)> = exps.iter().map(|&(v, e)| (v % nv, e)).collect();
            vars.sort_by_key(|x| x.0);
            for (v, _) in &vars { counts[*v] += 1; }
            let sig = ColorSignature::new(counts);
            let e: Vec<i32> = vars.iter().map(|x| x.1).collect();
            let words = associated_words(&quiver, &sig, &e).unwrap();
            let ni: Vec<&Word> = words.iter().filter(|x| is_non_increasing(&quiver, x)).collect();
            prop_assert_eq!(ni.len(), 1);
            prop_assert_eq!(ni[0], words.iter().max().unwrap());
        }

        #[test]
        fn test_polynomial_round_trip(d in proptest::collection::vec(-3i64..3, 3)) {
            let (kr, _) = catalog::kronecker();
            let sig = ColorSignature::new(vec![2, 1]);
            let total: i64 = d.iter().sum();
            for word in enumerate_non_increasing(&kr, &sig, total, (-4, 4), None, None).into_iter().take(6) {
                let t = test_polynomial(&kr, &word).unwrap();
                prop_assert_eq!(leading_word(&kr, &t).unwrap(), word);
            }
        }
    }
}
