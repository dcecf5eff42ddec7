//! Sparse multivariate Laurent polynomials over the integers, keyed by
//! exponent vectors in lexicographic order, plus exact division and gcd.
//!
//! All routines assume every key has the same length `nvars`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use smallvec::SmallVec;

pub type Mono = SmallVec<[i32; 4]>;
pub type Raw = BTreeMap<Mono, BigInt>;

pub fn constant(c: BigInt, nvars: usize) -> Raw {
    let mut r = Raw::new();
    if !c.is_zero() {
        r.insert(zero_mono(nvars), c);
    }
    r
}

pub fn zero_mono(nvars: usize) -> Mono {
    SmallVec::from_elem(0, nvars)
}

pub fn is_one(a: &Raw) -> bool {
    a.len() == 1 && a.iter().next().is_some_and(|(m, c)| m.iter().all(|&e| e == 0) && c.is_one())
}

pub fn is_constant(a: &Raw) -> bool {
    a.keys().all(|m| m.iter().all(|&e| e == 0))
}

fn add_term(r: &mut Raw, m: Mono, c: BigInt) {
    if c.is_zero() {
        return;
    }
    match r.entry(m) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

pub fn add(a: &Raw, b: &Raw) -> Raw {
    let (big, small) = if a.len() >= b.len() { (a, b) } else { (b, a) };
    let mut r = big.clone();
    for (m, c) in small {
        add_term(&mut r, m.clone(), c.clone());
    }
    r
}

pub fn neg(a: &Raw) -> Raw {
    a.iter().map(|(m, c)| (m.clone(), -c)).collect()
}

pub fn sub(a: &Raw, b: &Raw) -> Raw {
    let mut r = a.clone();
    for (m, c) in b {
        add_term(&mut r, m.clone(), -c);
    }
    r
}

pub fn mono_mul(a: &Mono, b: &Mono) -> Mono {
    a.iter().zip(b.iter()).map(|(x, y)| x + y).collect()
}

pub fn mul(a: &Raw, b: &Raw) -> Raw {
    if let Some(r) = mul_packed(a, b) {
        return r;
    }
    let mut r = Raw::new();
    for (ma, ca) in a {
        for (mb, cb) in b {
            add_term(&mut r, mono_mul(ma, mb), ca * cb);
        }
    }
    r
}

/// Exponent ranges of the terms of `a`: `(min, max)` per variable.
fn exp_bounds(a: &Raw) -> Option<Vec<(i32, i32)>> {
    let first = a.keys().next()?;
    let mut b: Vec<(i32, i32)> = first.iter().map(|&e| (e, e)).collect();
    for m in a.keys() {
        for (x, &e) in b.iter_mut().zip(m.iter()) {
            x.0 = x.0.min(e);
            x.1 = x.1.max(e);
        }
    }
    Some(b)
}

/// `a * b` with monomials packed into 16-bit fields of a `u64` and machine
/// integer coefficients. `None` when the inputs do not fit or a sum overflows.
fn mul_packed(a: &Raw, b: &Raw) -> Option<Raw> {
    let (ba, bb) = (exp_bounds(a)?, exp_bounds(b)?);
    let n = ba.len();
    if n > 4 || bb.len() != n || a.len() * b.len() < 16 {
        return None;
    }
    let base: Vec<i32> = ba.iter().zip(&bb).map(|(x, y)| x.0 + y.0).collect();
    if ba.iter().zip(&bb).any(|(x, y)| (x.1 - x.0) + (y.1 - y.0) >= 1 << 16) {
        return None;
    }
    let pack =
        |m: &Mono, lo: &[(i32, i32)]| -> u64 { m.iter().zip(lo).enumerate().fold(0u64, |k, (v, (&e, l))| k | (((e - l.0) as u64) << (16 * v))) };
    let small = |r: &Raw, lo: &[(i32, i32)]| -> Option<Vec<(u64, i64)>> { r.iter().map(|(m, c)| Some((pack(m, lo), c.to_i64()?))).collect() };
    let (pa, pb) = (small(a, &ba)?, small(b, &bb)?);
    let mut prods: Vec<(u64, i128)> = Vec::with_capacity(pa.len() * pb.len());
    for &(ka, ca) in &pa {
        for &(kb, cb) in &pb {
            // fields cannot carry: each sum stays below 2^16
            prods.push((ka + kb, ca as i128 * cb as i128));
        }
    }
    prods.sort_unstable_by_key(|p| p.0);
    let mut out = Raw::new();
    let mut it = prods.into_iter().peekable();
    while let Some((k, mut c)) = it.next() {
        while let Some(&(k2, c2)) = it.peek() {
            if k2 != k {
                break;
            }
            c = c.checked_add(c2)?;
            it.next();
        }
        if c != 0 {
            let m: Mono = (0..n).map(|v| ((k >> (16 * v)) & 0xffff) as i32 + base[v]).collect();
            out.insert(m, BigInt::from(c));
        }
    }
    Some(out)
}

pub fn shift(a: &Raw, by: &Mono) -> Raw {
    a.iter().map(|(m, c)| (mono_mul(m, by), c.clone())).collect()
}

/// Componentwise minimum exponent; zero vector for the zero polynomial.
pub fn min_exps(a: &Raw, nvars: usize) -> Mono {
    let mut it = a.keys();
    let Some(first) = it.next() else {
        return zero_mono(nvars);
    };
    let mut m = first.clone();
    for k in it {
        for (x, y) in m.iter_mut().zip(k.iter()) {
            *x = (*x).min(*y);
        }
    }
    m
}

pub fn neg_mono(m: &Mono) -> Mono {
    m.iter().map(|x| -x).collect()
}

pub fn content(a: &Raw) -> BigInt {
    let mut g = BigInt::zero();
    for c in a.values() {
        g = g.gcd(c);
        if g.is_one() {
            break;
        }
    }
    g
}

pub fn leading(a: &Raw) -> Option<(&Mono, &BigInt)> {
    a.iter().next_back()
}

fn normalize_sign(a: Raw) -> Raw {
    match leading(&a) {
        Some((_, c)) if c.is_negative() => neg(&a),
        _ => a,
    }
}

/// Exact quotient of two Laurent polynomials, or `None` if `b` does not divide `a`.
pub fn div_exact(a: &Raw, b: &Raw, nvars: usize) -> Option<Raw> {
    if b.is_empty() {
        return None;
    }
    if a.is_empty() {
        return Some(Raw::new());
    }
    if b.len() == 1 {
        let (mb, cb) = b.iter().next().unwrap();
        let inv = neg_mono(mb);
        let mut r = Raw::new();
        for (m, c) in a {
            let (q, rem) = c.div_rem(cb);
            if !rem.is_zero() {
                return None;
            }
            r.insert(mono_mul(m, &inv), q);
        }
        return Some(r);
    }
    let ma = min_exps(a, nvars);
    let mb = min_exps(b, nvars);
    let a0 = shift(a, &neg_mono(&ma));
    let b0 = shift(b, &neg_mono(&mb));
    let q0 = div_exact_poly(a0, &b0)?;
    let delta: Mono = ma.iter().zip(mb.iter()).map(|(x, y)| x - y).collect();
    Some(shift(&q0, &delta))
}

/// Lex leading-term division for polynomials with non-negative exponents.
fn div_exact_poly(mut a: Raw, b: &Raw) -> Option<Raw> {
    let (lmb, lcb) = leading(b)?;
    let (lmb, lcb) = (lmb.clone(), lcb.clone());
    let mut q = Raw::new();
    while let Some((lma, lca)) = leading(&a) {
        if lma.iter().zip(lmb.iter()).any(|(x, y)| x < y) {
            return None;
        }
        let (c, rem) = lca.div_rem(&lcb);
        if !rem.is_zero() {
            return None;
        }
        let m: Mono = lma.iter().zip(lmb.iter()).map(|(x, y)| x - y).collect();
        for (mb, cb) in b {
            add_term(&mut a, mono_mul(mb, &m), -(cb * &c));
        }
        q.insert(m, c);
    }
    Some(q)
}

fn deg_in(a: &Raw, v: usize) -> i32 {
    a.keys().map(|m| m[v]).max().unwrap_or(-1)
}

fn coeffs_in(a: &Raw, v: usize) -> BTreeMap<i32, Raw> {
    let mut out: BTreeMap<i32, Raw> = BTreeMap::new();
    for (m, c) in a {
        let mut k = m.clone();
        let d = k[v];
        k[v] = 0;
        out.entry(d).or_default().insert(k, c.clone());
    }
    out
}

fn var_power(v: usize, e: i32, nvars: usize) -> Mono {
    let mut m = zero_mono(nvars);
    m[v] = e;
    m
}

/// Content with respect to `v`: gcd of the coefficients of the powers of `v`.
fn content_in(a: &Raw, v: usize, nvars: usize) -> Raw {
    let mut g = Raw::new();
    for c in coeffs_in(a, v).into_values() {
        g = gcd_laurent(&g, &c, nvars);
        if is_one(&g) {
            break;
        }
    }
    g
}

fn strip(a: &Raw, nvars: usize) -> Raw {
    let m = min_exps(a, nvars);
    if m.iter().all(|&e| e == 0) {
        a.clone()
    } else {
        shift(a, &neg_mono(&m))
    }
}

/// `a` divided by its content in `v`, with monomial factors removed.
fn primitive_in(a: &Raw, v: usize, nvars: usize) -> Raw {
    let c = content_in(a, v, nvars);
    strip(&div_exact(a, &c, nvars).expect("content divides"), nvars)
}

fn prem(f: &Raw, g: &Raw, v: usize, nvars: usize) -> Raw {
    let dg = deg_in(g, v);
    let lcg = coeffs_in(g, v).remove(&dg).unwrap();
    let mut r = f.clone();
    let mut e = deg_in(f, v) - dg + 1;
    while !r.is_empty() && deg_in(&r, v) >= dg {
        let dr = deg_in(&r, v);
        let lcr = coeffs_in(&r, v).remove(&dr).unwrap();
        let shifted = shift(g, &var_power(v, dr - dg, nvars));
        r = sub(&mul(&lcg, &r), &mul(&lcr, &shifted));
        e -= 1;
    }
    for _ in 0..e.max(0) {
        r = mul(&lcg, &r);
    }
    r
}

/// Greatest common divisor in the Laurent polynomial ring, i.e. up to a
/// signed monomial. The result has minimum exponent zero in every variable
/// and a positive leading coefficient; `gcd(0, 0) = 0`.
pub fn gcd_laurent(a: &Raw, b: &Raw, nvars: usize) -> Raw {
    if a.is_empty() {
        return normalize_sign(strip(b, nvars));
    }
    if b.is_empty() {
        return normalize_sign(strip(a, nvars));
    }
    let a = strip(a, nvars);
    let b = strip(b, nvars);
    if is_constant(&a) || is_constant(&b) {
        return constant(content(&a).gcd(&content(&b)), nvars);
    }
    if a == b {
        return normalize_sign(a);
    }
    if b.len() <= a.len() && div_exact(&a, &b, nvars).is_some() {
        return normalize_sign(b);
    }
    if a.len() < b.len() && div_exact(&b, &a, nvars).is_some() {
        return normalize_sign(a);
    }
    if coprime_by_evaluation(&a, &b, nvars) {
        return constant(content(&a).gcd(&content(&b)), nvars);
    }
    let v = (0..nvars).find(|&v| a.keys().chain(b.keys()).any(|m| m[v] != 0)).expect("non-constant polynomial has a variable");
    if deg_in(&a, v) == 0 {
        return gcd_laurent(&a, &content_in(&b, v, nvars), nvars);
    }
    if deg_in(&b, v) == 0 {
        return gcd_laurent(&content_in(&a, v, nvars), &b, nvars);
    }
    let c = gcd_laurent(&content_in(&a, v, nvars), &content_in(&b, v, nvars), nvars);
    let mut f = primitive_in(&a, v, nvars);
    let mut g = primitive_in(&b, v, nvars);
    if deg_in(&f, v) < deg_in(&g, v) {
        std::mem::swap(&mut f, &mut g);
    }
    let prim = loop {
        let r = prem(&f, &g, v, nvars);
        if r.is_empty() {
            break g;
        }
        let r = primitive_in(&r, v, nvars);
        if deg_in(&r, v) == 0 {
            break constant(BigInt::one(), nvars);
        }
        f = g;
        g = r;
    };
    normalize_sign(strip(&mul(&c, &prim), nvars))
}

/// `a` as a univariate polynomial in `v` with the other variables set to `point`.
const PRIME: u64 = (1 << 61) - 1;

fn mul_mod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b);
        }
        b = mul_mod(b, b);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64) -> u64 {
    pow_mod(a, PRIME - 2)
}

fn reduce_mod(c: &BigInt) -> u64 {
    let r = c.mod_floor(&BigInt::from(PRIME));
    r.to_u64().expect("reduced below the prime")
}

/// Coefficients in `v` of `a` mod the prime, with the other variables set to `point`.
fn image_in(a: &Raw, v: usize, point: &[u64]) -> Vec<u64> {
    let mut out = vec![0u64; (deg_in(a, v) + 1).max(0) as usize];
    for (m, c) in a {
        let mut t = reduce_mod(c);
        for (w, &e) in m.iter().enumerate() {
            if w != v && e != 0 {
                t = mul_mod(t, pow_mod(point[w], e as u64));
            }
        }
        let slot = &mut out[m[v] as usize];
        *slot = (*slot + t) % PRIME;
    }
    out
}

/// Degree of the gcd of two univariate polynomials over the prime field.
fn univariate_gcd_degree(a: &[u64], b: &[u64]) -> usize {
    let trim = |p: &mut Vec<u64>| {
        while p.last() == Some(&0) {
            p.pop();
        }
    };
    let (mut f, mut g) = (a.to_vec(), b.to_vec());
    trim(&mut f);
    trim(&mut g);
    if f.len() < g.len() {
        std::mem::swap(&mut f, &mut g);
    }
    while !g.is_empty() {
        let inv = inv_mod(*g.last().unwrap());
        while f.len() >= g.len() {
            let c = mul_mod(*f.last().unwrap(), inv);
            let off = f.len() - g.len();
            for (k, &x) in g.iter().enumerate() {
                f[off + k] = (f[off + k] + PRIME - mul_mod(c, x)) % PRIME;
            }
            f.pop();
            trim(&mut f);
        }
        std::mem::swap(&mut f, &mut g);
    }
    f.len().saturating_sub(1)
}

/// A sufficient test that two polynomials (minimum exponents zero) share no
/// non-monomial factor. For each variable `v`, the other variables are set
/// to values where both leading coefficients in `v` survive mod the prime;
/// any common factor of positive `v`-degree then survives in the images, so
/// a constant image gcd rules it out.
fn coprime_by_evaluation(a: &Raw, b: &Raw, nvars: usize) -> bool {
    const POINTS: [u64; 6] = [2, 3, 5, 7, 11, 13];
    for v in 0..nvars {
        let (da, db) = (deg_in(a, v), deg_in(b, v));
        if da == 0 || db == 0 {
            continue;
        }
        let lca = coeffs_in(a, v).remove(&da).unwrap();
        let lcb = coeffs_in(b, v).remove(&db).unwrap();
        let mut settled = false;
        for shift in 0..POINTS.len() {
            let point: Vec<u64> = (0..nvars).map(|w| POINTS[(w + shift) % POINTS.len()] + 17 * shift as u64).collect();
            let nonzero = |lc: &Raw| image_in(lc, v, &point).iter().any(|&c| c != 0);
            if !nonzero(&lca) || !nonzero(&lcb) {
                continue;
            }
            // an unlucky point is only inconclusive
            if univariate_gcd_degree(&image_in(a, v, &point), &image_in(b, v, &point)) == 0 {
                settled = true;
                break;
            }
        }
        if !settled {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(&[i32], i64)]) -> Raw {
        let mut r = Raw::new();
        for (m, c) in terms {
            add_term(&mut r, m.iter().copied().collect(), BigInt::from(*c));
        }
        r
    }

    #[test]
    fn gcd_of_products() {
        // (x + y)(x - 2) and (x + y)(y + 3)
        let xy = p(&[(&[1, 0], 1), (&[0, 1], 1)]);
        let a = mul(&xy, &p(&[(&[1, 0], 1), (&[0, 0], -2)]));
        let b = mul(&xy, &p(&[(&[0, 1], 1), (&[0, 0], 3)]));
        assert_eq!(gcd_laurent(&a, &b, 2), xy);
    }

    #[test]
    fn gcd_with_integer_content() {
        let a = p(&[(&[2], 6), (&[0], -6)]); // 6(x^2 - 1)
        let b = p(&[(&[1], 4), (&[0], 4)]); // 4(x + 1)
        assert_eq!(gcd_laurent(&a, &b, 1), p(&[(&[1], 2), (&[0], 2)]));
    }

    #[test]
    fn coprime_gives_one() {
        let a = p(&[(&[1, 0], 1), (&[0, 1], 1)]);
        let b = p(&[(&[1, 0], 1), (&[0, 1], -1)]);
        assert_eq!(gcd_laurent(&a, &b, 2), constant(BigInt::one(), 2));
    }

    #[test]
    fn exact_division_detects_remainder() {
        let a = p(&[(&[2], 1), (&[0], -1)]);
        let b = p(&[(&[1], 1), (&[0], -1)]);
        assert_eq!(div_exact(&a, &b, 1), Some(p(&[(&[1], 1), (&[0], 1)])));
        let c = p(&[(&[1], 1), (&[0], -2)]);
        assert_eq!(div_exact(&a, &c, 1), None);
    }

    #[test]
    fn laurent_division_shifts_back() {
        // (x - x^-1) / (x^-1 + x^-2) = x^2 - x
        let a = p(&[(&[1], 1), (&[-1], -1)]);
        let b = p(&[(&[-1], 1), (&[-2], 1)]);
        assert_eq!(div_exact(&a, &b, 1), Some(p(&[(&[2], 1), (&[1], -1)])));
    }

    #[test]
    fn packed_product_matches_schoolbook() {
        let mut x: u64 = 12345;
        let mut next = |m: u64| {
            x = x.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (x >> 33) % m
        };
        for _ in 0..20 {
            let mut poly = || {
                let mut r = Raw::new();
                for _ in 0..8 {
                    let m: Mono = (0..3).map(|_| next(9) as i32 - 4).collect();
                    add_term(&mut r, m, BigInt::from(next(7) as i64 - 3));
                }
                r
            };
            let (a, b) = (poly(), poly());
            let mut slow = Raw::new();
            for (ma, ca) in &a {
                for (mb, cb) in &b {
                    add_term(&mut slow, mono_mul(ma, mb), ca * cb);
                }
            }
            assert_eq!(mul(&a, &b), slow);
        }
    }
}
