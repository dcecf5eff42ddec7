//! Exact rational functions in a finite set of named parameters.
//!
//! A [`ParamScalar`] is a reduced fraction `num / den` of Laurent polynomials
//! with integer coefficients. Canonical form, which makes structural
//! equality coincide with field equality:
//! * `gcd(num, den)` is a unit (a signed Laurent monomial),
//! * `den` has minimum exponent zero in every parameter,
//! * the leading coefficient of `den` under the lexicographic order of the
//!   ring's parameter list is positive.
//!
//! Scalars without any parameter dependence carry no ring, so integers mix
//! freely with scalars from any ring.

mod parse;
pub(crate) mod raw;

use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::field::{Field, FlatTerms};
use crate::modp::Fp;
pub use parse::parse_expr;
use raw::Raw;

/// Ordered list of parameter names; the order fixes the monomial order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParamRing {
    names: Vec<String>,
}

impl ParamRing {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Result<Arc<Self>> {
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (k, n) in names.iter().enumerate() {
            let valid = n.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_') && n.chars().all(|c| c.is_alphanumeric() || c == '_');
            if !valid {
                return Err(Error::InvalidArgument(format!("invalid parameter name `{n}`")));
            }
            if names[..k].contains(n) {
                return Err(Error::InvalidArgument(format!("duplicate parameter `{n}`")));
            }
        }
        Ok(Arc::new(ParamRing { names }))
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// The parameter called `name` as a scalar.
    pub fn var(self: &Arc<Self>, name: &str) -> Result<ParamScalar> {
        let k = self.index_of(name).ok_or_else(|| Error::InvalidArgument(format!("unknown parameter `{name}`")))?;
        let mut m = raw::zero_mono(self.len());
        m[k] = 1;
        let mut num = Raw::new();
        num.insert(m, BigInt::one());
        Ok(ParamScalar { ring: Some(self.clone()), num, den: raw::constant(BigInt::one(), self.len()) })
    }

    /// Parses an expression over this ring.
    pub fn parse(self: &Arc<Self>, text: &str) -> Result<ParamScalar> {
        self.parse_at(text, 1)
    }

    pub fn parse_at(self: &Arc<Self>, text: &str, line: usize) -> Result<ParamScalar> {
        let resolve = |name: &str| self.var(name).ok();
        parse_expr(text, line, &resolve)
    }
}

/// Laurent polynomial in the ring parameters with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ParamPoly {
    ring: Option<Arc<ParamRing>>,
    terms: Raw,
}

impl ParamPoly {
    pub fn ring(&self) -> Option<&Arc<ParamRing>> {
        self.ring.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms as (exponent vector, coefficient), descending in lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&[i32], &BigInt)> {
        self.terms.iter().rev().map(|(m, c)| (m.as_slice(), c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_raw(f, &self.terms, self.ring.as_deref())
    }
}

fn write_raw(f: &mut fmt::Formatter<'_>, terms: &Raw, ring: Option<&ParamRing>) -> fmt::Result {
    if terms.is_empty() {
        return write!(f, "0");
    }
    for (k, (m, c)) in terms.iter().rev().enumerate() {
        if k > 0 {
            write!(f, " + ")?;
        }
        write!(f, "{c}")?;
        if let Some(ring) = ring {
            for (name, e) in ring.names.iter().zip(m.iter()) {
                if *e != 0 {
                    write!(f, "*{name}^{e}")?;
                }
            }
        }
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct ParamScalar {
    ring: Option<Arc<ParamRing>>,
    num: Raw,
    den: Raw,
}

fn same_ring(a: &Arc<ParamRing>, b: &Arc<ParamRing>) -> bool {
    Arc::ptr_eq(a, b) || a.names == b.names
}

fn unify(a: &Option<Arc<ParamRing>>, b: &Option<Arc<ParamRing>>) -> Option<Arc<ParamRing>> {
    match (a, b) {
        (Some(x), Some(y)) => {
            assert!(same_ring(x, y), "scalars from different parameter rings: {:?} vs {:?}", x.names, y.names);
            Some(x.clone())
        }
        (Some(x), None) | (None, Some(x)) => Some(x.clone()),
        (None, None) => None,
    }
}

/// Re-keys a ring-free constant polynomial to `n` variables.
fn lift(r: &Raw, n: usize) -> std::borrow::Cow<'_, Raw> {
    match r.keys().next() {
        Some(m) if m.len() != n => std::borrow::Cow::Owned(r.values().map(|c| (raw::zero_mono(n), c.clone())).collect()),
        _ => std::borrow::Cow::Borrowed(r),
    }
}

impl ParamScalar {
    fn nvars(&self) -> usize {
        self.ring.as_ref().map_or(0, |r| r.len())
    }

    pub fn ring(&self) -> Option<&Arc<ParamRing>> {
        self.ring.as_ref()
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        ParamScalar { ring: None, num: raw::constant(n.into(), 0), den: raw::constant(BigInt::one(), 0) }
    }

    pub fn numerator(&self) -> ParamPoly {
        ParamPoly { ring: self.ring.clone(), terms: self.num.clone() }
    }

    pub fn denominator(&self) -> ParamPoly {
        ParamPoly { ring: self.ring.clone(), terms: self.den.clone() }
    }

    /// Builds `num / den` in canonical form.
    pub fn from_polys(num: &ParamPoly, den: &ParamPoly) -> Result<Self> {
        let ring = unify(&num.ring, &den.ring);
        let n = ring.as_ref().map_or(0, |r| r.len());
        Self::reduce(ring, lift(&num.terms, n).into_owned(), lift(&den.terms, n).into_owned())
    }

    /// True iff the denominator is 1, i.e. the value is a Laurent polynomial.
    pub fn is_laurent(&self) -> bool {
        raw::is_one(&self.den)
    }

    /// True iff the value is a nonzero constant times a monomial.
    pub fn is_monomial(&self) -> bool {
        self.num.len() == 1 && self.den.len() == 1
    }

    fn canon(ring: Option<Arc<ParamRing>>, num: Raw, den: Raw) -> Self {
        let constant = raw::is_constant(&num) && raw::is_constant(&den);
        if constant && ring.is_some() {
            let strip = |r: Raw| -> Raw { r.into_values().map(|c| (raw::zero_mono(0), c)).collect() };
            return ParamScalar { ring: None, num: strip(num), den: strip(den) };
        }
        ParamScalar { ring, num, den }
    }

    fn reduce(ring: Option<Arc<ParamRing>>, num: Raw, den: Raw) -> Result<Self> {
        let n = ring.as_ref().map_or(0, |r| r.len());
        if den.is_empty() {
            return Err(Error::DivisionByZero);
        }
        if num.is_empty() {
            return Ok(Self::zero());
        }
        let (mut num, mut den) = (num, den);
        if den.len() > 1 {
            let g = raw::gcd_laurent(&num, &den, n);
            if !raw::is_one(&g) {
                num = raw::div_exact(&num, &g, n).expect("gcd divides numerator");
                den = raw::div_exact(&den, &g, n).expect("gcd divides denominator");
            }
        }
        let shift = raw::neg_mono(&raw::min_exps(&den, n));
        if shift.iter().any(|&e| e != 0) {
            num = raw::shift(&num, &shift);
            den = raw::shift(&den, &shift);
        }
        if den.len() == 1 {
            let c = den.values().next().unwrap().clone();
            let g = raw::content(&num).gcd(&c);
            let g = if c.is_negative() { -g } else { g };
            if !g.is_one() {
                num = num.into_iter().map(|(m, x)| (m, x / &g)).collect();
                den = den.into_iter().map(|(m, x)| (m, x / &g)).collect();
            }
        } else if raw::leading(&den).is_some_and(|(_, c)| c.is_negative()) {
            num = raw::neg(&num);
            den = raw::neg(&den);
        }
        Ok(Self::canon(ring, num, den))
    }

    pub fn checked_div(&self, rhs: &Self) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let ring = unify(&self.ring, &rhs.ring);
        let n = ring.as_ref().map_or(0, |r| r.len());
        let num = raw::mul(&lift(&self.num, n), &lift(&rhs.den, n));
        let den = raw::mul(&lift(&self.den, n), &lift(&rhs.num, n));
        Self::reduce(ring, num, den)
    }

    /// Evaluates at `values[k]` for the k-th ring parameter, in any field.
    pub fn eval<F: Field>(&self, values: &[F]) -> Result<F> {
        let n = self.nvars();
        if values.len() < n {
            return Err(Error::InvalidArgument(format!("{} values for {} parameters", values.len(), n)));
        }
        let mut cache: Vec<std::collections::HashMap<i32, F>> = vec![Default::default(); n];
        let mut eval_raw = |r: &Raw| -> Result<F> {
            let mut acc = F::zero();
            for (m, c) in r {
                let mut t = F::from_bigint(c.clone());
                for (v, &e) in m.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    let p = match cache[v].get(&e) {
                        Some(p) => p.clone(),
                        None => {
                            let p = values[v].powi(e as i64).ok_or_else(|| {
                                let name = self.ring.as_ref().map(|r| r.names[v].clone()).unwrap_or_default();
                                Error::SpecializationPole(format!("{name} = 0"))
                            })?;
                            cache[v].insert(e, p.clone());
                            p
                        }
                    };
                    t = t.mul_ref(&p);
                }
                acc.add_assign_ref(&t);
            }
            Ok(acc)
        };
        let num = eval_raw(&self.num)?;
        let den = eval_raw(&self.den)?;
        num.div_ref(&den).ok_or_else(|| Error::SpecializationPole(format!("{}", self.denominator())))
    }

    /// Substitutes each named parameter by a scalar; parameters absent from
    /// `map` are looked up by name in `target`.
    pub fn substitute(&self, map: &[(&str, ParamScalar)], target: &Arc<ParamRing>) -> Result<ParamScalar> {
        let Some(ring) = &self.ring else {
            return Ok(self.clone());
        };
        let values = ring
            .names
            .iter()
            .map(|name| match map.iter().find(|(k, _)| k == name) {
                Some((_, v)) => Ok(v.clone()),
                None => target.var(name),
            })
            .collect::<Result<Vec<_>>>()?;
        self.eval(&values)
    }
}

impl PartialEq for ParamScalar {
    fn eq(&self, other: &Self) -> bool {
        match (&self.ring, &other.ring) {
            (Some(a), Some(b)) if !same_ring(a, b) => false,
            (Some(_), None) | (None, Some(_)) => false,
            _ => self.num == other.num && self.den == other.den,
        }
    }
}

impl Eq for ParamScalar {}

impl Hash for ParamScalar {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.num.hash(state);
        self.den.hash(state);
    }
}

impl fmt::Display for ParamScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        write_raw(f, &self.num, self.ring.as_deref())?;
        write!(f, ") / (")?;
        write_raw(f, &self.den, self.ring.as_deref())?;
        write!(f, ")")
    }
}

impl Zero for ParamScalar {
    fn zero() -> Self {
        ParamScalar { ring: None, num: Raw::new(), den: raw::constant(BigInt::one(), 0) }
    }
    fn is_zero(&self) -> bool {
        self.num.is_empty()
    }
}

impl One for ParamScalar {
    fn one() -> Self {
        Self::from_int(1)
    }
}

impl std::ops::Add for ParamScalar {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.add_ref(&rhs)
    }
}

impl std::ops::Sub for ParamScalar {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.sub_ref(&rhs)
    }
}

impl std::ops::Mul for ParamScalar {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl std::ops::Neg for ParamScalar {
    type Output = Self;
    fn neg(self) -> Self {
        ParamScalar { ring: self.ring, num: raw::neg(&self.num), den: self.den }
    }
}

impl ParamScalar {
    fn combine(&self, rhs: &Self, subtract: bool) -> Self {
        let ring = unify(&self.ring, &rhs.ring);
        let n = ring.as_ref().map_or(0, |r| r.len());
        let (an, ad) = (lift(&self.num, n), lift(&self.den, n));
        let (bn, bd) = (lift(&rhs.num, n), lift(&rhs.den, n));
        let op = |x: &Raw, y: &Raw| if subtract { raw::sub(x, y) } else { raw::add(x, y) };
        if ad == bd {
            let num = op(&an, &bn);
            if raw::is_one(&ad) {
                return Self::canon(ring, num, ad.into_owned());
            }
            return Self::reduce(ring, num, ad.into_owned()).expect("nonzero denominator");
        }
        let num = op(&raw::mul(&an, &bd), &raw::mul(&bn, &ad));
        Self::reduce(ring, num, raw::mul(&ad, &bd)).expect("nonzero denominator")
    }
}

impl Field for ParamScalar {
    fn add_ref(&self, rhs: &Self) -> Self {
        if rhs.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return rhs.clone();
        }
        self.combine(rhs, false)
    }

    fn sub_ref(&self, rhs: &Self) -> Self {
        if rhs.is_zero() {
            return self.clone();
        }
        self.combine(rhs, true)
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        if self.is_zero() || rhs.is_zero() {
            return Self::zero();
        }
        let ring = unify(&self.ring, &rhs.ring);
        let n = ring.as_ref().map_or(0, |r| r.len());
        let num = raw::mul(&lift(&self.num, n), &lift(&rhs.num, n));
        if raw::is_one(&self.den) && raw::is_one(&rhs.den) {
            return Self::canon(ring, num, raw::constant(BigInt::one(), n));
        }
        let den = raw::mul(&lift(&self.den, n), &lift(&rhs.den, n));
        Self::reduce(ring, num, den).expect("nonzero denominator")
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::reduce(self.ring.clone(), self.den.clone(), self.num.clone()).expect("nonzero"))
    }

    fn from_bigint(n: BigInt) -> Self {
        Self::from_int(n)
    }

    fn to_flat(&self) -> Option<FlatTerms> {
        if !self.is_laurent() {
            return None;
        }
        self.num.iter().map(|(m, c)| Some((m.clone(), c.to_i64()?))).collect()
    }

    fn rebuild_flat(&self, terms: Vec<(raw::Mono, i128)>) -> Option<Self> {
        let n = self.ring.as_ref().map_or(0, |r| r.len());
        let mut num = Raw::new();
        for (m, c) in terms {
            if c == 0 {
                continue;
            }
            let m = if m.len() == n {
                m
            } else if m.is_empty() {
                raw::zero_mono(n)
            } else {
                return None;
            };
            *num.entry(m).or_insert_with(BigInt::zero) += c;
        }
        num.retain(|_, c| !c.is_zero());
        if num.is_empty() {
            return Some(Self::zero());
        }
        Some(Self::canon(self.ring.clone(), num, raw::constant(BigInt::one(), n)))
    }

    fn mod_image(&self, point: &[Fp]) -> Option<Fp> {
        self.eval(point).ok()
    }

    fn split_fraction(&self) -> (Self, Self) {
        let n = self.nvars();
        let one = raw::constant(BigInt::one(), n);
        (Self::canon(self.ring.clone(), self.num.clone(), one.clone()), Self::canon(self.ring.clone(), self.den.clone(), one))
    }
}

/// Helper for building scalars in tests and examples: `sym(&ring, "q")`.
pub fn sym(ring: &Arc<ParamRing>, name: &str) -> ParamScalar {
    ring.var(name).expect("known parameter")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ring() -> Arc<ParamRing> {
        ParamRing::new(&["q", "t1"]).unwrap()
    }

    #[test]
    fn canonical_text_form() {
        let r = ring();
        let q = sym(&r, "q");
        let t = sym(&r, "t1");
        let x = ParamScalar::one() - q.mul_ref(&t.inv().unwrap());
        assert_eq!(x.to_string(), "(-1*q^1*t1^-1 + 1) / (1)");
        assert_eq!(r.parse(&x.to_string()).unwrap(), x);
    }

    #[test]
    fn reduces_common_factors() {
        let r = ParamRing::new(&["q"]).unwrap();
        let q = sym(&r, "q");
        let one = ParamScalar::one();
        // (1 - q^2) / (1 + q) = 1 - q
        let a = (one.clone() - q.mul_ref(&q)).checked_div(&(one.clone() + q.clone())).unwrap();
        assert_eq!(a, one - q);
        assert!(a.is_laurent());
    }

    #[test]
    fn denominator_is_normalised() {
        let r = ring();
        let x = r.parse("(2*q) / (4*q^3 - 6*q^2*t1)").unwrap();
        // 2q / (2q^2 (2q - 3t1)) = q^-1 / (2q - 3t1)
        assert_eq!(x.to_string(), "(1*q^-1) / (2*q^1 + -3*t1^1)");
        let y = r.parse("1 / (t1 - q)").unwrap();
        assert_eq!(y.to_string(), "(-1) / (1*q^1 + -1*t1^1)");
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let r = ring();
        let q = sym(&r, "q");
        assert_eq!(q.checked_div(&(q.clone() - q.clone())), Err(Error::DivisionByZero));
    }

    #[test]
    fn substitution_to_zero() {
        // q - t^2 under q -> s^2, t -> s
        let r = ParamRing::new(&["q", "t"]).unwrap();
        let s_ring = ParamRing::new(&["s"]).unwrap();
        let s = sym(&s_ring, "s");
        let x = r.parse("q - t^2").unwrap();
        let y = x.substitute(&[("q", s.mul_ref(&s)), ("t", s.clone())], &s_ring).unwrap();
        assert!(y.is_zero());
    }

    #[test]
    fn substitution_through_a_fraction() {
        // 1/t under t -> q/u is u/q
        let r = ParamRing::new(&["q", "t"]).unwrap();
        let target = ParamRing::new(&["q", "u"]).unwrap();
        let x = r.parse("1/t").unwrap();
        let img = target.parse("q/u").unwrap();
        let y = x.substitute(&[("t", img)], &target).unwrap();
        assert_eq!(y, target.parse("u/q").unwrap());
    }

    #[test]
    fn substitution_pole() {
        let r = ParamRing::new(&["q", "t"]).unwrap();
        let x = r.parse("1/(q - t)").unwrap();
        let q = sym(&r, "q");
        let err = x.substitute(&[("t", q)], &r).unwrap_err();
        assert_eq!(err.kind(), "SpecializationPole");
    }

    #[test]
    fn constants_cross_rings() {
        let r = ring();
        let q = sym(&r, "q");
        let z = q.sub_ref(&q);
        assert_eq!(z, ParamScalar::zero());
        assert!(z.ring().is_none());
        let two = q.add_ref(&ParamScalar::one()).sub_ref(&q).mul_ref(&ParamScalar::from_int(2));
        assert_eq!(two, ParamScalar::from_int(2));
    }

    #[test]
    fn multivariate_gcd_in_denominators() {
        let r = ParamRing::new(&["q", "t", "u"]).unwrap();
        let a = r.parse("(q*t - u^2) * (q + t + 1) / ((q*t - u^2) * (t - u) * q)").unwrap();
        let b = r.parse("(q + t + 1) / (q*t - q*u)").unwrap();
        assert_eq!(a, b);
    }

    fn arb_scalar() -> impl Strategy<Value = ParamScalar> {
        let atoms = prop::collection::vec((-3i64..=3, -2i32..=2, -2i32..=2), 1..4);
        (atoms.clone(), atoms).prop_map(|(n, d)| {
            let r = ParamRing::new(&["q", "t1"]).unwrap();
            let build = |terms: Vec<(i64, i32, i32)>| {
                terms.into_iter().fold(ParamScalar::zero(), |acc, (c, a, b)| {
                    let m = sym(&r, "q").powi(a as i64).unwrap().mul_ref(&sym(&r, "t1").powi(b as i64).unwrap());
                    acc.add_ref(&m.mul_ref(&ParamScalar::from_int(c)))
                })
            };
            let num = build(n);
            let den = build(d);
            if den.is_zero() {
                num
            } else {
                num.checked_div(&den).unwrap()
            }
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn field_axioms(a in arb_scalar(), b in arb_scalar(), c in arb_scalar()) {
            prop_assert_eq!(a.add_ref(&b), b.add_ref(&a));
            prop_assert_eq!(a.mul_ref(&b), b.mul_ref(&a));
            prop_assert_eq!(a.mul_ref(&b.add_ref(&c)), a.mul_ref(&b).add_ref(&a.mul_ref(&c)));
            prop_assert_eq!(a.add_ref(&b).add_ref(&c), a.add_ref(&b.add_ref(&c)));
            if !a.is_zero() {
                prop_assert_eq!(a.mul_ref(&a.inv().unwrap()), ParamScalar::one());
            }
        }

        #[test]
        fn text_round_trip(a in arb_scalar()) {
            let r = ParamRing::new(&["q", "t1"]).unwrap();
            prop_assert_eq!(r.parse(&a.to_string()).unwrap(), a);
        }

        #[test]
        fn specialisation_is_a_homomorphism(a in arb_scalar(), b in arb_scalar()) {
            use num_rational::BigRational;
            let vals = [BigRational::new(3.into(), 7.into()), BigRational::new((-5).into(), 2.into())];
            let ab = a.mul_ref(&b).add_ref(&a);
            if let (Ok(x), Ok(y), Ok(z)) = (a.eval(&vals), b.eval(&vals), ab.eval(&vals)) {
                prop_assert_eq!(z, x.mul_ref(&y).add_ref(&x));
            }
        }
    }
}
