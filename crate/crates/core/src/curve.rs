//! Curves of genus `g` through their Weil numbers: the `g`-loop quiver with
//! `t_e = 1/σ_e`, the kernel `ζ_X`, the factors `Q_e` and the cubic
//! relations among degree one generators.
//!
//! `σ̄_e` is always `q^{-1}/σ_e`, so `t_{e*} = q/t_e` holds by construction.
//!
//! Config files:
//!
//! ```text
//! genus: 2
//! ring: [q, s1, s2]
//! q: q
//! sigma[1]: s1
//! sigma[2]: s2
//! ```
//! `ring:` defaults to `[q, s1, ..., sg]`, `q:` to `q` and `sigma[e]:` to `s<e>`.

use std::sync::Arc;

use num_traits::{One, Zero};
use smallvec::smallvec;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::loopgroup::{in_relation_ideal, pair, UElement};
use crate::polynomials::{ColorSignature, Exps, LaurentPoly, SymLaurent, Var};
use crate::quiver::{Edge, Quiver};
use crate::scalars::{sym, ParamRing, ParamScalar};
use crate::series::Laurent1;
use crate::words::{Letter, Word};

type S = ParamScalar;

#[derive(Debug, Clone)]
pub struct CurveData {
    pub genus: usize,
    pub ring: Arc<ParamRing>,
    pub q: S,
    pub sigma: Vec<S>,
}

impl CurveData {
    /// Fresh indeterminates: ring `[q, s1, ..., sg]`, `σ_e = s_e`.
    pub fn generic(genus: usize) -> Self {
        let mut names = vec!["q".to_string()];
        names.extend((1..=genus).map(|e| format!("s{e}")));
        let ring = ParamRing::new(&names).expect("distinct names");
        let sigma = (1..=genus).map(|e| sym(&ring, &format!("s{e}"))).collect();
        CurveData { genus, q: sym(&ring, "q"), sigma, ring }
    }

    pub fn new(ring: Arc<ParamRing>, q: S, sigma: Vec<S>) -> Result<Self> {
        if q.is_zero() || sigma.iter().any(|s| s.is_zero()) {
            return Err(Error::InvalidArgument("q and the Weil numbers must be nonzero".into()));
        }
        Ok(CurveData { genus: sigma.len(), ring, q, sigma })
    }

    /// `σ̄_e = q^{-1} / σ_e`, with `e` counted from 1.
    pub fn sigma_bar(&self, e: usize) -> S {
        self.q.mul_ref(&self.sigma[e - 1]).inv().expect("nonzero")
    }

    fn loops(&self, t: Vec<S>) -> Quiver<S> {
        let symbols = self.ring.names().iter().map(|n| (n.clone(), sym(&self.ring, n))).collect();
        let edges = vec![Edge { src: 0, dst: 0 }; t.len()];
        Quiver::new(vec!["i".into()], edges, self.q.clone(), t).expect("loop quivers are well formed").with_symbols(symbols)
    }

    /// One vertex with `g` loops, `t_e = 1/σ_e`.
    pub fn quiver(&self) -> Quiver<S> {
        self.loops(self.sigma.iter().map(|s| s.inv().expect("nonzero")).collect())
    }

    /// The Jordan quiver carrying only the `e`-th loop.
    pub fn jordan(&self, e: usize) -> Result<Quiver<S>> {
        self.check_loop(e)?;
        Ok(self.loops(vec![self.sigma[e - 1].inv().expect("nonzero")]))
    }

    /// The multiset `{σ_e, σ̄_e}` has no repetitions.
    pub fn distinct_weil_numbers(&self) -> bool {
        let all: Vec<S> = (1..=self.genus).flat_map(|e| [self.sigma[e - 1].clone(), self.sigma_bar(e)]).collect();
        all.iter().enumerate().all(|(k, a)| !all[..k].contains(a))
    }

    fn check_loop(&self, e: usize) -> Result<()> {
        if self.genus == 0 {
            return Err(Error::InvalidArgument("genus 0 has no loops".into()));
        }
        if e == 0 || e > self.genus {
            return Err(Error::InvalidArgument(format!("loop {e} outside 1..={}", self.genus)));
        }
        Ok(())
    }
}

pub fn parse_curve_config(text: &str) -> Result<CurveData> {
    let mut genus: Option<usize> = None;
    let mut ring_names: Option<(usize, Vec<String>)> = None;
    let mut q_expr: Option<(usize, String)> = None;
    let mut sigma_exprs: Vec<(usize, usize, String)> = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let l = raw.split('#').next().unwrap_or("").trim();
        if l.is_empty() {
            continue;
        }
        let (key, body) = l.split_once(':').ok_or_else(|| Error::config(line, format!("expected `key: value`, got `{l}`")))?;
        let (key, body) = (key.trim(), body.trim());
        match key {
            "genus" => {
                let g = body.parse().map_err(|_| Error::config(line, format!("genus must be a natural number, got `{body}`")))?;
                if genus.replace(g).is_some() {
                    return Err(Error::config(line, "duplicate `genus:`"));
                }
            }
            "ring" => {
                let inner = body
                    .strip_prefix('[')
                    .and_then(|s| s.strip_suffix(']'))
                    .ok_or_else(|| Error::config(line, format!("expected a `[...]` list, got `{body}`")))?;
                let names = inner.split(',').map(|s| s.trim().to_string()).filter(|s| !s.is_empty()).collect();
                if ring_names.replace((line, names)).is_some() {
                    return Err(Error::config(line, "duplicate `ring:`"));
                }
            }
            "q" => {
                if q_expr.replace((line, body.to_string())).is_some() {
                    return Err(Error::config(line, "duplicate `q:`"));
                }
            }
            _ => {
                let e = key
                    .strip_prefix("sigma[")
                    .and_then(|s| s.strip_suffix(']'))
                    .and_then(|s| s.trim().parse::<usize>().ok())
                    .ok_or_else(|| Error::config(line, format!("unknown key `{key}`")))?;
                if sigma_exprs.iter().any(|(_, f, _)| *f == e) {
                    return Err(Error::config(line, format!("duplicate `sigma[{e}]:`")));
                }
                sigma_exprs.push((line, e, body.to_string()));
            }
        }
    }
    let g = genus.ok_or_else(|| Error::config(1, "missing `genus:`"))?;
    if let Some((line, e, _)) = sigma_exprs.iter().find(|(_, e, _)| *e == 0 || *e > g) {
        return Err(Error::config(*line, format!("sigma[{e}] outside 1..={g}")));
    }
    let default = CurveData::generic(g);
    let (rline, names) = ring_names.unwrap_or((1, default.ring.names().to_vec()));
    let ring = ParamRing::new(&names).map_err(|e| Error::config(rline, e.to_string()))?;
    let expr = |text: &str, line: usize| ring.parse_at(text, line);
    let q = match &q_expr {
        Some((line, t)) => expr(t, *line)?,
        None => ring.var("q").map_err(|_| Error::config(rline, "no `q:` and no parameter `q`"))?,
    };
    let sigma = (1..=g)
        .map(|e| match sigma_exprs.iter().find(|(_, f, _)| *f == e) {
            Some((line, _, t)) => expr(t, *line),
            None => ring.var(&format!("s{e}")).map_err(|_| Error::config(rline, format!("no `sigma[{e}]:` and no parameter `s{e}`"))),
        })
        .collect::<Result<Vec<_>>>()?;
    CurveData::new(ring, q, sigma).map_err(|e| Error::config(1, e.to_string()))
}

/// `ζ_X(x)` as (numerator, power of `1/(1 - x)`), the numerator being
/// `(1 - x/q) ∏_e (σ_e - x)(1 - σ̄_e / x)`.
pub fn zeta_curve(c: &CurveData) -> (Laurent1<S>, u32) {
    let mut acc = Laurent1::linear(S::one(), c.q.inv().expect("nonzero").neg_ref());
    for e in 1..=c.genus {
        acc = acc.mul(&Laurent1::linear(c.sigma[e - 1].clone(), -S::one()));
        acc = acc.mul(&Laurent1::inverse_linear(c.sigma_bar(e).neg_ref(), S::one()));
    }
    (acc, 1)
}

fn sig3() -> ColorSignature {
    ColorSignature::new(vec![3])
}

/// `a z_j/z_i + b` in three variables.
fn ratio_binomial(i: usize, j: usize, a: S, b: S) -> LaurentPoly<S> {
    let mut ex: Exps = smallvec![0; 3];
    ex[j] += 1;
    ex[i] -= 1;
    LaurentPoly::from_terms(sig3(), [(ex, a), (smallvec![0; 3], b)])
}

/// `Q_e(z_1, z_2, z_3) = ∏_{i<j} ∏_{f≠e} (σ_f - z_j/z_i)(1 - σ̄_f z_i/z_j)`.
pub fn q_poly(c: &CurveData, e: usize) -> Result<LaurentPoly<S>> {
    c.check_loop(e)?;
    let mut acc = LaurentPoly::one(sig3());
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        for f in (1..=c.genus).filter(|&f| f != e) {
            acc = acc.mul(&ratio_binomial(i, j, -S::one(), c.sigma[f - 1].clone()))?;
            acc = acc.mul(&ratio_binomial(j, i, c.sigma_bar(f).neg_ref(), S::one()))?;
        }
    }
    Ok(acc)
}

/// `Q_e ∏_{i<j} ζ_1^(e)(z_j/z_i) = ∏_{i<j} ζ_X(z_j/z_i)`, compared after
/// cancelling the common factors `(1 - z_j/z_i)`.
pub fn q_identity_holds(c: &CurveData, e: usize) -> Result<bool> {
    let full = c.quiver();
    let single = c.jordan(e)?;
    let (mut lhs, mut rhs) = (q_poly(c, e)?, LaurentPoly::one(sig3()));
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let (vi, vj) = (Var::new(0, i), Var::new(0, j));
        lhs = lhs.mul(&single.zeta_tilde_at(0, 0, &sig3(), vj, vi))?;
        rhs = rhs.mul(&full.zeta_tilde_at(0, 0, &sig3(), vj, vi))?;
    }
    Ok(lhs == rhs)
}

/// The element `[(xyz)^m (x + z)(xz - y^2) Q_e(x, y, z) E(x)E(y)E(z)]_ct`:
/// each monomial `x^a y^b z^c` becomes the word `i^(a) i^(b) i^(c)`.
pub fn genus_g_element(c: &CurveData, e: usize, m: i64) -> Result<UElement<S>> {
    let m = m as i32;
    let mono = |a: i32, b: i32, cc: i32, k: i64| LaurentPoly::monomial(sig3(), smallvec![a, b, cc], S::from_i64(k));
    let x_plus_z = mono(1, 0, 0, 1).add(&mono(0, 0, 1, 1))?;
    let xz_minus_y2 = mono(1, 0, 1, 1).add(&mono(0, 2, 0, -1))?;
    let f = mono(m, m, m, 1).mul(&x_plus_z)?.mul(&xz_minus_y2)?.mul(&q_poly(c, e)?)?;
    Ok(UElement::from_terms(f.terms().map(|(ex, coef)| {
        let w = Word::new(ex.iter().map(|&d| Letter::new(0, d as i64)).collect());
        (w, coef.clone())
    })))
}

/// The genus-`g` cubic relation for loop `e` and twist `m` lies in the
/// kernel of `Υ` on the `g`-loop quiver.
pub fn verify_genus_g_cubic(c: &CurveData, e: usize, m: i64) -> Result<bool> {
    let x = genus_g_element(c, e, m)?;
    in_relation_ideal(&c.quiver(), &x)
}

/// Both sides of the residue identity for loop `e` and symmetric `P, R` in
/// three variables with `deg P + deg R = 0`:
/// the ordered constant term of `(z1 + z3)(1/z2 - z2/(z1 z3)) (PR) / ∏ ζ_1^(e)`
/// against the one-variable constant term of
/// `[(PR)(x, x t, x q) - (PR)(x, x q/t, x q)] / ((q/t - t)(1/q - t)(1/q - q/t) q^{-3})`.
pub fn residue_sides(c: &CurveData, e: usize, p: &SymLaurent<S>, r: &SymLaurent<S>) -> Result<(S, S)> {
    let jordan = c.jordan(e)?;
    let pr = SymLaurent::new(p.poly.mul(&r.poly)?, p.vdeg + r.vdeg)?;
    let w = |a: i64, b: i64, cc: i64| Word::new(vec![Letter::new(0, a), Letter::new(0, b), Letter::new(0, cc)]);
    let kernel = UElement::from_terms([(w(1, -1, 0), S::one()), (w(0, 1, -1), -S::one()), (w(0, -1, 1), S::one()), (w(-1, 1, 0), -S::one())]);
    let lhs = pair(&jordan, &kernel, &pr)?;
    let q = &c.q;
    let t = c.sigma[e - 1].inv().expect("nonzero");
    let qt = q.checked_div(&t)?;
    let q_inv = q.inv().expect("nonzero");
    let mut num = S::zero();
    for (ex, coef) in pr.poly.terms() {
        let (a, b, cc) = (ex[0] as i64, ex[1] as i64, ex[2] as i64);
        if a + b + cc != 0 {
            continue;
        }
        let qc = q.powi(cc).expect("nonzero");
        let diff = t.powi(b).expect("nonzero").sub_ref(&qt.powi(b).expect("nonzero"));
        num = num.add_ref(&coef.mul_ref(&qc).mul_ref(&diff));
    }
    let den = qt.sub_ref(&t).mul_ref(&q_inv.sub_ref(&t)).mul_ref(&q_inv.sub_ref(&qt)).mul_ref(&q.powi(-3).expect("nonzero"));
    let rhs = num.div_ref(&den).ok_or(Error::DivisionByZero)?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::catalog;
    use crate::random::{random_symmetric, rng};

    #[test]
    fn zeta_matches_the_loop_quiver() {
        for g in 0..=2 {
            let c = CurveData::generic(g);
            let (num, pow) = zeta_curve(&c);
            assert_eq!((num, pow), c.quiver().zeta(0, 0), "g = {g}");
        }
        // genus 0 is the empty product
        let c = CurveData::generic(0);
        let q = sym(&c.ring, "q");
        assert_eq!(zeta_curve(&c).0, Laurent1::linear(S::one(), q.inv().unwrap().neg_ref()));
    }

    #[test]
    fn genus_one_is_the_jordan_quiver() {
        let c = CurveData::generic(1);
        let (jordan, ring) = catalog::jordan(1);
        let t = c.sigma[0].inv().unwrap();
        let z = jordan.zeta_tilde(0, 0);
        let coeffs = z.coeffs.iter().map(|x| x.substitute(&[("t1", t.clone())], &c.ring).unwrap()).collect();
        assert_eq!(Laurent1 { low: z.low, coeffs }, zeta_curve(&c).0);
        assert_eq!(ring.names()[0], "q");
    }

    #[test]
    fn reverse_parameter_is_q_over_t() {
        let c = CurveData::generic(2);
        for e in 1..=2 {
            let t = c.sigma[e - 1].inv().unwrap();
            let t_star = c.sigma_bar(e).inv().unwrap();
            assert_eq!(t_star, c.q.checked_div(&t).unwrap());
        }
    }

    #[test]
    fn zeta_pair_symmetry() {
        // ζ(x) ζ(1/x) is invariant under x -> 1/x; checked on the numerators,
        // where (1-x)(1-1/x) is itself invariant
        let c = CurveData::generic(2);
        let z = zeta_curve(&c).0;
        let prod = z.mul(&z.invert_variable());
        assert_eq!(prod, prod.invert_variable());
    }

    #[test]
    fn q_poly_values() {
        let c = CurveData::generic(1);
        assert_eq!(q_poly(&c, 1).unwrap(), LaurentPoly::one(sig3()));
        assert!(q_poly(&CurveData::generic(0), 1).is_err());
        let c = CurveData::generic(2);
        let q1 = q_poly(&c, 1).unwrap();
        // direct expansion at a numeric point
        let (s2, sb2) = (c.sigma[1].clone(), c.sigma_bar(2));
        let z = [S::from_i64(2), S::from_i64(3), S::from_i64(5)];
        let mut expect = S::one();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            let u = z[j].checked_div(&z[i]).unwrap();
            expect = expect.mul_ref(&s2.sub_ref(&u)).mul_ref(&S::one().sub_ref(&sb2.checked_div(&u).unwrap()));
        }
        let mut got = q1.clone();
        for (k, v) in z.iter().enumerate() {
            got = got.set_var(Var::new(0, k), v);
        }
        assert_eq!(got.coeff(&[0, 0, 0]), expect);
        assert!(q_poly(&c, 2).unwrap() != q1);
    }

    #[test]
    fn q_identity() {
        for g in 1..=3 {
            let c = CurveData::generic(g);
            for e in 1..=g {
                assert!(q_identity_holds(&c, e).unwrap(), "g = {g}, e = {e}");
            }
        }
    }

    #[test]
    fn genus_one_relations() {
        let c = CurveData::generic(1);
        for m in -1..=1 {
            assert!(verify_genus_g_cubic(&c, 1, m).unwrap(), "m = {m}");
        }
        assert!(verify_genus_g_cubic(&CurveData::generic(0), 1, 0).is_err());
    }

    #[test]
    fn genus_two_relations() {
        let c = CurveData::generic(2);
        for e in 1..=2 {
            assert!(verify_genus_g_cubic(&c, e, 0).unwrap(), "e = {e}");
        }
        // without the Q_e factor the relation fails in genus 2
        let bare = genus_g_element(&CurveData::generic(1), 1, 0).unwrap();
        assert!(!in_relation_ideal(&c.quiver(), &bare).unwrap());
    }

    #[test]
    fn a_broken_relation_is_detected() {
        let c = CurveData::generic(1);
        let x = genus_g_element(&c, 1, 0).unwrap();
        let broken = x.add(&UElement::word(Word::new(vec![Letter::new(0, 0), Letter::new(0, 1), Letter::new(0, 2)])));
        assert!(!in_relation_ideal(&c.quiver(), &broken).unwrap());
    }

    #[test]
    fn residue_identity_genus_one() {
        let c = CurveData::generic(1);
        let sig = sig3();
        let mut g = rng(3);
        let mut nonzero = 0;
        for _ in 0..4 {
            let p = random_symmetric(&mut g, &sig, 1, 2, 2);
            let r = random_symmetric(&mut g, &sig, -1, 2, 2);
            let (lhs, rhs) = residue_sides(&c, 1, &p, &r).unwrap();
            assert_eq!(lhs, rhs);
            nonzero += !lhs.is_zero() as usize;
        }
        assert!(nonzero > 0);
    }

    #[test]
    fn config_round() {
        let c = parse_curve_config("genus: 2\nsigma[2]: q^-1 / s1\n").unwrap();
        assert_eq!(c.genus, 2);
        assert!(!c.distinct_weil_numbers());
        assert!(CurveData::generic(2).distinct_weil_numbers());
        assert!(matches!(parse_curve_config("genus: 1\nsigma[3]: s1"), Err(Error::Config { line: 2, .. })));
        assert!(matches!(parse_curve_config("sigma[1]: s1"), Err(Error::Config { .. })));
    }
}
