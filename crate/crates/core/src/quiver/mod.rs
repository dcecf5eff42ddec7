//! Quivers with edge parameters and their zeta kernels.
//!
//! For vertices `i, j` the kernel is
//! `ζ_ij(x) = ((1 - x/q)/(1 - x))^δ_ij ∏_{e: i→j} (1/t_e - x) ∏_{e: j→i} (1 - t_e/(q x))`.
//! Its numerator `ζ̃_ij(x) = ζ_ij(x) (1 - x)^δ_ij` is a Laurent polynomial with
//! lowest exponent `-#(j→i)`.
//!
//! The doubled quiver adds a reversed edge `e*` for every edge `e`, with
//! parameter `t_{e*} = q / t_e`.

pub mod catalog;
mod config;

use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::polynomials::{ColorSignature, Exps, LaurentPoly, Var};
use crate::scalars::{ParamRing, ParamScalar};
use crate::series::{extend_quotient, Laurent1};

pub use config::{parse_quiver_config, QuiverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
}

/// An edge of the doubled quiver: either an original edge or its reverse.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DoubledEdge<F> {
    pub src: usize,
    pub dst: usize,
    pub param: F,
    /// Index into the original edge list.
    pub edge: usize,
    pub reversed: bool,
}

impl<F> DoubledEdge<F> {
    /// `e3` for original edge 3, `e3*` for its reverse (1-based).
    pub fn label(&self) -> String {
        format!("e{}{}", self.edge + 1, if self.reversed { "*" } else { "" })
    }
}

type SeriesCache<F> = RwLock<HashMap<(usize, usize), Arc<Vec<F>>>>;

pub struct Quiver<F> {
    vertices: Vec<String>,
    edges: Vec<Edge>,
    q: F,
    t: Vec<F>,
    symbols: Vec<(String, F)>,
    generic_asserted: bool,
    series: SeriesCache<F>,
}

impl<F: Field> Clone for Quiver<F> {
    fn clone(&self) -> Self {
        Quiver {
            vertices: self.vertices.clone(),
            edges: self.edges.clone(),
            q: self.q.clone(),
            t: self.t.clone(),
            symbols: self.symbols.clone(),
            generic_asserted: self.generic_asserted,
            series: RwLock::new(self.series.read().unwrap().clone()),
        }
    }
}

impl<F: Field> std::fmt::Debug for Quiver<F> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Quiver").field("vertices", &self.vertices).field("edges", &self.edges).field("q", &self.q).field("t", &self.t).finish()
    }
}

impl<F: Field> Quiver<F> {
    /// Builds a quiver; `t[k]` is the parameter of `edges[k]`.
    pub fn new(vertices: Vec<String>, edges: Vec<Edge>, q: F, t: Vec<F>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidArgument("a quiver needs at least one vertex".into()));
        }
        for (k, v) in vertices.iter().enumerate() {
            if vertices[..k].contains(v) {
                return Err(Error::InvalidArgument(format!("duplicate vertex `{v}`")));
            }
        }
        if edges.iter().any(|e| e.src >= vertices.len() || e.dst >= vertices.len()) {
            return Err(Error::InvalidArgument("edge endpoint out of range".into()));
        }
        if t.len() != edges.len() {
            return Err(Error::InvalidArgument(format!("{} edge parameters for {} edges", t.len(), edges.len())));
        }
        if q.is_zero() || t.iter().any(|x| x.is_zero()) {
            return Err(Error::InvalidArgument("parameters must be nonzero".into()));
        }
        if q == F::one() {
            return Err(Error::InvalidArgument("q = 1 makes the kernels degenerate".into()));
        }
        Ok(Quiver { vertices, edges, q, t, symbols: Vec::new(), generic_asserted: false, series: RwLock::default() })
    }

    /// Named scalars available when parsing coefficients.
    pub fn with_symbols(mut self, symbols: Vec<(String, F)>) -> Self {
        self.symbols = symbols;
        self
    }

    /// Records the caller's assertion that the parameters are generic enough
    /// for every denominator appearing in the theory to be nonzero. Only a
    /// few necessary conditions are checked, see [`Quiver::check_basic_genericity`].
    pub fn assert_generic(mut self) -> Self {
        self.generic_asserted = true;
        self
    }

    pub fn generic_asserted(&self) -> bool {
        self.generic_asserted
    }

    /// Cheap necessary conditions: `q`, `t_e`, `q/t_e` differ from 1 and from
    /// each other's obvious coincidences. Returns the violated conditions.
    pub fn check_basic_genericity(&self) -> Vec<String> {
        let mut bad = Vec::new();
        let one = F::one();
        for d in self.doubled_edges() {
            if d.param == one {
                bad.push(format!("t_{} = 1", d.label()));
            }
            if d.param == self.q {
                bad.push(format!("t_{} = q", d.label()));
            }
        }
        bad
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn q(&self) -> &F {
        &self.q
    }

    pub fn edge_params(&self) -> &[F] {
        &self.t
    }

    pub fn symbols(&self) -> &[(String, F)] {
        &self.symbols
    }

    pub fn resolve_symbol(&self, name: &str) -> Option<F> {
        self.symbols.iter().find(|(n, _)| n == name).map(|(_, v)| v.clone())
    }

    pub fn vertex_index(&self, name: &str) -> Result<usize> {
        self.vertices.iter().position(|v| v == name).ok_or_else(|| Error::UnknownVertex(name.to_string()))
    }

    /// `#(i→j)`, edges of the original quiver from `i` to `j`.
    pub fn arrows(&self, i: usize, j: usize) -> usize {
        self.edges.iter().filter(|e| e.src == i && e.dst == j).count()
    }

    /// `#_ij = #(i→j) + #(j→i)`; a loop at `i` counts twice in `#_ii`.
    pub fn total(&self, i: usize, j: usize) -> usize {
        self.arrows(i, j) + self.arrows(j, i)
    }

    pub fn max_total(&self) -> usize {
        let n = self.num_vertices();
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| self.total(i, j)).max().unwrap_or(0)
    }

    /// Edges of the doubled quiver: each original edge followed by its reverse.
    pub fn doubled_edges(&self) -> Vec<DoubledEdge<F>> {
        let mut out = Vec::with_capacity(2 * self.edges.len());
        for (k, e) in self.edges.iter().enumerate() {
            out.push(DoubledEdge { src: e.src, dst: e.dst, param: self.t[k].clone(), edge: k, reversed: false });
            let dual = self.q.div_ref(&self.t[k]).expect("nonzero edge parameter");
            out.push(DoubledEdge { src: e.dst, dst: e.src, param: dual, edge: k, reversed: true });
        }
        out
    }

    /// Looks up `e3` / `e3*` (or `3` / `3*`).
    pub fn doubled_edge(&self, label: &str) -> Result<DoubledEdge<F>> {
        let l = label.trim();
        let (body, reversed) = match l.strip_suffix('*') {
            Some(b) => (b, true),
            None => (l, false),
        };
        let body = body.strip_prefix('e').unwrap_or(body);
        let k: usize = body.parse().map_err(|_| Error::UnknownEdge(label.to_string()))?;
        if k == 0 || k > self.edges.len() {
            return Err(Error::UnknownEdge(label.to_string()));
        }
        Ok(self.doubled_edges().swap_remove(2 * (k - 1) + reversed as usize))
    }

    /// `♭_ij(γ)`: number of doubled edges `i→j` whose parameter equals `γ`.
    pub fn flat_multiplicity(&self, i: usize, j: usize, gamma: &F) -> usize {
        self.doubled_edges().iter().filter(|d| d.src == i && d.dst == j && d.param == *gamma).count()
    }

    /// Distinct parameters of doubled edges `i→j` with their multiplicities,
    /// in order of first appearance.
    pub fn distinct_params(&self, i: usize, j: usize) -> Vec<(F, usize)> {
        let mut out: Vec<(F, usize)> = Vec::new();
        for d in self.doubled_edges() {
            if d.src != i || d.dst != j {
                continue;
            }
            match out.iter_mut().find(|(g, _)| *g == d.param) {
                Some(entry) => entry.1 += 1,
                None => out.push((d.param.clone(), 1)),
            }
        }
        out
    }

    /// The numerator `ζ̃_ij(x)` as a univariate Laurent polynomial.
    pub fn zeta_tilde(&self, i: usize, j: usize) -> Laurent1<F> {
        let q_inv = self.q.inv().expect("q nonzero");
        let mut acc = Laurent1::one();
        if i == j {
            acc = acc.mul(&Laurent1::linear(F::one(), q_inv.neg_ref()));
        }
        for (k, e) in self.edges.iter().enumerate() {
            let t = &self.t[k];
            if e.src == i && e.dst == j {
                acc = acc.mul(&Laurent1::linear(t.inv().expect("nonzero"), -F::one()));
            }
            if e.src == j && e.dst == i {
                acc = acc.mul(&Laurent1::inverse_linear(t.mul_ref(&q_inv).neg_ref(), F::one()));
            }
        }
        acc
    }

    /// `ζ_ij(x)` as a pair (numerator `ζ̃_ij`, power `δ_ij` of `1/(1 - x)`).
    pub fn zeta(&self, i: usize, j: usize) -> (Laurent1<F>, u32) {
        (self.zeta_tilde(i, j), (i == j) as u32)
    }

    /// `ζ̃_ij(z[a] / z[b])` as a polynomial in the given signature.
    pub fn zeta_tilde_at(&self, i: usize, j: usize, sig: &ColorSignature, a: Var, b: Var) -> LaurentPoly<F> {
        let (ia, ib) = (sig.var_index(a), sig.var_index(b));
        let z = self.zeta_tilde(i, j);
        let mut p = LaurentPoly::zero(sig.clone());
        for (e, c) in z.terms() {
            let mut ex: Exps = smallvec::SmallVec::from_elem(0, sig.total());
            ex[ia] += e;
            ex[ib] -= e;
            p.add_term(ex, c.clone());
        }
        p
    }

    /// Leading power of `1/ζ_ij(u)` at `u = 0`, which is `#(j→i)`.
    pub fn recip_lead(&self, i: usize, j: usize) -> i32 {
        self.arrows(j, i) as i32
    }

    /// The power series `u^{-#(j→i)} / ζ_ij(u)`, at least `len` coefficients.
    /// Results are memoised and extended on demand; safe to call concurrently.
    pub fn recip_series(&self, i: usize, j: usize, len: usize) -> Arc<Vec<F>> {
        if let Some(s) = self.series.read().unwrap().get(&(i, j)) {
            if s.len() >= len {
                return s.clone();
            }
        }
        let mut guard = self.series.write().unwrap();
        let mut coeffs: Vec<F> = guard.get(&(i, j)).map(|s| s.as_ref().clone()).unwrap_or_default();
        if coeffs.len() < len {
            let zt = self.zeta_tilde(i, j);
            // ζ̃(u) = u^low P(u) with P(0) != 0
            let den: Vec<F> = zt.coeffs.clone();
            let num: Vec<F> = if i == j { vec![F::one(), -F::one()] } else { vec![F::one()] };
            extend_quotient(&num, &den, &mut coeffs, len.max(8));
        }
        let arc = Arc::new(coeffs);
        guard.insert((i, j), arc.clone());
        arc
    }

    /// `1/ζ_ij(u)` truncated to exponents `≤ order`, as a Laurent polynomial
    /// starting at `u^{#(j→i)}`.
    pub fn recip_zeta_series(&self, i: usize, j: usize, order: i32) -> Laurent1<F> {
        let lead = self.recip_lead(i, j);
        if order < lead {
            return Laurent1 { low: 0, coeffs: Vec::new() };
        }
        let len = (order - lead + 1) as usize;
        let s = self.recip_series(i, j, len);
        Laurent1 { low: lead, coeffs: s[..len].to_vec() }
    }

    /// Maps every parameter through `f`, e.g. to specialise numerically.
    pub fn map_params<G: Field>(&self, f: impl Fn(&F) -> Result<G>) -> Result<Quiver<G>> {
        let q = f(&self.q)?;
        let t = self.t.iter().map(&f).collect::<Result<Vec<_>>>()?;
        let symbols = self.symbols.iter().map(|(n, v)| Ok((n.clone(), f(v)?))).collect::<Result<Vec<_>>>()?;
        let mut out = Quiver::new(self.vertices.clone(), self.edges.clone(), q, t)?.with_symbols(symbols);
        out.generic_asserted = self.generic_asserted;
        Ok(out)
    }
}

impl Quiver<ParamScalar> {
    /// Evaluates all parameters at rational values of the ring parameters.
    pub fn specialize(&self, ring: &Arc<ParamRing>, values: &[(&str, BigRational)]) -> Result<Quiver<BigRational>> {
        let vals = ring
            .names()
            .iter()
            .map(|n| {
                values
                    .iter()
                    .find(|(k, _)| k == n)
                    .map(|(_, v)| v.clone())
                    .ok_or_else(|| Error::InvalidArgument(format!("no value for parameter `{n}`")))
            })
            .collect::<Result<Vec<_>>>()?;
        self.map_params(|x| x.eval(&vals))
    }
}

#[cfg(test)]
mod tests {
    use super::catalog;
    use super::*;
    use crate::scalars::sym;
    use num_traits::{One, Zero};

    #[test]
    fn a2_counts_and_kernels() {
        let (quiver, ring) = catalog::a2();
        let q = sym(&ring, "q");
        let t = sym(&ring, "t");
        assert_eq!(quiver.arrows(0, 1), 1);
        assert_eq!(quiver.arrows(1, 0), 0);
        assert_eq!(quiver.total(1, 0), 1);
        // ζ_ij(x) = 1/t - x, ζ_ji(x) = 1 - t/(q x)
        let zij = quiver.zeta_tilde(0, 1);
        assert_eq!((zij.low, zij.coeffs.clone()), (0, vec![t.inv().unwrap(), -ParamScalar::one()]));
        let zji = quiver.zeta_tilde(1, 0);
        assert_eq!(zji.low, -1);
        assert_eq!(zji.coeffs, vec![t.checked_div(&q).unwrap().neg_ref(), ParamScalar::one()]);
        // ζ_ii(x) = (1 - x/q)/(1 - x)
        let (zii, pole) = quiver.zeta(0, 0);
        assert_eq!(pole, 1);
        assert_eq!(zii.coeffs, vec![ParamScalar::one(), q.inv().unwrap().neg_ref()]);
    }

    #[test]
    fn reciprocal_series_times_kernel_is_one() {
        let (quiver, _) = catalog::jordan(2);
        let order = 6;
        for (i, j) in [(0, 0)] {
            let r = quiver.recip_zeta_series(i, j, order);
            assert_eq!(r.low, quiver.arrows(j, i) as i32);
            // ζ̃(u) * (1/ζ)(u) = (1 - u)^δ up to the truncation order
            let prod = quiver.zeta_tilde(i, j).mul(&r);
            for e in prod.low..=order + quiver.zeta_tilde(i, j).low {
                let expect = match e {
                    0 => ParamScalar::one(),
                    1 if i == j => -ParamScalar::one(),
                    _ => ParamScalar::zero(),
                };
                assert_eq!(prod.coeff(e), expect, "exponent {e}");
            }
        }
    }

    #[test]
    fn reciprocal_series_a2_closed_form() {
        // 1/ζ_ji(u) = 1/(1 - t/(q u)) = -Σ_{k≥1} (q u / t)^k
        let (quiver, ring) = catalog::a2();
        let qt = sym(&ring, "q").checked_div(&sym(&ring, "t")).unwrap();
        let r = quiver.recip_zeta_series(1, 0, 5);
        assert_eq!(r.low, 1);
        for k in 1..=5 {
            assert_eq!(r.coeff(k), qt.powi(k as i64).unwrap().neg_ref());
        }
    }

    #[test]
    fn flat_multiplicities() {
        let (quiver, ring) = catalog::two_loops_equal();
        let t = sym(&ring, "t");
        let qt = sym(&ring, "q").checked_div(&t).unwrap();
        assert_eq!(quiver.flat_multiplicity(0, 0, &t), 2);
        assert_eq!(quiver.flat_multiplicity(0, 0, &qt), 2);
        assert_eq!(quiver.flat_multiplicity(0, 0, &sym(&ring, "q")), 0);
        let (jordan, r2) = catalog::jordan(2);
        assert_eq!(jordan.flat_multiplicity(0, 0, &sym(&r2, "t1")), 1);
    }

    #[test]
    fn zeta_symmetry_under_inversion() {
        let (quiver, _) = catalog::kronecker();
        for i in 0..2 {
            for j in 0..2 {
                let a = quiver.zeta_tilde(i, j).mul(&quiver.zeta_tilde(j, i).invert_variable());
                let b = quiver.zeta_tilde(j, i).invert_variable().mul(&quiver.zeta_tilde(i, j));
                assert_eq!(a, b);
            }
        }
    }

    #[test]
    fn doubled_edge_lookup() {
        let (quiver, ring) = catalog::kronecker();
        let e = quiver.doubled_edge("e2*").unwrap();
        assert_eq!((e.src, e.dst, e.reversed), (1, 0, true));
        assert_eq!(e.param, sym(&ring, "q").checked_div(&sym(&ring, "t2")).unwrap());
        assert!(quiver.doubled_edge("e3").is_err());
    }
}
