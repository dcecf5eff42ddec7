//! Cubic relation families for specialised parameters: one family per
//! vertex pair, distinct doubled-edge parameter `γ` and `k` up to its
//! multiplicity.

use super::cubic::CubicSpec;
use super::cubic_element;
use super::straighten::{straighten, StraightenOptions};
use crate::error::Result;
use crate::field::Field;
use crate::quiver::Quiver;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationFamily<F> {
    pub i: usize,
    pub j: usize,
    pub gamma: F,
    pub k: u32,
    /// Triples with `|a - b|, |b - c| ≤ n_cap` represent each degree.
    pub n_cap: i64,
}

impl<F: Field> RelationFamily<F> {
    /// Representative triples `(a, b, c)` of total degree `d`.
    pub fn triples(&self, d: i64) -> Vec<(i64, i64, i64)> {
        let mut out = Vec::new();
        let b0 = d.div_euclid(3);
        for b in b0 - self.n_cap..=b0 + self.n_cap {
            for a in b - self.n_cap..=b + self.n_cap {
                let c = d - a - b;
                if (b - c).abs() <= self.n_cap {
                    out.push((a, b, c));
                }
            }
        }
        out
    }

    pub fn specs(&self, d: i64) -> Vec<CubicSpec<F>> {
        self.triples(d).into_iter().map(|abc| CubicSpec::specialized(self.i, self.j, self.gamma.clone(), self.k, abc)).collect()
    }
}

/// Rank of a set of word combinations, by elimination on their coefficients.
fn rank<F: Field>(rows: &[super::UElement<F>]) -> usize {
    let mut basis: Vec<(crate::words::Word, super::UElement<F>)> = Vec::new();
    for row in rows {
        let mut r = row.clone();
        for (pivot, b) in &basis {
            let c = r.coeff(pivot);
            if !c.is_zero() {
                r = r.sub(&b.scale(&c));
            }
        }
        if let Some((w, c)) = r.terms().iter().next_back().map(|(w, c)| (w.clone(), c.clone())) {
            let inv = c.inv().expect("nonzero pivot");
            let r = r.scale(&inv);
            // keep the basis reduced against the new pivot
            for (_, b) in basis.iter_mut() {
                let c = b.coeff(&w);
                if !c.is_zero() {
                    *b = b.sub(&r.scale(&c));
                }
            }
            basis.push((w, r));
        }
    }
    basis.len()
}

/// Smallest `n_cap` at degree `d` such that one more ring of triples adds
/// nothing after straightening; capped at `max_cap`.
pub fn estimate_n_cap<F: Field>(quiver: &Quiver<F>, family: &RelationFamily<F>, d: i64, max_cap: i64, opts: &StraightenOptions) -> Result<i64> {
    let straightened = |cap: i64| -> Result<Vec<super::UElement<F>>> {
        let fam = RelationFamily { n_cap: cap, ..family.clone() };
        fam.specs(d).iter().map(|s| Ok(straighten(quiver, &cubic_element(quiver, s)?, opts)?.to_element())).collect()
    };
    let mut prev = rank(&straightened(0)?);
    for cap in 1..=max_cap {
        let r = rank(&straightened(cap)?);
        if r == prev {
            return Ok(cap - 1);
        }
        prev = r;
    }
    Ok(max_cap)
}

/// One family per `(i, j, γ, k)` with `k ≤ ♭_ij(γ)`, each with the default
/// `n_cap = k - 1`: in a fixed degree the pairing of a specialised element
/// depends polynomially on `c` with degree below `k`, so `k` consecutive
/// values of `c` span the family.
pub fn relations_for_multiplicities<F: Field>(quiver: &Quiver<F>) -> Vec<RelationFamily<F>> {
    let nv = quiver.num_vertices();
    let mut out = Vec::new();
    for i in 0..nv {
        for j in 0..nv {
            for (gamma, mult) in quiver.distinct_params(i, j) {
                for k in 1..=mult as u32 {
                    out.push(RelationFamily { i, j, gamma: gamma.clone(), k, n_cap: k as i64 - 1 });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::catalog;
    use crate::scalars::sym;

    #[test]
    fn family_counts() {
        let (quiver, _) = catalog::kronecker();
        let fams = relations_for_multiplicities(&quiver);
        // two edges, each doubled, all parameters distinct
        assert_eq!(fams.len(), 4);
        assert!(fams.iter().all(|f| f.k == 1));
        let (quiver, ring) = catalog::two_loops_equal();
        let fams = relations_for_multiplicities(&quiver);
        let t = sym(&ring, "t");
        let at_t: Vec<u32> = fams.iter().filter(|f| f.gamma == t).map(|f| f.k).collect();
        assert_eq!(at_t, vec![1, 2]);
        let (quiver, _) = catalog::edgeless();
        assert!(relations_for_multiplicities(&quiver).is_empty());
    }

    #[test]
    fn triples_have_the_degree() {
        let (quiver, _) = catalog::jordan(1);
        let fam = &relations_for_multiplicities(&quiver)[0];
        let fam = RelationFamily { n_cap: 1, ..fam.clone() };
        for d in [-2, 0, 4] {
            let ts = fam.triples(d);
            assert!(ts.contains(&(d.div_euclid(3), d.div_euclid(3), d - 2 * d.div_euclid(3))) || !ts.is_empty());
            assert!(ts.iter().all(|(a, b, c)| a + b + c == d && (a - b).abs() <= 1 && (b - c).abs() <= 1));
        }
    }
}
