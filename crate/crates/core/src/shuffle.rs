//! The big shuffle algebra and the wheel conditions cutting out the small one.
//!
//! Products are computed with cleared denominators. Writing
//! `ζ_ii(z_a/z_b) = ζ̃_ii(z_a/z_b) z_b / (z_b - z_a)`, the symmetrised product
//! becomes `Antisym(X) / (Δ ∏ n_i! n'_i!)`, where `Δ` is the per-color
//! Vandermonde product and `X` is a Laurent polynomial; the division by `Δ`
//! is carried out through the Schur expansion of the alternant.

use std::fmt;

use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::polynomials::{vandermonde, Alternant, ColorSignature, Exps, LaurentPoly, SymLaurent, Var};
use crate::quiver::Quiver;

/// Default bound on the total number of variables of a product.
pub const DEFAULT_SLOT_CAP: usize = 8;

/// An element of the big shuffle algebra of bidegree `(sig, vdeg)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShuffleElement<F>(pub SymLaurent<F>);

impl<F: Field> ShuffleElement<F> {
    pub fn new(value: SymLaurent<F>) -> Self {
        ShuffleElement(value)
    }

    /// Symmetric homogeneous polynomial; its degree is read off the terms.
    pub fn from_poly(poly: LaurentPoly<F>) -> Result<Self> {
        Ok(ShuffleElement(SymLaurent::from_poly(poly)?))
    }

    /// The function 1 in zero variables.
    pub fn unit(num_vertices: usize) -> Self {
        ShuffleElement(SymLaurent { poly: LaurentPoly::one(ColorSignature::zero(num_vertices)), vdeg: 0 })
    }

    /// `z_{i1}^d`
    pub fn generator(num_vertices: usize, vertex: usize, d: i64) -> Self {
        let sig = ColorSignature::unit(num_vertices, vertex);
        ShuffleElement(SymLaurent { poly: LaurentPoly::var_power(sig, Var::new(vertex, 0), d as i32), vdeg: d })
    }

    pub fn zero(sig: ColorSignature, vdeg: i64) -> Self {
        ShuffleElement(SymLaurent::zero(sig, vdeg))
    }

    pub fn sig(&self) -> &ColorSignature {
        self.0.sig()
    }

    pub fn vdeg(&self) -> i64 {
        self.0.vdeg
    }

    pub fn poly(&self) -> &LaurentPoly<F> {
        &self.0.poly
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.vdeg() != other.vdeg() && !self.is_zero() && !other.is_zero() {
            return Err(Error::InvalidArgument(format!("vertical degrees {} and {} differ", self.vdeg(), other.vdeg())));
        }
        let vdeg = if self.is_zero() { other.vdeg() } else { self.vdeg() };
        Ok(ShuffleElement(SymLaurent { poly: self.poly().add(other.poly())?, vdeg }))
    }

    pub fn scale(&self, s: &F) -> Self {
        ShuffleElement(SymLaurent { poly: self.poly().scale(s), vdeg: self.vdeg() })
    }

    pub fn to_text(&self, names: &[String]) -> String {
        self.0.to_text(names)
    }

    pub fn parse(text: &str, quiver: &Quiver<F>) -> Result<Self> {
        let resolve = |s: &str| quiver.resolve_symbol(s);
        Ok(ShuffleElement(SymLaurent::parse(text, quiver.vertices(), &resolve)?))
    }
}

impl<F: Field> fmt::Display for ShuffleElement<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} vdeg {} ({} terms)", self.sig(), self.vdeg(), self.poly().len())
    }
}

/// Product of linear factors `z[a] - z[b]` over `a < b` within each color,
/// restricted to slots in `[from_i, to_i)` for each color `i`.
fn partial_vandermonde<F: Field>(sig: &ColorSignature, ranges: &[(usize, usize)]) -> LaurentPoly<F> {
    let mut v = LaurentPoly::one(sig.clone());
    let n = sig.total();
    for (i, &(lo, hi)) in ranges.iter().enumerate() {
        for a in lo..hi {
            for b in a + 1..hi {
                let mut ea: Exps = SmallVec::from_elem(0, n);
                ea[sig.var_index(Var::new(i, a))] = 1;
                let mut eb: Exps = SmallVec::from_elem(0, n);
                eb[sig.var_index(Var::new(i, b))] = 1;
                let lin = LaurentPoly::from_terms(sig.clone(), [(ea, F::one()), (eb, -F::one())]);
                v = v.mul(&lin).expect("same signature");
            }
        }
    }
    v
}

/// The shuffle product `R * R'`.
pub fn shuffle_mul<F: Field>(quiver: &Quiver<F>, r: &ShuffleElement<F>, s: &ShuffleElement<F>) -> Result<ShuffleElement<F>> {
    shuffle_mul_capped(quiver, r, s, DEFAULT_SLOT_CAP)
}

pub fn shuffle_mul_capped<F: Field>(quiver: &Quiver<F>, r: &ShuffleElement<F>, s: &ShuffleElement<F>, cap: usize) -> Result<ShuffleElement<F>> {
    let nv = quiver.num_vertices();
    if r.sig().num_vertices() != nv || s.sig().num_vertices() != nv {
        return Err(Error::SignatureMismatch(r.sig().to_string(), s.sig().to_string()));
    }
    let target = r.sig().add(s.sig());
    if target.total() > cap {
        return Err(Error::SignatureOverflow { cap, got: target.total() });
    }
    let vdeg = r.vdeg() + s.vdeg();
    if r.is_zero() || s.is_zero() {
        return Ok(ShuffleElement::zero(target, vdeg));
    }
    let n1 = r.sig().counts().to_vec();
    let n2 = s.sig().counts().to_vec();
    let ra = r.poly().embed(&target, &vec![0; nv]);
    let rb = s.poly().embed(&target, &n1);
    // kernels over cross pairs (first block, second block)
    let mut factors = Vec::new();
    let mut sign_odd = false;
    for i in 0..nv {
        for j in 0..nv {
            for a in 0..n1[i] {
                for b in n1[j]..n1[j] + n2[j] {
                    let (va, vb) = (Var::new(i, a), Var::new(j, b));
                    let mut z = quiver.zeta_tilde_at(i, j, &target, va, vb);
                    if i == j {
                        let mut e: Exps = SmallVec::from_elem(0, target.total());
                        e[target.var_index(vb)] = 1;
                        z = z.mul_monomial(&e, &F::one());
                    }
                    factors.push(z);
                }
            }
        }
        sign_odd ^= (n1[i] * n2[i]) % 2 == 1;
    }
    let first: Vec<(usize, usize)> = (0..nv).map(|i| (0, n1[i])).collect();
    let second: Vec<(usize, usize)> = (0..nv).map(|i| (n1[i], n1[i] + n2[i])).collect();
    factors.push(partial_vandermonde(&target, &first));
    factors.push(partial_vandermonde(&target, &second));
    factors.push(ra);
    factors.push(rb);
    let denom = r.sig().factorial_product() * s.sig().factorial_product();
    let mut scale = F::from_bigint(denom.into()).inv().expect("nonzero factorials");
    if sign_odd {
        scale = scale.neg_ref();
    }
    let refs: Vec<&LaurentPoly<F>> = factors.iter().collect();
    let poly = Alternant::of_product(&refs).symmetric_quotient_scaled(&scale);
    Ok(ShuffleElement(SymLaurent { poly, vdeg }))
}

/// Reference product by explicit rational-function arithmetic: each
/// permutation's summand is put over the common denominator
/// `∏_{i, a<b} (z_ia - z_ib)` (up to sign). Exponential; used as an oracle.
pub fn shuffle_mul_reference<F: Field>(quiver: &Quiver<F>, r: &ShuffleElement<F>, s: &ShuffleElement<F>) -> Result<ShuffleElement<F>> {
    let nv = quiver.num_vertices();
    let target = r.sig().add(s.sig());
    let n1 = r.sig().counts().to_vec();
    let n2 = s.sig().counts().to_vec();
    let ra = r.poly().embed(&target, &vec![0; nv]);
    let rb = s.poly().embed(&target, &n1);
    // numerator of the unsymmetrised summand over ∏_{cross same color} (z_b - z_a)
    let mut num = ra.mul(&rb)?;
    for i in 0..nv {
        for j in 0..nv {
            for a in 0..n1[i] {
                for b in n1[j]..n1[j] + n2[j] {
                    let (va, vb) = (Var::new(i, a), Var::new(j, b));
                    num = num.mul(&quiver.zeta_tilde_at(i, j, &target, va, vb))?;
                    if i == j {
                        let mut e: Exps = SmallVec::from_elem(0, target.total());
                        e[target.var_index(vb)] = 1;
                        num = num.mul_monomial(&e, &F::one());
                    }
                }
            }
        }
    }
    // denominator D = ∏_{cross} (z_b - z_a); full Δ = ∏_{a<b} (z_a - z_b).
    // summand = num / D = num * (Δ / D) / Δ, and Δ / D is a polynomial.
    let delta = vandermonde::<F>(&target);
    let mut cofactor = delta.clone();
    for (i, (&c1, &c2)) in n1.iter().zip(&n2).enumerate() {
        for a in 0..c1 {
            for b in c1..c1 + c2 {
                // (z_b - z_a) = -(z_a - z_b)
                cofactor =
                    cofactor.div_linear(Var::new(i, a), &F::one(), Var::new(i, b)).ok_or_else(|| Error::InexactDivision("cofactor".into()))?.neg();
            }
        }
    }
    let summand = num.mul(&cofactor)?;
    // Σ_σ σ(summand / Δ) = Σ_σ sgn(σ) σ(summand) / Δ
    let alt = Alternant::of(&summand);
    let denom = r.sig().factorial_product() * s.sig().factorial_product();
    let scale = F::from_bigint(denom.into()).inv().expect("nonzero");
    let poly = alt.materialize().div_vandermonde().ok_or_else(|| Error::InexactDivision("reference product".into()))?.scale(&scale);
    Ok(ShuffleElement(SymLaurent { poly, vdeg: r.vdeg() + s.vdeg() }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WheelMode {
    Generic,
    Specialized,
}

/// A violated wheel condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WheelWitness<F> {
    /// Edge label (`e2*`) or, in specialized mode, `i->j @ γ^k`.
    pub condition: String,
    pub substitution: String,
    /// The specialised polynomial (generic) or the polynomial that failed to
    /// be divisible (specialized).
    pub residual: LaurentPoly<F>,
}

/// `Ok(())` if `R` satisfies the wheel conditions, otherwise the first
/// violation in a deterministic order.
pub fn wheel_check<F: Field>(quiver: &Quiver<F>, r: &ShuffleElement<F>, mode: WheelMode) -> std::result::Result<(), WheelWitness<F>> {
    match mode {
        WheelMode::Generic => wheel_generic(quiver, r),
        WheelMode::Specialized => wheel_specialized(quiver, r),
    }
}

/// The third variable of a wheel: `z_{j1}`, or `z_{i3}` when `j = i`.
/// `None` if the signature has too few slots.
fn wheel_third(sig: &ColorSignature, i: usize, j: usize) -> Option<Var> {
    if sig.count(i) < 2 {
        return None;
    }
    if i == j {
        (sig.count(i) >= 3).then(|| Var::new(i, 2))
    } else {
        (sig.count(j) >= 1).then(|| Var::new(j, 0))
    }
}

fn wheel_generic<F: Field>(quiver: &Quiver<F>, r: &ShuffleElement<F>) -> std::result::Result<(), WheelWitness<F>> {
    let sig = r.sig();
    let names = quiver.vertices();
    for e in quiver.doubled_edges() {
        let Some(third) = wheel_third(sig, e.src, e.dst) else {
            continue;
        };
        let (c, a) = (Var::new(e.src, 0), Var::new(e.src, 1));
        let p = r.poly().substitute_vars(&[(a, quiver.q().clone(), c), (third, e.param.clone(), c)]);
        if !p.is_zero() {
            return Err(WheelWitness {
                condition: e.label(),
                substitution: format!(
                    "z[{i},2] = q z[{i},1], z[{j},{b}] = t_{lab} z[{i},1]",
                    i = names[e.src],
                    j = names[e.dst],
                    b = third.slot + 1,
                    lab = e.label()
                ),
                residual: p,
            });
        }
    }
    Ok(())
}

fn wheel_specialized<F: Field>(quiver: &Quiver<F>, r: &ShuffleElement<F>) -> std::result::Result<(), WheelWitness<F>> {
    let sig = r.sig();
    let names = quiver.vertices();
    for i in 0..quiver.num_vertices() {
        if sig.count(i) < 2 {
            continue;
        }
        let (c, a) = (Var::new(i, 0), Var::new(i, 1));
        let p = r.poly().substitute_vars(&[(a, quiver.q().clone(), c)]);
        for j in 0..quiver.num_vertices() {
            let Some(third) = wheel_third(sig, i, j) else {
                continue;
            };
            for (gamma, mult) in quiver.distinct_params(i, j) {
                if p.divisible_by_power(third, &gamma, c, mult as u32).is_none() {
                    return Err(WheelWitness {
                        condition: format!("{}->{} @ ({})^{}", names[i], names[j], gamma, mult),
                        substitution: format!("z[{i},2] = q z[{i},1]", i = names[i]),
                        residual: p,
                    });
                }
            }
        }
    }
    Ok(())
}

/// Whether `R * R'` satisfies the wheel conditions, given that both factors do.
pub fn is_small_algebra_closed_sample<F: Field>(quiver: &Quiver<F>, r: &ShuffleElement<F>, s: &ShuffleElement<F>, mode: WheelMode) -> Result<bool> {
    if wheel_check(quiver, r, mode).is_err() || wheel_check(quiver, s, mode).is_err() {
        return Err(Error::InvalidArgument("factors must satisfy the wheel conditions".into()));
    }
    Ok(wheel_check(quiver, &shuffle_mul(quiver, r, s)?, mode).is_ok())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::catalog;
    use crate::scalars::{sym, ParamScalar};
    use num_traits::One;

    type S = ParamScalar;

    fn gen(q: &Quiver<S>, v: usize, d: i64) -> ShuffleElement<S> {
        ShuffleElement::generator(q.num_vertices(), v, d)
    }

    #[test]
    fn unit_law() {
        let (quiver, _) = catalog::a2();
        let x = shuffle_mul(&quiver, &gen(&quiver, 0, 2), &gen(&quiver, 1, -1)).unwrap();
        let u = ShuffleElement::unit(2);
        assert_eq!(shuffle_mul(&quiver, &x, &u).unwrap(), x);
        assert_eq!(shuffle_mul(&quiver, &u, &x).unwrap(), x);
    }

    #[test]
    fn a2_product_of_generators() {
        let (quiver, ring) = catalog::a2();
        let p = shuffle_mul(&quiver, &gen(&quiver, 0, 0), &gen(&quiver, 1, 0)).unwrap();
        // 1/t - z_i1 / z_j1
        let sig = ColorSignature::new(vec![1, 1]);
        let expect = LaurentPoly::from_terms(
            sig,
            [(SmallVec::from_slice(&[0, 0]), sym(&ring, "t").inv().unwrap()), (SmallVec::from_slice(&[1, -1]), -S::one())],
        );
        assert_eq!(p.poly(), &expect);
        assert_eq!(p.vdeg(), 0);
    }

    #[test]
    fn jordan_product_matches_rational_oracle() {
        // z^0 * z^0 = ζ(z1/z2) + ζ(z2/z1); check (z1 - z2) * result against
        // ζ̃(z1/z2) z2 ... combined over the common denominator z1 - z2.
        let (quiver, _) = catalog::jordan(1);
        let p = shuffle_mul(&quiver, &gen(&quiver, 0, 0), &gen(&quiver, 0, 0)).unwrap();
        let sig = ColorSignature::new(vec![2]);
        let (v1, v2) = (Var::new(0, 0), Var::new(0, 1));
        // ζ(z1/z2) = ζ̃(z1/z2) z2 / (z2 - z1), ζ(z2/z1) = ζ̃(z2/z1) z1 / (z1 - z2)
        let z1 = LaurentPoly::<S>::var_power(sig.clone(), v1, 1);
        let z2 = LaurentPoly::<S>::var_power(sig.clone(), v2, 1);
        let lhs = p.poly().mul(&z1.sub(&z2).unwrap()).unwrap();
        let a = quiver.zeta_tilde_at(0, 0, &sig, v2, v1).mul(&z1).unwrap();
        let b = quiver.zeta_tilde_at(0, 0, &sig, v1, v2).mul(&z2).unwrap();
        assert_eq!(lhs, a.sub(&b).unwrap());
    }

    #[test]
    fn agrees_with_reference_product() {
        for (_, (quiver, _)) in catalog::test_quivers() {
            let nv = quiver.num_vertices();
            let x = shuffle_mul(&quiver, &gen(&quiver, 0, 1), &gen(&quiver, nv - 1, -1)).unwrap();
            let y = gen(&quiver, 0, 2);
            let fast = shuffle_mul(&quiver, &x, &y).unwrap();
            let slow = shuffle_mul_reference(&quiver, &x, &y).unwrap();
            assert_eq!(fast, slow);
        }
    }

    #[test]
    fn slot_cap() {
        let (quiver, _) = catalog::jordan(1);
        let g = gen(&quiver, 0, 0);
        let two = shuffle_mul(&quiver, &g, &g).unwrap();
        assert!(matches!(shuffle_mul_capped(&quiver, &two, &g, 2), Err(Error::SignatureOverflow { cap: 2, got: 3 })));
    }

    #[test]
    fn wheel_examples() {
        let (quiver, _) = catalog::jordan(1);
        assert!(wheel_check(&quiver, &gen(&quiver, 0, 3), WheelMode::Generic).is_ok());
        let one = ShuffleElement::from_poly(LaurentPoly::<S>::one(ColorSignature::new(vec![3]))).unwrap();
        let w = wheel_check(&quiver, &one, WheelMode::Generic).unwrap_err();
        assert_eq!(w.residual, LaurentPoly::one(ColorSignature::new(vec![3])));
        assert!(wheel_check(&quiver, &one, WheelMode::Specialized).is_err());
        let g = gen(&quiver, 0, 0);
        let three = shuffle_mul(&quiver, &shuffle_mul(&quiver, &g, &gen(&quiver, 0, 1)).unwrap(), &g).unwrap();
        assert!(wheel_check(&quiver, &three, WheelMode::Generic).is_ok());
        assert!(wheel_check(&quiver, &three, WheelMode::Specialized).is_ok());
    }

    #[test]
    fn text_round_trip() {
        let (quiver, _) = catalog::kronecker();
        let x = shuffle_mul(&quiver, &gen(&quiver, 0, 1), &gen(&quiver, 1, 0)).unwrap();
        let t = x.to_text(quiver.vertices());
        assert_eq!(ShuffleElement::parse(&t, &quiver).unwrap(), x);
    }
}
