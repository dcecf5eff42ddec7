//! Randomized invariants across modules, over the symbolic test quivers.

use proptest::prelude::*;
use quiver_shuffle::loopgroup::{pair_word, upsilon};
use quiver_shuffle::polynomials::{ColorSignature, Exps, LaurentPoly, Var};
use quiver_shuffle::quiver::catalog;
use quiver_shuffle::shuffle::{shuffle_mul, ShuffleElement};
use quiver_shuffle::verify::{self, Suite, VerifyOptions};
use quiver_shuffle::words::{is_non_increasing, leading_word, test_polynomial, Letter, Word};
use quiver_shuffle::{Field, ParamScalar, UElement};

type S = ParamScalar;

fn q_param() -> S {
    catalog::a2().0.q().clone()
}

/// Coefficients `c q^k` keep the symbolic path honest without slowing it.
fn poly(sig: &ColorSignature, terms: &[(Vec<i32>, i64, i64)]) -> LaurentPoly<S> {
    poly_over(&q_param(), sig, terms)
}

fn poly_over(q: &S, sig: &ColorSignature, terms: &[(Vec<i32>, i64, i64)]) -> LaurentPoly<S> {
    LaurentPoly::from_terms(
        sig.clone(),
        terms.iter().map(|(e, c, k)| (Exps::from_slice(&e[..sig.total()]), S::from_i64(*c).mul_ref(&q.powi(*k).unwrap()))),
    )
}

fn terms_strategy(nvars: usize) -> impl Strategy<Value = Vec<(Vec<i32>, i64, i64)>> {
    proptest::collection::vec((proptest::collection::vec(-2i32..=2, nvars), -3i64..=3, -1i64..=1), 1..4)
}

/// Homogeneous terms: each exponent vector sums to `d`.
fn homogeneous_strategy(nvars: usize) -> impl Strategy<Value = Vec<(Vec<i32>, i64, i64)>> {
    (-2i32..=2, terms_strategy(nvars)).prop_map(|(d, mut terms)| {
        for (e, _, _) in &mut terms {
            let rest: i32 = e[1..].iter().sum();
            e[0] = d - rest;
        }
        terms
    })
}

fn word_strategy(nv: usize, len: std::ops::Range<usize>) -> impl Strategy<Value = Word> {
    proptest::collection::vec((0..nv, -2i64..=2), len).prop_map(|ls| Word::new(ls.into_iter().map(|(v, d)| Letter::new(v, d)).collect()))
}

fn element(q: &S, counts: Vec<usize>, terms: &[(Vec<i32>, i64, i64)]) -> ShuffleElement<S> {
    let sig = ColorSignature::new(counts);
    ShuffleElement::from_poly(poly_over(q, &sig, terms).symmetrize()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn symmetrize_twice_scales_by_factorials(terms in terms_strategy(3)) {
        let sig = ColorSignature::new(vec![2, 1]);
        let p = poly(&sig, &terms);
        let once = p.symmetrize();
        let factor = S::from_i64(sig.factorial_product() as i64);
        prop_assert_eq!(once.symmetrize(), once.scale(&factor));
    }

    #[test]
    fn symmetrize_is_linear(a in terms_strategy(3), b in terms_strategy(3)) {
        let sig = ColorSignature::new(vec![3]);
        let (pa, pb) = (poly(&sig, &a), poly(&sig, &b));
        let q = q_param();
        let lhs = pa.add(&pb.scale(&q)).unwrap().symmetrize();
        let rhs = pa.symmetrize().add(&pb.symmetrize().scale(&q)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn substitution_is_multiplicative(a in terms_strategy(3), b in terms_strategy(3)) {
        let sig = ColorSignature::new(vec![2, 1]);
        let (pa, pb) = (poly(&sig, &a), poly(&sig, &b));
        let rules = [(Var::new(0, 1), q_param(), Var::new(0, 0)), (Var::new(1, 0), S::from_i64(-2), Var::new(0, 0))];
        let lhs = pa.mul(&pb).unwrap().substitute_vars(&rules);
        let rhs = pa.substitute_vars(&rules).mul(&pb.substitute_vars(&rules)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn divided_power_reproduces_the_product(f in terms_strategy(2), k in 1u32..=2) {
        let sig = ColorSignature::new(vec![1, 1]);
        let (u, v) = (Var::new(1, 0), Var::new(0, 0));
        let gamma = q_param();
        let linear = LaurentPoly::var_power(sig.clone(), u, 1).sub(&LaurentPoly::var_power(sig.clone(), v, 1).scale(&gamma)).unwrap();
        let base = poly(&sig, &f);
        let p = base.mul(&linear.pow(k)).unwrap();
        let quotient = p.divisible_by_power(u, &gamma, v, k).expect("divisible by construction");
        prop_assert_eq!(quotient.mul(&linear.pow(k)).unwrap(), p);
        prop_assert_eq!(quotient, base);
    }

    #[test]
    fn shuffle_product_is_associative_and_graded(
        a in homogeneous_strategy(2), b in homogeneous_strategy(1), c in homogeneous_strategy(1), pick in 0usize..4
    ) {
        let (name, (q, _)) = catalog::test_quivers().swap_remove(pick);
        let nv = q.num_vertices();
        let counts = |v: usize, k: usize| { let mut c = vec![0; nv]; c[v % nv] = k; c };
        let (x, y, z) = (element(q.q(), counts(0, 2), &a), element(q.q(), counts(1, 1), &b), element(q.q(), counts(0, 1), &c));
        let xy = shuffle_mul(&q, &x, &y).unwrap();
        prop_assert_eq!(xy.sig(), &x.sig().add(y.sig()), "{}", name);
        prop_assert_eq!(xy.vdeg(), x.vdeg() + y.vdeg());
        let left = shuffle_mul(&q, &xy, &z).unwrap();
        let right = shuffle_mul(&q, &x, &shuffle_mul(&q, &y, &z).unwrap()).unwrap();
        prop_assert_eq!(left, right, "{}", name);
    }

    #[test]
    fn upsilon_is_an_algebra_map(u in word_strategy(2, 1..3), w in word_strategy(2, 1..3)) {
        let (q, _) = catalog::a2();
        let (x, y) = (UElement::word(u), UElement::word(w));
        let lhs = upsilon(&q, &x.mul(&y)).unwrap();
        let rhs = shuffle_mul(&q, &upsilon(&q, &x).unwrap(), &upsilon(&q, &y).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn pairing_is_triangular(w in word_strategy(2, 1..4)) {
        let (q, _) = catalog::a2();
        prop_assume!(is_non_increasing(&q, &w));
        let r = test_polynomial(&q, &w).unwrap();
        let lead = leading_word(&q, &r).unwrap();
        prop_assert_ne!(pair_word(&q, &lead, &r), S::from_i64(0));
    }
}

#[test]
fn reports_are_deterministic_for_a_seed() {
    let opts = VerifyOptions { seed: 7, ..Default::default() };
    for suite in [Suite::LeadingWord, Suite::QuadPairing] {
        let a = verify::report(&verify::run_default(suite, &opts));
        let b = verify::report(&verify::run_default(suite, &opts));
        assert_eq!(a, b, "{}", suite.name());
    }
}

#[test]
fn serialized_objects_re_parse() {
    let (q, _) = catalog::jordan(1);
    let names = q.vertices();
    let x = UElement::parse("(2) / (1) * [i^(1) i^(-2)]\n+ (1*q^1) / (1) * [i^(0) i^(-1)]", &q).unwrap();
    assert_eq!(UElement::parse(&x.to_text(names), &q).unwrap(), x);
    let r = upsilon(&q, &x).unwrap();
    assert_eq!(ShuffleElement::parse(&r.to_text(names), &q).unwrap(), r);
    let w = Word::parse("[i^(3) i^(-1)]", names).unwrap();
    assert_eq!(Word::parse(&w.to_text(names), names).unwrap(), w);
}
