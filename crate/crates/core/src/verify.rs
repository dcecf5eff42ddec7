//! Named verification suites shared by the command line and the acceptance
//! tests. Every suite is deterministic for a fixed seed and reports one
//! [`Check`] per group of instances, carrying a witness when it fails.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use rand::Rng;

use crate::curve::{q_identity_holds, residue_sides, verify_genus_g_cubic, CurveData};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::loopgroup::{
    cubic_element, generic_wheel_rhs, in_relation_ideal, pair, qserre_element, quadratic_relation, relations_for_multiplicities,
    specialized_wheel_rhs, straighten, upsilon, verify_delta_identity, verify_delta_identity_generic, CubicSpec, StraightenOptions, UElement,
};
use crate::polynomials::ColorSignature;
use crate::quiver::{catalog, Edge, Quiver};
use crate::random::{random_exps_bounded, random_symmetric, random_symmetric_bounded, random_word, rng, Rng8};
use crate::scalars::{sym, ParamRing, ParamScalar};
use crate::shuffle::{is_small_algebra_closed_sample, shuffle_mul, wheel_check, ShuffleElement, WheelMode};
use crate::words::{associated_words, is_non_increasing, Word};

type S = ParamScalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    /// Why it failed, or a short summary of what was covered.
    pub detail: String,
}

impl Check {
    fn pass(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed: true, detail: detail.into() }
    }

    fn fail(name: impl Into<String>, detail: impl Into<String>) -> Self {
        Check { name: name.into(), passed: false, detail: detail.into() }
    }

    /// Passes iff every instance returned `Ok(None)`; the first `Some` or
    /// error becomes the witness.
    fn all(name: impl Into<String>, count: usize, outcomes: impl IntoIterator<Item = Result<Option<String>>>) -> Self {
        let name = name.into();
        for o in outcomes {
            match o {
                Ok(None) => {}
                Ok(Some(w)) => return Check::fail(name, w),
                Err(e) => return Check::fail(name, format!("error {}: {e}", e.kind())),
            }
        }
        Check::pass(name, format!("{count} instances"))
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} ({})", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    QuadPairing,
    CubicVanishing,
    WheelPairing,
    WheelPairingSpecialized,
    DeltaIdentity,
    Qserre,
    LeadingWord,
    StraightenRoundtrip,
    GenusG,
    ShuffleStructure,
}

impl Suite {
    pub const ALL: [Suite; 10] = [
        Suite::QuadPairing,
        Suite::CubicVanishing,
        Suite::WheelPairing,
        Suite::WheelPairingSpecialized,
        Suite::DeltaIdentity,
        Suite::Qserre,
        Suite::LeadingWord,
        Suite::StraightenRoundtrip,
        Suite::GenusG,
        Suite::ShuffleStructure,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::QuadPairing => "quad-pairing",
            Suite::CubicVanishing => "cubic-vanishing",
            Suite::WheelPairing => "wheel-pairing",
            Suite::WheelPairingSpecialized => "wheel-pairing-specialized",
            Suite::DeltaIdentity => "delta-identity",
            Suite::Qserre => "qserre",
            Suite::LeadingWord => "leading-word",
            Suite::StraightenRoundtrip => "straighten-roundtrip",
            Suite::GenusG => "genus-g",
            Suite::ShuffleStructure => "shuffle-structure",
        }
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| Error::InvalidArgument(format!("unknown suite `{s}`")))
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub seed: u64,
    pub straighten: StraightenOptions,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions { seed: 1, straighten: StraightenOptions::default() }
    }
}

impl VerifyOptions {
    /// A generator for one named stream, so suites do not share state.
    fn rng(&self, stream: u64) -> Rng8 {
        rng(self.seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(stream))
    }
}

/// Runs a suite on the quivers it is specified for.
pub fn run_default(suite: Suite, opts: &VerifyOptions) -> Vec<Check> {
    let quivers = catalog::test_quivers();
    let each = |f: &dyn Fn(&str, &Quiver<S>) -> Vec<Check>| quivers.iter().flat_map(|(n, (q, _))| f(n, q)).collect::<Vec<_>>();
    match suite {
        Suite::QuadPairing => each(&|n, q| vec![quad_pairing(n, q, 50, opts)]),
        Suite::CubicVanishing => each(&|n, q| cubic_vanishing(n, q, -2..=2)),
        Suite::WheelPairing => each(&|n, q| wheel_pairing(n, q, 20, opts)),
        Suite::WheelPairingSpecialized => {
            let (q, _) = catalog::two_loops_equal();
            wheel_pairing_specialized("two-loops", &q, &[1, 2], 10, opts)
        }
        Suite::DeltaIdentity => delta_identities(),
        Suite::Qserre => {
            let (q, _) = catalog::a2_qserre();
            qserre("a2", &q, -2..=2)
        }
        Suite::LeadingWord => vec![leading_word(200, opts)],
        Suite::StraightenRoundtrip => {
            let named: Vec<(&str, &Quiver<S>)> = quivers.iter().map(|(n, (q, _))| (*n, q)).collect();
            straighten_roundtrip(&named, 30, 20, opts)
        }
        Suite::GenusG => {
            let mut out = genus_g(&CurveData::generic(1), -1..=1, opts);
            out.extend(genus_g(&CurveData::generic(2), 0..=0, opts));
            out
        }
        // generic two-loop products in five variables run to ~10^7 integer terms
        Suite::ShuffleStructure => each(&|n, q| shuffle_structure(n, q, 10, if q.max_total() > 3 { 4 } else { 5 }, opts)),
    }
}

/// Runs a quiver suite on one user quiver. Suites without a quiver argument
/// run as in [`run_default`].
pub fn run_on_quiver(suite: Suite, name: &str, quiver: &Quiver<S>, opts: &VerifyOptions) -> Vec<Check> {
    match suite {
        Suite::QuadPairing => vec![quad_pairing(name, quiver, 50, opts)],
        Suite::CubicVanishing => cubic_vanishing(name, quiver, -2..=2),
        Suite::WheelPairing => wheel_pairing(name, quiver, 20, opts),
        Suite::WheelPairingSpecialized => wheel_pairing_specialized(name, quiver, &[1, 2], 10, opts),
        Suite::Qserre => qserre(name, quiver, -2..=2),
        Suite::StraightenRoundtrip => straighten_roundtrip(&[(name, quiver)], 30, 20, opts),
        Suite::ShuffleStructure => shuffle_structure(name, quiver, 10, 5, opts),
        Suite::DeltaIdentity | Suite::LeadingWord | Suite::GenusG => run_default(suite, opts),
    }
}

fn random_sig(g: &mut Rng8, nv: usize, n: usize) -> ColorSignature {
    let mut counts = vec![0; nv];
    for _ in 0..n {
        counts[g.gen_range(0..nv)] += 1;
    }
    ColorSignature::new(counts)
}

fn random_element(g: &mut Rng8, sig: &ColorSignature, d: i64, words: usize) -> UElement<S> {
    let mut x = UElement::zero();
    for _ in 0..words {
        let c = g.gen_range(1..=4) * if g.gen_bool(0.5) { 1 } else { -1 };
        x.add_term(random_word(g, sig, d, 2), S::from_i64(c));
    }
    x
}

/// Quadratic relations, padded by random words on both sides, pair to zero.
pub fn quad_pairing(name: &str, quiver: &Quiver<S>, samples: usize, opts: &VerifyOptions) -> Check {
    let mut g = opts.rng(1);
    let nv = quiver.num_vertices();
    let outcomes = (0..samples).map(|_| {
        let (i, j) = (g.gen_range(0..nv), g.gen_range(0..nv));
        let (a, b) = (g.gen_range(-2..=2), g.gen_range(-2..=2));
        // total length at most 4
        let pad = g.gen_range(0..=2usize);
        let left_len = g.gen_range(0..=pad);
        let side = |g: &mut Rng8, len: usize| {
            let sig = random_sig(g, nv, len);
            let d = g.gen_range(-1..=1) * len as i64;
            random_word(g, &sig, d, 1)
        };
        let (l, r) = (side(&mut g, left_len), side(&mut g, pad - left_len));
        let x = UElement::word(l).mul(&quadratic_relation(quiver, i, j, a, b)).mul(&UElement::word(r));
        let (sig, d) = x.grading(nv)?.ok_or(Error::ZeroPolynomial)?;
        let rr = random_symmetric(&mut g, &sig, -d, 3, 3);
        let v = pair(quiver, &x, &rr)?;
        Ok((!v.is_zero()).then(|| format!("i={i} j={j} a={a} b={b}: pairing {v}")))
    });
    Check::all(format!("quad-pairing {name}"), samples, outcomes)
}

/// `(a, b, c)` with `a + b + c = d` and neighbours at most one apart.
pub fn balanced_triples(d: i64) -> Vec<(i64, i64, i64)> {
    let b0 = d.div_euclid(3);
    let mut out = Vec::new();
    for b in b0 - 1..=b0 + 1 {
        for a in b - 1..=b + 1 {
            let c = d - a - b;
            if (b - c).abs() <= 1 {
                out.push((a, b, c));
            }
        }
    }
    out
}

/// `Υ(A^(e)_{a,b,c}) = 0` for every doubled edge and degree.
pub fn cubic_vanishing(name: &str, quiver: &Quiver<S>, degrees: std::ops::RangeInclusive<i64>) -> Vec<Check> {
    quiver
        .doubled_edges()
        .iter()
        .map(|edge| {
            let triples: Vec<_> = degrees.clone().flat_map(balanced_triples).collect();
            let outcomes = triples.iter().map(|&abc| {
                let x = cubic_element(quiver, &CubicSpec::generic(edge, abc))?;
                Ok((!in_relation_ideal(quiver, &x)?).then(|| format!("Υ(A{abc:?}) ≠ 0")))
            });
            Check::all(format!("cubic-vanishing {name} {}", edge.label()), triples.len(), outcomes)
        })
        .collect()
}

fn random_triple(g: &mut Rng8, d: i64) -> (i64, i64, i64) {
    let e = random_exps_bounded(g, 3, d, -3, 3).expect("degree within range");
    (e[0] as i64, e[1] as i64, e[2] as i64)
}

/// `⟨A^(e)_{a,b,c}, R⟩ = R(1, t_e, q)` on the wheel, for random `R` with
/// exponents in `[-3, 3]`.
pub fn wheel_pairing(name: &str, quiver: &Quiver<S>, samples: usize, opts: &VerifyOptions) -> Vec<Check> {
    let mut g = opts.rng(2);
    quiver
        .doubled_edges()
        .iter()
        .map(|edge| {
            let sig = ColorSignature::new((0..quiver.num_vertices()).map(|v| (v == edge.src) as usize * 2 + (v == edge.dst) as usize).collect());
            let outcomes: Vec<_> = (0..samples)
                .map(|_| {
                    let d = g.gen_range(-3..=3);
                    let abc = random_triple(&mut g, d);
                    let r = random_symmetric_bounded(&mut g, &sig, -d, 3, -3, 3).expect("feasible degree");
                    let spec = CubicSpec::generic(edge, abc);
                    let x = cubic_element(quiver, &spec)?;
                    let (lhs, rhs) = (pair(quiver, &x, &r)?, generic_wheel_rhs(quiver, &spec, &r)?);
                    Ok((lhs != rhs).then(|| format!("{abc:?}: pairing {lhs} vs wheel value {rhs}")))
                })
                .collect();
            Check::all(format!("wheel-pairing {name} {}", edge.label()), samples, outcomes)
        })
        .collect()
}

/// Specialised elements against the residue side, for each repeated
/// parameter and each `k` up to its multiplicity among `ks`.
pub fn wheel_pairing_specialized(name: &str, quiver: &Quiver<S>, ks: &[u32], samples: usize, opts: &VerifyOptions) -> Vec<Check> {
    let mut g = opts.rng(3);
    let mut out = Vec::new();
    for family in relations_for_multiplicities(quiver) {
        if !ks.contains(&family.k) {
            continue;
        }
        let nv = quiver.num_vertices();
        let sig = ColorSignature::new((0..nv).map(|v| (v == family.i) as usize * 2 + (v == family.j) as usize).collect());
        let outcomes: Vec<_> = (0..samples)
            .map(|_| {
                let d = g.gen_range(-3..=3);
                let abc = random_triple(&mut g, d);
                let r = random_symmetric_bounded(&mut g, &sig, -d, 3, -3, 3).expect("feasible degree");
                let spec = CubicSpec::specialized(family.i, family.j, family.gamma.clone(), family.k, abc);
                let x = cubic_element(quiver, &spec)?;
                let (lhs, rhs) = (pair(quiver, &x, &r)?, specialized_wheel_rhs(quiver, &spec, &r)?);
                Ok((lhs != rhs).then(|| format!("{abc:?}: pairing {lhs} vs residue side {rhs}")))
            })
            .collect();
        let label = format!("wheel-pairing-specialized {name} {}->{} @ {} k={}", family.i, family.j, family.gamma, family.k);
        out.push(Check::all(label, samples, outcomes));
    }
    if out.is_empty() {
        out.push(Check::fail(format!("wheel-pairing-specialized {name}"), "no repeated parameter with the requested k"));
    }
    out
}

pub fn delta_identities() -> Vec<Check> {
    let mut out = vec![];
    let named = |ok: bool, name: String| if ok { Check::pass(name, "all coefficients agree") } else { Check::fail(name, "coefficient mismatch") };
    out.push(named(verify_delta_identity_generic(6), "delta-identity generic order=6".into()));
    for (k, order) in [(1, 6), (2, 6), (3, 4)] {
        out.push(named(verify_delta_identity(k, order), format!("delta-identity k={k} order={order}")));
    }
    out
}

/// q-Serre elements and the specialised cubic elements at every mode in
/// `modes^3` all vanish under `Υ`.
pub fn qserre(name: &str, quiver: &Quiver<S>, modes: std::ops::RangeInclusive<i64>) -> Vec<Check> {
    let mut out = Vec::new();
    let nv = quiver.num_vertices();
    let mut triples = Vec::new();
    for a in modes.clone() {
        for b in modes.clone() {
            for c in modes.clone() {
                triples.push((a, b, c));
            }
        }
    }
    for e in quiver.edges() {
        for (s, t) in [(e.src, e.dst), (e.dst, e.src)] {
            if s == t || s >= nv {
                continue;
            }
            let outcomes = triples.iter().map(|&m| {
                let x = qserre_element(quiver, s, t, m)?;
                Ok((!in_relation_ideal(quiver, &x)?).then(|| format!("modes {m:?}")))
            });
            out.push(Check::all(format!("qserre {name} {s}->{t}"), triples.len(), outcomes));
        }
    }
    for family in relations_for_multiplicities(quiver) {
        let outcomes = triples.iter().map(|&abc| {
            let x = cubic_element(quiver, &CubicSpec::specialized(family.i, family.j, family.gamma.clone(), family.k, abc))?;
            Ok((!in_relation_ideal(quiver, &x)?).then(|| format!("modes {abc:?}")))
        });
        out.push(Check::all(
            format!("qserre {name} specialized {}->{} @ {} k={}", family.i, family.j, family.gamma, family.k),
            triples.len(),
            outcomes,
        ));
    }
    out
}

/// A random quiver on at most three vertices with `#_ij ≤ 3`.
fn random_quiver(g: &mut Rng8) -> Quiver<S> {
    loop {
        let nv = g.gen_range(1..=3);
        let mut edges = Vec::new();
        for src in 0..nv {
            for dst in 0..nv {
                for _ in 0..g.gen_range(0..=2) {
                    edges.push(Edge { src, dst });
                }
            }
        }
        let mut names = vec!["q".to_string()];
        names.extend((1..=edges.len()).map(|k| format!("t{k}")));
        let ring = ParamRing::new(&names).expect("distinct names");
        let t = (1..=edges.len()).map(|k| sym(&ring, &format!("t{k}"))).collect();
        let quiver = Quiver::new((0..nv).map(|v| format!("v{v}")).collect(), edges, sym(&ring, "q"), t).expect("well formed");
        if quiver.max_total() <= 3 {
            return quiver;
        }
    }
}

/// Exactly one ordering of a random monomial gives a non-increasing word.
pub fn leading_word(samples: usize, opts: &VerifyOptions) -> Check {
    let mut g = opts.rng(4);
    let outcomes: Vec<_> = (0..samples)
        .map(|_| {
            let quiver = random_quiver(&mut g);
            let n = g.gen_range(1..=4);
            let sig = random_sig(&mut g, quiver.num_vertices(), n);
            let exps: Vec<i32> = (0..n).map(|_| g.gen_range(-3..=3)).collect();
            let words = associated_words(&quiver, &sig, &exps)?;
            let hits = words.iter().filter(|w| is_non_increasing(&quiver, w)).count();
            Ok((hits != 1).then(|| format!("{hits} non-increasing orderings of {exps:?} in signature {sig}")))
        })
        .collect();
    Check::all("leading-word", samples, outcomes)
}

/// Straightening preserves all pairings and leaves a residual that
/// straightens to zero.
pub fn straighten_roundtrip(quivers: &[(&str, &Quiver<S>)], samples: usize, pairings: usize, opts: &VerifyOptions) -> Vec<Check> {
    let mut g = opts.rng(5);
    let mut per: Vec<Vec<Result<Option<String>>>> = vec![Vec::new(); quivers.len()];
    for k in 0..samples {
        let q = k % quivers.len();
        let quiver = quivers[q].1;
        let n = g.gen_range(1..=3);
        let sig = random_sig(&mut g, quiver.num_vertices(), n);
        let d = g.gen_range(-2..=2);
        let words = g.gen_range(1..=3);
        let x = random_element(&mut g, &sig, d, words);
        let mut one = || -> Result<Option<String>> {
            let s = straighten(quiver, &x, &opts.straighten)?;
            let y = s.to_element();
            if let Some(w) = y.terms().keys().find(|w| !is_non_increasing(quiver, w)) {
                return Ok(Some(format!("{} is not a basis word", w.to_text(quiver.vertices()))));
            }
            for _ in 0..pairings {
                let r = random_symmetric(&mut g, &sig, -d, 3, 3);
                let (a, b) = (pair(quiver, &x, &r)?, pair(quiver, &y, &r)?);
                if a != b {
                    return Ok(Some(format!("{} pairs to {a}, its expansion to {b}", x.to_text(quiver.vertices()))));
                }
            }
            let residual = straighten(quiver, &x.sub(&y), &opts.straighten)?;
            Ok((!residual.is_zero()).then(|| format!("residual of {} straightens to {} terms", x.to_text(quiver.vertices()), residual.coeffs.len())))
        };
        per[q].push(one());
    }
    quivers
        .iter()
        .zip(per)
        .map(|((name, _), outcomes)| {
            let n = outcomes.len();
            Check::all(format!("straighten-roundtrip {name}"), n, outcomes)
        })
        .collect()
}

/// The genus-`g` cubic relations for every loop over `ms`, the `Q_e`
/// identity and, for each loop, the residue identity on 10 random pairs.
pub fn genus_g(curve: &CurveData, ms: std::ops::RangeInclusive<i64>, opts: &VerifyOptions) -> Vec<Check> {
    let g_ = curve.genus;
    if g_ == 0 {
        return vec![Check::fail("genus-g g=0", "genus 0 has no cubic relations of this shape")];
    }
    let mut g = opts.rng(6);
    let mut out = Vec::new();
    for e in 1..=g_ {
        let outcomes = ms.clone().map(|m| Ok((!verify_genus_g_cubic(curve, e, m)?).then(|| format!("m = {m}"))));
        out.push(Check::all(format!("genus-g g={g_} e={e} cubic m={}..={}", ms.start(), ms.end()), ms.clone().count(), outcomes));
        let q_ok = q_identity_holds(curve, e);
        out.push(match q_ok {
            Ok(true) => Check::pass(format!("genus-g g={g_} e={e} Q-identity"), "cross-multiplied"),
            Ok(false) => Check::fail(format!("genus-g g={g_} e={e} Q-identity"), "sides differ"),
            Err(err) => Check::fail(format!("genus-g g={g_} e={e} Q-identity"), err.to_string()),
        });
        let sig = ColorSignature::new(vec![3]);
        let outcomes: Vec<_> = (0..10)
            .map(|_| {
                let dp = g.gen_range(-2..=2);
                let p = random_symmetric(&mut g, &sig, dp, 2, 2);
                let r = random_symmetric(&mut g, &sig, -dp, 2, 2);
                let (lhs, rhs) = residue_sides(curve, e, &p, &r)?;
                Ok((lhs != rhs).then(|| format!("contour side {lhs} vs residue side {rhs}")))
            })
            .collect();
        out.push(Check::all(format!("genus-g g={g_} e={e} residue identity"), 10, outcomes));
    }
    out
}

fn random_shuffle(g: &mut Rng8, nv: usize, n: usize) -> ShuffleElement<S> {
    let sig = random_sig(g, nv, n);
    let d = g.gen_range(-2..=2);
    ShuffleElement::new(random_symmetric(g, &sig, d, 2, 2))
}

/// Associativity on triples of total size at most `max_n`, unit, grading
/// and closure of the small algebra.
pub fn shuffle_structure(name: &str, quiver: &Quiver<S>, samples: usize, max_n: usize, opts: &VerifyOptions) -> Vec<Check> {
    let mut g = opts.rng(7);
    let nv = quiver.num_vertices();
    let mut assoc = Vec::new();
    let mut unit = Vec::new();
    let mut grading = Vec::new();
    let mut closure = Vec::new();
    for _ in 0..samples {
        let n1 = g.gen_range(1..=2);
        let n2 = g.gen_range(1..=(max_n - n1 - 1).min(2));
        let n3 = g.gen_range(1..=max_n - n1 - n2);
        let (a, b, c) = (random_shuffle(&mut g, nv, n1), random_shuffle(&mut g, nv, n2), random_shuffle(&mut g, nv, n3));
        assoc.push((|| {
            let l = shuffle_mul(quiver, &shuffle_mul(quiver, &a, &b)?, &c)?;
            let r = shuffle_mul(quiver, &a, &shuffle_mul(quiver, &b, &c)?)?;
            Ok((l != r).then(|| "(ab)c ≠ a(bc)".to_string()))
        })());
        unit.push((|| {
            let one = ShuffleElement::unit(nv);
            let ok = shuffle_mul(quiver, &one, &a)? == a && shuffle_mul(quiver, &a, &one)? == a;
            Ok((!ok).then(|| "1·a ≠ a or a·1 ≠ a".to_string()))
        })());
        grading.push((|| {
            let ab = shuffle_mul(quiver, &a, &b)?;
            let ok = *ab.sig() == a.sig().add(b.sig()) && ab.vdeg() == a.vdeg() + b.vdeg();
            Ok((!ok).then(|| format!("degree of product {} {}", ab.sig(), ab.vdeg())))
        })());
        closure.push((|| {
            // images of words satisfy the wheel conditions
            let mut word = |n: usize| {
                let sig = random_sig(&mut g, nv, n);
                let d = g.gen_range(-2..=2);
                upsilon(quiver, &UElement::word(random_word(&mut g, &sig, d, 2)))
            };
            let (r, s) = (word(n1)?, word(n2)?);
            if wheel_check(quiver, &r, WheelMode::Generic).is_err() {
                return Ok(Some("image of a word fails the wheel conditions".into()));
            }
            Ok((!is_small_algebra_closed_sample(quiver, &r, &s, WheelMode::Generic)?).then(|| "product leaves the small algebra".to_string()))
        })());
    }
    vec![
        Check::all(format!("shuffle-structure {name} associativity n<={max_n}"), samples, assoc),
        Check::all(format!("shuffle-structure {name} unit"), samples, unit),
        Check::all(format!("shuffle-structure {name} grading"), samples, grading),
        Check::all(format!("shuffle-structure {name} small-algebra closure"), samples, closure),
    ]
}

/// Plain-text report: one line per check.
pub fn report(checks: &[Check]) -> String {
    checks.iter().map(|c| format!("{c}\n")).collect()
}

/// Regression fixtures as `(file name, contents)`. The stored copies are
/// compared against this output and only rewritten on explicit request.
pub fn fixtures() -> Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    let (a2, _) = catalog::a2();
    let (j1, _) = catalog::jordan(1);
    let unit = |q: &Quiver<S>, v: usize| ShuffleElement::generator(q.num_vertices(), v, 0);
    out.push(("a2_product_i0_j0.txt".to_string(), shuffle_mul(&a2, &unit(&a2, 0), &unit(&a2, 1))?.to_text(a2.vertices())));
    out.push(("jordan1_product_0_0.txt".to_string(), shuffle_mul(&j1, &unit(&j1, 0), &unit(&j1, 0))?.to_text(j1.vertices())));
    for edge in j1.doubled_edges() {
        let x = cubic_element(&j1, &CubicSpec::generic(&edge, (0, 0, 0)))?;
        out.push((format!("jordan1_cubic_{}_0_0_0.txt", edge.label().replace('*', "star")), x.to_text(j1.vertices()) + "\n"));
    }
    let x = UElement::parse("[i^(2) j^(0)]", &a2)?;
    let st = straighten(&a2, &x, &StraightenOptions::default())?;
    out.push(("a2_straighten_i2_j0.txt".to_string(), st.to_element().to_text(a2.vertices()) + "\n"));
    let sig = ColorSignature::new(vec![2, 1]);
    let words: String =
        crate::words::enumerate_non_increasing(&a2, &sig, 0, (-1, 1), None, None).iter().map(|w| format!("{}\n", w.to_text(a2.vertices()))).collect();
    out.push(("a2_non_increasing_i2_j1_d0.txt".to_string(), words));
    out.push(("jordan1_cubic_vanishing.txt".to_string(), report(&cubic_vanishing("jordan1", &j1, -2..=2))));
    Ok(out)
}

/// `true` iff every check passed.
pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}

/// Words of a fixed bidegree, used by callers that build random inputs.
pub fn word_text(quiver: &Quiver<S>, w: &Word) -> String {
    w.to_text(quiver.vertices())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn balanced_triples_sum() {
        for d in -4..=4 {
            let t = balanced_triples(d);
            assert!(!t.is_empty());
            assert!(t.iter().all(|&(a, b, c)| a + b + c == d));
        }
    }

    #[test]
    fn failing_instances_are_reported() {
        let c = Check::all("x", 2, [Ok(None), Ok(Some("bad".to_string()))]);
        assert!(!c.passed);
        assert_eq!(c.detail, "bad");
        assert_eq!(c.to_string(), "FAIL x (bad)");
    }
}
