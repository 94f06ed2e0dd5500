//! Seeded generators of random test data.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::configspace::{BaseSpace, Configuration, PointId, PointSpec};
use crate::fibre::{CauchyMonomial, FibreElement, PointFactor};
use crate::field_model::{Field, PolyFunctional};
use crate::poisson::Kernel;
use crate::sections::Section;
use crate::scalar::{accumulate, ratio, Scalar};
use crate::tensor_lab::{HadamardWord, Letter, TensorElement, Word};

const LABELS: [&str; 8] = ["p", "q", "r", "s", "t", "u", "v", "w"];

/// A small non-zero rational.
pub fn random_coefficient<R: Rng>(rng: &mut R) -> Scalar {
    let mut n = rng.gen_range(-5i64..=4);
    if n >= 0 {
        n += 1;
    }
    ratio(n, rng.gen_range(1..=3))
}

fn random_weight<R: Rng>(rng: &mut R) -> Scalar {
    [ratio(1, 1), ratio(2, 1), ratio(1, 2), ratio(3, 2), ratio(3, 1)]
        .choose(rng)
        .cloned()
        .expect("non-empty")
}

/// `n_points` points with ranks in `1..=max_rank` and unit weights.
pub fn random_base<R: Rng>(rng: &mut R, n_points: usize, max_rank: usize) -> BaseSpace {
    let specs = LABELS[..n_points]
        .iter()
        .map(|l| PointSpec::new(l, rng.gen_range(1..=max_rank), ratio(1, 1)))
        .collect::<Vec<_>>();
    BaseSpace::new(specs).expect("valid labels")
}

/// Like [`random_base`] with random positive weights.
pub fn random_weighted_base<R: Rng>(rng: &mut R, n_points: usize, max_rank: usize) -> BaseSpace {
    let specs = LABELS[..n_points]
        .iter()
        .map(|l| PointSpec::new(l, rng.gen_range(1..=max_rank), random_weight(rng)))
        .collect::<Vec<_>>();
    BaseSpace::new(specs).expect("valid labels")
}

/// A configuration of at most `max` points.
pub fn random_config<R: Rng>(rng: &mut R, base: &BaseSpace, max: usize) -> Configuration {
    let size = rng.gen_range(0..=max.min(base.len()));
    let chosen = base.points().choose_multiple(rng, size).cloned();
    Configuration::from_points(chosen).expect("distinct points")
}

/// Pairwise disjoint configurations; part `i` has at most `max[i]` points.
pub fn random_disjoint_configs<R: Rng, const N: usize>(
    rng: &mut R,
    base: &BaseSpace,
    max: [usize; N],
) -> [Configuration; N] {
    let mut pool: Vec<PointId> = base.points().to_vec();
    pool.shuffle(rng);
    max.map(|m| {
        let size = rng.gen_range(0..=m.min(pool.len()));
        let taken = pool.split_off(pool.len() - size);
        Configuration::from_points(taken).expect("distinct points")
    })
}

/// A monomial over `x` with exactly `degree` generators.
pub fn random_monomial<R: Rng>(rng: &mut R, base: &BaseSpace, x: &Configuration, degree: u32) -> CauchyMonomial {
    let mut exps: BTreeMap<PointId, BTreeMap<usize, u32>> = x.iter().map(|p| (p.clone(), BTreeMap::new())).collect();
    if !x.is_empty() {
        for _ in 0..degree {
            let p = x.members()[rng.gen_range(0..x.len())].clone();
            let i = rng.gen_range(0..base.rank(&p).expect("point of the base"));
            *exps.get_mut(&p).expect("member").entry(i).or_insert(0) += 1;
        }
    }
    CauchyMonomial::from_factors(exps.into_iter().map(|(p, e)| (p, PointFactor::from_exponents(e))))
        .expect("distinct points")
}

/// Up to `max_terms` terms of total degree at most `max_degree`.
pub fn random_element<R: Rng>(
    rng: &mut R,
    base: &BaseSpace,
    x: &Configuration,
    max_degree: u32,
    max_terms: usize,
) -> FibreElement {
    let mut terms = BTreeMap::new();
    for _ in 0..rng.gen_range(0..=max_terms) {
        let d = rng.gen_range(0..=max_degree);
        let m = random_monomial(rng, base, x, d);
        let c = random_coefficient(rng);
        accumulate(&mut terms, m, c);
    }
    FibreElement::from_terms(x.clone(), terms).expect("monomials over x")
}

/// Between one and `max_terms` terms, all of total degree `degree`.
/// Zero when `x` is empty and `degree > 0`.
pub fn random_homogeneous<R: Rng>(
    rng: &mut R,
    base: &BaseSpace,
    x: &Configuration,
    degree: u32,
    max_terms: usize,
) -> FibreElement {
    let mut terms = BTreeMap::new();
    if x.is_empty() && degree > 0 {
        return FibreElement::zero(x.clone());
    }
    for _ in 0..rng.gen_range(1..=max_terms) {
        let m = random_monomial(rng, base, x, degree);
        let c = random_coefficient(rng);
        accumulate(&mut terms, m, c);
    }
    FibreElement::from_terms(x.clone(), terms).expect("monomials over x")
}

/// Each generator pair over distinct points gets a random value with probability one half.
pub fn random_kernel<R: Rng>(rng: &mut R, base: &BaseSpace) -> Kernel {
    let mut k = Kernel::new();
    let pts = base.points();
    for (a, x) in pts.iter().enumerate() {
        for y in &pts[a + 1..] {
            for i in 0..base.rank(x).expect("point") {
                for j in 0..base.rank(y).expect("point") {
                    if rng.gen_bool(0.5) {
                        k.set((x.clone(), i), (y.clone(), j), random_coefficient(rng)).expect("distinct points");
                    }
                }
            }
        }
    }
    k
}

/// A word over `x` in a random order with random letters.
pub fn random_word<R: Rng>(rng: &mut R, base: &BaseSpace, x: &Configuration) -> Word {
    let mut pts = x.members().to_vec();
    pts.shuffle(rng);
    let letters = pts
        .into_iter()
        .map(|p| {
            let basis = rng.gen_range(0..base.rank(&p).expect("point of the base"));
            Letter { point: p, basis }
        })
        .collect();
    Word::new(letters).expect("distinct points")
}

/// Up to `max_terms` random words over `x`.
pub fn random_tensor_element<R: Rng>(rng: &mut R, base: &BaseSpace, x: &Configuration, max_terms: usize) -> TensorElement {
    let mut e = TensorElement::zero(x.clone());
    for _ in 0..rng.gen_range(0..=max_terms) {
        let w = random_word(rng, base, x);
        e.add_term(w, random_coefficient(rng)).expect("word over x");
    }
    e
}

/// A `T^⊗` word over `x` with up to `max_len` letters of degree at most `max_degree`.
pub fn random_hadamard_word<R: Rng>(
    rng: &mut R,
    base: &BaseSpace,
    x: &Configuration,
    max_len: usize,
    max_degree: u32,
) -> HadamardWord {
    let letters = (0..rng.gen_range(0..=max_len))
        .map(|_| {
            let d = rng.gen_range(0..=max_degree);
            random_monomial(rng, base, x, d)
        })
        .collect();
    HadamardWord::new(x.clone(), letters).expect("letters over x")
}

/// A section with up to `max_support` non-zero values, each over at most
/// `max_points` points with degree at most `max_degree`.
pub fn random_section<R: Rng>(
    rng: &mut R,
    base: &BaseSpace,
    max_points: usize,
    max_support: usize,
    max_degree: u32,
    max_terms: usize,
) -> Section {
    let mut s = Section::zero(max_points);
    for _ in 0..rng.gen_range(1..=max_support.max(1)) {
        let x = random_config(rng, base, max_points);
        let e = random_element(rng, base, &x, max_degree, max_terms);
        s.add(e).expect("within the bound");
    }
    s
}

/// A polynomial in the field variables of `base`.
pub fn random_polynomial<R: Rng>(rng: &mut R, base: &BaseSpace, max_degree: u32, max_terms: usize) -> PolyFunctional {
    let vars: Vec<(PointId, usize)> =
        base.points().iter().flat_map(|p| (0..base.rank(p).expect("point")).map(move |i| (p.clone(), i))).collect();
    let mut f = PolyFunctional::zero();
    for _ in 0..rng.gen_range(0..=max_terms) {
        let mut exps = BTreeMap::new();
        for _ in 0..rng.gen_range(0..=max_degree) {
            *exps.entry(vars.choose(rng).expect("non-empty base").clone()).or_insert(0) += 1;
        }
        f = f.add(&PolyFunctional::monomial(exps, random_coefficient(rng)));
    }
    f
}

/// Small rational field values at every point.
pub fn random_field<R: Rng>(rng: &mut R, base: &BaseSpace) -> Field {
    let values = base
        .points()
        .iter()
        .map(|p| {
            let v = (0..base.rank(p).expect("point"))
                .map(|_| ratio(rng.gen_range(-4..=4), rng.gen_range(1..=3)))
                .collect();
            (p.clone(), v)
        })
        .collect();
    Field::new(base, values).expect("complete field")
}
