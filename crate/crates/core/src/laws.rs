//! Executable law suites over seeded random instances.
//!
//! Every law is a function that draws one instance from the generator,
//! evaluates both sides exactly and reports the first discrepancy.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::configspace::{splits2, BaseSpace, Configuration, PointSpec};
use crate::expr::{parse_element, render};
use crate::field_model::{disjoint_pair_peierls, finite_difference_derivative, peierls_bracket, to_functional};
use crate::fibre::FibreElement;
use crate::poisson::{bracket, bracket_recursive_with, bracket_with_density, DensityValue, Kernel, PeelOrder};
use crate::random::*;
use crate::scalar;
use crate::sections::{convolve, jacobiator, section_bracket, Section};
use crate::tensor_lab::*;

/// Size limits for generated instances.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Params {
    pub max_points: usize,
    pub max_degree: u32,
    pub max_terms: usize,
}

impl Default for Params {
    fn default() -> Self {
        Params { max_points: 3, max_degree: 3, max_terms: 3 }
    }
}

pub type Outcome = Result<(), String>;
pub type Check = fn(&mut ChaCha8Rng, &BaseSpace, &Kernel, &Params) -> Outcome;

#[derive(Clone, Copy)]
pub struct Law {
    pub suite: &'static str,
    pub name: &'static str,
    pub check: Check,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LawReport {
    pub suite: &'static str,
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub first_failure: Option<String>,
}

impl LawReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

fn ensure(cond: bool, what: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn eq<T: PartialEq + std::fmt::Debug>(label: &str, lhs: &T, rhs: &T) -> Outcome {
    ensure(lhs == rhs, || format!("{label}: {lhs:?} != {rhs:?}"))
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

fn element(rng: &mut ChaCha8Rng, base: &BaseSpace, x: &Configuration, p: &Params) -> FibreElement {
    random_element(rng, base, x, p.max_degree, p.max_terms)
}

fn configs<const N: usize>(rng: &mut ChaCha8Rng, base: &BaseSpace, p: &Params) -> [Configuration; N] {
    random_disjoint_configs(rng, base, [p.max_points; N])
}

// ---- fibre products ----

fn hadamard_monoid(rng: &mut ChaCha8Rng, base: &BaseSpace, _: &Kernel, p: &Params) -> Outcome {
    let x = random_config(rng, base, p.max_points);
    let (a, b, c) = (element(rng, base, &x, p), element(rng, base, &x, p), element(rng, base, &x, p));
    let m = |u: &FibreElement, v: &FibreElement| u.hadamard_mul(v).expect("same configuration");
    eq("associativity", &m(&m(&a, &b), &c), &m(&a, &m(&b, &c)))?;
    eq("commutativity", &m(&a, &b), &m(&b, &a))?;
    eq("unit", &m(&FibreElement::unit(&x), &a), &a)
}

fn cauchy_monoid(rng: &mut ChaCha8Rng, base: &BaseSpace, _: &Kernel, p: &Params) -> Outcome {
    let [x, y, z] = configs(rng, base, p);
    let (a, b, c) = (element(rng, base, &x, p), element(rng, base, &y, p), element(rng, base, &z, p));
    let m = |u: &FibreElement, v: &FibreElement| u.cauchy_mul(v).expect("disjoint");
    eq("associativity", &m(&m(&a, &b), &c), &m(&a, &m(&b, &c)))?;
    eq("commutativity", &m(&a, &b), &m(&b, &a))?;
    eq("unit", &m(&FibreElement::vacuum(), &a), &a)
}

fn interchange(rng: &mut ChaCha8Rng, base: &BaseSpace, _: &Kernel, p: &Params) -> Outcome {
    let [x, y] = configs(rng, base, p);
    let (a, b) = (element(rng, base, &x, p), element(rng, base, &x, p));
    let (c, d) = (element(rng, base, &y, p), element(rng, base, &y, p));
    let lhs = a.hadamard_mul(&b).unwrap().cauchy_mul(&c.hadamard_mul(&d).unwrap()).unwrap();
    let rhs = a.cauchy_mul(&c).unwrap().hadamard_mul(&b.cauchy_mul(&d).unwrap()).unwrap();
    eq("(a⊙b)⊡(c⊙d) = (a⊡c)⊙(b⊡d)", &lhs, &rhs)?;
    let xy = x.disjoint_union(&y).unwrap();
    eq(
        "1_X ⊡ 1_Y = 1_{X⊔Y}",
        &FibreElement::unit(&x).cauchy_mul(&FibreElement::unit(&y)).unwrap(),
        &FibreElement::unit(&xy),
    )
}

/// The shuffle map followed by both products equals multiplying first.
fn shuffle_interchange(rng: &mut ChaCha8Rng, base: &BaseSpace, _: &Kernel, p: &Params) -> Outcome {
    let [x1, x2] = configs(rng, base, p);
    let mut input: PairOfPairs<crate::fibre::CauchyMonomial> = BTreeMap::new();
    for _ in 0..rng.gen_range(1..=p.max_terms) {
        let mut mono = |x: &Configuration| {
            let d = rng.gen_range(0..=p.max_degree);
            random_monomial(rng, base, x, d)
        };
        let key = ((mono(&x1), mono(&x1)), (mono(&x2), mono(&x2)));
        let c = random_coefficient(rng);
        crate::scalar::accumulate(&mut input, key, c);
    }
    let one = |m: &crate::fibre::CauchyMonomial| FibreElement::from_monomial(m.clone(), scalar::one());
    let xy = x1.disjoint_union(&x2).unwrap();
    let mut via_shuffle = FibreElement::zero(xy.clone());
    for (((a, c), (b, d)), k) in ok(shuffle_map(&input))? {
        let t = one(&a).cauchy_mul(&one(&c)).unwrap().hadamard_mul(&one(&b).cauchy_mul(&one(&d)).unwrap()).unwrap();
        via_shuffle = via_shuffle.try_add(&t.scale(&k)).unwrap();
    }
    let mut direct = FibreElement::zero(xy);
    for (((a, b), (c, d)), k) in &input {
        let t = one(a).hadamard_mul(&one(b)).unwrap().cauchy_mul(&one(c).hadamard_mul(&one(d)).unwrap()).unwrap();
        direct = direct.try_add(&t.scale(k)).unwrap();
    }
    eq("shuffle interchange", &via_shuffle, &direct)
}

// ---- brackets ----

fn antisymmetry(rng: &mut ChaCha8Rng, base: &BaseSpace, k: &Kernel, p: &Params) -> Outcome {
    let [x, y] = configs(rng, base, p);
    let (a, b) = (element(rng, base, &x, p), element(rng, base, &y, p));
    eq("{a,b} = -{b,a}", &bracket(&a, &b, k).unwrap(), &bracket(&b, &a, k).unwrap().neg())
}

fn jacobi(rng: &mut ChaCha8Rng, base: &BaseSpace, k: &Kernel, p: &Params) -> Outcome {
    let [x, y, z] = configs(rng, base, p);
    let (a, b, c) = (element(rng, base, &x, p), element(rng, base, &y, p), element(rng, base, &z, p));
    let br = |u: &FibreElement, v: &FibreElement| bracket(u, v, k).unwrap();
    let sum = br(&br(&a, &b), &c).try_add(&br(&br(&b, &c), &a)).unwrap().try_add(&br(&br(&c, &a), &b)).unwrap();
    ensure(sum.is_zero(), || format!("Jacobi sum {sum} for a={a}, b={b}, c={c}"))
}

fn leibniz_cauchy(rng: &mut ChaCha8Rng, base: &BaseSpace, k: &Kernel, p: &Params) -> Outcome {
    let [x, y, z] = configs(rng, base, p);
    let (a, b, c) = (element(rng, base, &x, p), element(rng, base, &y, p), element(rng, base, &z, p));
    let lhs = bracket(&a, &b.cauchy_mul(&c).unwrap(), k).unwrap();
    let rhs = bracket(&a, &b, k)
        .unwrap()
        .cauchy_mul(&c)
        .unwrap()
        .try_add(&b.cauchy_mul(&bracket(&a, &c, k).unwrap()).unwrap())
        .unwrap();
    eq("{a,b⊡c} = {a,b}⊡c + b⊡{a,c}", &lhs, &rhs)?;
    // left-hand form
    let lhs = bracket(&a.cauchy_mul(&b).unwrap(), &c, k).unwrap();
    let rhs = bracket(&a, &c, k)
        .unwrap()
        .cauchy_mul(&b)
        .unwrap()
        .try_add(&a.cauchy_mul(&bracket(&b, &c, k).unwrap()).unwrap())
        .unwrap();
    eq("{a⊡b,c} = {a,c}⊡b + a⊡{b,c}", &lhs, &rhs)
}

fn leibniz_hadamard(rng: &mut ChaCha8Rng, base: &BaseSpace, k: &Kernel, p: &Params) -> Outcome {
    let [x, y] = configs(rng, base, p);
    let a = element(rng, base, &x, p);
    let (b, c) = (element(rng, base, &y, p), element(rng, base, &y, p));
    let ux = FibreElement::unit(&x);
    let lhs = bracket(&a, &b.hadamard_mul(&c).unwrap(), k).unwrap();
    let rhs = bracket(&a, &b, k)
        .unwrap()
        .hadamard_mul(&ux.cauchy_mul(&c).unwrap())
        .unwrap()
        .try_add(&ux.cauchy_mul(&b).unwrap().hadamard_mul(&bracket(&a, &c, k).unwrap()).unwrap())
        .unwrap();
    eq("{a,b⊙c} = {a,b}⊙(1_X⊡c) + (1_X⊡b)⊙{a,c}", &lhs, &rhs)?;
    let lhs = bracket(&b.hadamard_mul(&c).unwrap(), &a, k).unwrap();
    let rhs = bracket(&b, &a, k)
        .unwrap()
        .hadamard_mul(&c.cauchy_mul(&ux).unwrap())
        .unwrap()
        .try_add(&b.cauchy_mul(&ux).unwrap().hadamard_mul(&bracket(&c, &a, k).unwrap()).unwrap())
        .unwrap();
    eq("{b⊙c,a} = {b,a}⊙(c⊡1_X) + (b⊡1_X)⊙{c,a}", &lhs, &rhs)
}

fn recursion_agrees(rng: &mut ChaCha8Rng, base: &BaseSpace, k: &Kernel, p: &Params) -> Outcome {
    let [x, y] = configs(rng, base, p);
    let (a, b) = (element(rng, base, &x, p), element(rng, base, &y, p));
    let closed = bracket(&a, &b, k).unwrap();
    for order in [PeelOrder::LeftFirst, PeelOrder::RightFirst] {
        eq(&format!("recursive ({order:?}) vs closed form"), &bracket_recursive_with(&a, &b, k, order).unwrap(), &closed)?;
    }
    Ok(())
}

fn grading(rng: &mut ChaCha8Rng, base: &BaseSpace, k: &Kernel, p: &Params) -> Outcome {
    let [x, y] = configs(rng, base, p);
    let da = rng.gen_range(1..=p.max_degree.max(1));
    let db = rng.gen_range(1..=p.max_degree.max(1));
    let a = random_homogeneous(rng, base, &x, da, p.max_terms);
    let b = random_homogeneous(rng, base, &y, db, p.max_terms);
    let ab = bracket(&a, &b, k).unwrap();
    ensure(ab.degrees().1.iter().all(|&d| d == da + db - 2), || format!("{{{a}, {b}}} = {ab} is not of degree {}", da + db - 2))
}

fn density_extension(rng: &mut ChaCha8Rng, base: &BaseSpace, k: &Kernel, p: &Params) -> Outcome {
    let [x, y] = configs(rng, base, p);
    let (a, b) = (element(rng, base, &x, p), element(rng, base, &y, p));
    let alpha = ok(DensityValue::new(ok(base.density(&x))?))?;
    let beta = ok(DensityValue::new(ok(base.density(&y))?))?;
    let (v, d) = ok(bracket_with_density(&a, &alpha, &b, &beta, k))?;
    eq("bracket slot", &v, &bracket(&a, &b, k).unwrap())?;
    eq("density slot", d.value(), &ok(base.density(&x.disjoint_union(&y).unwrap()))?)
}

// ---- sections ----

fn section(rng: &mut ChaCha8Rng, base: &BaseSpace, p: &Params) -> Section {
    random_section(rng, base, p.max_points, 3, p.max_degree.min(2), p.max_terms)
}

fn convolution_algebra(rng: &mut ChaCha8Rng, base: &BaseSpace, _: &Kernel, p: &Params) -> Outcome {
    let (a, b, c) = (section(rng, base, p), section(rng, base, p), section(rng, base, p));
    let m = |u: &Section, v: &Section| convolve(u, v).kept;
    eq("commutativity", &m(&a, &b), &m(&b, &a))?;
    eq("associativity", &m(&m(&a, &b), &c), &m(&a, &m(&b, &c)))?;
    eq("unit", &m(&Section::unit(), &a), &a)
}

fn section_poisson(rng: &mut ChaCha8Rng, base: &BaseSpace, k: &Kernel, p: &Params) -> Outcome {
    let (a, b, c) = (section(rng, base, p), section(rng, base, p), section(rng, base, p));
    let br = |u: &Section, v: &Section| section_bracket(u, v, k).kept;
    let m = |u: &Section, v: &Section| convolve(u, v).kept;
    eq("antisymmetry", &br(&a, &b), &br(&b, &a).neg())?;
    let j = jacobiator(&a, &b, &c, k);
    ensure(j.is_zero(), || format!("jacobiator {j:?}"))?;
    eq("Leibniz", &br(&a, &m(&b, &c)), &m(&br(&a, &b), &c).sum(&m(&b, &br(&a, &c))))?;
    ensure(br(&Section::unit(), &a).is_zero(), || "bracket with the unit section".into())
}

// ---- field model ----

fn peierls_oracle(rng: &mut ChaCha8Rng, base: &BaseSpace, k: &Kernel, p: &Params) -> Outcome {
    let bound = base.len();
    let s = random_section(rng, base, p.max_points.min(bound), 2, p.max_degree, p.max_terms);
    let t = random_section(rng, base, p.max_points.min(bound), 2, p.max_degree, p.max_terms);
    let (s, t) = (widen(&s, bound), widen(&t, bound));
    let lhs = ok(to_functional(&section_bracket(&s, &t, k).kept, base))?;
    let rhs = ok(disjoint_pair_peierls(&s, &t, k, base))?;
    eq("F_{s,t} vs Peierls", &lhs, &rhs)
}

/// Same values, bound raised so no product is truncated.
pub fn widen(s: &Section, max_points: usize) -> Section {
    Section::from_values(max_points, s.values().values().cloned()).expect("within the raised bound")
}

fn peierls_disjoint_supports(rng: &mut ChaCha8Rng, base: &BaseSpace, k: &Kernel, p: &Params) -> Outcome {
    let [x, y] = configs(rng, base, p);
    let bound = base.len();
    // several values of s on subsets of X, one value of t over Y
    let mut s = Section::zero(bound);
    let subsets = splits2(&x);
    for (part, _) in subsets.choose_multiple(rng, 2) {
        s.add(element(rng, base, part, p)).unwrap();
    }
    let t = Section::delta(element(rng, base, &y, p), bound).unwrap();
    let lhs = ok(to_functional(&section_bracket(&s, &t, k).kept, base))?;
    let rhs = peierls_bracket(&ok(to_functional(&s, base))?, &ok(to_functional(&t, base))?, k);
    eq("F_{s,t} vs {F_s, F_t}", &lhs, &rhs)
}

fn peierls_leibniz(rng: &mut ChaCha8Rng, base: &BaseSpace, k: &Kernel, p: &Params) -> Outcome {
    let f = random_polynomial(rng, base, p.max_degree, p.max_terms);
    let g = random_polynomial(rng, base, p.max_degree, p.max_terms);
    let h = random_polynomial(rng, base, p.max_degree, p.max_terms);
    eq(
        "{F,GH} = {F,G}H + G{F,H}",
        &peierls_bracket(&f, &g.mul(&h), k),
        &peierls_bracket(&f, &g, k).mul(&h).add(&g.mul(&peierls_bracket(&f, &h, k))),
    )
}

fn finite_differences(rng: &mut ChaCha8Rng, base: &BaseSpace, _: &Kernel, p: &Params) -> Outcome {
    let f = random_polynomial(rng, base, p.max_degree + 1, p.max_terms);
    let fld = random_field(rng, base);
    for q in base.points() {
        for i in 0..base.rank(q).unwrap() {
            let v = (q.clone(), i);
            eq(
                &format!("∂/∂φ_{i}({q})"),
                &ok(finite_difference_derivative(&f, &v, &fld))?,
                &ok(f.partial(&v).evaluate(&fld))?,
            )?;
        }
    }
    Ok(())
}

// ---- tensor words ----

fn tensor_algebra(rng: &mut ChaCha8Rng, base: &BaseSpace, _: &Kernel, p: &Params) -> Outcome {
    let [x, y, z] = configs(rng, base, p);
    let a = random_tensor_element(rng, base, &x, p.max_terms);
    let b = random_tensor_element(rng, base, &y, p.max_terms);
    let c = random_tensor_element(rng, base, &z, p.max_terms);
    let m = |u: &TensorElement, v: &TensorElement| concat(u, v).unwrap();
    eq("concat associativity", &m(&m(&a, &b), &c), &m(&a, &m(&b, &c)))?;
    eq("concat unit", &m(&TensorElement::unit(), &a), &a)?;
    eq("symmetrize is multiplicative", &symmetrize(&m(&a, &b)), &symmetrize(&a).cauchy_mul(&symmetrize(&b)).unwrap())
}

fn cauchy_coassociative(rng: &mut ChaCha8Rng, base: &BaseSpace, _: &Kernel, _: &Params) -> Outcome {
    let x = random_config(rng, base, 4);
    let a = random_tensor_element(rng, base, &x, 3);
    let (l, r) = cauchy_coassociativity_sides(&a);
    eq("(Δ⊗id)Δ = (id⊗Δ)Δ", &l, &r)
}

fn hadamard_coassociative(rng: &mut ChaCha8Rng, base: &BaseSpace, _: &Kernel, p: &Params) -> Outcome {
    let x = random_config(rng, base, p.max_points);
    let mut terms = BTreeMap::new();
    for _ in 0..rng.gen_range(1..=p.max_terms) {
        let w = random_hadamard_word(rng, base, &x, 4, 2);
        crate::scalar::accumulate(&mut terms, w, random_coefficient(rng));
    }
    let (l, r) = hadamard_coassociativity_sides(&terms);
    eq("(Δ⊗id)Δ = (id⊗Δ)Δ", &l, &r)?;
    for (w, c) in &terms {
        for left in [true, false] {
            let mut back = BTreeMap::new();
            for ((u, v), d) in deconcat_hadamard(w) {
                let (keep, kill) = if left { (v, u) } else { (u, v) };
                crate::scalar::accumulate(&mut back, keep, c * d * counit_hadamard(&kill));
            }
            let want: BTreeMap<_, _> = [(w.clone(), c.clone())].into_iter().collect();
            eq("counit", &back, &want)?;
        }
    }
    Ok(())
}

fn symmetric_subcoalgebra(rng: &mut ChaCha8Rng, base: &BaseSpace, _: &Kernel, _: &Params) -> Outcome {
    let x = random_config(rng, base, 4);
    let a = symmetric_sum(&random_tensor_element(rng, base, &x, 2));
    ensure(is_symmetric(&a), || "symmetric sum is not symmetric".into())?;
    ensure(deconcat_cauchy(&a).is_symmetric_in_each_slot(), || format!("Δ({a:?}) leaves Σ⊠Σ"))
}

fn alternation(rng: &mut ChaCha8Rng, base: &BaseSpace, _: &Kernel, p: &Params) -> Outcome {
    let x = random_config(rng, base, p.max_points.max(2));
    if x.len() < 2 {
        return Ok(());
    }
    let e = TensorElement::from_word(random_word(rng, base, &x), scalar::one());
    let m = rng.gen_range(0..x.len() - 1);
    let mut tau: Vec<usize> = (0..x.len()).collect();
    tau.swap(m, m + 1);
    let s = alternate(&e.try_add(&e.permute(&tau)).unwrap());
    ensure(s.is_zero(), || format!("alternation leaves {s:?}"))?;
    eq("alternation idempotent", &alternate(&alternate(&e)), &alternate(&e))
}

fn shuffle_duality(rng: &mut ChaCha8Rng, base: &BaseSpace, _: &Kernel, p: &Params) -> Outcome {
    let [x, y] = configs(rng, base, p);
    let xy = x.disjoint_union(&y).unwrap();
    let a = random_tensor_element(rng, base, &x, p.max_terms);
    let b = random_tensor_element(rng, base, &y, p.max_terms);
    let c = random_tensor_element(rng, base, &xy, p.max_terms + 1);
    eq(
        "⟨a ш b, c⟩ = ⟨a⊗b, Δc⟩",
        &pair_words(&shuffle_product(&a, &b).unwrap(), &c),
        &pair_split(&a, &b, &deconcat_cauchy(&c)),
    )
}

fn dimensions(rng: &mut ChaCha8Rng, base: &BaseSpace, _: &Kernel, p: &Params) -> Outcome {
    let x = random_config(rng, base, p.max_points);
    eq("dim T", &ok(dim_t_fibre(base, &x))?, &ok(enumerate_t_fibre(base, &x))?)?;
    eq("dim T⊠T", &ok(dim_tboxt_fibre(base, &x))?, &ok(enumerate_tboxt_fibre(base, &x))?)
}

fn external_comparison(rng: &mut ChaCha8Rng, base: &BaseSpace, _: &Kernel, _: &Params) -> Outcome {
    let n = rng.gen_range(0..=base.len().min(4));
    let mut tuple: Vec<_> = base.points().choose_multiple(rng, n).cloned().collect();
    tuple.shuffle(rng);
    let c = ok(compare_external(base, &tuple))?;
    ensure(c.is_bijection(), || format!("comparison for {tuple:?} is not a bijection"))
}

fn strong_monoidality(rng: &mut ChaCha8Rng, base: &BaseSpace, _: &Kernel, p: &Params) -> Outcome {
    let w = ok(BaseSpace::new(base.specs().map(|s| PointSpec { rank: rng.gen_range(1..=2), ..s })))?;
    let [x1, x2] = configs(rng, base, p);
    let x = x1.disjoint_union(&x2).unwrap();
    let c = ok(strong_monoidal_bijection(base, &w, &x))?;
    ensure(c.is_bijection(), || format!("no bijection at {x}"))?;
    // the comparison respects ⊡
    let table: BTreeMap<_, _> = c.table.iter().cloned().collect();
    let c1 = ok(strong_monoidal_bijection(base, &w, &x1))?;
    let c2 = ok(strong_monoidal_bijection(base, &w, &x2))?;
    for (m1, (v1, w1)) in &c1.table {
        for (m2, (v2, w2)) in &c2.table {
            let joined = m1.cauchy(m2).unwrap();
            let want = (v1.cauchy(v2).unwrap(), w1.cauchy(w2).unwrap());
            eq("comparison of ⊡-products", &table[&joined], &want)?;
        }
    }
    Ok(())
}

// ---- expression language ----

fn parser_round_trip(rng: &mut ChaCha8Rng, base: &BaseSpace, _: &Kernel, p: &Params) -> Outcome {
    let x = random_config(rng, base, p.max_points);
    let e = element(rng, base, &x, p);
    let text = render(&e);
    let back = parse_element(&text, base).map_err(|err| format!("{text:?}: {err}"))?;
    eq("parse(render(e))", &back, &e)?;
    eq("render(parse(render(e)))", &render(&back), &text)
}

macro_rules! law {
    ($suite:literal, $name:literal, $f:ident) => {
        Law { suite: $suite, name: $name, check: $f }
    };
}

pub fn all_laws() -> Vec<Law> {
    vec![
        law!("fibre", "hadamard_monoid", hadamard_monoid),
        law!("fibre", "cauchy_monoid", cauchy_monoid),
        law!("fibre", "interchange", interchange),
        law!("fibre", "shuffle_interchange", shuffle_interchange),
        law!("poisson", "antisymmetry", antisymmetry),
        law!("poisson", "jacobi", jacobi),
        law!("poisson", "leibniz_cauchy", leibniz_cauchy),
        law!("poisson", "leibniz_hadamard", leibniz_hadamard),
        law!("poisson", "recursion_agrees", recursion_agrees),
        law!("poisson", "grading", grading),
        law!("poisson", "density_extension", density_extension),
        law!("sections", "convolution_algebra", convolution_algebra),
        law!("sections", "poisson_algebra", section_poisson),
        law!("field", "peierls_oracle", peierls_oracle),
        law!("field", "peierls_disjoint_supports", peierls_disjoint_supports),
        law!("field", "peierls_leibniz", peierls_leibniz),
        law!("field", "finite_differences", finite_differences),
        law!("tensor", "tensor_algebra", tensor_algebra),
        law!("tensor", "cauchy_coassociative", cauchy_coassociative),
        law!("tensor", "hadamard_coassociative", hadamard_coassociative),
        law!("tensor", "symmetric_subcoalgebra", symmetric_subcoalgebra),
        law!("tensor", "alternation", alternation),
        law!("tensor", "shuffle_duality", shuffle_duality),
        law!("tensor", "dimensions", dimensions),
        law!("tensor", "external_comparison", external_comparison),
        law!("tensor", "strong_monoidality", strong_monoidality),
        law!("expr", "round_trip", parser_round_trip),
    ]
}

pub fn find_law(name: &str) -> Option<Law> {
    all_laws().into_iter().find(|l| l.name == name)
}

/// Runs `law` on `cases` instances over a fixed base and kernel. Law number
/// `stream` draws from its own stream of the seeded generator.
pub fn run_law(law: &Law, base: &BaseSpace, k: &Kernel, params: &Params, seed: u64, stream: u64, cases: usize) -> LawReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let mut failures = 0;
    let mut first_failure = None;
    for _ in 0..cases {
        if let Err(msg) = (law.check)(&mut rng, base, k, params) {
            failures += 1;
            first_failure.get_or_insert(msg);
        }
    }
    LawReport { suite: law.suite, name: law.name, cases, failures, first_failure }
}

pub fn run_all(base: &BaseSpace, k: &Kernel, params: &Params, seed: u64, cases: usize) -> Vec<LawReport> {
    all_laws()
        .iter()
        .enumerate()
        .map(|(n, law)| run_law(law, base, k, params, seed, n as u64, cases))
        .collect()
}

/// `Σ_i C(k,i)·i!·(k−i)!`, the number of basis pairs in the split sum.
pub fn split_pair_count(k: usize) -> u64 {
    use crate::configspace::{binomial, factorial};
    (0..=k).map(|i| binomial(k, i) * factorial(i) * factorial(k - i)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::files::m3;

    #[test]
    fn every_law_passes_on_m3() {
        let m = m3();
        for r in run_all(&m.base, &m.kernel, &Params::default(), 7, 20) {
            assert!(r.passed(), "{}: {:?}", r.name, r.first_failure);
        }
    }

    #[test]
    fn every_law_passes_on_mixed_ranks() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let base = random_weighted_base(&mut rng, 4, 2);
        let k = random_kernel(&mut rng, &base);
        for r in run_all(&base, &k, &Params::default(), 3, 15) {
            assert!(r.passed(), "{}: {:?}", r.name, r.first_failure);
        }
    }

    #[test]
    fn reports_are_deterministic() {
        let m = m3();
        let a = run_all(&m.base, &m.kernel, &Params::default(), 42, 5);
        let b = run_all(&m.base, &m.kernel, &Params::default(), 42, 5);
        assert_eq!(a, b);
    }

    #[test]
    fn broken_law_is_reported() {
        fn always_fails(_: &mut ChaCha8Rng, _: &BaseSpace, _: &Kernel, _: &Params) -> Outcome {
            Err("boom".into())
        }
        let m = m3();
        let law = Law { suite: "test", name: "fails", check: always_fails };
        let r = run_law(&law, &m.base, &m.kernel, &Params::default(), 1, 0, 3);
        assert_eq!((r.failures, r.first_failure.as_deref()), (3, Some("boom")));
    }

    #[test]
    fn split_pair_counts() {
        for k in 0..=6 {
            assert_eq!(split_pair_count(k), (k as u64 + 1) * crate::configspace::factorial(k));
        }
    }
}
