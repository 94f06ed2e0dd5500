//! The Poisson 2-algebra bracket on `S^⊠ S^⊗(V)` generated by an antisymmetric kernel.
//!
//! On generators over distinct points the bracket is `{u_x, v_y} = k(u_x, v_y) 1_x ⊡ 1_y`;
//! it vanishes as soon as one argument is a unit, and it extends to everything
//! else by the Leibniz rules for both `⊡` and `⊙`.
//!
//! Two evaluation routes are provided and must agree:
//!
//! * [`bracket`] is the closed biderivation form: for monomials
//!   `a = ⊡_x a_x` and `b = ⊡_y b_y`,
//!   `{a,b} = Σ_{x,y} Σ_{i,j} mult_i(a_x) mult_j(b_y) k((x,i),(y,j)) ⊡_z c_z`
//!   where `c_x` is `a_x` with one `e_i` removed, `c_y` is `b_y` with one `e_j`
//!   removed, and every other factor is untouched;
//! * [`bracket_recursive`] peels one `⊡`-factor or one `⊙`-generator at a time
//!   and applies the Leibniz recursions literally.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::configspace::{BaseSpace, Configuration, PointId};
use crate::error::{Error, Result};
use crate::fibre::{CauchyMonomial, FibreElement};
use crate::scalar::{self, accumulate, Scalar};

/// A generator of `V`: basis vector `index` of the fibre at `point`.
pub type GenKey = (PointId, usize);

/// Antisymmetric pairing of generators over distinct points.
///
/// Only pairs whose first point precedes the second are stored; the reversed
/// pair reads as the negated value and missing pairs read as zero.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Kernel {
    entries: BTreeMap<(GenKey, GenKey), Scalar>,
}

impl Kernel {
    pub fn new() -> Self {
        Kernel::default()
    }

    /// Sets `k(u, v) = value` (and hence `k(v, u) = -value`).
    pub fn set(&mut self, u: GenKey, v: GenKey, value: Scalar) -> Result<()> {
        if u.0 == v.0 {
            return Err(Error::SamePoint(u.0.to_string()));
        }
        let (key, value) = if u.0 < v.0 { ((u, v), value) } else { ((v, u), -value) };
        if value.is_zero() {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, value);
        }
        Ok(())
    }

    pub fn with(mut self, u: (&str, usize), v: (&str, usize), value: Scalar) -> Result<Self> {
        self.set((PointId::new(u.0), u.1), (PointId::new(v.0), v.1), value)?;
        Ok(self)
    }

    /// `k(u, v)`; the two generators must sit over different points.
    pub fn eval(&self, u: &GenKey, v: &GenKey) -> Result<Scalar> {
        if u.0 == v.0 {
            return Err(Error::SamePoint(u.0.to_string()));
        }
        Ok(self.lookup(&u.0, u.1, &v.0, v.1))
    }

    fn lookup(&self, x: &PointId, i: usize, y: &PointId, j: usize) -> Scalar {
        use std::cmp::Ordering;
        match x.cmp(y) {
            Ordering::Less => self
                .entries
                .get(&((x.clone(), i), (y.clone(), j)))
                .cloned()
                .unwrap_or_else(Scalar::zero),
            Ordering::Greater => self
                .entries
                .get(&((y.clone(), j), (x.clone(), i)))
                .map(|v| -v)
                .unwrap_or_else(Scalar::zero),
            Ordering::Equal => Scalar::zero(),
        }
    }

    /// Stored entries, first generator strictly before the second.
    pub fn entries(&self) -> impl Iterator<Item = (&GenKey, &GenKey, &Scalar)> {
        self.entries.iter().map(|((u, v), c)| (u, v, c))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn check_against(&self, base: &BaseSpace) -> Result<()> {
        for (u, v) in self.entries.keys() {
            base.check_basis(&u.0, u.1)?;
            base.check_basis(&v.0, v.1)?;
        }
        Ok(())
    }
}

/// `{a, b}` by the closed biderivation form.
pub fn bracket(a: &FibreElement, b: &FibreElement, k: &Kernel) -> Result<FibreElement> {
    let config = a.config().checked_union(b.config())?;
    let mut terms = BTreeMap::new();
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            let c = ca * cb;
            for (m, v) in bracket_monomials(ma, mb, k) {
                accumulate(&mut terms, m, &c * v);
            }
        }
    }
    Ok(FibreElement::from_terms(config, terms).expect("terms live over the union"))
}

fn bracket_monomials(ma: &CauchyMonomial, mb: &CauchyMonomial, k: &Kernel) -> Vec<(CauchyMonomial, Scalar)> {
    let mut out = Vec::new();
    for (x, fx) in ma.factors() {
        for (&i, &mi) in fx.exponents() {
            for (y, fy) in mb.factors() {
                for (&j, &mj) in fy.exponents() {
                    let kv = k.lookup(x, i, y, j);
                    if kv.is_zero() {
                        continue;
                    }
                    let ra = ma.with_factor(x, fx.without_one(i).expect("present"));
                    let rb = mb.with_factor(y, fy.without_one(j).expect("present"));
                    let m = ra.cauchy(&rb).expect("disjoint configurations");
                    out.push((m, kv * scalar::int(i64::from(mi) * i64::from(mj))));
                }
            }
        }
    }
    out
}

/// Which argument the recursion decomposes first, and from which end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeelOrder {
    /// Decompose the left argument first, peeling its first point and lowest generator.
    LeftFirst,
    /// Decompose the right argument first, peeling its last point and highest generator.
    RightFirst,
}

/// `{a, b}` by the Leibniz recursions, extended bilinearly over monomials.
pub fn bracket_recursive(a: &FibreElement, b: &FibreElement, k: &Kernel) -> Result<FibreElement> {
    bracket_recursive_with(a, b, k, PeelOrder::LeftFirst)
}

pub fn bracket_recursive_with(
    a: &FibreElement,
    b: &FibreElement,
    k: &Kernel,
    order: PeelOrder,
) -> Result<FibreElement> {
    let config = a.config().checked_union(b.config())?;
    let mut out = FibreElement::zero(config);
    for (ma, ca) in a.terms() {
        for (mb, cb) in b.terms() {
            let t = recurse(ma, mb, k, order).scale(&(ca * cb));
            out = out.try_add(&t).expect("same configuration");
        }
    }
    Ok(out)
}

fn mono(m: CauchyMonomial) -> FibreElement {
    FibreElement::from_monomial(m, scalar::one())
}

/// `m = head ⊡ rest`, peeling the first or last point.
fn split_cauchy(m: &CauchyMonomial, last: bool) -> (CauchyMonomial, CauchyMonomial) {
    let x = m.configuration();
    let p = if last { x.members().last() } else { x.members().first() }.expect("non-empty");
    let head = Configuration::singleton(p.clone());
    let rest = Configuration::from_points(x.iter().filter(|q| *q != p).cloned()).expect("subset");
    (m.restrict(&head), m.restrict(&rest))
}

/// `m = g ⊙ rest` for a single-point monomial, `g` a generator.
fn split_hadamard(m: &CauchyMonomial, last: bool) -> (CauchyMonomial, CauchyMonomial) {
    let (p, f) = m.factors().iter().next().expect("single point");
    let exps = f.exponents();
    let i = if last { exps.keys().next_back() } else { exps.keys().next() }.copied().expect("positive degree");
    let rest = m.with_factor(p, f.without_one(i).expect("present"));
    (CauchyMonomial::generator(p.clone(), i), rest)
}

enum Peel {
    Cauchy,
    Hadamard,
    Generator,
}

fn peel_kind(m: &CauchyMonomial) -> Peel {
    if m.factors().len() > 1 {
        Peel::Cauchy
    } else if m.degree() > 1 {
        Peel::Hadamard
    } else {
        Peel::Generator
    }
}

fn recurse(ma: &CauchyMonomial, mb: &CauchyMonomial, k: &Kernel, order: PeelOrder) -> FibreElement {
    if ma.is_unit() || mb.is_unit() {
        let xy = ma.configuration().disjoint_union(&mb.configuration()).expect("disjoint");
        return FibreElement::zero(xy);
    }
    let a_atomic = matches!(peel_kind(ma), Peel::Generator);
    let b_atomic = matches!(peel_kind(mb), Peel::Generator);
    match (order, a_atomic, b_atomic) {
        (_, true, true) => generator_bracket(ma, mb, k),
        (PeelOrder::LeftFirst, false, _) | (PeelOrder::RightFirst, false, true) => peel_left(ma, mb, k, order),
        _ => peel_right(ma, mb, k, order),
    }
}

fn peel_left(ma: &CauchyMonomial, mb: &CauchyMonomial, k: &Kernel, order: PeelOrder) -> FibreElement {
    let last = order == PeelOrder::RightFirst;
    match peel_kind(ma) {
        Peel::Cauchy => {
            // {a1 ⊡ a2, c} = {a1, c} ⊡ a2 + a1 ⊡ {a2, c}
            let (a1, a2) = split_cauchy(ma, last);
            let l = recurse(&a1, mb, k, order).cauchy_mul(&mono(a2.clone())).unwrap();
            let r = mono(a1.clone()).cauchy_mul(&recurse(&a2, mb, k, order)).unwrap();
            l.try_add(&r).unwrap()
        }
        _ => {
            // {g ⊙ a', c} = {g, c} ⊙ (a' ⊡ 1_Y) + (g ⊡ 1_Y) ⊙ {a', c}
            let (g, rest) = split_hadamard(ma, last);
            let unit_y = FibreElement::unit(&mb.configuration());
            let l = recurse(&g, mb, k, order)
                .hadamard_mul(&mono(rest.clone()).cauchy_mul(&unit_y).unwrap())
                .unwrap();
            let r = mono(g)
                .cauchy_mul(&unit_y)
                .unwrap()
                .hadamard_mul(&recurse(&rest, mb, k, order))
                .unwrap();
            l.try_add(&r).unwrap()
        }
    }
}

fn peel_right(ma: &CauchyMonomial, mb: &CauchyMonomial, k: &Kernel, order: PeelOrder) -> FibreElement {
    let last = order == PeelOrder::RightFirst;
    match peel_kind(mb) {
        Peel::Cauchy => {
            // {a, b1 ⊡ b2} = {a, b1} ⊡ b2 + b1 ⊡ {a, b2}
            let (b1, b2) = split_cauchy(mb, last);
            let l = recurse(ma, &b1, k, order).cauchy_mul(&mono(b2.clone())).unwrap();
            let r = mono(b1.clone()).cauchy_mul(&recurse(ma, &b2, k, order)).unwrap();
            l.try_add(&r).unwrap()
        }
        _ => {
            // {a, g ⊙ b'} = {a, g} ⊙ (1_X ⊡ b') + (1_X ⊡ g) ⊙ {a, b'}
            let (g, rest) = split_hadamard(mb, last);
            let unit_x = FibreElement::unit(&ma.configuration());
            let l = recurse(ma, &g, k, order)
                .hadamard_mul(&unit_x.cauchy_mul(&mono(rest.clone())).unwrap())
                .unwrap();
            let r = unit_x
                .cauchy_mul(&mono(g))
                .unwrap()
                .hadamard_mul(&recurse(ma, &rest, k, order))
                .unwrap();
            l.try_add(&r).unwrap()
        }
    }
}

/// `{u_x, v_y} = k(u_x, v_y) 1_x ⊡ 1_y`.
fn generator_bracket(ma: &CauchyMonomial, mb: &CauchyMonomial, k: &Kernel) -> FibreElement {
    let (x, fx) = ma.factors().iter().next().expect("generator");
    let (y, fy) = mb.factors().iter().next().expect("generator");
    let i = *fx.exponents().keys().next().expect("degree one");
    let j = *fy.exponents().keys().next().expect("degree one");
    let xy = Configuration::from_points([x.clone(), y.clone()]).expect("distinct points");
    FibreElement::unit(&xy).scale(&k.lookup(x, i, y, j))
}

/// A density coefficient relative to the basis density of its configuration.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct DensityValue(Scalar);

impl DensityValue {
    pub fn new(value: Scalar) -> Result<Self> {
        if !scalar::is_positive(&value) {
            return Err(Error::NonPositiveDensity);
        }
        Ok(DensityValue(value))
    }

    pub fn one() -> Self {
        DensityValue(scalar::one())
    }

    pub fn value(&self) -> &Scalar {
        &self.0
    }

    /// The `⊡`-product of densities, i.e. the product of coefficients.
    pub fn cauchy_mul(&self, other: &DensityValue) -> DensityValue {
        DensityValue(&self.0 * &other.0)
    }
}

/// Bracket of the Poisson–Cauchy bundle `S^⊠S^⊗(V) ⊗ Dens`:
/// `{a ⊗ α, b ⊗ β} = {a, b}_k ⊗ (α ⊡ β)`.
pub fn bracket_with_density(
    a: &FibreElement,
    alpha: &DensityValue,
    b: &FibreElement,
    beta: &DensityValue,
    k: &Kernel,
) -> Result<(FibreElement, DensityValue)> {
    Ok((bracket(a, b, k)?, alpha.cauchy_mul(beta)))
}
