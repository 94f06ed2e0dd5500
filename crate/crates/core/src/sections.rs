//! Finitely supported sections over configurations, with the convolution
//! product and the induced bracket.
//!
//! `(φ•ψ)(X) = Σ_{X=X′⊔X″} φ(X′) ⊡ ψ(X″)` and
//! `{φ,ψ}(X) = Σ_{X=X′⊔X″} {φ(X′), ψ(X″)}`. Both are evaluated by pairing
//! support configurations, which visits exactly the non-vanishing splits.

use std::collections::BTreeMap;
use std::fmt;

use crate::configspace::Configuration;
use crate::error::{Error, Result};
use crate::fibre::FibreElement;
use crate::poisson::{bracket, Kernel};
use crate::scalar::Scalar;

#[derive(Clone, PartialEq, Eq)]
pub struct Section {
    values: BTreeMap<Configuration, FibreElement>,
    max_points: usize,
}

/// A result split into the part within the bound and the part beyond it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Truncation {
    pub kept: Section,
    pub dropped: Vec<(Configuration, FibreElement)>,
}

impl Truncation {
    pub fn is_exact(&self) -> bool {
        self.dropped.is_empty()
    }
}

impl Section {
    pub fn zero(max_points: usize) -> Self {
        Section { values: BTreeMap::new(), max_points }
    }

    /// `1` at the vacuum, zero elsewhere.
    pub fn unit() -> Self {
        let mut s = Section::zero(0);
        s.values.insert(Configuration::empty(), FibreElement::vacuum());
        s
    }

    /// The section with a single value `e` at `e.config()`.
    pub fn delta(e: FibreElement, max_points: usize) -> Result<Self> {
        let mut s = Section::zero(max_points);
        s.add(e)?;
        Ok(s)
    }

    pub fn from_values(max_points: usize, values: impl IntoIterator<Item = FibreElement>) -> Result<Self> {
        let mut s = Section::zero(max_points);
        for e in values {
            s.add(e)?;
        }
        Ok(s)
    }

    /// Adds `e` to the value at `e.config()`.
    pub fn add(&mut self, e: FibreElement) -> Result<()> {
        if e.config().len() > self.max_points {
            return Err(Error::TooManyPoints { config: e.config().clone(), max: self.max_points });
        }
        self.add_unchecked(e);
        Ok(())
    }

    fn add_unchecked(&mut self, e: FibreElement) {
        if e.is_zero() {
            return;
        }
        let x = e.config().clone();
        let v = match self.values.remove(&x) {
            Some(old) => old.try_add(&e).expect("same configuration"),
            None => e,
        };
        if !v.is_zero() {
            self.values.insert(x, v);
        }
    }

    pub fn max_points(&self) -> usize {
        self.max_points
    }

    pub fn value(&self, x: &Configuration) -> FibreElement {
        self.values.get(x).cloned().unwrap_or_else(|| FibreElement::zero(x.clone()))
    }

    pub fn values(&self) -> &BTreeMap<Configuration, FibreElement> {
        &self.values
    }

    pub fn support(&self) -> impl Iterator<Item = &Configuration> {
        self.values.keys()
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Sum of two sections; the bound is the larger of the two.
    pub fn sum(&self, other: &Section) -> Section {
        let mut out = self.clone();
        out.max_points = self.max_points.max(other.max_points);
        for e in other.values.values() {
            out.add_unchecked(e.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Section {
        let mut out = Section::zero(self.max_points);
        for e in self.values.values() {
            out.add_unchecked(e.scale(c));
        }
        out
    }

    pub fn neg(&self) -> Section {
        self.scale(&-crate::scalar::one())
    }

    pub fn difference(&self, other: &Section) -> Section {
        self.sum(&other.neg())
    }

    pub fn with_max_points(&self, max_points: usize) -> Truncation {
        truncate(self, max_points)
    }
}

impl fmt::Debug for Section {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Section(≤{}) ", self.max_points)?;
        f.debug_map().entries(self.values.iter().map(|(x, e)| (x, e.to_string()))).finish()
    }
}

fn split_sum(
    a: &Section,
    b: &Section,
    product: impl Fn(&FibreElement, &FibreElement) -> FibreElement,
) -> Truncation {
    let max_points = a.max_points.max(b.max_points);
    let mut all = Section::zero(usize::MAX);
    for (x1, u) in &a.values {
        for (x2, v) in &b.values {
            if x1.is_disjoint(x2) {
                all.add_unchecked(product(u, v));
            }
        }
    }
    truncate(&all, max_points)
}

/// `φ•ψ`, truncated at the larger input bound.
pub fn convolve(a: &Section, b: &Section) -> Truncation {
    split_sum(a, b, |u, v| u.cauchy_mul(v).expect("disjoint supports"))
}

/// `{φ, ψ}`, truncated at the larger input bound.
pub fn section_bracket(a: &Section, b: &Section, k: &Kernel) -> Truncation {
    split_sum(a, b, |u, v| bracket(u, v, k).expect("disjoint supports"))
}

/// `{φ1,{φ2,φ3}} + {φ2,{φ3,φ1}} + {φ3,{φ1,φ2}}`.
pub fn jacobiator(a: &Section, b: &Section, c: &Section, k: &Kernel) -> Section {
    let br = |x: &Section, y: &Section| section_bracket(x, y, k).kept;
    br(a, &br(b, c)).sum(&br(b, &br(c, a))).sum(&br(c, &br(a, b)))
}

/// Keeps the configurations with at most `max_points` points.
pub fn truncate(s: &Section, max_points: usize) -> Truncation {
    let mut kept = Section::zero(max_points);
    let mut dropped = Vec::new();
    for (x, e) in &s.values {
        if x.len() <= max_points {
            kept.values.insert(x.clone(), e.clone());
        } else {
            dropped.push((x.clone(), e.clone()));
        }
    }
    Truncation { kept, dropped }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configspace::{splits2, BaseSpace};
    use crate::expr::parse_element;
    use crate::random::{random_base, random_kernel, random_section};
    use crate::scalar::int;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m3() -> BaseSpace {
        BaseSpace::uniform(&["p", "q", "r"], 1).unwrap()
    }

    fn el(src: &str) -> FibreElement {
        parse_element(src, &m3()).unwrap()
    }

    fn sec(values: &[&str]) -> Section {
        Section::from_values(3, values.iter().map(|v| el(v))).unwrap()
    }

    fn cfg(labels: &[&str]) -> Configuration {
        Configuration::from_labels(labels).unwrap()
    }

    /// The split sum evaluated literally, configuration by configuration.
    fn split_sum_oracle(
        a: &Section,
        b: &Section,
        configs: &[Configuration],
        product: impl Fn(&FibreElement, &FibreElement) -> FibreElement,
    ) -> Section {
        let mut out = Section::zero(usize::MAX);
        for x in configs {
            let mut v = FibreElement::zero(x.clone());
            for (x1, x2) in splits2(x) {
                v = v.try_add(&product(&a.value(&x1), &b.value(&x2))).unwrap();
            }
            out.add(v).unwrap();
        }
        truncate(&out, a.max_points().max(b.max_points())).kept
    }

    #[test]
    fn unit_examples() {
        let u = Section::unit();
        assert_eq!(u.value(&Configuration::empty()), FibreElement::vacuum());
        assert!(u.value(&cfg(&["p"])).is_zero());
        assert_eq!(convolve(&u, &u).kept, u);
        assert_eq!(truncate(&u, 0).kept, u);
        let phi = sec(&["e[p,0]", "e[q,0]", "1[] "]);
        assert_eq!(convolve(&u, &phi).kept, phi);
        assert_eq!(convolve(&phi, &u).kept, phi);
    }

    #[test]
    fn convolve_examples() {
        let phi = sec(&["e[p,0]", "e[q,0]"]);
        let sq = convolve(&phi, &phi);
        assert!(sq.is_exact());
        assert_eq!(sq.kept.value(&cfg(&["p", "q"])), el("2 * e[p,0] # e[q,0]"));
        assert!(sq.kept.value(&cfg(&["p"])).is_zero());
    }

    #[test]
    fn convolve_reports_dropped_terms() {
        let a = Section::from_values(1, [el("e[p,0]")]).unwrap();
        let b = Section::from_values(1, [el("e[q,0]"), el("1[]")]).unwrap();
        let t = convolve(&a, &b);
        assert_eq!(t.kept.values().len(), 1);
        assert_eq!(t.dropped, vec![(cfg(&["p", "q"]), el("e[p,0] # e[q,0]"))]);
    }

    #[test]
    fn bracket_examples() {
        let c = int(4);
        let k = Kernel::new().with(("p", 0), ("q", 0), c.clone()).unwrap();
        let dp = sec(&["e[p,0]"]);
        let dq = sec(&["e[q,0]"]);
        let b = section_bracket(&dp, &dq, &k).kept;
        assert_eq!(b.values().len(), 1);
        assert_eq!(b.value(&cfg(&["p", "q"])), el("1[p] # 1[q]").scale(&c));
        assert!(section_bracket(&Section::unit(), &dp, &k).kept.is_zero());
        let phi = dp.sum(&dq);
        assert!(section_bracket(&phi, &phi, &k).kept.is_zero());
    }

    #[test]
    fn jacobiator_on_deltas() {
        let k = Kernel::new()
            .with(("p", 0), ("q", 0), int(1))
            .unwrap()
            .with(("p", 0), ("r", 0), int(2))
            .unwrap();
        let (a, b, c) = (sec(&["e[p,0]"]), sec(&["e[q,0]"]), sec(&["e[r,0]"]));
        assert!(jacobiator(&a, &b, &c, &k).is_zero());
        assert!(jacobiator(&a, &a, &c, &k).is_zero());
    }

    #[test]
    fn truncate_examples() {
        let phi = sec(&["1[]", "e[p,0]", "e[p,0] # e[q,0]"]);
        let t0 = truncate(&phi, 0);
        assert_eq!(t0.kept.values().len(), 1);
        assert_eq!(t0.dropped.len(), 2);
        let t1 = truncate(&phi, 1).kept;
        assert_eq!(truncate(&t1, 1).kept, t1);
        assert_eq!(
            Section::delta(el("e[p,0] # e[q,0]"), 1),
            Err(Error::TooManyPoints { config: cfg(&["p", "q"]), max: 1 })
        );
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn matches_literal_split_sum(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let base = random_base(&mut rng, 4, 2);
            let k = random_kernel(&mut rng, &base);
            let a = random_section(&mut rng, &base, 3, 2, 2, 4);
            let b = random_section(&mut rng, &base, 3, 2, 2, 4);
            let configs = base.configurations_up_to(4);
            let conv = split_sum_oracle(&a, &b, &configs, |u, v| u.cauchy_mul(v).unwrap());
            prop_assert_eq!(convolve(&a, &b).kept, conv);
            let br = split_sum_oracle(&a, &b, &configs, |u, v| bracket(u, v, &k).unwrap());
            prop_assert_eq!(section_bracket(&a, &b, &k).kept, br);
        }

        #[test]
        fn algebra_laws(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let base = random_base(&mut rng, 4, 2);
            let k = random_kernel(&mut rng, &base);
            let a = random_section(&mut rng, &base, 3, 2, 2, 3);
            let b = random_section(&mut rng, &base, 3, 2, 2, 3);
            let c = random_section(&mut rng, &base, 3, 2, 2, 3);
            let conv = |x: &Section, y: &Section| convolve(x, y).kept;
            let br = |x: &Section, y: &Section| section_bracket(x, y, &k).kept;
            prop_assert_eq!(conv(&a, &b), conv(&b, &a));
            prop_assert_eq!(conv(&conv(&a, &b), &c), conv(&a, &conv(&b, &c)));
            prop_assert_eq!(br(&a, &b), br(&b, &a).neg());
            prop_assert!(jacobiator(&a, &b, &c, &k).is_zero());
            prop_assert_eq!(br(&a, &conv(&b, &c)), conv(&br(&a, &b), &c).sum(&conv(&b, &br(&a, &c))));
            // truncation commutes with the product
            for m in 0..=3 {
                let lhs = truncate(&conv(&a, &b), m).kept;
                let rhs = truncate(&conv(&truncate(&a, m).kept, &truncate(&b, m).kept), m).kept;
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
