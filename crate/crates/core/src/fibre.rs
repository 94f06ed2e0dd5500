//! Fibres of the Cauchy–Hadamard bundle `S^⊠ S^⊗(V)`.
//!
//! Over a configuration `X` a basis element is a [`CauchyMonomial`]: one
//! commutative monomial in the basis of `V_x` for every `x ∈ X`. Points whose
//! factor is empty carry the local unit `1_x`, and they are stored, so the
//! supporting configuration of a monomial is always explicit. `1_p ⊡ e[q,0]`
//! and `e[q,0]` are different elements living over different fibres.
//!
//! A [`FibreElement`] is an exact rational combination of monomials over one
//! configuration, with the two commutative products:
//!
//! * `⊙` ([`FibreElement::hadamard_mul`]), pointwise exponent addition between
//!   elements over the same configuration, unit `1_X`;
//! * `⊡` ([`FibreElement::cauchy_mul`]), union of factor maps between elements
//!   over disjoint configurations, unit `1_∅`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::configspace::{BaseSpace, Configuration, PointId};
use crate::error::{Error, Result};
use crate::scalar::{accumulate, Scalar};

/// A commutative monomial in the basis vectors of a single fibre `V_x`.
/// The empty map is the local unit `1_x`.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointFactor(BTreeMap<usize, u32>);

impl PointFactor {
    pub fn one() -> Self {
        PointFactor(BTreeMap::new())
    }

    pub fn generator(index: usize) -> Self {
        PointFactor(BTreeMap::from([(index, 1)]))
    }

    /// Builds a factor from `(basis index, multiplicity)` pairs; zero multiplicities are dropped.
    pub fn from_exponents(exps: impl IntoIterator<Item = (usize, u32)>) -> Self {
        let mut map = BTreeMap::new();
        for (i, m) in exps {
            if m > 0 {
                *map.entry(i).or_insert(0) += m;
            }
        }
        PointFactor(map)
    }

    pub fn exponents(&self) -> &BTreeMap<usize, u32> {
        &self.0
    }

    pub fn multiplicity(&self, index: usize) -> u32 {
        self.0.get(&index).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> u32 {
        self.0.values().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.0.keys().next_back().copied()
    }

    pub fn mul(&self, other: &PointFactor) -> PointFactor {
        let mut out = self.0.clone();
        for (&i, &m) in &other.0 {
            *out.entry(i).or_insert(0) += m;
        }
        PointFactor(out)
    }

    /// The factor with one copy of `e_index` removed, if present.
    pub fn without_one(&self, index: usize) -> Option<PointFactor> {
        let m = self.multiplicity(index);
        if m == 0 {
            return None;
        }
        let mut out = self.0.clone();
        if m == 1 {
            out.remove(&index);
        } else {
            out.insert(index, m - 1);
        }
        Some(PointFactor(out))
    }
}

impl fmt::Debug for PointFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(i, m)| if *m == 1 { format!("e{i}") } else { format!("e{i}^{m}") })
            .collect();
        f.write_str(&parts.join("."))
    }
}

/// `a^1_{x_1} ⊡ ⋯ ⊡ a^k_{x_k}`: one factor per point of the configuration.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CauchyMonomial(BTreeMap<PointId, PointFactor>);

impl CauchyMonomial {
    /// `1_X = 1_{x_1} ⊡ ⋯ ⊡ 1_{x_k}`.
    pub fn unit(x: &Configuration) -> Self {
        CauchyMonomial(x.iter().map(|p| (p.clone(), PointFactor::one())).collect())
    }

    pub fn generator(point: PointId, index: usize) -> Self {
        CauchyMonomial(BTreeMap::from([(point, PointFactor::generator(index))]))
    }

    pub fn from_factors(factors: impl IntoIterator<Item = (PointId, PointFactor)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (p, f) in factors {
            if map.contains_key(&p) {
                return Err(Error::RepeatedPoint(p.to_string()));
            }
            map.insert(p, f);
        }
        Ok(CauchyMonomial(map))
    }

    pub fn factors(&self) -> &BTreeMap<PointId, PointFactor> {
        &self.0
    }

    pub fn factor(&self, p: &PointId) -> Option<&PointFactor> {
        self.0.get(p)
    }

    pub fn configuration(&self) -> Configuration {
        Configuration::from_points(self.0.keys().cloned()).expect("map keys are distinct")
    }

    /// Total `⊗`-degree.
    pub fn degree(&self) -> u32 {
        self.0.values().map(PointFactor::degree).sum()
    }

    pub fn is_unit(&self) -> bool {
        self.0.values().all(PointFactor::is_one)
    }

    /// Replaces the factor at `p` (which must already be present).
    pub fn with_factor(&self, p: &PointId, f: PointFactor) -> CauchyMonomial {
        let mut out = self.0.clone();
        *out.get_mut(p).expect("point in monomial") = f;
        CauchyMonomial(out)
    }

    /// Pointwise product of two monomials over the same points.
    pub fn hadamard(&self, other: &CauchyMonomial) -> Option<CauchyMonomial> {
        if self.0.len() != other.0.len() || !self.0.keys().eq(other.0.keys()) {
            return None;
        }
        Some(CauchyMonomial(
            self.0
                .iter()
                .zip(other.0.values())
                .map(|((p, a), b)| (p.clone(), a.mul(b)))
                .collect(),
        ))
    }

    /// Union of factor maps over disjoint points.
    pub fn cauchy(&self, other: &CauchyMonomial) -> Option<CauchyMonomial> {
        let mut out = self.0.clone();
        for (p, f) in &other.0 {
            if out.insert(p.clone(), f.clone()).is_some() {
                return None;
            }
        }
        Some(CauchyMonomial(out))
    }

    /// Splits off the factors at the points of `part`.
    pub fn restrict(&self, part: &Configuration) -> CauchyMonomial {
        CauchyMonomial(
            self.0
                .iter()
                .filter(|(p, _)| part.contains(p))
                .map(|(p, f)| (p.clone(), f.clone()))
                .collect(),
        )
    }
}

impl fmt::Debug for CauchyMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1_∅");
        }
        let parts: Vec<String> = self.0.iter().map(|(p, a)| format!("{p}:{a:?}")).collect();
        write!(f, "[{}]", parts.join(" # "))
    }
}

/// An element of the fibre `S^⊠ S^⊗(V)_X` over a single configuration `X`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FibreElement {
    config: Configuration,
    terms: BTreeMap<CauchyMonomial, Scalar>,
}

impl FibreElement {
    /// The zero of the fibre over `x`.
    pub fn zero(x: Configuration) -> Self {
        FibreElement {
            config: x,
            terms: BTreeMap::new(),
        }
    }

    /// `1_X`, the `⊙`-unit over `x`.
    pub fn unit(x: &Configuration) -> Self {
        FibreElement::from_monomial(CauchyMonomial::unit(x), Scalar::one())
    }

    /// `1_∅`, the `⊡`-unit.
    pub fn vacuum() -> Self {
        FibreElement::unit(&Configuration::empty())
    }

    /// The generator `e_index` of `V_point`, pushed forward to the fibre over `{point}`.
    pub fn generator(base: &BaseSpace, point: &PointId, index: usize) -> Result<Self> {
        base.check_basis(point, index)?;
        Ok(FibreElement::from_monomial(
            CauchyMonomial::generator(point.clone(), index),
            Scalar::one(),
        ))
    }

    pub fn from_monomial(m: CauchyMonomial, c: Scalar) -> Self {
        let config = m.configuration();
        let mut terms = BTreeMap::new();
        accumulate(&mut terms, m, c);
        FibreElement { config, terms }
    }

    /// Collects terms over `x`; every monomial must be supported on `x`.
    pub fn from_terms(
        x: Configuration,
        terms: impl IntoIterator<Item = (CauchyMonomial, Scalar)>,
    ) -> Result<Self> {
        let mut out = FibreElement::zero(x);
        for (m, c) in terms {
            out.add_term(m, c)?;
        }
        Ok(out)
    }

    pub fn config(&self) -> &Configuration {
        &self.config
    }

    pub fn terms(&self) -> &BTreeMap<CauchyMonomial, Scalar> {
        &self.terms
    }

    pub fn coefficient(&self, m: &CauchyMonomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, m: CauchyMonomial, c: Scalar) -> Result<()> {
        if !m.factors().keys().eq(self.config.iter()) {
            return Err(Error::ConfigMismatch {
                left: self.config.clone(),
                right: m.configuration(),
            });
        }
        accumulate(&mut self.terms, m, c);
        Ok(())
    }

    fn check_same(&self, other: &FibreElement) -> Result<()> {
        if self.config != other.config {
            return Err(Error::ConfigMismatch {
                left: self.config.clone(),
                right: other.config.clone(),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &FibreElement) -> Result<FibreElement> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            accumulate(&mut out.terms, m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &FibreElement) -> Result<FibreElement> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> FibreElement {
        self.scale(&-Scalar::one())
    }

    pub fn scale(&self, c: &Scalar) -> FibreElement {
        if c.is_zero() {
            return FibreElement::zero(self.config.clone());
        }
        FibreElement {
            config: self.config.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a * c))
                .collect(),
        }
    }

    /// `a ⊙ b`: both factors must live over the same configuration.
    pub fn hadamard_mul(&self, other: &FibreElement) -> Result<FibreElement> {
        self.check_same(other)?;
        let mut out = FibreElement::zero(self.config.clone());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.hadamard(mb).expect("same configuration");
                accumulate(&mut out.terms, m, ca * cb);
            }
        }
        Ok(out)
    }

    /// `a ⊡ b`: the factors must live over disjoint configurations.
    pub fn cauchy_mul(&self, other: &FibreElement) -> Result<FibreElement> {
        let config = self.config.checked_union(&other.config)?;
        let mut out = FibreElement::zero(config);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.cauchy(mb).expect("disjoint configurations");
                accumulate(&mut out.terms, m, ca * cb);
            }
        }
        Ok(out)
    }

    /// The supporting configuration and the total `⊗`-degree of every term.
    pub fn degrees(&self) -> (Configuration, Vec<u32>) {
        let mut d: Vec<u32> = self.terms.keys().map(CauchyMonomial::degree).collect();
        d.sort_unstable();
        (self.config.clone(), d)
    }

    /// Checks every basis index against the ranks of `base`.
    pub fn check_against(&self, base: &BaseSpace) -> Result<()> {
        base.check_configuration(&self.config)?;
        for m in self.terms.keys() {
            for (p, f) in m.factors() {
                if let Some(i) = f.max_index() {
                    base.check_basis(p, i)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FibreElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::expr::render(self))
    }
}

impl fmt::Display for FibreElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::render(self))
    }
}

/// All exponent maps on `rank` basis vectors with total degree at most `max_degree`.
pub fn point_factors_up_to(rank: usize, max_degree: u32) -> Vec<PointFactor> {
    let mut out = Vec::new();
    let mut exps = vec![0u32; rank];
    fn rec(i: usize, left: u32, exps: &mut Vec<u32>, out: &mut Vec<PointFactor>) {
        if i == exps.len() {
            out.push(PointFactor::from_exponents(exps.iter().copied().enumerate()));
            return;
        }
        for m in 0..=left {
            exps[i] = m;
            rec(i + 1, left - m, exps, out);
        }
        exps[i] = 0;
    }
    rec(0, max_degree, &mut exps, &mut out);
    out
}

/// Basis of the fibre over `x` truncated at `⊗`-degree `max_degree` at every point.
pub fn monomials_up_to(base: &BaseSpace, x: &Configuration, max_degree: u32) -> Result<Vec<CauchyMonomial>> {
    let mut out = vec![CauchyMonomial::default()];
    for p in x.iter() {
        let rank = base.checked_rank(p)?;
        let local = point_factors_up_to(rank, max_degree);
        out = out
            .iter()
            .flat_map(|m| {
                local.iter().map(move |f| {
                    m.cauchy(&CauchyMonomial(BTreeMap::from([(p.clone(), f.clone())])))
                        .expect("fresh point")
                })
            })
            .collect();
    }
    Ok(out)
}

/// Basis of `S^⊠k(V)_X`: exactly one generator at each point of `x`.
pub fn linear_monomials(base: &BaseSpace, x: &Configuration) -> Result<Vec<CauchyMonomial>> {
    let mut out = vec![CauchyMonomial::default()];
    for p in x.iter() {
        let rank = base.checked_rank(p)?;
        out = out
            .iter()
            .flat_map(|m| {
                (0..rank).map(move |i| {
                    m.cauchy(&CauchyMonomial::generator(p.clone(), i))
                        .expect("fresh point")
                })
            })
            .collect();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configspace::binomial;
    use crate::random::{random_base, random_disjoint_configs, random_element};
    use crate::scalar::{int, ratio};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m2() -> BaseSpace {
        use crate::configspace::PointSpec;
        BaseSpace::new([
            PointSpec::new("p", 2, int(1)),
            PointSpec::new("q", 1, int(1)),
            PointSpec::new("r", 1, int(1)),
        ])
        .unwrap()
    }

    fn pt(s: &str) -> PointId {
        PointId::new(s)
    }

    fn cfg(labels: &[&str]) -> Configuration {
        Configuration::from_labels(labels).unwrap()
    }

    fn e(base: &BaseSpace, p: &str, i: usize) -> FibreElement {
        FibreElement::generator(base, &pt(p), i).unwrap()
    }

    #[test]
    fn generators() {
        let m = m2();
        let g = e(&m, "p", 0);
        assert_eq!(g.config(), &cfg(&["p"]));
        assert_eq!(g.len(), 1);
        assert_eq!(g.coefficient(&CauchyMonomial::generator(pt("p"), 0)), int(1));
        assert_eq!(
            e(&m, "p", 1).terms().keys().next().unwrap(),
            &CauchyMonomial::generator(pt("p"), 1)
        );
        assert!(matches!(
            FibreElement::generator(&m, &pt("p"), 3),
            Err(Error::BasisOutOfRange { index: 3, rank: 2, .. })
        ));
        assert!(matches!(
            FibreElement::generator(&m, &pt("z"), 0),
            Err(Error::UnknownPoint(_))
        ));
    }

    #[test]
    fn units() {
        let u = FibreElement::unit(&cfg(&[]));
        assert_eq!(u, FibreElement::vacuum());
        assert!(u.terms().keys().next().unwrap().is_unit());
        let upq = FibreElement::unit(&cfg(&["p", "q"]));
        let up = FibreElement::unit(&cfg(&["p"]));
        let uq = FibreElement::unit(&cfg(&["q"]));
        assert_eq!(upq, up.cauchy_mul(&uq).unwrap());
    }

    #[test]
    fn hadamard_examples() {
        let m = m2();
        let a = e(&m, "p", 0).cauchy_mul(&e(&m, "q", 0)).unwrap();
        let upq = FibreElement::unit(&cfg(&["p", "q"]));
        assert_eq!(upq.hadamard_mul(&a).unwrap(), a);

        let sq = e(&m, "p", 0).hadamard_mul(&e(&m, "p", 0)).unwrap();
        let expected = CauchyMonomial::from_factors([(pt("p"), PointFactor::from_exponents([(0, 2)]))]).unwrap();
        assert_eq!(sq, FibreElement::from_monomial(expected, int(1)));

        let left = e(&m, "p", 0).cauchy_mul(&FibreElement::unit(&cfg(&["q"]))).unwrap();
        let right = FibreElement::unit(&cfg(&["p"])).cauchy_mul(&e(&m, "q", 0)).unwrap();
        assert_eq!(left.hadamard_mul(&right).unwrap(), a);

        assert!(matches!(
            e(&m, "p", 0).hadamard_mul(&e(&m, "q", 0)),
            Err(Error::ConfigMismatch { .. })
        ));
    }

    #[test]
    fn cauchy_examples() {
        let m = m2();
        let g = e(&m, "p", 1);
        assert_eq!(FibreElement::vacuum().cauchy_mul(&g).unwrap(), g);
        let pq = e(&m, "p", 0).cauchy_mul(&e(&m, "q", 0)).unwrap();
        assert_eq!(pq.config(), &cfg(&["p", "q"]));
        assert!(matches!(
            e(&m, "p", 0).cauchy_mul(&e(&m, "p", 0)),
            Err(Error::OverlappingConfigurations { .. })
        ));
    }

    #[test]
    fn unit_and_generator_differ() {
        let m = m2();
        let a = FibreElement::unit(&cfg(&["p"])).cauchy_mul(&e(&m, "q", 0)).unwrap();
        assert_ne!(a, e(&m, "q", 0));
        assert!(a.try_add(&e(&m, "q", 0)).is_err());
    }

    #[test]
    fn degrees_examples() {
        let m = m2();
        assert_eq!(FibreElement::vacuum().degrees(), (cfg(&[]), vec![0]));
        assert_eq!(e(&m, "p", 0).degrees(), (cfg(&["p"]), vec![1]));
        let a = e(&m, "p", 0)
            .hadamard_mul(&e(&m, "p", 0))
            .unwrap()
            .cauchy_mul(&e(&m, "q", 0))
            .unwrap();
        assert_eq!(a.degrees(), (cfg(&["p", "q"]), vec![3]));
        assert_eq!(FibreElement::zero(cfg(&["p"])).degrees(), (cfg(&["p"]), vec![]));
    }

    #[test]
    fn linear_combinations_cancel() {
        let m = m2();
        let g = e(&m, "p", 0).scale(&ratio(2, 3));
        assert!(g.try_sub(&g).unwrap().is_zero());
        assert_eq!(g.try_sub(&g).unwrap().config(), &cfg(&["p"]));
        assert!(g.scale(&int(0)).is_zero());
    }

    #[test]
    fn truncated_fibre_dimension() {
        let m = m2();
        for x in m.configurations_up_to(3) {
            for d in 0..=3u32 {
                let expected: u64 = x
                    .iter()
                    .map(|p| binomial(m.rank(p).unwrap() + d as usize, d as usize))
                    .product();
                let basis = monomials_up_to(&m, &x, d).unwrap();
                let distinct: std::collections::BTreeSet<_> = basis.iter().collect();
                assert_eq!(distinct.len(), basis.len());
                assert_eq!(basis.len() as u64, expected, "x={x} d={d}");
            }
            let lin = linear_monomials(&m, &x).unwrap();
            let prod: usize = x.iter().map(|p| m.rank(p).unwrap()).product();
            assert_eq!(lin.len(), prod);
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn monoid_laws(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let base = random_base(&mut rng, 5, 2);
            let [x, y, z] = random_disjoint_configs(&mut rng, &base, [2, 2, 1]);
            let a = random_element(&mut rng, &base, &x, 3, 3);
            let b = random_element(&mut rng, &base, &x, 3, 3);
            let c = random_element(&mut rng, &base, &x, 3, 3);
            prop_assert_eq!(a.hadamard_mul(&b).unwrap(), b.hadamard_mul(&a).unwrap());
            prop_assert_eq!(
                a.hadamard_mul(&b).unwrap().hadamard_mul(&c).unwrap(),
                a.hadamard_mul(&b.hadamard_mul(&c).unwrap()).unwrap()
            );
            prop_assert_eq!(FibreElement::unit(&x).hadamard_mul(&a).unwrap(), a.clone());

            let d = random_element(&mut rng, &base, &y, 3, 3);
            let f = random_element(&mut rng, &base, &z, 3, 3);
            prop_assert_eq!(a.cauchy_mul(&d).unwrap(), d.cauchy_mul(&a).unwrap());
            prop_assert_eq!(
                a.cauchy_mul(&d).unwrap().cauchy_mul(&f).unwrap(),
                a.cauchy_mul(&d.cauchy_mul(&f).unwrap()).unwrap()
            );
            prop_assert_eq!(FibreElement::vacuum().cauchy_mul(&a).unwrap(), a.clone());
        }

        #[test]
        fn interchange_law(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let base = random_base(&mut rng, 4, 2);
            let [x, y] = random_disjoint_configs(&mut rng, &base, [2, 2]);
            let a = random_element(&mut rng, &base, &x, 3, 3);
            let b = random_element(&mut rng, &base, &x, 3, 3);
            let c = random_element(&mut rng, &base, &y, 3, 3);
            let d = random_element(&mut rng, &base, &y, 3, 3);
            let lhs = a.cauchy_mul(&c).unwrap().hadamard_mul(&b.cauchy_mul(&d).unwrap()).unwrap();
            let rhs = a.hadamard_mul(&b).unwrap().cauchy_mul(&c.hadamard_mul(&d).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
