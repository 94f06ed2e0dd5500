//! Sections as polynomial functionals of a field, and the discrete Peierls
//! bracket used to cross-check the section bracket.
//!
//! A section `s` becomes `F_s(φ) = Σ_X w_X · poly(s(X))(φ)` where `w_X` is the
//! product of the point weights of `X` and `poly` sends `e_i` at `x` to the
//! variable `φ_i(x)`. The bracket of functionals is
//! `{F,G} = Σ_{x≠y} Σ_{i,j} k((x,i),(y,j)) ∂F/∂φ_i(x) ∂G/∂φ_j(y)`.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::configspace::{BaseSpace, PointId};
use crate::error::{Error, Result};
use crate::fibre::{CauchyMonomial, FibreElement};
use crate::poisson::{GenKey, Kernel};
use crate::scalar::{self, accumulate, Scalar};
use crate::sections::{section_bracket, Section};

/// The variable `φ_i(x)`.
pub type Var = GenKey;

/// Exponents of a monomial in the field variables; no zero entries.
pub type Exponents = BTreeMap<Var, u32>;

#[derive(Clone, Default, PartialEq, Eq)]
pub struct PolyFunctional {
    terms: BTreeMap<Exponents, Scalar>,
}

impl PolyFunctional {
    pub fn zero() -> Self {
        PolyFunctional::default()
    }

    pub fn constant(c: Scalar) -> Self {
        let mut f = PolyFunctional::zero();
        accumulate(&mut f.terms, Exponents::new(), c);
        f
    }

    pub fn variable(p: &PointId, i: usize) -> Self {
        PolyFunctional::monomial([((p.clone(), i), 1)].into_iter().collect(), scalar::one())
    }

    pub fn monomial(exps: Exponents, c: Scalar) -> Self {
        let exps = exps.into_iter().filter(|(_, e)| *e > 0).collect();
        let mut f = PolyFunctional::zero();
        accumulate(&mut f.terms, exps, c);
        f
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &PolyFunctional) -> PolyFunctional {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            accumulate(&mut out.terms, e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &PolyFunctional) -> PolyFunctional {
        self.add(&other.scale(&-scalar::one()))
    }

    pub fn scale(&self, c: &Scalar) -> PolyFunctional {
        let mut out = PolyFunctional::zero();
        for (e, v) in &self.terms {
            accumulate(&mut out.terms, e.clone(), v * c);
        }
        out
    }

    pub fn mul(&self, other: &PolyFunctional) -> PolyFunctional {
        let mut out = PolyFunctional::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let mut e = e1.clone();
                for (v, n) in e2 {
                    *e.entry(v.clone()).or_insert(0) += n;
                }
                accumulate(&mut out.terms, e, c1 * c2);
            }
        }
        out
    }

    /// Variables occurring with positive exponent.
    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self.terms.keys().flat_map(|e| e.keys().cloned()).collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn degree_in(&self, v: &Var) -> u32 {
        self.terms.keys().map(|e| e.get(v).copied().unwrap_or(0)).max().unwrap_or(0)
    }

    /// `∂F/∂v`.
    pub fn partial(&self, v: &Var) -> PolyFunctional {
        let mut out = PolyFunctional::zero();
        for (e, c) in &self.terms {
            let Some(&n) = e.get(v) else { continue };
            let mut e = e.clone();
            if n == 1 {
                e.remove(v);
            } else {
                e.insert(v.clone(), n - 1);
            }
            accumulate(&mut out.terms, e, c * scalar::int(i64::from(n)));
        }
        out
    }

    /// `F` with `v` replaced by `v + h`, expanded binomially.
    pub fn shift(&self, v: &Var, h: &Scalar) -> PolyFunctional {
        let mut out = PolyFunctional::zero();
        for (e, c) in &self.terms {
            let n = e.get(v).copied().unwrap_or(0);
            let mut binom = Scalar::one();
            for m in 0..=n {
                // C(n, m) v^(n-m) h^m
                let mut e2 = e.clone();
                if n - m == 0 {
                    e2.remove(v);
                } else {
                    e2.insert(v.clone(), n - m);
                }
                accumulate(&mut out.terms, e2, c * &binom * num_traits::pow(h.clone(), m as usize));
                binom = binom * scalar::int(i64::from(n - m)) / scalar::int(i64::from(m + 1));
            }
        }
        out
    }

    pub fn evaluate(&self, field: &Field) -> Result<Scalar> {
        let mut total = Scalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (v, n) in e {
                t *= num_traits::pow(field.value(v)?.clone(), *n as usize);
            }
            total += t;
        }
        Ok(total)
    }
}

impl fmt::Display for PolyFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (n, (e, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            let mut parts = Vec::new();
            if e.is_empty() || !c.is_one() {
                parts.push(scalar::render(c));
            }
            for ((p, i), m) in e {
                parts.push(if *m == 1 { format!("phi[{p},{i}]") } else { format!("phi[{p},{i}]^{m}") });
            }
            f.write_str(&parts.join(" * "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for PolyFunctional {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A field configuration: a vector of length `rank(x)` at every point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Field {
    values: BTreeMap<PointId, Vec<Scalar>>,
}

impl Field {
    pub fn new(base: &BaseSpace, values: BTreeMap<PointId, Vec<Scalar>>) -> Result<Self> {
        for p in values.keys() {
            base.checked_rank(p)?;
        }
        for p in base.points() {
            let v = values.get(p).ok_or_else(|| Error::MissingPoint(p.to_string()))?;
            let rank = base.checked_rank(p)?;
            if v.len() != rank {
                return Err(Error::FieldLength { point: p.to_string(), len: v.len(), rank });
            }
        }
        Ok(Field { values })
    }

    pub fn value(&self, v: &Var) -> Result<&Scalar> {
        self.values
            .get(&v.0)
            .ok_or_else(|| Error::MissingPoint(v.0.to_string()))?
            .get(v.1)
            .ok_or_else(|| Error::MissingPoint(format!("{}[{}]", v.0, v.1)))
    }

    pub fn values(&self) -> &BTreeMap<PointId, Vec<Scalar>> {
        &self.values
    }

    /// The field with `h` added to the variable `v`.
    pub fn shifted(&self, v: &Var, h: &Scalar) -> Result<Field> {
        let mut out = self.clone();
        let slot = out
            .values
            .get_mut(&v.0)
            .and_then(|xs| xs.get_mut(v.1))
            .ok_or_else(|| Error::MissingPoint(v.0.to_string()))?;
        *slot += h;
        Ok(out)
    }
}

fn monomial_poly(m: &CauchyMonomial) -> Exponents {
    m.factors()
        .iter()
        .flat_map(|(p, f)| f.exponents().iter().map(move |(&i, &n)| ((p.clone(), i), n)))
        .collect()
}

/// `poly(e)`, without density weights.
pub fn element_functional(e: &FibreElement) -> PolyFunctional {
    let mut out = PolyFunctional::zero();
    for (m, c) in e.terms() {
        accumulate(&mut out.terms, monomial_poly(m), c.clone());
    }
    out
}

/// `F_s = Σ_X w_X · poly(s(X))`.
pub fn to_functional(s: &Section, base: &BaseSpace) -> Result<PolyFunctional> {
    let mut out = PolyFunctional::zero();
    for (x, e) in s.values() {
        out = out.add(&element_functional(e).scale(&base.density(x)?));
    }
    Ok(out)
}

pub fn evaluate(f: &PolyFunctional, field: &Field) -> Result<Scalar> {
    f.evaluate(field)
}

pub fn peierls_bracket(f: &PolyFunctional, g: &PolyFunctional, k: &Kernel) -> PolyFunctional {
    let mut out = PolyFunctional::zero();
    let gv = g.variables();
    for u in f.variables() {
        let df = f.partial(&u);
        for v in &gv {
            if u.0 == v.0 {
                continue;
            }
            let kv = k.eval(&u, v).expect("distinct points");
            if kv.is_zero() {
                continue;
            }
            out = out.add(&df.mul(&g.partial(v)).scale(&kv));
        }
    }
    out
}

/// `Σ w_X w_Y {poly(s(X)), poly(t(Y))}` over pairs of support
/// configurations that are disjoint and fit within the bound.
pub fn disjoint_pair_peierls(s: &Section, t: &Section, k: &Kernel, base: &BaseSpace) -> Result<PolyFunctional> {
    let bound = s.max_points().max(t.max_points());
    let mut out = PolyFunctional::zero();
    for (x, a) in s.values() {
        for (y, b) in t.values() {
            if !x.is_disjoint(y) || x.len() + y.len() > bound {
                continue;
            }
            let w = base.density(x)? * base.density(y)?;
            out = out.add(&peierls_bracket(&element_functional(a), &element_functional(b), k).scale(&w));
        }
    }
    Ok(out)
}

/// Both sides of the Peierls comparison.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleReport {
    /// `F_{{s,t}}`.
    pub symbolic: PolyFunctional,
    /// The disjoint-pair Peierls sum.
    pub peierls: PolyFunctional,
    /// `{F_s, F_t}` over all pairs of support configurations.
    pub peierls_all_pairs: PolyFunctional,
}

impl OracleReport {
    pub fn agrees(&self) -> bool {
        self.symbolic == self.peierls
    }

    pub fn agrees_with_all_pairs(&self) -> bool {
        self.symbolic == self.peierls_all_pairs
    }
}

pub fn oracle_report(s: &Section, t: &Section, k: &Kernel, base: &BaseSpace) -> Result<OracleReport> {
    Ok(OracleReport {
        symbolic: to_functional(&section_bracket(s, t, k).kept, base)?,
        peierls: disjoint_pair_peierls(s, t, k, base)?,
        peierls_all_pairs: peierls_bracket(&to_functional(s, base)?, &to_functional(t, base)?, k),
    })
}

/// Whether the functional of the section bracket matches the Peierls bracket.
///
/// Pairs of overlapping support configurations contribute nothing to the
/// section bracket, so they are left out of the Peierls side as well; when no
/// two support configurations of `s` and `t` meet, this is the plain
/// `{F_s, F_t}`.
pub fn oracle_check(s: &Section, t: &Section, k: &Kernel, base: &BaseSpace) -> Result<bool> {
    Ok(oracle_report(s, t, k, base)?.agrees())
}

/// `∂F/∂v` at `field`, recovered from difference quotients alone.
///
/// `Q(h) = (F(φ + h δ_v) − F(φ)) / h` is a polynomial in `h` of degree
/// `deg_v F − 1`; sampling it at `h = 1/2, 1/4, …` and interpolating to
/// `h = 0` gives the derivative exactly.
pub fn finite_difference_derivative(f: &PolyFunctional, v: &Var, field: &Field) -> Result<Scalar> {
    let n = f.degree_in(v).max(1) as usize;
    let f0 = f.evaluate(field)?;
    let mut hs = Vec::with_capacity(n);
    let mut qs = Vec::with_capacity(n);
    let mut h = scalar::ratio(1, 2);
    for _ in 0..n {
        let q = (f.evaluate(&field.shifted(v, &h)?)? - &f0) / &h;
        hs.push(h.clone());
        qs.push(q);
        h /= scalar::int(2);
    }
    let mut at_zero = Scalar::zero();
    for (m, q) in qs.iter().enumerate() {
        let mut l = Scalar::one();
        for (j, hj) in hs.iter().enumerate() {
            if j != m {
                l *= -hj / (&hs[m] - hj);
            }
        }
        at_zero += q * l;
    }
    Ok(at_zero)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::configspace::PointSpec;
    use crate::expr::parse_element;
    use crate::random::{random_field, random_kernel, random_polynomial, random_section, random_weighted_base};
    use crate::scalar::{int, ratio};
    use crate::sections::convolve;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn weighted() -> BaseSpace {
        BaseSpace::new([
            PointSpec::new("p", 1, ratio(1, 2)),
            PointSpec::new("q", 1, int(3)),
            PointSpec::new("r", 1, int(1)),
        ])
        .unwrap()
    }

    fn phi(p: &str) -> PolyFunctional {
        PolyFunctional::variable(&PointId::new(p), 0)
    }

    fn var(p: &str) -> Var {
        (PointId::new(p), 0)
    }

    fn delta(base: &BaseSpace, src: &str) -> Section {
        Section::delta(parse_element(src, base).unwrap(), base.len()).unwrap()
    }

    fn field(base: &BaseSpace, vals: &[(&str, Scalar)]) -> Field {
        Field::new(base, vals.iter().map(|(p, v)| (PointId::new(p), vec![v.clone()])).collect()).unwrap()
    }

    #[test]
    fn to_functional_examples() {
        let m = weighted();
        assert_eq!(to_functional(&Section::unit(), &m).unwrap(), PolyFunctional::constant(int(1)));
        assert_eq!(to_functional(&delta(&m, "e[p,0]"), &m).unwrap(), phi("p").scale(&ratio(1, 2)));
        let s = delta(&m, "e[p,0] . e[p,0] # e[q,0]");
        let want = phi("p").mul(&phi("p")).mul(&phi("q")).scale(&ratio(3, 2));
        assert_eq!(to_functional(&s, &m).unwrap(), want);
    }

    #[test]
    fn evaluate_examples() {
        let m = weighted();
        let f = field(&m, &[("p", int(2)), ("q", int(5)), ("r", int(7))]);
        assert_eq!(PolyFunctional::constant(int(1)).evaluate(&f).unwrap(), int(1));
        let fp = to_functional(&delta(&m, "e[p,0]"), &m).unwrap();
        assert_eq!(fp.evaluate(&f).unwrap(), int(1));
        // single-point supports at distinct points
        let s = delta(&m, "e[p,0]");
        let t = delta(&m, "e[q,0]");
        let conv = to_functional(&convolve(&s, &t).kept, &m).unwrap();
        let prod = to_functional(&s, &m).unwrap().mul(&to_functional(&t, &m).unwrap());
        assert_eq!(conv.evaluate(&f).unwrap(), prod.evaluate(&f).unwrap());
    }

    #[test]
    fn field_validation() {
        let m = weighted();
        let partial: BTreeMap<_, _> = [(PointId::new("p"), vec![int(1)])].into_iter().collect();
        assert_eq!(Field::new(&m, partial), Err(Error::MissingPoint("q".into())));
        let long: BTreeMap<_, _> =
            m.points().iter().map(|p| (p.clone(), vec![int(1), int(2)])).collect();
        assert!(matches!(Field::new(&m, long), Err(Error::FieldLength { .. })));
    }

    #[test]
    fn peierls_examples() {
        let c = ratio(5, 3);
        let k = Kernel::new().with(("p", 0), ("q", 0), c.clone()).unwrap();
        let one = PolyFunctional::constant(int(1));
        assert!(peierls_bracket(&one, &phi("q"), &k).is_zero());
        assert!(peierls_bracket(&phi("p"), &one, &k).is_zero());
        assert_eq!(peierls_bracket(&phi("p"), &phi("q"), &k), PolyFunctional::constant(c.clone()));
        let sq = phi("p").mul(&phi("p"));
        assert_eq!(peierls_bracket(&sq, &phi("q"), &k), phi("p").scale(&(int(2) * c)));
    }

    #[test]
    fn oracle_on_weighted_deltas() {
        let m = weighted();
        let k = Kernel::new().with(("p", 0), ("q", 0), int(7)).unwrap();
        let s = delta(&m, "e[p,0]");
        let t = delta(&m, "e[q,0]");
        let r = oracle_report(&s, &t, &k, &m).unwrap();
        assert_eq!(r.symbolic, PolyFunctional::constant(int(7) * ratio(1, 2) * int(3)));
        assert!(r.agrees());
        assert!(r.agrees_with_all_pairs());
        assert!(oracle_check(&s, &s, &k, &m).unwrap());
    }

    #[test]
    fn overlapping_supports_need_the_disjoint_pair_oracle() {
        let m = BaseSpace::uniform(&["p", "q"], 1).unwrap();
        let k = Kernel::new().with(("p", 0), ("q", 0), int(1)).unwrap();
        let s = delta(&m, "e[p,0] # e[q,0]");
        let t = delta(&m, "e[q,0]");
        let r = oracle_report(&s, &t, &k, &m).unwrap();
        // every split of {p,q} puts q on both sides or misses a support
        assert!(r.symbolic.is_zero());
        assert!(r.agrees());
        assert_eq!(r.peierls_all_pairs, phi("q"));
        assert!(!r.agrees_with_all_pairs());
    }

    #[test]
    fn shift_and_finite_difference() {
        let m = weighted();
        let f = phi("p").mul(&phi("p")).mul(&phi("p")).mul(&phi("q")).add(&phi("r").scale(&int(4)));
        let fld = field(&m, &[("p", ratio(2, 3)), ("q", int(-1)), ("r", int(5))]);
        let h = ratio(1, 8);
        assert_eq!(
            f.shift(&var("p"), &h).evaluate(&fld).unwrap(),
            f.evaluate(&fld.shifted(&var("p"), &h).unwrap()).unwrap()
        );
        for v in ["p", "q", "r"] {
            let want = f.partial(&var(v)).evaluate(&fld).unwrap();
            assert_eq!(finite_difference_derivative(&f, &var(v), &fld).unwrap(), want);
        }
    }

    #[test]
    fn render_functional() {
        assert_eq!(PolyFunctional::zero().to_string(), "0");
        assert_eq!(PolyFunctional::constant(ratio(3, 2)).to_string(), "3/2");
        let f = phi("p").mul(&phi("p")).mul(&phi("q")).scale(&int(2)).add(&PolyFunctional::constant(int(1)));
        assert_eq!(f.to_string(), "1 + 2 * phi[p,0]^2 * phi[q,0]");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn oracle_holds(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let base = random_weighted_base(&mut rng, 5, 2);
            let k = random_kernel(&mut rng, &base);
            let s = random_section(&mut rng, &base, 5, 2, 3, 3);
            let t = random_section(&mut rng, &base, 5, 2, 3, 3);
            prop_assert!(oracle_check(&s, &t, &k, &base).unwrap());
        }

        #[test]
        fn oracle_is_plain_peierls_on_disjoint_supports(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let base = random_weighted_base(&mut rng, 5, 2);
            let k = random_kernel(&mut rng, &base);
            let [x, y] = crate::random::random_disjoint_configs(&mut rng, &base, [3, 2]);
            let mut s = Section::zero(5);
            let mut t = Section::zero(5);
            for part in crate::configspace::splits2(&x).into_iter().take(2) {
                s.add(crate::random::random_element(&mut rng, &base, &part.0, 3, 2)).unwrap();
            }
            t.add(crate::random::random_element(&mut rng, &base, &y, 3, 3)).unwrap();
            let r = oracle_report(&s, &t, &k, &base).unwrap();
            prop_assert!(r.agrees() && r.agrees_with_all_pairs());
        }

        #[test]
        fn peierls_leibniz(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let base = random_weighted_base(&mut rng, 4, 2);
            let k = random_kernel(&mut rng, &base);
            let f = random_polynomial(&mut rng, &base, 3, 3);
            let g = random_polynomial(&mut rng, &base, 3, 3);
            let h = random_polynomial(&mut rng, &base, 3, 3);
            prop_assert_eq!(
                peierls_bracket(&f, &g.mul(&h), &k),
                peierls_bracket(&f, &g, &k).mul(&h).add(&g.mul(&peierls_bracket(&f, &h, &k)))
            );
            prop_assert_eq!(peierls_bracket(&f, &g, &k), peierls_bracket(&g, &f, &k).scale(&int(-1)));
        }

        #[test]
        fn finite_differences_match(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let base = random_weighted_base(&mut rng, 3, 2);
            let f = random_polynomial(&mut rng, &base, 4, 4);
            let fld = random_field(&mut rng, &base);
            for p in base.points() {
                for i in 0..base.rank(p).unwrap() {
                    let v = (p.clone(), i);
                    prop_assert_eq!(
                        finite_difference_derivative(&f, &v, &fld).unwrap(),
                        f.partial(&v).evaluate(&fld).unwrap()
                    );
                }
            }
        }

        #[test]
        fn functional_is_linear_and_weighted(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let base = random_weighted_base(&mut rng, 4, 2);
            let s = random_section(&mut rng, &base, 4, 2, 3, 3);
            let t = random_section(&mut rng, &base, 4, 2, 3, 3);
            let fs = to_functional(&s, &base).unwrap();
            let ft = to_functional(&t, &base).unwrap();
            prop_assert_eq!(to_functional(&s.sum(&t), &base).unwrap(), fs.add(&ft));
            let fld = random_field(&mut rng, &base);
            let mut direct = Scalar::zero();
            for (x, e) in s.values() {
                let w = base.density(x).unwrap();
                for (m, c) in e.terms() {
                    let mut v = c * &w;
                    for (p, f) in m.factors() {
                        for (&i, &n) in f.exponents() {
                            v *= num_traits::pow(fld.value(&(p.clone(), i)).unwrap().clone(), n as usize);
                        }
                    }
                    direct += v;
                }
            }
            prop_assert_eq!(fs.evaluate(&fld).unwrap(), direct);
        }
    }
}
