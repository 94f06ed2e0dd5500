//! Ordered tensor words: `T^⊠(V)`, its quotients, and the deconcatenation
//! coproducts of both tensor algebras.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::configspace::{permutation_sign, permutations, shuffles, splits2, BaseSpace, Configuration, PointId, PointSpec};
use crate::error::{Error, Result};
use crate::fibre::{linear_monomials, CauchyMonomial, FibreElement, PointFactor};
use crate::scalar::{self, accumulate, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub point: PointId,
    pub basis: usize,
}

impl Letter {
    pub fn new(point: &str, basis: usize) -> Self {
        Letter { point: PointId::new(point), basis }
    }
}

/// A basis tensor of `T^⊠(V)`: one letter per point, in some order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for l in &letters {
            if !seen.insert(&l.point) {
                return Err(Error::RepeatedPoint(l.point.to_string()));
            }
        }
        Ok(Word(letters))
    }

    pub fn from_pairs(pairs: &[(&str, usize)]) -> Result<Self> {
        Word::new(pairs.iter().map(|&(p, i)| Letter::new(p, i)).collect())
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn configuration(&self) -> Configuration {
        Configuration::from_points(self.0.iter().map(|l| l.point.clone())).expect("distinct points")
    }

    /// The subword of letters over `part`, order inherited.
    pub fn restrict(&self, part: &Configuration) -> Word {
        Word(self.0.iter().filter(|l| part.contains(&l.point)).cloned().collect())
    }

    pub fn concat(&self, other: &Word) -> Option<Word> {
        let mut letters = self.0.clone();
        letters.extend(other.0.iter().cloned());
        Word::new(letters).ok()
    }

    /// `σ·w`: position `m` of the result holds letter `perm[m]` of `w`.
    pub fn permute(&self, perm: &[usize]) -> Word {
        Word(perm.iter().map(|&m| self.0[m].clone()).collect())
    }

    /// Letters sorted by point, with the sign of the sorting permutation.
    pub fn sorted(&self) -> (i64, Word) {
        let sign = permutation_sign(&self.0.iter().map(|l| &l.point).collect::<Vec<_>>());
        let mut letters = self.0.clone();
        letters.sort();
        (sign, Word(letters))
    }

    pub fn check_against(&self, base: &BaseSpace) -> Result<()> {
        self.0.iter().try_for_each(|l| base.check_basis(&l.point, l.basis))
    }
}

impl std::fmt::Debug for Word {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("[")?;
        for (n, l) in self.0.iter().enumerate() {
            if n > 0 {
                f.write_str(" ⊗ ")?;
            }
            write!(f, "{}{}", l.point, l.basis)?;
        }
        f.write_str("]")
    }
}

/// Linear combination of words over one configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorElement {
    config: Configuration,
    terms: BTreeMap<Word, Scalar>,
}

impl TensorElement {
    pub fn zero(config: Configuration) -> Self {
        TensorElement { config, terms: BTreeMap::new() }
    }

    pub fn unit() -> Self {
        TensorElement::from_word(Word::empty(), scalar::one())
    }

    pub fn from_word(w: Word, c: Scalar) -> Self {
        let mut e = TensorElement::zero(w.configuration());
        e.add_term(w, c).expect("own configuration");
        e
    }

    pub fn config(&self) -> &Configuration {
        &self.config
    }

    pub fn terms(&self) -> &BTreeMap<Word, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) -> Result<()> {
        let wc = w.configuration();
        if wc != self.config {
            return Err(Error::ConfigMismatch { left: self.config.clone(), right: wc });
        }
        accumulate(&mut self.terms, w, c);
        Ok(())
    }

    pub fn try_add(&self, other: &TensorElement) -> Result<TensorElement> {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c.clone())?;
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> TensorElement {
        let mut out = TensorElement::zero(self.config.clone());
        for (w, v) in &self.terms {
            accumulate(&mut out.terms, w.clone(), v * c);
        }
        out
    }

    /// `σ·a` with the positional action on every word.
    pub fn permute(&self, perm: &[usize]) -> TensorElement {
        let mut out = TensorElement::zero(self.config.clone());
        for (w, c) in &self.terms {
            accumulate(&mut out.terms, w.permute(perm), c.clone());
        }
        out
    }
}

/// The free `⊠`-algebra product.
pub fn concat(a: &TensorElement, b: &TensorElement) -> Result<TensorElement> {
    let config = a.config.checked_union(&b.config)?;
    let mut out = TensorElement::zero(config);
    for (u, cu) in &a.terms {
        for (v, cv) in &b.terms {
            accumulate(&mut out.terms, u.concat(v).expect("disjoint"), cu * cv);
        }
    }
    Ok(out)
}

fn word_monomial(w: &Word) -> CauchyMonomial {
    CauchyMonomial::from_factors(w.letters().iter().map(|l| (l.point.clone(), PointFactor::generator(l.basis))))
        .expect("distinct points")
}

/// Projection onto `S^⊠(V)`: forget the order of the letters.
pub fn symmetrize(a: &TensorElement) -> FibreElement {
    let mut terms = BTreeMap::new();
    for (w, c) in &a.terms {
        accumulate(&mut terms, word_monomial(w), c.clone());
    }
    FibreElement::from_terms(a.config.clone(), terms).expect("monomials over the configuration")
}

/// Projection onto `Λ^⊠(V)`: sort every word, keeping the sign.
pub fn alternate(a: &TensorElement) -> TensorElement {
    let mut out = TensorElement::zero(a.config.clone());
    for (w, c) in &a.terms {
        let (sign, s) = w.sorted();
        accumulate(&mut out.terms, s, c * scalar::int(sign));
    }
    out
}

/// `Σ_σ σ·a` over all positional permutations.
pub fn symmetric_sum(a: &TensorElement) -> TensorElement {
    let mut out = TensorElement::zero(a.config.clone());
    for perm in permutations(a.config.len()) {
        out = out.try_add(&a.permute(&perm)).expect("same configuration");
    }
    out
}

fn adjacent_transpositions(k: usize) -> Vec<Vec<usize>> {
    (0..k.saturating_sub(1))
        .map(|m| {
            let mut p: Vec<usize> = (0..k).collect();
            p.swap(m, m + 1);
            p
        })
        .collect()
}

/// Whether `σ·a = a` for every permutation of positions.
pub fn is_symmetric(a: &TensorElement) -> bool {
    adjacent_transpositions(a.config.len()).iter().all(|t| &a.permute(t) == a)
}

/// Element of `(T^⊠ ⊠ T^⊠)(V)` over a fixed configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitPairElement {
    config: Configuration,
    terms: BTreeMap<(Word, Word), Scalar>,
}

impl SplitPairElement {
    pub fn zero(config: Configuration) -> Self {
        SplitPairElement { config, terms: BTreeMap::new() }
    }

    pub fn config(&self) -> &Configuration {
        &self.config
    }

    pub fn terms(&self) -> &BTreeMap<(Word, Word), Scalar> {
        &self.terms
    }

    pub fn add_term(&mut self, u: Word, v: Word, c: Scalar) -> Result<()> {
        let uv = u.configuration().checked_union(&v.configuration())?;
        if uv != self.config {
            return Err(Error::ConfigMismatch { left: self.config.clone(), right: uv });
        }
        accumulate(&mut self.terms, (u, v), c);
        Ok(())
    }

    /// Whether each split component is invariant under permuting either slot.
    pub fn is_symmetric_in_each_slot(&self) -> bool {
        let mut by_split: BTreeMap<(Configuration, Configuration), BTreeMap<(Word, Word), Scalar>> = BTreeMap::new();
        for ((u, v), c) in &self.terms {
            by_split
                .entry((u.configuration(), v.configuration()))
                .or_default()
                .insert((u.clone(), v.clone()), c.clone());
        }
        by_split.iter().all(|((x1, x2), part)| {
            let act = |left: bool, t: &[usize]| {
                let mut out = BTreeMap::new();
                for ((u, v), c) in part {
                    let key = if left { (u.permute(t), v.clone()) } else { (u.clone(), v.permute(t)) };
                    accumulate(&mut out, key, c.clone());
                }
                out
            };
            adjacent_transpositions(x1.len()).iter().all(|t| &act(true, t) == part)
                && adjacent_transpositions(x2.len()).iter().all(|t| &act(false, t) == part)
        })
    }
}

fn deconcat_word(w: &Word) -> Vec<(Word, Word)> {
    splits2(&w.configuration()).into_iter().map(|(x1, x2)| (w.restrict(&x1), w.restrict(&x2))).collect()
}

/// `Δ(v) = Σ_{X′⊔X″} v|X′ ⊗ v|X″`.
pub fn deconcat_cauchy(a: &TensorElement) -> SplitPairElement {
    let mut out = SplitPairElement::zero(a.config.clone());
    for (w, c) in &a.terms {
        for (u, v) in deconcat_word(w) {
            accumulate(&mut out.terms, (u, v), c.clone());
        }
    }
    out
}

/// Counit of the Cauchy coproduct: the coefficient of the empty word.
pub fn counit_cauchy(a: &TensorElement) -> Scalar {
    a.terms.get(&Word::empty()).cloned().unwrap_or_else(scalar::zero)
}

pub type Triple<W> = BTreeMap<(W, W, W), Scalar>;

fn coassociativity_sides<W: Ord + Clone>(
    terms: &BTreeMap<W, Scalar>,
    delta: impl Fn(&W) -> Vec<(W, W)>,
) -> (Triple<W>, Triple<W>) {
    let mut left = BTreeMap::new();
    let mut right = BTreeMap::new();
    for (w, c) in terms {
        for (u, v) in delta(w) {
            for (u1, u2) in delta(&u) {
                accumulate(&mut left, (u1, u2, v.clone()), c.clone());
            }
            for (v1, v2) in delta(&v) {
                accumulate(&mut right, (u.clone(), v1, v2), c.clone());
            }
        }
    }
    (left, right)
}

/// `((Δ⊗id)∘Δ)(a)` and `((id⊗Δ)∘Δ)(a)` for the Cauchy coproduct.
pub fn cauchy_coassociativity_sides(a: &TensorElement) -> (Triple<Word>, Triple<Word>) {
    coassociativity_sides(&a.terms, deconcat_word)
}

/// A word of `T^⊗` in the fibre over one configuration; every letter is a
/// monomial over that configuration.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct HadamardWord {
    config: Configuration,
    letters: Vec<CauchyMonomial>,
}

impl HadamardWord {
    pub fn new(config: Configuration, letters: Vec<CauchyMonomial>) -> Result<Self> {
        for l in &letters {
            let lc = l.configuration();
            if lc != config {
                return Err(Error::ConfigMismatch { left: config, right: lc });
            }
        }
        Ok(HadamardWord { config, letters })
    }

    pub fn empty(config: Configuration) -> Self {
        HadamardWord { config, letters: Vec::new() }
    }

    pub fn config(&self) -> &Configuration {
        &self.config
    }

    pub fn letters(&self) -> &[CauchyMonomial] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    fn slice(&self, from: usize, to: usize) -> HadamardWord {
        HadamardWord { config: self.config.clone(), letters: self.letters[from..to].to_vec() }
    }
}

fn deconcat_hadamard_word(w: &HadamardWord) -> Vec<(HadamardWord, HadamardWord)> {
    (0..=w.len()).map(|i| (w.slice(0, i), w.slice(i, w.len()))).collect()
}

/// `Δ(v_1⊗…⊗v_n) = Σ_i (v_1⊗…⊗v_i) ⊗ (v_{i+1}⊗…⊗v_n)`.
pub fn deconcat_hadamard(w: &HadamardWord) -> BTreeMap<(HadamardWord, HadamardWord), Scalar> {
    let mut out = BTreeMap::new();
    for pair in deconcat_hadamard_word(w) {
        accumulate(&mut out, pair, scalar::one());
    }
    out
}

pub fn counit_hadamard(w: &HadamardWord) -> Scalar {
    if w.is_empty() {
        scalar::one()
    } else {
        scalar::zero()
    }
}

pub fn hadamard_coassociativity_sides(
    terms: &BTreeMap<HadamardWord, Scalar>,
) -> (Triple<HadamardWord>, Triple<HadamardWord>) {
    coassociativity_sides(terms, deconcat_hadamard_word)
}

/// Anything living over a single configuration.
pub trait Fibred: Clone + Ord {
    fn configuration(&self) -> Configuration;
}

impl Fibred for Word {
    fn configuration(&self) -> Configuration {
        Word::configuration(self)
    }
}

impl Fibred for CauchyMonomial {
    fn configuration(&self) -> Configuration {
        CauchyMonomial::configuration(self)
    }
}

/// Terms `((a, b), (c, d))`: a pair of pairs of basis elements.
pub type PairOfPairs<T> = BTreeMap<((T, T), (T, T)), Scalar>;

/// The shuffle morphism `(A⊗B)⊠(C⊗D) → (A⊠C)⊗(B⊠D)`, extended linearly.
///
/// Input terms are `((a, b), (c, d))` with `a, b` over `X′` and `c, d` over
/// `X″`; each is sent to `((a, c), (b, d))`.
pub fn shuffle_map<T: Fibred>(t: &PairOfPairs<T>) -> Result<PairOfPairs<T>> {
    let mut out = BTreeMap::new();
    for (((a, b), (c, d)), coeff) in t {
        let x1 = a.configuration();
        let x2 = c.configuration();
        for (l, r) in [(&x1, b.configuration()), (&x2, d.configuration())] {
            if *l != r {
                return Err(Error::ConfigMismatch { left: l.clone(), right: r });
            }
        }
        x1.checked_union(&x2)?;
        accumulate(&mut out, ((a.clone(), c.clone()), (b.clone(), d.clone())), coeff.clone());
    }
    Ok(out)
}

/// All words over `x`: every ordering of its points and every choice of basis letters.
pub fn words_over(base: &BaseSpace, x: &Configuration) -> Result<Vec<Word>> {
    base.check_configuration(x)?;
    let ranks: Vec<usize> = x.iter().map(|p| base.checked_rank(p)).collect::<Result<_>>()?;
    let mut out = Vec::new();
    for perm in permutations(x.len()) {
        let mut idx = vec![0usize; x.len()];
        loop {
            out.push(Word(
                perm.iter().map(|&m| Letter { point: x.members()[m].clone(), basis: idx[m] }).collect(),
            ));
            let Some(m) = (0..idx.len()).find(|&m| idx[m] + 1 < ranks[m]) else {
                break;
            };
            idx[m] += 1;
            idx[..m].iter_mut().for_each(|v| *v = 0);
        }
    }
    Ok(out)
}

fn rank_product(base: &BaseSpace, x: &Configuration) -> Result<u64> {
    x.iter().try_fold(1u64, |acc, p| Ok(acc * base.checked_rank(p)? as u64))
}

/// `dim T^⊠k(V)_X = k!·Π rank`.
pub fn dim_t_fibre(base: &BaseSpace, x: &Configuration) -> Result<u64> {
    Ok(crate::configspace::factorial(x.len()) * rank_product(base, x)?)
}

/// `dim (T^⊠ ⊠ T^⊠)(V)_X = (k+1)·k!·Π rank`.
pub fn dim_tboxt_fibre(base: &BaseSpace, x: &Configuration) -> Result<u64> {
    Ok((x.len() as u64 + 1) * dim_t_fibre(base, x)?)
}

pub fn enumerate_t_fibre(base: &BaseSpace, x: &Configuration) -> Result<u64> {
    Ok(words_over(base, x)?.len() as u64)
}

/// Counts the basis pairs `(u, v)` with `u` over `X′`, `v` over `X″`, for every split.
pub fn enumerate_tboxt_fibre(base: &BaseSpace, x: &Configuration) -> Result<u64> {
    let mut count = 0u64;
    for (x1, x2) in splits2(x) {
        let left = words_over(base, &x1)?;
        let right = words_over(base, &x2)?;
        for _u in &left {
            for _v in &right {
                count += 1;
            }
        }
    }
    Ok(count)
}

/// Basis bijection between an ordered external product `V_{x_1}⊗…⊗V_{x_k}`
/// and `S^⊠k(V)` at the underlying configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExternalComparison {
    pub table: Vec<(Vec<usize>, CauchyMonomial)>,
    pub external_dim: usize,
    pub symmetric_dim: usize,
    pub injective: bool,
    pub surjective: bool,
}

impl ExternalComparison {
    pub fn is_bijection(&self) -> bool {
        self.injective && self.surjective && self.external_dim == self.symmetric_dim
    }
}

/// Index tuples `(i_1, …, i_k)` with `i_m < ranks[m]`, last index fastest.
fn index_tuples(ranks: &[usize]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for &r in ranks {
        out = out.into_iter().flat_map(|t| (0..r).map(move |i| [t.clone(), vec![i]].concat())).collect();
    }
    out
}

pub fn compare_external(base: &BaseSpace, tuple: &[PointId]) -> Result<ExternalComparison> {
    let x = Configuration::from_points(tuple.iter().cloned())?;
    base.check_configuration(&x)?;
    let ranks: Vec<usize> = tuple.iter().map(|p| base.checked_rank(p)).collect::<Result<_>>()?;
    let table: Vec<(Vec<usize>, CauchyMonomial)> = index_tuples(&ranks)
        .into_iter()
        .map(|idx| {
            let m = CauchyMonomial::from_factors(
                tuple.iter().zip(&idx).map(|(p, &i)| (p.clone(), PointFactor::generator(i))),
            )
            .expect("distinct points");
            (idx, m)
        })
        .collect();
    let image: BTreeSet<&CauchyMonomial> = table.iter().map(|(_, m)| m).collect();
    let target: BTreeSet<CauchyMonomial> = linear_monomials(base, &x)?.into_iter().collect();
    Ok(ExternalComparison {
        external_dim: table.len(),
        symmetric_dim: target.len(),
        injective: image.len() == table.len(),
        surjective: target.iter().all(|m| image.contains(m)),
        table,
    })
}

/// The base space carrying `V⊗W`: same points, rank `rank_V·rank_W`,
/// basis index `(i, j)` stored as `i·rank_W + j`.
pub fn hadamard_product_base(v: &BaseSpace, w: &BaseSpace) -> Result<BaseSpace> {
    if v.points() != w.points() {
        return Err(Error::InvalidModel("factors must share their points".into()));
    }
    BaseSpace::new(v.specs().map(|s| {
        let rw = w.rank(&s.id).expect("shared point");
        PointSpec { rank: s.rank * rw, ..s }
    }))
}

/// Basis comparison `S^⊠(V⊗W)_X → S^⊠(V)_X ⊗ S^⊠(W)_X`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidalComparison {
    pub table: Vec<(CauchyMonomial, (CauchyMonomial, CauchyMonomial))>,
    pub source_dim: usize,
    pub target_dim: usize,
    pub injective: bool,
    pub surjective: bool,
}

impl MonoidalComparison {
    pub fn is_bijection(&self) -> bool {
        self.injective && self.surjective && self.source_dim == self.target_dim
    }
}

/// Splits a linear monomial of `S^⊠(V⊗W)` into its `V` and `W` parts.
pub fn split_product_monomial(w: &BaseSpace, m: &CauchyMonomial) -> Result<(CauchyMonomial, CauchyMonomial)> {
    let mut left = Vec::new();
    let mut right = Vec::new();
    for (p, f) in m.factors() {
        let rw = w.checked_rank(p)?;
        let (&idx, _) = f
            .exponents()
            .iter()
            .next()
            .filter(|_| f.degree() == 1)
            .ok_or_else(|| Error::InvalidModel(format!("factor at {p} is not linear")))?;
        left.push((p.clone(), PointFactor::generator(idx / rw)));
        right.push((p.clone(), PointFactor::generator(idx % rw)));
    }
    Ok((CauchyMonomial::from_factors(left)?, CauchyMonomial::from_factors(right)?))
}

pub fn strong_monoidal_bijection(v: &BaseSpace, w: &BaseSpace, x: &Configuration) -> Result<MonoidalComparison> {
    let vw = hadamard_product_base(v, w)?;
    let source = linear_monomials(&vw, x)?;
    let table = source
        .iter()
        .map(|m| Ok((m.clone(), split_product_monomial(w, m)?)))
        .collect::<Result<Vec<_>>>()?;
    let image: BTreeSet<&(CauchyMonomial, CauchyMonomial)> = table.iter().map(|(_, pair)| pair).collect();
    let lv = linear_monomials(v, x)?;
    let lw = linear_monomials(w, x)?;
    let surjective = lv.iter().all(|a| lw.iter().all(|b| image.contains(&(a.clone(), b.clone()))));
    Ok(MonoidalComparison {
        source_dim: source.len(),
        target_dim: lv.len() * lw.len(),
        injective: image.len() == table.len(),
        surjective,
        table,
    })
}

/// Sum over all interleavings of the words of `a` with those of `b`.
pub fn shuffle_product(a: &TensorElement, b: &TensorElement) -> Result<TensorElement> {
    let config = a.config.checked_union(&b.config)?;
    let mut out = TensorElement::zero(config);
    let sh = shuffles(a.config.len(), b.config.len());
    for (u, cu) in &a.terms {
        for (v, cv) in &b.terms {
            let uv = u.concat(v).expect("disjoint");
            for sigma in &sh {
                // letter m of uv lands at position sigma[m]
                let mut slots = vec![None; sigma.len()];
                for (m, &pos) in sigma.iter().enumerate() {
                    slots[pos - 1] = Some(uv.0[m].clone());
                }
                let w = Word(slots.into_iter().map(|l| l.expect("permutation")).collect());
                accumulate(&mut out.terms, w, cu * cv);
            }
        }
    }
    Ok(out)
}

/// `⟨a, b⟩` with words orthonormal.
pub fn pair_words(a: &TensorElement, b: &TensorElement) -> Scalar {
    let mut s = Scalar::zero();
    for (w, c) in &a.terms {
        if let Some(d) = b.terms.get(w) {
            s += c * d;
        }
    }
    s
}

/// `⟨(a, b), P⟩` where `(a, b)` is paired slotwise.
pub fn pair_split(a: &TensorElement, b: &TensorElement, p: &SplitPairElement) -> Scalar {
    let mut s = Scalar::zero();
    for (u, cu) in &a.terms {
        for (v, cv) in &b.terms {
            if let Some(c) = p.terms.get(&(u.clone(), v.clone())) {
                s += cu * cv * c;
            }
        }
    }
    s
}
