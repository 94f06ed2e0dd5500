//! Finite model of the base space `M` and of its unordered configuration space.
//!
//! A [`BaseSpace`] is a finite set of labelled points, each carrying the rank of
//! the fibre of `V` and a positive density weight. A [`Configuration`] is a
//! finite set of distinct points, stored as a strictly increasing sequence so
//! that equality, ordering and hashing are structural. The empty configuration
//! is the vacuum.
//!
//! Every product and coproduct in the crate is indexed by the ordered splits of
//! a configuration, enumerated here in a fixed order (subset bitmask, ascending).

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

/// A point of the base space, ordered lexicographically by label.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointId(Arc<str>);

impl PointId {
    pub fn new(label: &str) -> Self {
        PointId(Arc::from(label))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::borrow::Borrow<str> for PointId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl From<&str> for PointId {
    fn from(label: &str) -> Self {
        PointId::new(label)
    }
}

/// Labels must be usable inside element expressions.
pub fn is_valid_label(label: &str) -> bool {
    let mut chars = label.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PointSpec {
    pub id: PointId,
    pub rank: usize,
    pub weight: Scalar,
}

impl PointSpec {
    pub fn new(label: &str, rank: usize, weight: Scalar) -> Self {
        PointSpec {
            id: PointId::new(label),
            rank,
            weight,
        }
    }
}

/// The finite model of `M`: points with fibre ranks and basis density weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseSpace {
    points: Vec<PointId>,
    rank: BTreeMap<PointId, usize>,
    weight: BTreeMap<PointId, Scalar>,
}

impl BaseSpace {
    pub fn new(specs: impl IntoIterator<Item = PointSpec>) -> Result<Self> {
        let mut rank = BTreeMap::new();
        let mut weight = BTreeMap::new();
        for spec in specs {
            if !is_valid_label(spec.id.as_str()) {
                return Err(Error::InvalidLabel(spec.id.to_string()));
            }
            if rank.contains_key(&spec.id) {
                return Err(Error::DuplicatePoint(spec.id.to_string()));
            }
            if spec.rank == 0 {
                return Err(Error::ZeroRank(spec.id.to_string()));
            }
            if !scalar::is_positive(&spec.weight) {
                return Err(Error::NonPositiveWeight(spec.id.to_string()));
            }
            rank.insert(spec.id.clone(), spec.rank);
            weight.insert(spec.id, spec.weight);
        }
        let points = rank.keys().cloned().collect();
        Ok(BaseSpace {
            points,
            rank,
            weight,
        })
    }

    /// Points with the given labels, all of rank `rank` and weight 1.
    pub fn uniform(labels: &[&str], rank: usize) -> Result<Self> {
        BaseSpace::new(
            labels
                .iter()
                .map(|l| PointSpec::new(l, rank, scalar::one())),
        )
    }

    /// Points in canonical order.
    pub fn points(&self) -> &[PointId] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn point(&self, label: &str) -> Option<&PointId> {
        self.rank.get_key_value(label).map(|(k, _)| k)
    }

    pub fn rank(&self, p: &PointId) -> Option<usize> {
        self.rank.get(p).copied()
    }

    pub fn weight(&self, p: &PointId) -> Option<&Scalar> {
        self.weight.get(p)
    }

    pub fn specs(&self) -> impl Iterator<Item = PointSpec> + '_ {
        self.points.iter().map(|p| PointSpec {
            id: p.clone(),
            rank: self.rank[p],
            weight: self.weight[p].clone(),
        })
    }

    /// Rank of `p`, or `UnknownPoint`.
    pub fn checked_rank(&self, p: &PointId) -> Result<usize> {
        self.rank(p)
            .ok_or_else(|| Error::UnknownPoint(p.to_string()))
    }

    pub fn check_basis(&self, p: &PointId, index: usize) -> Result<()> {
        let rank = self.checked_rank(p)?;
        if index >= rank {
            return Err(Error::BasisOutOfRange {
                point: p.to_string(),
                index,
                rank,
            });
        }
        Ok(())
    }

    pub fn check_configuration(&self, x: &Configuration) -> Result<()> {
        for p in x.iter() {
            self.checked_rank(p)?;
        }
        Ok(())
    }

    /// Product of the weights over a configuration (the basis density of `Dens` at `x`).
    pub fn density(&self, x: &Configuration) -> Result<Scalar> {
        let mut w = scalar::one();
        for p in x.iter() {
            w *= self
                .weight(p)
                .ok_or_else(|| Error::UnknownPoint(p.to_string()))?;
        }
        Ok(w)
    }

    /// All `k`-point configurations, in lexicographic order.
    pub fn configurations(&self, k: usize) -> Vec<Configuration> {
        let mut out = Vec::new();
        let mut chosen = Vec::with_capacity(k);
        fn rec(
            pts: &[PointId],
            start: usize,
            k: usize,
            chosen: &mut Vec<PointId>,
            out: &mut Vec<Configuration>,
        ) {
            if chosen.len() == k {
                out.push(Configuration(chosen.clone()));
                return;
            }
            for i in start..pts.len() {
                chosen.push(pts[i].clone());
                rec(pts, i + 1, k, chosen, out);
                chosen.pop();
            }
        }
        rec(&self.points, 0, k, &mut chosen, &mut out);
        out
    }

    /// All configurations with at most `max` points, by size then lexicographically.
    pub fn configurations_up_to(&self, max: usize) -> Vec<Configuration> {
        (0..=max.min(self.len()))
            .flat_map(|k| self.configurations(k))
            .collect()
    }
}

/// A point of `UConf(M)`: a strictly increasing sequence of distinct points.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration(Vec<PointId>);

impl Configuration {
    /// The vacuum.
    pub fn empty() -> Self {
        Configuration(Vec::new())
    }

    pub fn singleton(p: PointId) -> Self {
        Configuration(vec![p])
    }

    /// Builds a configuration from points in any order; repeated points are an error.
    pub fn from_points(points: impl IntoIterator<Item = PointId>) -> Result<Self> {
        let mut v: Vec<PointId> = points.into_iter().collect();
        v.sort();
        for w in v.windows(2) {
            if w[0] == w[1] {
                return Err(Error::RepeatedPoint(w[0].to_string()));
            }
        }
        Ok(Configuration(v))
    }

    pub fn from_labels(labels: &[&str]) -> Result<Self> {
        Configuration::from_points(labels.iter().map(|l| PointId::new(l)))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn members(&self) -> &[PointId] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, PointId> {
        self.0.iter()
    }

    pub fn contains(&self, p: &PointId) -> bool {
        self.0.binary_search(p).is_ok()
    }

    pub fn is_disjoint(&self, other: &Configuration) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => return false,
            }
        }
        true
    }

    /// `self ⊔ other`, or `None` when the two share a point.
    pub fn disjoint_union(&self, other: &Configuration) -> Option<Configuration> {
        if !self.is_disjoint(other) {
            return None;
        }
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend(self.0.iter().cloned());
        v.extend(other.0.iter().cloned());
        v.sort();
        Some(Configuration(v))
    }

    /// Like [`Configuration::disjoint_union`] but reporting the overlap as an error.
    pub fn checked_union(&self, other: &Configuration) -> Result<Configuration> {
        self.disjoint_union(other)
            .ok_or_else(|| Error::OverlappingConfigurations {
                left: self.clone(),
                right: other.clone(),
            })
    }

    pub fn is_subset(&self, other: &Configuration) -> bool {
        self.iter().all(|p| other.contains(p))
    }

    /// Members whose bit is set in `mask` (bit `i` is the `i`-th member).
    pub fn select(&self, mask: u64) -> Configuration {
        Configuration(
            self.0
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, p)| p.clone())
                .collect(),
        )
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, p) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str(p.as_str())?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// All `2^|x|` ordered splits `(x', x'')` with `x' ⊔ x'' = x`, ordered by the
/// bitmask selecting `x'`.
pub fn splits2(x: &Configuration) -> Vec<(Configuration, Configuration)> {
    let n = x.len();
    assert!(n < 64, "configuration too large to enumerate splits");
    let full = if n == 0 { 0 } else { (1u64 << n) - 1 };
    (0..1u64 << n)
        .map(|mask| (x.select(mask), x.select(full & !mask)))
        .collect()
}

/// All `3^|x|` ordered triples with disjoint union `x`. Member `i` goes to the
/// part given by the `i`-th base-3 digit of the counter.
pub fn splits3(x: &Configuration) -> Vec<(Configuration, Configuration, Configuration)> {
    let n = x.len();
    let total = 3usize.pow(n as u32);
    (0..total)
        .map(|mut code| {
            let mut parts: [Vec<PointId>; 3] = Default::default();
            for p in x.iter() {
                parts[code % 3].push(p.clone());
                code /= 3;
            }
            let [a, b, c] = parts;
            (Configuration(a), Configuration(b), Configuration(c))
        })
        .collect()
}

/// The `(i, j)`-shuffles of `{1..i+j}` in one-line notation, lexicographically ordered.
pub fn shuffles(i: usize, j: usize) -> Vec<Vec<usize>> {
    let n = i + j;
    let mut out = Vec::new();
    let mut head = Vec::with_capacity(i);
    fn rec(n: usize, i: usize, start: usize, head: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if head.len() == i {
            let mut perm = head.clone();
            perm.extend((1..=n).filter(|v| !head.contains(v)));
            out.push(perm);
            return;
        }
        for v in start..=n {
            head.push(v);
            rec(n, i, v + 1, head, out);
            head.pop();
        }
    }
    rec(n, i, 1, &mut head, &mut out);
    out
}

pub fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for t in 0..k as u64 {
        acc = acc * (n as u64 - t) / (t + 1);
    }
    acc
}

/// Sign of a permutation given in one-line notation over any totally ordered values.
pub fn permutation_sign<T: Ord>(seq: &[T]) -> i64 {
    let mut inversions = 0usize;
    for a in 0..seq.len() {
        for b in a + 1..seq.len() {
            if seq[a] > seq[b] {
                inversions += 1;
            }
        }
    }
    if inversions.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            break;
        };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}
