//! Exact rational scalars.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Coefficients of every element in the crate. Always kept in lowest terms
/// with a positive denominator by `num_rational`.
pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    Scalar::from_integer(BigInt::from(n))
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    Scalar::new(BigInt::from(num), BigInt::from(den))
}

pub fn zero() -> Scalar {
    Scalar::zero()
}

pub fn one() -> Scalar {
    Scalar::one()
}

/// Canonical text form: `n` for integers, `n/d` otherwise, leading `-` for negatives.
pub fn render(s: &Scalar) -> String {
    if s.is_integer() {
        s.numer().to_string()
    } else {
        format!("{}/{}", s.numer(), s.denom())
    }
}

/// Parses `"-2/3"`, `"5"` and similar; rejects a zero denominator.
pub fn parse(text: &str) -> Option<Scalar> {
    let text = text.trim();
    let (num, den) = match text.split_once('/') {
        Some((n, d)) => (n.trim(), Some(d.trim())),
        None => (text, None),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = match den {
        Some(d) => d.parse().ok()?,
        None => BigInt::one(),
    };
    if den.is_zero() {
        return None;
    }
    Some(Scalar::new(num, den))
}

pub fn is_positive(s: &Scalar) -> bool {
    s.is_positive()
}

/// Adds `c` to the coefficient of `key`, removing the entry if it cancels.
pub(crate) fn accumulate<K: Ord>(terms: &mut std::collections::BTreeMap<K, Scalar>, key: K, c: Scalar) {
    use std::collections::btree_map::Entry;
    if c.is_zero() {
        return;
    }
    match terms.entry(key) {
        Entry::Vacant(v) => {
            v.insert(c);
        }
        Entry::Occupied(mut o) => {
            *o.get_mut() += c;
            if o.get().is_zero() {
                o.remove();
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms() {
        let s = ratio(4, -6);
        assert_eq!(s.numer(), &BigInt::from(-2));
        assert_eq!(s.denom(), &BigInt::from(3));
        assert_eq!(render(&s), "-2/3");
    }

    #[test]
    fn parse_and_render() {
        assert_eq!(parse("2/3"), Some(ratio(2, 3)));
        assert_eq!(parse("-7"), Some(int(-7)));
        assert_eq!(parse("6/4").map(|s| render(&s)), Some("3/2".into()));
        assert_eq!(parse("1/0"), None);
        assert_eq!(parse("x"), None);
    }
}
