//! Exact scalars, subset labels and the Koszul sign engine.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational, always kept in lowest terms.
pub type Rational = num_rational::BigRational;

/// Degrees of the factors of a tensor word, left to right.
pub type DegreeVector = Vec<i64>;

/// Shorthand for the rational `n/d`.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a rational.
pub fn qi(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `(-1)^e` as a rational.
pub fn sign_q(e: i64) -> Rational {
    if e.rem_euclid(2) == 0 {
        Rational::one()
    } else {
        -Rational::one()
    }
}

/// `(-1)^e` as an integer.
pub fn sign_i(e: i64) -> i64 {
    if e.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Parse `a`, `-a`, `a/b`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::invalid(format!("not a rational: {s:?}"));
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(Error::invalid("zero denominator"));
    }
    Ok(Rational::new(n, d))
}

/// Print a rational as `n` or `n/d`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Sign picked up when the word with the given degrees is rearranged.
///
/// `perm[k]` is the old position of the factor that ends up at position `k`.
pub fn koszul_sign(degrees: &[i64], perm: &[usize]) -> Result<i64> {
    if degrees.len() != perm.len() {
        return Err(Error::invalid(format!(
            "permutation of length {} for a word of length {}",
            perm.len(),
            degrees.len()
        )));
    }
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || seen[p] {
            return Err(Error::invalid("not a permutation"));
        }
        seen[p] = true;
    }
    let mut odd = 0i64;
    for a in 0..perm.len() {
        for b in a + 1..perm.len() {
            if perm[a] > perm[b] {
                odd += degrees[perm[a]] * degrees[perm[b]];
            }
        }
    }
    Ok(sign_i(odd))
}

/// Canonical label of a basis monomial `x_S`: the set `S` as a bit mask,
/// bit `i-1` standing for index `i`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, serde::Serialize, serde::Deserialize)]
pub struct SubsetLabel(pub u32);

/// Largest supported dimension.
pub const MAX_DIM: usize = 16;

impl SubsetLabel {
    pub const EMPTY: SubsetLabel = SubsetLabel(0);

    /// Label from 1-based indices, checked against `m`.
    pub fn from_indices(indices: &[usize], m: usize) -> Result<Self> {
        let mut mask = 0u32;
        let mut last = 0usize;
        for &i in indices {
            if i == 0 || i > m {
                return Err(Error::invalid(format!("index {i} outside 1..={m}")));
            }
            if i <= last {
                return Err(Error::invalid("indices must be strictly ascending"));
            }
            last = i;
            mask |= 1 << (i - 1);
        }
        Ok(SubsetLabel(mask))
    }

    /// `{1..m}`.
    pub fn top(m: usize) -> Self {
        SubsetLabel(((1u64 << m) - 1) as u32)
    }

    pub fn single(i: usize) -> Self {
        SubsetLabel(1 << (i - 1))
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        i >= 1 && self.0 >> (i - 1) & 1 == 1
    }

    /// Ascending 1-based indices.
    pub fn indices(self) -> Vec<usize> {
        (0..32).filter(|b| self.0 >> b & 1 == 1).map(|b| b + 1).collect()
    }

    pub fn max_index(self) -> usize {
        32 - self.0.leading_zeros() as usize
    }

    pub fn union(self, other: Self) -> Self {
        SubsetLabel(self.0 | other.0)
    }

    pub fn minus(self, other: Self) -> Self {
        SubsetLabel(self.0 & !other.0)
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Complement inside `{1..m}`.
    pub fn complement(self, m: usize) -> Self {
        SubsetLabel(Self::top(m).0 & !self.0)
    }

    /// Number of elements of `self` strictly greater than `i`.
    pub fn count_above(self, i: usize) -> usize {
        (self.0 >> i).count_ones() as usize
    }

    /// Number of elements of `self` strictly smaller than `i`.
    pub fn count_below(self, i: usize) -> usize {
        (self.0 & ((1u32 << (i - 1)) - 1)).count_ones() as usize
    }

    /// All labels inside `{1..m}`, indexed by mask.
    pub fn all(m: usize) -> impl Iterator<Item = SubsetLabel> + Clone {
        (0..1u32 << m).map(SubsetLabel)
    }

    /// All subsets of `self`.
    pub fn subsets(self) -> Vec<SubsetLabel> {
        let mut out = Vec::with_capacity(1 << self.len());
        let mut sub = self.0;
        loop {
            out.push(SubsetLabel(sub));
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & self.0;
        }
        out.reverse();
        out
    }
}

impl fmt::Debug for SubsetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.indices().iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for SubsetLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Cardinality first, then lexicographic on the ascending index lists.
pub fn compare_subsets(s: SubsetLabel, t: SubsetLabel) -> Ordering {
    s.len().cmp(&t.len()).then_with(|| s.indices().cmp(&t.indices()))
}

impl PartialOrd for SubsetLabel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for SubsetLabel {
    fn cmp(&self, other: &Self) -> Ordering {
        if self.0 == other.0 {
            return Ordering::Equal;
        }
        match self.len().cmp(&other.len()) {
            Ordering::Equal => {}
            o => return o,
        }
        // The lowest differing bit decides the lexicographic comparison.
        let low = (self.0 ^ other.0).trailing_zeros();
        if self.0 >> low & 1 == 1 {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

/// Sign of `x_S ∧ x_T = sign · x_{S∪T}` for odd generators, or 0 if they overlap.
#[inline]
pub fn wedge_sign(s: SubsetLabel, t: SubsetLabel) -> i64 {
    if s.0 & t.0 != 0 {
        return 0;
    }
    let mut inversions = 0u32;
    let mut rest = t.0;
    while rest != 0 {
        let b = rest.trailing_zeros();
        inversions += (s.0 >> (b + 1)).count_ones();
        rest &= rest - 1;
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// `x_S ∧ x_T`, or `None` when `S ∩ T ≠ ∅`.
pub fn subset_wedge(s: SubsetLabel, t: SubsetLabel, m: usize) -> Result<Option<(SubsetLabel, i64)>> {
    if s.max_index() > m || t.max_index() > m {
        return Err(Error::invalid(format!("label outside 1..={m}")));
    }
    let sign = wedge_sign(s, t);
    Ok(if sign == 0 { None } else { Some((s.union(t), sign)) })
}

/// Sign of the permutation sorting `seq` ascending, or 0 on a repeated entry.
pub fn sort_sign(seq: &[usize]) -> i64 {
    let mut sign = 1;
    for a in 0..seq.len() {
        for b in a + 1..seq.len() {
            match seq[a].cmp(&seq[b]) {
                Ordering::Greater => sign = -sign,
                Ordering::Equal => return 0,
                Ordering::Less => {}
            }
        }
    }
    sign
}

pub(crate) fn is_neg(r: &Rational) -> bool {
    r.is_negative()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn koszul_examples() {
        assert_eq!(koszul_sign(&[-1, -1], &[1, 0]).unwrap(), -1);
        assert_eq!(koszul_sign(&[-1, -2], &[1, 0]).unwrap(), 1);
        assert_eq!(koszul_sign(&[3, 5, -1], &[0, 1, 2]).unwrap(), 1);
        assert!(koszul_sign(&[1], &[0, 1]).is_err());
        assert!(koszul_sign(&[1, 1], &[0, 0]).is_err());
    }

    #[test]
    fn wedge_examples() {
        let l = |v: &[usize]| SubsetLabel::from_indices(v, 4).unwrap();
        assert_eq!(subset_wedge(l(&[1]), l(&[2]), 4).unwrap(), Some((l(&[1, 2]), 1)));
        assert_eq!(subset_wedge(l(&[2]), l(&[1]), 4).unwrap(), Some((l(&[1, 2]), -1)));
        assert_eq!(subset_wedge(l(&[1]), l(&[1]), 4).unwrap(), None);
        assert!(subset_wedge(l(&[4]), l(&[1]), 3).is_err());
    }

    #[test]
    fn ordering_examples() {
        let l = |v: &[usize]| SubsetLabel::from_indices(v, 3).unwrap();
        assert_eq!(compare_subsets(l(&[3]), l(&[1, 2])), Ordering::Less);
        assert_eq!(compare_subsets(l(&[1, 3]), l(&[2, 3])), Ordering::Less);
        assert_eq!(compare_subsets(l(&[2]), l(&[2])), Ordering::Equal);
    }

    #[test]
    fn fast_order_matches_definition() {
        for a in SubsetLabel::all(5) {
            for b in SubsetLabel::all(5) {
                assert_eq!(a.cmp(&b), compare_subsets(a, b));
            }
        }
    }

    #[test]
    fn labels_reject_bad_input() {
        assert!(SubsetLabel::from_indices(&[2, 1], 3).is_err());
        assert!(SubsetLabel::from_indices(&[0], 3).is_err());
        assert!(SubsetLabel::from_indices(&[4], 3).is_err());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("-3/6").unwrap(), q(-1, 2));
        assert_eq!(parse_rational("7").unwrap(), qi(7));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
        assert_eq!(fmt_rational(&q(4, -6)), "-2/3");
    }
}
