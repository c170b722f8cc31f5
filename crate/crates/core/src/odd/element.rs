//! Elements of the odd symmetric algebras `S(V[1])` and `S(V*[-1])`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graded::{fmt_rational, is_neg, sign_q, wedge_sign, Rational, SubsetLabel, MAX_DIM};

/// Which of the two exterior algebras an element lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    /// `S(V[1])`, generators `x_i` of degree −1.
    V,
    /// `S(V*[-1])`, generators `y_i` of degree +1.
    Dual,
}

impl Side {
    pub fn generator_degree(self) -> i64 {
        match self {
            Side::V => -1,
            Side::Dual => 1,
        }
    }

    pub fn letter(self) -> char {
        match self {
            Side::V => 'x',
            Side::Dual => 'y',
        }
    }
}

/// A finite combination of basis monomials `x_S` (or `y_S`).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ExtElement {
    side: Side,
    m: usize,
    terms: BTreeMap<SubsetLabel, Rational>,
}

impl ExtElement {
    pub fn zero(side: Side, m: usize) -> Self {
        assert!(m <= MAX_DIM, "dimension {m} exceeds {MAX_DIM}");
        ExtElement { side, m, terms: BTreeMap::new() }
    }

    pub fn one(side: Side, m: usize) -> Self {
        Self::basis(side, m, SubsetLabel::EMPTY)
    }

    pub fn basis(side: Side, m: usize, label: SubsetLabel) -> Self {
        Self::term(side, m, label, Rational::one())
    }

    pub fn term(side: Side, m: usize, label: SubsetLabel, c: Rational) -> Self {
        let mut e = Self::zero(side, m);
        e.add_term(label, c);
        e
    }

    /// The generator `x_i` or `y_i`.
    pub fn generator(side: Side, m: usize, i: usize) -> Self {
        Self::basis(side, m, SubsetLabel::single(i))
    }

    /// The product `g_{i1} ∧ ... ∧ g_{ik}` in the given (not necessarily sorted) order.
    pub fn monomial(side: Side, m: usize, indices: &[usize]) -> Self {
        let mut acc = Self::one(side, m);
        for &i in indices {
            acc = acc.wedge_unchecked(&Self::generator(side, m, i));
        }
        acc
    }

    pub fn from_terms(side: Side, m: usize, terms: impl IntoIterator<Item = (SubsetLabel, Rational)>) -> Result<Self> {
        if m > MAX_DIM {
            return Err(Error::invalid(format!("dimension {m} exceeds {MAX_DIM}")));
        }
        let mut e = Self::zero(side, m);
        for (l, c) in terms {
            if l.max_index() > m {
                return Err(Error::invalid(format!("label {l} outside 1..={m}")));
            }
            e.add_term(l, c);
        }
        Ok(e)
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SubsetLabel, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, label: SubsetLabel) -> Rational {
        self.terms.get(&label).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, label: SubsetLabel, c: Rational) {
        if c.is_zero() {
            return;
        }
        debug_assert!(label.max_index() <= self.m);
        match self.terms.get_mut(&label) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&label);
                }
            }
            None => {
                self.terms.insert(label, c);
            }
        }
    }

    /// Degree of the basis monomial with this label.
    pub fn label_degree(&self, label: SubsetLabel) -> i64 {
        self.side.generator_degree() * label.len() as i64
    }

    /// The common degree of all terms, if homogeneous and nonzero.
    pub fn degree(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|l| l.len());
        let first = it.next()?;
        if it.all(|k| k == first) {
            Some(self.side.generator_degree() * first as i64)
        } else {
            None
        }
    }

    /// Projection onto the part built from `k` generators.
    pub fn project(&self, k: usize) -> Self {
        self.filter(|l| l.len() == k)
    }

    pub fn filter(&self, keep: impl Fn(SubsetLabel) -> bool) -> Self {
        ExtElement {
            side: self.side,
            m: self.m,
            terms: self.terms.iter().filter(|(l, _)| keep(**l)).map(|(l, c)| (*l, c.clone())).collect(),
        }
    }

    /// Multiply the `k`-generator part by `(-1)^k`.
    pub fn grade_involution(&self) -> Self {
        self.map_coeffs(|l, c| c * sign_q(l.len() as i64))
    }

    pub fn map_coeffs(&self, f: impl Fn(SubsetLabel, &Rational) -> Rational) -> Self {
        let mut out = Self::zero(self.side, self.m);
        for (l, c) in &self.terms {
            out.add_term(*l, f(*l, c));
        }
        out
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.side != other.side {
            return Err(Error::invalid("elements live on different sides"));
        }
        if self.m != other.m {
            return Err(Error::invalid(format!("dimension mismatch {} vs {}", self.m, other.m)));
        }
        Ok(())
    }

    /// Graded-commutative product with Koszul signs.
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Ok(self.wedge_unchecked(other))
    }

    pub(crate) fn wedge_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.side, self.m);
        for (a, ca) in &self.terms {
            for (b, cb) in &other.terms {
                let s = wedge_sign(*a, *b);
                if s == 0 {
                    continue;
                }
                let c = ca * cb;
                out.add_term(a.union(*b), if s > 0 { c } else { -c });
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.side, self.m);
        }
        self.map_coeffs(|_, x| x * c)
    }

    /// Inverse of an element with nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.coeff(SubsetLabel::EMPTY);
        if c0.is_zero() {
            return Err(Error::invalid("element has no constant term"));
        }
        let inv0 = c0.recip();
        // self = c0 (1 + n) with n nilpotent.
        let n = self.scale(&inv0) - Self::one(self.side, self.m);
        let mut acc = Self::one(self.side, self.m);
        let mut power = Self::one(self.side, self.m);
        for k in 1..=self.m {
            power = power.wedge_unchecked(&n);
            if power.is_zero() {
                break;
            }
            acc = if k % 2 == 1 { acc - power.clone() } else { acc + power.clone() };
        }
        Ok(acc.scale(&inv0))
    }
}

impl Add for ExtElement {
    type Output = ExtElement;
    fn add(mut self, rhs: ExtElement) -> ExtElement {
        assert!(self.side == rhs.side && self.m == rhs.m, "adding incompatible elements");
        for (l, c) in rhs.terms {
            self.add_term(l, c);
        }
        self
    }
}

impl Sub for ExtElement {
    type Output = ExtElement;
    fn sub(self, rhs: ExtElement) -> ExtElement {
        self + (-rhs)
    }
}

impl Neg for ExtElement {
    type Output = ExtElement;
    fn neg(mut self) -> ExtElement {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Mul<&ExtElement> for &ExtElement {
    type Output = ExtElement;
    /// Wedge product; panics on incompatible operands.
    fn mul(self, rhs: &ExtElement) -> ExtElement {
        self.wedge(rhs).expect("wedge of incompatible elements")
    }
}

impl fmt::Display for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (l, c)) in self.terms.iter().enumerate() {
            let neg = is_neg(c);
            let abs = if neg { -c.clone() } else { c.clone() };
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let letter = self.side.letter();
            if l.is_empty() {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{letter}{l}")?;
            } else {
                write!(f, "{}*{letter}{l}", fmt_rational(&abs))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ExtElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::{q, qi};

    fn x(m: usize, i: usize) -> ExtElement {
        ExtElement::generator(Side::V, m, i)
    }

    #[test]
    fn wedge_examples() {
        let l12 = SubsetLabel::from_indices(&[1, 2], 2).unwrap();
        assert_eq!(&x(2, 1) * &x(2, 2), ExtElement::basis(Side::V, 2, l12));
        assert_eq!(&x(2, 2) * &x(2, 1), -ExtElement::basis(Side::V, 2, l12));
        let z = x(2, 1).scale(&q(3, 2)) + x(2, 2);
        assert_eq!(&ExtElement::one(Side::V, 2) * &z, z);
        assert!(x(2, 1).wedge(&ExtElement::generator(Side::Dual, 2, 1)).is_err());
        assert!(x(2, 1).wedge(&x(3, 1)).is_err());
    }

    #[test]
    fn inverse_of_unit() {
        let a = ExtElement::one(Side::V, 3).scale(&qi(2)) + x(3, 1) + &x(3, 2) * &x(3, 3);
        let inv = a.inverse().unwrap();
        assert_eq!(&a * &inv, ExtElement::one(Side::V, 3));
    }

    #[test]
    fn display() {
        let e = x(3, 2).scale(&qi(-1)) + (&x(3, 1) * &x(3, 3)).scale(&q(3, 2));
        assert_eq!(e.to_string(), "-x{2} + 3/2*x{1,3}");
    }
}
