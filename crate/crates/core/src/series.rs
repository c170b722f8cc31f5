//! Truncated power series in one variable with exact coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graded::{fmt_rational, is_neg, q, qi, Rational};

/// `c_0 + c_1 z + … + c_N z^N`, arithmetic taken mod `z^{N+1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FormalSeries {
    coeffs: Vec<Rational>,
}

impl FormalSeries {
    pub fn zero(order: usize) -> Self {
        FormalSeries { coeffs: vec![Rational::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        Self::constant(order, Rational::one())
    }

    pub fn constant(order: usize, c: Rational) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c;
        s
    }

    /// The series `z`.
    pub fn var(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.coeffs[1] = Rational::one();
        }
        s
    }

    /// Coefficients beyond `order` are dropped, missing ones are zero.
    pub fn from_coeffs(order: usize, coeffs: impl IntoIterator<Item = Rational>) -> Self {
        let mut s = Self::zero(order);
        for (k, c) in coeffs.into_iter().take(order + 1).enumerate() {
            s.coeffs[k] = c;
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> Rational {
        self.coeffs.get(k).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Same series at another truncation order.
    pub fn truncate(&self, order: usize) -> Self {
        Self::from_coeffs(order, self.coeffs.iter().cloned())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        FormalSeries { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    fn check_order(&self, other: &Self) {
        assert_eq!(self.order(), other.order(), "series of different truncation orders");
    }

    /// `f(z) ↦ f(−z)`.
    pub fn negate_var(&self) -> Self {
        FormalSeries {
            coeffs: self.coeffs.iter().enumerate().map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() }).collect(),
        }
    }

    /// `f(z) ↦ f(cz)`.
    pub fn rescale_var(&self, c: &Rational) -> Self {
        let mut p = Rational::one();
        let mut out = Self::zero(self.order());
        for (k, a) in self.coeffs.iter().enumerate() {
            out.coeffs[k] = a * &p;
            p *= c;
        }
        out
    }

    /// Multiplicative inverse; needs `c_0 ≠ 0`. Long division.
    pub fn reciprocal(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if c0.is_zero() {
            return Err(Error::invalid("reciprocal of a series with zero constant term"));
        }
        let n = self.order();
        let mut out = Self::zero(n);
        let inv0 = c0.recip();
        for k in 0..=n {
            let mut acc = if k == 0 { Rational::one() } else { Rational::zero() };
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    acc -= &self.coeffs[j] * &out.coeffs[k - j];
                }
            }
            out.coeffs[k] = acc * &inv0;
        }
        Ok(out)
    }

    /// `self / other`.
    pub fn divide(&self, other: &Self) -> Result<Self> {
        Ok(self * &other.reciprocal()?)
    }

    /// `self ∘ g` for `g(0) = 0`, by Horner's rule.
    pub fn compose(&self, g: &Self) -> Result<Self> {
        self.check_order(g);
        if !g.coeffs[0].is_zero() {
            return Err(Error::invalid("composition needs an inner series without constant term"));
        }
        let mut acc = Self::zero(self.order());
        for c in self.coeffs.iter().rev() {
            acc = &acc * g;
            acc.coeffs[0] += c;
        }
        Ok(acc)
    }

    /// `exp(self)` for `c_0 = 0`.
    pub fn exp(&self) -> Result<Self> {
        Self::exponential(self.order()).compose(self)
    }

    /// `log(self)` for `c_0 = 1`.
    pub fn log(&self) -> Result<Self> {
        if !self.coeffs[0].is_one() {
            return Err(Error::invalid("log needs constant term 1"));
        }
        let n = self.order();
        let mut u = self.clone();
        u.coeffs[0] = Rational::zero();
        // log(1+u) = Σ (−1)^{k+1} u^k / k
        let lg = Self::from_coeffs(n, (0..=n).map(|k| if k == 0 { Rational::zero() } else if k % 2 == 1 { q(1, k as i64) } else { q(-1, k as i64) }));
        lg.compose(&u)
    }

    /// `self^e` for `c_0 = 1` and any rational exponent, via `exp(e·log)`.
    pub fn pow_rational(&self, e: &Rational) -> Result<Self> {
        self.log()?.scale(e).exp()
    }

    /// The square root with constant term 1.
    pub fn sqrt(&self) -> Result<Self> {
        self.pow_rational(&q(1, 2))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.order());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// `e^z`.
    pub fn exponential(order: usize) -> Self {
        let mut c = Rational::one();
        let mut coeffs = Vec::with_capacity(order + 1);
        for k in 0..=order {
            if k > 0 {
                c /= qi(k as i64);
            }
            coeffs.push(c.clone());
        }
        FormalSeries { coeffs }
    }

    /// `e^{cz}`.
    pub fn exp_linear(order: usize, c: &Rational) -> Self {
        Self::exponential(order).rescale_var(c)
    }
}

impl Add<&FormalSeries> for &FormalSeries {
    type Output = FormalSeries;
    fn add(self, rhs: &FormalSeries) -> FormalSeries {
        self.check_order(rhs);
        FormalSeries { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl Sub<&FormalSeries> for &FormalSeries {
    type Output = FormalSeries;
    fn sub(self, rhs: &FormalSeries) -> FormalSeries {
        self.check_order(rhs);
        FormalSeries { coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl Mul<&FormalSeries> for &FormalSeries {
    type Output = FormalSeries;
    fn mul(self, rhs: &FormalSeries) -> FormalSeries {
        self.check_order(rhs);
        let n = self.order();
        let mut out = FormalSeries::zero(n);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs[..=n - i].iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[i + j] += a * b;
                }
            }
        }
        out
    }
}

impl Neg for &FormalSeries {
    type Output = FormalSeries;
    fn neg(self) -> FormalSeries {
        FormalSeries { coeffs: self.coeffs.iter().map(|a| -a.clone()).collect() }
    }
}

impl fmt::Display for FormalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = is_neg(c);
            let abs = if neg { -c.clone() } else { c.clone() };
            match (first, neg) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            match k {
                0 => write!(f, "{}", fmt_rational(&abs))?,
                _ => {
                    if !abs.is_one() {
                        write!(f, "{}*", fmt_rational(&abs))?;
                    }
                    if k == 1 {
                        write!(f, "z")?
                    } else {
                        write!(f, "z^{k}")?
                    }
                }
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(z^{})", self.order() + 1)
    }
}

impl fmt::Debug for FormalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The named series used by the Todd and Duflo constructions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeriesName {
    /// `z / (1 − e^{−z})`
    Todd,
    /// `(1 − e^{−z}) / z`
    InvTodd,
    /// `z / (e^z − 1)`
    DufloDen,
}

impl FromStr for SeriesName {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "todd" => Ok(SeriesName::Todd),
            "inv_todd" | "inv-todd" => Ok(SeriesName::InvTodd),
            "duflo_den" | "duflo-den" => Ok(SeriesName::DufloDen),
            _ => Err(Error::invalid(format!("unknown series {s:?}"))),
        }
    }
}

/// Bernoulli numbers `B_0..B_n` with `B_1 = −1/2`, from
/// `Σ_{k<n+1} C(n+1,k) B_k = 0`.
pub fn bernoulli(n: usize) -> Vec<Rational> {
    let mut b: Vec<Rational> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        if k == 0 {
            b.push(Rational::one());
            continue;
        }
        let mut acc = Rational::zero();
        let mut binom = BigInt::one();
        for (j, bj) in b.iter().enumerate() {
            acc += Rational::from_integer(binom.clone()) * bj;
            binom = binom * BigInt::from(k + 1 - j) / BigInt::from(j + 1);
        }
        b.push(-acc / qi(k as i64 + 1));
    }
    b
}

/// The named series through `z^order`. `z/(e^z−1) = Σ B_k z^k/k!` and the
/// Todd series is its reflection `z ↦ −z`.
pub fn series(name: SeriesName, order: usize) -> FormalSeries {
    let b = bernoulli(order);
    let mut fact = Rational::one();
    let mut coeffs = Vec::with_capacity(order + 1);
    for (k, bk) in b.into_iter().enumerate() {
        if k > 0 {
            fact *= qi(k as i64);
        }
        coeffs.push(bk / &fact);
    }
    let duflo = FormalSeries::from_coeffs(order, coeffs);
    match name {
        SeriesName::DufloDen => duflo,
        SeriesName::Todd => duflo.negate_var(),
        SeriesName::InvTodd => duflo.negate_var().reciprocal().expect("constant term 1"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(order: usize, v: &[(i64, i64)]) -> FormalSeries {
        FormalSeries::from_coeffs(order, v.iter().map(|&(n, d)| q(n, d)))
    }

    #[test]
    fn todd_coefficients() {
        assert_eq!(series(SeriesName::Todd, 4), s(4, &[(1, 1), (1, 2), (1, 12), (0, 1), (-1, 720)]));
        assert_eq!(series(SeriesName::DufloDen, 2), s(2, &[(1, 1), (-1, 2), (1, 12)]));
        let t6 = series(SeriesName::Todd, 6);
        assert_eq!(t6.coeff(6), q(1, 30240));
    }

    #[test]
    fn inv_todd_times_todd() {
        let n = 12;
        assert_eq!(&series(SeriesName::Todd, n) * &series(SeriesName::InvTodd, n), FormalSeries::one(n));
        assert_eq!(series(SeriesName::InvTodd, 2), s(2, &[(1, 1), (-1, 2), (1, 6)]));
    }

    #[test]
    fn exp_log_inverse() {
        let n = 8;
        let f = s(n, &[(0, 1), (2, 3), (-1, 5), (1, 1)]);
        assert_eq!(f.exp().unwrap().log().unwrap(), f);
        let g = s(n, &[(1, 1), (1, 2), (1, 12)]);
        let r = g.sqrt().unwrap();
        assert_eq!(&r * &r, g);
    }

    #[test]
    fn errors() {
        assert!(FormalSeries::var(3).reciprocal().is_err());
        assert!(FormalSeries::one(3).compose(&FormalSeries::one(3)).is_err());
        assert!(FormalSeries::var(3).log().is_err());
        assert!("cosh".parse::<SeriesName>().is_err());
    }

    #[test]
    fn display() {
        assert_eq!(s(3, &[(1, 1), (-1, 2)]).to_string(), "1 - 1/2*z + O(z^4)");
    }
}
