//! Hodge cohomology of `Pⁿ`, Chern characters, Todd classes, the two Mukai
//! pairings and Riemann-Roch for the map `Pⁿ → pt`.
//!
//! `H*(Pⁿ) = Q[h]/h^{n+1}` with `h^p` of Hodge type `(p,p)`, so every class
//! lies on the diagonal of the Hodge diamond.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{qi, sign_q, Rational};
use crate::series::{series, FormalSeries, SeriesName};

/// A class `a_0 + a_1 h + … + a_n h^n` on `Pⁿ`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CohClass {
    s: FormalSeries,
}

impl CohClass {
    pub fn zero(n: usize) -> Self {
        CohClass { s: FormalSeries::zero(n) }
    }

    pub fn one(n: usize) -> Self {
        CohClass { s: FormalSeries::one(n) }
    }

    /// `h^p`, zero when `p > n`.
    pub fn h_power(n: usize, p: usize) -> Self {
        let mut c = vec![Rational::zero(); n + 1];
        if p <= n {
            c[p] = Rational::one();
        }
        Self::from_coeffs(n, c)
    }

    pub fn from_coeffs(n: usize, coeffs: impl IntoIterator<Item = Rational>) -> Self {
        CohClass { s: FormalSeries::from_coeffs(n, coeffs) }
    }

    fn from_series(s: FormalSeries) -> Self {
        CohClass { s }
    }

    pub fn dim(&self) -> usize {
        self.s.order()
    }

    pub fn coeff(&self, p: usize) -> Rational {
        self.s.coeff(p)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_series(self.s.scale(c))
    }

    /// Multiply the `h^p` part by `sign(p)`.
    fn twist(&self, sign: impl Fn(usize) -> Rational) -> Self {
        Self::from_coeffs(self.dim(), self.s.coeffs().iter().enumerate().map(|(p, c)| c * sign(p)))
    }

    pub fn inverse(&self) -> Result<Self> {
        Ok(Self::from_series(self.s.reciprocal()?))
    }

    /// The square root with constant term 1.
    pub fn sqrt(&self) -> Result<Self> {
        Ok(Self::from_series(self.s.sqrt()?))
    }
}

impl Add<&CohClass> for &CohClass {
    type Output = CohClass;
    fn add(self, rhs: &CohClass) -> CohClass {
        CohClass::from_series(&self.s + &rhs.s)
    }
}

impl Sub<&CohClass> for &CohClass {
    type Output = CohClass;
    fn sub(self, rhs: &CohClass) -> CohClass {
        CohClass::from_series(&self.s - &rhs.s)
    }
}

impl Mul<&CohClass> for &CohClass {
    type Output = CohClass;
    fn mul(self, rhs: &CohClass) -> CohClass {
        CohClass::from_series(&self.s * &rhs.s)
    }
}

impl Neg for &CohClass {
    type Output = CohClass;
    fn neg(self) -> CohClass {
        CohClass::from_series(-&self.s)
    }
}

impl fmt::Display for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = self.s.to_string();
        let body = s.rsplit_once(" + O(").map_or(s.as_str(), |(b, _)| b);
        write!(f, "{}", body.replace('z', "h"))
    }
}

impl fmt::Debug for CohClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A direct sum of line bundles `⊕ O(k)^{mult}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleSymbol {
    parts: Vec<(i64, u32)>,
}

impl BundleSymbol {
    pub fn new(parts: Vec<(i64, u32)>) -> Result<Self> {
        if parts.is_empty() || parts.iter().any(|&(_, m)| m == 0) {
            return Err(Error::invalid("a bundle needs at least one summand of positive multiplicity"));
        }
        Ok(BundleSymbol { parts })
    }

    pub fn line(k: i64) -> Self {
        BundleSymbol { parts: vec![(k, 1)] }
    }

    pub fn parts(&self) -> &[(i64, u32)] {
        &self.parts
    }
}

/// `ch(E) = Σ mult · e^{kh}`.
pub fn ch(e: &BundleSymbol, n: usize) -> CohClass {
    let mut acc = CohClass::zero(n);
    for &(k, mult) in e.parts() {
        let line = CohClass::from_series(FormalSeries::exp_linear(n, &qi(k)));
        acc = &acc + &line.scale(&qi(mult as i64));
    }
    acc
}

/// `td(T_Pⁿ) = (h/(1−e^{−h}))^{n+1}`.
pub fn todd_tangent(n: usize) -> CohClass {
    CohClass::from_series(series(SeriesName::Todd, n).pow(n as u32 + 1))
}

pub fn sqrt_td(n: usize) -> CohClass {
    todd_tangent(n).sqrt().expect("constant term 1")
}

/// `ch(ω) = e^{−(n+1)h}` since `ω = O(−n−1)`.
pub fn ch_omega(n: usize) -> CohClass {
    ch(&BundleSymbol::line(-(n as i64) - 1), n)
}

pub fn sqrt_ch_omega(n: usize) -> CohClass {
    ch_omega(n).sqrt().expect("constant term 1")
}

/// The `h^n` coefficient.
pub fn integrate(v: &CohClass) -> Rational {
    v.coeff(v.dim())
}

/// `K`: `(−1)^q` on `H^q(Ω^p)`; `(−1)^p` on `h^p`.
pub fn k_endo(v: &CohClass) -> CohClass {
    v.twist(|p| sign_q(p as i64))
}

/// `τ`: `√−1^{p+q}` on `H^q(Ω^p)`; `(−1)^p` on `h^p`.
pub fn tau_endo(v: &CohClass) -> CohClass {
    v.twist(|p| sign_q(p as i64))
}

/// `τ̄`: `√−1^{q−p}` on `H^q(Ω^p)`; the identity on the diagonal.
pub fn taubar_endo(v: &CohClass) -> CohClass {
    v.clone()
}

/// `J`: `(−1)^i` on `i`-forms; `(−1)^p` on `h^p`.
pub fn j_endo(v: &CohClass) -> CohClass {
    v.twist(|p| sign_q(p as i64))
}

/// `⟨v,w⟩_C = ∫ τ(v)/√ch(ω) ∧ w`.
pub fn mukai_c(v: &CohClass, w: &CohClass) -> Rational {
    let n = v.dim();
    let inv = sqrt_ch_omega(n).inverse().expect("unit");
    integrate(&(&(&tau_endo(v) * &inv) * w))
}

/// `⟨v,w⟩_M = ⟨τ̄(v),w⟩_C`.
pub fn mukai_m(v: &CohClass, w: &CohClass) -> Rational {
    mukai_c(&taubar_endo(v), w)
}

/// The Mukai vector `ch(E)·√td`.
pub fn mukai_vector(e: &BundleSymbol, n: usize) -> CohClass {
    &ch(e, n) * &sqrt_td(n)
}

/// `χ(O(k))` on `Pⁿ` by counting: `C(n+k, n)` for `k ≥ −n`, else `(−1)^n C(−k−1, n)`.
pub fn chi_binomial(n: usize, k: i64) -> Rational {
    let n_big = BigInt::from(n);
    let v = if k >= -(n as i64) {
        binomial(BigInt::from(n as i64 + k), n_big)
    } else {
        binomial(BigInt::from(-k - 1), n_big) * if n % 2 == 0 { 1 } else { -1 }
    };
    Rational::from_integer(v)
}

/// `∫ ch(O(k)) td(T_Pⁿ)`.
pub fn chi_hrr(n: usize, k: i64) -> Rational {
    integrate(&(&ch(&BundleSymbol::line(k), n) * &todd_tangent(n)))
}

/// Pull-back along `Pⁿ → pt`: a scalar becomes a multiple of `1`.
pub fn pullback_to(n: usize, l: &Rational) -> CohClass {
    CohClass::one(n).scale(l)
}

/// Push-forward along `Pⁿ → pt` adjoint to pull-back for `⟨,⟩_C`:
/// `w ↦ ∫ w/√ch(ω)`. On a point `⟨a,b⟩_C = ab`.
pub fn pushforward(w: &CohClass) -> Rational {
    let inv = sqrt_ch_omega(w.dim()).inverse().expect("unit");
    integrate(&(w * &inv))
}

/// One row of the Riemann-Roch check for `O(k)` on `Pⁿ → pt`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RrRow {
    pub n: usize,
    pub k: i64,
    #[serde(serialize_with = "ser_q")]
    pub chi_hrr: Rational,
    #[serde(serialize_with = "ser_q")]
    pub chi_binomial: Rational,
    pub matches: bool,
}

pub(crate) fn ser_q<S: serde::Serializer>(q: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&crate::graded::fmt_rational(q))
}

/// Evaluate both sides of `∫_X f^*(l) ch(O(k)) td(T_X) = ∫_pt l ch(f_* O(k))`.
pub fn verify_rr(n: usize, k: i64, l: &Rational) -> RrRow {
    let lhs = integrate(&(&(&pullback_to(n, l) * &ch(&BundleSymbol::line(k), n)) * &todd_tangent(n)));
    let rhs = l * chi_binomial(n, k);
    let matches = lhs == rhs;
    RrRow { n, k, chi_hrr: chi_hrr(n, k), chi_binomial: chi_binomial(n, k), matches }
}

/// `∫ K(a) ∧ b ∧ td(T_X)`.
pub fn pairing_via_todd(a: &CohClass, b: &CohClass) -> Rational {
    integrate(&(&(&k_endo(a) * b) * &todd_tangent(a.dim())))
}

/// `⟨a∧√td, b∧√td⟩_M`.
pub fn pairing_via_mukai(a: &CohClass, b: &CohClass) -> Rational {
    let r = sqrt_td(a.dim());
    mukai_m(&(a * &r), &(b * &r))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::q;

    fn c(n: usize, v: &[(i64, i64)]) -> CohClass {
        CohClass::from_coeffs(n, v.iter().map(|&(a, b)| q(a, b)))
    }

    #[test]
    fn chern_characters() {
        assert_eq!(ch(&BundleSymbol::line(0), 3), CohClass::one(3));
        assert_eq!(ch(&BundleSymbol::line(1), 2), c(2, &[(1, 1), (1, 1), (1, 2)]));
        assert_eq!(ch(&BundleSymbol::new(vec![(1, 1), (-1, 1)]).unwrap(), 1), c(1, &[(2, 1)]));
        assert!(BundleSymbol::new(vec![]).is_err());
    }

    #[test]
    fn todd_classes() {
        assert_eq!(todd_tangent(1), c(1, &[(1, 1), (1, 1)]));
        assert_eq!(todd_tangent(2), c(2, &[(1, 1), (3, 2), (1, 1)]));
        for n in 1..=4 {
            let r = sqrt_td(n);
            assert_eq!(&r * &r, todd_tangent(n));
        }
    }

    #[test]
    fn integrals_and_pairings() {
        assert_eq!(integrate(&CohClass::h_power(3, 3)), qi(1));
        assert_eq!(integrate(&CohClass::one(2)), qi(0));
        assert_eq!(chi_hrr(2, 3), qi(10));
        assert_eq!(mukai_m(&CohClass::one(1), &CohClass::h_power(1, 1)), qi(1));
        assert_eq!(mukai_m(&CohClass::one(1), &CohClass::one(1)), qi(1));
        assert_eq!(k_endo(&c(1, &[(1, 1), (1, 1)])), c(1, &[(1, 1), (-1, 1)]));
    }

    #[test]
    fn binomial_chi() {
        assert_eq!(chi_binomial(2, 3), qi(10));
        assert_eq!(chi_binomial(2, -1), qi(0));
        assert_eq!(chi_binomial(1, -3), qi(-2));
        assert_eq!(chi_binomial(2, -4), qi(3));
        for k in -6..=6 {
            assert_eq!(chi_binomial(1, k), qi(k + 1));
        }
    }

    #[test]
    fn display() {
        assert_eq!(c(2, &[(1, 1), (3, 2), (1, 1)]).to_string(), "1 + 3/2*h + h^2");
    }
}
