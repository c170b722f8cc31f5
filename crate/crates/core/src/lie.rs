//! Exponential-map identities on nilpotent matrix Lie algebras.
//!
//! Everything here is a finite sum: `exp`, `(1 − e^{−ad})/ad` and friends
//! truncate once the relevant powers vanish, so comparisons are exact.

use std::fmt;

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graded::{fmt_rational, q, qi, sign_q, Rational};
use crate::linalg::QMatrix;
use crate::poly::Poly;
use crate::series::{series, SeriesName};

/// Square rational matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SquareMatrix {
    n: usize,
    entries: Vec<Rational>,
}

impl SquareMatrix {
    pub fn zero(n: usize) -> Self {
        SquareMatrix { n, entries: vec![Rational::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.entries[i * n + i] = Rational::one();
        }
        m
    }

    /// The matrix unit `E_ij`, 1-based.
    pub fn unit(n: usize, i: usize, j: usize) -> Self {
        let mut m = Self::zero(n);
        m.set(i - 1, j - 1, Rational::one());
        m
    }

    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::invalid(format!("matrix is not square ({n} rows)")));
        }
        Ok(SquareMatrix { n, entries: rows.into_iter().flatten().collect() })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    /// Entry at 0-based `(r, c)`.
    pub fn get(&self, r: usize, c: usize) -> &Rational {
        &self.entries[r * self.n + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Rational) {
        self.entries[r * self.n + c] = v;
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn rows(&self) -> Vec<Vec<Rational>> {
        self.entries.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn is_strictly_upper(&self) -> bool {
        (0..self.n).all(|r| (0..=r).all(|c| self.get(r, c).is_zero()))
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check(other);
        let entries = self.entries.iter().zip(&other.entries).map(|(a, b)| a + b).collect();
        SquareMatrix { n: self.n, entries }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn scale(&self, c: &Rational) -> Self {
        SquareMatrix { n: self.n, entries: self.entries.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        self.check(other);
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    /// `[self, other]`.
    pub fn bracket(&self, other: &Self) -> Self {
        self.mul(other).sub(&other.mul(self))
    }

    /// `Zⁿ = 0`, checked by repeated multiplication.
    pub fn is_nilpotent(&self) -> bool {
        let mut p = self.clone();
        for _ in 1..self.n {
            if p.is_zero() {
                return true;
            }
            p = p.mul(self);
        }
        p.is_zero()
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.n, other.n, "matrix sizes differ");
    }
}

impl fmt::Display for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(fmt_rational).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "[{}]", rows.join("; "))
    }
}

impl fmt::Debug for SquareMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn require_nilpotent(z: &SquareMatrix, what: &str) -> Result<()> {
    if z.is_nilpotent() {
        Ok(())
    } else {
        Err(Error::unsupported(format!("{what} is not nilpotent")))
    }
}

/// `Σ Z^k/k!`.
pub fn mat_exp(z: &SquareMatrix) -> Result<SquareMatrix> {
    require_nilpotent(z, "Z")?;
    let mut acc = SquareMatrix::identity(z.n);
    let mut term = SquareMatrix::identity(z.n);
    for k in 1..z.n.max(1) {
        term = term.mul(z).scale(&q(1, k as i64));
        if term.is_zero() {
            break;
        }
        acc = acc.add(&term);
    }
    Ok(acc)
}

/// `Z + tW` must be nilpotent as a polynomial in `t`; a degree-n identity
/// in `t` is settled by `n + 1` values.
fn require_nilpotent_line(z: &SquareMatrix, w: &SquareMatrix) -> Result<()> {
    require_nilpotent(z, "Z")?;
    require_nilpotent(w, "W")?;
    for t in 1..=z.n as i64 {
        if !z.add(&w.scale(&qi(t))).is_nilpotent() {
            return Err(Error::unsupported(format!("Z + {t}W is not nilpotent")));
        }
    }
    Ok(())
}

/// The t-linear coefficient of `exp(Z + tW)`.
pub fn dexp_direct(z: &SquareMatrix, w: &SquareMatrix) -> Result<SquareMatrix> {
    require_nilpotent_line(z, w)?;
    // (Z + tW)^k = A_k + t B_k + O(t²)
    let n = z.n;
    let mut a = SquareMatrix::identity(n);
    let mut b = SquareMatrix::zero(n);
    let mut acc = SquareMatrix::zero(n);
    let mut fact = Rational::one();
    for k in 1..=n {
        b = z.mul(&b).add(&w.mul(&a));
        a = z.mul(&a);
        fact /= qi(k as i64);
        acc = acc.add(&b.scale(&fact));
    }
    Ok(acc)
}

/// `Σ_k c_k ad_Z^k(W)` until the iterate vanishes.
fn ad_series(z: &SquareMatrix, w: &SquareMatrix, coeff: impl Fn(usize) -> Rational) -> SquareMatrix {
    let mut acc = SquareMatrix::zero(z.n);
    let mut term = w.clone();
    let mut k = 0;
    while !term.is_zero() {
        acc = acc.add(&term.scale(&coeff(k)));
        term = z.bracket(&term);
        k += 1;
    }
    acc
}

fn inv_factorial(k: usize) -> Rational {
    (1..=k as i64).fold(Rational::one(), |acc, i| acc / qi(i))
}

/// `exp(Z) · [(1 − e^{−ad Z})/ad Z](W)`.
pub fn dexp_formula(z: &SquareMatrix, w: &SquareMatrix) -> Result<SquareMatrix> {
    require_nilpotent_line(z, w)?;
    let series = ad_series(z, w, |k| sign_q(k as i64) * inv_factorial(k + 1));
    Ok(mat_exp(z)?.mul(&series))
}

/// The t-linear coefficient of `exp(−Z − tW)`.
pub fn dbarexp_direct(z: &SquareMatrix, w: &SquareMatrix) -> Result<SquareMatrix> {
    let minus = -Rational::one();
    dexp_direct(&z.scale(&minus), &w.scale(&minus))
}

/// `exp(−Z) · [−(e^{ad Z} − 1)/ad Z](W)`.
pub fn dbarexp_formula(z: &SquareMatrix, w: &SquareMatrix) -> Result<SquareMatrix> {
    require_nilpotent_line(z, w)?;
    let series = ad_series(z, w, |k| -inv_factorial(k + 1));
    Ok(mat_exp(&z.scale(&-Rational::one()))?.mul(&series))
}

/// Basis of a matrix Lie subalgebra with its structure constants.
#[derive(Clone, Debug)]
pub struct LieBasis {
    n: usize,
    elements: Vec<SquareMatrix>,
    // brackets[a][b] = coordinates of [X_a, X_b]
    brackets: Vec<Vec<Vec<Rational>>>,
    span: QMatrix,
}

impl LieBasis {
    pub fn new(elements: Vec<SquareMatrix>) -> Result<Self> {
        let Some(first) = elements.first() else {
            return Err(Error::invalid("empty Lie basis"));
        };
        let n = first.n;
        if elements.iter().any(|x| x.n != n) {
            return Err(Error::invalid("basis matrices have different sizes"));
        }
        let cols: Vec<Vec<Rational>> = elements.iter().map(|x| x.entries.clone()).collect();
        let span = QMatrix::from_columns(n * n, &cols);
        if span.rank() < elements.len() {
            return Err(Error::invalid("basis matrices are linearly dependent"));
        }
        let mut basis = LieBasis { n, elements, brackets: Vec::new(), span };
        let mut brackets = Vec::new();
        for (a, xa) in basis.elements.iter().enumerate() {
            let mut row = Vec::new();
            for (b, xb) in basis.elements.iter().enumerate() {
                let c = basis
                    .coords(&xa.bracket(xb))
                    .map_err(|_| Error::invalid(format!("[X{}, X{}] leaves the span", a + 1, b + 1)))?;
                row.push(c);
            }
            brackets.push(row);
        }
        basis.brackets = brackets;
        Ok(basis)
    }

    /// `{E₁₂, E₁₃, E₂₃}`.
    pub fn heisenberg() -> Self {
        Self::strictly_upper(3)
    }

    /// All `E_ij` with `i < j`, ordered by row then column.
    pub fn strictly_upper(n: usize) -> Self {
        let mut els = Vec::new();
        for i in 1..=n {
            for j in i + 1..=n {
                els.push(SquareMatrix::unit(n, i, j));
            }
        }
        Self::new(els).expect("strictly upper triangular matrices form a Lie algebra")
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[SquareMatrix] {
        &self.elements
    }

    /// Coordinates of `[X_a, X_b]`, 0-based.
    pub fn bracket_coords(&self, a: usize, b: usize) -> &[Rational] {
        &self.brackets[a][b]
    }

    pub fn coords(&self, z: &SquareMatrix) -> Result<Vec<Rational>> {
        if z.n != self.n {
            return Err(Error::invalid("matrix size does not match the basis"));
        }
        self.span.solve(&z.entries).map_err(|_| Error::invalid("matrix outside the span of the basis"))
    }

    pub fn combine(&self, coords: &[Rational]) -> SquareMatrix {
        let mut out = SquareMatrix::zero(self.n);
        for (c, x) in coords.iter().zip(&self.elements) {
            if !c.is_zero() {
                out = out.add(&x.scale(c));
            }
        }
        out
    }

    /// Matrix of `ad_Z` in the basis.
    pub fn ad_matrix(&self, z: &SquareMatrix) -> Result<QMatrix> {
        let cz = self.coords(z)?;
        let d = self.dim();
        let mut m = QMatrix::zeros(d, d);
        for (k, zk) in cz.iter().enumerate() {
            if zk.is_zero() {
                continue;
            }
            for b in 0..d {
                for (a, c) in self.brackets[k][b].iter().enumerate() {
                    if !c.is_zero() {
                        let v = m.get(a, b) + zk * c;
                        m.set(a, b, v);
                    }
                }
            }
        }
        Ok(m)
    }

    /// Bracket table as printable lines, `[X_a, X_b] = ...` for `a < b`.
    pub fn closure_table(&self) -> Vec<String> {
        let mut out = Vec::new();
        for a in 0..self.dim() {
            for b in a + 1..self.dim() {
                out.push(format!("[X{}, X{}] = {}", a + 1, b + 1, fmt_combination(&self.brackets[a][b])));
            }
        }
        out
    }
}

fn fmt_combination(c: &[Rational]) -> String {
    let terms: Vec<String> = c
        .iter()
        .enumerate()
        .filter(|(_, v)| !v.is_zero())
        .map(|(i, v)| if v.is_one() { format!("X{}", i + 1) } else { format!("{}*X{}", fmt_rational(v), i + 1) })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// Matrix power series `Σ c_k A^k` until `A^k` vanishes.
fn matrix_series(a: &QMatrix, coeff: impl Fn(usize) -> Rational) -> QMatrix {
    let d = a.rows;
    let mut acc = QMatrix::zeros(d, d);
    let mut term = QMatrix::identity(d);
    let mut k = 0;
    while term.data.iter().any(|x| !x.is_zero()) {
        let c = coeff(k);
        for (o, t) in acc.data.iter_mut().zip(&term.data) {
            *o += &c * t;
        }
        term = term.mul(a);
        k += 1;
        if k > d + 1 {
            break;
        }
    }
    acc
}

/// Jacobian determinants of a differential: in the basis, and from the series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Jacobians {
    #[serde(serialize_with = "crate::rr::ser_q")]
    pub direct: Rational,
    #[serde(serialize_with = "crate::rr::ser_q")]
    pub formula: Rational,
}

fn left_trivialized(basis: &LieBasis, diff: impl Fn(&SquareMatrix) -> Result<SquareMatrix>, base: &SquareMatrix) -> Result<QMatrix> {
    let cols = basis
        .elements
        .iter()
        .map(|x| basis.coords(&base.mul(&diff(x)?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(QMatrix::from_columns(basis.dim(), &cols))
}

/// `det` of `exp(Z)^{-1}·d(exp)_Z` in the basis against `det((1 − e^{−ad Z})/ad Z)`.
pub fn jacobians(z: &SquareMatrix, basis: &LieBasis) -> Result<Jacobians> {
    let ad = basis.ad_matrix(z)?;
    require_nilpotent(z, "Z")?;
    let base = mat_exp(&z.scale(&-Rational::one()))?;
    let direct = left_trivialized(basis, |w| dexp_direct(z, w), &base)?.det()?;
    let formula = matrix_series(&ad, |k| sign_q(k as i64) * inv_factorial(k + 1)).det()?;
    Ok(Jacobians { direct, formula })
}

/// The `exp(−Z)` side: `det(exp(Z)·d(exp̄)_Z)` against `det(−(e^{ad Z} − 1)/ad Z)`.
pub fn bar_jacobians(z: &SquareMatrix, basis: &LieBasis) -> Result<Jacobians> {
    let ad = basis.ad_matrix(z)?;
    require_nilpotent(z, "Z")?;
    let base = mat_exp(z)?;
    let direct = left_trivialized(basis, |w| dbarexp_direct(z, w), &base)?.det()?;
    let formula = matrix_series(&ad, |k| -inv_factorial(k + 1)).det()?;
    Ok(Jacobians { direct, formula })
}

type PolyMatrix = Vec<Vec<Poly>>;

fn pm_zero(n: usize, vars: usize) -> PolyMatrix {
    vec![vec![Poly::zero(vars); n]; n]
}

fn pm_mul(a: &PolyMatrix, b: &PolyMatrix) -> PolyMatrix {
    let n = a.len();
    let vars = a[0][0].nvars();
    let mut out = pm_zero(n, vars);
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] = &out[i][j] + &(&a[i][k] * &b[k][j]);
                }
            }
        }
    }
    out
}

fn pm_is_zero(a: &PolyMatrix) -> bool {
    a.iter().flatten().all(Poly::is_zero)
}

fn pm_from(m: &SquareMatrix, vars: usize) -> PolyMatrix {
    m.rows().into_iter().map(|r| r.into_iter().map(|v| Poly::constant(vars, v)).collect()).collect()
}

/// Exponential-coordinate pullback check on a basis.
///
/// With `Z(z) = Σ z_k X_k` and `Φ(z)` the matrix of `ad/(1 − e^{−ad})` at
/// `Z(z)`, every matrix-entry coordinate function satisfies
/// `exp(Z)·X_j = Σ_k Φ_{kj} ∂_k exp(Z)` as a polynomial identity.
/// Returns the index of the first failing `X_j`, if any.
pub fn exp_pullback_failure(basis: &LieBasis) -> Option<usize> {
    let d = basis.dim();
    let n = basis.n;
    let z_sym: PolyMatrix = (0..n)
        .map(|r| {
            (0..n)
                .map(|c| {
                    let mut p = Poly::zero(d);
                    for (k, x) in basis.elements.iter().enumerate() {
                        p = &p + &Poly::var(d, k + 1).scale(x.get(r, c));
                    }
                    p
                })
                .collect()
        })
        .collect();
    // exp(Z(z))
    let mut exp = pm_from(&SquareMatrix::identity(n), d);
    let mut term = exp.clone();
    for k in 1..=n {
        term = pm_mul(&term, &z_sym);
        if pm_is_zero(&term) {
            break;
        }
        let inv = q(1, k as i64);
        term = term.iter().map(|r| r.iter().map(|p| p.scale(&inv)).collect()).collect();
        exp = exp.iter().zip(&term).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + y).collect()).collect();
    }
    // ad in the basis, entries linear in z
    let mut ad = pm_zero(d, d);
    for k in 0..d {
        for b in 0..d {
            for (a, c) in basis.brackets[k][b].iter().enumerate() {
                if !c.is_zero() {
                    ad[a][b] = &ad[a][b] + &Poly::var(d, k + 1).scale(c);
                }
            }
        }
    }
    let todd = series(SeriesName::Todd, d + 2);
    let mut phi = pm_zero(d, d);
    let mut power = pm_from(&SquareMatrix::identity(d), d);
    for k in 0..=d {
        let c = todd.coeff(k);
        phi = phi.iter().zip(&power).map(|(a, b)| a.iter().zip(b).map(|(x, y)| x + &y.scale(&c)).collect()).collect();
        power = pm_mul(&power, &ad);
        if pm_is_zero(&power) {
            break;
        }
    }
    let partials: Vec<PolyMatrix> =
        (1..=d).map(|k| exp.iter().map(|r| r.iter().map(|p| p.derivative(k)).collect()).collect()).collect();
    for (j, xj) in basis.elements.iter().enumerate() {
        let lhs = pm_mul(&exp, &pm_from(xj, d));
        let mut rhs = pm_zero(n, d);
        for (k, dk) in partials.iter().enumerate() {
            let c = &phi[k][j];
            if c.is_zero() {
                continue;
            }
            for r in 0..n {
                for s in 0..n {
                    rhs[r][s] = &rhs[r][s] + &(c * &dk[r][s]);
                }
            }
        }
        if lhs != rhs {
            return Some(j);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize, j: usize) -> SquareMatrix {
        SquareMatrix::unit(3, i, j)
    }

    #[test]
    fn heisenberg_example() {
        let want = e(2, 3).add(&e(1, 3).scale(&q(1, 2)));
        assert_eq!(dexp_direct(&e(1, 2), &e(2, 3)).unwrap(), want);
        assert_eq!(dexp_formula(&e(1, 2), &e(2, 3)).unwrap(), want);
        assert_eq!(mat_exp(&e(1, 2)).unwrap(), SquareMatrix::identity(3).add(&e(1, 2)));
    }

    #[test]
    fn origin_and_errors() {
        let z = SquareMatrix::zero(3);
        assert_eq!(dexp_direct(&z, &e(1, 3)).unwrap(), e(1, 3));
        assert_eq!(dbarexp_formula(&z, &e(1, 3)).unwrap(), e(1, 3).scale(&qi(-1)));
        assert!(matches!(mat_exp(&SquareMatrix::identity(2)), Err(Error::Unsupported(_))));
        let h = LieBasis::heisenberg();
        assert!(matches!(jacobians(&e(2, 1), &h), Err(Error::InvalidInput(_))));
        let j = bar_jacobians(&z, &h).unwrap();
        assert_eq!(j.direct, j.formula);
        assert_eq!(j.direct, qi(-1));
    }

    #[test]
    fn pullback_on_heisenberg() {
        assert_eq!(exp_pullback_failure(&LieBasis::heisenberg()), None);
        assert_eq!(LieBasis::heisenberg().closure_table()[1], "[X1, X3] = X2");
    }
}
