//! Endomorphisms of `S(V[1])`: multiplication, derivations, contraction,
//! the top-degree pairing and adjoints.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graded::{sign_q, wedge_sign, Rational, SubsetLabel, MAX_DIM};
use crate::linalg::QMatrix;
use crate::odd::element::{ExtElement, Side};

/// A linear map `S(V[1]) → S(V[1])` stored as a dense `2^m × 2^m` matrix,
/// rows indexed by output label and columns by input label.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct EndOperator {
    m: usize,
    mat: Vec<Rational>,
}

impl EndOperator {
    pub fn zero(m: usize) -> Self {
        assert!(m <= MAX_DIM);
        let n = 1usize << m;
        EndOperator { m, mat: vec![Rational::zero(); n * n] }
    }

    pub fn identity(m: usize) -> Self {
        let mut op = Self::zero(m);
        for l in SubsetLabel::all(m) {
            op.set(l, l, Rational::one());
        }
        op
    }

    /// The matrix unit sending `x_input` to `x_output`.
    pub fn unit(m: usize, output: SubsetLabel, input: SubsetLabel) -> Self {
        let mut op = Self::zero(m);
        op.set(output, input, Rational::one());
        op
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    fn size(&self) -> usize {
        1 << self.m
    }

    #[inline]
    fn idx(&self, output: SubsetLabel, input: SubsetLabel) -> usize {
        (output.0 as usize) * self.size() + input.0 as usize
    }

    pub fn entry(&self, output: SubsetLabel, input: SubsetLabel) -> &Rational {
        &self.mat[self.idx(output, input)]
    }

    pub fn set(&mut self, output: SubsetLabel, input: SubsetLabel, v: Rational) {
        let i = self.idx(output, input);
        self.mat[i] = v;
    }

    pub fn add_entry(&mut self, output: SubsetLabel, input: SubsetLabel, v: &Rational) {
        let i = self.idx(output, input);
        self.mat[i] += v;
    }

    /// Nonzero entries as `(output, input, value)`.
    pub fn entries(&self) -> impl Iterator<Item = (SubsetLabel, SubsetLabel, &Rational)> {
        let n = self.size();
        self.mat
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(move |(k, v)| (SubsetLabel((k / n) as u32), SubsetLabel((k % n) as u32), v))
    }

    pub fn is_zero(&self) -> bool {
        self.mat.iter().all(|v| v.is_zero())
    }

    /// Degree of the matrix unit `x_input ↦ x_output`.
    pub fn unit_degree(output: SubsetLabel, input: SubsetLabel) -> i64 {
        input.len() as i64 - output.len() as i64
    }

    /// Degrees of the nonzero homogeneous components, ascending.
    pub fn degrees(&self) -> Vec<i64> {
        let set: BTreeSet<i64> = self.entries().map(|(o, i, _)| Self::unit_degree(o, i)).collect();
        set.into_iter().collect()
    }

    /// The homogeneous component of degree `d`.
    pub fn component(&self, d: i64) -> Self {
        let mut out = Self::zero(self.m);
        for (o, i, v) in self.entries() {
            if Self::unit_degree(o, i) == d {
                out.set(o, i, v.clone());
            }
        }
        out
    }

    pub fn apply(&self, a: &ExtElement) -> ExtElement {
        assert!(a.side() == Side::V && a.dim() == self.m, "operator applied to an incompatible element");
        let mut out = ExtElement::zero(Side::V, self.m);
        for (input, c) in a.terms() {
            for output in SubsetLabel::all(self.m) {
                let e = self.entry(output, *input);
                if !e.is_zero() {
                    out.add_term(output, e * c);
                }
            }
        }
        out
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &EndOperator) -> EndOperator {
        assert_eq!(self.m, other.m, "composing operators of different dimension");
        let n = self.size();
        let mut out = Self::zero(self.m);
        for k in 0..n {
            for i in 0..n {
                let a = &self.mat[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = &other.mat[k * n + j];
                    if !b.is_zero() {
                        out.mat[i * n + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        EndOperator { m: self.m, mat: self.mat.iter().map(|v| v * c).collect() }
    }

    /// Graded commutator `a∘b − (−1)^{|a||b|} b∘a`, extended over homogeneous parts.
    pub fn bracket(&self, other: &EndOperator) -> EndOperator {
        let mut out = Self::zero(self.m);
        for da in self.degrees() {
            let a = self.component(da);
            for db in other.degrees() {
                let b = other.component(db);
                out = out + a.compose(&b) - b.compose(&a).scale(&sign_q(da * db));
            }
        }
        out
    }

    /// Operators as a flat vector, for linear algebra over operator space.
    pub fn to_vec(&self) -> Vec<Rational> {
        self.mat.clone()
    }

    pub fn from_vec(m: usize, mat: Vec<Rational>) -> Self {
        assert_eq!(mat.len(), 1 << (2 * m));
        EndOperator { m, mat }
    }
}

impl Add for EndOperator {
    type Output = EndOperator;
    fn add(mut self, rhs: EndOperator) -> EndOperator {
        assert_eq!(self.m, rhs.m);
        for (a, b) in self.mat.iter_mut().zip(rhs.mat) {
            if !b.is_zero() {
                *a += b;
            }
        }
        self
    }
}

impl Sub for EndOperator {
    type Output = EndOperator;
    fn sub(self, rhs: EndOperator) -> EndOperator {
        self + (-rhs)
    }
}

impl Neg for EndOperator {
    type Output = EndOperator;
    fn neg(self) -> EndOperator {
        EndOperator { m: self.m, mat: self.mat.into_iter().map(|v| -v).collect() }
    }
}

impl fmt::Debug for EndOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EndOperator(m={})[", self.m)?;
        for (k, (o, i, v)) in self.entries().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{i}->{v}*{o}")?;
        }
        write!(f, "]")
    }
}

/// `j(y_i)(x_S)` by the right-derivation recursion on the ascending word of `S`.
fn j_generator(i: usize, s: SubsetLabel) -> Option<(SubsetLabel, i64)> {
    if s.is_empty() {
        return None;
    }
    let last = s.max_index();
    let rest = s.minus(SubsetLabel::single(last));
    if i == last {
        return Some((rest, 1));
    }
    // −j(y_i)(x_rest) ∧ x_last
    let (r, sign) = j_generator(i, rest)?;
    let w = wedge_sign(r, SubsetLabel::single(last));
    Some((r.union(SubsetLabel::single(last)), -sign * w))
}

/// `k(x_i)(y_T)` by the left-derivation rule on the ascending word of `T`.
fn k_generator(i: usize, t: SubsetLabel) -> Option<(SubsetLabel, i64)> {
    if t.is_empty() {
        return None;
    }
    let first = t.indices()[0];
    let rest = t.minus(SubsetLabel::single(first));
    if i == first {
        return Some((rest, 1));
    }
    // (−1)^{|y_first|} y_first ∧ k(x_i)(y_rest)
    let (r, sign) = k_generator(i, rest)?;
    let w = wedge_sign(SubsetLabel::single(first), r);
    Some((r.union(SubsetLabel::single(first)), -sign * w))
}

/// Per-dimension sign tables for `j(y_T)(x_U)`.
pub(crate) struct Tables {
    /// `jt[T][U]` is the sign `s` with `j(y_T)(x_U) = s·x_{U∖T}`, or 0.
    pub jt: Vec<Vec<i8>>,
}

fn build_tables(m: usize) -> Tables {
    let n = 1usize << m;
    let mut jt = vec![vec![0i8; n]; n];
    for t in SubsetLabel::all(m) {
        for u in SubsetLabel::all(m) {
            // j(y_{t1} ∧ ... ∧ y_{tk}) = j(y_tk) ∘ ... ∘ j(y_t1)
            let mut cur = Some((u, 1i64));
            for ti in t.indices() {
                cur = cur.and_then(|(l, s)| j_generator(ti, l).map(|(l2, s2)| (l2, s * s2)));
            }
            jt[t.0 as usize][u.0 as usize] = cur.map_or(0, |(_, s)| s as i8);
        }
    }
    Tables { jt }
}

pub(crate) fn tables(m: usize) -> Arc<Tables> {
    static CACHE: OnceLock<Mutex<Vec<Option<Arc<Tables>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![None; MAX_DIM + 1]));
    let mut guard = cache.lock().unwrap();
    guard[m].get_or_insert_with(|| Arc::new(build_tables(m))).clone()
}

/// Right multiplication `W ↦ W ∧ Z`.
pub fn i_op(z: &ExtElement) -> Result<EndOperator> {
    if z.side() != Side::V {
        return Err(Error::invalid("i_op needs an element of S(V[1])"));
    }
    let m = z.dim();
    let mut op = EndOperator::zero(m);
    for (s, c) in z.terms() {
        for u in SubsetLabel::all(m) {
            let w = wedge_sign(u, *s);
            if w != 0 {
                op.add_entry(u.union(*s), u, &(c * sign_q((w < 0) as i64)));
            }
        }
    }
    Ok(op)
}

/// The right derivation `j(Y)` with `j(y_i)(x_j) = δ_ij` and
/// `j(Y1 ∧ Y2) = j(Y2) ∘ j(Y1)`.
pub fn j_op(y: &ExtElement) -> Result<EndOperator> {
    if y.side() != Side::Dual {
        return Err(Error::invalid("j_op needs an element of S(V*[-1])"));
    }
    let m = y.dim();
    let tab = tables(m);
    let mut op = EndOperator::zero(m);
    for (t, c) in y.terms() {
        for u in SubsetLabel::all(m) {
            let s = tab.jt[t.0 as usize][u.0 as usize];
            if s != 0 {
                op.add_entry(u.minus(*t), u, &(c * sign_q((s < 0) as i64)));
            }
        }
    }
    Ok(op)
}

/// `j(y_T)(x_U)` for basis labels, as `(label, sign)`.
pub fn j_basis(m: usize, t: SubsetLabel, u: SubsetLabel) -> Option<(SubsetLabel, i64)> {
    let s = tables(m).jt[t.0 as usize][u.0 as usize];
    (s != 0).then(|| (u.minus(t), s as i64))
}

/// `k(x_S)(y_T)` for basis labels, with `k(X1 ∧ X2) = k(X1) ∘ k(X2)`.
pub fn k_basis(s: SubsetLabel, t: SubsetLabel) -> Option<(SubsetLabel, i64)> {
    let mut cur = Some((t, 1i64));
    for si in s.indices().into_iter().rev() {
        cur = cur.and_then(|(l, sg)| k_generator(si, l).map(|(l2, s2)| (l2, sg * s2)));
    }
    cur
}

/// The contraction `(Z|Y) = k(Z)(Y)`.
pub fn k_contract(z: &ExtElement, y: &ExtElement) -> Result<ExtElement> {
    if z.side() != Side::V || y.side() != Side::Dual {
        return Err(Error::invalid("k_contract needs Z in S(V[1]) and Y in S(V*[-1])"));
    }
    if z.dim() != y.dim() {
        return Err(Error::invalid("dimension mismatch"));
    }
    let mut out = ExtElement::zero(Side::Dual, y.dim());
    for (s, a) in z.terms() {
        for (t, b) in y.terms() {
            if let Some((l, sign)) = k_basis(*s, *t) {
                out.add_term(l, a * b * sign_q((sign < 0) as i64));
            }
        }
    }
    Ok(out)
}

/// The scalar part `(Z||Y)` of the contraction.
pub fn full_contract(z: &ExtElement, y: &ExtElement) -> Result<Rational> {
    Ok(k_contract(z, y)?.coeff(SubsetLabel::EMPTY))
}

/// Coefficient of the top monomial `x_{1..m}` in `a ∧ b`.
pub fn pairing(a: &ExtElement, b: &ExtElement) -> Result<Rational> {
    if a.side() != Side::V || b.side() != Side::V {
        return Err(Error::invalid("pairing is defined on S(V[1])"));
    }
    Ok(a.wedge(b)?.coeff(SubsetLabel::top(a.dim())))
}

/// Gram matrix of the pairing on the basis, indexed by masks.
pub fn gram_matrix(m: usize) -> QMatrix {
    let n = 1usize << m;
    let mut g = QMatrix::zeros(n, n);
    for u in SubsetLabel::all(m) {
        for v in SubsetLabel::all(m) {
            let a = ExtElement::basis(Side::V, m, u);
            let b = ExtElement::basis(Side::V, m, v);
            g.set(u.0 as usize, v.0 as usize, pairing(&a, &b).unwrap());
        }
    }
    g
}

fn gram(m: usize) -> Arc<QMatrix> {
    static CACHE: OnceLock<Mutex<Vec<Option<Arc<QMatrix>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![None; MAX_DIM + 1]));
    let mut guard = cache.lock().unwrap();
    guard[m].get_or_insert_with(|| Arc::new(gram_matrix(m))).clone()
}

fn gram_inverse(m: usize) -> Arc<QMatrix> {
    static CACHE: OnceLock<Mutex<Vec<Option<Arc<QMatrix>>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(vec![None; MAX_DIM + 1]));
    let g = gram(m);
    let mut guard = cache.lock().unwrap();
    guard[m].get_or_insert_with(|| Arc::new(g.inverse().expect("pairing is nondegenerate"))).clone()
}

/// The adjoint `L⁺`, defined by `⟨L(a),b⟩ = (−1)^{|L||b|} ⟨a,L⁺(b)⟩` on
/// homogeneous parts and solved against the Gram matrix.
pub fn adjoint(op: &EndOperator) -> EndOperator {
    let m = op.dim();
    let n = 1usize << m;
    let g = gram(m);
    let ginv = gram_inverse(m);
    let mut out = EndOperator::zero(m);
    for d in op.degrees() {
        // R[u][w] = (−1)^{d|x_w|} ⟨L_d(x_u), x_w⟩ = (−1)^{d|x_w|} Σ_v L_d[v][u] G[v][w]
        let mut r = QMatrix::zeros(n, n);
        for (v, u, a) in op.entries() {
            if EndOperator::unit_degree(v, u) != d {
                continue;
            }
            for w in 0..n {
                let gv = g.get(v.0 as usize, w);
                if gv.is_zero() {
                    continue;
                }
                let sign = sign_q(d * (w as u32).count_ones() as i64);
                let cur = r.get(u.0 as usize, w) + a * gv * sign;
                r.set(u.0 as usize, w, cur);
            }
        }
        // G · L⁺ = R
        let sol = ginv.mul(&r);
        for v in 0..n {
            for w in 0..n {
                let x = sol.get(v, w);
                if !x.is_zero() {
                    out.add_entry(SubsetLabel(v as u32), SubsetLabel(w as u32), x);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::qi;

    fn lab(v: &[usize], m: usize) -> SubsetLabel {
        SubsetLabel::from_indices(v, m).unwrap()
    }

    fn xs(v: &[usize], m: usize) -> ExtElement {
        ExtElement::basis(Side::V, m, lab(v, m))
    }

    fn ys(v: &[usize], m: usize) -> ExtElement {
        ExtElement::basis(Side::Dual, m, lab(v, m))
    }

    #[test]
    fn i_examples() {
        assert_eq!(i_op(&ExtElement::one(Side::V, 2)).unwrap(), EndOperator::identity(2));
        assert_eq!(i_op(&xs(&[1], 2)).unwrap().apply(&xs(&[2], 2)), -xs(&[1, 2], 2));
        assert!(i_op(&xs(&[1], 2)).unwrap().apply(&xs(&[1], 2)).is_zero());
        assert!(i_op(&ys(&[1], 2)).is_err());
    }

    #[test]
    fn j_examples() {
        assert_eq!(j_op(&ys(&[1], 2)).unwrap().apply(&xs(&[1, 2], 2)), -xs(&[2], 2));
        assert_eq!(j_op(&ys(&[2], 2)).unwrap().apply(&xs(&[1, 2], 2)), xs(&[1], 2));
        assert!(j_op(&ys(&[1], 2)).unwrap().apply(&ExtElement::one(Side::V, 2)).is_zero());
        assert!(j_op(&xs(&[1], 2)).is_err());
    }

    #[test]
    fn j_closed_form() {
        // j(y_i)(x_S) = (−1)^{#elements of S above i} x_{S∖i}
        for m in 1..=4 {
            for s in SubsetLabel::all(m) {
                for i in 1..=m {
                    let got = j_op(&ys(&[i], m)).unwrap().apply(&ExtElement::basis(Side::V, m, s));
                    let want = if s.contains(i) {
                        ExtElement::basis(Side::V, m, s.minus(SubsetLabel::single(i)))
                            .scale(&sign_q(s.count_above(i) as i64))
                    } else {
                        ExtElement::zero(Side::V, m)
                    };
                    assert_eq!(got, want);
                }
            }
        }
    }

    #[test]
    fn j_reverses_products() {
        let m = 3;
        for t in SubsetLabel::all(m) {
            let idx = t.indices();
            let mut op = EndOperator::identity(m);
            for &i in &idx {
                op = j_op(&ys(&[i], m)).unwrap().compose(&op);
            }
            assert_eq!(j_op(&ExtElement::basis(Side::Dual, m, t)).unwrap(), op);
        }
    }

    #[test]
    fn contraction_examples() {
        assert_eq!(k_contract(&xs(&[1], 2), &ys(&[1, 2], 2)).unwrap(), ys(&[2], 2));
        let y = ys(&[1, 2], 2) + ys(&[1], 2);
        assert_eq!(k_contract(&ExtElement::one(Side::V, 2), &y).unwrap(), y);
        assert!(k_contract(&xs(&[1], 2), &ys(&[2], 2)).unwrap().is_zero());
    }

    #[test]
    fn contraction_is_a_left_derivation() {
        let m = 3;
        for i in 1..=m {
            let k = |y: &ExtElement| k_contract(&xs(&[i], m), y).unwrap();
            for a in SubsetLabel::all(m) {
                for b in SubsetLabel::all(m) {
                    let ya = ExtElement::basis(Side::Dual, m, a);
                    let yb = ExtElement::basis(Side::Dual, m, b);
                    let lhs = k(&(&ya * &yb));
                    let rhs = &k(&ya) * &yb + (&ya * &k(&yb)).scale(&sign_q(a.len() as i64));
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(pairing(&xs(&[1], 2), &xs(&[2], 2)).unwrap(), qi(1));
        assert_eq!(pairing(&xs(&[1], 2), &xs(&[1], 2)).unwrap(), qi(0));
        assert_eq!(pairing(&ExtElement::one(Side::V, 2), &xs(&[1, 2], 2)).unwrap(), qi(1));
    }

    #[test]
    fn gram_is_signed_permutation() {
        for m in 0..=4 {
            let g = gram_matrix(m);
            for r in 0..g.rows {
                let nz: Vec<_> = (0..g.cols).filter(|&c| !g.get(r, c).is_zero()).collect();
                assert_eq!(nz.len(), 1);
                let v = g.get(r, nz[0]);
                assert!(*v == qi(1) || *v == qi(-1));
            }
        }
    }
}
