//! Symbols `S(V*[-1]) ⊗ S(V[1])`, the symbol maps `Gr`/`Gl` and their
//! inverses, the symbol product, and the adjoint actions on `D_m`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graded::{fmt_rational, sign_q, wedge_sign, Rational, SubsetLabel, MAX_DIM};
use crate::odd::element::{ExtElement, Side};
use crate::odd::operator::{i_op, j_basis, j_op, EndOperator};

/// A finite combination of `y_T ⊗ x_S`, keyed by `(T, S)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BiSymbol {
    m: usize,
    terms: BTreeMap<(SubsetLabel, SubsetLabel), Rational>,
}

impl BiSymbol {
    pub fn zero(m: usize) -> Self {
        assert!(m <= MAX_DIM);
        BiSymbol { m, terms: BTreeMap::new() }
    }

    pub fn basis(m: usize, t: SubsetLabel, s: SubsetLabel) -> Self {
        let mut b = Self::zero(m);
        b.add_term(t, s, Rational::one());
        b
    }

    /// `Y ⊗ Z`.
    pub fn tensor(y: &ExtElement, z: &ExtElement) -> Result<Self> {
        if y.side() != Side::Dual || z.side() != Side::V || y.dim() != z.dim() {
            return Err(Error::invalid("a symbol is Y ⊗ Z with Y dual-side and Z V-side"));
        }
        let mut b = Self::zero(y.dim());
        for (t, a) in y.terms() {
            for (s, c) in z.terms() {
                b.add_term(*t, *s, a * c);
            }
        }
        Ok(b)
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(SubsetLabel, SubsetLabel), &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, t: SubsetLabel, s: SubsetLabel) -> Rational {
        self.terms.get(&(t, s)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add_term(&mut self, t: SubsetLabel, s: SubsetLabel, c: Rational) {
        if c.is_zero() {
            return;
        }
        let key = (t, s);
        match self.terms.get_mut(&key) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    /// Operator degree of `y_T ⊗ x_S`.
    pub fn term_degree(t: SubsetLabel, s: SubsetLabel) -> i64 {
        t.len() as i64 - s.len() as i64
    }

    pub fn degrees(&self) -> Vec<i64> {
        let mut d: Vec<i64> = self.terms.keys().map(|(t, s)| Self::term_degree(*t, *s)).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn component(&self, d: i64) -> Self {
        self.filter(|t, s| Self::term_degree(t, s) == d)
    }

    pub fn filter(&self, keep: impl Fn(SubsetLabel, SubsetLabel) -> bool) -> Self {
        BiSymbol {
            m: self.m,
            terms: self.terms.iter().filter(|((t, s), _)| keep(*t, *s)).map(|(k, v)| (*k, v.clone())).collect(),
        }
    }

    /// The part with `|T| = k`.
    pub fn order_part(&self, k: usize) -> Self {
        self.filter(|t, _| t.len() == k)
    }

    /// The part with `S = ∅`, kept as a symbol.
    pub fn pi0_symbol(&self) -> Self {
        self.filter(|_, s| s.is_empty())
    }

    /// The projection onto `S(V*[-1]) ⊗ ∧⁰`.
    pub fn pi0(&self) -> ExtElement {
        let mut y = ExtElement::zero(Side::Dual, self.m);
        for ((t, s), c) in &self.terms {
            if s.is_empty() {
                y.add_term(*t, c.clone());
            }
        }
        y
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Self::zero(self.m);
        for ((t, s), v) in &self.terms {
            out.add_term(*t, *s, v * c);
        }
        out
    }

    /// Product in the graded-commutative algebra `S(V*[-1]) ⊗ S(V[1])`:
    /// `(Y⊗Z)(Y'⊗Z') = (−1)^{|Z||Y'|} Y∧Y' ⊗ Z∧Z'`.
    pub fn product(&self, other: &BiSymbol) -> BiSymbol {
        assert_eq!(self.m, other.m);
        let mut out = Self::zero(self.m);
        for ((t, s), a) in &self.terms {
            for ((t2, s2), b) in &other.terms {
                let wt = wedge_sign(*t, *t2);
                let ws = wedge_sign(*s, *s2);
                if wt == 0 || ws == 0 {
                    continue;
                }
                let sign = wt * ws * if (s.len() * t2.len()) % 2 == 1 { -1 } else { 1 };
                let c = a * b;
                out.add_term(t.union(*t2), s.union(*s2), if sign > 0 { c } else { -c });
            }
        }
        out
    }
}

impl Add for BiSymbol {
    type Output = BiSymbol;
    fn add(mut self, rhs: BiSymbol) -> BiSymbol {
        assert_eq!(self.m, rhs.m);
        for ((t, s), c) in rhs.terms {
            self.add_term(t, s, c);
        }
        self
    }
}

impl Sub for BiSymbol {
    type Output = BiSymbol;
    fn sub(self, rhs: BiSymbol) -> BiSymbol {
        self + (-rhs)
    }
}

impl Neg for BiSymbol {
    type Output = BiSymbol;
    fn neg(self) -> BiSymbol {
        self.scale(&(-Rational::one()))
    }
}

impl fmt::Display for BiSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, ((t, s), c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*y{t}⊗x{s}", fmt_rational(c))?;
        }
        Ok(())
    }
}

impl fmt::Debug for BiSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// `Gr(Y ⊗ Z) = i(Z) ∘ j(Y)`.
pub fn gr(sym: &BiSymbol) -> EndOperator {
    let m = sym.dim();
    let mut op = EndOperator::zero(m);
    for ((t, s), c) in sym.terms() {
        for u in SubsetLabel::all(m) {
            let Some((r, sj)) = j_basis(m, *t, u) else { continue };
            let sw = wedge_sign(r, *s);
            if sw == 0 {
                continue;
            }
            let v = if sj * sw > 0 { c.clone() } else { -c.clone() };
            op.add_entry(r.union(*s), u, &v);
        }
    }
    op
}

/// Inverse of [`gr`], by induction along `≺`: the coefficient `a_U` of
/// `y_U` is read off from `L(x_U)` once all `a_T`, `T ⊊ U`, are known.
pub fn fr(op: &EndOperator) -> BiSymbol {
    let m = op.dim();
    let mut labels: Vec<SubsetLabel> = SubsetLabel::all(m).collect();
    labels.sort();
    let mut a: BTreeMap<SubsetLabel, ExtElement> = BTreeMap::new();
    for &u in &labels {
        let mut rest = op.apply(&ExtElement::basis(Side::V, m, u));
        for t in u.subsets() {
            if t == u {
                continue;
            }
            let Some(at) = a.get(&t) else { continue };
            let (r, sj) = j_basis(m, t, u).expect("T ⊆ U");
            let xr = ExtElement::basis(Side::V, m, r).scale(&sign_q((sj < 0) as i64));
            rest = rest - xr.wedge_unchecked(at);
        }
        let (_, diag) = j_basis(m, u, u).expect("j(y_U)(x_U) ≠ 0");
        if !rest.is_zero() {
            a.insert(u, rest.scale(&sign_q((diag < 0) as i64)));
        }
    }
    let mut sym = BiSymbol::zero(m);
    for (t, z) in a {
        for (s, c) in z.terms() {
            sym.add_term(t, *s, c.clone());
        }
    }
    sym
}

/// `Gl(Y ⊗ Z) = (−1)^{|Z||Y|} j(Y) ∘ i(Z)`.
pub fn gl(sym: &BiSymbol) -> EndOperator {
    let m = sym.dim();
    let mut op = EndOperator::zero(m);
    for ((t, s), c) in sym.terms() {
        let y = ExtElement::basis(Side::Dual, m, *t);
        let z = ExtElement::basis(Side::V, m, *s);
        let sign = sign_q((t.len() * s.len()) as i64);
        let piece = j_op(&y).unwrap().compose(&i_op(&z).unwrap());
        op = op + piece.scale(&(c * sign));
    }
    op
}

/// Inverse of [`gl`]. `Fr ∘ Gl` preserves `|T|` up to strictly lower
/// terms with an invertible diagonal, so back-substitution from the top
/// order down solves it exactly.
pub fn fl(op: &EndOperator) -> BiSymbol {
    let m = op.dim();
    let mut rest = fr(op);
    let mut out = BiSymbol::zero(m);
    for k in (0..=m).rev() {
        let level: Vec<((SubsetLabel, SubsetLabel), Rational)> =
            rest.terms().filter(|((t, _), _)| t.len() == k).map(|(key, c)| (*key, c.clone())).collect();
        for ((t, s), c) in level {
            let b = BiSymbol::basis(m, t, s);
            let image = fr(&gl(&b));
            let diag = image.coeff(t, s);
            debug_assert!(!diag.is_zero());
            let coef = c / diag;
            rest = rest - image.scale(&coef);
            out.add_term(t, s, coef);
        }
    }
    debug_assert!(rest.is_zero());
    out
}

/// Graded commutator of the operators of two symbols, as a symbol.
pub fn bracket_symbol(a: &BiSymbol, b: &BiSymbol) -> BiSymbol {
    fr(&gr(a).bracket(&gr(b)))
}

fn check_d1(l: &BiSymbol) -> Result<()> {
    if l.terms().any(|((t, _), _)| t.len() != 1) {
        return Err(Error::invalid("L must lie in D_1"));
    }
    Ok(())
}

/// Right adjoint action of `L ∈ D_1` on symbols, extended from the
/// generators `y_i ⊗ 1` and `1 ⊗ x_i` as a right derivation:
/// `ad(L)(a·b) = a·ad(L)(b) + (−1)^{|L||b|} ad(L)(a)·b`.
pub fn ad(l: &BiSymbol, d: &BiSymbol) -> Result<BiSymbol> {
    check_d1(l)?;
    let m = l.dim();
    let mut out = BiSymbol::zero(m);
    for dl in l.degrees() {
        let lc = l.component(dl);
        let lop = gr(&lc);
        let mut y_img = Vec::with_capacity(m);
        let mut x_img = Vec::with_capacity(m);
        for i in 1..=m {
            let yi = BiSymbol::basis(m, SubsetLabel::single(i), SubsetLabel::EMPTY);
            let xi = BiSymbol::basis(m, SubsetLabel::EMPTY, SubsetLabel::single(i));
            y_img.push(fr(&lop.bracket(&gr(&yi))));
            x_img.push(fr(&lop.bracket(&gr(&xi))));
        }
        for ((t, s), c) in d.terms() {
            // generators in product order: y_t1 … y_tk x_s1 … x_sl
            let mut gens: Vec<(BiSymbol, &BiSymbol, i64)> = Vec::new();
            for i in t.indices() {
                gens.push((BiSymbol::basis(m, SubsetLabel::single(i), SubsetLabel::EMPTY), &y_img[i - 1], 1));
            }
            for i in s.indices() {
                gens.push((BiSymbol::basis(m, SubsetLabel::EMPTY, SubsetLabel::single(i)), &x_img[i - 1], -1));
            }
            for k in 0..gens.len() {
                let right_deg: i64 = gens[k + 1..].iter().map(|g| g.2).sum();
                let mut acc = BiSymbol::basis(m, SubsetLabel::EMPTY, SubsetLabel::EMPTY);
                for (idx, g) in gens.iter().enumerate() {
                    acc = acc.product(if idx == k { g.1 } else { &g.0 });
                }
                out = out + acc.scale(&(c * sign_q(dl * right_deg)));
            }
        }
    }
    Ok(out)
}

/// Elements of `D_1^{⊗k}`: words of basis symbols `y_i ⊗ x_S`, written left to right.
pub type D1Tensor = BTreeMap<Vec<(SubsetLabel, SubsetLabel)>, Rational>;

fn tensor_add(t: &mut D1Tensor, key: Vec<(SubsetLabel, SubsetLabel)>, c: Rational) {
    if c.is_zero() {
        return;
    }
    let e = t.entry(key.clone()).or_insert_with(Rational::zero);
    *e += c;
    if e.is_zero() {
        t.remove(&key);
    }
}

/// Adjoint action of `L ∈ D_1` on `D_1^{⊗k}`, one factor at a time, with the
/// sign of `L` passing the factors to the right of the one it acts on.
pub fn adbar(l: &BiSymbol, w: &D1Tensor) -> Result<D1Tensor> {
    check_d1(l)?;
    let mut out = D1Tensor::new();
    for dl in l.degrees() {
        let lc = l.component(dl);
        let lop = gr(&lc);
        for (word, c) in w {
            if word.iter().any(|(t, _)| t.len() != 1) {
                return Err(Error::invalid("tensor factors must lie in D_1"));
            }
            for k in 0..word.len() {
                let right_deg: i64 = word[k + 1..].iter().map(|(t, s)| BiSymbol::term_degree(*t, *s)).sum();
                let factor = BiSymbol::basis(l.dim(), word[k].0, word[k].1);
                let br = fr(&lop.bracket(&gr(&factor)));
                let sign = sign_q(dl * right_deg);
                for ((t, s), v) in br.terms() {
                    let mut key = word.clone();
                    key[k] = (*t, *s);
                    tensor_add(&mut out, key, c * v * &sign);
                }
            }
        }
    }
    Ok(out)
}

/// Multiplication `D_1^{⊗k} → D_k` in the symbol algebra.
pub fn p_map(m: usize, w: &D1Tensor) -> BiSymbol {
    let mut out = BiSymbol::zero(m);
    for (word, c) in w {
        let mut acc = BiSymbol::basis(m, SubsetLabel::EMPTY, SubsetLabel::EMPTY);
        for (t, s) in word {
            acc = acc.product(&BiSymbol::basis(m, *t, *s));
        }
        out = out + acc.scale(c);
    }
    out
}

/// `1^m(H) = (−1)^{m|H|} y_m ∧ … ∧ y_1 ⊗ H ⊗ x_1 ∧ … ∧ x_m`, returned as
/// the symbol `y_m ∧ … ∧ y_1 ⊗ (±H)`; the trailing top form is implicit.
pub fn one_m(h: &ExtElement) -> BiSymbol {
    let m = h.dim();
    let top = SubsetLabel::top(m);
    let reversal = sign_q((m * m.saturating_sub(1) / 2) as i64);
    let mut out = BiSymbol::zero(m);
    for (s, c) in h.terms() {
        let sign = sign_q((m * s.len()) as i64);
        out.add_term(top, *s, c * &sign * &reversal);
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

    #[test]
    fn gr_of_unit_is_identity() {
        let one = BiSymbol::basis(2, SubsetLabel::EMPTY, SubsetLabel::EMPTY);
        assert_eq!(gr(&one), EndOperator::identity(2));
        assert_eq!(gl(&one), EndOperator::identity(2));
    }

    #[test]
    fn fr_inverts_gr_on_basis() {
        for m in 0..=3 {
            for t in SubsetLabel::all(m) {
                for s in SubsetLabel::all(m) {
                    let b = BiSymbol::basis(m, t, s);
                    assert_eq!(fr(&gr(&b)), b);
                    assert_eq!(fl(&gl(&b)), b);
                }
            }
        }
    }

    #[test]
    fn gl_and_gr_on_one_generator() {
        let y = BiSymbol::basis(1, lab(&[1], 1), lab(&[1], 1));
        let r = gr(&y);
        let l = gl(&y);
        // Gr: x1 ↦ x1, 1 ↦ 0.  Gl = −j∘i: 1 ↦ −1, x1 ↦ 0.
        assert_eq!(*r.entry(lab(&[1], 1), lab(&[1], 1)), qi(1));
        assert_eq!(*l.entry(SubsetLabel::EMPTY, SubsetLabel::EMPTY), qi(-1));
        assert!(l.entry(lab(&[1], 1), lab(&[1], 1)).is_zero());
    }

    #[test]
    fn one_m_examples() {
        let m = 2;
        let x1 = ExtElement::generator(Side::V, m, 1);
        // y2∧y1 = −y_{12}; sign (−1)^{2·1} = +1
        assert_eq!(one_m(&x1).coeff(lab(&[1, 2], 2), lab(&[1], 2)), qi(-1));
        let x1 = ExtElement::generator(Side::V, 3, 1);
        // y3∧y2∧y1 = −y_{123}; sign (−1)^{3} = −1
        assert_eq!(one_m(&x1).coeff(lab(&[1, 2, 3], 3), lab(&[1], 3)), qi(1));
    }

    #[test]
    fn product_is_graded_commutative() {
        let m = 2;
        for a in SubsetLabel::all(m) {
            for b in SubsetLabel::all(m) {
                for c in SubsetLabel::all(m) {
                    for d in SubsetLabel::all(m) {
                        let u = BiSymbol::basis(m, a, b);
                        let v = BiSymbol::basis(m, c, d);
                        let du = BiSymbol::term_degree(a, b);
                        let dv = BiSymbol::term_degree(c, d);
                        assert_eq!(u.product(&v), v.product(&u).scale(&sign_q(du * dv)));
                    }
                }
            }
        }
    }
}
