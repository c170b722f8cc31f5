//! Hochschild chains of `R = Q[x_1..x_d]` with shuffle product, cut
//! coproduct, antipode, the HKR map and the connections `α_R`, `α_L`.
//!
//! Chains are stored with every tensor factor a monic monomial, which is a
//! basis of `R^{⊗(n+1)}`. Tensors over `R` move every leading factor of a
//! later leg (and every form coefficient) into the first factor of leg 0.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graded::{fmt_rational, is_neg, qi, sign_q, sort_sign, Rational, SubsetLabel};
use crate::poly::{Exponents, Poly};

/// Tensor word of monic monomials `r_0 ⊗ ... ⊗ r_k`.
pub type Word = Vec<Exponents>;

fn mono_mul(a: &Exponents, b: &Exponents) -> Exponents {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn is_unit(e: &Exponents) -> bool {
    e.iter().all(|&k| k == 0)
}

/// `d(x^e) = Σ_j c_j x^{e_j} dx_j`, variables 1-based.
fn mono_diff(e: &Exponents) -> Vec<(usize, Rational, Exponents)> {
    let mut out = Vec::new();
    for (i, &k) in e.iter().enumerate() {
        if k > 0 {
            let mut f = e.clone();
            f[i] -= 1;
            out.push((i + 1, qi(k as i64), f));
        }
    }
    out
}

fn fmt_mono(e: &Exponents) -> String {
    Poly::monomial(e.len(), e.clone(), Rational::one()).to_string()
}

fn fmt_word(w: &Word) -> String {
    format!("w[{}]", w.iter().map(fmt_mono).collect::<Vec<_>>().join("; "))
}

fn fmt_coeff_prefix(f: &mut fmt::Formatter<'_>, k: usize, c: &Rational) -> fmt::Result {
    let neg = is_neg(c);
    let abs = if neg { -c.clone() } else { c.clone() };
    match (k, neg) {
        (0, true) => write!(f, "-")?,
        (0, false) => {}
        (_, true) => write!(f, " - ")?,
        (_, false) => write!(f, " + ")?,
    }
    if !abs.is_one() {
        write!(f, "{}*", fmt_rational(&abs))?;
    }
    Ok(())
}

/// A single tensor word `p_0 ⊗ ... ⊗ p_k` of polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainWord {
    factors: Vec<Poly>,
}

impl ChainWord {
    pub fn new(factors: Vec<Poly>) -> Result<Self> {
        let Some(first) = factors.first() else {
            return Err(Error::invalid("a chain word needs at least one factor"));
        };
        let d = first.nvars();
        if factors.iter().any(|p| p.nvars() != d) {
            return Err(Error::invalid("chain word factors use different variable counts"));
        }
        Ok(ChainWord { factors })
    }

    pub fn factors(&self) -> &[Poly] {
        &self.factors
    }

    /// Homological degree `−k`.
    pub fn degree(&self) -> i64 {
        -(self.factors.len() as i64 - 1)
    }
}

/// Finite rational combination of monomial words.
#[derive(Clone, PartialEq, Eq)]
pub struct Chain {
    nvars: usize,
    terms: BTreeMap<Word, Rational>,
}

impl Chain {
    pub fn zero(nvars: usize) -> Self {
        Chain { nvars, terms: BTreeMap::new() }
    }

    /// Expand a word of polynomials multilinearly.
    pub fn from_word(word: &ChainWord) -> Self {
        let d = word.factors[0].nvars();
        let mut partial: Vec<(Word, Rational)> = vec![(Vec::new(), Rational::one())];
        for p in &word.factors {
            let mut next = Vec::new();
            for (w, c) in &partial {
                for (e, v) in p.terms() {
                    let mut w2 = w.clone();
                    w2.push(e.clone());
                    next.push((w2, c * v));
                }
            }
            partial = next;
        }
        let mut out = Chain::zero(d);
        for (w, c) in partial {
            out.add_term(w, c);
        }
        out
    }

    pub fn monomial(nvars: usize, word: Word, c: Rational) -> Self {
        let mut out = Chain::zero(nvars);
        out.add_term(word, c);
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Rational)> {
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

    pub fn add_term(&mut self, word: Word, c: Rational) {
        if c.is_zero() {
            return;
        }
        assert!(!word.is_empty(), "empty chain word");
        debug_assert!(word.iter().all(|e| e.len() == self.nvars));
        match self.terms.get_mut(&word) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&word);
                }
            }
            None => {
                self.terms.insert(word, c);
            }
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut out = Chain::zero(self.nvars);
        for (w, v) in &self.terms {
            out.add_term(w.clone(), v * c);
        }
        out
    }

    pub fn add(&self, other: &Chain) -> Chain {
        assert_eq!(self.nvars, other.nvars);
        let mut out = self.clone();
        for (w, v) in &other.terms {
            out.add_term(w.clone(), v.clone());
        }
        out
    }

    pub fn sub(&self, other: &Chain) -> Chain {
        self.add(&other.scale(&-Rational::one()))
    }

    fn map_words(&self, mut f: impl FnMut(&Word, &Rational, &mut Chain)) -> Chain {
        let mut out = Chain::zero(self.nvars);
        for (w, c) in &self.terms {
            f(w, c, &mut out);
        }
        out
    }
}

impl fmt::Display for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (w, c)) in self.terms.iter().enumerate() {
            fmt_coeff_prefix(f, k, c)?;
            write!(f, "{}", fmt_word(w))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Chain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// The unit `ε: R → C⁰`.
pub fn unit(p: &Poly) -> Chain {
    Chain::from_word(&ChainWord { factors: vec![p.clone()] })
}

/// The counit `η`: projection to `C⁰ = R`.
pub fn counit(c: &Chain) -> Poly {
    let mut out = Poly::zero(c.nvars);
    for (w, v) in &c.terms {
        if w.len() == 1 {
            out.add_term(w[0].clone(), v.clone());
        }
    }
    out
}

fn merged(w: &Word, i: usize) -> Word {
    let mut out = Vec::with_capacity(w.len() - 1);
    out.extend_from_slice(&w[..i]);
    out.push(mono_mul(&w[i], &w[i + 1]));
    out.extend_from_slice(&w[i + 2..]);
    out
}

/// Hochschild differential with the cyclic term `(−1)^n r_n r_0 ⊗ ... ⊗ r_{n−1}`.
pub fn hoch_diff(c: &Chain) -> Chain {
    c.map_words(|w, v, out| {
        let n = w.len() - 1;
        if n == 0 {
            return;
        }
        for i in 0..n {
            out.add_term(merged(w, i), v * sign_q(i as i64));
        }
        let mut cyc = Vec::with_capacity(n);
        cyc.push(mono_mul(&w[n], &w[0]));
        cyc.extend_from_slice(&w[1..n]);
        out.add_term(cyc, v * sign_q(n as i64));
    })
}

/// Bar differential on words `r_0 ⊗ ... ⊗ r_{n+1}`, no cyclic term.
pub fn bar_diff(c: &Chain) -> Result<Chain> {
    if c.terms.keys().any(|w| w.len() < 2) {
        return Err(Error::invalid("bar words need at least two factors"));
    }
    Ok(c.map_words(|w, v, out| {
        for i in 0..w.len() - 1 {
            out.add_term(merged(w, i), v * sign_q(i as i64));
        }
    }))
}

/// All shuffles of `a` and `b` with their signs, appended after `head`.
fn shuffles(a: &[Exponents], b: &[Exponents], head: Word, sign: i64, out: &mut Vec<(Word, i64)>) {
    match (a.split_first(), b.split_first()) {
        (None, None) => out.push((head, sign)),
        (Some((x, rest)), None) => {
            let mut h = head;
            h.push(x.clone());
            h.extend_from_slice(rest);
            out.push((h, sign));
        }
        (None, Some((y, rest))) => {
            let mut h = head;
            h.push(y.clone());
            h.extend_from_slice(rest);
            out.push((h, sign));
        }
        (Some((x, ra)), Some((y, rb))) => {
            let mut h1 = head.clone();
            h1.push(x.clone());
            shuffles(ra, b, h1, sign, out);
            // passing y over every remaining element of a
            let mut h2 = head;
            h2.push(y.clone());
            let s = if a.len() % 2 == 0 { sign } else { -sign };
            shuffles(a, rb, h2, s, out);
        }
    }
}

fn shuffle_words(a: &Word, b: &Word) -> Vec<(Word, i64)> {
    let mut out = Vec::new();
    shuffles(&a[1..], &b[1..], vec![mono_mul(&a[0], &b[0])], 1, &mut out);
    out
}

/// Signed shuffle product.
pub fn shuffle_mul(a: &Chain, b: &Chain) -> Chain {
    assert_eq!(a.nvars, b.nvars);
    let mut out = Chain::zero(a.nvars);
    for (wa, ca) in &a.terms {
        for (wb, cb) in &b.terms {
            let c = ca * cb;
            for (w, s) in shuffle_words(wa, wb) {
                out.add_term(w, &c * qi(s));
            }
        }
    }
    out
}

/// `S(r_0 ⊗ ... ⊗ r_n) = (−1)^{n(n+1)/2} r_0 ⊗ r_n ⊗ ... ⊗ r_1`.
pub fn antipode(c: &Chain) -> Chain {
    c.map_words(|w, v, out| {
        let n = w.len() - 1;
        let mut r = Vec::with_capacity(w.len());
        r.push(w[0].clone());
        r.extend(w[1..].iter().rev().cloned());
        out.add_term(r, v * sign_q((n * (n + 1) / 2) as i64));
    })
}

/// Differential form `Σ f_S dx_S` with polynomial coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct PolyForm {
    nvars: usize,
    terms: BTreeMap<SubsetLabel, Poly>,
}

impl PolyForm {
    pub fn zero(nvars: usize) -> Self {
        PolyForm { nvars, terms: BTreeMap::new() }
    }

    /// `f dx_S`; errors when `S` names a variable beyond `nvars`.
    pub fn term(nvars: usize, label: SubsetLabel, f: Poly) -> Result<Self> {
        if label.max_index() > nvars || f.nvars() != nvars {
            return Err(Error::invalid(format!("form label {label} outside 1..={nvars}")));
        }
        let mut out = Self::zero(nvars);
        out.add_term(label, &f);
        Ok(out)
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&SubsetLabel, &Poly)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, label: SubsetLabel, f: &Poly) {
        let sum = match self.terms.get(&label) {
            Some(g) => g + f,
            None => f.clone(),
        };
        if sum.is_zero() {
            self.terms.remove(&label);
        } else {
            self.terms.insert(label, sum);
        }
    }

    pub fn add(&self, other: &PolyForm) -> PolyForm {
        let mut out = self.clone();
        for (l, f) in &other.terms {
            out.add_term(*l, f);
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> PolyForm {
        let mut out = Self::zero(self.nvars);
        for (l, f) in &self.terms {
            out.add_term(*l, &f.scale(c));
        }
        out
    }

    /// `J`: multiply `i`-forms by `(−1)^i`.
    pub fn j(&self) -> PolyForm {
        let mut out = Self::zero(self.nvars);
        for (l, f) in &self.terms {
            out.add_term(*l, &f.scale(&sign_q(l.len() as i64)));
        }
        out
    }
}

impl fmt::Display for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (l, p)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            let dx: Vec<String> = l.indices().iter().map(|i| format!("dx{i}")).collect();
            if dx.is_empty() {
                write!(f, "({p})")?;
            } else {
                write!(f, "({p}) {}", dx.join("∧"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for PolyForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn label_of(seq: &[usize], nvars: usize) -> Option<(SubsetLabel, i64)> {
    let s = sort_sign(seq);
    if s == 0 {
        return None;
    }
    let mut sorted = seq.to_vec();
    sorted.sort_unstable();
    Some((SubsetLabel::from_indices(&sorted, nvars).expect("variable index in range"), s))
}

/// `r_0 dr_1 ∧ ... ∧ dr_n` as `(dx-sequence, coefficient, monomial)` triples.
fn expand_forms(w: &Word) -> Vec<(Vec<usize>, Rational, Exponents)> {
    let mut acc = vec![(Vec::new(), Rational::one(), w[0].clone())];
    for r in &w[1..] {
        let diffs = mono_diff(r);
        let mut next = Vec::new();
        for (seq, c, e) in &acc {
            for (j, k, f) in &diffs {
                if seq.contains(j) {
                    continue;
                }
                let mut s2 = seq.clone();
                s2.push(*j);
                next.push((s2, c * k, mono_mul(e, f)));
            }
        }
        acc = next;
    }
    acc
}

/// `I_HKR(r_0 ⊗ ... ⊗ r_n) = 1/n! r_0 dr_1 ∧ ... ∧ dr_n`.
pub fn hkr(c: &Chain) -> PolyForm {
    let d = c.nvars;
    let mut out = PolyForm::zero(d);
    for (w, v) in &c.terms {
        let n = w.len() - 1;
        let inv = (1..=n as i64).fold(v.clone(), |acc, i| acc / qi(i));
        for (seq, k, e) in expand_forms(w) {
            if let Some((label, s)) = label_of(&seq, d) {
                out.add_term(label, &Poly::monomial(d, e, &inv * k * qi(s)));
            }
        }
    }
    out
}

/// `φ(f dx_{i_1} ∧ ... ∧ dx_{i_k}) = Σ_σ sgn(σ) f ⊗ x_{i_σ(1)} ⊗ ... ⊗ x_{i_σ(k)}`.
pub fn antisym(form: &PolyForm) -> Chain {
    let d = form.nvars;
    let mut out = Chain::zero(d);
    for (label, f) in &form.terms {
        let idx = label.indices();
        for perm in permutations(idx.len()) {
            let seq: Vec<usize> = perm.iter().map(|&p| idx[p]).collect();
            let s = sort_sign(&seq);
            let gens: Vec<Exponents> = seq
                .iter()
                .map(|&i| {
                    let mut e = vec![0; d];
                    e[i - 1] = 1;
                    e
                })
                .collect();
            for (e, c) in f.terms() {
                let mut w = vec![e.clone()];
                w.extend(gens.iter().cloned());
                out.add_term(w, c * qi(s));
            }
        }
    }
    out
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    use itertools::Itertools;
    (0..k).permutations(k).collect()
}

/// Element of `C^{⊗_R legs} ⊗_R Ω[1]^{⊗i}`: each key holds the chain legs
/// and the sequence of `dx_j` factors.
#[derive(Clone, PartialEq, Eq)]
pub struct Tensor {
    nvars: usize,
    legs: usize,
    terms: BTreeMap<(Vec<Word>, Vec<usize>), Rational>,
}

impl Tensor {
    pub fn zero(nvars: usize, legs: usize) -> Self {
        Tensor { nvars, legs, terms: BTreeMap::new() }
    }

    pub fn from_chain(c: &Chain) -> Self {
        let mut out = Self::zero(c.nvars, 1);
        for (w, v) in &c.terms {
            out.push(vec![w.clone()], Vec::new(), v.clone());
        }
        out
    }

    pub fn legs(&self) -> usize {
        self.legs
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(Vec<Word>, Vec<usize>), &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Add `c · legs ⊗ dx`, moving the leading factor of every later leg
    /// into `r_0` of the first.
    pub fn push(&mut self, mut legs: Vec<Word>, dx: Vec<usize>, c: Rational) {
        if c.is_zero() {
            return;
        }
        debug_assert_eq!(legs.len(), self.legs);
        for i in 1..legs.len() {
            if !is_unit(&legs[i][0]) {
                let lead = std::mem::replace(&mut legs[i][0], vec![0; self.nvars]);
                legs[0][0] = mono_mul(&legs[0][0], &lead);
            }
        }
        let key = (legs, dx);
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

    /// Like [`Tensor::push`], multiplying `r_0` by the monomial `e` first.
    fn push_times(&mut self, mut legs: Vec<Word>, e: &Exponents, dx: Vec<usize>, c: Rational) {
        legs[0][0] = mono_mul(&legs[0][0], e);
        self.push(legs, dx, c);
    }

    pub fn add(&self, other: &Tensor) -> Tensor {
        assert_eq!(self.legs, other.legs);
        let mut out = self.clone();
        for ((l, dx), v) in &other.terms {
            out.push(l.clone(), dx.clone(), v.clone());
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Tensor {
        let mut out = Self::zero(self.nvars, self.legs);
        for ((l, dx), v) in &self.terms {
            out.push(l.clone(), dx.clone(), v * c);
        }
        out
    }

    pub fn sub(&self, other: &Tensor) -> Tensor {
        self.add(&other.scale(&-Rational::one()))
    }

    /// Apply a chain map to leg `leg`; `sign(key)` gives the Koszul sign.
    pub fn map_leg(&self, leg: usize, f: impl Fn(&Chain) -> Chain, sign: impl Fn(&[Word]) -> i64) -> Tensor {
        let mut out = Self::zero(self.nvars, self.legs);
        for ((legs, dx), v) in &self.terms {
            let s = sign(legs);
            let image = f(&Chain::monomial(self.nvars, legs[leg].clone(), Rational::one()));
            for (w, c) in image.terms() {
                let mut l2 = legs.clone();
                l2[leg] = w.clone();
                out.push(l2, dx.clone(), v * c * qi(s));
            }
        }
        out
    }

    /// Sort the `dx` factors into a wedge monomial, dropping repeats.
    pub fn wedge_project(&self) -> Tensor {
        let mut out = Self::zero(self.nvars, self.legs);
        for ((legs, dx), v) in &self.terms {
            let s = sort_sign(dx);
            if s != 0 {
                let mut sorted = dx.clone();
                sorted.sort_unstable();
                out.push(legs.clone(), sorted, v * qi(s));
            }
        }
        out
    }

    /// `C ⊗ τ` on the last two `dx` factors, `τ(a ⊗ b) = −b ⊗ a`.
    pub fn swap_last_forms(&self) -> Tensor {
        let mut out = Self::zero(self.nvars, self.legs);
        for ((legs, dx), v) in &self.terms {
            let mut d2 = dx.clone();
            let n = d2.len();
            assert!(n >= 2, "swap needs two form factors");
            d2.swap(n - 2, n - 1);
            out.push(legs.clone(), d2, -v.clone());
        }
        out
    }

    /// Collapse a one-leg tensor with no form factors back to a chain.
    pub fn to_chain(&self) -> Chain {
        assert_eq!(self.legs, 1);
        let mut out = Chain::zero(self.nvars);
        for ((legs, dx), v) in &self.terms {
            assert!(dx.is_empty(), "tensor still carries form factors");
            out.add_term(legs[0].clone(), v.clone());
        }
        out
    }
}

impl fmt::Display for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, ((legs, dx), c)) in self.terms.iter().enumerate() {
            fmt_coeff_prefix(f, k, c)?;
            let mut parts: Vec<String> = legs.iter().map(fmt_word).collect();
            parts.extend(dx.iter().map(|j| format!("dx{j}")));
            write!(f, "{}", parts.join(" ⊗ "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Tensor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Cut coproduct `Σ_p r_0 ⊗ .. ⊗ r_p ⊗_R 1 ⊗ r_{p+1} ⊗ .. ⊗ r_n`.
pub fn cut_coprod(c: &Chain) -> Tensor {
    cut_leg(&Tensor::from_chain(c), 0)
}

/// Cut leg `leg` in two, giving one more leg.
pub fn cut_leg(t: &Tensor, leg: usize) -> Tensor {
    let mut out = Tensor::zero(t.nvars, t.legs + 1);
    for ((legs, dx), v) in &t.terms {
        let w = &legs[leg];
        for p in 0..w.len() {
            let left = w[..=p].to_vec();
            let mut right = vec![vec![0; t.nvars]];
            right.extend_from_slice(&w[p + 1..]);
            let mut l2 = legs[..leg].to_vec();
            l2.push(left);
            l2.push(right);
            l2.extend_from_slice(&legs[leg + 1..]);
            out.push(l2, dx.clone(), v.clone());
        }
    }
    out
}

/// Which connection to apply.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Connection {
    Right,
    Left,
}

/// `α(w)` as `(word, dx index, coefficient)` with the `dr` coefficient
/// already moved into `r_0`.
fn alpha_word(w: &Word, conn: Connection) -> Vec<(Word, usize, Rational)> {
    let n = w.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    let (rest, r, sign) = match conn {
        Connection::Right => (w[..n].to_vec(), &w[n], Rational::one()),
        Connection::Left => {
            let mut rest = vec![w[0].clone()];
            rest.extend_from_slice(&w[2..]);
            (rest, &w[1], sign_q(n as i64 - 1))
        }
    };
    mono_diff(r)
        .into_iter()
        .map(|(j, k, e)| {
            let mut out = rest.clone();
            out[0] = mono_mul(&out[0], &e);
            (out, j, &sign * k)
        })
        .collect()
}

/// `α ⊗ Ω^{⊗i}` on a one-leg tensor; the new form factor goes first.
pub fn alpha(t: &Tensor, conn: Connection) -> Tensor {
    assert_eq!(t.legs, 1);
    let mut out = Tensor::zero(t.nvars, 1);
    for ((legs, dx), v) in &t.terms {
        for (w, j, k) in alpha_word(&legs[0], conn) {
            let mut d2 = vec![j];
            d2.extend_from_slice(dx);
            out.push(vec![w], d2, v * k);
        }
    }
    out
}

/// `α_R(r_0 ⊗ ... ⊗ r_n) = r_0 ⊗ ... ⊗ r_{n−1} ⊗ dr_n`.
pub fn alpha_r(c: &Chain) -> Tensor {
    alpha(&Tensor::from_chain(c), Connection::Right)
}

/// `α_L(r_0 ⊗ ... ⊗ r_n) = (−1)^{n−1} r_0 ⊗ r_2 ⊗ ... ⊗ r_n ⊗ dr_1`.
pub fn alpha_l(c: &Chain) -> Tensor {
    alpha(&Tensor::from_chain(c), Connection::Left)
}

/// `exp(α_R) = Σ_i α_R^i / i!`, form factors wedged.
pub fn exp_alpha_r(c: &Chain) -> Tensor {
    let mut term = Tensor::from_chain(c);
    let mut out = term.clone();
    let mut i = 0i64;
    loop {
        term = alpha(&term, Connection::Right);
        if term.is_zero() {
            break;
        }
        i += 1;
        out = out.add(&term.wedge_project().scale(&(1..=i).fold(Rational::one(), |a, k| a / qi(k))));
    }
    out.wedge_project()
}

/// `(C ⊗ I_HKR) ∘ C`, form factors wedged.
pub fn cut_then_hkr(c: &Chain) -> Tensor {
    let mut out = Tensor::zero(c.nvars, 1);
    for ((legs, _), v) in &cut_coprod(c).terms {
        let form = hkr(&Chain::monomial(c.nvars, legs[1].clone(), Rational::one()));
        for (label, f) in &form.terms {
            for (e, k) in f.terms() {
                out.push_times(vec![legs[0].clone()], e, label.indices(), v * k);
            }
        }
    }
    out
}

/// `m ⊗ Ω^{⊗i}` on a two-leg tensor.
pub fn mul_legs(t: &Tensor) -> Tensor {
    assert_eq!(t.legs, 2);
    let mut out = Tensor::zero(t.nvars, 1);
    for ((legs, dx), v) in &t.terms {
        for (w, s) in shuffle_words(&legs[0], &legs[1]) {
            out.push(vec![w], dx.clone(), v * qi(s));
        }
    }
    out
}

/// `(α ⊗ C + C ⊗ α)` on a two-leg tensor with no form factors; the form
/// produced on the left leg passes the right leg with sign `(−1)^q`.
pub fn alpha_on_pair(t: &Tensor, conn: Connection) -> Tensor {
    assert_eq!(t.legs, 2);
    let mut out = Tensor::zero(t.nvars, 2);
    for ((legs, dx), v) in &t.terms {
        assert!(dx.is_empty());
        let q = legs[1].len() - 1;
        for (w, j, k) in alpha_word(&legs[0], conn) {
            out.push(vec![w, legs[1].clone()], vec![j], v * k * sign_q(q as i64));
        }
        for (w, j, k) in alpha_word(&legs[1], conn) {
            out.push(vec![legs[0].clone(), w], vec![j], v * k);
        }
    }
    out
}

/// Pair `a ⊗_R b` as a two-leg tensor.
pub fn pair(a: &Chain, b: &Chain) -> Tensor {
    let mut out = Tensor::zero(a.nvars, 2);
    for (wa, ca) in &a.terms {
        for (wb, cb) in &b.terms {
            out.push(vec![wa.clone(), wb.clone()], Vec::new(), ca * cb);
        }
    }
    out
}

/// `(d ⊗ 1 + 1 ⊗ d)` with the Koszul sign `(−1)^{|a|}` on the second leg.
pub fn diff_on_pair(t: &Tensor) -> Tensor {
    let first = t.map_leg(0, hoch_diff, |_| 1);
    let second = t.map_leg(1, hoch_diff, |legs| if (legs[0].len() - 1) % 2 == 0 { 1 } else { -1 });
    first.add(&second)
}

/// `m ∘ (S ⊗ 1) ∘ C`, whose comparison with `ε ∘ η` is the antipode axiom.
pub fn antipode_convolution(c: &Chain) -> Chain {
    mul_legs(&cut_coprod(c).map_leg(0, antipode, |_| 1)).to_chain()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::q;

    fn x(d: usize, i: usize) -> Poly {
        Poly::var(d, i)
    }

    fn word(ps: Vec<Poly>) -> Chain {
        Chain::from_word(&ChainWord::new(ps).unwrap())
    }

    #[test]
    fn differential_examples() {
        let d = 2;
        let one = Poly::one(d);
        // d(r0 ⊗ r1) = 0 for commuting factors
        assert!(hoch_diff(&word(vec![x(d, 1), x(d, 2)])).is_zero());
        let c = word(vec![one.clone(), x(d, 1), x(d, 2)]);
        let want = word(vec![x(d, 1), x(d, 2)])
            .sub(&word(vec![one.clone(), &x(d, 1) * &x(d, 2)]))
            .add(&word(vec![x(d, 2), x(d, 1)]));
        assert_eq!(hoch_diff(&c), want);
        assert!(bar_diff(&word(vec![one.clone()])).is_err());
        assert!(bar_diff(&word(vec![one.clone(), one.clone(), one.clone()])).unwrap().is_zero());
    }

    #[test]
    fn shuffle_and_cut_examples() {
        let d = 3;
        let (a, b, c) = (x(d, 1), x(d, 2), x(d, 3));
        let a2 = Poly::var(d, 1);
        let lhs = shuffle_mul(&word(vec![a.clone(), b.clone()]), &word(vec![a2.clone(), c.clone()]));
        let aa = &a * &a2;
        let want = word(vec![aa.clone(), b.clone(), c.clone()]).sub(&word(vec![aa, c.clone(), b.clone()]));
        assert_eq!(lhs, want);
        let cut = cut_coprod(&word(vec![a.clone(), b.clone()]));
        assert_eq!(cut.terms().count(), 2);
        let s = antipode(&word(vec![a.clone(), b.clone(), c.clone()]));
        assert_eq!(s, word(vec![a, c, b]).scale(&qi(-1)));
    }

    #[test]
    fn hkr_examples() {
        let d = 2;
        let one = Poly::one(d);
        let form = hkr(&word(vec![one.clone(), x(d, 1), x(d, 2)]));
        let want = PolyForm::term(d, SubsetLabel::from_indices(&[1, 2], d).unwrap(), Poly::constant(d, q(1, 2))).unwrap();
        assert_eq!(form, want);
        assert!(hkr(&word(vec![one.clone(), x(d, 1), x(d, 1)])).is_zero());
        let dxdy = PolyForm::term(d, SubsetLabel::from_indices(&[1, 2], d).unwrap(), one.clone()).unwrap();
        let phi = antisym(&dxdy);
        assert_eq!(phi, word(vec![one.clone(), x(d, 1), x(d, 2)]).sub(&word(vec![one, x(d, 2), x(d, 1)])));
        assert_eq!(hkr(&phi), dxdy);
    }

    #[test]
    fn connection_examples() {
        let d = 2;
        let r0 = &x(d, 1) + &Poly::one(d);
        let r1 = &x(d, 2) * &x(d, 2);
        let r2 = x(d, 1);
        let ar = alpha_r(&word(vec![r0.clone(), r1.clone()]));
        assert_eq!(ar.to_string(), "2*w[x2] ⊗ dx2 + 2*w[x1*x2] ⊗ dx2");
        let al = alpha_l(&word(vec![r0.clone(), r1, r2]));
        assert_eq!(al.to_string(), "-2*w[x2; x1] ⊗ dx2 - 2*w[x1*x2; x1] ⊗ dx2");
        let e = exp_alpha_r(&word(vec![r0.clone(), x(d, 2)]));
        assert_eq!(e, cut_then_hkr(&word(vec![r0, x(d, 2)])));
    }
}
