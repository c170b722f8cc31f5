//! The duality isomorphism `γ` and its inverse `ζ`, the exterior coproduct,
//! and the contraction of its right leg.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::graded::{sign_q, wedge_sign, Rational, SubsetLabel};
use crate::linalg::QMatrix;
use crate::odd::element::{ExtElement, Side};
use crate::odd::operator::{full_contract, pairing};

fn check_v(w: &ExtElement) -> Result<()> {
    if w.side() != Side::V {
        return Err(Error::invalid("expected an element of S(V[1])"));
    }
    Ok(())
}

/// `γ(W)`, returned as the `S(V*[-1])` factor `Y_W` of `Y_W ⊗ x_1∧…∧x_m`.
///
/// `Y_W` is the unique solution of `π_m(Z ∧ W) = (Z||Y_W)` for all `Z`,
/// solved as a linear system over the basis `Z = x_S`.
pub fn gamma(w: &ExtElement) -> Result<ExtElement> {
    check_v(w)?;
    let m = w.dim();
    let n = 1usize << m;
    // K[S][T] = (x_S || y_T)
    let mut k = QMatrix::zeros(n, n);
    for s in SubsetLabel::all(m) {
        for t in SubsetLabel::all(m) {
            let v = full_contract(&ExtElement::basis(Side::V, m, s), &ExtElement::basis(Side::Dual, m, t))?;
            k.set(s.0 as usize, t.0 as usize, v);
        }
    }
    let rhs: Vec<Rational> = SubsetLabel::all(m)
        .map(|s| pairing(&ExtElement::basis(Side::V, m, s), w))
        .collect::<Result<_>>()?;
    let sol = k.solve(&rhs)?;
    ExtElement::from_terms(Side::Dual, m, sol.into_iter().enumerate().map(|(i, c)| (SubsetLabel(i as u32), c)))
}

/// `ζ = γ⁻¹`, taking the `S(V*[-1])` factor of `Y ⊗ x_1∧…∧x_m`.
pub fn zeta(y: &ExtElement) -> Result<ExtElement> {
    if y.side() != Side::Dual {
        return Err(Error::invalid("zeta expects an element of S(V*[-1])"));
    }
    let m = y.dim();
    let columns: Vec<Vec<Rational>> = SubsetLabel::all(m)
        .map(|u| {
            let g = gamma(&ExtElement::basis(Side::V, m, u))?;
            Ok(SubsetLabel::all(m).map(|t| g.coeff(t)).collect())
        })
        .collect::<Result<_>>()?;
    let gm = QMatrix::from_columns(1 << m, &columns);
    let rhs: Vec<Rational> = SubsetLabel::all(m).map(|t| y.coeff(t)).collect();
    let sol = gm.solve(&rhs)?;
    ExtElement::from_terms(Side::V, m, sol.into_iter().enumerate().map(|(i, c)| (SubsetLabel(i as u32), c)))
}

/// Exterior coproduct `C(x_S) = Σ ε(A,B) x_A ⊗ x_B` over splittings
/// `S = A ⊔ B` with `x_A ∧ x_B = ε x_S`.
pub fn exterior_coproduct(w: &ExtElement) -> BTreeMap<(SubsetLabel, SubsetLabel), Rational> {
    let mut out: BTreeMap<(SubsetLabel, SubsetLabel), Rational> = BTreeMap::new();
    for (s, c) in w.terms() {
        for a in s.subsets() {
            let b = s.minus(a);
            let eps = wedge_sign(a, b);
            let e = out.entry((a, b)).or_insert_with(Rational::zero);
            *e += c * sign_q((eps < 0) as i64);
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// `(End ⊗ (−||Y)) ∘ C`: contract the right coproduct leg against `Y`.
pub fn contract_coproduct(w: &ExtElement, y: &ExtElement) -> Result<ExtElement> {
    check_v(w)?;
    let m = w.dim();
    let mut out = ExtElement::zero(Side::V, m);
    for ((a, b), c) in exterior_coproduct(w) {
        let k = full_contract(&ExtElement::basis(Side::V, m, b), y)?;
        if !k.is_zero() {
            out.add_term(a, c * k);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_of_tail_monomial() {
        // γ(x_{l+1} ∧ … ∧ x_m) = y_l ∧ … ∧ y_1
        for m in 1..=4 {
            for l in 0..=m {
                let tail: Vec<usize> = (l + 1..=m).collect();
                let w = ExtElement::monomial(Side::V, m, &tail);
                let head: Vec<usize> = (1..=l).rev().collect();
                assert_eq!(gamma(&w).unwrap(), ExtElement::monomial(Side::Dual, m, &head));
            }
        }
    }

    #[test]
    fn zeta_inverts_gamma() {
        for u in SubsetLabel::all(3) {
            let w = ExtElement::basis(Side::V, 3, u);
            assert_eq!(zeta(&gamma(&w).unwrap()).unwrap(), w);
        }
    }

    #[test]
    fn coproduct_counit() {
        let w = ExtElement::monomial(Side::V, 3, &[1, 3]);
        let c = exterior_coproduct(&w);
        assert_eq!(c.len(), 4);
        let l13 = SubsetLabel::from_indices(&[1, 3], 3).unwrap();
        assert_eq!(c[&(l13, SubsetLabel::EMPTY)], crate::graded::qi(1));
        assert_eq!(c[&(SubsetLabel::EMPTY, l13)], crate::graded::qi(1));
    }
}
