use hkr_core::atiyah::{duflo_det, omega_bar_tangent, AtiyahTensor};
use hkr_core::graded::{koszul_sign, wedge_sign};
use hkr_core::harness::text::{parse_chain, parse_ext, parse_poly};
use hkr_core::hochschild::{antipode, antisym, hkr, hoch_diff, shuffle_mul, Chain};
use hkr_core::lie::{dexp_direct, dexp_formula, mat_exp, SquareMatrix};
use hkr_core::odd::{adjoint, fr, gr, i_op, j_op};
use hkr_core::poly::Poly;
use hkr_core::series::FormalSeries;
use hkr_core::{ExtElement, Rational, Side, SubsetLabel};
use num_traits::{One, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-6i64..=6, 1i64..=4).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn ext(side: Side, m: usize) -> impl Strategy<Value = ExtElement> {
    prop::collection::vec((0u32..(1 << m), rational()), 0..5).prop_map(move |terms| {
        let mut e = ExtElement::zero(side, m);
        for (l, c) in terms {
            e.add_term(SubsetLabel(l), c);
        }
        e
    })
}

fn sized_ext() -> impl Strategy<Value = (ExtElement, ExtElement, ExtElement)> {
    (1usize..=4).prop_flat_map(|m| (ext(Side::V, m), ext(Side::V, m), ext(Side::V, m)))
}

fn poly2() -> impl Strategy<Value = Poly> {
    prop::collection::vec((0u32..3, 0u32..3, rational()), 0..3).prop_map(|terms| {
        let mut p = Poly::zero(2);
        for (a, b, c) in terms {
            p.add_term(vec![a, b], c);
        }
        p
    })
}

fn chain2() -> impl Strategy<Value = Chain> {
    prop::collection::vec(prop::collection::vec(poly2(), 1..=3), 1..3).prop_map(|words| {
        let mut text = String::new();
        for (k, w) in words.iter().enumerate() {
            if k > 0 {
                text += " + ";
            }
            let parts: Vec<String> = w.iter().map(|p| p.to_string()).collect();
            text += &format!("w[{}]", parts.join("; "));
        }
        parse_chain(&text, Some(2)).unwrap()
    })
}

fn strictly_upper(n: usize) -> impl Strategy<Value = SquareMatrix> {
    prop::collection::vec(rational(), n * n).prop_map(move |v| {
        let rows = (0..n).map(|r| (0..n).map(|c| if c > r { v[r * n + c].clone() } else { Rational::zero() }).collect()).collect();
        SquareMatrix::from_rows(rows).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn wedge_is_associative_and_graded_commutative((a, b, c) in sized_ext()) {
        let ab = a.wedge(&b).unwrap();
        prop_assert_eq!(ab.wedge(&c).unwrap(), a.wedge(&b.wedge(&c).unwrap()).unwrap());
        for (la, ca) in a.terms() {
            for (lb, cb) in b.terms() {
                let x = ExtElement::term(Side::V, a.dim(), *la, ca.clone());
                let y = ExtElement::term(Side::V, a.dim(), *lb, cb.clone());
                let s = koszul_sign(&[la.len() as i64, lb.len() as i64], &[1, 0]).unwrap();
                prop_assert_eq!(x.wedge(&y).unwrap(), y.wedge(&x).unwrap().scale(&Rational::from_integer(s.into())));
            }
        }
    }

    #[test]
    fn wedge_sign_matches_disjointness(s in 0u32..256, t in 0u32..256) {
        let (s, t) = (SubsetLabel(s), SubsetLabel(t));
        prop_assert_eq!(wedge_sign(s, t) == 0, s.0 & t.0 != 0);
    }

    #[test]
    fn text_round_trips((a, _, _) in sized_ext()) {
        prop_assert_eq!(parse_ext(&a.to_string(), Some(a.dim())).unwrap(), a);
    }

    #[test]
    fn poly_text_round_trips(p in poly2()) {
        prop_assert_eq!(parse_poly(&p.to_string(), Some(2)).unwrap(), p);
    }

    #[test]
    fn inverse_of_unit_constant_term((a, _, _) in sized_ext()) {
        let mut u = a.clone();
        let c0 = u.coeff(SubsetLabel::EMPTY);
        u.add_term(SubsetLabel::EMPTY, Rational::one() - c0);
        let inv = u.inverse().unwrap();
        prop_assert_eq!(&u * &inv, ExtElement::one(Side::V, a.dim()));
    }

    #[test]
    fn symbol_maps_are_inverse_and_adjoint_is_involutive(m in 1usize..=3, z in 0u32..8, y in 0u32..8) {
        let zl = SubsetLabel(z & ((1 << m) - 1));
        let yl = SubsetLabel(y & ((1 << m) - 1));
        let op = i_op(&ExtElement::basis(Side::V, m, zl)).unwrap().compose(&j_op(&ExtElement::basis(Side::Dual, m, yl)).unwrap());
        prop_assert_eq!(gr(&fr(&op)), op.clone());
        prop_assert_eq!(adjoint(&adjoint(&op)), op);
    }

    #[test]
    fn hochschild_differential_squares_to_zero(c in chain2()) {
        prop_assert!(hoch_diff(&hoch_diff(&c)).is_zero());
        prop_assert!(hkr(&hoch_diff(&c)).is_zero());
    }

    #[test]
    fn antipode_is_an_involution(c in chain2()) {
        prop_assert_eq!(antipode(&antipode(&c)), c);
    }

    #[test]
    fn shuffle_product_is_a_chain_map(a in chain2(), b in chain2()) {
        let lhs = hoch_diff(&shuffle_mul(&a, &b));
        // a and b may be inhomogeneous; compare degree by degree through linearity
        let mut rhs = Chain::zero(2);
        for (wa, ca) in a.terms() {
            let pa = Chain::monomial(2, wa.clone(), ca.clone());
            let sign = if (wa.len() - 1) % 2 == 0 { Rational::one() } else { -Rational::one() };
            rhs = rhs.add(&shuffle_mul(&hoch_diff(&pa), &b)).add(&shuffle_mul(&pa, &hoch_diff(&b)).scale(&sign));
        }
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn hkr_inverts_antisymmetrization(c in chain2()) {
        let form = hkr(&c);
        prop_assert_eq!(hkr(&antisym(&form)), form);
    }

    #[test]
    fn reciprocal_series(coeffs in prop::collection::vec(rational(), 1..8)) {
        let n = coeffs.len() - 1;
        let mut c = coeffs;
        c[0] = Rational::one();
        let s = FormalSeries::from_coeffs(n, c);
        prop_assert_eq!(&s * &s.reciprocal().unwrap(), FormalSeries::one(n));
        prop_assert_eq!(s.log().unwrap().exp().unwrap(), s);
    }

    #[test]
    fn dexp_agrees_with_series(z in strictly_upper(4), w in strictly_upper(4)) {
        prop_assert_eq!(dexp_direct(&z, &w).unwrap(), dexp_formula(&z, &w).unwrap());
        let e = mat_exp(&z).unwrap();
        prop_assert_eq!(e.mul(&mat_exp(&z.scale(&-Rational::one())).unwrap()), SquareMatrix::identity(4));
    }

    #[test]
    fn duflo_determinant_is_invertible_with_unit_constant(entries in prop::collection::vec((1usize..=2, 1usize..=2, 1usize..=2, rational()), 0..6)) {
        let a = AtiyahTensor::new(2, entries).unwrap();
        let f = duflo_det(&a);
        prop_assert_eq!(f.coeff(SubsetLabel::EMPTY), Rational::one());
        prop_assert!(f.inverse().is_ok());
        let zero_forms = vec![ExtElement::one(Side::Dual, 2); 2];
        prop_assert!(omega_bar_tangent(&a, &zero_forms).iter().all(|e| e.is_zero()));
    }
}
