use itertools::Itertools;
use rand::Rng;

use crate::graded::{qi, Rational};
use crate::harness::suites::{expect_eq, rand_q};
use crate::harness::{Outcome, Recorder};
use crate::rr::{
    ch, integrate, j_endo, k_endo, mukai_c, mukai_m, mukai_vector, pullback_to, pushforward, sqrt_ch_omega, sqrt_td,
    tau_endo, taubar_endo, todd_tangent, verify_rr, BundleSymbol, CohClass,
};

fn rand_class(rng: &mut impl Rng, n: usize) -> CohClass {
    CohClass::from_coeffs(n, (0..=n).map(|_| if rng.gen_bool(0.7) { rand_q(rng) } else { qi(0) }))
}

fn basis(n: usize) -> Vec<CohClass> {
    (0..=n).map(|p| CohClass::h_power(n, p)).collect()
}

pub(crate) fn run(rec: &mut Recorder) {
    let cap = rec.cfg.rr_dim;
    let samples = rec.cfg.samples_or(10);

    rec.check("hrr-table", "∫ ch(O(k)) td(T_Pⁿ) = χ(O(k)) for Pⁿ → pt", |_| {
        Outcome::over((0..=cap).cartesian_product(-6i64..=6), |(n, k)| {
            let row = verify_rr(n, k, &qi(1));
            expect_eq(|| format!("n={n} k={k}"), &row.chi_hrr, &row.chi_binomial)
        })
    });

    rec.check("riemann-roch-pushforward", "∫_X f^*(l) ch(E) td(T_X) = ∫_Y l ch(f_*E) td(T_Y)", |rng| {
        let cases: Vec<_> = (1..=cap).cartesian_product(-6i64..=6).map(|(n, k)| (n, k, rand_q(rng))).collect();
        Outcome::over(cases, |(n, k, l)| {
            let row = verify_rr(n, k, &l);
            if row.matches {
                Ok(())
            } else {
                Err(format!("n={n} k={k} l={l}"))
            }
        })
    });

    rec.check("pushforward-adjoint", "⟨f^*(v),w⟩_M = ⟨v,f_*(w)⟩_M", |rng| {
        let mut cases = Vec::new();
        for n in 1..=cap {
            for w in basis(n) {
                cases.push((n, qi(1), w));
            }
            for _ in 0..samples {
                cases.push((n, rand_q(rng), rand_class(rng, n)));
            }
        }
        Outcome::over(cases, |(n, v, w)| {
            let lhs = mukai_m(&pullback_to(n, &v), &w);
            // on a point every pairing is multiplication
            let rhs = &v * pushforward(&w);
            expect_eq(|| format!("n={n} v={v} w={w}"), &lhs, &rhs)
        })
    });

    rec.report("untwisted-pushforward", "informational: f_* = ∫ is not adjoint to f^* for ⟨,⟩_M", |_| {
        let mut mismatches = 0;
        let mut total = 0;
        for n in 1..=cap {
            for w in basis(n) {
                total += 1;
                if mukai_m(&CohClass::one(n), &w) != integrate(&w) {
                    mismatches += 1;
                }
            }
        }
        Outcome::pass(total).with_detail(format!("{mismatches} of {total} basis pairs differ"))
    });

    rec.check("todd-pairing-is-mukai-pairing", "∫ K(a) ∧ b ∧ td(T_X) = ⟨a∧√td(T_X), b∧√td(T_X)⟩_M", |_| {
        let cases: Vec<_> = (1..=cap.min(3)).flat_map(|n| basis(n).into_iter().cartesian_product(basis(n))).collect();
        Outcome::over(cases, |(a, b)| {
            let n = a.dim();
            let lhs = integrate(&(&(&k_endo(&a) * &b) * &todd_tangent(n)));
            let r = sqrt_td(n);
            let rhs = mukai_m(&(&a * &r), &(&b * &r));
            expect_eq(|| format!("n={n} a={a} b={b}"), &lhs, &rhs)
        })
    });

    rec.check("caldararu-identity", "τ(√td(T_X))/√ch(ω_X) = √td(T_X)", |_| {
        Outcome::over(1..=cap, |n| {
            let lhs = &tau_endo(&sqrt_td(n)) * &sqrt_ch_omega(n).inverse().unwrap();
            expect_eq(|| format!("n={n}"), &lhs, &sqrt_td(n))
        })
    });

    rec.check("mukai-pairings-agree", "⟨v,w⟩_M = ⟨v,w⟩_C on the diagonal Hodge classes", |rng| {
        let mut cases = Vec::new();
        for n in 1..=cap {
            cases.extend(basis(n).into_iter().cartesian_product(basis(n)));
            for _ in 0..samples {
                let e = BundleSymbol::line(rng.gen_range(-4..=4));
                let f = BundleSymbol::new(vec![(rng.gen_range(-4..=4), rng.gen_range(1..=3)), (rng.gen_range(-4..=4), 1)]).unwrap();
                cases.push((mukai_vector(&e, n), mukai_vector(&f, n)));
            }
        }
        Outcome::over(cases, |(v, w)| expect_eq(|| format!("v={v} w={w}"), &mukai_m(&v, &w), &mukai_c(&v, &w)))
    });

    rec.check("hodge-endomorphisms", "K = τ∘τ̄ = τ̄∘τ, τ̄ = id, K(1+h) = 1−h", |rng| {
        let mut cases = Vec::new();
        for n in 1..=cap {
            for _ in 0..samples {
                cases.push(rand_class(rng, n));
            }
        }
        let first = k_endo(&CohClass::from_coeffs(1, [qi(1), qi(1)]));
        if first != CohClass::from_coeffs(1, [qi(1), qi(-1)]) {
            return Outcome::Fail { cases: 1, witness: format!("K(1+h) = {first}"), detail: None };
        }
        Outcome::over(cases, |v| {
            expect_eq(|| format!("K vs τ∘τ̄ at {v}"), &k_endo(&v), &tau_endo(&taubar_endo(&v)))?;
            expect_eq(|| format!("K vs τ̄∘τ at {v}"), &k_endo(&v), &taubar_endo(&tau_endo(&v)))?;
            expect_eq(|| format!("τ̄ at {v}"), &taubar_endo(&v), &v)
        })
    });

    rec.check("graded-commutative-integral", "∫ v∧w = ∫ w̄∧v with w̄ the degree-sign conjugate", |_| {
        let cases: Vec<_> = (1..=cap).flat_map(|n| basis(n).into_iter().cartesian_product(basis(n))).collect();
        Outcome::over(cases, |(v, w)| {
            // on Pⁿ every class has even total degree, so w̄ = w and J(w̄) = K(w)
            let conj = w.clone();
            expect_eq(|| format!("J vs K at {w}"), &k_endo(&conj), &j_endo(&w))?;
            expect_eq(|| format!("v={v} w={w}"), &integrate(&(&v * &w)), &integrate(&(&conj * &v)))
        })
    });

    rec.check("todd-square-root", "√td(T_X)² = td(T_X), √ch(ω)² = ch(ω), ch(O(1)) on P²", |_| {
        let first = ch(&BundleSymbol::line(1), 2);
        let want = CohClass::from_coeffs(2, [qi(1), qi(1), Rational::new(1.into(), 2.into())]);
        if first != want {
            return Outcome::Fail { cases: 1, witness: format!("ch(O(1)) = {first}"), detail: None };
        }
        Outcome::over(1..=cap, |n| {
            let r = sqrt_td(n);
            expect_eq(|| format!("n={n}"), &(&r * &r), &todd_tangent(n))?;
            let s = sqrt_ch_omega(n);
            expect_eq(|| format!("n={n}"), &(&s * &s), &ch(&BundleSymbol::line(-(n as i64) - 1), n))
        })
    });
}
