use itertools::Itertools;
use num_traits::One;
use rand::Rng;

use crate::graded::{qi, sign_q, Rational, SubsetLabel};
use crate::harness::suites::{expect_eq, rand_q};
use crate::harness::{Outcome, Recorder};
use crate::hochschild::{
    alpha, alpha_l, alpha_on_pair, alpha_r, antipode, antipode_convolution, antisym, bar_diff, counit, cut_coprod,
    cut_leg, cut_then_hkr, diff_on_pair, exp_alpha_r, hkr, hoch_diff, mul_legs, pair, shuffle_mul, unit, Chain,
    ChainWord, Connection, PolyForm, Tensor, Word,
};
use crate::poly::{Exponents, Poly};

const VARS: usize = 3;
const RANDOM_SAMPLES: usize = 200;
const RANDOM_LEN: usize = 5;

/// `1, x1, x2, x3, x1², x1x2`.
fn alphabet() -> Vec<Exponents> {
    vec![vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![2, 0, 0], vec![1, 1, 0]]
}

fn one() -> Exponents {
    vec![0; VARS]
}

/// Every word of `len` factors over the alphabet.
fn words(len: usize) -> impl Iterator<Item = Word> {
    (0..len).map(|_| alphabet()).multi_cartesian_product()
}

fn words_upto(max: usize) -> Vec<Word> {
    (1..=max).flat_map(words).collect()
}

/// Words `1 ⊗ s_1 ⊗ ... ⊗ s_q`.
fn unit_words(q: usize) -> impl Iterator<Item = Word> {
    words(q).map(|mut w| {
        w.insert(0, one());
        w
    })
}

fn mono(w: Word) -> Chain {
    Chain::monomial(VARS, w, Rational::one())
}

fn rand_poly(rng: &mut impl Rng) -> Poly {
    let mut p = Poly::zero(VARS);
    for _ in 0..rng.gen_range(1..=3) {
        let mut e = vec![0; VARS];
        for _ in 0..rng.gen_range(0..=3) {
            e[rng.gen_range(0..VARS)] += 1;
        }
        p.add_term(e, rand_q(rng));
    }
    p
}

fn rand_chain(rng: &mut impl Rng, len: usize) -> Chain {
    let factors = (0..len).map(|_| rand_poly(rng)).collect();
    Chain::from_word(&ChainWord::new(factors).expect("nonempty word"))
}

fn rand_chains(rng: &mut impl Rng, len: usize) -> Vec<Chain> {
    (0..RANDOM_SAMPLES).map(|_| rand_chain(rng, len)).collect()
}

/// Exhaustive words up to `max`, then the random ones.
fn chain_cases(rng: &mut impl Rng, max: usize) -> Vec<Chain> {
    let mut cases: Vec<Chain> = words_upto(max).into_iter().map(mono).collect();
    cases.extend(rand_chains(rng, RANDOM_LEN));
    cases
}

/// Pairs `(a, b)` with `b` led by the unit and `p + q ≤ max`, then random
/// pairs with `p + q = RANDOM_LEN`.
fn pair_cases(rng: &mut impl Rng, max: usize) -> Vec<(Chain, Chain)> {
    let mut cases = Vec::new();
    for total in 0..=max {
        for p in 0..=total {
            for a in words(p + 1) {
                for b in unit_words(total - p) {
                    cases.push((mono(a.clone()), mono(b)));
                }
            }
        }
    }
    for _ in 0..RANDOM_SAMPLES {
        let p = rng.gen_range(0..=RANDOM_LEN);
        cases.push((rand_chain(rng, p + 1), rand_chain(rng, RANDOM_LEN - p + 1)));
    }
    cases
}

fn word_degree(c: &Chain) -> usize {
    c.terms().next().map(|(w, _)| w.len() - 1).unwrap_or(0)
}

fn forms_upto(max_deg: usize) -> Vec<PolyForm> {
    let mut out = Vec::new();
    for label in SubsetLabel::all(VARS).filter(|l| l.len() <= max_deg) {
        for e in alphabet() {
            out.push(PolyForm::term(VARS, label, Poly::monomial(VARS, e, qi(1))).expect("label in range"));
        }
    }
    out
}

fn poly(terms: &[(&[u32], i64)]) -> Poly {
    let mut p = Poly::zero(VARS);
    for (e, c) in terms {
        p.add_term(e.to_vec(), qi(*c));
    }
    p
}

fn chain_of(factors: Vec<Poly>) -> Chain {
    Chain::from_word(&ChainWord::new(factors).expect("nonempty word"))
}

pub(crate) fn run(rec: &mut Recorder) {
    let max = rec.cfg.word_len;

    rec.check("hoch-diff-examples", "d(r₀⊗r₁) = 0, d(r₀⊗r₁⊗r₂) = r₀r₁⊗r₂ − r₀⊗r₁r₂ + r₂r₀⊗r₁", |rng| {
        let cases: Vec<_> = (0..20).map(|_| (rand_poly(rng), rand_poly(rng), rand_poly(rng))).collect();
        Outcome::over(cases, |(a, b, c)| {
            expect_eq(|| format!("d({a} ⊗ {b})"), &hoch_diff(&chain_of(vec![a.clone(), b.clone()])), &Chain::zero(VARS))?;
            let want = chain_of(vec![&a * &b, c.clone()])
                .sub(&chain_of(vec![a.clone(), &b * &c]))
                .add(&chain_of(vec![&c * &a, b.clone()]));
            let lhs = hoch_diff(&chain_of(vec![a.clone(), b.clone(), c.clone()]));
            expect_eq(|| format!("d({a} ⊗ {b} ⊗ {c})"), &lhs, &want)
        })
    });

    rec.check("hoch-diff-squared", "d∘d = 0 for the Hochschild differential", |rng| {
        Outcome::over(chain_cases(rng, max), |c| {
            expect_eq(|| format!("c={c}"), &hoch_diff(&hoch_diff(&c)), &Chain::zero(VARS))
        })
    });

    rec.check("bar-diff", "bar differential: d(a⊗b) = ab, d(1⊗1⊗1) = 0, d∘d = 0", |rng| {
        let x1 = poly(&[(&[1, 0, 0], 1)]);
        let x2 = poly(&[(&[0, 1, 0], 1)]);
        let ab = bar_diff(&chain_of(vec![x1.clone(), x2.clone()])).unwrap();
        if ab != chain_of(vec![&x1 * &x2]) {
            return Outcome::Fail { cases: 1, witness: format!("d(x1⊗x2) = {ab}"), detail: None };
        }
        let units = chain_of(vec![Poly::one(VARS), Poly::one(VARS), Poly::one(VARS)]);
        if !bar_diff(&units).unwrap().is_zero() || bar_diff(&chain_of(vec![x1])).is_ok() {
            return Outcome::Fail { cases: 2, witness: "unit word or short word".into(), detail: None };
        }
        let mut cases: Vec<Chain> = (3..=max.max(3) + 1).flat_map(words).map(mono).collect();
        cases.extend(rand_chains(rng, RANDOM_LEN + 1));
        Outcome::over(cases, |c| {
            let d1 = bar_diff(&c).map_err(|e| e.to_string())?;
            expect_eq(|| format!("c={c}"), &bar_diff(&d1).map_err(|e| e.to_string())?, &Chain::zero(VARS))
        })
    });

    rec.check("shuffle-examples", "(a⊗b)·(a′⊗c) = aa′⊗b⊗c − aa′⊗c⊗b, (a)·(b) = ab", |rng| {
        let cases: Vec<_> = (0..20).map(|_| (0..4).map(|_| rand_poly(rng)).collect::<Vec<_>>()).collect();
        Outcome::over(cases, |p| {
            let (a, b, a2, c) = (&p[0], &p[1], &p[2], &p[3]);
            let lhs = shuffle_mul(&chain_of(vec![a.clone(), b.clone()]), &chain_of(vec![a2.clone(), c.clone()]));
            let aa = a * a2;
            let want = chain_of(vec![aa.clone(), b.clone(), c.clone()]).sub(&chain_of(vec![aa, c.clone(), b.clone()]));
            expect_eq(|| format!("a={a} b={b} a′={a2} c={c}"), &lhs, &want)?;
            expect_eq(|| format!("({a})·({b})"), &shuffle_mul(&chain_of(vec![a.clone()]), &chain_of(vec![b.clone()])), &chain_of(vec![a * b]))
        })
    });

    rec.check("shuffle-associative", "(a·b)·c = a·(b·c)", |rng| {
        let mut cases = Vec::new();
        for la in 1..=max {
            for lb in 1..=max + 1 - la {
                for lc in 1..=max + 2 - la - lb {
                    for a in words(la) {
                        for b in unit_words(lb - 1) {
                            for c in unit_words(lc - 1) {
                                cases.push((mono(a.clone()), mono(b.clone()), mono(c)));
                            }
                        }
                    }
                }
            }
        }
        for _ in 0..RANDOM_SAMPLES {
            let la = rng.gen_range(1..=3);
            let lb = rng.gen_range(1..=3);
            let lc = RANDOM_LEN + 3 - la - lb;
            cases.push((rand_chain(rng, la), rand_chain(rng, lb), rand_chain(rng, lc.max(1))));
        }
        Outcome::over(cases, |(a, b, c)| {
            let lhs = shuffle_mul(&shuffle_mul(&a, &b), &c);
            let rhs = shuffle_mul(&a, &shuffle_mul(&b, &c));
            expect_eq(|| format!("a={a} b={b} c={c}"), &lhs, &rhs)
        })
    });

    rec.check("shuffle-graded-commutative", "a·b = (−1)^{pq} b·a", |rng| {
        Outcome::over(pair_cases(rng, max), |(a, b)| {
            let s = sign_q((word_degree(&a) * word_degree(&b)) as i64);
            expect_eq(|| format!("a={a} b={b}"), &shuffle_mul(&a, &b), &shuffle_mul(&b, &a).scale(&s))
        })
    });

    rec.check("product-chain-map", "d(a·b) = d(a)·b + (−1)^p a·d(b)", |rng| {
        Outcome::over(pair_cases(rng, max), |(a, b)| {
            let lhs = hoch_diff(&shuffle_mul(&a, &b));
            let s = sign_q(word_degree(&a) as i64);
            let rhs = shuffle_mul(&hoch_diff(&a), &b).add(&shuffle_mul(&a, &hoch_diff(&b)).scale(&s));
            expect_eq(|| format!("a={a} b={b}"), &lhs, &rhs)
        })
    });

    rec.check("coproduct-chain-map", "(d⊗1 + 1⊗d)∘C = C∘d", |rng| {
        Outcome::over(chain_cases(rng, max), |c| {
            expect_eq(|| format!("c={c}"), &diff_on_pair(&cut_coprod(&c)), &cut_coprod(&hoch_diff(&c)))
        })
    });

    rec.check("coassociative", "(C⊗1)∘C = (1⊗C)∘C", |rng| {
        Outcome::over(chain_cases(rng, max), |c| {
            let cc = cut_coprod(&c);
            expect_eq(|| format!("c={c}"), &cut_leg(&cc, 0), &cut_leg(&cc, 1))
        })
    });

    rec.check("unit-counit", "η∘ε = id, (η⊗1)∘C = id = (1⊗η)∘C, C(r₀) = r₀⊗1", |rng| {
        let cases = chain_cases(rng, max);
        Outcome::over(cases, |c| {
            let p = counit(&c);
            expect_eq(|| format!("η∘ε at {p}"), &counit(&unit(&p)), &p)?;
            let cut = cut_coprod(&c);
            let mut left = Chain::zero(VARS);
            let mut right = Chain::zero(VARS);
            for ((legs, _), v) in cut.terms() {
                if legs[0].len() == 1 {
                    let mut w = legs[1].clone();
                    w[0] = legs[0][0].clone();
                    left.add_term(w, v.clone());
                }
                if legs[1].len() == 1 {
                    right.add_term(legs[0].clone(), v.clone());
                }
            }
            expect_eq(|| format!("(η⊗1)∘C at {c}"), &left, &c)?;
            expect_eq(|| format!("(1⊗η)∘C at {c}"), &right, &c)
        })
    });

    rec.check("antipode", "S(r₀⊗r₁⊗r₂) = −r₀⊗r₂⊗r₁, S(r₀) = r₀, S∘S = id", |rng| {
        let cases = chain_cases(rng, max);
        Outcome::over(cases, |c| {
            expect_eq(|| format!("S∘S at {c}"), &antipode(&antipode(&c)), &c)?;
            let mut want = Chain::zero(VARS);
            for (w, v) in c.terms() {
                let n = w.len() - 1;
                let mut r = vec![w[0].clone()];
                r.extend(w[1..].iter().rev().cloned());
                let s = match n % 4 {
                    0 | 3 => 1,
                    _ => -1,
                };
                want.add_term(r, v * qi(s));
            }
            expect_eq(|| format!("S at {c}"), &antipode(&c), &want)
        })
    });

    rec.report("antipode-axiom", "informational: m∘(S⊗1)∘C = ε∘η at chain level", |rng| {
        let cases = chain_cases(rng, max);
        let total = cases.len();
        let failing: Vec<Chain> = cases.into_iter().filter(|c| antipode_convolution(c) != unit(&counit(c))).collect();
        let detail = match failing.first() {
            None => format!("holds on all {total} chains"),
            Some(c) => format!(
                "fails on {} of {total} chains, e.g. c = {c}: m∘(S⊗1)∘C(c) = {}",
                failing.len(),
                antipode_convolution(c)
            ),
        };
        Outcome::pass(total as u64).with_detail(detail)
    });

    rec.check("hkr-examples", "hkr(1⊗x⊗y) = ½dx∧dy, hkr(p) = p, hkr(1⊗x⊗x) = 0", |_| {
        let x = poly(&[(&[1, 0, 0], 1)]);
        let y = poly(&[(&[0, 1, 0], 1)]);
        let one = Poly::one(VARS);
        let xy = SubsetLabel::from_indices(&[1, 2], VARS).unwrap();
        let half = PolyForm::term(VARS, xy, Poly::constant(VARS, Rational::new(1.into(), 2.into()))).unwrap();
        let p = poly(&[(&[2, 1, 0], 3), (&[0, 0, 0], -1)]);
        let cases = vec![
            (chain_of(vec![one.clone(), x.clone(), y]), half),
            (chain_of(vec![p.clone()]), PolyForm::term(VARS, SubsetLabel(0), p).unwrap()),
            (chain_of(vec![one, x.clone(), x]), PolyForm::zero(VARS)),
        ];
        Outcome::over(cases, |(c, want)| expect_eq(|| format!("c={c}"), &hkr(&c), &want))
    });

    rec.check("hkr-kills-boundaries", "hkr(d(c)) = 0", |rng| {
        Outcome::over(chain_cases(rng, max), |c| {
            expect_eq(|| format!("c={c}"), &hkr(&hoch_diff(&c)), &PolyForm::zero(VARS))
        })
    });

    rec.check("hkr-antisym-identity", "hkr∘φ = id on forms of degree ≤ 3, φ(dx∧dy) = 1⊗x⊗y − 1⊗y⊗x", |rng| {
        let x = poly(&[(&[1, 0, 0], 1)]);
        let y = poly(&[(&[0, 1, 0], 1)]);
        let one = Poly::one(VARS);
        let dxdy = PolyForm::term(VARS, SubsetLabel::from_indices(&[1, 2], VARS).unwrap(), one.clone()).unwrap();
        let want = chain_of(vec![one.clone(), x.clone(), y.clone()]).sub(&chain_of(vec![one, y, x]));
        if antisym(&dxdy) != want {
            return Outcome::Fail { cases: 1, witness: format!("φ(dx∧dy) = {}", antisym(&dxdy)), detail: None };
        }
        let mut cases = forms_upto(3);
        for _ in 0..RANDOM_SAMPLES {
            let mut f = PolyForm::zero(VARS);
            for _ in 0..rng.gen_range(1..=3) {
                f.add_term(SubsetLabel(rng.gen_range(0..8)), &rand_poly(rng));
            }
            cases.push(f);
        }
        Outcome::over(cases, |f| expect_eq(|| format!("ω={f}"), &hkr(&antisym(&f)), &f))
    });

    rec.check("connection-examples", "α_R(r₀⊗r₁) = r₀⊗dr₁, α_L(r₀⊗r₁⊗r₂) = −r₀⊗r₂⊗dr₁, exp(α_R)(r₀) = r₀", |rng| {
        let cases: Vec<_> = (0..20).map(|_| (rand_poly(rng), rand_poly(rng), rand_poly(rng))).collect();
        Outcome::over(cases, |(r0, r1, r2)| {
            let mut want = Tensor::zero(VARS, 1);
            for j in 1..=VARS {
                for (e, c) in (&r0 * &r1.derivative(j)).terms() {
                    want.push(vec![vec![e.clone()]], vec![j], c.clone());
                }
            }
            expect_eq(|| format!("α_R({r0} ⊗ {r1})"), &alpha_r(&chain_of(vec![r0.clone(), r1.clone()])), &want)?;
            let mut want = Tensor::zero(VARS, 1);
            for j in 1..=VARS {
                for (e, c) in (&r0 * &r1.derivative(j)).terms() {
                    for (e2, c2) in r2.terms() {
                        want.push(vec![vec![e.clone(), e2.clone()]], vec![j], -(c * c2));
                    }
                }
            }
            let c3 = chain_of(vec![r0.clone(), r1.clone(), r2]);
            expect_eq(|| format!("α_L at {c3}"), &alpha_l(&c3), &want)?;
            let c1 = chain_of(vec![r0]);
            expect_eq(|| format!("exp(α_R) at {c1}"), &exp_alpha_r(&c1), &Tensor::from_chain(&c1))
        })
    });

    for (id, anchor, conn) in [
        ("right-connection-leibniz", "α_R∘m = (m⊗Ω)∘(α_R⊗C + C⊗α_R)", Connection::Right),
        ("left-connection-leibniz", "α_L∘m = (m⊗Ω)∘(α_L⊗C + C⊗α_L)", Connection::Left),
    ] {
        rec.check(id, anchor, |rng| {
            Outcome::over(pair_cases(rng, max), |(a, b)| {
                let lhs = alpha(&Tensor::from_chain(&shuffle_mul(&a, &b)), conn);
                let rhs = mul_legs(&alpha_on_pair(&pair(&a, &b), conn));
                expect_eq(|| format!("a={a} b={b}"), &lhs, &rhs)
            })
        });
    }

    rec.check("exp-connection-is-cut-hkr", "(C⊗I_HKR)∘C = exp(α_R)", |rng| {
        Outcome::over(chain_cases(rng, max), |c| expect_eq(|| format!("c={c}"), &exp_alpha_r(&c), &cut_then_hkr(&c)))
    });

    rec.check("connections-commute", "(α_R⊗Ω)∘α_L − (C⊗τ)∘(α_L⊗Ω)∘α_R = 0", |rng| {
        Outcome::over(chain_cases(rng, max + 1), |c| {
            let t = Tensor::from_chain(&c);
            let lhs = alpha(&alpha(&t, Connection::Left), Connection::Right);
            let rhs = alpha(&alpha(&t, Connection::Right), Connection::Left).swap_last_forms();
            expect_eq(|| format!("c={c}"), &lhs, &rhs)
        })
    });

    rec.check("left-connection-via-antipode", "α_L = −(S⊗Ω)∘α_R∘S", |rng| {
        Outcome::over(chain_cases(rng, max), |c| {
            let rhs = alpha_r(&antipode(&c)).map_leg(0, antipode, |_| 1).scale(&qi(-1));
            expect_eq(|| format!("c={c}"), &alpha_l(&c), &rhs)
        })
    });

    rec.check("hkr-intertwines-antipode", "I_HKR∘S = J∘I_HKR", |rng| {
        Outcome::over(chain_cases(rng, max), |c| expect_eq(|| format!("c={c}"), &hkr(&antipode(&c)), &hkr(&c).j()))
    });
}
