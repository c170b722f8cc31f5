use std::collections::BTreeMap;

use itertools::Itertools;
use num_traits::{One, Zero};
use rand::seq::SliceRandom;
use rand::Rng;

use crate::graded::{sign_q, Rational, SubsetLabel};
use crate::harness::suites::{expect_eq, rand_op, rand_q, rand_symbol};
use crate::harness::{Outcome, Recorder};
use crate::linalg::sparse_rank;
use crate::odd::operator::gram_matrix;
use crate::odd::{
    ad, adbar, adjoint, contract_coproduct, fl, fr, gamma, gl, gr, i_op, j_op, k_contract, one_m, p_map, zeta, BiSymbol,
    D1Tensor, EndOperator, ExtElement, Side,
};

fn x(m: usize, s: SubsetLabel) -> ExtElement {
    ExtElement::basis(Side::V, m, s)
}

fn y(m: usize, t: SubsetLabel) -> ExtElement {
    ExtElement::basis(Side::Dual, m, t)
}

fn basis_symbols(m: usize) -> Vec<(SubsetLabel, SubsetLabel)> {
    SubsetLabel::all(m).cartesian_product(SubsetLabel::all(m)).collect()
}

/// `y_i ⊗ x_S`: the basis of `D_1`.
fn d1_basis(m: usize) -> Vec<(SubsetLabel, SubsetLabel)> {
    (1..=m).map(SubsetLabel::single).cartesian_product(SubsetLabel::all(m)).collect()
}

/// Exhaustive cases for small `m`, a random subset of `samples` otherwise.
fn cases<T: Clone>(all: Vec<T>, exhaustive: bool, samples: usize, rng: &mut impl Rng) -> Vec<T> {
    if exhaustive || all.len() <= samples {
        all
    } else {
        (0..samples).map(|_| all.choose(rng).unwrap().clone()).collect()
    }
}

fn unit_desc(o: SubsetLabel, i: SubsetLabel) -> String {
    format!("unit x{i} ↦ x{o}")
}

fn op_degree(o: SubsetLabel, i: SubsetLabel) -> i64 {
    EndOperator::unit_degree(o, i)
}

/// The symbol of `Y ⊗ Z` for single-term `Y`, `Z`, as a [`BiSymbol`].
fn tensor(yy: &ExtElement, z: &ExtElement) -> BiSymbol {
    BiSymbol::tensor(yy, z).expect("compatible sides")
}

pub(crate) fn run(rec: &mut Recorder) {
    let cap = rec.cfg.dim;
    for m in 1..=cap {
        run_dim(rec, m, m <= 3);
    }
}

fn run_dim(rec: &mut Recorder, m: usize, exhaustive: bool) {
    let samples = rec.cfg.samples_or(100);
    let id = |name: &str| format!("m{m}.{name}");
    let units: Vec<(SubsetLabel, SubsetLabel)> = basis_symbols(m);
    let n = 1usize << m;

    rec.check(&id("symbol-map-bijective"), "Gr(Y⊗Z) = i(Z)∘j(Y) is an isomorphism with inverse Fr", |rng| {
        // rank of Gr over all 4^m basis symbols, always exhaustive
        let rows: Vec<BTreeMap<usize, Rational>> = units
            .iter()
            .map(|&(t, s)| {
                gr(&BiSymbol::basis(m, t, s))
                    .entries()
                    .map(|(o, i, v)| (o.0 as usize * n + i.0 as usize, v.clone()))
                    .collect()
            })
            .collect();
        let rank = sparse_rank(rows);
        if rank != n * n {
            return Outcome::Fail { cases: 1, witness: format!("rank {rank} < {}", n * n), detail: None };
        }
        let inverse = Outcome::over(units.iter(), |&(t, s)| {
            let b = BiSymbol::basis(m, t, s);
            expect_eq(|| format!("y{t}⊗x{s}"), &fr(&gr(&b)), &b)
        });
        let Outcome::Pass { cases: c1, .. } = inverse else { return inverse };
        let count = if exhaustive { 20 } else { samples.min(20) };
        let random = Outcome::over((0..count).map(|_| rand_op(rng, m, 6)), |op| {
            expect_eq(|| format!("{op:?}"), &gr(&fr(&op)), &op)
        });
        match random {
            Outcome::Pass { cases: c2, .. } => Outcome::pass(1 + c1 + c2).with_detail(format!("rank {rank}")),
            other => other,
        }
    });

    rec.check(&id("left-symbol-map-bijective"), "Gl(Y⊗Z) = (−1)^{|Z||Y|} j(Y)∘i(Z) is inverted by Fl", |rng| {
        Outcome::over(cases(units.clone(), exhaustive, samples, rng), |(t, s)| {
            let b = BiSymbol::basis(m, t, s);
            expect_eq(|| format!("y{t}⊗x{s}"), &fl(&gl(&b)), &b)
        })
    });

    rec.check(&id("adjoint-involution"), "L⁺⁺ = L", |rng| {
        Outcome::over(cases(units.clone(), exhaustive, samples, rng), |(o, i)| {
            let op = EndOperator::unit(m, o, i);
            expect_eq(|| unit_desc(o, i), &adjoint(&adjoint(&op)), &op)
        })
    });

    rec.check(&id("adjoint-reverses-composition"), "(L₁∘L₂)⁺ = (−1)^{|L₁||L₂|} L₂⁺∘L₁⁺", |rng| {
        let pairs: Vec<_> = if exhaustive {
            units.iter().copied().cartesian_product(units.iter().copied()).collect()
        } else {
            (0..samples).map(|_| (*units.choose(rng).unwrap(), *units.choose(rng).unwrap())).collect()
        };
        Outcome::over(pairs, |((o1, i1), (o2, i2))| {
            let a = EndOperator::unit(m, o1, i1);
            let b = EndOperator::unit(m, o2, i2);
            let lhs = adjoint(&a.compose(&b));
            let rhs = adjoint(&b).compose(&adjoint(&a)).scale(&sign_q(op_degree(o1, i1) * op_degree(o2, i2)));
            expect_eq(|| format!("{} then {}", unit_desc(o2, i2), unit_desc(o1, i1)), &lhs, &rhs)
        })
    });

    rec.check(&id("adjoint-of-multiplication"), "i(Z)⁺ = i(Z)", |_| {
        Outcome::over(SubsetLabel::all(m), |s| {
            let op = i_op(&x(m, s)).unwrap();
            expect_eq(|| format!("Z = x{s}"), &adjoint(&op), &op)
        })
    });

    rec.check(&id("adjoint-of-derivation"), "j(Y)⁺ = (−1)^{|Y|} j(Y)", |_| {
        Outcome::over(SubsetLabel::all(m), |t| {
            let op = j_op(&y(m, t)).unwrap();
            expect_eq(|| format!("Y = y{t}"), &adjoint(&op), &op.scale(&sign_q(t.len() as i64)))
        })
    });

    rec.check(&id("adjoint-of-left-symbol"), "Gl(Y⊗Z)⁺ = (−1)^{|Y|} Gr(Y⊗Z)", |rng| {
        Outcome::over(cases(units.clone(), exhaustive, samples, rng), |(t, s)| {
            let b = BiSymbol::basis(m, t, s);
            expect_eq(|| format!("y{t}⊗x{s}"), &adjoint(&gl(&b)), &gr(&b).scale(&sign_q(t.len() as i64)))
        })
    });

    rec.check(&id("left-symbol-of-adjoint"), "π₀(Fl(L)) = I(π₀(Fr(L⁺)))", |rng| {
        Outcome::over(cases(units.clone(), exhaustive, samples, rng), |(o, i)| {
            let op = EndOperator::unit(m, o, i);
            let lhs = fl(&op).pi0();
            let rhs = fr(&adjoint(&op)).pi0().grade_involution();
            expect_eq(|| unit_desc(o, i), &lhs, &rhs)
        })
    });

    rec.check(&id("constant-term-of-composition"), "π₀(Fr(a∘b)) = π₀(Fr(π₀(a)∘b))", |rng| {
        let count = if exhaustive { 50 } else { samples };
        Outcome::over(0..count, |_| {
            let a = rand_symbol(rng, m, 4);
            let b = rand_symbol(rng, m, 4);
            let lhs = fr(&gr(&a).compose(&gr(&b))).pi0();
            let rhs = fr(&gr(&a.pi0_symbol()).compose(&gr(&b))).pi0();
            expect_eq(|| format!("a = {a}, b = {b}"), &lhs, &rhs)
        })
    });

    let d1 = d1_basis(m);
    let d1_pairs = |rng: &mut rand_chacha::ChaCha8Rng| -> Vec<_> {
        if exhaustive {
            d1.iter().copied().cartesian_product(d1.iter().copied()).collect()
        } else {
            (0..samples).map(|_| (*d1.choose(rng).unwrap(), *d1.choose(rng).unwrap())).collect()
        }
    };

    rec.check(&id("first-order-composition"), "(y₁⊗Z₁)∘(y₂⊗Z₂) = y₂⊗(Z₂•y₁)Z₁ + (−1)^{|Z₂|} y₂∧y₁⊗Z₂Z₁", |rng| {
        Outcome::over(d1_pairs(rng), |((t1, s1), (t2, s2))| {
            let (z1, z2, y1, y2) = (x(m, s1), x(m, s2), y(m, t1), y(m, t2));
            let lhs = fr(&gr(&BiSymbol::basis(m, t1, s1)).compose(&gr(&BiSymbol::basis(m, t2, s2))));
            let contr = j_op(&y1).unwrap().apply(&z2);
            let rhs = tensor(&y2, &(&contr * &z1))
                + tensor(&(&y2 * &y1), &(&z2 * &z1)).scale(&sign_q(s2.len() as i64));
            expect_eq(|| format!("y{t1}⊗x{s1}, y{t2}⊗x{s2}"), &lhs, &rhs)
        })
    });

    rec.check(&id("first-order-bracket"), "[y₁⊗Z₁, y₂⊗Z₂] = y₂⊗(Z₂•y₁)Z₁ − (−1)^{|D₁||D₂|} y₁⊗(Z₁•y₂)Z₂ lies in D₁", |rng| {
        Outcome::over(d1_pairs(rng), |((t1, s1), (t2, s2))| {
            let (z1, z2, y1, y2) = (x(m, s1), x(m, s2), y(m, t1), y(m, t2));
            let lhs = fr(&gr(&BiSymbol::basis(m, t1, s1)).bracket(&gr(&BiSymbol::basis(m, t2, s2))));
            if lhs.terms().any(|((t, _), _)| t.len() != 1) {
                return Err(format!("bracket of y{t1}⊗x{s1} and y{t2}⊗x{s2} leaves D₁: {lhs}"));
            }
            let deg1 = 1 - s1.len() as i64;
            let deg2 = 1 - s2.len() as i64;
            let a = j_op(&y1).unwrap().apply(&z2);
            let b = j_op(&y2).unwrap().apply(&z1);
            let rhs = tensor(&y2, &(&a * &z1)) - tensor(&y1, &(&b * &z2)).scale(&sign_q(deg1 * deg2));
            expect_eq(|| format!("y{t1}⊗x{s1}, y{t2}⊗x{s2}"), &lhs, &rhs)
        })
    });

    rec.check(&id("adjoint-action-factorizes"), "p ∘ ad̄(L) = ad(L) ∘ p on D₁^{⊗m}", |rng| {
        let count = if exhaustive { 50 } else { samples };
        Outcome::over(0..count, |_| {
            let (lt, ls) = *d1.choose(rng).unwrap();
            let l = BiSymbol::basis(m, lt, ls).scale(&rand_q(rng));
            let mut w = D1Tensor::new();
            for _ in 0..2 {
                let word: Vec<_> = (0..m).map(|_| *d1.choose(rng).unwrap()).collect();
                *w.entry(word).or_insert_with(Rational::zero) += rand_q(rng);
            }
            let lhs = p_map(m, &adbar(&l, &w).map_err(|e| e.to_string())?);
            let rhs = ad(&l, &p_map(m, &w)).map_err(|e| e.to_string())?;
            expect_eq(|| format!("L = {l}, W = {w:?}"), &lhs, &rhs)
        })
    });

    rec.check(&id("constant-term-is-contraction"), "π₀(Fr(j(Y)∘i(Z))) = (Z|Y)", |_| {
        Outcome::over(units.iter(), |&(t, s)| {
            let op = j_op(&y(m, t)).unwrap().compose(&i_op(&x(m, s)).unwrap());
            let lhs = fr(&op).pi0();
            let rhs = k_contract(&x(m, s), &y(m, t)).unwrap();
            expect_eq(|| format!("Z = x{s}, Y = y{t}"), &lhs, &rhs)
        })
    });

    rec.check(&id("duality-intertwines-contraction"), "ζ((Z|γ(W))) = Z∧W", |_| {
        Outcome::over(units.iter(), |&(s, w)| {
            let (z, ww) = (x(m, s), x(m, w));
            let g = gamma(&ww).map_err(|e| e.to_string())?;
            let lhs = zeta(&k_contract(&z, &g).unwrap()).map_err(|e| e.to_string())?;
            expect_eq(|| format!("Z = x{s}, W = x{w}"), &lhs, &(&z * &ww))
        })
    });

    rec.check(&id("duality-and-top-contraction"), "J(j(Y)(x₁∧…∧x_m)) = (−1)^{m(|Y|−m)} ζ(Y)", |_| {
        let top = x(m, SubsetLabel::top(m));
        Outcome::over(SubsetLabel::all(m), |t| {
            let lhs = j_op(&y(m, t)).unwrap().apply(&top).grade_involution();
            let e = m as i64 * (t.len() as i64 - m as i64);
            let rhs = zeta(&y(m, t)).map_err(|e| e.to_string())?.scale(&sign_q(e));
            expect_eq(|| format!("Y = y{t}"), &lhs, &rhs)
        })
    });

    rec.check(&id("contracted-coproduct"), "(End ⊗ (−||Y)) ∘ C = j(Y)", |_| {
        Outcome::over(units.iter(), |&(w, t)| {
            let lhs = contract_coproduct(&x(m, w), &y(m, t)).map_err(|e| e.to_string())?;
            let rhs = j_op(&y(m, t)).unwrap().apply(&x(m, w));
            expect_eq(|| format!("W = x{w}, Y = y{t}"), &lhs, &rhs)
        })
    });

    rec.check(&id("top-form-intertwines-adjoint"), "1^m(−L⁺(H)) = ((−1)^{|L|m} ad(L) ⊗ ∧^m)(1^m(H))", |rng| {
        let all: Vec<_> = d1.iter().copied().cartesian_product(SubsetLabel::all(m)).collect();
        Outcome::over(cases(all, exhaustive, samples, rng), |((lt, ls), h)| {
            let l = BiSymbol::basis(m, lt, ls);
            let hh = x(m, h);
            let lhs = one_m(&-adjoint(&gr(&l)).apply(&hh));
            let deg = 1 - ls.len() as i64;
            let rhs = ad(&l, &one_m(&hh)).map_err(|e| e.to_string())?.scale(&sign_q(deg * m as i64));
            expect_eq(|| format!("L = y{lt}⊗x{ls}, H = x{h}"), &lhs, &rhs)
        })
    });

    rec.check(&id("pairing-nondegenerate"), "⟨a,b⟩ = π_m(a∧b) has a signed permutation Gram matrix", |_| {
        let g = gram_matrix(m);
        Outcome::over(0..n, |r| {
            let nz: Vec<&Rational> = (0..n).map(|c| g.get(r, c)).filter(|v| !v.is_zero()).collect();
            let col_nz = (0..n).filter(|&c| !g.get(c, r).is_zero()).count();
            if nz.len() != 1 || col_nz != 1 || !(nz[0].is_one() || (-nz[0].clone()).is_one()) {
                return Err(format!("row/column {r} is not a signed unit vector"));
            }
            Ok(())
        })
    });
}
