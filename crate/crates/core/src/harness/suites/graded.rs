use std::cmp::Ordering;

use itertools::Itertools;

use crate::graded::{compare_subsets, koszul_sign, subset_wedge, SubsetLabel};
use crate::harness::suites::expect_eq;
use crate::harness::{Outcome, Recorder};

fn degree_vectors(len: usize, alphabet: &[i64]) -> Vec<Vec<i64>> {
    (0..len).map(|_| alphabet.iter().copied()).multi_cartesian_product().collect()
}

/// `koszul(d, ρ∘σ) = koszul(d, ρ) · koszul(d∘ρ, σ)` for `perm[k]` = old position.
fn koszul_composes(d: &[i64], rho: &[usize], sigma: &[usize]) -> Result<(), String> {
    let comp: Vec<usize> = sigma.iter().map(|&k| rho[k]).collect();
    let moved: Vec<i64> = rho.iter().map(|&k| d[k]).collect();
    let lhs = koszul_sign(d, &comp).map_err(|e| e.to_string())?;
    let rhs = koszul_sign(d, rho).map_err(|e| e.to_string())? * koszul_sign(&moved, sigma).map_err(|e| e.to_string())?;
    expect_eq(|| format!("degrees {d:?}, rho {rho:?}, sigma {sigma:?}"), &lhs, &rhs)
}

pub(crate) fn run(rec: &mut Recorder) {
    rec.check("koszul-sign-composes", "Koszul sign rule for rearranging homogeneous factors", |_| {
        let mut cases = Vec::new();
        for len in 0..=5 {
            // the sign only sees parities, so length 5 uses one odd and one even degree
            let alphabet: &[i64] = if len <= 4 { &[-2, -1, 0, 1, 2] } else { &[-1, 2] };
            let perms: Vec<Vec<usize>> = (0..len).permutations(len).collect();
            for d in degree_vectors(len, alphabet) {
                cases.push((d, perms.clone()));
            }
        }
        let mut n = 0;
        for (d, perms) in cases {
            for rho in &perms {
                for sigma in &perms {
                    n += 1;
                    if let Err(w) = koszul_composes(&d, rho, sigma) {
                        return Outcome::Fail { cases: n, witness: w, detail: None };
                    }
                }
            }
        }
        Outcome::pass(n)
    });

    rec.check("koszul-sign-examples", "two odd factors anticommute; even factors commute", |_| {
        let ex: [(&[i64], &[usize], i64); 4] =
            [(&[-1, -1], &[1, 0], -1), (&[-1, -2], &[1, 0], 1), (&[3, 1, 2], &[0, 1, 2], 1), (&[-1, 1, 1], &[2, 0, 1], 1)];
        Outcome::over(ex, |(d, p, want)| {
            let got = koszul_sign(d, p).map_err(|e| e.to_string())?;
            expect_eq(|| format!("degrees {d:?} perm {p:?}"), &got, &want)
        })
    });

    rec.check("wedge-associative-graded-commutative", "x_S ∧ x_T = (−1)^{|S||T|} x_T ∧ x_S, associativity", |_| {
        let m = 4;
        let labels: Vec<SubsetLabel> = SubsetLabel::all(m).collect();
        let w = |a: Option<(SubsetLabel, i64)>, b: SubsetLabel| -> Option<(SubsetLabel, i64)> {
            let (l, s) = a?;
            subset_wedge(l, b, m).unwrap().map(|(l2, s2)| (l2, s * s2))
        };
        Outcome::over(labels.iter().cartesian_product(&labels).cartesian_product(&labels), |((&s, &t), &u)| {
            let st = subset_wedge(s, t, m).unwrap();
            let ts = subset_wedge(t, s, m).unwrap();
            let sign = if (s.len() * t.len()) % 2 == 1 { -1 } else { 1 };
            expect_eq(|| format!("S={s} T={t}"), &st, &ts.map(|(l, x)| (l, x * sign)))?;
            let left = w(st, u);
            let right = subset_wedge(t, u, m).unwrap().and_then(|(tu, s1)| {
                subset_wedge(s, tu, m).unwrap().map(|(l, s2)| (l, s1 * s2))
            });
            expect_eq(|| format!("S={s} T={t} U={u}"), &left, &right)
        })
    });

    rec.check("subset-order-total", "S ≺ T by cardinality, then lexicographically", |_| {
        let labels: Vec<SubsetLabel> = SubsetLabel::all(5).collect();
        Outcome::over(labels.iter().cartesian_product(&labels).cartesian_product(&labels), |((&a, &b), &c)| {
            let ab = compare_subsets(a, b);
            if ab != compare_subsets(b, a).reverse() || ((ab == Ordering::Equal) != (a == b)) {
                return Err(format!("antisymmetry fails for {a}, {b}"));
            }
            if ab != Ordering::Greater && compare_subsets(b, c) != Ordering::Greater && compare_subsets(a, c) == Ordering::Greater {
                return Err(format!("transitivity fails for {a} ≼ {b} ≼ {c}"));
            }
            Ok(())
        })
    });
}
