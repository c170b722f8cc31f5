use rand::Rng;

use crate::error::Error;
use crate::graded::{q, qi, sign_q};
use crate::harness::suites::{expect_eq, rand_q};
use crate::harness::{Outcome, Recorder};
use crate::lie::{
    bar_jacobians, dbarexp_direct, dbarexp_formula, dexp_direct, dexp_formula, exp_pullback_failure, jacobians,
    mat_exp, LieBasis, SquareMatrix,
};

fn rand_upper(rng: &mut impl Rng, n: usize) -> SquareMatrix {
    let mut m = SquareMatrix::zero(n);
    for r in 0..n {
        for c in r + 1..n {
            if rng.gen_bool(0.6) {
                m.set(r, c, rand_q(rng));
            }
        }
    }
    m
}

/// `(n, Z, W)` with `n` cycling through `2..=cap`.
fn rand_pairs(rng: &mut impl Rng, cap: usize, count: usize) -> Vec<(usize, SquareMatrix, SquareMatrix)> {
    (0..count)
        .map(|i| {
            let n = 2 + i % (cap - 1);
            (n, rand_upper(rng, n), rand_upper(rng, n))
        })
        .collect()
}

fn unit(n: usize, i: usize, j: usize) -> SquareMatrix {
    SquareMatrix::unit(n, i, j)
}

pub(crate) fn run(rec: &mut Recorder) {
    let cap = rec.cfg.lie_dim;
    let samples = rec.cfg.samples_or(50);

    rec.check("exp-examples", "exp(0) = I, exp(E₁₂) = I + E₁₂, exp(Z)exp(−Z) = I", |rng| {
        let mut cases = vec![(3, SquareMatrix::zero(3)), (3, unit(3, 1, 2))];
        cases.extend((0..10).map(|i| {
            let n = 2 + i % (cap - 1);
            (n, rand_upper(rng, n))
        }));
        Outcome::over(cases, |(n, z)| {
            let e = mat_exp(&z).map_err(|e| e.to_string())?;
            let back = mat_exp(&z.scale(&qi(-1))).map_err(|e| e.to_string())?;
            expect_eq(|| format!("Z={z}"), &e.mul(&back), &SquareMatrix::identity(n))?;
            if z == unit(3, 1, 2) {
                expect_eq(|| "exp(E₁₂)".into(), &e, &SquareMatrix::identity(3).add(&z))?;
            }
            Ok(())
        })
    });

    rec.check("non-nilpotent-rejected", "exp and its differentials reject non-nilpotent input", |_| {
        let bad = SquareMatrix::identity(2).add(&unit(2, 1, 2));
        let w = unit(2, 1, 2);
        let results = [
            mat_exp(&bad).err(),
            dexp_direct(&bad, &w).err(),
            dexp_formula(&w, &bad).err(),
            dexp_direct(&unit(2, 1, 2), &unit(2, 2, 1)).err(),
        ];
        Outcome::over(results, |e| match e {
            Some(Error::Unsupported(_)) => Ok(()),
            other => Err(format!("expected an unsupported-input error, got {other:?}")),
        })
    });

    rec.check("dexp-examples", "d(exp)_0 = id, d(exp)_{E₁₂}(E₂₃) = E₂₃ + ½E₁₃", |_| {
        let want = unit(3, 2, 3).add(&unit(3, 1, 3).scale(&q(1, 2)));
        let z0 = SquareMatrix::zero(3);
        let cases = vec![
            (unit(3, 1, 2), unit(3, 2, 3), want),
            (z0.clone(), unit(3, 1, 3), unit(3, 1, 3)),
            (z0, unit(3, 2, 3), unit(3, 2, 3)),
        ];
        Outcome::over(cases, |(z, w, want)| {
            expect_eq(|| format!("direct Z={z} W={w}"), &dexp_direct(&z, &w).unwrap(), &want)?;
            expect_eq(|| format!("formula Z={z} W={w}"), &dexp_formula(&z, &w).unwrap(), &want)
        })
    });

    rec.check("dexp-matches-formula", "d(exp)_Z = exp(Z)·(1 − e^{−ad Z})/ad Z", |rng| {
        Outcome::over(rand_pairs(rng, cap, samples), |(_, z, w)| {
            expect_eq(|| format!("Z={z} W={w}"), &dexp_direct(&z, &w).unwrap(), &dexp_formula(&z, &w).unwrap())
        })
    });

    rec.check("dbarexp-matches-formula", "d(exp̄)_Z = exp(−Z)·(−(e^{ad Z} − 1)/ad Z)", |rng| {
        Outcome::over(rand_pairs(rng, cap, samples), |(_, z, w)| {
            expect_eq(|| format!("Z={z} W={w}"), &dbarexp_direct(&z, &w).unwrap(), &dbarexp_formula(&z, &w).unwrap())
        })
    });

    rec.check("dexp-linear", "d(exp)_Z(aW + bV) = a·d(exp)_Z(W) + b·d(exp)_Z(V)", |rng| {
        let cases: Vec<_> = rand_pairs(rng, cap, samples)
            .into_iter()
            .map(|(n, z, w)| (z, w, rand_upper(rng, n), rand_q(rng), rand_q(rng)))
            .collect();
        Outcome::over(cases, |(z, w, v, a, b)| {
            let lhs = dexp_direct(&z, &w.scale(&a).add(&v.scale(&b))).unwrap();
            let rhs = dexp_direct(&z, &w).unwrap().scale(&a).add(&dexp_direct(&z, &v).unwrap().scale(&b));
            expect_eq(|| format!("Z={z} W={w} V={v}"), &lhs, &rhs)
        })
    });

    rec.check("heisenberg-differentials", "Z = E₁₂ + E₂₃: direct and series differentials agree on the basis", |_| {
        let h = LieBasis::heisenberg();
        let z = unit(3, 1, 2).add(&unit(3, 2, 3));
        Outcome::over(h.elements().to_vec(), |w| {
            expect_eq(|| format!("W={w}"), &dexp_direct(&z, &w).unwrap(), &dexp_formula(&z, &w).unwrap())?;
            expect_eq(|| format!("W={w}"), &dbarexp_direct(&z, &w).unwrap(), &dbarexp_formula(&z, &w).unwrap())
        })
    });

    rec.check("jacobians-agree", "det d(exp) = det((1 − e^{−ad})/ad) = 1, det d(exp̄) = det(−(e^{ad} − 1)/ad)", |rng| {
        let mut cases = Vec::new();
        for i in 0..samples {
            let n = 2 + i % (cap - 1);
            cases.push((LieBasis::strictly_upper(n), rand_upper(rng, n)));
        }
        cases.push((LieBasis::heisenberg(), SquareMatrix::zero(3)));
        Outcome::over(cases, |(basis, z)| {
            let j = jacobians(&z, &basis).map_err(|e| e.to_string())?;
            expect_eq(|| format!("exp side Z={z}"), &j.direct, &j.formula)?;
            expect_eq(|| format!("exp side Z={z}"), &j.direct, &qi(1))?;
            let b = bar_jacobians(&z, &basis).map_err(|e| e.to_string())?;
            expect_eq(|| format!("exp̄ side Z={z}"), &b.direct, &b.formula)?;
            // −(e^{ad} − 1)/ad is −1 times a unipotent matrix
            expect_eq(|| format!("exp̄ side Z={z}"), &b.direct, &sign_q(basis.dim() as i64))
        })
    });

    rec.check("span-required", "Z outside the span of the basis is rejected", |_| {
        let h = LieBasis::heisenberg();
        match jacobians(&unit(3, 2, 1), &h) {
            Err(Error::InvalidInput(_)) => Outcome::pass(1),
            other => Outcome::Fail { cases: 1, witness: format!("{other:?}"), detail: None },
        }
    });

    rec.check("bracket-closure", "brackets of basis elements lie in the span", |_| {
        let h = LieBasis::heisenberg();
        let mut table = h.closure_table();
        table.sort();
        let want = vec!["[X1, X2] = 0".to_string(), "[X1, X3] = X2".into(), "[X2, X3] = 0".into()];
        if table != want {
            return Outcome::Fail { cases: 1, witness: table.join(", "), detail: None };
        }
        match LieBasis::new(vec![unit(3, 1, 2), unit(3, 2, 3)]) {
            Err(Error::InvalidInput(_)) => Outcome::pass(2),
            other => Outcome::Fail { cases: 2, witness: format!("{{E₁₂, E₂₃}} accepted: {other:?}"), detail: None },
        }
    });

    rec.check("exp-pullback", "left-invariant fields in exponential coordinates are (ad/(1 − e^{−ad}))·∂", |_| {
        let bases = vec![LieBasis::heisenberg(), LieBasis::strictly_upper(4)];
        Outcome::over(bases, |b| match exp_pullback_failure(&b) {
            None => Ok(()),
            Some(j) => Err(format!("n={} fails at X{}", b.size(), j + 1)),
        })
    });
}
