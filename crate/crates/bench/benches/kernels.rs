use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use hkr_core::atiyah::{duflo_det, phi_l, AtiyahTensor};
use hkr_core::harness::text::{parse_chain, parse_ext};
use hkr_core::hochschild::{hkr, hoch_diff, shuffle_mul};
use hkr_core::lie::{dexp_direct, dexp_formula, SquareMatrix};
use hkr_core::odd::{adjoint, fr, i_op, j_op, Side};
use hkr_core::series::{series, SeriesName};
use hkr_core::{ExtElement, Rational, SubsetLabel};

fn full_ext(side: Side, m: usize) -> ExtElement {
    let mut e = ExtElement::zero(side, m);
    for l in SubsetLabel::all(m) {
        e.add_term(l, Rational::new((l.0 as i64 + 1).into(), 2.into()));
    }
    e
}

fn odd_algebra(c: &mut Criterion) {
    let mut g = c.benchmark_group("odd");
    for m in 2..=4 {
        let (a, b) = (full_ext(Side::V, m), full_ext(Side::V, m));
        g.bench_with_input(BenchmarkId::new("wedge", m), &m, |bch, _| bch.iter(|| black_box(&a) * black_box(&b)));
        let op = i_op(&a).unwrap().compose(&j_op(&full_ext(Side::Dual, m)).unwrap());
        g.bench_with_input(BenchmarkId::new("symbol", m), &m, |bch, _| bch.iter(|| fr(black_box(&op))));
        g.bench_with_input(BenchmarkId::new("adjoint", m), &m, |bch, _| bch.iter(|| adjoint(black_box(&op))));
    }
    g.finish();
}

fn hochschild(c: &mut Criterion) {
    let a = parse_chain("w[x1 + x2; x2^2; x1*x3; x3]", Some(3)).unwrap();
    let b = parse_chain("w[1; x1; x2 - x3]", Some(3)).unwrap();
    c.bench_function("hochschild/differential", |bch| bch.iter(|| hoch_diff(black_box(&a))));
    c.bench_function("hochschild/shuffle", |bch| bch.iter(|| shuffle_mul(black_box(&a), black_box(&b))));
    c.bench_function("hochschild/hkr", |bch| bch.iter(|| hkr(black_box(&a))));
}

fn atiyah(c: &mut Criterion) {
    let a = AtiyahTensor::new(3, [(1, 2, 2, Rational::from_integer(1.into())), (3, 1, 2, Rational::new(1.into(), 2.into()))]).unwrap();
    c.bench_function("atiyah/series-order-12", |bch| bch.iter(|| series(SeriesName::DufloDen, black_box(12))));
    c.bench_function("atiyah/phi-l-m3", |bch| bch.iter(|| phi_l(black_box(&a))));
    c.bench_function("atiyah/duflo-det-m3", |bch| bch.iter(|| duflo_det(black_box(&a))));
}

fn lie(c: &mut Criterion) {
    let n = 5;
    let mut z = SquareMatrix::zero(n);
    let mut w = SquareMatrix::zero(n);
    for r in 0..n {
        for col in r + 1..n {
            z.set(r, col, Rational::new(((r + col) as i64).into(), 3.into()));
            w.set(r, col, Rational::from_integer(((r * col) as i64 - 2).into()));
        }
    }
    c.bench_function("lie/dexp-direct-5", |bch| bch.iter(|| dexp_direct(black_box(&z), black_box(&w)).unwrap()));
    c.bench_function("lie/dexp-formula-5", |bch| bch.iter(|| dexp_formula(black_box(&z), black_box(&w)).unwrap()));
}

fn parsing(c: &mut Criterion) {
    c.bench_function("text/ext", |bch| bch.iter(|| parse_ext(black_box("3/2*x{1,3} - x{2} + 5*x{1,2,3,4}"), None).unwrap()));
}

criterion_group!(benches, odd_algebra, hochschild, atiyah, lie, parsing);
criterion_main!(benches);
