//! The check lists of each suite.

pub(crate) mod atiyah;
pub(crate) mod graded;
pub(crate) mod hochschild;
pub(crate) mod lie;
pub(crate) mod odd;
pub(crate) mod rr;

use num_bigint::BigInt;
use rand::Rng;

use crate::graded::{Rational, SubsetLabel};
use crate::odd::{BiSymbol, EndOperator};

/// A small nonzero rational: numerator in ±1..=4, denominator in 1..=3.
pub(crate) fn rand_q(rng: &mut impl Rng) -> Rational {
    let n = rng.gen_range(1..=4) * if rng.gen_bool(0.5) { 1 } else { -1 };
    Rational::new(BigInt::from(n), BigInt::from(rng.gen_range(1..=3)))
}

pub(crate) fn rand_label(rng: &mut impl Rng, m: usize) -> SubsetLabel {
    SubsetLabel(rng.gen_range(0..(1u32 << m)))
}

pub(crate) fn rand_symbol(rng: &mut impl Rng, m: usize, terms: usize) -> BiSymbol {
    let mut b = BiSymbol::zero(m);
    for _ in 0..terms {
        b.add_term(rand_label(rng, m), rand_label(rng, m), rand_q(rng));
    }
    b
}

/// A random operator with `terms` matrix entries.
pub(crate) fn rand_op(rng: &mut impl Rng, m: usize, terms: usize) -> EndOperator {
    let mut op = EndOperator::zero(m);
    for _ in 0..terms {
        op.add_entry(rand_label(rng, m), rand_label(rng, m), &rand_q(rng));
    }
    op
}

/// `Ok(())` when equal, otherwise a witness built from `ctx` and both sides.
pub(crate) fn expect_eq<T: PartialEq + std::fmt::Debug>(ctx: impl FnOnce() -> String, lhs: &T, rhs: &T) -> Result<(), String> {
    if lhs == rhs {
        Ok(())
    } else {
        Err(format!("{}: lhs = {lhs:?}, rhs = {rhs:?}", ctx()))
    }
}
