//! Finite, executable witnesses for the measure-theoretic foundations.
//!
//! None of these return infinite objects. The Cantor set is approached
//! through its finite iterates, the countable disjoint union through its
//! partial unions, and the relative frequency stops at a finite horizon.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::interval::{Interval, IntervalSet};
use crate::rational::{half, int, pow2_neg, Rational};
use crate::valuation::{check_cantor_p, ValuationError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FoundationsError {
    #[error("parameter out of range: {0}")]
    BadParameter(String),
    #[error("index {index} out of range 1..={len}")]
    BadIndex { index: usize, len: usize },
    #[error("sequence entries must be pairwise distinct")]
    RepeatedPoint,
}

fn check_p(p: &Rational) -> Result<(), FoundationsError> {
    check_cantor_p(p).map_err(|e| match e {
        ValuationError::BadParameter(message) => FoundationsError::BadParameter(message),
        other => FoundationsError::BadParameter(other.to_string()),
    })
}

/// Stage `n` of the Cantor construction with gap parameter `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CantorIterate {
    pub p: Rational,
    pub n: u32,
    pub set: IntervalSet,
}

/// `A_n`: starting from `A_0 = [0,1]`, stage `i` removes the open middle
/// interval of length `p^i` from each of the `2^{i-1}` closed components.
pub fn cantor_iterate(p: &Rational, n: u32) -> Result<CantorIterate, FoundationsError> {
    check_p(p)?;
    let mut offsets = Vec::with_capacity(n as usize);
    let mut len = Rational::one();
    let mut gap = p.clone();
    for _ in 0..n {
        let child = (&len - &gap) * half();
        offsets.push(&len - &child);
        len = child;
        gap *= p;
    }
    // Every endpoint is a sum of offsets, so all of them are integers over
    // a common denominator and the doubling needs no reductions.
    let den = offsets
        .iter()
        .fold(len.denom().clone(), |d, o| d.lcm(o.denom()));
    let scaled = |r: &Rational| r.numer() * (&den / r.denom());
    let steps: Vec<BigInt> = offsets.iter().map(scaled).collect();
    let width = scaled(&len);
    let components = match den.to_u64() {
        Some(d) => small_iterate(&steps, &width, d),
        None => big_iterate(&steps, &width, &den),
    };
    Ok(CantorIterate {
        p: p.clone(),
        n,
        set: IntervalSet::from_canonical(components),
    })
}

/// Left endpoints of all `2^n` components as numerators over a common
/// denominator, in increasing order. Steps are applied finest first so that
/// each doubling appends a block lying entirely to the right.
fn doubled<T: Clone>(steps: &[T], zero: T, add: impl Fn(&T, &T) -> T) -> Vec<T> {
    let mut lefts = Vec::with_capacity(1 << steps.len());
    lefts.push(zero);
    for step in steps.iter().rev() {
        let shifted: Vec<T> = lefts.iter().map(|a| add(a, step)).collect();
        lefts.extend(shifted);
    }
    lefts
}

fn small_iterate(steps: &[BigInt], width: &BigInt, den: u64) -> Vec<Interval> {
    let small = |b: &BigInt| b.to_u64().expect("numerators are bounded by the denominator");
    let steps: Vec<u64> = steps.iter().map(small).collect();
    let width = small(width);
    let reduced = |num: u64| {
        let g = num.gcd(&den);
        Rational::new_raw(BigInt::from(num / g), BigInt::from(den / g))
    };
    doubled(&steps, 0, |a, b| a + b)
        .into_iter()
        .map(|a| Interval::closed_unchecked(reduced(a), reduced(a + width)))
        .collect()
}

fn big_iterate(steps: &[BigInt], width: &BigInt, den: &BigInt) -> Vec<Interval> {
    doubled(steps, BigInt::zero(), |a, b| a + b)
        .into_iter()
        .map(|a| {
            let hi = Rational::new(&a + width, den.clone());
            Interval::closed_unchecked(Rational::new(a, den.clone()), hi)
        })
        .collect()
}

/// Total length removed after `n` stages: `Σ_{i=1..n} 2^{i-1} p^i`.
pub fn removed_mass(p: &Rational, n: u32) -> Result<Rational, FoundationsError> {
    check_p(p)?;
    let mut total = Rational::zero();
    let mut term = p.clone();
    let two_p = p * int(2);
    for _ in 0..n {
        total += &term;
        term *= &two_p;
    }
    Ok(total)
}

/// Union of `[3·2^{-i-2}, 2^{-i}]` for `i = 0..n`. The intervals are
/// pairwise disjoint and never touch, so the result has exactly `n`
/// components at every finite stage.
pub fn disjoint_union_witness(n: u32) -> IntervalSet {
    IntervalSet::normalize((0..n).map(|i| {
        let hi = pow2_neg(i);
        let lo = int(3) * pow2_neg(i + 2);
        Interval::closed(lo, hi).expect("witness intervals lie in [0,1]")
    }))
}

/// `f_A(n)`: fraction of the first `n` sequence points satisfying `member`.
pub fn relative_frequency<F>(member: F, sequence: &[Rational], n: usize) -> Result<Rational, FoundationsError>
where
    F: Fn(&Rational) -> bool,
{
    if n == 0 || n > sequence.len() {
        return Err(FoundationsError::BadIndex {
            index: n,
            len: sequence.len(),
        });
    }
    let prefix = &sequence[..n];
    let mut seen = HashSet::with_capacity(n);
    if !prefix.iter().all(|x| seen.insert(x)) {
        return Err(FoundationsError::RepeatedPoint);
    }
    let hits = prefix.iter().filter(|x| member(x)).count();
    Ok(Rational::new(BigInt::from(hits), BigInt::from(n)))
}

/// First `n` points of the base-2 van der Corput sequence, starting at index 0.
pub fn van_der_corput(n: usize) -> Vec<Rational> {
    (0..n as u64)
        .map(|mut k| {
            let mut x = Rational::zero();
            let mut scale = half();
            while k > 0 {
                if k & 1 == 1 {
                    x += &scale;
                }
                scale *= half();
                k >>= 1;
            }
            x
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;

    fn set(s: &str) -> IntervalSet {
        s.parse().unwrap()
    }

    #[test]
    fn middle_third_iterates() {
        let third = ratio(1, 3);
        assert_eq!(cantor_iterate(&third, 0).unwrap().set, IntervalSet::unit());
        assert_eq!(cantor_iterate(&third, 1).unwrap().set, set("[0,1/3], [2/3,1]"));
        assert_eq!(
            cantor_iterate(&third, 2).unwrap().set,
            set("[0,1/9], [2/9,1/3], [2/3,7/9], [8/9,1]")
        );
    }

    #[test]
    fn quarter_iterates() {
        let q = ratio(1, 4);
        let a2 = cantor_iterate(&q, 2).unwrap().set;
        assert_eq!(a2, set("[0,5/32], [7/32,3/8], [5/8,25/32], [27/32,1]"));
        assert_eq!(a2.total_length(), ratio(5, 8));
    }

    #[test]
    fn rejects_bad_p() {
        for p in [ratio(0, 1), ratio(1, 2), ratio(-1, 5)] {
            assert!(matches!(cantor_iterate(&p, 1), Err(FoundationsError::BadParameter(_))));
            assert!(matches!(removed_mass(&p, 1), Err(FoundationsError::BadParameter(_))));
        }
    }

    #[test]
    fn removed_mass_examples() {
        assert_eq!(removed_mass(&ratio(1, 5), 0).unwrap(), ratio(0, 1));
        assert_eq!(removed_mass(&ratio(1, 3), 2).unwrap(), ratio(5, 9));
        assert_eq!(removed_mass(&ratio(1, 4), 2).unwrap(), ratio(3, 8));
    }

    #[test]
    fn witness_examples() {
        assert_eq!(disjoint_union_witness(1), set("[3/4,1]"));
        assert_eq!(disjoint_union_witness(2), set("[3/8,1/2], [3/4,1]"));
        assert_eq!(disjoint_union_witness(5).len(), 5);
        assert!(disjoint_union_witness(0).is_empty());
    }

    #[test]
    fn frequencies() {
        let seq = van_der_corput(64);
        assert_eq!(relative_frequency(|_| true, &seq, 7).unwrap(), ratio(1, 1));
        assert_eq!(relative_frequency(|_| false, &seq, 7).unwrap(), ratio(0, 1));
        assert_eq!(
            relative_frequency(|x| *x < ratio(1, 2), &seq, 64).unwrap(),
            ratio(1, 2)
        );
        assert_eq!(
            relative_frequency(|_| true, &seq, 65),
            Err(FoundationsError::BadIndex { index: 65, len: 64 })
        );
        assert!(relative_frequency(|_| true, &seq, 0).is_err());
        let dup = vec![ratio(1, 2), ratio(1, 2)];
        assert_eq!(relative_frequency(|_| true, &dup, 2), Err(FoundationsError::RepeatedPoint));
    }

    #[test]
    fn van_der_corput_prefix() {
        assert_eq!(
            van_der_corput(4),
            vec![ratio(0, 1), ratio(1, 2), ratio(1, 4), ratio(3, 4)]
        );
    }
}
