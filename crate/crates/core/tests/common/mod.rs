//! Shared generators for the integration tests.
#![allow(dead_code)]

use cakecut::interval::{EndKind, Endpoint, Interval, IntervalSet};
use cakecut::rational::{int, ratio, Rational};
use cakecut::valuation::{Atom, AtomPart, CantorPart, DensityPart, DensityPiece, Valuation};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn set(s: &str) -> IntervalSet {
    s.parse().unwrap()
}

pub fn fig2() -> Valuation {
    let counts = [2u64, 1, 5, 2, 4, 3];
    let boxes: Vec<_> = (0..6)
        .map(|i| {
            let (a, b) = (ratio(i, 6), ratio(i + 1, 6));
            let iv = if i == 5 {
                Interval::closed(a, b)
            } else {
                Interval::closed_open(a, b)
            };
            (iv.unwrap(), counts[i as usize])
        })
        .collect();
    Valuation::from_boxes(&boxes).unwrap()
}

pub fn random_point(rng: &mut impl Rng, max_den: i64) -> Rational {
    let den = rng.gen_range(1..=max_den);
    ratio(rng.gen_range(0..=den), den)
}

fn random_kind(rng: &mut impl Rng) -> EndKind {
    if rng.gen() {
        EndKind::Closed
    } else {
        EndKind::Open
    }
}

/// A random valid interval; about one in eight is a singleton.
pub fn random_interval(rng: &mut impl Rng, max_den: i64) -> Interval {
    loop {
        let a = random_point(rng, max_den);
        if rng.gen_ratio(1, 8) {
            return Interval::point(a).unwrap();
        }
        let b = random_point(rng, max_den);
        if a == b {
            continue;
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        return Interval::new(Endpoint::new(lo, random_kind(rng)), Endpoint::new(hi, random_kind(rng))).unwrap();
    }
}

pub fn random_raw(rng: &mut impl Rng, max_den: i64) -> Vec<Interval> {
    let k = rng.gen_range(0..=5);
    (0..k).map(|_| random_interval(rng, max_den)).collect()
}

pub fn random_set(rng: &mut impl Rng, max_den: i64) -> IntervalSet {
    IntervalSet::normalize(random_raw(rng, max_den))
}

/// Sorted cut points `0 = x_0 < ... < x_k = 1` with small denominators.
pub fn random_breaks(rng: &mut impl Rng, max_pieces: usize) -> Vec<Rational> {
    let k = rng.gen_range(1..=max_pieces);
    let mut xs: Vec<Rational> = (0..k - 1).map(|_| random_point(rng, 48)).collect();
    xs.push(int(0));
    xs.push(int(1));
    xs.sort();
    xs.dedup();
    xs
}

fn partition(xs: &[Rational]) -> Vec<Interval> {
    xs.windows(2)
        .enumerate()
        .map(|(i, w)| {
            if i + 2 == xs.len() {
                Interval::closed(w[0].clone(), w[1].clone()).unwrap()
            } else {
                Interval::closed_open(w[0].clone(), w[1].clone()).unwrap()
            }
        })
        .collect()
}

/// Random box valuation; some pieces may carry zero boxes.
pub fn random_boxes(rng: &mut impl Rng, max_pieces: usize) -> Valuation {
    loop {
        let pieces = partition(&random_breaks(rng, max_pieces));
        let counts: Vec<u64> = pieces.iter().map(|_| rng.gen_range(0..6)).collect();
        if counts.iter().all(|&c| c == 0) {
            continue;
        }
        let boxes: Vec<_> = pieces.into_iter().zip(counts).collect();
        return Valuation::from_boxes(&boxes).unwrap();
    }
}

/// Random valuation without a Cantor part. With `atoms`, one to three point
/// masses are mixed in.
pub fn random_sc_free(rng: &mut impl Rng, atoms: bool) -> Valuation {
    let pieces = partition(&random_breaks(rng, 8));
    let weights: Vec<i64> = pieces.iter().map(|_| rng.gen_range(0..6)).collect();
    let mut atom_list: Vec<(Rational, i64)> = Vec::new();
    if atoms {
        let mut locs: Vec<Rational> = (0..rng.gen_range(1..=3)).map(|_| random_point(rng, 24)).collect();
        locs.sort();
        locs.dedup();
        locs.shuffle(rng);
        atom_list = locs.into_iter().map(|x| (x, rng.gen_range(1..5))).collect();
    }
    let mut total: Rational = pieces
        .iter()
        .zip(&weights)
        .map(|(p, w)| p.length() * int(*w))
        .sum();
    total += atom_list.iter().map(|(_, w)| int(*w)).sum::<Rational>();
    if total == int(0) {
        return random_sc_free(rng, atoms);
    }
    let density = DensityPart::new(
        pieces
            .into_iter()
            .zip(&weights)
            .filter(|(_, w)| **w > 0)
            .map(|(support, w)| DensityPiece { support, density: int(*w) / &total })
            .collect(),
    )
    .unwrap();
    let atomic = AtomPart::new(
        atom_list
            .into_iter()
            .map(|(at, w)| Atom { at, weight: int(w) / &total })
            .collect(),
    )
    .unwrap();
    Valuation::new(atomic, density, CantorPart::default()).unwrap()
}
