//! Acceptance suite. Prints one PASS/FAIL line per criterion, then fails the
//! test if any criterion failed.
//!
//! Run with `cargo test -p cakecut --test acceptance -- --nocapture`.

mod common;

use std::collections::HashMap;
use std::io::Write;
use std::time::{Duration, Instant};

use cakecut::foundations::{cantor_iterate, disjoint_union_witness, removed_mass};
use cakecut::protocols::{last_diminisher, moving_knife, players_from, Allocation, Player};
use cakecut::rational::{int, pow2_neg, ratio, Rational};
use cakecut::valuation::staircase::staircase_bracket;
use cakecut::{CdfSide, CdfValue, IntervalSet, Valuation, ValuationError};
use common::{fig2, random_boxes, random_point, random_sc_free, random_set, rng, set};
use num_traits::{One, Pow, Zero};
use rand::Rng;

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn report(number: u32, title: &str, outcome: &Outcome) {
    let status = if outcome.pass { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    writeln!(out, "[{status}] {number}. {title}: {}", outcome.detail).unwrap();
}

fn exact(v: CdfValue) -> Option<Rational> {
    match v {
        CdfValue::Exact(x) => Some(x),
        CdfValue::Bracket { .. } => None,
    }
}

fn tol() -> Rational {
    pow2_neg(40)
}

fn ms(d: Duration) -> String {
    format!("{:.3} ms", d.as_secs_f64() * 1e3)
}

fn histogram_piece() -> Outcome {
    let v = fig2();
    let piece = set("[0,2/6]");
    let start = Instant::now();
    let value = v.evaluate(&piece, &tol());
    let elapsed = start.elapsed();
    let got = value.ok().and_then(exact);
    let correct = got.as_ref() == Some(&ratio(3, 17));
    let fast = elapsed < Duration::from_millis(1);
    Outcome {
        pass: correct && fast,
        detail: format!(
            "value {} (want exactly 3/17), runtime {} (limit 1 ms)",
            got.map_or("inexact".to_string(), |x| x.to_string()),
            ms(elapsed)
        ),
    }
}

fn cantor_masses() -> Outcome {
    let third = ratio(1, 3);
    let quarter = ratio(1, 4);
    let uniform = Valuation::uniform();
    let mut failures = Vec::new();
    let start = Instant::now();
    for n in 0..=20u32 {
        let remaining = ratio(2, 3).pow(n as i32);
        let a_n = cantor_iterate(&third, n).unwrap().set;
        if uniform.evaluate(&a_n, &tol()).ok().and_then(exact) != Some(remaining.clone()) {
            failures.push(format!("evaluate A_{n}"));
        }
        if Rational::one() - removed_mass(&third, n).unwrap() != remaining {
            failures.push(format!("removed_mass(1/3,{n})"));
        }
        let dust = ratio(1, 2) * (Rational::one() - pow2_neg(n));
        if removed_mass(&quarter, n).unwrap() != dust {
            failures.push(format!("removed_mass(1/4,{n})"));
        }
    }
    let elapsed = start.elapsed();
    let fast = elapsed < Duration::from_millis(10);
    Outcome {
        pass: failures.is_empty() && fast,
        detail: format!(
            "n = 0..=20, {} exactness failures {:?}, runtime {} (limit 10 ms)",
            failures.len(),
            failures,
            ms(elapsed)
        ),
    }
}

fn divisibility() -> Outcome {
    let mut r = rng(3);
    let mut failures = 0;
    let (mut free, mut atomic) = (0, 0);
    for i in 0..500 {
        let with_atoms = i % 2 == 1;
        let v = random_sc_free(&mut r, with_atoms);
        let whole = IntervalSet::unit();
        if v.is_atom_free() {
            free += 1;
            for _ in 0..100 {
                let alpha = random_point(&mut r, 1000);
                let ok = v
                    .cut(&whole, &alpha, &tol())
                    .ok()
                    .and_then(|piece| v.evaluate(&piece, &tol()).ok())
                    .and_then(exact)
                    == Some(alpha.clone());
                if !ok {
                    failures += 1;
                }
            }
        } else {
            atomic += 1;
            let (at, weight) = v
                .atoms()
                .into_iter()
                .max_by(|a, b| a.1.cmp(&b.1))
                .expect("valuation has an atom");
            let left = exact(v.cdf(&at, CdfSide::LeftLimit, &tol()).unwrap()).unwrap();
            let alpha = left + weight / int(2);
            if !matches!(v.cut(&whole, &alpha, &tol()), Err(ValuationError::AtomObstruction { .. })) {
                failures += 1;
            }
        }
    }
    Outcome {
        pass: failures == 0,
        detail: format!("{free} atom-free x 100 cuts, {atomic} with atoms, {failures} failures"),
    }
}

fn slicing() -> Outcome {
    let mut r = rng(4);
    let mut failures = 0;
    let mut pieces_seen = 0;
    for _ in 0..200 {
        let v = random_sc_free(&mut r, false);
        for eps in [ratio(1, 3), ratio(1, 7), ratio(1, 17)] {
            let Ok(pieces) = v.slice(&eps, &tol()) else {
                failures += 1;
                continue;
            };
            pieces_seen += pieces.len();
            let mut covered = IntervalSet::empty();
            let mut ok = true;
            for piece in &pieces {
                ok &= covered.is_disjoint(piece);
                covered = covered.union(piece);
                let value = v.evaluate(piece, &tol()).ok().and_then(exact);
                ok &= matches!(value, Some(x) if x > Rational::zero() && x <= eps);
            }
            ok &= covered == IntervalSet::unit();
            if !ok {
                failures += 1;
            }
        }
    }
    Outcome {
        pass: failures == 0,
        detail: format!("600 slicings, {pieces_seen} pieces checked, {failures} failures"),
    }
}

fn algebra_laws() -> Outcome {
    let mut r = rng(5);
    let v = fig2();
    let unit = IntervalSet::unit();
    let mut failures = 0;
    let start = Instant::now();
    for _ in 0..2500 {
        let a = random_set(&mut r, 24);
        let b = random_set(&mut r, 24);
        if a.union(&b).complement() != a.complement().intersect(&b.complement())
            || a.intersect(&b).complement() != a.complement().union(&b.complement())
        {
            failures += 1;
        }
        if a.complement().complement() != a || unit.complement() != IntervalSet::empty() {
            failures += 1;
        }
        if a.union(&a) != a || a.intersect(&a) != a {
            failures += 1;
        }
        let c = b.difference(&a);
        let lengths_add = a.union(&c).total_length() == a.total_length() + c.total_length();
        let values_add = exact(v.evaluate(&a.union(&c), &tol()).unwrap())
            == Some(exact(v.evaluate(&a, &tol()).unwrap()).unwrap() + exact(v.evaluate(&c, &tol()).unwrap()).unwrap());
        if !lengths_add || !values_add {
            failures += 1;
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: failures == 0 && elapsed < Duration::from_secs(5),
        detail: format!("10000 checks, {failures} failures, runtime {} (limit 5 s)", ms(elapsed)),
    }
}

/// Cantor function at `num/den` by long division in base 3: digits 0 and 2
/// become binary digits 0 and 1, and the first digit 1 ends the expansion
/// with a final binary 1. A repeated remainder closes the periodic tail.
fn ternary_oracle(num: u64, den: u64) -> Rational {
    if num == den {
        return Rational::one();
    }
    let mut bits: Vec<bool> = Vec::new();
    let mut seen: HashMap<u64, usize> = HashMap::new();
    let mut rem = num;
    let value = |bits: &[bool]| -> Rational {
        bits.iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(k, _)| pow2_neg(k as u32 + 1))
            .sum()
    };
    loop {
        if rem == 0 {
            return value(&bits);
        }
        if let Some(&start) = seen.get(&rem) {
            let head = value(&bits[..start]);
            let period = (bits.len() - start) as u32;
            let cycle = value(&bits[..]) - &head;
            return head + cycle / (Rational::one() - pow2_neg(period));
        }
        seen.insert(rem, bits.len());
        let digit = 3 * rem / den;
        rem = 3 * rem % den;
        match digit {
            0 => bits.push(false),
            2 => bits.push(true),
            _ => {
                bits.push(true);
                return value(&bits);
            }
        }
    }
}

fn staircase_oracle() -> Outcome {
    let mut r = rng(6);
    let third = ratio(1, 3);
    let mut violations = 0;
    for _ in 0..100 {
        let den: u64 = r.gen_range(1..=10_000);
        let num: u64 = r.gen_range(0..=den);
        let want = ternary_oracle(num, den);
        let u = ratio(num as i64, den as i64);
        if !staircase_bracket(&third, &u, 60).contains(&want) {
            violations += 1;
        }
    }
    let sample = ternary_oracle(1, 4);
    Outcome {
        pass: violations == 0 && sample == ratio(1, 3),
        detail: format!("100 points at depth 60, {violations} bracket violations, oracle F(1/4) = {sample}"),
    }
}

fn proportional(alloc: &Allocation, players: &[Player]) -> bool {
    let share = ratio(1, players.len() as i64);
    alloc.is_partition()
        && players.iter().all(|p| {
            let value = p.valuation.evaluate(alloc.piece(p.id), &tol()).ok().and_then(exact);
            matches!(value, Some(x) if x >= share)
        })
}

fn protocols() -> Outcome {
    let mut r = rng(7);
    let mut failures = 0;
    let start = Instant::now();
    for _ in 0..100 {
        let n = r.gen_range(2..=6);
        let players = players_from((0..n).map(|_| random_boxes(&mut r, 6)));
        for run in [last_diminisher, moving_knife] {
            match run(&players, &tol()) {
                Ok(alloc) if proportional(&alloc, &players) => {}
                _ => failures += 1,
            }
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        pass: failures == 0 && elapsed < Duration::from_secs(10),
        detail: format!(
            "100 instances x 2 protocols, {failures} failures, runtime {} (limit 10 s)",
            ms(elapsed)
        ),
    }
}

fn witness_growth() -> Outcome {
    let bad: Vec<u32> = (0..=64).filter(|&n| disjoint_union_witness(n).len() != n as usize).collect();
    Outcome {
        pass: bad.is_empty(),
        detail: format!("n = 0..=64, mismatched component counts at {bad:?}"),
    }
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("box histogram piece [0,2/6] is worth 3/17", histogram_piece),
        ("uniform mass of Cantor iterates and removed mass", cantor_masses),
        ("divisibility holds exactly when atom-free", divisibility),
        ("slicing into pieces worth at most epsilon", slicing),
        ("interval algebra laws", algebra_laws),
        ("staircase brackets the ternary digit-map value", staircase_oracle),
        ("protocols give proportional partitions", protocols),
        ("disjoint union witness keeps n components", witness_growth),
    ];
    let mut failed = Vec::new();
    for (i, (title, check)) in criteria.iter().enumerate() {
        let outcome = check();
        report(i as u32 + 1, title, &outcome);
        if !outcome.pass {
            failed.push(i + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
