//! Distribution function of the natural probability measure on a Cantor set `C_p`.
//!
//! `C_p` is built from `[0,1]` by removing, at stage `i`, the open middle
//! interval of length `p^i` from each of the `2^{i-1}` remaining closed
//! components. The measure gives each of the `2^k` stage-`k` components mass
//! `2^{-k}`. Its distribution function is the generalized devil's staircase.
//!
//! Evaluation descends the component tree. At depth `k` the point is either
//! on a removed gap (the staircase is flat there, and the value is exact) or
//! inside a component of mass `2^{-k}`, which brackets the value with width
//! `2^{-k}`. For `p = 1/3` every stage is a scaled copy of the first, so the
//! relative position of the point follows the ternary digit map; for a
//! rational point that orbit is eventually periodic and the value is
//! recovered exactly once a repeat is seen.

use std::collections::HashMap;

use num_traits::{One, Zero};

use super::CdfValue;
use crate::rational::{half, ratio, Rational};

/// Whether the construction is self-similar, i.e. `p = 1/3`.
pub fn is_middle_third(p: &Rational) -> bool {
    *p == ratio(1, 3)
}

/// Staircase value at `u ∈ [0,1]`, refining at most `max_depth` levels.
///
/// With `detect_cycles` (only meaningful for `p = 1/3`) a revisited relative
/// position closes the geometric series and yields an exact value.
pub(crate) fn staircase(p: &Rational, u: &Rational, max_depth: u32, detect_cycles: bool) -> CdfValue {
    if *u <= Rational::zero() {
        return CdfValue::zero();
    }
    if *u >= Rational::one() {
        return CdfValue::Exact(Rational::one());
    }
    let detect_cycles = detect_cycles && is_middle_third(p);
    let h = half();

    // Value so far is acc + mass * F(u) on the current component, which has
    // length len and is split with relative child length ratio.
    let mut acc = Rational::zero();
    let mut mass = Rational::one();
    let mut len = Rational::one();
    let mut p_pow = p.clone();
    let mut u = u.clone();
    let mut seen: HashMap<Rational, (Rational, Rational)> = HashMap::new();

    for _ in 0..max_depth {
        if u.is_zero() {
            return CdfValue::Exact(acc);
        }
        if u.is_one() {
            return CdfValue::Exact(acc + mass);
        }
        if detect_cycles {
            if let Some((acc_j, mass_j)) = seen.get(&u) {
                // F(u_j) = (acc - acc_j) / (mass_j - mass)
                let f_j = (&acc - acc_j) / (mass_j - &mass);
                return CdfValue::Exact(acc_j + mass_j * f_j);
            }
            seen.insert(u.clone(), (acc.clone(), mass.clone()));
        }
        let child = (&len - &p_pow) * &h;
        let r = &child / &len;
        let right_start = Rational::one() - &r;
        mass *= &h;
        if u <= r {
            u /= &r;
        } else if u < right_start {
            return CdfValue::Exact(acc + mass);
        } else {
            acc += &mass;
            u = (u - right_start) / &r;
        }
        len = child;
        p_pow *= p;
    }
    if u.is_zero() {
        return CdfValue::Exact(acc);
    }
    if u.is_one() {
        return CdfValue::Exact(acc + mass);
    }
    let hi = &acc + &mass;
    CdfValue::bracket(acc, hi)
}

/// Staircase value at `u` by plain recursion to `depth` levels; the bracket
/// has width at most `2^{-depth}`.
pub fn staircase_bracket(p: &Rational, u: &Rational, depth: u32) -> CdfValue {
    staircase(p, u, depth, false)
}

/// Exact value of the classical Cantor function at a rational `u ∈ [0,1]`,
/// via the ternary digit map (`0 → 0`, `2 → 1` read in binary, stopping at
/// the first digit `1`).
pub fn cantor_third_exact(u: &Rational) -> Rational {
    match staircase(&ratio(1, 3), u, u32::MAX, true) {
        CdfValue::Exact(x) => x,
        CdfValue::Bracket { .. } => unreachable!("rational orbits of the digit map are periodic"),
    }
}

/// Lengths of the stage-`k` components of `C_p` for `k = 0..=n`.
pub fn component_lengths(p: &Rational, n: u32) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n as usize + 1);
    let mut len = Rational::one();
    let mut p_pow = p.clone();
    out.push(len.clone());
    for _ in 0..n {
        len = (&len - &p_pow) * half();
        p_pow *= p;
        out.push(len.clone());
    }
    out
}
