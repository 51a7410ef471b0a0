//! Divisibility cuts and slicing.
//!
//! Cuts are always prefixes `A ∩ [0,c]`. Without a Cantor part the
//! prefix-value function `G(c) = v(A ∩ [0,c])` is piecewise linear with
//! jumps at atoms, and is inverted exactly. With a Cantor part `G` is
//! continuous but only known up to certified brackets, and `c` is found by
//! bisection.

use num_traits::{One, Signed, Zero};

use super::{check_tol, Valuation, ValuationError};
use crate::interval::{Interval, IntervalSet};
use crate::rational::{format_rational, half, int, Rational};

/// Iteration cap for the bisection used when Cantor components are present.
pub const NO_CONVERGENCE_STEPS: usize = 4096;

/// Result of a cut: `piece = A ∩ [0,point]` (or `A ∩ [0,point)` when not `closed`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub piece: IntervalSet,
    pub point: Rational,
    pub closed: bool,
}

fn obstruction(at: &Rational, weight: &Rational) -> ValuationError {
    ValuationError::AtomObstruction {
        at: format_rational(at),
        weight: format_rational(weight),
    }
}

pub(super) fn cut(v: &Valuation, set: &IntervalSet, alpha: &Rational, tol: &Rational) -> Result<Cut, ValuationError> {
    check_tol(tol)?;
    if alpha.is_negative() || *alpha > Rational::one() {
        return Err(ValuationError::BadParameter(format!(
            "alpha = {} is not in [0,1]",
            format_rational(alpha)
        )));
    }
    let quarter = tol / int(4);
    let whole = v.evaluate_unchecked(set, &quarter);
    if whole.hi().is_zero() {
        return Err(ValuationError::ZeroPiece);
    }
    if alpha.is_zero() {
        return Ok(Cut {
            piece: IntervalSet::empty(),
            point: Rational::zero(),
            closed: false,
        });
    }
    if alpha.is_one() {
        return Ok(Cut {
            piece: set.clone(),
            point: Rational::one(),
            closed: true,
        });
    }
    let target = alpha * whole.midpoint();
    locate(v, set, &target, &(tol * half()))
}

/// Smallest prefix of `set` whose value is `target` (within `window` when
/// Cantor components are present). `target` must lie in `(0, v(set))`.
pub(super) fn locate(v: &Valuation, set: &IntervalSet, target: &Rational, window: &Rational) -> Result<Cut, ValuationError> {
    if v.has_singular_part() {
        if let Some(a) = v.atomic.atoms().iter().find(|a| set.contains_unchecked(&a.at)) {
            return Err(obstruction(&a.at, &a.weight));
        }
        bisect(v, set, target, window)
    } else {
        invert_exact(v, set, target)
    }
}

fn prefix_cut(set: &IntervalSet, c: Rational, closed: bool) -> Cut {
    Cut {
        piece: set.prefix(&c, closed),
        point: c,
        closed,
    }
}

fn invert_exact(v: &Valuation, set: &IntervalSet, target: &Rational) -> Result<Cut, ValuationError> {
    let atom_at = |x: &Rational| -> Rational {
        if !set.contains_unchecked(x) {
            return Rational::zero();
        }
        v.atomic
            .atoms()
            .iter()
            .find(|a| a.at == *x)
            .map(|a| a.weight.clone())
            .unwrap_or_else(Rational::zero)
    };

    let mut points: Vec<Rational> = vec![Rational::zero(), Rational::one()];
    points.extend(set.breakpoints());
    for p in v.ac.pieces() {
        points.push(p.support.lo().value.clone());
        points.push(p.support.hi().value.clone());
    }
    points.extend(v.atomic.atoms().iter().map(|a| a.at.clone()));
    points.sort();
    points.dedup();

    let mut cum = Rational::zero();
    for (i, b) in points.iter().enumerate() {
        let w = atom_at(b);
        if w.is_positive() {
            let after = &cum + &w;
            if cum < *target && *target < after {
                return Err(obstruction(b, &w));
            }
            if *target == after {
                return Ok(prefix_cut(set, b.clone(), true));
            }
            cum = after;
        }
        let Some(next) = points.get(i + 1) else { break };
        let mid = (b + next) * half();
        if !set.contains_unchecked(&mid) {
            continue;
        }
        let density = v.ac.density_at(&mid);
        let mass = &density * (next - b);
        if mass.is_positive() && *target <= &cum + &mass {
            let c = b + (target - &cum) / &density;
            // Stop short of an atom sitting exactly at the cut.
            let closed = !(c == *next && atom_at(next).is_positive());
            return Ok(prefix_cut(set, c, closed));
        }
        cum += mass;
    }
    Err(ValuationError::NoConvergence)
}

fn bisect(v: &Valuation, set: &IntervalSet, target: &Rational, window: &Rational) -> Result<Cut, ValuationError> {
    let eval_tol = window * half();
    let low_ok = target - window;
    let high_ok = target + window;
    let mut lo = Rational::zero();
    let mut hi = Rational::one();
    for _ in 0..NO_CONVERGENCE_STEPS {
        let mid = (&lo + &hi) * half();
        let g = v.evaluate_unchecked(&set.prefix(&mid, true), &eval_tol);
        if *g.lo() >= low_ok && *g.hi() <= high_ok {
            return Ok(prefix_cut(set, mid, true));
        }
        if *g.hi() < *target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(ValuationError::NoConvergence)
}

pub(super) fn slice(v: &Valuation, epsilon: &Rational, tol: &Rational) -> Result<Vec<IntervalSet>, ValuationError> {
    check_tol(tol)?;
    if !epsilon.is_positive() {
        return Err(ValuationError::BadParameter("epsilon must be positive".into()));
    }
    let heavy: Vec<String> = v
        .atomic
        .atoms()
        .iter()
        .filter(|a| a.weight > *epsilon)
        .map(|a| format!("{} (weight {})", format_rational(&a.at), format_rational(&a.weight)))
        .collect();
    if !heavy.is_empty() {
        return Err(ValuationError::NotSliceable(heavy));
    }

    let mut atom_pieces: Vec<IntervalSet> = v
        .atomic
        .atoms()
        .iter()
        .map(|a| Interval::point(a.at.clone()).map(IntervalSet::from))
        .collect::<Result<_, _>>()?;
    let atom_points = atom_pieces
        .iter()
        .fold(IntervalSet::empty(), |acc, s| acc.union(s));
    let rest = IntervalSet::unit().difference(&atom_points);
    let mass = Rational::one() - v.atomic.mass();

    let mut pieces = Vec::new();
    if mass.is_zero() {
        // Everything sits on the atoms; the null remainder rides along with the first one.
        if let Some(first) = atom_pieces.first_mut() {
            *first = first.union(&rest);
        }
    } else {
        let count = (&mass / epsilon).ceil().to_integer();
        let window = tol * half();
        let mut prev = IntervalSet::empty();
        let mut k = Rational::one();
        while k < Rational::from_integer(count.clone()) {
            let target = &k * epsilon;
            let cut = locate(v, &rest, &target, &window)?;
            pieces.push(cut.piece.difference(&prev));
            prev = cut.piece;
            k += Rational::one();
        }
        pieces.push(rest.difference(&prev));
    }
    pieces.extend(atom_pieces);
    pieces.sort_by(|a, b| {
        let key = |s: &IntervalSet| s.components().first().map(|c| c.lo().value.clone());
        key(a).cmp(&key(b))
    });
    Ok(pieces)
}
