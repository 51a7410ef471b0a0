//! Finite unions of intervals of the unit cake `[0,1]`.
//!
//! An [`IntervalSet`] is kept in a canonical form: its components are
//! pairwise disjoint, sorted, and no two of them could be merged into a
//! single interval. Two sets are equal as point sets iff their canonical
//! forms are equal, so `==` on [`IntervalSet`] is set equality.
//!
//! The family of such sets is closed under union, intersection, complement
//! (relative to `[0,1]`) and difference; all of these are implemented here
//! exactly, with per-endpoint open/closed flags.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::rational::{format_rational, parse_rational, Rational, RationalSum};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum IntervalError {
    #[error("invalid interval {0}")]
    InvalidInterval(String),
    #[error("point {0} lies outside the cake [0,1]")]
    OutOfCake(String),
    #[error("cannot parse interval set: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EndKind {
    Open,
    Closed,
}

impl EndKind {
    pub fn flip(self) -> Self {
        match self {
            EndKind::Open => EndKind::Closed,
            EndKind::Closed => EndKind::Open,
        }
    }

    pub fn is_closed(self) -> bool {
        self == EndKind::Closed
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Endpoint {
    pub value: Rational,
    pub kind: EndKind,
}

impl Endpoint {
    pub fn new(value: Rational, kind: EndKind) -> Self {
        Endpoint { value, kind }
    }

    pub fn closed(value: Rational) -> Self {
        Endpoint::new(value, EndKind::Closed)
    }

    pub fn open(value: Rational) -> Self {
        Endpoint::new(value, EndKind::Open)
    }
}

fn in_cake(x: &Rational) -> bool {
    !x.is_negative() && *x <= Rational::one()
}

pub(crate) fn check_in_cake(x: &Rational) -> Result<(), IntervalError> {
    if in_cake(x) {
        Ok(())
    } else {
        Err(IntervalError::OutOfCake(format_rational(x)))
    }
}

/// A nonempty interval `⟨lo, hi⟩ ⊆ [0,1]`.
///
/// Either `lo < hi`, or `lo == hi` with both ends closed (a singleton).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Endpoint,
    hi: Endpoint,
}

impl Interval {
    pub fn new(lo: Endpoint, hi: Endpoint) -> Result<Self, IntervalError> {
        check_in_cake(&lo.value)?;
        check_in_cake(&hi.value)?;
        let ok = match lo.value.cmp(&hi.value) {
            Ordering::Less => true,
            Ordering::Equal => lo.kind.is_closed() && hi.kind.is_closed(),
            Ordering::Greater => false,
        };
        if !ok {
            return Err(IntervalError::InvalidInterval(render(&lo, &hi)));
        }
        Ok(Interval { lo, hi })
    }

    /// `[a,b]`
    pub fn closed(a: Rational, b: Rational) -> Result<Self, IntervalError> {
        Interval::new(Endpoint::closed(a), Endpoint::closed(b))
    }

    /// `[a,b]` for endpoints already known to satisfy `0 <= a <= b <= 1`.
    pub(crate) fn closed_unchecked(a: Rational, b: Rational) -> Self {
        debug_assert!(Rational::zero() <= a && a <= b && b <= Rational::one());
        Interval {
            lo: Endpoint::closed(a),
            hi: Endpoint::closed(b),
        }
    }

    /// `(a,b)`
    pub fn open(a: Rational, b: Rational) -> Result<Self, IntervalError> {
        Interval::new(Endpoint::open(a), Endpoint::open(b))
    }

    /// `[a,b)`
    pub fn closed_open(a: Rational, b: Rational) -> Result<Self, IntervalError> {
        Interval::new(Endpoint::closed(a), Endpoint::open(b))
    }

    /// `(a,b]`
    pub fn open_closed(a: Rational, b: Rational) -> Result<Self, IntervalError> {
        Interval::new(Endpoint::open(a), Endpoint::closed(b))
    }

    /// The singleton `{a} = [a,a]`.
    pub fn point(a: Rational) -> Result<Self, IntervalError> {
        Interval::closed(a.clone(), a)
    }

    pub fn unit() -> Self {
        Interval {
            lo: Endpoint::closed(Rational::zero()),
            hi: Endpoint::closed(Rational::one()),
        }
    }

    pub fn lo(&self) -> &Endpoint {
        &self.lo
    }

    pub fn hi(&self) -> &Endpoint {
        &self.hi
    }

    pub fn is_singleton(&self) -> bool {
        self.lo.value == self.hi.value
    }

    pub fn length(&self) -> Rational {
        &self.hi.value - &self.lo.value
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above_lo = match self.lo.kind {
            EndKind::Closed => *x >= self.lo.value,
            EndKind::Open => *x > self.lo.value,
        };
        let below_hi = match self.hi.kind {
            EndKind::Closed => *x <= self.hi.value,
            EndKind::Open => *x < self.hi.value,
        };
        above_lo && below_hi
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&render(&self.lo, &self.hi))
    }
}

fn render(lo: &Endpoint, hi: &Endpoint) -> String {
    format!(
        "{}{},{}{}",
        if lo.kind.is_closed() { '[' } else { '(' },
        format_rational(&lo.value),
        format_rational(&hi.value),
        if hi.kind.is_closed() { ']' } else { ')' },
    )
}

/// Builds an interval from raw endpoints when they describe a nonempty set.
fn nonempty(lo: Endpoint, hi: Endpoint) -> Option<Interval> {
    match lo.value.cmp(&hi.value) {
        Ordering::Less => Some(Interval { lo, hi }),
        Ordering::Equal if lo.kind.is_closed() && hi.kind.is_closed() => Some(Interval { lo, hi }),
        _ => None,
    }
}

/// Lower endpoints: smaller value first; at equal values a closed end reaches further left.
fn cmp_lo(a: &Endpoint, b: &Endpoint) -> Ordering {
    a.value
        .cmp(&b.value)
        .then_with(|| b.kind.cmp(&a.kind))
}

/// Upper endpoints: larger value reaches further; at equal values closed wins.
fn cmp_hi(a: &Endpoint, b: &Endpoint) -> Ordering {
    a.value.cmp(&b.value).then_with(|| a.kind.cmp(&b.kind))
}

/// Canonical finite union of disjoint intervals of `[0,1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntervalSet {
    components: Vec<Interval>,
}

impl IntervalSet {
    pub const fn empty() -> Self {
        IntervalSet {
            components: Vec::new(),
        }
    }

    /// The whole cake `[0,1]`.
    pub fn unit() -> Self {
        IntervalSet {
            components: vec![Interval::unit()],
        }
    }

    pub fn from_interval(iv: Interval) -> Self {
        IntervalSet {
            components: vec![iv],
        }
    }

    /// Canonical form of an arbitrary finite list of intervals.
    ///
    /// Components are merged exactly when their union is again an interval,
    /// so `[0,x)` and `[x,1]` merge while `[0,x)` and `(x,1]` do not.
    pub fn normalize(raw: impl IntoIterator<Item = Interval>) -> Self {
        let mut raw: Vec<Interval> = raw.into_iter().collect();
        raw.sort_by(|a, b| cmp_lo(&a.lo, &b.lo));
        let mut out: Vec<Interval> = Vec::with_capacity(raw.len());
        for iv in raw {
            if let Some(last) = out.last_mut() {
                let touches = match iv.lo.value.cmp(&last.hi.value) {
                    Ordering::Less => true,
                    Ordering::Equal => last.hi.kind.is_closed() || iv.lo.kind.is_closed(),
                    Ordering::Greater => false,
                };
                if touches {
                    if cmp_hi(&iv.hi, &last.hi) == Ordering::Greater {
                        last.hi = iv.hi;
                    }
                    continue;
                }
            }
            out.push(iv);
        }
        IntervalSet { components: out }
    }

    /// Wraps components that are already sorted, disjoint and non-touching.
    pub(crate) fn from_canonical(components: Vec<Interval>) -> Self {
        debug_assert!(components.windows(2).all(|w| w[0].hi.value < w[1].lo.value));
        IntervalSet { components }
    }

    /// Validates raw endpoint pairs and normalizes them.
    pub fn from_raw(
        raw: impl IntoIterator<Item = (Endpoint, Endpoint)>,
    ) -> Result<Self, IntervalError> {
        let ivs = raw
            .into_iter()
            .map(|(lo, hi)| Interval::new(lo, hi))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(IntervalSet::normalize(ivs))
    }

    pub fn components(&self) -> &[Interval] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        IntervalSet::normalize(
            self.components
                .iter()
                .chain(other.components.iter())
                .cloned(),
        )
    }

    /// Complement relative to `[0,1]`.
    pub fn complement(&self) -> IntervalSet {
        let mut out = Vec::with_capacity(self.components.len() + 1);
        let mut start = Endpoint::closed(Rational::zero());
        for c in &self.components {
            let end = Endpoint::new(c.lo.value.clone(), c.lo.kind.flip());
            if let Some(gap) = nonempty(start, end) {
                out.push(gap);
            }
            start = Endpoint::new(c.hi.value.clone(), c.hi.kind.flip());
        }
        if let Some(gap) = nonempty(start, Endpoint::closed(Rational::one())) {
            out.push(gap);
        }
        IntervalSet { components: out }
    }

    pub fn intersect(&self, other: &IntervalSet) -> IntervalSet {
        // Two-pointer sweep over the sorted components.
        let (a, b) = (&self.components, &other.components);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            let lo = if cmp_lo(&a[i].lo, &b[j].lo) == Ordering::Greater {
                a[i].lo.clone()
            } else {
                b[j].lo.clone()
            };
            let a_ends_first = cmp_hi(&a[i].hi, &b[j].hi) == Ordering::Less;
            let hi = if a_ends_first {
                a[i].hi.clone()
            } else {
                b[j].hi.clone()
            };
            if let Some(iv) = nonempty(lo, hi) {
                out.push(iv);
            }
            if a_ends_first {
                i += 1;
            } else {
                j += 1;
            }
        }
        IntervalSet { components: out }
    }

    pub fn difference(&self, other: &IntervalSet) -> IntervalSet {
        self.intersect(&other.complement())
    }

    pub fn is_subset(&self, other: &IntervalSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn is_disjoint(&self, other: &IntervalSet) -> bool {
        self.intersect(other).is_empty()
    }

    /// Membership test for a point of the cake.
    pub fn contains(&self, x: &Rational) -> Result<bool, IntervalError> {
        check_in_cake(x)?;
        Ok(self.contains_unchecked(x))
    }

    pub(crate) fn contains_unchecked(&self, x: &Rational) -> bool {
        let idx = self
            .components
            .partition_point(|c| c.lo.value <= *x);
        // Only the last component starting at or before x can contain it.
        idx > 0 && self.components[idx - 1].contains(x)
    }

    /// Lebesgue measure of the set; endpoint kinds are irrelevant.
    pub fn total_length(&self) -> Rational {
        let mut sum = RationalSum::default();
        for c in &self.components {
            sum.add(&c.hi.value);
            sum.sub(&c.lo.value);
        }
        sum.total()
    }

    /// `self ∩ [0,c]` when `closed`, else `self ∩ [0,c)`.
    pub fn prefix(&self, c: &Rational, closed: bool) -> IntervalSet {
        let hi = Endpoint::new(
            c.clone(),
            if closed { EndKind::Closed } else { EndKind::Open },
        );
        match nonempty(Endpoint::closed(Rational::zero()), hi) {
            Some(iv) => self.intersect(&IntervalSet::from_interval(iv)),
            None => IntervalSet::empty(),
        }
    }

    /// All endpoint values, ascending and without duplicates.
    pub fn breakpoints(&self) -> Vec<Rational> {
        let mut v: Vec<Rational> = Vec::with_capacity(2 * self.components.len());
        for c in &self.components {
            for x in [&c.lo.value, &c.hi.value] {
                if v.last() != Some(x) {
                    v.push(x.clone());
                }
            }
        }
        v
    }
}

impl From<Interval> for IntervalSet {
    fn from(iv: Interval) -> Self {
        IntervalSet::from_interval(iv)
    }
}

impl fmt::Display for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.components.is_empty() {
            return f.write_str("{}");
        }
        for (i, c) in self.components.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for IntervalSet {
    type Err = IntervalError;

    /// Parses `"[0,1/3], (1/2,1]"`; `"{}"`, `"∅"` and `""` denote the empty set.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        if t.is_empty() || t == "{}" || t == "∅" {
            return Ok(IntervalSet::empty());
        }
        let perr = |msg: &str| IntervalError::Parse(format!("{msg} in {s:?}"));
        let mut raw = Vec::new();
        let mut rest = t;
        loop {
            rest = rest.trim_start();
            let lo_kind = match rest.chars().next() {
                Some('[') => EndKind::Closed,
                Some('(') => EndKind::Open,
                _ => return Err(perr("expected '[' or '('")),
            };
            let close = rest
                .find([']', ')'])
                .ok_or_else(|| perr("unterminated interval"))?;
            let hi_kind = if rest.as_bytes()[close] == b']' {
                EndKind::Closed
            } else {
                EndKind::Open
            };
            let body = &rest[1..close];
            let (a, b) = body
                .split_once(',')
                .ok_or_else(|| perr("expected 'lo,hi'"))?;
            let a = parse_rational(a).map_err(|e| IntervalError::Parse(e.to_string()))?;
            let b = parse_rational(b).map_err(|e| IntervalError::Parse(e.to_string()))?;
            raw.push((Endpoint::new(a, lo_kind), Endpoint::new(b, hi_kind)));
            rest = rest[close + 1..].trim_start();
            if rest.is_empty() {
                break;
            }
            rest = rest
                .strip_prefix(',')
                .ok_or_else(|| perr("expected ',' between intervals"))?;
        }
        IntervalSet::from_raw(raw)
    }
}
