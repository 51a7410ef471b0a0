use std::fmt;
use std::ops::{Add, Sub};

use num_traits::Zero;

use crate::rational::{format_rational, half, Rational};

/// A value of a distribution function or of a piece: exact, or certified to
/// lie in `[lo, hi]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CdfValue {
    Exact(Rational),
    Bracket { lo: Rational, hi: Rational },
}

impl CdfValue {
    /// Builds a bracket, collapsing to `Exact` when `lo == hi`.
    pub fn bracket(lo: Rational, hi: Rational) -> Self {
        debug_assert!(lo <= hi);
        if lo == hi {
            CdfValue::Exact(lo)
        } else {
            CdfValue::Bracket { lo, hi }
        }
    }

    pub fn zero() -> Self {
        CdfValue::Exact(Rational::zero())
    }

    pub fn lo(&self) -> &Rational {
        match self {
            CdfValue::Exact(x) => x,
            CdfValue::Bracket { lo, .. } => lo,
        }
    }

    pub fn hi(&self) -> &Rational {
        match self {
            CdfValue::Exact(x) => x,
            CdfValue::Bracket { hi, .. } => hi,
        }
    }

    pub fn exact(&self) -> Option<&Rational> {
        match self {
            CdfValue::Exact(x) => Some(x),
            CdfValue::Bracket { .. } => None,
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, CdfValue::Exact(_))
    }

    pub fn width(&self) -> Rational {
        self.hi() - self.lo()
    }

    /// Point estimate: the value itself, or the bracket midpoint.
    pub fn midpoint(&self) -> Rational {
        match self {
            CdfValue::Exact(x) => x.clone(),
            CdfValue::Bracket { lo, hi } => (lo + hi) * half(),
        }
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo() <= x && x <= self.hi()
    }

    /// Multiplies by a nonnegative factor.
    pub fn scale(&self, w: &Rational) -> Self {
        debug_assert!(!(*w < Rational::zero()));
        CdfValue::bracket(self.lo() * w, self.hi() * w)
    }

    /// Intersects with `[lo, hi]`; the true value is known to lie there.
    pub fn clamp(&self, lo: &Rational, hi: &Rational) -> Self {
        let l = self.lo().clone().max(lo.clone()).min(hi.clone());
        let h = self.hi().clone().min(hi.clone()).max(l.clone());
        CdfValue::bracket(l, h)
    }
}

impl Add for &CdfValue {
    type Output = CdfValue;

    fn add(self, rhs: &CdfValue) -> CdfValue {
        CdfValue::bracket(self.lo() + rhs.lo(), self.hi() + rhs.hi())
    }
}

impl Sub for &CdfValue {
    type Output = CdfValue;

    fn sub(self, rhs: &CdfValue) -> CdfValue {
        CdfValue::bracket(self.lo() - rhs.hi(), self.hi() - rhs.lo())
    }
}

impl Add<&Rational> for &CdfValue {
    type Output = CdfValue;

    fn add(self, rhs: &Rational) -> CdfValue {
        CdfValue::bracket(self.lo() + rhs, self.hi() + rhs)
    }
}

impl From<Rational> for CdfValue {
    fn from(x: Rational) -> Self {
        CdfValue::Exact(x)
    }
}

impl fmt::Display for CdfValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CdfValue::Exact(x) => f.write_str(&format_rational(x)),
            CdfValue::Bracket { lo, hi } => {
                write!(f, "[{}, {}]", format_rational(lo), format_rational(hi))
            }
        }
    }
}
