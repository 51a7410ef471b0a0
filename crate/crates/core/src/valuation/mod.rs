//! Valuations on the unit cake, given by their Lebesgue decomposition.
//!
//! A [`Valuation`] is a probability measure on the Borel sets of `[0,1]`
//! described by generator data: finitely many point masses (the discrete
//! part), a piecewise-constant density (the absolutely continuous part) and
//! finitely many rescaled Cantor measures (the singular continuous part).
//! The measure of any finite union of intervals is computed on demand from
//! the distribution function `F(x) = v([0,x])` and its left limits.
//!
//! With no Cantor components every value is an exact rational. Cantor
//! components are evaluated to a requested tolerance and reported as a
//! certified [`CdfValue::Bracket`] unless the evaluation lands on a flat
//! stretch of the staircase.

mod bracket;
mod cut;
pub mod staircase;

use num_traits::{One, Signed, Zero};

pub use bracket::CdfValue;
pub use cut::{Cut, NO_CONVERGENCE_STEPS};

use crate::interval::{check_in_cake, Interval, IntervalError, IntervalSet};
use crate::rational::{format_rational, pow2_neg, ratio, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ValuationError {
    #[error(transparent)]
    Interval(#[from] IntervalError),
    #[error("invalid valuation part: {0}")]
    InvalidPart(String),
    #[error("total mass {total} is not 1 (deficit {deficit})")]
    NotNormalized { total: String, deficit: String },
    #[error("box supports do not partition [0,1]: {0}")]
    BadPartition(String),
    #[error("all box counts are zero")]
    ZeroMass,
    #[error("tolerance must be positive")]
    BadTolerance,
    #[error("parameter out of range: {0}")]
    BadParameter(String),
    #[error("atom at {at} with weight {weight} obstructs exact division")]
    AtomObstruction { at: String, weight: String },
    #[error("the piece has value zero")]
    ZeroPiece,
    #[error("not sliceable: atoms heavier than epsilon at {0:?}")]
    NotSliceable(Vec<String>),
    #[error("bisection did not converge")]
    NoConvergence,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Atom {
    pub at: Rational,
    pub weight: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DensityPiece {
    pub support: Interval,
    pub density: Rational,
}

/// A Cantor measure of total mass `weight`, living on `C_p` rescaled to `support`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CantorComponent {
    pub support: Interval,
    pub p: Rational,
    pub weight: Rational,
}

/// Point masses; locations are distinct and weights positive.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct AtomPart {
    atoms: Vec<Atom>,
}

impl AtomPart {
    pub fn new(atoms: Vec<Atom>) -> Result<Self, ValuationError> {
        let mut atoms = atoms;
        for a in &atoms {
            check_in_cake(&a.at)?;
            if !a.weight.is_positive() {
                return Err(ValuationError::InvalidPart(format!(
                    "atom at {} has nonpositive weight {}",
                    format_rational(&a.at),
                    format_rational(&a.weight)
                )));
            }
        }
        atoms.sort_by(|a, b| a.at.cmp(&b.at));
        if let Some(w) = atoms.windows(2).find(|w| w[0].at == w[1].at) {
            return Err(ValuationError::InvalidPart(format!(
                "duplicate atom location {}",
                format_rational(&w[0].at)
            )));
        }
        Ok(AtomPart { atoms })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn mass(&self) -> Rational {
        self.atoms.iter().map(|a| &a.weight).sum()
    }
}

/// Piecewise-constant density. Regions not covered by any piece have density 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct DensityPart {
    pieces: Vec<DensityPiece>,
}

impl DensityPart {
    pub fn new(pieces: Vec<DensityPiece>) -> Result<Self, ValuationError> {
        let mut pieces = pieces;
        for piece in &pieces {
            if piece.density.is_negative() {
                return Err(ValuationError::InvalidPart(format!(
                    "negative density on {}",
                    piece.support
                )));
            }
        }
        check_disjoint(pieces.iter().map(|p| &p.support))?;
        pieces.sort_by(|a, b| a.support.lo().value.cmp(&b.support.lo().value));
        Ok(DensityPart { pieces })
    }

    pub fn pieces(&self) -> &[DensityPiece] {
        &self.pieces
    }

    pub fn mass(&self) -> Rational {
        self.pieces
            .iter()
            .map(|p| &p.density * p.support.length())
            .sum()
    }

    /// Density at an interior point of an elementary segment.
    fn density_at(&self, x: &Rational) -> Rational {
        self.pieces
            .iter()
            .find(|p| p.support.contains(x))
            .map(|p| p.density.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Absolutely continuous mass of `a`.
    fn mass_of(&self, a: &IntervalSet) -> Rational {
        self.pieces
            .iter()
            .filter(|p| !p.density.is_zero())
            .map(|p| {
                let covered = match (a.components().first(), a.components().last()) {
                    (Some(first), Some(last)) => {
                        p.support.contains(&first.lo().value) && p.support.contains(&last.hi().value)
                    }
                    _ => return Rational::zero(),
                };
                let length = if covered {
                    a.total_length()
                } else {
                    a.intersect(&p.support.clone().into()).total_length()
                };
                &p.density * length
            })
            .sum()
    }

    /// Absolutely continuous mass of `[0,x]`.
    fn cdf(&self, x: &Rational) -> Rational {
        self.pieces
            .iter()
            .filter(|p| p.support.lo().value < *x)
            .map(|p| {
                let hi = p.support.hi().value.clone().min(x.clone());
                &p.density * (hi - &p.support.lo().value)
            })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct CantorPart {
    components: Vec<CantorComponent>,
}

impl CantorPart {
    pub fn new(components: Vec<CantorComponent>) -> Result<Self, ValuationError> {
        let mut components = components;
        for c in &components {
            let s = &c.support;
            if !(s.lo().kind.is_closed() && s.hi().kind.is_closed()) || s.is_singleton() {
                return Err(ValuationError::InvalidPart(format!(
                    "Cantor support {s} must be a closed nondegenerate interval"
                )));
            }
            check_cantor_p(&c.p)?;
            if !c.weight.is_positive() {
                return Err(ValuationError::InvalidPart(format!(
                    "Cantor component on {s} has nonpositive weight"
                )));
            }
        }
        check_disjoint(components.iter().map(|c| &c.support))?;
        components.sort_by(|a, b| a.support.lo().value.cmp(&b.support.lo().value));
        Ok(CantorPart { components })
    }

    pub fn components(&self) -> &[CantorComponent] {
        &self.components
    }

    pub fn mass(&self) -> Rational {
        self.components.iter().map(|c| &c.weight).sum()
    }
}

pub(crate) fn check_cantor_p(p: &Rational) -> Result<(), ValuationError> {
    if p.is_positive() && *p <= ratio(1, 3) {
        Ok(())
    } else {
        Err(ValuationError::BadParameter(format!(
            "p = {} is not in (0, 1/3]",
            format_rational(p)
        )))
    }
}

fn check_disjoint<'a>(supports: impl Iterator<Item = &'a Interval>) -> Result<(), ValuationError> {
    let mut seen = IntervalSet::empty();
    for s in supports {
        let s: IntervalSet = s.clone().into();
        if !seen.is_disjoint(&s) {
            return Err(ValuationError::InvalidPart(format!(
                "support {s} overlaps another support"
            )));
        }
        seen = seen.union(&s);
    }
    Ok(())
}

/// Which value of the distribution function to read at a point.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CdfSide {
    /// `F(x-) = v([0,x))`
    LeftLimit,
    /// `F(x) = v([0,x])`
    At,
}

impl CantorComponent {
    fn is_exact_path(&self) -> bool {
        staircase::is_middle_third(&self.p)
    }

    /// Mass of `[0,x]` under this component, refined `depth` levels.
    fn cdf(&self, x: &Rational, depth: u32) -> CdfValue {
        let a = &self.support.lo().value;
        let b = &self.support.hi().value;
        if x <= a {
            return CdfValue::zero();
        }
        if x >= b {
            return CdfValue::Exact(self.weight.clone());
        }
        let u = (x - a) / (b - a);
        staircase::staircase(&self.p, &u, depth, self.is_exact_path()).scale(&self.weight)
    }

    /// Mass of `set` under this component; the staircase is continuous, so
    /// endpoint kinds do not matter.
    fn mass_of(&self, set: &IntervalSet, depth: u32) -> CdfValue {
        let clipped = set.intersect(&self.support.clone().into());
        let mut total = CdfValue::zero();
        for c in clipped.components() {
            if c.is_singleton() {
                continue;
            }
            let d = &self.cdf(&c.hi().value, depth) - &self.cdf(&c.lo().value, depth);
            total = &total + &d;
        }
        total.clamp(&Rational::zero(), &self.weight)
    }
}

/// Smallest depth `d` with `scale * 2^{-d} <= tol`.
fn depth_for(scale: &Rational, tol: &Rational) -> u32 {
    let mut d = 0;
    while scale * pow2_neg(d) > *tol {
        d += 1;
    }
    d
}

/// A normalized measure on `[0,1]`: `atomic + ac + sc` with total mass 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Valuation {
    atomic: AtomPart,
    ac: DensityPart,
    sc: CantorPart,
}

impl Valuation {
    /// Checks normalization and assembles the valuation.
    pub fn new(atomic: AtomPart, ac: DensityPart, sc: CantorPart) -> Result<Self, ValuationError> {
        let total = atomic.mass() + ac.mass() + sc.mass();
        if !total.is_one() {
            let deficit = Rational::one() - &total;
            return Err(ValuationError::NotNormalized {
                total: format_rational(&total),
                deficit: format_rational(&deficit),
            });
        }
        Ok(Valuation { atomic, ac, sc })
    }

    /// Box-based valuation: `boxes` partitions `[0,1]` into pieces, each
    /// carrying a number of equal-height boxes. Piece `i` gets density
    /// `count_i / (total_count * length_i)`.
    pub fn from_boxes(boxes: &[(Interval, u64)]) -> Result<Self, ValuationError> {
        let mut covered = IntervalSet::empty();
        for (support, _) in boxes {
            let s: IntervalSet = support.clone().into();
            if !covered.is_disjoint(&s) {
                return Err(ValuationError::BadPartition(format!("{s} overlaps another piece")));
            }
            covered = covered.union(&s);
        }
        if covered != IntervalSet::unit() {
            return Err(ValuationError::BadPartition(format!(
                "pieces cover {covered}, not [0,1]"
            )));
        }
        let total: u64 = boxes.iter().map(|(_, n)| n).sum();
        if total == 0 {
            return Err(ValuationError::ZeroMass);
        }
        let total = Rational::from_integer(total.into());
        let mut pieces = Vec::with_capacity(boxes.len());
        for (support, count) in boxes {
            let len = support.length();
            if len.is_zero() {
                if *count > 0 {
                    return Err(ValuationError::BadPartition(format!(
                        "degenerate piece {support} carries boxes"
                    )));
                }
                continue;
            }
            let count = Rational::from_integer((*count).into());
            pieces.push(DensityPiece {
                support: support.clone(),
                density: count / (&total * len),
            });
        }
        Valuation::new(
            AtomPart::default(),
            DensityPart::new(pieces)?,
            CantorPart::default(),
        )
    }

    /// Lebesgue measure on `[0,1]`.
    pub fn uniform() -> Self {
        Valuation {
            atomic: AtomPart::default(),
            ac: DensityPart {
                pieces: vec![DensityPiece {
                    support: Interval::unit(),
                    density: Rational::one(),
                }],
            },
            sc: CantorPart::default(),
        }
    }

    /// Dirac measure at `a`.
    pub fn dirac(a: Rational) -> Result<Self, ValuationError> {
        Valuation::new(
            AtomPart::new(vec![Atom {
                at: a,
                weight: Rational::one(),
            }])?,
            DensityPart::default(),
            CantorPart::default(),
        )
    }

    /// Cantor measure of `C_p` on the whole cake.
    pub fn cantor(p: Rational) -> Result<Self, ValuationError> {
        Valuation::new(
            AtomPart::default(),
            DensityPart::default(),
            CantorPart::new(vec![CantorComponent {
                support: Interval::unit(),
                p,
                weight: Rational::one(),
            }])?,
        )
    }

    /// Convex combination `Σ w_i v_i`. Weights must be nonnegative and sum to 1.
    ///
    /// Cantor components of different summands must have disjoint supports
    /// unless they share support and `p`, in which case they are merged.
    pub fn mixture(parts: &[(Rational, &Valuation)]) -> Result<Self, ValuationError> {
        if parts.iter().any(|(w, _)| w.is_negative()) {
            return Err(ValuationError::BadParameter("negative mixture weight".into()));
        }
        let parts: Vec<_> = parts.iter().filter(|(w, _)| !w.is_zero()).collect();

        let mut atoms: Vec<Atom> = Vec::new();
        for (w, v) in &parts {
            for a in v.atomic.atoms() {
                match atoms.iter_mut().find(|b| b.at == a.at) {
                    Some(b) => b.weight += w * &a.weight,
                    None => atoms.push(Atom {
                        at: a.at.clone(),
                        weight: w * &a.weight,
                    }),
                }
            }
        }

        // Refine densities onto the common breakpoints.
        let mut cuts: Vec<Rational> = vec![Rational::zero(), Rational::one()];
        for (_, v) in &parts {
            for p in v.ac.pieces() {
                cuts.push(p.support.lo().value.clone());
                cuts.push(p.support.hi().value.clone());
            }
        }
        cuts.sort();
        cuts.dedup();
        let mut pieces = Vec::new();
        for (i, w) in cuts.windows(2).enumerate() {
            let mid = (&w[0] + &w[1]) / Rational::from_integer(2.into());
            let density: Rational = parts
                .iter()
                .map(|(wt, v)| wt * v.ac.density_at(&mid))
                .sum();
            if density.is_zero() {
                continue;
            }
            let last = i + 2 == cuts.len();
            let support = if last {
                Interval::closed(w[0].clone(), w[1].clone())?
            } else {
                Interval::closed_open(w[0].clone(), w[1].clone())?
            };
            pieces.push(DensityPiece { support, density });
        }

        let mut cantor: Vec<CantorComponent> = Vec::new();
        for (w, v) in &parts {
            for c in v.sc.components() {
                match cantor
                    .iter_mut()
                    .find(|d| d.support == c.support && d.p == c.p)
                {
                    Some(d) => d.weight += w * &c.weight,
                    None => cantor.push(CantorComponent {
                        support: c.support.clone(),
                        p: c.p.clone(),
                        weight: w * &c.weight,
                    }),
                }
            }
        }

        Valuation::new(
            AtomPart::new(atoms)?,
            DensityPart::new(pieces)?,
            CantorPart::new(cantor)?,
        )
    }

    pub fn atomic(&self) -> &AtomPart {
        &self.atomic
    }

    pub fn ac(&self) -> &DensityPart {
        &self.ac
    }

    pub fn sc(&self) -> &CantorPart {
        &self.sc
    }

    /// The point masses; empty iff the distribution function is continuous.
    pub fn atoms(&self) -> Vec<(Rational, Rational)> {
        self.atomic
            .atoms()
            .iter()
            .map(|a| (a.at.clone(), a.weight.clone()))
            .collect()
    }

    pub fn is_atom_free(&self) -> bool {
        self.atomic.atoms.is_empty()
    }

    pub fn has_singular_part(&self) -> bool {
        !self.sc.components.is_empty()
    }

    /// `(ac, sc, discrete)` masses; they sum to 1.
    pub fn decomposition_masses(&self) -> (Rational, Rational, Rational) {
        (self.ac.mass(), self.sc.mass(), self.atomic.mass())
    }

    fn atom_mass(&self, x: &Rational, side: CdfSide) -> Rational {
        self.atomic
            .atoms
            .iter()
            .filter(|a| match side {
                CdfSide::At => a.at <= *x,
                CdfSide::LeftLimit => a.at < *x,
            })
            .map(|a| &a.weight)
            .sum()
    }

    /// Distribution function `F(x)` or its left limit `F(x-)`.
    ///
    /// Exact when there is no Cantor part or every Cantor evaluation is
    /// resolved exactly; otherwise a bracket of width at most `tol`.
    pub fn cdf(&self, x: &Rational, side: CdfSide, tol: &Rational) -> Result<CdfValue, ValuationError> {
        check_in_cake(x)?;
        check_tol(tol)?;
        if side == CdfSide::At && x.is_one() {
            return Ok(CdfValue::Exact(Rational::one()));
        }
        let exact = self.atom_mass(x, side) + self.ac.cdf(x);
        let depth = depth_for(&self.sc.mass(), tol);
        let mut sc = CdfValue::zero();
        for c in &self.sc.components {
            sc = &sc + &c.cdf(x, depth);
        }
        Ok(&sc + &exact)
    }

    /// Value of a finite union of intervals.
    pub fn evaluate(&self, set: &IntervalSet, tol: &Rational) -> Result<CdfValue, ValuationError> {
        check_tol(tol)?;
        Ok(self.evaluate_unchecked(set, tol))
    }

    pub(crate) fn evaluate_unchecked(&self, set: &IntervalSet, tol: &Rational) -> CdfValue {
        let exact = self.exact_mass_of(set);
        if self.sc.components.is_empty() || set.is_empty() {
            return CdfValue::Exact(exact);
        }
        // Each component contributes two staircase evaluations per piece.
        let scale: Rational = self
            .sc
            .components
            .iter()
            .map(|c| &c.weight * Rational::from_integer((2 * set.len()).into()))
            .sum();
        let depth = depth_for(&scale, tol);
        let mut sc = CdfValue::zero();
        for c in &self.sc.components {
            sc = &sc + &c.mass_of(set, depth);
        }
        (&sc + &exact).clamp(&Rational::zero(), &Rational::one())
    }

    /// Atomic plus absolutely continuous mass of `set`, exactly.
    pub(crate) fn exact_mass_of(&self, set: &IntervalSet) -> Rational {
        let atoms: Rational = self
            .atomic
            .atoms
            .iter()
            .filter(|a| set.contains_unchecked(&a.at))
            .map(|a| &a.weight)
            .sum();
        atoms + self.ac.mass_of(set)
    }

    /// Cut `set` at a prefix holding the fraction `alpha` of its value.
    ///
    /// Returns `set ∩ [0,c]` for the smallest such `c`. Without a Cantor
    /// part the division is exact; otherwise the prefix value is within
    /// `tol` of `alpha * v(set)`.
    pub fn cut(
        &self,
        set: &IntervalSet,
        alpha: &Rational,
        tol: &Rational,
    ) -> Result<IntervalSet, ValuationError> {
        Ok(self.cut_point(set, alpha, tol)?.piece)
    }

    /// Like [`Valuation::cut`], also reporting the cut position.
    pub fn cut_point(&self, set: &IntervalSet, alpha: &Rational, tol: &Rational) -> Result<Cut, ValuationError> {
        cut::cut(self, set, alpha, tol)
    }

    /// Splits the cake into finitely many disjoint pieces of value in `(0, epsilon]`.
    pub fn slice(&self, epsilon: &Rational, tol: &Rational) -> Result<Vec<IntervalSet>, ValuationError> {
        cut::slice(self, epsilon, tol)
    }
}

pub(crate) fn check_tol(tol: &Rational) -> Result<(), ValuationError> {
    if tol.is_positive() {
        Ok(())
    } else {
        Err(ValuationError::BadTolerance)
    }
}
