//! JSON valuation files.
//!
//! ```json
//! {
//!   "atoms": [{"at": "1/2", "weight": "1/4"}],
//!   "density_pieces": [{"support": "[0,1/2)", "boxes": 1}, {"support": "[1/2,1]", "boxes": 3}],
//!   "cantor": [{"support": "[0,1]", "p": "1/3", "weight": "1/4"}]
//! }
//! ```
//!
//! Rationals are `"p/q"` strings and supports use the interval-set text
//! form. A file uses either `boxes` or `density` on all of its density
//! pieces, never both. Box pieces must partition `[0,1]`; their counts fix
//! the shape of the density, which is scaled to whatever mass the atoms and
//! Cantor components leave over.

use serde::{Deserialize, Serialize};

use num_traits::{Signed, Zero};

use crate::interval::{Interval, IntervalSet};
use crate::rational::{format_rational, parse_rational, Rational};
use crate::valuation::{
    Atom, AtomPart, CantorComponent, CantorPart, DensityPart, DensityPiece, Valuation, ValuationError,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ConfigError {
    #[error("malformed JSON: {0}")]
    Json(String),
    #[error("{field}: {message}")]
    Field { field: String, message: String },
    #[error(transparent)]
    Valuation(#[from] ValuationError),
}

impl ConfigError {
    /// Parse-level failures, as opposed to a well-formed file describing an invalid valuation.
    pub fn is_parse_error(&self) -> bool {
        !matches!(self, ConfigError::Valuation(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AtomConfig {
    pub at: String,
    pub weight: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DensityPieceConfig {
    pub support: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boxes: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub density: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CantorConfig {
    pub support: String,
    pub p: String,
    pub weight: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValuationConfig {
    #[serde(default)]
    pub atoms: Vec<AtomConfig>,
    #[serde(default)]
    pub density_pieces: Vec<DensityPieceConfig>,
    #[serde(default)]
    pub cantor: Vec<CantorConfig>,
}

fn field_err(field: String, message: impl ToString) -> ConfigError {
    ConfigError::Field {
        field,
        message: message.to_string(),
    }
}

fn rational_field(field: String, s: &str) -> Result<Rational, ConfigError> {
    parse_rational(s).map_err(|e| field_err(field, e))
}

/// A single interval; the support text must describe exactly one component.
fn interval_field(field: String, s: &str) -> Result<Interval, ConfigError> {
    let set: IntervalSet = s.parse().map_err(|e| field_err(field.clone(), e))?;
    match set.components() {
        [one] => Ok(one.clone()),
        _ => Err(field_err(field, format!("{s:?} is not a single interval"))),
    }
}

impl ValuationConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        serde_json::from_str(text).map_err(|e| ConfigError::Json(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn to_valuation(&self) -> Result<Valuation, ConfigError> {
        let atoms = self
            .atoms
            .iter()
            .enumerate()
            .map(|(i, a)| {
                Ok(Atom {
                    at: rational_field(format!("atoms[{i}].at"), &a.at)?,
                    weight: rational_field(format!("atoms[{i}].weight"), &a.weight)?,
                })
            })
            .collect::<Result<Vec<_>, ConfigError>>()?;
        let cantor = self
            .cantor
            .iter()
            .enumerate()
            .map(|(i, c)| {
                Ok(CantorComponent {
                    support: interval_field(format!("cantor[{i}].support"), &c.support)?,
                    p: rational_field(format!("cantor[{i}].p"), &c.p)?,
                    weight: rational_field(format!("cantor[{i}].weight"), &c.weight)?,
                })
            })
            .collect::<Result<Vec<_>, ConfigError>>()?;
        let atomic = AtomPart::new(atoms)?;
        let sc = CantorPart::new(cantor)?;

        let uses_boxes = self.density_pieces.iter().any(|p| p.boxes.is_some());
        let uses_density = self.density_pieces.iter().any(|p| p.density.is_some());
        if uses_boxes && uses_density {
            return Err(field_err(
                "density_pieces".into(),
                "box counts and densities are mutually exclusive",
            ));
        }
        let mut supports = Vec::with_capacity(self.density_pieces.len());
        for (i, p) in self.density_pieces.iter().enumerate() {
            let field = format!("density_pieces[{i}]");
            if p.boxes.is_none() && p.density.is_none() {
                return Err(field_err(field, "needs \"boxes\" or \"density\""));
            }
            supports.push(interval_field(format!("{field}.support"), &p.support)?);
        }

        let ac = if uses_boxes {
            let boxes: Vec<(Interval, u64)> = supports
                .into_iter()
                .zip(&self.density_pieces)
                .map(|(s, p)| (s, p.boxes.unwrap_or(0)))
                .collect();
            let shape = Valuation::from_boxes(&boxes)?;
            let fixed = atomic.mass() + sc.mass();
            let left_over = Rational::from_integer(1.into()) - &fixed;
            if !left_over.is_positive() {
                return Err(ValuationError::NotNormalized {
                    total: format_rational(&fixed),
                    deficit: format_rational(&left_over),
                }
                .into());
            }
            let pieces = shape
                .ac()
                .pieces()
                .iter()
                .map(|p| DensityPiece {
                    support: p.support.clone(),
                    density: &p.density * &left_over,
                })
                .collect();
            DensityPart::new(pieces)?
        } else {
            let pieces = supports
                .into_iter()
                .zip(&self.density_pieces)
                .enumerate()
                .map(|(i, (support, p))| {
                    let d = p.density.as_deref().unwrap_or("0");
                    Ok(DensityPiece {
                        support,
                        density: rational_field(format!("density_pieces[{i}].density"), d)?,
                    })
                })
                .collect::<Result<Vec<_>, ConfigError>>()?;
            DensityPart::new(pieces.into_iter().filter(|p| !p.density.is_zero()).collect())?
        };
        Ok(Valuation::new(atomic, ac, sc)?)
    }
}

/// Parses a valuation file body.
pub fn parse_valuation(text: &str) -> Result<Valuation, ConfigError> {
    ValuationConfig::from_json(text)?.to_valuation()
}
