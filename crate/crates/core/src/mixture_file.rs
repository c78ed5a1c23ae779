//! JSON mixture description files.
//!
//! ```json
//! { "dimension": 2,
//!   "weights": [0.5, 0.5],
//!   "components": [
//!     {"kind": "gaussian", "mean": [0, 0], "cov": [[1, 0], [0, 1]]},
//!     {"kind": "gaussian", "mean": [3, 0], "cov": {"diag": [1, 2]}},
//!     {"kind": "laplacian", "location": [0, 0], "scale": [1, 1]},
//!     {"kind": "uniform_box", "center": [0, 0], "half_width": [1, 1]} ] }
//! ```

use std::path::Path;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{MixentError, Result};
use crate::model::{ComponentDensity, Gaussian, Laplacian, MixtureModel, UniformBox};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MixtureFile {
    pub dimension: usize,
    pub weights: Vec<f64>,
    pub components: Vec<ComponentSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ComponentSpec {
    Gaussian {
        mean: Vec<f64>,
        cov: CovarianceSpec,
    },
    Laplacian {
        location: Vec<f64>,
        scale: Vec<f64>,
    },
    UniformBox {
        center: Vec<f64>,
        half_width: Vec<f64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CovarianceSpec {
    Full(Vec<Vec<f64>>),
    Diagonal { diag: Vec<f64> },
}

impl ComponentSpec {
    fn build(&self, dimension: usize) -> Result<ComponentDensity> {
        let check = |len: usize| {
            if len == dimension {
                Ok(())
            } else {
                Err(MixentError::DimensionMismatch {
                    expected: dimension,
                    found: len,
                })
            }
        };
        Ok(match self {
            ComponentSpec::Gaussian { mean, cov } => {
                check(mean.len())?;
                let cov = match cov {
                    CovarianceSpec::Diagonal { diag } => {
                        check(diag.len())?;
                        DMatrix::from_diagonal(&nalgebra::DVector::from_column_slice(diag))
                    }
                    CovarianceSpec::Full(rows) => {
                        check(rows.len())?;
                        for r in rows {
                            check(r.len())?;
                        }
                        DMatrix::from_fn(dimension, dimension, |i, j| rows[i][j])
                    }
                };
                Gaussian::new(mean.clone(), cov)?.into()
            }
            ComponentSpec::Laplacian { location, scale } => {
                check(location.len())?;
                check(scale.len())?;
                Laplacian::new(location.clone(), scale.clone())?.into()
            }
            ComponentSpec::UniformBox { center, half_width } => {
                check(center.len())?;
                check(half_width.len())?;
                UniformBox::new(center.clone(), half_width.clone())?.into()
            }
        })
    }

    fn describe(f: &ComponentDensity) -> Self {
        match f {
            ComponentDensity::Gaussian(g) => {
                let n = g.dimension();
                let cov = match g.variances() {
                    Some(v) => CovarianceSpec::Diagonal { diag: v.to_vec() },
                    None => CovarianceSpec::Full(
                        (0..n)
                            .map(|i| (0..n).map(|j| g.cov()[(i, j)]).collect())
                            .collect(),
                    ),
                };
                ComponentSpec::Gaussian {
                    mean: g.mean().to_vec(),
                    cov,
                }
            }
            ComponentDensity::Laplacian(l) => ComponentSpec::Laplacian {
                location: l.location().to_vec(),
                scale: l.scale().to_vec(),
            },
            ComponentDensity::UniformBox(u) => ComponentSpec::UniformBox {
                center: u.center().to_vec(),
                half_width: u.half_width().to_vec(),
            },
        }
    }
}

impl MixtureFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| MixentError::InvalidSpec(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data serializes")
    }

    /// Validated model; no weight renormalization is applied.
    pub fn to_model(&self) -> Result<MixtureModel> {
        if self.dimension == 0 {
            return Err(MixentError::InvalidSpec(
                "dimension must be positive".into(),
            ));
        }
        let components = self
            .components
            .iter()
            .map(|c| c.build(self.dimension))
            .collect::<Result<Vec<_>>>()?;
        MixtureModel::new(self.weights.clone(), components)
    }

    pub fn from_model(model: &MixtureModel) -> Self {
        MixtureFile {
            dimension: model.dimension(),
            weights: model.weights().to_vec(),
            components: model
                .components()
                .iter()
                .map(ComponentSpec::describe)
                .collect(),
        }
    }
}

/// Parses and validates a JSON mixture description.
pub fn parse_mixture(text: &str) -> Result<MixtureModel> {
    MixtureFile::from_json(text)?.to_model()
}

pub fn load_mixture(path: impl AsRef<Path>) -> Result<MixtureModel> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| MixentError::InvalidSpec(format!("{}: {e}", path.display())))?;
    parse_mixture(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_all_kinds() {
        let m = parse_mixture(
            r#"{"dimension": 2, "weights": [0.25, 0.25, 0.25, 0.25], "components": [
                {"kind": "gaussian", "mean": [0, 0], "cov": [[1, 0.2], [0.2, 1]]},
                {"kind": "gaussian", "mean": [1, 0], "cov": {"diag": [1, 2]}},
                {"kind": "laplacian", "location": [0, 1], "scale": [1, 0.5]},
                {"kind": "uniform_box", "center": [0, 0], "half_width": [1, 1]}]}"#,
        )
        .unwrap();
        assert_eq!(m.len(), 4);
        assert_eq!(m.dimension(), 2);
    }

    #[test]
    fn rejects_unknown_kind() {
        let err = parse_mixture(
            r#"{"dimension": 1, "weights": [1], "components": [{"kind": "cauchy", "loc": [0]}]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, MixentError::InvalidSpec(_)));
    }

    #[test]
    fn rejects_mismatched_lengths() {
        let err = parse_mixture(
            r#"{"dimension": 2, "weights": [1], "components": [{"kind": "laplacian", "location": [0, 0], "scale": [1]}]}"#,
        )
        .unwrap_err();
        assert_eq!(
            err,
            MixentError::DimensionMismatch {
                expected: 2,
                found: 1
            }
        );
        let err = parse_mixture(
            r#"{"dimension": 2, "weights": [1], "components": [{"kind": "gaussian", "mean": [0, 0], "cov": [[1, 0]]}]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, MixentError::DimensionMismatch { .. }));
    }

    #[test]
    fn weights_are_not_renormalized() {
        let err = parse_mixture(
            r#"{"dimension": 1, "weights": [0.9], "components": [{"kind": "gaussian", "mean": [0], "cov": [[1]]}]}"#,
        )
        .unwrap_err();
        assert!(matches!(err, MixentError::Weight(_)));
    }

    #[test]
    fn describe_then_parse_keeps_the_model() {
        let text = r#"{"dimension": 2, "weights": [0.5, 0.5], "components": [
            {"kind": "gaussian", "mean": [0, 0], "cov": [[2, 0.5], [0.5, 1]]},
            {"kind": "uniform_box", "center": [1, 1], "half_width": [0.5, 2]}]}"#;
        let m = parse_mixture(text).unwrap();
        let again = parse_mixture(&MixtureFile::from_model(&m).to_json()).unwrap();
        assert_eq!(m.components(), again.components());
        assert_eq!(m.weights(), again.weights());
    }
}
