//! Mixture models and their component densities.
//!
//! Components are validated on construction: a [`Gaussian`] carries its
//! Cholesky factor, and Laplacian scales and box half-widths are checked
//! to be strictly positive. [`MixtureModel::new`] then checks the weights
//! and the shared dimension.

use std::f64::consts::{LOG2_E, PI};

use nalgebra::{Cholesky, DMatrix, DVector};

use crate::error::{MixentError, Result};
use crate::numeric::log2_weighted_sum_exp2;

/// Relative tolerance for covariance symmetry.
pub const SYMMETRY_TOL: f64 = 1e-12;
/// Relative tolerance on `|Σ π_c - 1|`.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;
/// Off-diagonal entries up to this fraction of the largest variance count as zero.
pub const DIAGONAL_TOL: f64 = 1e-12;

/// The three supported component families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Gaussian,
    Laplacian,
    Uniform,
}

/// Multivariate normal `N(mean, cov)`.
#[derive(Debug, Clone)]
pub struct Gaussian {
    mean: Vec<f64>,
    cov: DMatrix<f64>,
    factor: DMatrix<f64>,
    ln_det: f64,
    variances: Option<Vec<f64>>,
}

impl Gaussian {
    pub fn new(mean: Vec<f64>, cov: DMatrix<f64>) -> Result<Self> {
        let n = mean.len();
        if n == 0 {
            return Err(MixentError::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        if cov.nrows() != n || cov.ncols() != n {
            return Err(MixentError::DimensionMismatch {
                expected: n,
                found: if cov.nrows() != n {
                    cov.nrows()
                } else {
                    cov.ncols()
                },
            });
        }
        if mean.iter().chain(cov.iter()).any(|v| !v.is_finite()) {
            return Err(MixentError::InvalidArgument(
                "gaussian parameters must be finite".into(),
            ));
        }
        let max_abs = cov.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let mut asymmetry = 0.0f64;
        for i in 0..n {
            for j in (i + 1)..n {
                asymmetry = asymmetry.max((cov[(i, j)] - cov[(j, i)]).abs());
            }
        }
        if asymmetry > SYMMETRY_TOL * max_abs {
            return Err(MixentError::NotSymmetric { asymmetry });
        }
        let factor = Cholesky::new(cov.clone())
            .ok_or(MixentError::NotPositiveDefinite)?
            .l();
        let l = &factor;
        let mut ln_det = 0.0;
        for i in 0..n {
            let pivot = l[(i, i)];
            if !(pivot > 0.0) {
                return Err(MixentError::NotPositiveDefinite);
            }
            ln_det += 2.0 * pivot.ln();
        }
        let max_diag = (0..n).fold(0.0f64, |m, i| m.max(cov[(i, i)]));
        let off_diag = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .fold(0.0f64, |m, ij| m.max(cov[ij].abs()));
        let variances =
            (off_diag <= DIAGONAL_TOL * max_diag).then(|| (0..n).map(|i| cov[(i, i)]).collect());
        Ok(Self {
            mean,
            cov,
            factor,
            ln_det,
            variances,
        })
    }

    /// `N(mean, diag(variances))`.
    pub fn diagonal(mean: Vec<f64>, variances: &[f64]) -> Result<Self> {
        if variances.len() != mean.len() {
            return Err(MixentError::DimensionMismatch {
                expected: mean.len(),
                found: variances.len(),
            });
        }
        let cov = DMatrix::from_diagonal(&DVector::from_column_slice(variances));
        Self::new(mean, cov)
    }

    /// `N(mean, variance · I)`.
    pub fn isotropic(mean: Vec<f64>, variance: f64) -> Result<Self> {
        let n = mean.len();
        Self::diagonal(mean, &vec![variance; n])
    }

    pub fn dimension(&self) -> usize {
        self.mean.len()
    }

    pub fn mean(&self) -> &[f64] {
        &self.mean
    }

    pub fn cov(&self) -> &DMatrix<f64> {
        &self.cov
    }

    /// Natural log of `|Σ|`, from the Cholesky pivots.
    pub fn ln_det(&self) -> f64 {
        self.ln_det
    }

    /// Lower-triangular Cholesky factor.
    pub fn cholesky_factor(&self) -> &DMatrix<f64> {
        &self.factor
    }

    /// Per-coordinate variances when the covariance is diagonal.
    pub fn variances(&self) -> Option<&[f64]> {
        self.variances.as_deref()
    }

    fn ln_pdf(&self, x: &[f64]) -> f64 {
        let n = self.dimension();
        let quad = with_scratch(n, |y| {
            // Forward substitution L y = x - mean.
            let mut quad = 0.0;
            for i in 0..n {
                let mut r = x[i] - self.mean[i];
                for j in 0..i {
                    r -= self.factor[(i, j)] * y[j];
                }
                y[i] = r / self.factor[(i, i)];
                quad += y[i] * y[i];
            }
            quad
        });
        -0.5 * quad - 0.5 * (n as f64) * (2.0 * PI).ln() - 0.5 * self.ln_det
    }

    /// Writes `mean + L z` into `out`.
    pub(crate) fn transform_standard(&self, z: &[f64], out: &mut [f64]) {
        let n = self.dimension();
        for i in 0..n {
            let mut v = self.mean[i];
            for j in 0..=i {
                v += self.factor[(i, j)] * z[j];
            }
            out[i] = v;
        }
    }
}

impl PartialEq for Gaussian {
    fn eq(&self, other: &Self) -> bool {
        self.mean == other.mean && self.cov == other.cov
    }
}

/// Runs `f` on a zeroed scratch slice of length `n`, on the stack when small.
pub(crate) fn with_scratch<T>(n: usize, f: impl FnOnce(&mut [f64]) -> T) -> T {
    const STACK: usize = 64;
    if n <= STACK {
        let mut buf = [0.0; STACK];
        f(&mut buf[..n])
    } else {
        f(&mut vec![0.0; n])
    }
}

/// Product of independent Laplace densities, `Π_i exp(-|x_i - μ_i| / b_i) / (2 b_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Laplacian {
    location: Vec<f64>,
    scale: Vec<f64>,
}

impl Laplacian {
    pub fn new(location: Vec<f64>, scale: Vec<f64>) -> Result<Self> {
        check_positive_vector(&location, &scale, "laplacian scale")?;
        Ok(Self { location, scale })
    }

    pub fn dimension(&self) -> usize {
        self.location.len()
    }

    pub fn location(&self) -> &[f64] {
        &self.location
    }

    pub fn scale(&self) -> &[f64] {
        &self.scale
    }

    fn ln_pdf(&self, x: &[f64]) -> f64 {
        x.iter()
            .zip(&self.location)
            .zip(&self.scale)
            .map(|((xi, mu), b)| -(xi - mu).abs() / b - (2.0 * b).ln())
            .sum()
    }
}

/// Uniform density on the axis-aligned box `center + Π_i [-a_i, a_i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformBox {
    center: Vec<f64>,
    half_width: Vec<f64>,
}

impl UniformBox {
    pub fn new(center: Vec<f64>, half_width: Vec<f64>) -> Result<Self> {
        check_positive_vector(&center, &half_width, "box half-width")?;
        Ok(Self { center, half_width })
    }

    /// Box `[lo_i, hi_i]` given by its corners.
    pub fn from_bounds(lo: &[f64], hi: &[f64]) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(MixentError::DimensionMismatch {
                expected: lo.len(),
                found: hi.len(),
            });
        }
        let center = lo.iter().zip(hi).map(|(l, h)| 0.5 * (l + h)).collect();
        let half = lo.iter().zip(hi).map(|(l, h)| 0.5 * (h - l)).collect();
        Self::new(center, half)
    }

    pub fn dimension(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &[f64] {
        &self.center
    }

    pub fn half_width(&self) -> &[f64] {
        &self.half_width
    }

    pub fn lower(&self, i: usize) -> f64 {
        self.center[i] - self.half_width[i]
    }

    pub fn upper(&self, i: usize) -> f64 {
        self.center[i] + self.half_width[i]
    }

    /// `log2 |A| = Σ_i log2(2 a_i)`.
    pub fn log2_volume(&self) -> f64 {
        self.half_width.iter().map(|a| (2.0 * a).log2()).sum()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        (0..self.dimension()).all(|i| x[i] >= self.lower(i) && x[i] <= self.upper(i))
    }
}

fn check_positive_vector(location: &[f64], scale: &[f64], what: &str) -> Result<()> {
    if location.is_empty() {
        return Err(MixentError::DimensionMismatch {
            expected: 1,
            found: 0,
        });
    }
    if location.len() != scale.len() {
        return Err(MixentError::DimensionMismatch {
            expected: location.len(),
            found: scale.len(),
        });
    }
    if location.iter().any(|v| !v.is_finite()) {
        return Err(MixentError::InvalidArgument(format!(
            "{what}: location must be finite"
        )));
    }
    if let Some(bad) = scale.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
        return Err(MixentError::NonPositiveScale(format!("{what} {bad}")));
    }
    Ok(())
}

/// One mixture component.
#[derive(Debug, Clone, PartialEq)]
pub enum ComponentDensity {
    Gaussian(Gaussian),
    Laplacian(Laplacian),
    UniformBox(UniformBox),
}

impl ComponentDensity {
    pub fn family(&self) -> Family {
        match self {
            ComponentDensity::Gaussian(_) => Family::Gaussian,
            ComponentDensity::Laplacian(_) => Family::Laplacian,
            ComponentDensity::UniformBox(_) => Family::Uniform,
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            ComponentDensity::Gaussian(g) => g.dimension(),
            ComponentDensity::Laplacian(l) => l.dimension(),
            ComponentDensity::UniformBox(u) => u.dimension(),
        }
    }

    /// Location parameter (mean, Laplace location or box center).
    pub fn location(&self) -> &[f64] {
        match self {
            ComponentDensity::Gaussian(g) => g.mean(),
            ComponentDensity::Laplacian(l) => l.location(),
            ComponentDensity::UniformBox(u) => u.center(),
        }
    }

    /// Copy of this component shifted by `offset`.
    pub fn translated(&self, offset: &[f64]) -> Result<Self> {
        check_len(self.dimension(), offset.len())?;
        let shift = |v: &[f64]| v.iter().zip(offset).map(|(a, b)| a + b).collect::<Vec<_>>();
        Ok(match self {
            ComponentDensity::Gaussian(g) => {
                ComponentDensity::Gaussian(Gaussian::new(shift(g.mean()), g.cov().clone())?)
            }
            ComponentDensity::Laplacian(l) => ComponentDensity::Laplacian(Laplacian::new(
                shift(l.location()),
                l.scale().to_vec(),
            )?),
            ComponentDensity::UniformBox(u) => ComponentDensity::UniformBox(UniformBox::new(
                shift(u.center()),
                u.half_width().to_vec(),
            )?),
        })
    }

    /// Natural-log density; `x` must have the right length.
    pub(crate) fn ln_pdf_unchecked(&self, x: &[f64]) -> f64 {
        match self {
            ComponentDensity::Gaussian(g) => g.ln_pdf(x),
            ComponentDensity::Laplacian(l) => l.ln_pdf(x),
            ComponentDensity::UniformBox(u) => {
                if u.contains(x) {
                    -u.log2_volume() / LOG2_E
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }

    pub(crate) fn log2_pdf_unchecked(&self, x: &[f64]) -> f64 {
        match self {
            // Kept in base 2 directly so that the box density is bit-exact.
            ComponentDensity::UniformBox(u) => {
                if u.contains(x) {
                    -u.log2_volume()
                } else {
                    f64::NEG_INFINITY
                }
            }
            _ => self.ln_pdf_unchecked(x) * LOG2_E,
        }
    }

    /// `log2 f(x)`; `-inf` outside a box support.
    pub fn log2_pdf(&self, x: &[f64]) -> Result<f64> {
        check_len(self.dimension(), x.len())?;
        Ok(self.log2_pdf_unchecked(x))
    }
}

impl From<Gaussian> for ComponentDensity {
    fn from(g: Gaussian) -> Self {
        ComponentDensity::Gaussian(g)
    }
}

impl From<Laplacian> for ComponentDensity {
    fn from(l: Laplacian) -> Self {
        ComponentDensity::Laplacian(l)
    }
}

impl From<UniformBox> for ComponentDensity {
    fn from(u: UniformBox) -> Self {
        ComponentDensity::UniformBox(u)
    }
}

/// Free-function form of [`ComponentDensity::log2_pdf`].
pub fn component_log2_pdf(f: &ComponentDensity, x: &[f64]) -> Result<f64> {
    f.log2_pdf(x)
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(MixentError::DimensionMismatch { expected, found })
    }
}

/// `p(x) = Σ_c π_c f_c(x)` over `K >= 1` components of a common dimension.
#[derive(Debug, Clone)]
pub struct MixtureModel {
    weights: Vec<f64>,
    components: Vec<ComponentDensity>,
    dimension: usize,
}

impl MixtureModel {
    pub fn new(weights: Vec<f64>, components: Vec<ComponentDensity>) -> Result<Self> {
        let dimension = validate_parts(&weights, &components)?;
        Ok(Self {
            weights,
            components,
            dimension,
        })
    }

    /// Equal weights `1/K`.
    pub fn equal_weights(components: Vec<ComponentDensity>) -> Result<Self> {
        let k = components.len();
        Self::new(vec![1.0 / k as f64; k], components)
    }

    /// Single component with weight one.
    pub fn single(component: impl Into<ComponentDensity>) -> Self {
        Self::new(vec![1.0], vec![component.into()]).expect("one valid component")
    }

    /// Re-checks every invariant. Models built through [`MixtureModel::new`]
    /// always pass; this is the explicit gate for callers that want one.
    pub fn validate(&self) -> Result<()> {
        validate_parts(&self.weights, &self.components).map(|_| ())
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn components(&self) -> &[ComponentDensity] {
        &self.components
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Number of components `K`.
    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    /// `log2 Σ_c π_c f_c(x)` by log-sum-exp over the component log-densities.
    pub fn log2_pdf(&self, x: &[f64]) -> Result<f64> {
        check_len(self.dimension, x.len())?;
        Ok(self.log2_pdf_unchecked(x, &mut Vec::with_capacity(self.len())))
    }

    pub(crate) fn log2_pdf_unchecked(&self, x: &[f64], scratch: &mut Vec<f64>) -> f64 {
        scratch.clear();
        scratch.extend(self.components.iter().map(|c| c.log2_pdf_unchecked(x)));
        log2_weighted_sum_exp2(&self.weights, scratch)
    }

    /// Same model with every component shifted by `offset`.
    pub fn translated(&self, offset: &[f64]) -> Result<Self> {
        let components = self
            .components
            .iter()
            .map(|c| c.translated(offset))
            .collect::<Result<Vec<_>>>()?;
        Self::new(self.weights.clone(), components)
    }
}

/// Free-function form of [`MixtureModel::validate`].
pub fn validate(model: &MixtureModel) -> Result<()> {
    model.validate()
}

fn validate_parts(weights: &[f64], components: &[ComponentDensity]) -> Result<usize> {
    if components.is_empty() {
        return Err(MixentError::Weight(
            "mixture needs at least one component".into(),
        ));
    }
    if weights.len() != components.len() {
        return Err(MixentError::Weight(format!(
            "{} weights for {} components",
            weights.len(),
            components.len()
        )));
    }
    if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
        return Err(MixentError::Weight(format!("weight {w} is not positive")));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > WEIGHT_SUM_TOL {
        return Err(MixentError::Weight(format!(
            "weights sum to {total}, not 1"
        )));
    }
    let dimension = components[0].dimension();
    for c in components {
        check_len(dimension, c.dimension())?;
    }
    Ok(dimension)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn std_normal() -> ComponentDensity {
        Gaussian::isotropic(vec![0.0], 1.0).unwrap().into()
    }

    #[test]
    fn validate_accepts_single_standard_normal() {
        let m = MixtureModel::new(vec![1.0], vec![std_normal()]).unwrap();
        assert!(m.validate().is_ok());
    }

    #[test]
    fn weights_must_sum_to_one() {
        let err = MixtureModel::new(vec![0.5, 0.6], vec![std_normal(), std_normal()]).unwrap_err();
        assert!(matches!(err, MixentError::Weight(_)));
        let err = MixtureModel::new(vec![1.0, 0.0], vec![std_normal(), std_normal()]).unwrap_err();
        assert!(matches!(err, MixentError::Weight(_)));
    }

    #[test]
    fn indefinite_covariance_is_rejected() {
        let cov = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 2.0, 1.0]);
        assert_eq!(
            Gaussian::new(vec![0.0, 0.0], cov).unwrap_err(),
            MixentError::NotPositiveDefinite
        );
    }

    #[test]
    fn asymmetric_covariance_is_rejected() {
        let cov = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.2, 1.0]);
        assert!(matches!(
            Gaussian::new(vec![0.0, 0.0], cov),
            Err(MixentError::NotSymmetric { .. })
        ));
    }

    #[test]
    fn scales_must_be_positive() {
        assert!(matches!(
            Laplacian::new(vec![0.0], vec![0.0]),
            Err(MixentError::NonPositiveScale(_))
        ));
        assert!(matches!(
            UniformBox::new(vec![0.0, 0.0], vec![1.0, -1.0]),
            Err(MixentError::NonPositiveScale(_))
        ));
    }

    #[test]
    fn mixed_dimensions_are_rejected() {
        let g2: ComponentDensity = Gaussian::isotropic(vec![0.0, 0.0], 1.0).unwrap().into();
        let err = MixtureModel::new(vec![0.5, 0.5], vec![std_normal(), g2]).unwrap_err();
        assert_eq!(
            err,
            MixentError::DimensionMismatch {
                expected: 1,
                found: 2
            }
        );
    }

    #[test]
    fn mixture_density_reference_points() {
        let m = MixtureModel::single(Gaussian::isotropic(vec![0.0], 1.0).unwrap());
        assert_abs_diff_eq!(
            m.log2_pdf(&[0.0]).unwrap(),
            -1.325_748_064_736_159_4,
            epsilon = 1e-14
        );

        let b = MixtureModel::single(UniformBox::new(vec![0.0], vec![3f64.sqrt()]).unwrap());
        assert_abs_diff_eq!(
            b.log2_pdf(&[0.0]).unwrap(),
            -1.792_481_250_360_578_1,
            epsilon = 1e-14
        );
        assert_eq!(b.log2_pdf(&[10.0]).unwrap(), f64::NEG_INFINITY);
        assert!(matches!(
            b.log2_pdf(&[0.0, 1.0]),
            Err(MixentError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn component_density_reference_points() {
        let lap: ComponentDensity = Laplacian::new(vec![0.0], vec![1.0]).unwrap().into();
        assert_eq!(lap.log2_pdf(&[0.0]).unwrap(), -1.0);

        let g2: ComponentDensity = Gaussian::isotropic(vec![0.0, 0.0], 1.0).unwrap().into();
        assert_abs_diff_eq!(
            g2.log2_pdf(&[0.0, 0.0]).unwrap(),
            -2.651_496_129_472_318_8,
            epsilon = 1e-14
        );

        let unit: ComponentDensity = UniformBox::new(vec![0.3, -1.0], vec![0.5, 0.5])
            .unwrap()
            .into();
        assert_eq!(unit.log2_pdf(&[0.4, -0.9]).unwrap(), 0.0);
    }

    #[test]
    fn diagonal_detection() {
        let g = Gaussian::diagonal(vec![0.0, 0.0], &[1.0, 2.0]).unwrap();
        assert_eq!(g.variances(), Some(&[1.0, 2.0][..]));
        let cov = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 1.0]);
        assert!(Gaussian::new(vec![0.0, 0.0], cov)
            .unwrap()
            .variances()
            .is_none());
    }
}
