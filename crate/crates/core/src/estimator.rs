//! Label-sandwich bounds and the offset-calibrated, clipped entropy
//! approximation, collected into one [`EntropyReport`].

use serde::Serialize;

use crate::component_entropy::{offset, shannon_entropy};
use crate::error::{MixentError, Result};
use crate::model::{MixtureModel, WEIGHT_SUM_TOL};
use crate::numeric::{log2_weighted_sum_exp2, weighted_mean};
use crate::overlap::{overlap_matrix, OverlapMatrix};

/// All quantities in bits.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropyReport {
    /// `h(X|C) = Σ π_c h(f_c)`, also the lower bound.
    pub cond_entropy_bits: f64,
    /// `H(C)`.
    pub label_entropy_bits: f64,
    pub lower_bits: f64,
    /// `h(X|C) + H(C)`.
    pub upper_bits: f64,
    /// Jensen/overlap lower bound `h_L`.
    pub jensen_bits: f64,
    /// Weight-averaged family offset.
    pub mean_offset_bits: f64,
    /// Unclipped `h_L + Δ̄`.
    pub approx_bits: f64,
    /// `approx_bits` projected into `[lower_bits, upper_bits]`.
    pub clipped_bits: f64,
    /// `clipped_bits - cond_entropy_bits`, in `[0, H(C)]`.
    pub mi_proxy_bits: f64,
}

pub fn conditional_entropy(model: &MixtureModel) -> f64 {
    let h: Vec<f64> = model.components().iter().map(shannon_entropy).collect();
    weighted_mean(model.weights(), &h)
}

/// `-Σ π_c log2 π_c` of a probability vector.
pub fn label_entropy(weights: &[f64]) -> Result<f64> {
    if weights.is_empty() {
        return Err(MixentError::Weight("empty weight vector".into()));
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
    // `+ 0.0` turns the single-label `-0.0` into `0.0`.
    Ok(-weights.iter().map(|w| w * w.log2()).sum::<f64>() + 0.0)
}

/// `h_L = -Σ_c π_c log2(Σ_d π_d z_{c,d})`.
pub fn jensen_lower(model: &MixtureModel, overlaps: &OverlapMatrix) -> Result<f64> {
    if overlaps.len() != model.len() {
        return Err(MixentError::InvalidArgument(format!(
            "overlap matrix is {0}×{0} for a {1}-component model",
            overlaps.len(),
            model.len()
        )));
    }
    let inner = (0..model.len())
        .map(|c| {
            let v = log2_weighted_sum_exp2(model.weights(), &overlaps.row(c));
            if v.is_finite() {
                Ok(v)
            } else {
                Err(MixentError::InvalidArgument(format!(
                    "overlap row {c} has no finite entry"
                )))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(-weighted_mean(model.weights(), &inner))
}

/// `Δ̄ = Σ π_c Δ(f_c)`.
pub fn mean_offset(model: &MixtureModel) -> f64 {
    let offsets: Vec<f64> = model.components().iter().map(offset).collect();
    weighted_mean(model.weights(), &offsets)
}

pub fn approximate(model: &MixtureModel) -> Result<EntropyReport> {
    let overlaps = overlap_matrix(model)?;
    approximate_with(model, &overlaps)
}

/// [`approximate`] with a precomputed overlap matrix.
pub fn approximate_with(model: &MixtureModel, overlaps: &OverlapMatrix) -> Result<EntropyReport> {
    let cond = conditional_entropy(model);
    let label = label_entropy(model.weights())?;
    let lower = cond;
    let upper = cond + label;
    let jensen = jensen_lower(model, overlaps)?;
    let mean_offset = mean_offset(model);
    let approx = jensen + mean_offset;
    let clipped = approx.max(lower).min(upper);
    let mi_proxy = (clipped - cond).clamp(0.0, label);
    Ok(EntropyReport {
        cond_entropy_bits: cond,
        label_entropy_bits: label,
        lower_bits: lower,
        upper_bits: upper,
        jensen_bits: jensen,
        mean_offset_bits: mean_offset,
        approx_bits: approx,
        clipped_bits: clipped,
        mi_proxy_bits: mi_proxy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::component_entropy::collision_entropy;
    use crate::model::{ComponentDensity, Gaussian, Laplacian, UniformBox};
    use approx::assert_abs_diff_eq;

    fn gauss(m: f64) -> ComponentDensity {
        Gaussian::isotropic(vec![m], 1.0).unwrap().into()
    }

    #[test]
    fn label_entropy_reference() {
        assert_eq!(label_entropy(&[0.125; 8]).unwrap(), 3.0);
        assert_eq!(label_entropy(&[1.0]).unwrap().to_bits(), 0.0f64.to_bits());
        assert_eq!(label_entropy(&[0.5, 0.5]).unwrap(), 1.0);
        assert!(label_entropy(&[0.5, 0.4]).is_err());
    }

    #[test]
    fn conditional_entropy_is_weighted_mean() {
        let m = MixtureModel::equal_weights(vec![gauss(0.0), gauss(3.0)]).unwrap();
        assert_abs_diff_eq!(
            conditional_entropy(&m),
            2.047_095_585_180_641_1,
            epsilon = 1e-14
        );
        // Boxes of volume 2 and 8: h = 1 and 3 bits.
        let m = MixtureModel::new(
            vec![0.25, 0.75],
            vec![
                UniformBox::new(vec![0.0], vec![1.0]).unwrap().into(),
                UniformBox::new(vec![0.0], vec![4.0]).unwrap().into(),
            ],
        )
        .unwrap();
        assert_eq!(conditional_entropy(&m), 2.5);
    }

    #[test]
    fn identical_components_make_jensen_the_collision_entropy() {
        let f: ComponentDensity = Laplacian::new(vec![1.0, 2.0], vec![0.5, 3.0])
            .unwrap()
            .into();
        let m =
            MixtureModel::new(vec![0.2, 0.3, 0.5], vec![f.clone(), f.clone(), f.clone()]).unwrap();
        let ov = overlap_matrix(&m).unwrap();
        assert_abs_diff_eq!(
            jensen_lower(&m, &ov).unwrap(),
            collision_entropy(&f),
            epsilon = 1e-13
        );
    }

    #[test]
    fn disjoint_components_make_jensen_label_plus_collision() {
        let a: ComponentDensity = UniformBox::new(vec![0.0], vec![1.0]).unwrap().into();
        let b: ComponentDensity = UniformBox::new(vec![10.0], vec![3.0]).unwrap().into();
        let m = MixtureModel::equal_weights(vec![a.clone(), b.clone()]).unwrap();
        let ov = overlap_matrix(&m).unwrap();
        let want = 1.0 + 0.5 * (collision_entropy(&a) + collision_entropy(&b));
        assert_abs_diff_eq!(jensen_lower(&m, &ov).unwrap(), want, epsilon = 1e-14);
    }

    #[test]
    fn complete_overlap_is_exact() {
        let f = Gaussian::isotropic(vec![0.5, -0.5], 2.5).unwrap();
        let comps = vec![ComponentDensity::from(f.clone()); 4];
        let m = MixtureModel::new(vec![0.1, 0.2, 0.3, 0.4], comps).unwrap();
        let r = approximate(&m).unwrap();
        assert_abs_diff_eq!(r.clipped_bits, shannon_entropy(&f.into()), epsilon = 1e-12);
    }

    #[test]
    fn far_separation_reaches_upper_bound() {
        let m = MixtureModel::equal_weights(vec![gauss(-50.0), gauss(50.0)]).unwrap();
        let r = approximate(&m).unwrap();
        assert_abs_diff_eq!(r.clipped_bits, r.cond_entropy_bits + 1.0, epsilon = 1e-9);
        assert_eq!(r.clipped_bits, r.upper_bits);
    }

    #[test]
    fn single_component_collapses_the_interval() {
        let f: ComponentDensity = Laplacian::new(vec![0.0], vec![1.3]).unwrap().into();
        let r = approximate(&MixtureModel::new(vec![1.0], vec![f.clone()]).unwrap()).unwrap();
        let h = shannon_entropy(&f);
        assert_eq!(r.lower_bits, h);
        assert_eq!(r.upper_bits, h);
        assert_eq!(r.clipped_bits, h);
        assert_eq!(r.mi_proxy_bits, 0.0);
    }
}
