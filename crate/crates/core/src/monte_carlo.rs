//! Seeded Monte Carlo reference estimate of `h(X)` with its standard error.

use serde::Serialize;

use rayon::prelude::*;

use crate::error::{MixentError, Result};
use crate::model::MixtureModel;
use crate::numeric::NeumaierSum;
use crate::sampling::{chunk_count, chunk_len, draw_into, stream_rng};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    /// `-(1/N) Σ log2 p(X_j)`.
    pub entropy_bits: f64,
    /// Unbiased sample standard deviation over `√N`.
    pub std_error_bits: f64,
    pub sample_count: usize,
    pub seed: u64,
}

/// Count, mean and sum of squared deviations of one chunk.
#[derive(Debug, Clone, Copy)]
struct Moments {
    count: usize,
    mean: f64,
    m2: f64,
}

impl Moments {
    /// Two compensated passes over the chunk: mean about the first value,
    /// then squared deviations about the mean. Constant data yields `m2 == 0`
    /// and the constant itself as the mean.
    fn of(values: &[f64]) -> Self {
        let anchor = values[0];
        let shift: NeumaierSum = values.iter().map(|v| v - anchor).collect();
        let mean = anchor + shift.total() / values.len() as f64;
        let m2: NeumaierSum = values.iter().map(|v| (v - mean) * (v - mean)).collect();
        Moments {
            count: values.len(),
            mean,
            m2: m2.total(),
        }
    }

    /// Chan et al. pairwise merge.
    fn merge(self, other: Moments) -> Moments {
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let frac = other.count as f64 / count as f64;
        Moments {
            count,
            mean: self.mean + delta * frac,
            m2: self.m2 + other.m2 + delta * delta * self.count as f64 * frac,
        }
    }
}

/// `samples` draws from chunked streams of `seed`, evaluated chunk by chunk
/// in parallel and reduced in chunk order.
pub fn estimate(model: &MixtureModel, samples: usize, seed: u64) -> Result<McEstimate> {
    if samples < 2 {
        return Err(MixentError::InvalidArgument(format!(
            "need at least 2 samples, got {samples}"
        )));
    }
    let n = model.dimension();
    let chunks = (0..chunk_count(samples))
        .into_par_iter()
        .map(|chunk| {
            let len = chunk_len(samples, chunk);
            let mut rng = stream_rng(seed, chunk as u64);
            let mut x = vec![0.0; n];
            let mut scratch = Vec::with_capacity(model.len());
            let mut values = Vec::with_capacity(len);
            for j in 0..len {
                draw_into(model, &mut rng, &mut x);
                let v = -model.log2_pdf_unchecked(&x, &mut scratch);
                if !v.is_finite() {
                    return Err(MixentError::NonFiniteLogDensity {
                        index: chunk * crate::sampling::CHUNK_SIZE + j,
                    });
                }
                values.push(v);
            }
            Ok(Moments::of(&values))
        })
        .collect::<Result<Vec<_>>>()?;
    let total = chunks
        .into_iter()
        .reduce(Moments::merge)
        .expect("at least one chunk");
    let variance = total.m2 / (total.count - 1) as f64;
    Ok(McEstimate {
        entropy_bits: total.mean,
        std_error_bits: (variance / total.count as f64).sqrt(),
        sample_count: total.count,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Gaussian, UniformBox};

    #[test]
    fn constant_log_density_has_zero_error() {
        let m = MixtureModel::single(UniformBox::new(vec![0.0], vec![2.0]).unwrap());
        let est = estimate(&m, 70_000, 5).unwrap();
        assert_eq!(est.entropy_bits, 2.0);
        assert_eq!(est.std_error_bits, 0.0);
        assert_eq!(est.sample_count, 70_000);
    }

    #[test]
    fn standard_normal_within_three_standard_errors() {
        let m = MixtureModel::single(Gaussian::isotropic(vec![0.0], 1.0).unwrap());
        let est = estimate(&m, 1_000_000, 0).unwrap();
        assert!((est.entropy_bits - 2.047_095_585_180_641).abs() <= 3.0 * est.std_error_bits);
    }

    #[test]
    fn far_apart_pair_adds_one_bit() {
        let m = MixtureModel::equal_weights(vec![
            Gaussian::isotropic(vec![-50.0], 1.0).unwrap().into(),
            Gaussian::isotropic(vec![50.0], 1.0).unwrap().into(),
        ])
        .unwrap();
        let est = estimate(&m, 200_000, 9).unwrap();
        assert!((est.entropy_bits - 3.047_095_585_180_641).abs() <= 3.0 * est.std_error_bits);
    }

    #[test]
    fn too_few_samples() {
        let m = MixtureModel::single(Gaussian::isotropic(vec![0.0], 1.0).unwrap());
        assert!(matches!(
            estimate(&m, 1, 0),
            Err(MixentError::InvalidArgument(_))
        ));
    }

    #[test]
    fn merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.1).collect();
        let whole = Moments::of(&xs);
        let parts = Moments::of(&xs[..300]).merge(Moments::of(&xs[300..]));
        assert!((whole.mean - parts.mean).abs() < 1e-12);
        assert!((whole.m2 - parts.m2).abs() < 1e-9 * whole.m2);
    }
}
