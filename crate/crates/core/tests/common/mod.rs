#![allow(dead_code)]

use mixent::model::{ComponentDensity, Family, Gaussian, Laplacian, MixtureModel, UniformBox};
use mixent::sampling::stream_rng;
use nalgebra::DMatrix;
use rand::Rng;
use rand_chacha::ChaCha12Rng;
use rand_distr::{Distribution, StandardNormal};

pub const COMPOSITIONS: [(&str, Family, Family); 6] = [
    ("GM", Family::Gaussian, Family::Gaussian),
    ("LM", Family::Laplacian, Family::Laplacian),
    ("UM", Family::Uniform, Family::Uniform),
    ("GLM", Family::Gaussian, Family::Laplacian),
    ("GUM", Family::Gaussian, Family::Uniform),
    ("LUM", Family::Laplacian, Family::Uniform),
];

pub fn rng(seed: u64) -> ChaCha12Rng {
    stream_rng(seed, 0)
}

pub fn log_uniform<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo.ln()..hi.ln()).exp()
}

/// Random component centred at `mean`. Gaussians get a full covariance
/// unless `diagonal` is set.
pub fn random_component<R: Rng>(
    rng: &mut R,
    family: Family,
    mean: Vec<f64>,
    diagonal: bool,
) -> ComponentDensity {
    let n = mean.len();
    match family {
        Family::Gaussian if diagonal => {
            let v: Vec<f64> = (0..n).map(|_| log_uniform(rng, 0.09, 4.0)).collect();
            Gaussian::diagonal(mean, &v).unwrap().into()
        }
        Family::Gaussian => {
            let a: DMatrix<f64> = DMatrix::from_fn(n, n, |_, _| StandardNormal.sample(rng));
            let scale = log_uniform(rng, 0.3, 2.0);
            let cov: DMatrix<f64> =
                (&a * a.transpose() / n as f64 + DMatrix::identity(n, n) * 0.2) * (scale * scale);
            let cov = (&cov + cov.transpose()) * 0.5;
            Gaussian::new(mean, cov).unwrap().into()
        }
        Family::Laplacian => {
            let b: Vec<f64> = (0..n).map(|_| log_uniform(rng, 0.2, 2.0)).collect();
            Laplacian::new(mean, b).unwrap().into()
        }
        Family::Uniform => {
            let a: Vec<f64> = (0..n).map(|_| log_uniform(rng, 0.3, 3.0)).collect();
            UniformBox::new(mean, a).unwrap().into()
        }
    }
}

pub fn unit_vector<R: Rng>(rng: &mut R, n: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..n).map(|_| StandardNormal.sample(rng)).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / norm).collect()
}

/// Random weights bounded away from zero, summing to one.
pub fn random_weights<R: Rng>(rng: &mut R, k: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..k).map(|_| rng.random_range(0.2..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let mut w: Vec<f64> = raw.iter().map(|x| x / total).collect();
    let head: f64 = w[..k - 1].iter().sum();
    w[k - 1] = 1.0 - head;
    w
}

/// Mixture of composition `(a, b)` whose first `k/2` labels come from `a`,
/// with means `s · u_c` along random unit directions.
pub fn random_mixture<R: Rng>(
    rng: &mut R,
    a: Family,
    b: Family,
    n: usize,
    k: usize,
    s: f64,
) -> MixtureModel {
    let diagonal = !(a == Family::Gaussian && b == Family::Gaussian);
    let components = (0..k)
        .map(|c| {
            let family = if c < k / 2 { a } else { b };
            let mean = unit_vector(rng, n).into_iter().map(|x| s * x).collect();
            random_component(rng, family, mean, diagonal)
        })
        .collect();
    MixtureModel::new(random_weights(rng, k), components).unwrap()
}

/// Canonical unit-variance component of `family` at `mean`.
pub fn unit_component(family: Family, mean: Vec<f64>) -> ComponentDensity {
    let n = mean.len();
    match family {
        Family::Gaussian => Gaussian::isotropic(mean, 1.0).unwrap().into(),
        Family::Laplacian => Laplacian::new(mean, vec![std::f64::consts::FRAC_1_SQRT_2; n])
            .unwrap()
            .into(),
        Family::Uniform => UniformBox::new(mean, vec![3f64.sqrt(); n]).unwrap().into(),
    }
}
