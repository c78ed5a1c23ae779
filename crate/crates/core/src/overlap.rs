//! Closed-form pairwise overlap integrals `z = ∫ f g` in the log domain.
//!
//! Same-family Gaussian pairs accept full covariances. Every other pair
//! factorizes over coordinates and needs any Gaussian involved to have a
//! diagonal covariance. Per-coordinate factors are summed as natural logs
//! and converted to base 2 at the end.

use std::f64::consts::{LN_2, LOG2_E, PI};

use nalgebra::{Cholesky, DMatrix};

use crate::component_entropy::collision_entropy;
use crate::error::{MixentError, Result};
use crate::model::{check_len, ComponentDensity, Gaussian, Laplacian, MixtureModel, UniformBox};
use crate::numeric::{ln_add_exp, ln_one_minus_exp};
use crate::special::{ln_laplace_interval, ln_std_normal_cdf, ln_std_normal_interval};

/// Below this relative scale difference the equal-scale Laplace branch is used.
pub const LAPLACE_EQUAL_SCALE_TOL: f64 = 1e-6;

/// `log2 ∫ f g`, `-inf` exactly when the supports are disjoint.
pub fn log2_overlap(f: &ComponentDensity, g: &ComponentDensity) -> Result<f64> {
    check_len(f.dimension(), g.dimension())?;
    use ComponentDensity::*;
    let ln_z = match (f, g) {
        (Gaussian(a), Gaussian(b)) => ln_overlap_gg(a, b),
        (Laplacian(a), Laplacian(b)) => ln_overlap_ll(a, b),
        (UniformBox(a), UniformBox(b)) => return Ok(log2_overlap_uu(a, b)),
        (Gaussian(a), Laplacian(b)) | (Laplacian(b), Gaussian(a)) => ln_overlap_gl(a, b)?,
        (Gaussian(a), UniformBox(b)) | (UniformBox(b), Gaussian(a)) => ln_overlap_gu(a, b)?,
        (Laplacian(a), UniformBox(b)) | (UniformBox(b), Laplacian(a)) => ln_overlap_lu(a, b),
    };
    Ok(ln_z * LOG2_E)
}

/// `φ(μ_a; μ_b, Σ_a + Σ_b)`, solving against the Cholesky factor of the sum.
fn ln_overlap_gg(a: &Gaussian, b: &Gaussian) -> f64 {
    let n = a.dimension();
    let sum: DMatrix<f64> = a.cov() + b.cov();
    let l = Cholesky::new(sum)
        .expect("sum of positive definite matrices is positive definite")
        .l();
    let mut y = vec![0.0; n];
    let mut quad = 0.0;
    let mut ln_det = 0.0;
    for i in 0..n {
        let mut r = a.mean()[i] - b.mean()[i];
        for j in 0..i {
            r -= l[(i, j)] * y[j];
        }
        y[i] = r / l[(i, i)];
        quad += y[i] * y[i];
        ln_det += 2.0 * l[(i, i)].ln();
    }
    -0.5 * quad - 0.5 * (n as f64) * (2.0 * PI).ln() - 0.5 * ln_det
}

fn ln_overlap_ll(a: &Laplacian, b: &Laplacian) -> f64 {
    (0..a.dimension())
        .map(|i| {
            ln_overlap_ll_1d(
                (a.location()[i] - b.location()[i]).abs(),
                a.scale()[i],
                b.scale()[i],
            )
        })
        .sum()
}

/// One coordinate of the Laplace–Laplace overlap at distance `delta`.
fn ln_overlap_ll_1d(delta: f64, s1: f64, s2: f64) -> f64 {
    let (big, small) = if s1 >= s2 { (s1, s2) } else { (s2, s1) };
    if big - small <= LAPLACE_EQUAL_SCALE_TOL * big {
        // e^{-δ/s}(1 + δ/s) / (4s)
        let s = 0.5 * (s1 + s2);
        let r = delta / s;
        return -r + r.ln_1p() - (4.0 * s).ln();
    }
    // (s1 e^{-δ/s1} - s2 e^{-δ/s2}) / (2(s1² - s2²)) with s1 > s2; the first
    // numerator term dominates so the difference is taken as ln(1 - ratio).
    let ln_ratio = (small / big).ln() - delta * (1.0 / small - 1.0 / big);
    big.ln() - delta / big + ln_one_minus_exp(ln_ratio)
        - LN_2
        - (big - small).ln()
        - (big + small).ln()
}

fn log2_overlap_uu(a: &UniformBox, b: &UniformBox) -> f64 {
    let mut log2_intersection = 0.0;
    for i in 0..a.dimension() {
        let len = a.upper(i).min(b.upper(i)) - a.lower(i).max(b.lower(i));
        if len <= 0.0 {
            return f64::NEG_INFINITY;
        }
        log2_intersection += len.log2();
    }
    log2_intersection - a.log2_volume() - b.log2_volume()
}

fn diagonal_variances(g: &Gaussian) -> Result<&[f64]> {
    g.variances().ok_or(MixentError::NonDiagonalCovariance)
}

fn ln_overlap_gl(g: &Gaussian, l: &Laplacian) -> Result<f64> {
    let var = diagonal_variances(g)?;
    Ok((0..g.dimension())
        .map(|i| ln_overlap_gl_1d(g.mean()[i], var[i].sqrt(), l.location()[i], l.scale()[i]))
        .sum())
}

/// `∫ N(x; m, σ²) e^{-|x-ℓ|/b} / (2b) dx`.
///
/// Splitting at `ℓ` gives, with `δ = m - ℓ`,
/// `e^{σ²/2b²} / (2b) · [e^{-δ/b} Φ(δ/σ - σ/b) + e^{δ/b} Φ(-δ/σ - σ/b)]`.
/// Each bracket term is summed as `exp(A + ln Φ(B))`.
fn ln_overlap_gl_1d(m: f64, sigma: f64, loc: f64, b: f64) -> f64 {
    let delta = m - loc;
    let a0 = sigma * sigma / (2.0 * b * b);
    let right = a0 - delta / b + ln_std_normal_cdf(delta / sigma - sigma / b);
    let left = a0 + delta / b + ln_std_normal_cdf(-delta / sigma - sigma / b);
    ln_add_exp(right, left) - (2.0 * b).ln()
}

/// `P(Z ∈ A) / |A|` for `Z ~ N(μ, diag σ²)`.
fn ln_overlap_gu(g: &Gaussian, u: &UniformBox) -> Result<f64> {
    let var = diagonal_variances(g)?;
    let mut ln_mass = 0.0;
    for i in 0..g.dimension() {
        let sigma = var[i].sqrt();
        let lo = (u.lower(i) - g.mean()[i]) / sigma;
        let hi = (u.upper(i) - g.mean()[i]) / sigma;
        ln_mass += ln_std_normal_interval(lo, hi);
    }
    Ok(ln_mass - u.log2_volume() / LOG2_E)
}

/// `P(Y ∈ A) / |A|` for a factorized Laplace `Y`.
fn ln_overlap_lu(l: &Laplacian, u: &UniformBox) -> f64 {
    let mut ln_mass = 0.0;
    for i in 0..l.dimension() {
        ln_mass += ln_laplace_interval(u.lower(i), u.upper(i), l.location()[i], l.scale()[i]);
    }
    ln_mass - u.log2_volume() / LOG2_E
}

/// `K × K` matrix of `log2 z_{c,d}`, symmetric by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct OverlapMatrix {
    log2_z: DMatrix<f64>,
    dimension: usize,
}

impl OverlapMatrix {
    /// Number of components.
    pub fn len(&self) -> usize {
        self.log2_z.nrows()
    }

    pub fn is_empty(&self) -> bool {
        self.log2_z.nrows() == 0
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn log2_z(&self) -> &DMatrix<f64> {
        &self.log2_z
    }

    pub fn get(&self, c: usize, d: usize) -> f64 {
        self.log2_z[(c, d)]
    }

    pub fn row(&self, c: usize) -> Vec<f64> {
        self.log2_z.row(c).iter().copied().collect()
    }
}

/// Fills all `K²` entries from `K(K+1)/2` kernel evaluations. Diagonal
/// entries come from the collision entropy, which equals `-log2 z_{c,c}`;
/// pairs of identical components reuse the diagonal value.
pub fn overlap_matrix(model: &MixtureModel) -> Result<OverlapMatrix> {
    let k = model.len();
    let comps = model.components();
    let mut log2_z = DMatrix::zeros(k, k);
    for c in 0..k {
        log2_z[(c, c)] = -collision_entropy(&comps[c]);
        for d in (c + 1)..k {
            let v = if comps[c] == comps[d] {
                log2_z[(c, c)]
            } else {
                log2_overlap(&comps[c], &comps[d])?
            };
            log2_z[(c, d)] = v;
            log2_z[(d, c)] = v;
        }
    }
    Ok(OverlapMatrix {
        log2_z,
        dimension: model.dimension(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn gauss(m: f64, var: f64) -> ComponentDensity {
        Gaussian::isotropic(vec![m], var).unwrap().into()
    }
    fn lap(m: f64, b: f64) -> ComponentDensity {
        Laplacian::new(vec![m], vec![b]).unwrap().into()
    }
    fn boxed(lo: f64, hi: f64) -> ComponentDensity {
        UniformBox::from_bounds(&[lo], &[hi]).unwrap().into()
    }
    fn z(f: &ComponentDensity, g: &ComponentDensity) -> f64 {
        log2_overlap(f, g).unwrap().exp2()
    }

    #[test]
    fn gaussian_pair_reference() {
        let v = log2_overlap(&gauss(0.0, 1.0), &gauss(0.0, 1.0)).unwrap();
        assert_relative_eq!(v, -1.825_748_064_736_159_4, max_relative = 1e-14);
        assert_relative_eq!(
            z(&gauss(0.0, 1.0), &gauss(3.0, 4.0)),
            0.072_537_073_483_922_93,
            max_relative = 1e-13
        );
    }

    #[test]
    fn laplace_pair_reference() {
        assert_eq!(log2_overlap(&lap(0.0, 1.0), &lap(0.0, 1.0)).unwrap(), -2.0);
    }

    #[test]
    fn box_pair_reference() {
        assert_eq!(
            log2_overlap(&boxed(0.0, 1.0), &boxed(2.0, 3.0)).unwrap(),
            f64::NEG_INFINITY
        );
        assert_eq!(
            log2_overlap(&boxed(0.0, 1.0), &boxed(0.0, 1.0)).unwrap(),
            0.0
        );
        // Touching boxes share a null set.
        assert_eq!(
            log2_overlap(&boxed(0.0, 1.0), &boxed(1.0, 2.0)).unwrap(),
            f64::NEG_INFINITY
        );
    }

    #[test]
    fn gaussian_box_reference() {
        let s3 = 3f64.sqrt();
        assert_relative_eq!(
            z(&gauss(0.0, 1.0), &boxed(-s3, s3)),
            0.264_638_739_039_990_43,
            max_relative = 1e-13
        );
    }

    #[test]
    fn gaussian_laplace_reference() {
        // mpmath quadrature of N(x;0,1)·½e^{-|x|}.
        assert_relative_eq!(
            z(&gauss(0.0, 1.0), &lap(0.0, 1.0)),
            0.261_578_291_865_123_37,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            z(&gauss(1.3, 0.49), &lap(-0.4, 2.1)),
            0.111_622_900_146_168_31,
            max_relative = 1e-13
        );
    }

    #[test]
    fn near_equal_laplace_scales_are_continuous() {
        let at = |s2: f64| ln_overlap_ll_1d(0.7, 1.0, s2);
        let equal = at(1.0);
        for eps in [1e-9, 1e-7, 0.999e-6, 1.001e-6, 1e-5, 1e-4] {
            let v = at(1.0 + eps);
            assert!((v - equal).abs() < 2.0 * eps, "eps {eps}: {v} vs {equal}");
        }
    }

    #[test]
    fn far_separated_cross_family_overlaps_stay_finite() {
        for (f, g) in [
            (gauss(0.0, 0.01), lap(40.0, 0.1)),
            (gauss(0.0, 0.01), boxed(20.0, 21.0)),
            (lap(0.0, 0.1), boxed(300.0, 301.0)),
        ] {
            let v = log2_overlap(&f, &g).unwrap();
            assert!(v.is_finite() && v < -500.0, "{v}");
        }
    }

    #[test]
    fn cross_family_needs_diagonal_covariance() {
        let cov = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.5, 1.0]);
        let g: ComponentDensity = Gaussian::new(vec![0.0, 0.0], cov).unwrap().into();
        let l: ComponentDensity = Laplacian::new(vec![0.0, 0.0], vec![1.0, 1.0])
            .unwrap()
            .into();
        let u: ComponentDensity = UniformBox::new(vec![0.0, 0.0], vec![1.0, 1.0])
            .unwrap()
            .into();
        assert_eq!(
            log2_overlap(&g, &l),
            Err(MixentError::NonDiagonalCovariance)
        );
        assert_eq!(
            log2_overlap(&u, &g),
            Err(MixentError::NonDiagonalCovariance)
        );
        assert!(log2_overlap(&g, &g).is_ok());
    }

    #[test]
    fn matrix_shapes() {
        let f = gauss(0.3, 2.0);
        let single =
            overlap_matrix(&MixtureModel::new(vec![1.0], vec![f.clone()]).unwrap()).unwrap();
        assert_eq!(single.get(0, 0), -collision_entropy(&f));
        let pair =
            overlap_matrix(&MixtureModel::equal_weights(vec![f.clone(), f.clone()]).unwrap())
                .unwrap();
        let v = pair.get(0, 0);
        assert!(pair.log2_z().iter().all(|&e| e == v));
        assert!((log2_overlap(&f, &f).unwrap() - v).abs() < 1e-14);
    }
}
