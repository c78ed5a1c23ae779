//! Randomized comparison of the closed-form overlap kernels against quadrature.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{MixentError, Result};
use crate::model::{ComponentDensity, Family, Gaussian, Laplacian, UniformBox};
use crate::overlap::log2_overlap;
use crate::quad::overlap_1d_relative;
use crate::sampling::stream_rng;

/// The six unordered family pairs.
pub const FAMILY_PAIRS: [(Family, Family); 6] = [
    (Family::Gaussian, Family::Gaussian),
    (Family::Laplacian, Family::Laplacian),
    (Family::Uniform, Family::Uniform),
    (Family::Gaussian, Family::Laplacian),
    (Family::Gaussian, Family::Uniform),
    (Family::Laplacian, Family::Uniform),
];

pub const LOCATION_RANGE: (f64, f64) = (-10.0, 10.0);
pub const SCALE_RANGE: (f64, f64) = (0.1, 10.0);
/// Relative tolerance requested from the quadrature oracle.
pub const ORACLE_REL_TOL: f64 = 1e-11;
/// Denominator floor in the relative error.
pub const Z_FLOOR: f64 = 1e-300;

pub fn pair_label(pair: (Family, Family)) -> String {
    format!("{}{}", family_letter(pair.0), family_letter(pair.1))
}

fn family_letter(f: Family) -> char {
    match f {
        Family::Gaussian => 'G',
        Family::Laplacian => 'L',
        Family::Uniform => 'U',
    }
}

/// Component of `family` with location `loc` and scale `scale`: the
/// standard deviation, Laplace scale, or box half-width.
pub fn component_1d(family: Family, loc: f64, scale: f64) -> Result<ComponentDensity> {
    Ok(match family {
        Family::Gaussian => Gaussian::isotropic(vec![loc], scale * scale)?.into(),
        Family::Laplacian => Laplacian::new(vec![loc], vec![scale])?.into(),
        Family::Uniform => UniformBox::new(vec![loc], vec![scale])?.into(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Trial {
    pub loc_a: f64,
    pub scale_a: f64,
    pub loc_b: f64,
    pub scale_b: f64,
    pub closed_form: f64,
    pub quadrature: f64,
    pub rel_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairReport {
    pub pair: String,
    pub trials: usize,
    pub max_rel_error: f64,
    pub worst: Option<Trial>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub tolerance: f64,
    pub pairs: Vec<PairReport>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.pairs.iter().all(|p| p.max_rel_error <= self.tolerance)
    }
}

fn draw_params<R: Rng>(rng: &mut R) -> (f64, f64) {
    let loc = rng.random_range(LOCATION_RANGE.0..=LOCATION_RANGE.1);
    let (lo, hi) = (SCALE_RANGE.0.ln(), SCALE_RANGE.1.ln());
    (loc, rng.random_range(lo..=hi).exp())
}

/// Compares one pair of components; errors from the oracle propagate.
pub fn compare(f: &ComponentDensity, g: &ComponentDensity) -> Result<(f64, f64, f64)> {
    let zc = log2_overlap(f, g)?.exp2();
    let zq = overlap_1d_relative(f, g, ORACLE_REL_TOL)?.value;
    Ok((zc, zq, (zc - zq).abs() / zq.max(Z_FLOOR)))
}

/// Runs `trials` random comparisons for each family pair. Pair `p` draws its
/// parameters from stream `p` of `seed`.
pub fn verify_overlaps(trials: usize, seed: u64, tolerance: f64) -> Result<VerifyReport> {
    if !(tolerance >= 0.0) {
        return Err(MixentError::InvalidArgument(format!(
            "tolerance {tolerance} must be non-negative"
        )));
    }
    let pairs = FAMILY_PAIRS
        .iter()
        .enumerate()
        .map(|(p, &pair)| {
            let mut rng = stream_rng(seed, p as u64);
            let params: Vec<_> = (0..trials)
                .map(|_| (draw_params(&mut rng), draw_params(&mut rng)))
                .collect();
            let results = params
                .par_iter()
                .map(|&((la, sa), (lb, sb))| {
                    let f = component_1d(pair.0, la, sa)?;
                    let g = component_1d(pair.1, lb, sb)?;
                    let (closed_form, quadrature, rel_error) = compare(&f, &g)?;
                    Ok(Trial {
                        loc_a: la,
                        scale_a: sa,
                        loc_b: lb,
                        scale_b: sb,
                        closed_form,
                        quadrature,
                        rel_error,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            let worst = results
                .iter()
                .copied()
                .max_by(|a, b| a.rel_error.total_cmp(&b.rel_error));
            Ok(PairReport {
                pair: pair_label(pair),
                trials,
                max_rel_error: worst.map_or(0.0, |t| t.rel_error),
                worst,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(VerifyReport { tolerance, pairs })
}
