//! Separation sweeps over variance-matched mixture families.
//!
//! `K` unit directions are drawn once per sweep. Component `c` is centred
//! at `S · u_c`, and for each grid value `S` the sweep records the
//! closed-form report next to a Monte Carlo estimate. Every family has unit
//! per-coordinate variance: Gaussian `σ² = 1`, Laplace `b = 1/√2`, box half-width `√3`.

use std::f64::consts::FRAC_1_SQRT_2;
use std::io::Write;
use std::path::Path;

use nalgebra::DMatrix;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{MixentError, Result};
use crate::estimator::approximate;
use crate::model::{ComponentDensity, Family, Gaussian, Laplacian, MixtureModel, UniformBox};
use crate::monte_carlo::estimate;
use crate::sampling::{derive_seed, stream_rng};

/// CSV header written by [`SweepResult::write_csv`].
pub const CSV_HEADER: [&str; 12] = [
    "family", "n", "K", "rho", "S", "h_mc", "se", "lower", "upper", "jensen", "approx", "clipped",
];

const DIRECTION_SEED_INDEX: u64 = u64::MAX;
const SPREAD_ITERATIONS: usize = 2000;
pub const DEFAULT_GRID_POINTS: usize = 25;
pub const DEFAULT_MC_SAMPLES: usize = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SweepFamily {
    #[serde(rename = "GM")]
    Gaussian,
    #[serde(rename = "LM")]
    Laplacian,
    #[serde(rename = "UM")]
    Uniform,
    #[serde(rename = "GLM")]
    GaussianLaplacian,
    #[serde(rename = "GUM")]
    GaussianUniform,
    #[serde(rename = "LUM")]
    LaplacianUniform,
    /// Gaussians sharing the AR(1) covariance `Σ_ρ[i][j] = ρ^{|i-j|}`.
    #[serde(rename = "GM_AR1")]
    GaussianAr1,
}

impl SweepFamily {
    pub const ALL: [SweepFamily; 7] = [
        SweepFamily::Gaussian,
        SweepFamily::Laplacian,
        SweepFamily::Uniform,
        SweepFamily::GaussianLaplacian,
        SweepFamily::GaussianUniform,
        SweepFamily::LaplacianUniform,
        SweepFamily::GaussianAr1,
    ];

    pub fn code(self) -> &'static str {
        match self {
            SweepFamily::Gaussian => "GM",
            SweepFamily::Laplacian => "LM",
            SweepFamily::Uniform => "UM",
            SweepFamily::GaussianLaplacian => "GLM",
            SweepFamily::GaussianUniform => "GUM",
            SweepFamily::LaplacianUniform => "LUM",
            SweepFamily::GaussianAr1 => "GM_AR1",
        }
    }

    /// Families of the first and second half of the labels.
    pub fn halves(self) -> (Family, Family) {
        match self {
            SweepFamily::Gaussian | SweepFamily::GaussianAr1 => {
                (Family::Gaussian, Family::Gaussian)
            }
            SweepFamily::Laplacian => (Family::Laplacian, Family::Laplacian),
            SweepFamily::Uniform => (Family::Uniform, Family::Uniform),
            SweepFamily::GaussianLaplacian => (Family::Gaussian, Family::Laplacian),
            SweepFamily::GaussianUniform => (Family::Gaussian, Family::Uniform),
            SweepFamily::LaplacianUniform => (Family::Laplacian, Family::Uniform),
        }
    }

    pub fn is_hybrid(self) -> bool {
        let (a, b) = self.halves();
        a != b
    }
}

/// How the sweep's unit directions are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectionSampler {
    /// Normalized standard normal vectors.
    Iid,
    /// `Iid` followed by a fixed number of Coulomb-repulsion steps on the
    /// sphere, which keeps distinct labels from sharing a direction. In one
    /// dimension the signs alternate from the first draw.
    #[default]
    Spread,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub family: SweepFamily,
    pub dimension: usize,
    pub components: usize,
    pub separation_grid: Vec<f64>,
    pub rho: f64,
    pub mc_samples: usize,
    pub seed: u64,
    pub directions: DirectionSampler,
}

/// On-disk sweep configuration; omitted fields take the documented defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub family: SweepFamily,
    #[serde(alias = "n")]
    pub dimension: usize,
    #[serde(alias = "K")]
    pub components: usize,
    #[serde(default)]
    pub separation_grid: Option<Vec<f64>>,
    /// Upper end of the default uniform grid.
    #[serde(default)]
    pub s_max: Option<f64>,
    #[serde(default)]
    pub grid_points: Option<usize>,
    #[serde(default)]
    pub rho: f64,
    #[serde(default = "default_mc_samples")]
    pub mc_samples: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub directions: DirectionSampler,
}

fn default_mc_samples() -> usize {
    DEFAULT_MC_SAMPLES
}

/// Default `S_max`: 12 up to eight dimensions, 6 beyond.
pub fn default_s_max(dimension: usize) -> f64 {
    if dimension <= 8 {
        12.0
    } else {
        6.0
    }
}

/// `points` uniformly spaced values from 0 to `s_max` inclusive.
pub fn uniform_grid(s_max: f64, points: usize) -> Vec<f64> {
    match points {
        0 => vec![],
        1 => vec![0.0],
        _ => (0..points)
            .map(|i| s_max * i as f64 / (points - 1) as f64)
            .collect(),
    }
}

impl SweepConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| MixentError::InvalidSpec(e.to_string()))
    }

    pub fn into_spec(self) -> Result<SweepSpec> {
        let grid = match self.separation_grid {
            Some(g) => {
                if self.s_max.is_some() || self.grid_points.is_some() {
                    return Err(MixentError::InvalidSpec(
                        "give either separation_grid or s_max/grid_points".into(),
                    ));
                }
                g
            }
            None => uniform_grid(
                self.s_max.unwrap_or_else(|| default_s_max(self.dimension)),
                self.grid_points.unwrap_or(DEFAULT_GRID_POINTS),
            ),
        };
        let spec = SweepSpec {
            family: self.family,
            dimension: self.dimension,
            components: self.components,
            separation_grid: grid,
            rho: self.rho,
            mc_samples: self.mc_samples,
            seed: self.seed,
            directions: self.directions,
        };
        spec.validate()?;
        Ok(spec)
    }
}

pub fn load_sweep_spec(path: impl AsRef<Path>) -> Result<SweepSpec> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)
        .map_err(|e| MixentError::InvalidSpec(format!("{}: {e}", path.display())))?;
    SweepConfig::from_json(&text)?.into_spec()
}

impl SweepSpec {
    /// Spec with the default grid, sample count, seed and direction sampler.
    pub fn new(family: SweepFamily, dimension: usize, components: usize) -> Self {
        SweepSpec {
            family,
            dimension,
            components,
            separation_grid: uniform_grid(default_s_max(dimension), DEFAULT_GRID_POINTS),
            rho: 0.0,
            mc_samples: DEFAULT_MC_SAMPLES,
            seed: 0,
            directions: DirectionSampler::default(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(MixentError::InvalidSpec(m));
        if self.dimension == 0 || self.components == 0 {
            return bad("dimension and components must be positive".into());
        }
        if self.family.is_hybrid() && !self.components.is_multiple_of(2) {
            return bad(format!(
                "{} needs an even number of components, got {}",
                self.family.code(),
                self.components
            ));
        }
        if self.separation_grid.is_empty() {
            return bad("separation grid is empty".into());
        }
        if self
            .separation_grid
            .iter()
            .any(|s| !(s.is_finite() && *s >= 0.0))
        {
            return bad("separation values must be finite and non-negative".into());
        }
        if self.separation_grid.windows(2).any(|w| w[1] <= w[0]) {
            return bad("separation grid must be strictly increasing".into());
        }
        if !(self.rho > -1.0 && self.rho < 1.0) {
            return bad(format!("rho {} outside (-1, 1)", self.rho));
        }
        if self.rho != 0.0 && self.family != SweepFamily::GaussianAr1 {
            return bad("rho only applies to GM_AR1".into());
        }
        if self.mc_samples < 2 {
            return bad("mc_samples must be at least 2".into());
        }
        Ok(())
    }

    /// The sweep's `K` unit directions, identical for every grid point.
    pub fn directions(&self) -> Vec<Vec<f64>> {
        let mut rng = stream_rng(derive_seed(self.seed, DIRECTION_SEED_INDEX), 0);
        let mut dirs: Vec<Vec<f64>> = (0..self.components)
            .map(|_| loop {
                let v: Vec<f64> = (0..self.dimension)
                    .map(|_| StandardNormal.sample(&mut rng))
                    .collect();
                let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
                if norm > 0.0 {
                    break v.into_iter().map(|x| x / norm).collect();
                }
            })
            .collect();
        if self.directions == DirectionSampler::Spread {
            if self.dimension == 1 {
                // Alternate signs so both sides are used equally.
                let first = dirs[0][0];
                for (c, u) in dirs.iter_mut().enumerate() {
                    u[0] = if c % 2 == 0 { first } else { -first };
                }
            } else {
                spread_on_sphere(&mut dirs, SPREAD_ITERATIONS);
            }
        }
        dirs
    }

    /// AR(1) covariance for `GM_AR1`, identity otherwise.
    pub fn gaussian_covariance(&self) -> DMatrix<f64> {
        let n = self.dimension;
        match self.family {
            SweepFamily::GaussianAr1 => {
                DMatrix::from_fn(n, n, |i, j| self.rho.powi((i as i32 - j as i32).abs()))
            }
            _ => DMatrix::identity(n, n),
        }
    }

    fn build_with(&self, directions: &[Vec<f64>], s: f64) -> Result<MixtureModel> {
        if !(s.is_finite() && s >= 0.0) {
            return Err(MixentError::InvalidArgument(format!(
                "separation {s} must be non-negative"
            )));
        }
        let n = self.dimension;
        let (first, second) = self.family.halves();
        let cov = self.gaussian_covariance();
        let half = self.components.div_ceil(2);
        let components = directions
            .iter()
            .enumerate()
            .map(|(c, u)| {
                let mean: Vec<f64> = u.iter().map(|x| s * x).collect();
                let family = if c < half || !self.family.is_hybrid() {
                    first
                } else {
                    second
                };
                Ok(match family {
                    Family::Gaussian => ComponentDensity::from(Gaussian::new(mean, cov.clone())?),
                    Family::Laplacian => Laplacian::new(mean, vec![FRAC_1_SQRT_2; n])?.into(),
                    Family::Uniform => UniformBox::new(mean, vec![3f64.sqrt(); n])?.into(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        MixtureModel::equal_weights(components)
    }
}

/// Moves unit vectors apart by projected gradient steps on the energy
/// `Σ_{i<j} 1/|u_i - u_j|`. Each step moves a point by at most a tenth of
/// the current minimum separation.
fn spread_on_sphere(dirs: &mut [Vec<f64>], iterations: usize) {
    let k = dirs.len();
    if k < 2 {
        return;
    }
    let n = dirs[0].len();
    let mut forces = vec![vec![0.0; n]; k];
    for _ in 0..iterations {
        let mut min_dist = f64::INFINITY;
        for f in forces.iter_mut() {
            f.iter_mut().for_each(|x| *x = 0.0);
        }
        for i in 0..k {
            for j in (i + 1)..k {
                let d: Vec<f64> = dirs[i].iter().zip(&dirs[j]).map(|(a, b)| a - b).collect();
                let r = d.iter().map(|x| x * x).sum::<f64>().sqrt();
                if r == 0.0 {
                    continue;
                }
                min_dist = min_dist.min(r);
                let w = 1.0 / (r * r * r);
                for t in 0..n {
                    forces[i][t] += w * d[t];
                    forces[j][t] -= w * d[t];
                }
            }
        }
        let mut max_force = 0.0f64;
        for (f, u) in forces.iter_mut().zip(dirs.iter()) {
            let radial: f64 = f.iter().zip(u).map(|(a, b)| a * b).sum();
            for t in 0..n {
                f[t] -= radial * u[t];
            }
            max_force = max_force.max(f.iter().map(|x| x * x).sum::<f64>().sqrt());
        }
        if !min_dist.is_finite() || max_force < 1e-14 {
            break;
        }
        let step = (0.1 * min_dist.powi(3) / k as f64).min(0.1 * min_dist / max_force);
        for (u, f) in dirs.iter_mut().zip(&forces) {
            for t in 0..n {
                u[t] += step * f[t];
            }
            let norm = u.iter().map(|x| x * x).sum::<f64>().sqrt();
            u.iter_mut().for_each(|x| *x /= norm);
        }
    }
}

/// Mixture for separation `s` under `spec`.
pub fn build_mixture(spec: &SweepSpec, s: f64) -> Result<MixtureModel> {
    spec.validate()?;
    spec.build_with(&spec.directions(), s)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRow {
    pub s: f64,
    pub h_mc_bits: f64,
    pub se_bits: f64,
    pub lower_bits: f64,
    pub upper_bits: f64,
    pub jensen_bits: f64,
    pub approx_bits: f64,
    pub clipped_bits: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub rows: Vec<SweepRow>,
}

/// One row per grid value, in grid order. Grid point `i` uses Monte Carlo
/// seed `derive_seed(spec.seed, i)`.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepResult> {
    spec.validate()?;
    let directions = spec.directions();
    let rows = spec
        .separation_grid
        .par_iter()
        .enumerate()
        .map(|(i, &s)| {
            let model = spec.build_with(&directions, s)?;
            let report = approximate(&model)?;
            let mc = estimate(&model, spec.mc_samples, derive_seed(spec.seed, i as u64))?;
            Ok(SweepRow {
                s,
                h_mc_bits: mc.entropy_bits,
                se_bits: mc.std_error_bits,
                lower_bits: report.lower_bits,
                upper_bits: report.upper_bits,
                jensen_bits: report.jensen_bits,
                approx_bits: report.approx_bits,
                clipped_bits: report.clipped_bits,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepResult {
        spec: spec.clone(),
        rows,
    })
}

/// `%.{digits}g`-style formatting.
pub fn format_significant(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -4 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        format!(
            "{mantissa}e{}{:02}",
            if exp < 0 { '-' } else { '+' },
            exp.abs()
        )
    } else {
        let decimals = (digits as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

impl SweepResult {
    pub fn write_csv<W: Write>(&self, writer: W) -> std::io::Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(CSV_HEADER)?;
        let f = |x: f64| format_significant(x, 12);
        for r in &self.rows {
            w.write_record([
                self.spec.family.code().to_string(),
                self.spec.dimension.to_string(),
                self.spec.components.to_string(),
                f(self.spec.rho),
                f(r.s),
                f(r.h_mc_bits),
                f(r.se_bits),
                f(r.lower_bits),
                f(r.upper_bits),
                f(r.jensen_bits),
                f(r.approx_bits),
                f(r.clipped_bits),
            ])?;
        }
        w.flush()
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}
