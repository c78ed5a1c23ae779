//! Brute-force one-dimensional quadrature oracles.
//!
//! The integrator is a globally adaptive 21-point Gauss–Kronrod rule. The
//! overlap and entropy oracles evaluate the densities from their raw
//! parameters and share no code with the closed-form kernels they check.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::{LOG2_E, PI};

use crate::error::{MixentError, Result};
use crate::model::ComponentDensity;
use crate::numeric::NeumaierSum;

/// Evaluation budget per integral.
pub const MAX_EVALUATIONS: usize = 1_000_000;
/// Gaussian effective support, in standard deviations.
pub const GAUSSIAN_SPAN: f64 = 12.0;
/// Laplace effective support, in scale units.
pub const LAPLACE_SPAN: f64 = 40.0;
/// Equal pieces each integration range starts with, before refinement.
const INITIAL_PANELS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
}

/// Stopping rule: error estimate `<= max(abs, rel · |value|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub abs: f64,
    pub rel: f64,
}

impl Tolerance {
    pub fn absolute(tol: f64) -> Self {
        Tolerance { abs: tol, rel: 0.0 }
    }

    /// Relative target with a floor far below any representable overlap of interest.
    pub fn relative(rel: f64) -> Self {
        Tolerance { abs: 1e-305, rel }
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.max(self.rel * value.abs())
    }
}

// QUADPACK qk21 abscissae and weights, at the source's precision.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_208_994_603,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];
// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    lo: f64,
    hi: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gauss_kronrod<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Panel {
    let center = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let fc = f(center);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    for (j, (&x, &w)) in XGK[..10].iter().zip(&WGK[..10]).enumerate() {
        let pair = f(center - half * x) + f(center + half * x);
        kronrod += w * pair;
        if j % 2 == 1 {
            gauss += WG[j / 2] * pair;
        }
    }
    Panel {
        lo,
        hi,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// Adaptive integral of `f` over `[lo, hi]`; `breakpoints` inside the range
/// always become panel edges.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    breakpoints: &[f64],
    tol: Tolerance,
) -> Result<QuadResult> {
    if !(lo < hi) {
        return Ok(QuadResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            evaluations: 1,
        });
    }
    let mut edges: Vec<f64> = (0..=INITIAL_PANELS)
        .map(|i| lo + (hi - lo) * i as f64 / INITIAL_PANELS as f64)
        .chain(breakpoints.iter().copied().filter(|b| *b > lo && *b < hi))
        .collect();
    edges[INITIAL_PANELS] = hi;
    edges.sort_by(f64::total_cmp);
    edges.dedup();

    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    let (mut value, mut error) = (0.0, 0.0);
    for w in edges.windows(2) {
        let p = gauss_kronrod(&f, w[0], w[1]);
        value += p.value;
        error += p.error;
        heap.push(p);
        evaluations += 21;
    }
    loop {
        if error <= tol.target(value) {
            // Running totals drift; confirm with a compensated re-sum.
            let v: NeumaierSum = heap.iter().map(|p| p.value).collect();
            let e: NeumaierSum = heap.iter().map(|p| p.error).collect();
            value = v.total();
            error = e.total();
            if error <= tol.target(value) {
                return Ok(QuadResult {
                    value,
                    abs_error_estimate: error,
                    evaluations,
                });
            }
        }
        let worst = *heap.peek().expect("non-empty");
        let mid = 0.5 * (worst.lo + worst.hi);
        if evaluations + 42 > MAX_EVALUATIONS || !(mid > worst.lo && mid < worst.hi) {
            return Err(MixentError::ToleranceNotReached {
                achieved: error,
                requested: tol.target(value),
                evaluations,
            });
        }
        heap.pop();
        let left = gauss_kronrod(&f, worst.lo, mid);
        let right = gauss_kronrod(&f, mid, worst.hi);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        evaluations += 42;
    }
}

/// A one-dimensional density reduced to raw parameters.
#[derive(Debug, Clone, Copy)]
enum Density1d {
    Normal { mean: f64, sd: f64 },
    Laplace { loc: f64, scale: f64 },
    Box { lo: f64, hi: f64 },
}

impl Density1d {
    fn from_component(f: &ComponentDensity) -> Result<Self> {
        if f.dimension() != 1 {
            return Err(MixentError::DimensionMismatch {
                expected: 1,
                found: f.dimension(),
            });
        }
        Ok(match f {
            ComponentDensity::Gaussian(g) => Density1d::Normal {
                mean: g.mean()[0],
                sd: g.cov()[(0, 0)].sqrt(),
            },
            ComponentDensity::Laplacian(l) => Density1d::Laplace {
                loc: l.location()[0],
                scale: l.scale()[0],
            },
            ComponentDensity::UniformBox(u) => Density1d::Box {
                lo: u.lower(0),
                hi: u.upper(0),
            },
        })
    }

    fn ln_pdf(&self, x: f64) -> f64 {
        match *self {
            Density1d::Normal { mean, sd } => {
                let t = (x - mean) / sd;
                -0.5 * t * t - sd.ln() - 0.5 * (2.0 * PI).ln()
            }
            Density1d::Laplace { loc, scale } => -(x - loc).abs() / scale - (2.0 * scale).ln(),
            Density1d::Box { lo, hi } => {
                if x >= lo && x <= hi {
                    -(hi - lo).ln()
                } else {
                    f64::NEG_INFINITY
                }
            }
        }
    }

    fn support(&self) -> (f64, f64) {
        match *self {
            Density1d::Normal { mean, sd } => {
                (mean - GAUSSIAN_SPAN * sd, mean + GAUSSIAN_SPAN * sd)
            }
            Density1d::Laplace { loc, scale } => {
                (loc - LAPLACE_SPAN * scale, loc + LAPLACE_SPAN * scale)
            }
            Density1d::Box { lo, hi } => (lo, hi),
        }
    }

    fn is_box(&self) -> bool {
        matches!(self, Density1d::Box { .. })
    }

    fn breakpoints(&self) -> Vec<f64> {
        match *self {
            Density1d::Normal { mean, sd } => {
                vec![mean - 3.0 * sd, mean - sd, mean, mean + sd, mean + 3.0 * sd]
            }
            Density1d::Laplace { loc, scale } => vec![
                loc - 3.0 * scale,
                loc - scale,
                loc,
                loc + scale,
                loc + 3.0 * scale,
            ],
            Density1d::Box { lo, hi } => vec![lo, hi],
        }
    }
}

/// Range over which the product `f g` is integrated.
///
/// A box bounds the range exactly. Two unbounded densities use the hull of
/// their effective supports: the product of two far-apart densities peaks
/// between them, outside both individual supports.
fn product_range(f: &Density1d, g: &Density1d) -> (f64, f64) {
    let (flo, fhi) = f.support();
    let (glo, ghi) = g.support();
    match (f.is_box(), g.is_box()) {
        (true, true) => (flo.max(glo), fhi.min(ghi)),
        (true, false) => (flo, fhi),
        (false, true) => (glo, ghi),
        (false, false) => (flo.min(glo), fhi.max(ghi)),
    }
}

fn overlap_with(f: &ComponentDensity, g: &ComponentDensity, tol: Tolerance) -> Result<QuadResult> {
    let a = Density1d::from_component(f)?;
    let b = Density1d::from_component(g)?;
    let (lo, hi) = product_range(&a, &b);
    let mut breaks = a.breakpoints();
    breaks.extend(b.breakpoints());
    integrate(|x| (a.ln_pdf(x) + b.ln_pdf(x)).exp(), lo, hi, &breaks, tol)
}

/// `∫ f g` for one-dimensional densities, to absolute error `tol`.
pub fn overlap_1d(f: &ComponentDensity, g: &ComponentDensity, tol: f64) -> Result<QuadResult> {
    overlap_with(f, g, Tolerance::absolute(tol))
}

/// `∫ f g` to relative error `rel_tol`, for overlaps spanning many decades.
pub fn overlap_1d_relative(
    f: &ComponentDensity,
    g: &ComponentDensity,
    rel_tol: f64,
) -> Result<QuadResult> {
    overlap_with(f, g, Tolerance::relative(rel_tol))
}

/// `-∫ f log2 f` over the effective support of a one-dimensional density.
pub fn entropy_1d(f: &ComponentDensity, tol: f64) -> Result<QuadResult> {
    let a = Density1d::from_component(f)?;
    let (lo, hi) = a.support();
    integrate(
        |x| {
            let l = a.ln_pdf(x);
            if l == f64::NEG_INFINITY {
                0.0
            } else {
                -l.exp() * l * LOG2_E
            }
        },
        lo,
        hi,
        &a.breakpoints(),
        Tolerance::absolute(tol),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Gaussian, Laplacian, UniformBox};

    #[test]
    fn kronrod_weights_integrate_constants_and_polynomials() {
        let p = gauss_kronrod(&|_| 1.0, -1.0, 1.0);
        assert!((p.value - 2.0).abs() < 1e-15);
        // Kronrod-21 is exact through degree 31, Gauss-10 through degree 19.
        let p = gauss_kronrod(&|x: f64| x.powi(30), -1.0, 1.0);
        assert!((p.value - 2.0 / 31.0).abs() < 1e-15);
        let p = gauss_kronrod(&|x: f64| x.powi(18), -1.0, 1.0);
        assert!(p.error < 1e-15);
    }

    #[test]
    fn integrates_smooth_function() {
        let r = integrate(f64::sin, 0.0, PI, &[], Tolerance::absolute(1e-13)).unwrap();
        assert!((r.value - 2.0).abs() < 1e-13);
    }

    #[test]
    fn laplace_pair_quarter() {
        let l: ComponentDensity = Laplacian::new(vec![0.0], vec![1.0]).unwrap().into();
        let r = overlap_1d(&l, &l, 1e-12).unwrap();
        assert!((r.value - 0.25).abs() <= 1e-12);
        assert!(r.abs_error_estimate <= 1e-12);
    }

    #[test]
    fn disjoint_boxes_are_zero() {
        let a: ComponentDensity = UniformBox::from_bounds(&[0.0], &[1.0]).unwrap().into();
        let b: ComponentDensity = UniformBox::from_bounds(&[2.0], &[3.0]).unwrap().into();
        assert_eq!(overlap_1d(&a, &b, 1e-12).unwrap().value, 0.0);
    }

    #[test]
    fn gaussian_pair_against_closed_value() {
        let a: ComponentDensity = Gaussian::isotropic(vec![0.0], 1.0).unwrap().into();
        let b: ComponentDensity = Gaussian::isotropic(vec![3.0], 4.0).unwrap().into();
        let r = overlap_1d(&a, &b, 1e-13).unwrap();
        assert!((r.value - 0.072_537_073_483_922_93).abs() <= 1e-10);
    }

    #[test]
    fn entropy_references() {
        let g: ComponentDensity = Gaussian::isotropic(vec![0.0], 1.0).unwrap().into();
        let l: ComponentDensity = Laplacian::new(vec![0.0], vec![1.0]).unwrap().into();
        let u: ComponentDensity = UniformBox::new(vec![0.0], vec![1.0]).unwrap().into();
        assert!((entropy_1d(&g, 1e-12).unwrap().value - 2.047_095_585_180_641_1).abs() <= 1e-12);
        assert!((entropy_1d(&l, 1e-12).unwrap().value - 2.442_695_040_888_963_4).abs() <= 1e-12);
        assert!((entropy_1d(&u, 1e-12).unwrap().value - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn halving_tolerance_stays_within_previous_error() {
        let g: ComponentDensity = Gaussian::isotropic(vec![0.4], 2.0).unwrap().into();
        let l: ComponentDensity = Laplacian::new(vec![-1.0], vec![0.3]).unwrap().into();
        let mut tol = 1e-4;
        let mut prev = overlap_1d(&g, &l, tol).unwrap();
        for _ in 0..12 {
            tol /= 2.0;
            let next = overlap_1d(&g, &l, tol).unwrap();
            assert!((next.value - prev.value).abs() <= prev.abs_error_estimate.max(1e-16));
            prev = next;
        }
    }

    #[test]
    fn unreachable_tolerance_reports_budget() {
        let g: ComponentDensity = Gaussian::isotropic(vec![0.0], 1.0).unwrap().into();
        let err = overlap_1d(&g, &g, 1e-40).unwrap_err();
        assert!(matches!(err, MixentError::ToleranceNotReached { .. }));
    }

    #[test]
    fn rejects_multidimensional_input() {
        let g: ComponentDensity = Gaussian::isotropic(vec![0.0, 0.0], 1.0).unwrap().into();
        assert!(matches!(
            entropy_1d(&g, 1e-8),
            Err(MixentError::DimensionMismatch { .. })
        ));
    }
}
