//! Differential entropy of finite mixtures of Gaussian, Laplace and uniform
//! box densities.
//!
//! The closed-form path computes the conditional entropy `h(X|C)`, the label
//! entropy `H(C)`, and a pairwise-overlap lower bound. It then shifts that
//! bound by the weighted Shannon-minus-collision offset and clips the result
//! into `[h(X|C), h(X|C) + H(C)]`. A seeded Monte Carlo estimator and a 1-D
//! adaptive quadrature oracle provide independent checks.
//!
//! ```
//! use mixent::{approximate, Gaussian, MixtureModel};
//!
//! let m = MixtureModel::equal_weights(vec![
//!     Gaussian::isotropic(vec![-3.0], 1.0)?.into(),
//!     Gaussian::isotropic(vec![3.0], 1.0)?.into(),
//! ])?;
//! let r = approximate(&m)?;
//! assert!(r.lower_bits <= r.clipped_bits && r.clipped_bits <= r.upper_bits);
//! # Ok::<(), mixent::MixentError>(())
//! ```

// `!(x > 0.0)` is used on purpose so NaN lands in the error branch.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod component_entropy;
pub mod error;
pub mod estimator;
pub mod harness;
pub mod mixture_file;
pub mod model;
pub mod monte_carlo;
pub mod numeric;
pub mod overlap;
pub mod quad;
pub mod sampling;
pub mod special;
pub mod verify;

pub use component_entropy::{collision_entropy, offset, shannon_entropy};
pub use error::{MixentError, Result};
pub use estimator::{approximate, approximate_with, EntropyReport};
pub use harness::{run_sweep, SweepFamily, SweepSpec};
pub use mixture_file::{load_mixture, MixtureFile};
pub use model::{ComponentDensity, Family, Gaussian, Laplacian, MixtureModel, UniformBox};
pub use monte_carlo::{estimate, McEstimate};
pub use overlap::{log2_overlap, overlap_matrix, OverlapMatrix};
pub use sampling::{sample, sample_labeled};
pub use verify::verify_overlaps;
