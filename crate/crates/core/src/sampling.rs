//! Seeded sampling.
//!
//! Randomness comes from ChaCha12 streams. A stream is addressed by a
//! `(seed, stream)` pair: the 64-bit seed is expanded to a 256-bit key with
//! `SeedableRng::seed_from_u64`, and `stream` selects ChaCha's 64-bit
//! stream id. Draws are grouped into chunks of [`CHUNK_SIZE`] rows; chunk
//! `i` of a call with seed `s` reads stream `(s, i)` from its start. This
//! makes every chunk independent of how chunks are scheduled.

use nalgebra::DMatrix;
use rand::distr::{Distribution, Open01};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::model::{with_scratch, ComponentDensity, MixtureModel};

/// Rows per independently seeded chunk.
pub const CHUNK_SIZE: usize = 65_536;

/// Generator for stream `stream` of `seed`.
pub fn stream_rng(seed: u64, stream: u64) -> ChaCha12Rng {
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Child seed for the `index`-th sub-task of `seed` (SplitMix64 finalizer
/// applied to a golden-ratio offset of the pair).
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Draws one observation into `out` and returns its label.
pub(crate) fn draw_into<R: Rng + ?Sized>(
    model: &MixtureModel,
    rng: &mut R,
    out: &mut [f64],
) -> usize {
    let label = draw_label(model.weights(), rng);
    draw_component(&model.components()[label], rng, out);
    label
}

fn draw_label<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    if weights.len() == 1 {
        return 0;
    }
    let u: f64 = rng.random();
    let mut cumulative = 0.0;
    for (c, w) in weights.iter().enumerate() {
        cumulative += w;
        if u < cumulative {
            return c;
        }
    }
    weights.len() - 1
}

fn draw_component<R: Rng + ?Sized>(f: &ComponentDensity, rng: &mut R, out: &mut [f64]) {
    match f {
        ComponentDensity::Gaussian(g) => {
            with_scratch(g.dimension(), |z| {
                for zi in z.iter_mut() {
                    *zi = StandardNormal.sample(rng);
                }
                g.transform_standard(z, out);
            });
        }
        ComponentDensity::Laplacian(lap) => {
            for (i, o) in out.iter_mut().enumerate() {
                let u: f64 = Open01.sample(rng);
                let (mu, b) = (lap.location()[i], lap.scale()[i]);
                *o = if u < 0.5 {
                    mu + b * (2.0 * u).ln()
                } else {
                    mu - b * (2.0 * (1.0 - u)).ln()
                };
            }
        }
        ComponentDensity::UniformBox(bx) => {
            for (i, o) in out.iter_mut().enumerate() {
                let u: f64 = rng.random();
                let (lo, hi) = (bx.lower(i), bx.upper(i));
                *o = (lo + u * (hi - lo)).clamp(lo, hi);
            }
        }
    }
}

/// Number of chunks covering `count` rows.
pub(crate) fn chunk_count(count: usize) -> usize {
    count.div_ceil(CHUNK_SIZE)
}

pub(crate) fn chunk_len(count: usize, chunk: usize) -> usize {
    CHUNK_SIZE.min(count - chunk * CHUNK_SIZE)
}

/// `count` labelled draws as `(labels, count × n matrix)`.
pub fn sample_labeled(model: &MixtureModel, count: usize, seed: u64) -> (Vec<usize>, DMatrix<f64>) {
    let n = model.dimension();
    let chunks: Vec<(Vec<usize>, Vec<f64>)> = (0..chunk_count(count))
        .into_par_iter()
        .map(|chunk| {
            let len = chunk_len(count, chunk);
            let mut rng = stream_rng(seed, chunk as u64);
            let mut labels = Vec::with_capacity(len);
            let mut rows = vec![0.0; len * n];
            for row in rows.chunks_exact_mut(n) {
                labels.push(draw_into(model, &mut rng, row));
            }
            (labels, rows)
        })
        .collect();
    let mut labels = Vec::with_capacity(count);
    let mut flat = Vec::with_capacity(count * n);
    for (l, r) in chunks {
        labels.extend(l);
        flat.extend(r);
    }
    (labels, DMatrix::from_row_slice(count, n, &flat))
}

/// `count` i.i.d. draws from `model` as a `count × n` matrix, deterministic in `seed`.
pub fn sample(model: &MixtureModel, count: usize, seed: u64) -> DMatrix<f64> {
    sample_labeled(model, count, seed).1
}
