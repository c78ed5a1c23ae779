//! Closed-form Shannon entropy, collision (Rényi-2) entropy and their gap
//! for each component family. Everything is in bits.

use std::f64::consts::{E, LOG2_E, PI};

use serde::Serialize;

use crate::model::{ComponentDensity, Family};

/// `log2(e/2)`, the per-coordinate Shannon–collision gap of a Laplace density.
pub const LOG2_E_OVER_2: f64 = 0.442_695_040_888_963_4;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComponentEntropyProfile {
    pub shannon_bits: f64,
    pub collision_bits: f64,
    pub offset_bits: f64,
}

/// `h(f)`: `½ log2((2πe)^n |Σ|)`, `Σ_i log2(2e b_i)` or `log2 |A|`.
pub fn shannon_entropy(f: &ComponentDensity) -> f64 {
    match f {
        ComponentDensity::Gaussian(g) => {
            let n = g.dimension() as f64;
            0.5 * (n * (2.0 * PI * E).log2() + g.ln_det() * LOG2_E)
        }
        ComponentDensity::Laplacian(l) => l.scale().iter().map(|b| (2.0 * E * b).log2()).sum(),
        ComponentDensity::UniformBox(u) => u.log2_volume(),
    }
}

/// `h₂(f) = -log2 ∫ f²`: `½ log2((4π)^n |Σ|)`, `Σ_i log2(4 b_i)` or `log2 |A|`.
pub fn collision_entropy(f: &ComponentDensity) -> f64 {
    match f {
        ComponentDensity::Gaussian(g) => {
            let n = g.dimension() as f64;
            0.5 * (n * (4.0 * PI).log2() + g.ln_det() * LOG2_E)
        }
        ComponentDensity::Laplacian(l) => l.scale().iter().map(|b| (4.0 * b).log2()).sum(),
        ComponentDensity::UniformBox(u) => u.log2_volume(),
    }
}

/// The family constant `Δ(f) = h(f) - h₂(f)`, from its closed form.
pub fn offset(f: &ComponentDensity) -> f64 {
    family_offset(f.family(), f.dimension())
}

pub fn family_offset(family: Family, dimension: usize) -> f64 {
    let n = dimension as f64;
    match family {
        Family::Gaussian => 0.5 * n * LOG2_E_OVER_2,
        Family::Laplacian => n * LOG2_E_OVER_2,
        Family::Uniform => 0.0,
    }
}

pub fn profile(f: &ComponentDensity) -> ComponentEntropyProfile {
    ComponentEntropyProfile {
        shannon_bits: shannon_entropy(f),
        collision_bits: collision_entropy(f),
        offset_bits: offset(f),
    }
}
