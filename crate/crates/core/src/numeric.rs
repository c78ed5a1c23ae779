//! Small log-domain helpers shared by the density, overlap and estimator code.

use std::f64::consts::LN_2;

/// `ln(1 - e^x)` for `x <= 0`.
pub fn ln_one_minus_exp(x: f64) -> f64 {
    if x > -LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

/// `ln(e^a + e^b)`; `-inf` terms are absorbed.
pub fn ln_add_exp(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + (lo - hi).exp().ln_1p()
}

/// Base-2 `log2 Σ w_i 2^{t_i}` with the weights kept in the linear domain.
///
/// Terms equal to `-inf` are skipped. When every finite exponent is equal
/// the result is that exponent plus `log2 Σ w_i`, so dyadic weights that sum
/// to one return the exponent bit-exactly.
pub fn log2_weighted_sum_exp2(weights: &[f64], exponents: &[f64]) -> f64 {
    debug_assert_eq!(weights.len(), exponents.len());
    let max = exponents
        .iter()
        .copied()
        .filter(|t| *t != f64::NEG_INFINITY)
        .fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let mut acc = NeumaierSum::default();
    for (&w, &t) in weights.iter().zip(exponents) {
        if t != f64::NEG_INFINITY {
            acc.add(w * (t - max).exp2());
        }
    }
    max + acc.total().log2()
}

/// Plain base-2 log-sum-exp, skipping `-inf` terms.
pub fn log2_sum_exp2(exponents: &[f64]) -> f64 {
    let max = exponents
        .iter()
        .copied()
        .filter(|t| *t != f64::NEG_INFINITY)
        .fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let mut acc = NeumaierSum::default();
    for &t in exponents {
        if t != f64::NEG_INFINITY {
            acc.add((t - max).exp2());
        }
    }
    max + acc.total().log2()
}

/// `Σ w_i x_i` for weights summing to one, evaluated as `x_0 + Σ w_i (x_i - x_0)`
/// so that equal values come back unchanged.
pub fn weighted_mean(weights: &[f64], values: &[f64]) -> f64 {
    debug_assert_eq!(weights.len(), values.len());
    let Some(&anchor) = values.first() else {
        return 0.0;
    };
    let mut acc = NeumaierSum::default();
    for (&w, &v) in weights.iter().zip(values) {
        acc.add(w * (v - anchor));
    }
    anchor + acc.total()
}

/// Neumaier's variant of Kahan compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    sum: f64,
    compensation: f64,
}

impl NeumaierSum {
    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn total(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = NeumaierSum::default();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}
