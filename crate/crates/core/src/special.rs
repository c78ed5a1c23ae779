//! Standard normal and Laplace distribution functions in the log domain.

use std::f64::consts::{FRAC_1_SQRT_2, LN_2, PI};

use crate::numeric::{ln_add_exp, ln_one_minus_exp};

const DEEP_TAIL: f64 = 8.0;

/// `ln φ(x)` for the standard normal density.
pub fn ln_std_normal_pdf(x: f64) -> f64 {
    -0.5 * x * x - 0.5 * (2.0 * PI).ln()
}

/// Mills ratio `(1 - Φ(t)) / φ(t)` for `t >= DEEP_TAIL`, by the Laplace
/// continued fraction `1/(t+ 1/(t+ 2/(t+ 3/(t+ ...))))` evaluated with Lentz's method.
fn mills_ratio(t: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = t;
    let mut c = t;
    let mut d = 0.0;
    for k in 1..200 {
        let a = k as f64;
        d = t + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = t + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    1.0 / f
}

/// `ln Φ(x)`, accurate from the far lower tail through the upper tail.
pub fn ln_std_normal_cdf(x: f64) -> f64 {
    if x < -DEEP_TAIL {
        ln_std_normal_pdf(x) + mills_ratio(-x).ln()
    } else if x < 0.0 {
        (0.5 * libm::erfc(-x * FRAC_1_SQRT_2)).ln()
    } else {
        (-0.5 * libm::erfc(x * FRAC_1_SQRT_2)).ln_1p()
    }
}

/// `ln(1 - Φ(x)) = ln Φ(-x)`.
pub fn ln_std_normal_sf(x: f64) -> f64 {
    ln_std_normal_cdf(-x)
}

/// `ln(Φ(b) - Φ(a))` for `a <= b`, without `1 - 1` cancellation when both
/// endpoints sit in the same tail.
pub fn ln_std_normal_interval(a: f64, b: f64) -> f64 {
    debug_assert!(a <= b);
    if a == b {
        return f64::NEG_INFINITY;
    }
    if b <= 0.0 {
        let hi = ln_std_normal_cdf(b);
        hi + ln_one_minus_exp(ln_std_normal_cdf(a) - hi)
    } else if a >= 0.0 {
        let hi = ln_std_normal_sf(a);
        hi + ln_one_minus_exp(ln_std_normal_sf(b) - hi)
    } else {
        // Straddles zero: the erf difference has no cancellation.
        (0.5 * (libm::erf(b * FRAC_1_SQRT_2) - libm::erf(a * FRAC_1_SQRT_2))).ln()
    }
}

/// `ln(F(hi) - F(lo))` for the Laplace distribution with the given location and scale.
pub fn ln_laplace_interval(lo: f64, hi: f64, location: f64, scale: f64) -> f64 {
    debug_assert!(lo <= hi);
    if lo == hi {
        return f64::NEG_INFINITY;
    }
    let u = (lo - location) / scale;
    let v = (hi - location) / scale;
    if v <= 0.0 {
        // ½(e^v - e^u)
        -LN_2 + v + ln_one_minus_exp(u - v)
    } else if u >= 0.0 {
        // ½(e^{-u} - e^{-v})
        -LN_2 - u + ln_one_minus_exp(u - v)
    } else {
        // ½(1 - e^u) + ½(1 - e^{-v}), both halves non-negative.
        let left = ln_one_minus_exp(u);
        let right = ln_one_minus_exp(-v);
        -LN_2 + ln_add_exp(left, right)
    }
}
