//! Extended-real helpers for power and strength exponents.
//!
//! Exponents are plain `f64` values where `f64::NEG_INFINITY` marks a
//! silenced stream. IEEE arithmetic already gives the conventions needed
//! here: `-inf + x = -inf`, `max(-inf, x) = x`, and `(-inf)^+ = 0`.
//! Intermediate quantities may reach `+inf` (for instance `-r` with
//! `r = -inf`); they are always capped by a finite `min` before use.

/// `(x)^+ = max{0, x}`.
#[inline(always)]
pub fn pos(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        0.0
    }
}

#[inline(always)]
pub fn max2(a: f64, b: f64) -> f64 {
    if a >= b {
        a
    } else {
        b
    }
}

#[inline(always)]
pub fn min2(a: f64, b: f64) -> f64 {
    if a <= b {
        a
    } else {
        b
    }
}

/// Maximum over an iterator; the empty maximum is `-inf`.
#[inline]
pub fn max_of<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values.into_iter().fold(f64::NEG_INFINITY, max2)
}

/// Minimum over an iterator; the empty minimum is `+inf`.
#[inline]
pub fn min_of<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    values.into_iter().fold(f64::INFINITY, min2)
}

/// True for a legal power exponent: finite and `<= 0`, or `-inf`.
#[inline]
pub fn is_power_exponent(x: f64) -> bool {
    x == f64::NEG_INFINITY || (x.is_finite() && x <= 0.0)
}

/// `log2(sum_i 2^{e_i})` computed without overflow. `-inf` terms contribute nothing.
pub fn log2_sum_exp2(exponents: &[f64]) -> f64 {
    let top = max_of(exponents.iter().copied());
    if top == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    let acc: f64 = exponents.iter().map(|&e| (e - top).exp2()).sum();
    top + acc.log2()
}
