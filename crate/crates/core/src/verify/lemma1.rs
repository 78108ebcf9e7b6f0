use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// Scalar channel gains of the two-receiver comparison: receiver `a` sees
/// `a1 X1 + a2 X2 + Z`, receiver `b` sees `b1 X1 + b2 X2 + Z`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Lemma1Coefficients {
    a1: Complex64,
    a2: Complex64,
    b1: Complex64,
    b2: Complex64,
}

impl Lemma1Coefficients {
    /// Requires `|b1|^2 / |b2|^2 >= |a1|^2` and `|b2|^2 >= |a2|^2 >= 1`.
    pub fn new(a1: Complex64, a2: Complex64, b1: Complex64, b2: Complex64) -> Result<Self> {
        if [a1, a2, b1, b2]
            .iter()
            .any(|c| !(c.re.is_finite() && c.im.is_finite()))
        {
            return Err(Error::InvalidCoefficients(
                "coefficients must be finite".into(),
            ));
        }
        let (na1, na2, nb1, nb2) = (a1.norm_sqr(), a2.norm_sqr(), b1.norm_sqr(), b2.norm_sqr());
        if na2 < 1.0 {
            return Err(Error::InvalidCoefficients(format!(
                "|a2|^2 = {na2} is below 1"
            )));
        }
        if nb2 < na2 {
            return Err(Error::InvalidCoefficients(format!(
                "|b2|^2 = {nb2} is below |a2|^2 = {na2}"
            )));
        }
        if nb1 < na1 * nb2 {
            return Err(Error::InvalidCoefficients(format!(
                "|b1|^2 / |b2|^2 = {} is below |a1|^2 = {na1}",
                nb1 / nb2
            )));
        }
        Ok(Self { a1, a2, b1, b2 })
    }

    pub fn real(a1: f64, a2: f64, b1: f64, b2: f64) -> Result<Self> {
        Self::new(a1.into(), a2.into(), b1.into(), b2.into())
    }
}

/// `I(X1; Ya) - I(X1; Yb)` in bits for independent unit-power Gaussian
/// inputs and unit noise.
pub fn lemma1_gaussian_gap(c: &Lemma1Coefficients) -> f64 {
    let (a1, a2, b1, b2) = (
        c.a1.norm_sqr(),
        c.a2.norm_sqr(),
        c.b1.norm_sqr(),
        c.b2.norm_sqr(),
    );
    ((1.0 + a1 + a2) / (1.0 + a2)).log2() - ((1.0 + b1 + b2) / (1.0 + b2)).log2()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma1Report {
    pub seed: u64,
    pub draws: usize,
    pub max_gap: f64,
    /// Magnitudes `|a1|, |a2|, |b1|, |b2|` of the worst draw.
    pub worst: [f64; 4],
    pub boundary_max_gap: f64,
    pub passed: bool,
}

fn gap_of(c: &Lemma1Coefficients) -> (f64, [f64; 4]) {
    (
        lemma1_gaussian_gap(c),
        [c.a1.norm(), c.a2.norm(), c.b1.norm(), c.b2.norm()],
    )
}

/// Random valid coefficient sets (log-uniform magnitudes, uniform phases),
/// interleaved with the boundary families `|a2| = 1`, `|b2| = |a2|`,
/// `|b1|^2 = |a1|^2 |b2|^2` and `|b| = |a|` (which forces `|a2| = 1`).
pub fn lemma1_random_search(draws: usize, seed: u64) -> Lemma1Report {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let phase = |rng: &mut ChaCha8Rng, m: f64| {
        Complex64::from_polar(m, rng.gen_range(0.0..std::f64::consts::TAU))
    };
    let mut max_gap = f64::NEG_INFINITY;
    let mut worst = [0.0; 4];
    let mut boundary_max_gap = f64::NEG_INFINITY;
    let mut n = 0;
    while n < draws {
        let a1 = 10f64.powf(rng.gen_range(-3.0..3.0));
        let a2 = 10f64.powf(rng.gen_range(0.0..3.0));
        let b2 = a2 * 10f64.powf(rng.gen_range(0.0..2.0));
        let b1 = a1 * b2 * 10f64.powf(rng.gen_range(0.0..2.0));
        let boundary = n % 5;
        let (a2, b2, b1) = match boundary {
            1 => (1.0, b2 / a2, a1 * b2 / a2),
            2 => (a2, a2, a1 * a2),
            3 => (a2, b2, a1 * b2),
            4 => (1.0, 1.0, a1),
            _ => (a2, b2, b1),
        };
        let c = Lemma1Coefficients::new(
            phase(&mut rng, a1),
            phase(&mut rng, a2),
            phase(&mut rng, b1),
            phase(&mut rng, b2),
        );
        // rounding can push a boundary draw a hair outside the valid set
        let Ok(c) = c else { continue };
        let (gap, mags) = gap_of(&c);
        if gap > max_gap {
            max_gap = gap;
            worst = mags;
        }
        if boundary != 0 {
            boundary_max_gap = boundary_max_gap.max(gap);
        }
        n += 1;
    }
    Lemma1Report {
        seed,
        draws,
        max_gap,
        worst,
        boundary_max_gap,
        passed: max_gap <= 1.0 + 1e-12,
    }
}
