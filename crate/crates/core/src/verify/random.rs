//! Random draws of schemes and profiles for Monte-Carlo checks.

use rand::Rng;

use crate::model::{CellOrder, DecodingOrder, NetworkProfile, PowerAllocation};

/// Uniform over the `2^K` decoding orders.
pub fn random_order<R: Rng + ?Sized>(cells: usize, rng: &mut R) -> DecodingOrder {
    DecodingOrder::new(
        (0..cells)
            .map(|_| {
                if rng.gen::<bool>() {
                    CellOrder::Swapped
                } else {
                    CellOrder::Natural
                }
            })
            .collect(),
    )
}

/// Power exponents: about 15% silenced, 10% at full power, the rest uniform
/// in `[-depth, 0]`.
pub fn random_power<R: Rng + ?Sized>(cells: usize, depth: f64, rng: &mut R) -> PowerAllocation {
    let values = (0..2 * cells)
        .map(|_| {
            let u: f64 = rng.gen();
            if u < 0.15 {
                f64::NEG_INFINITY
            } else if u < 0.25 {
                0.0
            } else {
                -depth * rng.gen::<f64>()
            }
        })
        .collect();
    PowerAllocation::from_vec_unchecked(values)
}

fn dyadic<R: Rng + ?Sized>(max: f64, rng: &mut R) -> f64 {
    let top = (max * 256.0).floor() as i64;
    rng.gen_range(0..=top) as f64 / 256.0
}

/// Profile whose strengths are multiples of 1/256 in `[0, max]`. Sums and
/// differences of such values are exact in `f64`.
pub fn dyadic_profile<R: Rng + ?Sized>(cells: usize, max: f64, rng: &mut R) -> NetworkProfile {
    NetworkProfile::from_fn(cells, |_, _, _| dyadic(max, rng))
        .expect("values are finite and nonnegative")
}

/// Like [`random_power`], with the finite exponents on the 1/256 lattice.
pub fn dyadic_power<R: Rng + ?Sized>(cells: usize, depth: f64, rng: &mut R) -> PowerAllocation {
    let values = (0..2 * cells)
        .map(|_| {
            let u: f64 = rng.gen();
            if u < 0.15 {
                f64::NEG_INFINITY
            } else {
                -dyadic(depth, rng)
            }
        })
        .collect();
    PowerAllocation::from_vec_unchecked(values)
}
