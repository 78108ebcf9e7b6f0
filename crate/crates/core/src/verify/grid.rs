use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{DecodingOrder, GdofTuple, NetworkProfile, PowerAllocation};
use crate::tin::{
    ibc_bounds_given, ibc_interference_into, imac_bounds_given, imac_interference_into,
};

/// Sweeps larger than this are refused by [`sweep_tin_region`] callers that
/// use the default.
pub const DEFAULT_SWEEP_BUDGET: u128 = 100_000_000;

/// Budget for [`sample_tin_region`], which keeps every sample in memory.
pub const DEFAULT_COLLECT_BUDGET: u128 = 5_000_000;

/// Per-axis grid of power exponents: `steps` evenly spaced values from
/// `min_exponent` to 0, optionally followed by `-inf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridSpec {
    pub min_exponent: f64,
    pub steps: usize,
    pub include_neg_infinity: bool,
}

impl GridSpec {
    pub fn new(min_exponent: f64, steps: usize, include_neg_infinity: bool) -> Result<Self> {
        if !(min_exponent.is_finite() && min_exponent < 0.0) {
            return Err(Error::InvalidGrid(format!(
                "grid floor must be finite and negative, got {min_exponent}"
            )));
        }
        if steps < 2 {
            return Err(Error::InvalidGrid(format!(
                "need at least 2 steps, got {steps}"
            )));
        }
        Ok(Self {
            min_exponent,
            steps,
            include_neg_infinity,
        })
    }

    /// Floor `-1.5 max(alpha)` with 13 steps plus `-inf`. Exponents below
    /// `-max(alpha)` already push every link below the noise floor.
    pub fn default_for(profile: &NetworkProfile) -> Self {
        Self::with_steps(profile, 13)
    }

    pub fn with_steps(profile: &NetworkProfile, steps: usize) -> Self {
        let top = profile.max_alpha();
        let floor = if top > 0.0 { -1.5 * top } else { -1.0 };
        Self::new(floor, steps.max(2), true).expect("floor is negative")
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.steps - 1;
        let mut values: Vec<f64> = (0..self.steps)
            .map(|i| self.min_exponent * (n - i) as f64 / n as f64)
            .collect();
        if self.include_neg_infinity {
            values.push(f64::NEG_INFINITY);
        }
        values
    }

    pub fn spacing(&self) -> f64 {
        -self.min_exponent / (self.steps - 1) as f64
    }

    pub fn points_per_axis(&self) -> usize {
        self.steps + usize::from(self.include_neg_infinity)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Ibc,
    Imac,
}

/// One `(order, power)` grid point with its per-UE GDoF bounds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sample {
    pub order: DecodingOrder,
    pub power: PowerAllocation,
    pub bounds: GdofTuple,
}

/// `2^K * points^(2K)`, saturating.
pub fn sweep_size(cells: usize, grid: &GridSpec) -> u128 {
    let per_axis = grid.points_per_axis() as u128;
    let mut total: u128 = 1u128.checked_shl(cells as u32).unwrap_or(u128::MAX);
    for _ in 0..2 * cells {
        total = total.saturating_mul(per_axis);
    }
    total
}

/// Visits every decoding order and every grid power allocation, passing
/// `(order, power, bounds)` to `visit`. Buffers are reused between calls.
/// Returns the number of samples visited.
pub fn sweep_tin_region<F>(
    profile: &NetworkProfile,
    side: Side,
    grid: &GridSpec,
    budget: u128,
    mut visit: F,
) -> Result<u64>
where
    F: FnMut(&DecodingOrder, &[f64], &[f64]),
{
    let required = sweep_size(profile.cells(), grid);
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    let values = grid.values();
    let dim = profile.dim();
    let orders: Vec<DecodingOrder> = DecodingOrder::all(profile.cells()).collect();
    let mut digits = vec![0usize; dim];
    let mut power = vec![values[0]; dim];
    let mut interference = vec![0.0; dim];
    let mut bounds = vec![0.0; dim];
    let mut visited = 0u64;
    loop {
        match side {
            Side::Ibc => ibc_interference_into(profile, &power, &mut interference),
            Side::Imac => imac_interference_into(profile, &power, &mut interference),
        }
        for order in &orders {
            match side {
                Side::Ibc => ibc_bounds_given(
                    profile,
                    order.as_slice(),
                    &power,
                    &interference,
                    &mut bounds,
                ),
                Side::Imac => imac_bounds_given(
                    profile,
                    order.as_slice(),
                    &power,
                    &interference,
                    &mut bounds,
                ),
            }
            visit(order, &power, &bounds);
            visited += 1;
        }
        // odometer, last coordinate fastest
        let mut pos = dim;
        loop {
            if pos == 0 {
                return Ok(visited);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < values.len() {
                power[pos] = values[digits[pos]];
                break;
            }
            digits[pos] = 0;
            power[pos] = values[0];
        }
    }
}

/// Collects every sample of the grid sweep. The sampled TIN region is the
/// union of the boxes `[0, bounds]`.
pub fn sample_tin_region(
    profile: &NetworkProfile,
    side: Side,
    grid: &GridSpec,
) -> Result<Vec<Sample>> {
    let mut out = Vec::new();
    sweep_tin_region(
        profile,
        side,
        grid,
        DEFAULT_COLLECT_BUDGET,
        |order, power, bounds| {
            out.push(Sample {
                order: order.clone(),
                power: PowerAllocation::from_vec_unchecked(power.to_vec()),
                bounds: GdofTuple::from_vec_unchecked(bounds.to_vec()),
            });
        },
    )?;
    Ok(out)
}
