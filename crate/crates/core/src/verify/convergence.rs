use serde::Serialize;

use crate::document::profile_hash;
use crate::error::{Error, Result};
use crate::model::{DecodingOrder, FinitePConfig, GdofTuple, NetworkProfile, PowerAllocation};
use crate::tin::{ibc_finite_p_rates, ibc_gdof_bounds};

pub const DEFAULT_CONVERGENCE_THRESHOLD: f64 = 0.05;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub nominal_power: f64,
    pub rates: Vec<f64>,
    /// `rate / log2(P)`.
    pub normalized: Vec<f64>,
    /// `|normalized - bound|` per UE.
    pub gaps: Vec<f64>,
    pub max_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub profile_hash: String,
    pub order: DecodingOrder,
    pub power: PowerAllocation,
    pub bounds: GdofTuple,
    pub rows: Vec<ConvergenceRow>,
    pub threshold: f64,
    pub passed: bool,
}

/// Finite-`P` downlink rates of a scheme, normalized by `log2 P` and compared
/// with its GDoF bounds. Shares are `P^r`, scaled down per cell if they add
/// up to more than 1.
pub fn finite_p_convergence(
    profile: &NetworkProfile,
    order: &DecodingOrder,
    power: &PowerAllocation,
    p_list: &[f64],
    threshold: f64,
) -> Result<ConvergenceReport> {
    if p_list.is_empty() {
        return Err(Error::InvalidPowerConfig(
            "need at least one nominal power".into(),
        ));
    }
    if let Some(p) = p_list.iter().find(|p| !(p.is_finite() && **p > 1.0)) {
        return Err(Error::InvalidPowerConfig(format!(
            "nominal power must be finite and above 1, got {p}"
        )));
    }
    if p_list.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidPowerConfig(
            "nominal powers must be strictly increasing".into(),
        ));
    }
    let bounds = ibc_gdof_bounds(profile, order, power)?;
    let mut rows = Vec::with_capacity(p_list.len());
    for &p in p_list {
        let fp = FinitePConfig::from_exponents(p, power)?;
        let rates = ibc_finite_p_rates(profile, order, &fp)?;
        let lp = p.log2();
        let normalized: Vec<f64> = rates.iter().map(|r| r / lp).collect();
        let gaps: Vec<f64> = normalized
            .iter()
            .zip(bounds.as_slice())
            .map(|(n, d)| (n - d).abs())
            .collect();
        let max_gap = gaps.iter().copied().fold(0.0, f64::max);
        rows.push(ConvergenceRow {
            nominal_power: p,
            rates,
            normalized,
            gaps,
            max_gap,
        });
    }
    let passed = rows.last().is_some_and(|r| r.max_gap < threshold);
    Ok(ConvergenceReport {
        profile_hash: profile_hash(profile),
        order: order.clone(),
        power: power.clone(),
        bounds,
        rows,
        threshold,
        passed,
    })
}
