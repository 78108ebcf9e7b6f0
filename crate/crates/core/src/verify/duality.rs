use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::random::{random_order, random_power};
use super::MAX_REPORTED_SAMPLES;
use crate::document::profile_hash;
use crate::error::{Error, Result};
use crate::model::{DecodingOrder, GdofTuple, NetworkProfile, PowerAllocation};
use crate::tin::{
    beta_exponents, gamma_exponents, ibc_gdof_bounds, ibc_power_from_gamma, imac_gdof_bounds,
    imac_power_from_beta, normalize_imac_power, DualExponents,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Direction {
    IbcToImac,
    ImacToIbc,
}

/// One downlink/uplink transfer with every intermediate value.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualityReport {
    pub direction: Direction,
    pub order: DecodingOrder,
    pub power: PowerAllocation,
    /// Set when the uplink input needed order repair first.
    pub normalized: bool,
    pub mapped_order: DecodingOrder,
    pub mapped_power: PowerAllocation,
    /// Beta (downlink to uplink) or gamma (uplink to downlink).
    pub exponents: DualExponents,
    pub input_bounds: GdofTuple,
    pub mapped_bounds: GdofTuple,
    /// `max_i (input_i - mapped_i)`; at most 0 when the transfer works.
    pub deficit: f64,
}

/// Maps `(order, power)` to the other side and compares the GDoF tuples.
pub fn duality_certificate(
    profile: &NetworkProfile,
    order: &DecodingOrder,
    power: &PowerAllocation,
    direction: Direction,
) -> Result<DualityReport> {
    let (input_bounds, normalized, mapped_order, exponents, mapped_power, mapped_bounds) =
        match direction {
            Direction::IbcToImac => {
                let input = ibc_gdof_bounds(profile, order, power)?;
                let beta = beta_exponents(profile, order, power)?;
                let mapped = imac_power_from_beta(profile, &beta);
                let out = imac_gdof_bounds(profile, order, &mapped)?;
                (input, false, order.clone(), beta, mapped, out)
            }
            Direction::ImacToIbc => {
                let input = imac_gdof_bounds(profile, order, power)?;
                let (fixed_order, fixed_power) = normalize_imac_power(profile, order, power)?;
                let normalized = fixed_order != *order;
                let gamma = gamma_exponents(profile, &fixed_order, &fixed_power)?;
                let mapped = ibc_power_from_gamma(&gamma);
                let out = ibc_gdof_bounds(profile, &fixed_order, &mapped)?;
                (input, normalized, fixed_order, gamma, mapped, out)
            }
        };
    let deficit = input_bounds.max_excess_over(&mapped_bounds);
    Ok(DualityReport {
        direction,
        order: order.clone(),
        power: power.clone(),
        normalized,
        mapped_order,
        mapped_power,
        exponents,
        input_bounds,
        mapped_bounds,
        deficit,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualitySummary {
    pub profile_hash: String,
    pub seed: u64,
    pub samples: usize,
    pub tolerance: f64,
    pub ibc_to_imac_worst: f64,
    pub imac_to_ibc_worst: f64,
    pub normalized: usize,
    pub failures: usize,
    /// The first few reports whose deficit exceeded the tolerance.
    pub failing: Vec<DualityReport>,
    pub passed: bool,
}

/// Runs both directions on `samples` random `(order, power)` draws.
pub fn duality_sweep(
    profile: &NetworkProfile,
    samples: usize,
    seed: u64,
    tolerance: f64,
) -> Result<DualitySummary> {
    if samples == 0 {
        return Err(Error::Precondition("need at least one sample".into()));
    }
    if !(tolerance >= 0.0 && tolerance.is_finite()) {
        return Err(Error::Precondition(format!(
            "tolerance must be finite and nonnegative, got {tolerance}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let depth = 1.5 * profile.max_alpha().max(1.0);
    let mut worst = [f64::NEG_INFINITY; 2];
    let mut normalized = 0;
    let mut failures = 0;
    let mut failing = Vec::new();
    for _ in 0..samples {
        let order = random_order(profile.cells(), &mut rng);
        let power = random_power(profile.cells(), depth, &mut rng);
        for (slot, direction) in [Direction::IbcToImac, Direction::ImacToIbc]
            .into_iter()
            .enumerate()
        {
            let report = duality_certificate(profile, &order, &power, direction)?;
            worst[slot] = worst[slot].max(report.deficit);
            normalized += usize::from(report.normalized);
            if report.deficit > tolerance {
                failures += 1;
                if failing.len() < MAX_REPORTED_SAMPLES {
                    failing.push(report);
                }
            }
        }
    }
    Ok(DualitySummary {
        profile_hash: profile_hash(profile),
        seed,
        samples,
        tolerance,
        ibc_to_imac_worst: worst[0],
        imac_to_ibc_worst: worst[1],
        normalized,
        failures,
        failing,
        passed: failures == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::CellOrder;

    fn e1() -> NetworkProfile {
        NetworkProfile::symmetric(2, [1.0, 2.0], 0.5).unwrap()
    }

    #[test]
    fn e1_full_power_transfers_exactly() {
        let r = duality_certificate(
            &e1(),
            &DecodingOrder::identity(2),
            &PowerAllocation::full(2),
            Direction::IbcToImac,
        )
        .unwrap();
        assert_eq!(r.input_bounds.as_slice(), &[0.0, 1.5, 0.0, 1.5]);
        assert_eq!(r.mapped_bounds.as_slice(), &[0.0, 1.5, 0.0, 1.5]);
        assert_eq!(r.deficit, 0.0);
        assert!(!r.normalized);
    }

    #[test]
    fn uplink_input_is_repaired_and_flagged() {
        let p = e1();
        // cell 1 receives UE 1 louder than UE 2 while decoding UE 1 first
        let power = PowerAllocation::new(vec![0.0, -2.0, 0.0, 0.0]).unwrap();
        let r = duality_certificate(
            &p,
            &DecodingOrder::identity(2),
            &power,
            Direction::ImacToIbc,
        )
        .unwrap();
        assert!(r.normalized);
        assert_eq!(r.mapped_order.cell(0), CellOrder::Swapped);
        assert!(r.deficit <= 1e-9, "{}", r.deficit);
    }

    #[test]
    fn sweep_is_reproducible_and_passes() {
        let a = duality_sweep(&e1(), 300, 7, 1e-9).unwrap();
        let b = duality_sweep(&e1(), 300, 7, 1e-9).unwrap();
        assert_eq!(a, b);
        assert!(a.passed);
        assert!(a.ibc_to_imac_worst <= 1e-9 && a.imac_to_ibc_worst <= 1e-9);
        assert!(a.normalized > 0);
        assert_eq!(a.profile_hash, profile_hash(&e1()));
    }

    #[test]
    fn report_serializes_silenced_powers() {
        let power = PowerAllocation::new(vec![f64::NEG_INFINITY, 0.0, 0.0, -1.0]).unwrap();
        let r = duality_certificate(
            &e1(),
            &DecodingOrder::identity(2),
            &power,
            Direction::IbcToImac,
        )
        .unwrap();
        let text = serde_json::to_string(&r).unwrap();
        assert!(text.contains("\"-inf\""), "{text}");
        assert!(text.contains("\"ibc_to_imac\""));
    }

    #[test]
    fn sweep_rejects_bad_arguments() {
        assert!(duality_sweep(&e1(), 0, 1, 1e-9).is_err());
        assert!(duality_sweep(&e1(), 10, 1, -1.0).is_err());
    }
}
