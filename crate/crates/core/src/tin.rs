//! TIN-achievable GDoF bounds for the downlink (IBC) and its dual uplink
//! (IMAC), the beta/gamma exponent reformulations, and the power
//! allocation maps that carry a TIN scheme from one side to the other.
//!
//! Downlink, cell `k`, order `pi_k`: the stream of `pi_k(1)` is decoded at
//! both in-cell UEs treating everything else as noise; `pi_k(2)` cancels it
//! first and then treats only inter-cell interference as noise. With
//! `X_k^[m] = max_{j != k, l} alpha_kj^[m] + r_j^[l]` (interference seen by
//! UE `(m, k)`):
//!
//! ```text
//! d_k^[pi1] <= max{0, min_m alpha_kk^[m] + r_k^[pi1] - (max{alpha_kk^[m] + r_k^[pi2], X_k^[m]})^+}
//! d_k^[pi2] <= max{0, alpha_kk^[pi2] + r_k^[pi2] - (X_k^[pi2])^+}
//! ```
//!
//! Uplink, BS `k` decodes `pi_k(2)` first and cancels it. With
//! `Y_k = max_{j != k, l} alpha_jk^[l] + rbar_j^[l]` (interference at BS `k`):
//!
//! ```text
//! dbar_k^[pi1] <= max{0, alpha_kk^[pi1] + rbar_k^[pi1] - (Y_k)^+}
//! dbar_k^[pi2] <= max{0, alpha_kk^[pi2] + rbar_k^[pi2] - (max{alpha_kk^[pi1] + rbar_k^[pi1], Y_k})^+}
//! ```
//!
//! An empty maximum (single cell, or every interferer silenced) is `-inf`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ext::{log2_sum_exp2, max2, min2, pos};
use crate::model::{
    ue_index, CellOrder, DecodingOrder, FinitePConfig, GdofTuple, NetworkProfile, PowerAllocation,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentKind {
    Beta,
    Gamma,
}

/// Per-UE beta (downlink) or gamma (uplink) exponents. Always finite.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DualExponents {
    pub kind: ExponentKind,
    values: Vec<f64>,
}

impl DualExponents {
    #[inline]
    pub fn get(&self, cell: usize, user: usize) -> f64 {
        self.values[ue_index(cell, user)]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.values
    }
}

fn check_inputs(
    profile: &NetworkProfile,
    order: &DecodingOrder,
    power: &PowerAllocation,
) -> Result<()> {
    order.check(profile.cells())?;
    power.check(profile.cells())
}

/// Interference exponent at downlink UE `(m, k)`.
#[inline(always)]
fn ibc_interference(profile: &NetworkProfile, r: &[f64], k: usize, m: usize) -> f64 {
    let mut x = f64::NEG_INFINITY;
    for j in 0..profile.cells() {
        if j != k {
            let loudest = max2(r[2 * j], r[2 * j + 1]);
            x = max2(x, profile.alpha(k, m, j) + loudest);
        }
    }
    x
}

/// Interference exponent at uplink BS `k`.
#[inline(always)]
fn imac_interference(profile: &NetworkProfile, r: &[f64], k: usize) -> f64 {
    let mut y = f64::NEG_INFINITY;
    for j in 0..profile.cells() {
        if j != k {
            y = max2(y, profile.alpha(j, 0, k) + r[2 * j]);
            y = max2(y, profile.alpha(j, 1, k) + r[2 * j + 1]);
        }
    }
    y
}

/// Downlink interference exponents; `x[2k + m]` is the level at UE `(m, k)`.
#[inline]
pub(crate) fn ibc_interference_into(profile: &NetworkProfile, r: &[f64], x: &mut [f64]) {
    for k in 0..profile.cells() {
        x[2 * k] = ibc_interference(profile, r, k, 0);
        x[2 * k + 1] = ibc_interference(profile, r, k, 1);
    }
}

/// Uplink interference exponents; `y[k]` is the level at BS `k`.
#[inline]
pub(crate) fn imac_interference_into(profile: &NetworkProfile, r: &[f64], y: &mut [f64]) {
    for (k, slot) in y.iter_mut().enumerate().take(profile.cells()) {
        *slot = imac_interference(profile, r, k);
    }
}

/// Downlink bounds (indexed by UE) given precomputed interference. No validation.
#[inline]
pub(crate) fn ibc_bounds_given(
    profile: &NetworkProfile,
    order: &[CellOrder],
    r: &[f64],
    x: &[f64],
    out: &mut [f64],
) {
    for (k, &pi) in order.iter().enumerate() {
        let (u1, u2) = (pi.first(), pi.second());
        let (r1, r2) = (r[2 * k + u1], r[2 * k + u2]);
        let (x1, x2) = (x[2 * k + u1], x[2 * k + u2]);
        let a1 = profile.direct(k, u1);
        let a2 = profile.direct(k, u2);
        let via_u1 = a1 + r1 - pos(max2(a1 + r2, x1));
        let via_u2 = a2 + r1 - pos(max2(a2 + r2, x2));
        out[2 * k + u1] = pos(min2(via_u1, via_u2));
        out[2 * k + u2] = pos(a2 + r2 - pos(x2));
    }
}

/// Uplink bounds (indexed by UE) given precomputed interference. No validation.
#[inline]
pub(crate) fn imac_bounds_given(
    profile: &NetworkProfile,
    order: &[CellOrder],
    r: &[f64],
    y: &[f64],
    out: &mut [f64],
) {
    for (k, &pi) in order.iter().enumerate() {
        let (u1, u2) = (pi.first(), pi.second());
        let rx1 = profile.direct(k, u1) + r[2 * k + u1];
        let rx2 = profile.direct(k, u2) + r[2 * k + u2];
        out[2 * k + u1] = pos(rx1 - pos(y[k]));
        out[2 * k + u2] = pos(rx2 - pos(max2(rx1, y[k])));
    }
}

/// Largest downlink GDoF per UE under `(order, power)`; the achievable set
/// is the box `[0, bound]`.
pub fn ibc_gdof_bounds(
    profile: &NetworkProfile,
    order: &DecodingOrder,
    power: &PowerAllocation,
) -> Result<GdofTuple> {
    check_inputs(profile, order, power)?;
    let mut x = vec![0.0; profile.dim()];
    let mut out = vec![0.0; profile.dim()];
    ibc_interference_into(profile, power.as_slice(), &mut x);
    ibc_bounds_given(profile, order.as_slice(), power.as_slice(), &x, &mut out);
    Ok(GdofTuple::from_vec_unchecked(out))
}

/// Largest uplink GDoF per UE under `(order, power)`.
pub fn imac_gdof_bounds(
    profile: &NetworkProfile,
    order: &DecodingOrder,
    power: &PowerAllocation,
) -> Result<GdofTuple> {
    check_inputs(profile, order, power)?;
    let mut y = vec![0.0; profile.cells()];
    let mut out = vec![0.0; profile.dim()];
    imac_interference_into(profile, power.as_slice(), &mut y);
    imac_bounds_given(profile, order.as_slice(), power.as_slice(), &y, &mut out);
    Ok(GdofTuple::from_vec_unchecked(out))
}

/// Downlink beta exponents: the IBC bound of each UE equals `max{0, r + beta}`.
pub fn beta_exponents(
    profile: &NetworkProfile,
    order: &DecodingOrder,
    power: &PowerAllocation,
) -> Result<DualExponents> {
    check_inputs(profile, order, power)?;
    let r = power.as_slice();
    let mut values = vec![0.0; profile.dim()];
    for k in 0..profile.cells() {
        let pi = order.cell(k);
        let (u1, u2) = (pi.first(), pi.second());
        let mut beta1 = f64::INFINITY;
        for m in [u1, u2] {
            let a = profile.direct(k, m);
            let x = ibc_interference(profile, r, k, m);
            beta1 = min2(beta1, min2(a, min2(-r[2 * k + u2], a - x)));
        }
        let a2 = profile.direct(k, u2);
        let x2 = ibc_interference(profile, r, k, u2);
        values[2 * k + u1] = beta1;
        values[2 * k + u2] = min2(a2, a2 - x2);
    }
    Ok(DualExponents {
        kind: ExponentKind::Beta,
        values,
    })
}

/// Uplink gamma exponents: the IMAC bound of each UE equals
/// `max{0, alpha_kk + rbar - gamma}`.
pub fn gamma_exponents(
    profile: &NetworkProfile,
    order: &DecodingOrder,
    power: &PowerAllocation,
) -> Result<DualExponents> {
    check_inputs(profile, order, power)?;
    let r = power.as_slice();
    let mut values = vec![0.0; profile.dim()];
    for k in 0..profile.cells() {
        let pi = order.cell(k);
        let (u1, u2) = (pi.first(), pi.second());
        let y = imac_interference(profile, r, k);
        let rx1 = profile.direct(k, u1) + r[2 * k + u1];
        values[2 * k + u1] = max2(0.0, y);
        values[2 * k + u2] = max2(0.0, max2(rx1, y));
    }
    Ok(DualExponents {
        kind: ExponentKind::Gamma,
        values,
    })
}

/// Uplink allocation `rbar = -alpha_kk + beta` that achieves every downlink
/// tuple of `(order, power)` under the same order.
pub fn dual_power_to_imac(
    profile: &NetworkProfile,
    order: &DecodingOrder,
    power: &PowerAllocation,
) -> Result<PowerAllocation> {
    let beta = beta_exponents(profile, order, power)?;
    Ok(imac_power_from_beta(profile, &beta))
}

pub(crate) fn imac_power_from_beta(
    profile: &NetworkProfile,
    beta: &DualExponents,
) -> PowerAllocation {
    let values = (0..profile.cells())
        .flat_map(|k| (0..2).map(move |l| (k, l)))
        .map(|(k, l)| -profile.direct(k, l) + beta.get(k, l))
        .collect();
    PowerAllocation::from_vec_unchecked(values)
}

/// True when every cell satisfies
/// `rbar_k^[pi2] + alpha_kk^[pi2] >= rbar_k^[pi1] + alpha_kk^[pi1]`.
pub fn imac_order_satisfied(
    profile: &NetworkProfile,
    order: &DecodingOrder,
    power: &PowerAllocation,
) -> Result<bool> {
    check_inputs(profile, order, power)?;
    Ok(first_imac_violation(profile, order, power).is_none())
}

fn first_imac_violation(
    profile: &NetworkProfile,
    order: &DecodingOrder,
    power: &PowerAllocation,
) -> Option<usize> {
    (0..profile.cells()).find(|&k| {
        let pi = order.cell(k);
        let rx1 = profile.direct(k, pi.first()) + power.get(k, pi.first());
        let rx2 = profile.direct(k, pi.second()) + power.get(k, pi.second());
        rx2 < rx1
    })
}

/// Downlink allocation `r = -gamma` that achieves every uplink tuple of
/// `(order, power)` under the same order. The uplink allocation must
/// satisfy the in-cell ordering (see [`normalize_imac_power`]).
pub fn dual_power_to_ibc(
    profile: &NetworkProfile,
    order: &DecodingOrder,
    power: &PowerAllocation,
) -> Result<PowerAllocation> {
    check_inputs(profile, order, power)?;
    if let Some(k) = first_imac_violation(profile, order, power) {
        return Err(Error::ImacOrderingViolated { cell: k + 1 });
    }
    let gamma = gamma_exponents(profile, order, power)?;
    Ok(ibc_power_from_gamma(&gamma))
}

pub(crate) fn ibc_power_from_gamma(gamma: &DualExponents) -> PowerAllocation {
    PowerAllocation::from_vec_unchecked(gamma.as_slice().iter().map(|g| -g).collect())
}

/// Repairs an uplink scheme that violates the in-cell ordering.
///
/// In each violating cell the decoding order is swapped and the UE that
/// moves into the first slot (it could only get zero GDoF) is silenced.
/// Other cells keep their order and powers. The uplink GDoF box of the
/// result contains the box of the input.
pub fn normalize_imac_power(
    profile: &NetworkProfile,
    order: &DecodingOrder,
    power: &PowerAllocation,
) -> Result<(DecodingOrder, PowerAllocation)> {
    check_inputs(profile, order, power)?;
    let mut cells = order.as_slice().to_vec();
    let mut r = power.as_slice().to_vec();
    for k in 0..profile.cells() {
        let pi = order.cell(k);
        let rx1 = profile.direct(k, pi.first()) + power.get(k, pi.first());
        let rx2 = profile.direct(k, pi.second()) + power.get(k, pi.second());
        if rx2 < rx1 {
            cells[k] = pi.flipped();
            r[ue_index(k, pi.second())] = f64::NEG_INFINITY;
        }
    }
    Ok((
        DecodingOrder::new(cells),
        PowerAllocation::from_vec_unchecked(r),
    ))
}

/// Downlink rates `log2(1 + SINR)` in bits per channel use, per UE.
///
/// The first-decoded stream of a cell must be decodable at both in-cell UEs,
/// so its rate is the smaller of the two. Noise has unit power; link `(k,l,i)`
/// has power gain `P^alpha`. Everything is evaluated in the log domain.
pub fn ibc_finite_p_rates(
    profile: &NetworkProfile,
    order: &DecodingOrder,
    fp: &FinitePConfig,
) -> Result<Vec<f64>> {
    order.check(profile.cells())?;
    if fp.cells() != profile.cells() {
        return Err(Error::DimensionMismatch {
            what: "power shares",
            expected: profile.dim(),
            actual: 2 * fp.cells(),
        });
    }
    let lp = fp.nominal_power().log2();
    let level = |alpha: f64, share: f64| alpha * lp + share.log2();
    let cells = profile.cells();

    // interference terms (plus unit noise) at UE (m, k), in log2 units
    let noise_and_cross = |k: usize, m: usize| -> Vec<f64> {
        let mut terms = Vec::with_capacity(cells + 1);
        terms.push(0.0);
        for j in (0..cells).filter(|&j| j != k) {
            terms.push(level(
                profile.alpha(k, m, j),
                fp.share(j, 0) + fp.share(j, 1),
            ));
        }
        terms
    };
    let rate = |mut terms: Vec<f64>, signal: f64| {
        let floor = log2_sum_exp2(&terms);
        terms.push(signal);
        log2_sum_exp2(&terms) - floor
    };

    let mut rates = vec![0.0; profile.dim()];
    for k in 0..cells {
        let pi = order.cell(k);
        let (u1, u2) = (pi.first(), pi.second());
        let first = [u1, u2]
            .into_iter()
            .map(|m| {
                let a = profile.direct(k, m);
                let mut terms = noise_and_cross(k, m);
                terms.push(level(a, fp.share(k, u2)));
                rate(terms, level(a, fp.share(k, u1)))
            })
            .fold(f64::INFINITY, f64::min);
        let second = rate(
            noise_and_cross(k, u2),
            level(profile.direct(k, u2), fp.share(k, u2)),
        );
        rates[ue_index(k, u1)] = first;
        rates[ue_index(k, u2)] = second;
    }
    Ok(rates)
}
