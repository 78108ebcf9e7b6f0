//! Network data model: strength exponents, decoding orders, power
//! allocations, GDoF tuples and finite-power configurations.
//!
//! Indices are 0-based in the API. A cell `k` hosts two UEs, `user = 0`
//! (UE 1) and `user = 1` (UE 2). Per-UE quantities are stored flat in the
//! order `(1,1), (2,1), (1,2), (2,2), ...`, i.e. index `2 * cell + user`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeSeq;
use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::ext::is_power_exponent;

/// Flat index of UE `(user, cell)`.
#[inline(always)]
pub fn ue_index(cell: usize, user: usize) -> usize {
    2 * cell + user
}

/// Channel strength exponents of a K-cell, 2-user-per-cell network.
///
/// `alpha(k, l, i)` is the strength of the link between BS `i` and UE
/// `(l, k)`. In the downlink it is the gain from BS `i` to UE `(l, k)`; the
/// uplink reuses the same entries with the roles of the ends exchanged.
#[derive(Debug, Clone, PartialEq)]
pub struct NetworkProfile {
    cells: usize,
    alpha: Vec<f64>,
}

impl NetworkProfile {
    /// Builds a profile from a total function `(cell, user, from) -> alpha`.
    ///
    /// Entries must be finite and nonnegative. The in-cell order
    /// `alpha(k,0,k) <= alpha(k,1,k)` is not required here; see
    /// [`NetworkProfile::normalize`].
    pub fn from_fn(cells: usize, mut f: impl FnMut(usize, usize, usize) -> f64) -> Result<Self> {
        if cells == 0 {
            return Err(Error::NoCells);
        }
        let mut alpha = Vec::with_capacity(2 * cells * cells);
        for k in 0..cells {
            for l in 0..2 {
                for i in 0..cells {
                    alpha.push(f(k, l, i));
                }
            }
        }
        let profile = Self { cells, alpha };
        profile.validate()?;
        Ok(profile)
    }

    /// Builds a profile from a flat vector laid out as `[(k * 2 + l) * K + i]`.
    pub fn from_flat(cells: usize, alpha: Vec<f64>) -> Result<Self> {
        if cells == 0 {
            return Err(Error::NoCells);
        }
        if alpha.len() != 2 * cells * cells {
            return Err(Error::DimensionMismatch {
                what: "alpha entries",
                expected: 2 * cells * cells,
                actual: alpha.len(),
            });
        }
        let profile = Self { cells, alpha };
        profile.validate()?;
        Ok(profile)
    }

    /// Every cell gets direct strengths `direct` and every cross link `cross`.
    pub fn symmetric(cells: usize, direct: [f64; 2], cross: f64) -> Result<Self> {
        Self::from_fn(cells, |k, l, i| if k == i { direct[l] } else { cross })
    }

    fn validate(&self) -> Result<()> {
        for k in 0..self.cells {
            for l in 0..2 {
                for i in 0..self.cells {
                    let value = self.alpha(k, l, i);
                    if !value.is_finite() {
                        return Err(Error::NonFiniteAlpha {
                            cell: k + 1,
                            user: l + 1,
                            from: i + 1,
                            value,
                        });
                    }
                    if value < 0.0 {
                        return Err(Error::NegativeAlpha {
                            cell: k + 1,
                            user: l + 1,
                            from: i + 1,
                            value,
                        });
                    }
                }
            }
        }
        Ok(())
    }

    #[inline(always)]
    pub fn cells(&self) -> usize {
        self.cells
    }

    /// Number of UEs, `2K`.
    #[inline(always)]
    pub fn dim(&self) -> usize {
        2 * self.cells
    }

    #[inline(always)]
    pub fn alpha(&self, cell: usize, user: usize, from: usize) -> f64 {
        self.alpha[(cell * 2 + user) * self.cells + from]
    }

    /// In-cell strength `alpha(k, l, k)`.
    #[inline(always)]
    pub fn direct(&self, cell: usize, user: usize) -> f64 {
        self.alpha(cell, user, cell)
    }

    pub fn max_alpha(&self) -> f64 {
        self.alpha.iter().copied().fold(0.0, f64::max)
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.alpha
    }

    /// True when `alpha(k,0,k) <= alpha(k,1,k)` holds in every cell.
    pub fn is_normalized(&self) -> bool {
        (0..self.cells).all(|k| self.direct(k, 0) <= self.direct(k, 1))
    }

    /// Relabels the two UEs of every cell whose direct strengths are out of
    /// order. Returns the normalized profile and one flag per cell telling
    /// whether its labels were swapped.
    pub fn normalize(&self) -> (NetworkProfile, Vec<bool>) {
        let flags: Vec<bool> = (0..self.cells)
            .map(|k| self.direct(k, 0) > self.direct(k, 1))
            .collect();
        let normalized = Self::from_fn(self.cells, |k, l, i| {
            let user = if flags[k] { 1 - l } else { l };
            self.alpha(k, user, i)
        })
        .expect("relabeling preserves validity");
        (normalized, flags)
    }

    /// Relabels cells: cell `k` of `self` becomes cell `sigma[k]` of the result.
    pub fn permute_cells(&self, sigma: &[usize]) -> Result<NetworkProfile> {
        check_permutation(sigma, self.cells)?;
        let mut inverse = vec![0; self.cells];
        for (k, &s) in sigma.iter().enumerate() {
            inverse[s] = k;
        }
        Self::from_fn(self.cells, |k, l, i| self.alpha(inverse[k], l, inverse[i]))
    }
}

fn check_permutation(sigma: &[usize], n: usize) -> Result<()> {
    if sigma.len() != n {
        return Err(Error::DimensionMismatch {
            what: "cell permutation",
            expected: n,
            actual: sigma.len(),
        });
    }
    let mut seen = vec![false; n];
    for &s in sigma {
        if s >= n || seen[s] {
            return Err(Error::Precondition(format!(
                "{sigma:?} is not a permutation of 0..{n}"
            )));
        }
        seen[s] = true;
    }
    Ok(())
}

/// Closed interval `[lo, hi]` used by [`random_profile`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub lo: f64,
    pub hi: f64,
}

impl Interval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidInterval {
                lo,
                hi,
                reason: "bounds must be finite",
            });
        }
        if lo < 0.0 {
            return Err(Error::InvalidInterval {
                lo,
                hi,
                reason: "strength exponents are nonnegative",
            });
        }
        if lo > hi {
            return Err(Error::InvalidInterval {
                lo,
                hi,
                reason: "empty interval",
            });
        }
        Ok(Self { lo, hi })
    }

    fn sample(&self, rng: &mut impl Rng) -> f64 {
        if self.lo == self.hi {
            self.lo
        } else {
            rng.gen_range(self.lo..=self.hi)
        }
    }
}

/// Draws a normalized profile with direct strengths from `direct` and cross
/// strengths from `cross`. The generator is ChaCha8 seeded with `seed`, so
/// the output is identical across runs and platforms.
pub fn random_profile(
    cells: usize,
    direct: Interval,
    cross: Interval,
    seed: u64,
) -> Result<NetworkProfile> {
    if cells == 0 {
        return Err(Error::NoCells);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut alpha = vec![0.0; 2 * cells * cells];
    for k in 0..cells {
        for l in 0..2 {
            for i in 0..cells {
                let range = if i == k { direct } else { cross };
                alpha[(k * 2 + l) * cells + i] = range.sample(&mut rng);
            }
        }
        let (a1, a2) = ((k * 2) * cells + k, (k * 2 + 1) * cells + k);
        if alpha[a1] > alpha[a2] {
            alpha.swap(a1, a2);
        }
    }
    NetworkProfile::from_flat(cells, alpha)
}

/// Successive-decoding order inside one cell.
///
/// `Natural` decodes UE 1's stream first in the downlink (`pi_k = (1, 2)`);
/// `Swapped` means `pi_k = (2, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CellOrder {
    Natural,
    Swapped,
}

impl CellOrder {
    /// User placed in `slot` (0 for `pi_k(1)`, 1 for `pi_k(2)`).
    #[inline(always)]
    pub fn user(self, slot: usize) -> usize {
        match self {
            CellOrder::Natural => slot,
            CellOrder::Swapped => 1 - slot,
        }
    }

    #[inline(always)]
    pub fn first(self) -> usize {
        self.user(0)
    }

    #[inline(always)]
    pub fn second(self) -> usize {
        self.user(1)
    }

    pub fn flipped(self) -> Self {
        match self {
            CellOrder::Natural => CellOrder::Swapped,
            CellOrder::Swapped => CellOrder::Natural,
        }
    }
}

/// Network decoding order: one [`CellOrder`] per cell.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DecodingOrder(Vec<CellOrder>);

impl DecodingOrder {
    pub fn new(per_cell: Vec<CellOrder>) -> Self {
        Self(per_cell)
    }

    pub fn identity(cells: usize) -> Self {
        Self(vec![CellOrder::Natural; cells])
    }

    /// All `2^K` network orders; bit `k` of the counter swaps cell `k`.
    pub fn all(cells: usize) -> impl Iterator<Item = DecodingOrder> {
        (0..1u64 << cells).map(move |mask| {
            Self(
                (0..cells)
                    .map(|k| {
                        if mask >> k & 1 == 1 {
                            CellOrder::Swapped
                        } else {
                            CellOrder::Natural
                        }
                    })
                    .collect(),
            )
        })
    }

    #[inline(always)]
    pub fn cell(&self, k: usize) -> CellOrder {
        self.0[k]
    }

    pub fn cells(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[CellOrder] {
        &self.0
    }

    pub fn with_cell_swapped(&self, k: usize) -> Self {
        let mut next = self.0.clone();
        next[k] = next[k].flipped();
        Self(next)
    }

    pub(crate) fn check(&self, cells: usize) -> Result<()> {
        if self.0.len() != cells {
            return Err(Error::DimensionMismatch {
                what: "decoding order",
                expected: cells,
                actual: self.0.len(),
            });
        }
        Ok(())
    }
}

/// Per-UE transmit power exponents `r <= 0`; `-inf` silences a stream.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerAllocation(Vec<f64>);

impl PowerAllocation {
    pub fn new(exponents: Vec<f64>) -> Result<Self> {
        if exponents.is_empty() || !exponents.len().is_multiple_of(2) {
            return Err(Error::DimensionMismatch {
                what: "power allocation",
                expected: 2 * exponents.len().div_ceil(2).max(1),
                actual: exponents.len(),
            });
        }
        for (idx, &value) in exponents.iter().enumerate() {
            if !is_power_exponent(value) {
                return Err(Error::InvalidPowerExponent {
                    cell: idx / 2 + 1,
                    user: idx % 2 + 1,
                    value,
                });
            }
        }
        Ok(Self(exponents))
    }

    /// Same `[r1, r2]` pair in every cell.
    pub fn per_cell(cells: usize, pair: [f64; 2]) -> Result<Self> {
        Self::new((0..cells).flat_map(|_| pair).collect())
    }

    pub fn full(cells: usize) -> Self {
        Self(vec![0.0; 2 * cells])
    }

    pub fn silent(cells: usize) -> Self {
        Self(vec![f64::NEG_INFINITY; 2 * cells])
    }

    #[inline(always)]
    pub fn get(&self, cell: usize, user: usize) -> f64 {
        self.0[ue_index(cell, user)]
    }

    pub fn cells(&self) -> usize {
        self.0.len() / 2
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub(crate) fn from_vec_unchecked(exponents: Vec<f64>) -> Self {
        debug_assert!(exponents.iter().all(|&x| is_power_exponent(x)));
        Self(exponents)
    }

    pub(crate) fn check(&self, cells: usize) -> Result<()> {
        if self.0.len() != 2 * cells {
            return Err(Error::DimensionMismatch {
                what: "power allocation",
                expected: 2 * cells,
                actual: self.0.len(),
            });
        }
        Ok(())
    }
}

// JSON has no infinities; silenced streams are written as the string "-inf".
impl Serialize for PowerAllocation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.0.len()))?;
        for &x in &self.0 {
            if x == f64::NEG_INFINITY {
                seq.serialize_element("-inf")?;
            } else {
                seq.serialize_element(&x)?;
            }
        }
        seq.end()
    }
}

/// Nonnegative GDoF values, one per UE.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct GdofTuple(Vec<f64>);

impl GdofTuple {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() || !values.len().is_multiple_of(2) {
            return Err(Error::DimensionMismatch {
                what: "GDoF tuple",
                expected: 2 * values.len().div_ceil(2).max(1),
                actual: values.len(),
            });
        }
        for (idx, &value) in values.iter().enumerate() {
            if !(value.is_finite() && value >= 0.0) {
                return Err(Error::InvalidGdof {
                    cell: idx / 2 + 1,
                    user: idx % 2 + 1,
                    value,
                });
            }
        }
        Ok(Self(values))
    }

    pub fn zeros(cells: usize) -> Self {
        Self(vec![0.0; 2 * cells])
    }

    #[inline(always)]
    pub fn get(&self, cell: usize, user: usize) -> f64 {
        self.0[ue_index(cell, user)]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `max_i (self_i - other_i)`: positive iff some coordinate of `self`
    /// exceeds `other`.
    pub fn max_excess_over(&self, other: &GdofTuple) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a - b)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub(crate) fn from_vec_unchecked(values: Vec<f64>) -> Self {
        Self(values)
    }
}

/// Linear-scale transmit configuration at a fixed nominal power `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct FinitePConfig {
    nominal_power: f64,
    shares: Vec<f64>,
    // Carried for completeness; GDoF and the rate formulas are phase independent.
    phases: Option<Vec<f64>>,
}

impl FinitePConfig {
    pub fn new(nominal_power: f64, shares: Vec<f64>, phases: Option<Vec<f64>>) -> Result<Self> {
        if !(nominal_power.is_finite() && nominal_power > 1.0) {
            return Err(Error::InvalidPowerConfig(format!(
                "nominal power must be finite and > 1, got {nominal_power}"
            )));
        }
        if shares.is_empty() || !shares.len().is_multiple_of(2) {
            return Err(Error::InvalidPowerConfig(format!(
                "expected 2 power shares per cell, got {}",
                shares.len()
            )));
        }
        for (idx, &q) in shares.iter().enumerate() {
            if !(0.0..=1.0).contains(&q) {
                return Err(Error::InvalidPowerConfig(format!(
                    "share of (k={}, l={}) must lie in [0, 1], got {q}",
                    idx / 2 + 1,
                    idx % 2 + 1
                )));
            }
        }
        for (k, pair) in shares.chunks(2).enumerate() {
            if pair[0] + pair[1] > 1.0 + 1e-12 {
                return Err(Error::InvalidPowerConfig(format!(
                    "cell {} shares sum to {} > 1",
                    k + 1,
                    pair[0] + pair[1]
                )));
            }
        }
        if let Some(theta) = &phases {
            let cells = shares.len() / 2;
            if theta.len() != 2 * cells * cells {
                return Err(Error::InvalidPowerConfig(format!(
                    "expected {} phases, got {}",
                    2 * cells * cells,
                    theta.len()
                )));
            }
        }
        Ok(Self {
            nominal_power,
            shares,
            phases,
        })
    }

    /// Shares `q = P^r`, rescaled per cell so that `q1 + q2 <= 1`.
    pub fn from_exponents(nominal_power: f64, power: &PowerAllocation) -> Result<Self> {
        let mut shares = Vec::with_capacity(power.as_slice().len());
        for pair in power.as_slice().chunks(2) {
            let raw = [nominal_power.powf(pair[0]), nominal_power.powf(pair[1])];
            let scale = (raw[0] + raw[1]).max(1.0);
            shares.push(raw[0] / scale);
            shares.push(raw[1] / scale);
        }
        Self::new(nominal_power, shares, None)
    }

    pub fn nominal_power(&self) -> f64 {
        self.nominal_power
    }

    #[inline(always)]
    pub fn share(&self, cell: usize, user: usize) -> f64 {
        self.shares[ue_index(cell, user)]
    }

    pub fn cells(&self) -> usize {
        self.shares.len() / 2
    }

    pub fn phases(&self) -> Option<&[f64]> {
        self.phases.as_deref()
    }
}
