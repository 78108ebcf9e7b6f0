use std::collections::hash_map::Entry;
use std::hash::Hasher;

use rustc_hash::{FxHashMap, FxHasher};
use serde::Serialize;

use super::grid::{sweep_tin_region, GridSpec, Side, DEFAULT_SWEEP_BUDGET};
use super::MAX_REPORTED_SAMPLES;
use crate::document::profile_hash;
use crate::error::{Error, Result};
use crate::model::{DecodingOrder, GdofTuple, NetworkProfile, PowerAllocation};
use crate::region::{
    check_tin_optimality, extreme_points, tin_optimal_region, HalfSpaceRegion, Verdict,
};
use crate::TOL;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OffendingSample {
    pub order: DecodingOrder,
    pub power: PowerAllocation,
    pub bounds: GdofTuple,
    /// Index of the most violated row and its excess.
    pub row: usize,
    pub excess: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexCoverage {
    pub vertex: GdofTuple,
    /// `min` over samples of `max_i (vertex_i - bound_i)`; at most 0 when
    /// some sampled box contains the vertex.
    pub slack: f64,
    pub witness_order: DecodingOrder,
    pub witness_power: PowerAllocation,
    pub witness_bounds: GdofTuple,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossValidationReport {
    pub profile_hash: String,
    pub grid: GridSpec,
    pub samples: u64,
    pub distinct_tuples: usize,
    pub containment_violations: u64,
    pub worst_excess: f64,
    pub offending: Vec<OffendingSample>,
    pub vertices: Vec<VertexCoverage>,
    /// Largest vertex slack, clamped below at 0.
    pub max_slack: f64,
    pub eps_cov: f64,
    pub passed: bool,
}

struct SparseRow {
    idx: Vec<usize>,
    coef: Vec<f64>,
    rhs: f64,
}

fn compile(region: &HalfSpaceRegion) -> Vec<SparseRow> {
    region
        .rows()
        .iter()
        .map(|row| {
            let (idx, coef) = row
                .coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| **c != 0.0)
                .map(|(i, c)| (i, *c))
                .unzip();
            SparseRow {
                idx,
                coef,
                rhs: row.rhs,
            }
        })
        .collect()
}

/// A distinct sampled tuple, how often it occurred and the first scheme
/// that produced it.
struct Distinct {
    count: u64,
    order: DecodingOrder,
    power: Vec<f64>,
    bounds: Vec<f64>,
}

/// Grid-samples the downlink TIN region and compares it with the polyhedral
/// region: every sampled tuple must lie inside it, and every vertex should be
/// dominated by some sample up to `eps_cov = spacing * 2K`.
///
/// Requires a TIN-optimal profile with at most 3 cells.
pub fn region_cross_validation(
    profile: &NetworkProfile,
    grid: &GridSpec,
) -> Result<CrossValidationReport> {
    let optimality = check_tin_optimality(profile);
    if optimality.verdict != Verdict::Optimal {
        return Err(Error::Precondition(
            "cross-validation needs a profile that satisfies the TIN-optimality conditions".into(),
        ));
    }
    if profile.cells() > 3 {
        return Err(Error::UnsupportedSize(profile.cells()));
    }
    let region = tin_optimal_region(profile);
    let rows = compile(&region);
    let verts = extreme_points(&region)?;

    // Bound tuples repeat heavily across the grid, so both checks run on
    // the distinct tuples only.
    // Keyed by a 64-bit digest to keep the table small; genuine digest
    // collisions go to an exact-key side table.
    let mut seen: FxHashMap<u64, usize> = FxHashMap::default();
    let mut collided: FxHashMap<Vec<u64>, usize> = FxHashMap::default();
    let mut distinct: Vec<Distinct> = Vec::new();
    let samples = sweep_tin_region(
        profile,
        Side::Ibc,
        grid,
        DEFAULT_SWEEP_BUDGET,
        |order, power, bounds| {
            let mut hasher = FxHasher::default();
            for b in bounds {
                hasher.write_u64(b.to_bits());
            }
            let digest = hasher.finish();
            let fresh = |distinct: &mut Vec<Distinct>| {
                distinct.push(Distinct {
                    count: 1,
                    order: order.clone(),
                    power: power.to_vec(),
                    bounds: bounds.to_vec(),
                });
                distinct.len() - 1
            };
            match seen.entry(digest) {
                Entry::Vacant(e) => {
                    e.insert(fresh(&mut distinct));
                }
                Entry::Occupied(e) => {
                    let at = *e.get();
                    if distinct[at].bounds == bounds {
                        distinct[at].count += 1;
                    } else {
                        let key: Vec<u64> = bounds.iter().map(|b| b.to_bits()).collect();
                        match collided.entry(key) {
                            Entry::Occupied(e) => distinct[*e.get()].count += 1,
                            Entry::Vacant(e) => {
                                e.insert(fresh(&mut distinct));
                            }
                        }
                    }
                }
            }
        },
    )?;

    let mut violations = 0u64;
    let mut worst_excess = 0.0f64;
    let mut offending = Vec::new();
    for s in &distinct {
        let mut row_hit: Option<(usize, f64)> = None;
        for (n, row) in rows.iter().enumerate() {
            let lhs: f64 = row
                .idx
                .iter()
                .zip(&row.coef)
                .map(|(&i, c)| c * s.bounds[i])
                .sum();
            let excess = lhs - row.rhs;
            if excess > TOL && row_hit.is_none_or(|(_, e)| excess > e) {
                row_hit = Some((n, excess));
            }
        }
        if let Some((row, excess)) = row_hit {
            violations += s.count;
            worst_excess = worst_excess.max(excess);
            if offending.len() < MAX_REPORTED_SAMPLES {
                offending.push(OffendingSample {
                    order: s.order.clone(),
                    power: PowerAllocation::from_vec_unchecked(s.power.clone()),
                    bounds: GdofTuple::from_vec_unchecked(s.bounds.clone()),
                    row,
                    excess,
                });
            }
        }
    }

    let vertices: Vec<VertexCoverage> = verts
        .into_iter()
        .map(|vertex| {
            let mut slack = f64::INFINITY;
            let mut witness = &distinct[0];
            for s in &distinct {
                let mut gap = f64::NEG_INFINITY;
                for (a, b) in vertex.as_slice().iter().zip(&s.bounds) {
                    gap = gap.max(a - b);
                    if gap >= slack {
                        break;
                    }
                }
                if gap < slack {
                    slack = gap;
                    witness = s;
                }
            }
            VertexCoverage {
                vertex,
                slack,
                witness_order: witness.order.clone(),
                witness_power: PowerAllocation::from_vec_unchecked(witness.power.clone()),
                witness_bounds: GdofTuple::from_vec_unchecked(witness.bounds.clone()),
            }
        })
        .collect();

    let eps_cov = grid.spacing() * profile.dim() as f64;
    let max_slack = vertices.iter().map(|v| v.slack).fold(0.0, f64::max);
    Ok(CrossValidationReport {
        profile_hash: profile_hash(profile),
        grid: *grid,
        samples,
        distinct_tuples: distinct.len(),
        containment_violations: violations,
        worst_excess,
        offending,
        vertices,
        max_slack,
        eps_cov,
        passed: violations == 0 && max_slack <= eps_cov,
    })
}
