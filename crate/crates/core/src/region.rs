//! TIN-optimality conditions and the polyhedral GDoF region they certify.
//!
//! The region is an intersection of half-spaces over the `2K` GDoF
//! coordinates:
//!
//! * `d_i^[l] >= 0` for every UE,
//! * `d_i^[1] <= alpha_ii^[1]` and `d_i^[1] + d_i^[2] <= alpha_ii^[2]` per cell,
//! * for every cyclic sequence `(i_1, ..., i_m)` of distinct cells and every
//!   selector `(l_1, ..., l_m)` in `{1,2}^m`:
//!   `sum_j sum_{s <= l_j} d_{i_j}^[s] <= sum_j alpha_{i_j i_j}^[l_j] - alpha_{i_j i_{j-1}}^[l_j]`
//!   with `i_0 = i_m`.

use serde::Serialize;

use crate::document::profile_hash;
use crate::error::{Error, Result};
use crate::model::{ue_index, GdofTuple, NetworkProfile};
use crate::TOL;

/// Cells `(i_1, ..., i_m)` visited in cyclic order, smallest index first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct CyclicSequence(Vec<usize>);

impl CyclicSequence {
    /// Canonical rotation of `cells`; `None` unless the entries are distinct
    /// and there are at least two of them.
    pub fn new(cells: Vec<usize>) -> Option<Self> {
        if cells.len() < 2 {
            return None;
        }
        let mut sorted = cells.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != cells.len() {
            return None;
        }
        let start = cells.iter().enumerate().min_by_key(|(_, &c)| c)?.0;
        let mut canon = cells;
        canon.rotate_left(start);
        Some(Self(canon))
    }

    pub fn cells(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The cell visited just before position `j`, wrapping around.
    pub fn predecessor(&self, j: usize) -> usize {
        self.0[(j + self.0.len() - 1) % self.0.len()]
    }
}

/// All cyclic sequences over `cells` cells, counted up to rotation only.
///
/// Sequences are grouped by length and listed lexicographically within a
/// length; there are `C(K, m) (m - 1)!` of length `m`.
pub fn enumerate_cyclic_sequences(cells: usize) -> Vec<CyclicSequence> {
    let mut out = Vec::new();
    for m in 2..=cells {
        for subset in combinations(cells, m) {
            let (head, rest) = subset.split_first().expect("m >= 2");
            for tail in permutations(rest) {
                let mut seq = Vec::with_capacity(m);
                seq.push(*head);
                seq.extend(tail);
                out.push(CyclicSequence(seq));
            }
        }
    }
    out
}

fn combinations(n: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, m, &mut Vec::with_capacity(m), &mut out);
    out
}

// lexicographic, assuming `items` is sorted
fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (idx, &first) in items.iter().enumerate() {
        let mut rest = items.to_vec();
        rest.remove(idx);
        for mut tail in permutations(&rest) {
            tail.insert(0, first);
            out.push(tail);
        }
    }
    out
}

/// Where a row of the region comes from. Indices are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub enum RowTag {
    Nonneg {
        cell: usize,
        user: usize,
    },
    PerCell {
        cell: usize,
        user: usize,
    },
    Cyclic {
        sequence: CyclicSequence,
        users: Vec<usize>,
    },
}

impl RowTag {
    pub fn name(&self) -> &'static str {
        match self {
            RowTag::Nonneg { .. } => "nonneg",
            RowTag::PerCell { .. } => "percell",
            RowTag::Cyclic { .. } => "cyclic",
        }
    }
}

impl std::fmt::Display for RowTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RowTag::Nonneg { cell, user } => write!(f, "nonneg(k={}, l={})", cell + 1, user + 1),
            RowTag::PerCell { cell, user } => write!(f, "percell(k={}, l={})", cell + 1, user + 1),
            RowTag::Cyclic { sequence, users } => {
                let cells: Vec<String> = sequence
                    .cells()
                    .iter()
                    .map(|c| (c + 1).to_string())
                    .collect();
                let users: Vec<String> = users.iter().map(|u| (u + 1).to_string()).collect();
                write!(
                    f,
                    "cyclic(cells=({}), l=({}))",
                    cells.join(","),
                    users.join(",")
                )
            }
        }
    }
}

/// One inequality `coeffs . d <= rhs`.
#[derive(Debug, Clone, PartialEq)]
pub struct Row {
    pub coeffs: Vec<f64>,
    pub rhs: f64,
    pub tag: RowTag,
}

impl Row {
    #[inline]
    pub fn lhs(&self, d: &[f64]) -> f64 {
        self.coeffs.iter().zip(d).map(|(a, x)| a * x).sum()
    }

    pub fn render(&self) -> String {
        let mut terms = Vec::new();
        for (idx, &c) in self.coeffs.iter().enumerate() {
            if c == 0.0 {
                continue;
            }
            let var = format!("d_{}^{}", idx / 2 + 1, idx % 2 + 1);
            terms.push(match c {
                1.0 => var,
                -1.0 => format!("-{var}"),
                _ => format!("{c}*{var}"),
            });
        }
        format!("{} <= {}", terms.join(" + "), self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HalfSpaceRegion {
    dim: usize,
    rows: Vec<Row>,
}

impl HalfSpaceRegion {
    pub fn new(dim: usize, rows: Vec<Row>) -> Result<Self> {
        for row in &rows {
            if row.coeffs.len() != dim {
                return Err(Error::DimensionMismatch {
                    what: "region row",
                    expected: dim,
                    actual: row.coeffs.len(),
                });
            }
            if !row.rhs.is_finite() || row.coeffs.iter().any(|c| !c.is_finite()) {
                return Err(Error::Precondition(format!(
                    "row {} is not finite",
                    row.tag
                )));
            }
        }
        Ok(Self { dim, rows })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    /// The 2D slice through the coordinates `axes`, every other coordinate
    /// fixed to `fixed[i]` (entries at `axes` are ignored).
    pub fn slice2(&self, axes: [usize; 2], fixed: &[f64]) -> Result<HalfSpaceRegion> {
        if fixed.len() != self.dim {
            return Err(Error::DimensionMismatch {
                what: "slice point",
                expected: self.dim,
                actual: fixed.len(),
            });
        }
        if axes[0] >= self.dim || axes[1] >= self.dim || axes[0] == axes[1] {
            return Err(Error::Precondition(format!("invalid slice axes {axes:?}")));
        }
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let offset: f64 = (0..self.dim)
                    .filter(|i| !axes.contains(i))
                    .map(|i| row.coeffs[i] * fixed[i])
                    .sum();
                Row {
                    coeffs: vec![row.coeffs[axes[0]], row.coeffs[axes[1]]],
                    rhs: row.rhs - offset,
                    tag: row.tag.clone(),
                }
            })
            .collect();
        HalfSpaceRegion::new(2, rows)
    }
}

/// Closed-form row count `4K + sum_{m=2}^{K} C(K,m) (m-1)! 2^m`.
pub fn expected_row_count(cells: usize) -> u128 {
    let mut total = 4 * cells as u128;
    for m in 2..=cells as u128 {
        let mut binom: u128 = 1;
        for t in 0..m {
            binom = binom * (cells as u128 - t) / (t + 1);
        }
        let fact: u128 = (1..m).product();
        total += binom * fact * (1u128 << m);
    }
    total
}

/// Builds the region for `profile`. It is the downlink GDoF region only when
/// [`check_tin_optimality`] reports [`Verdict::Optimal`].
pub fn tin_optimal_region(profile: &NetworkProfile) -> HalfSpaceRegion {
    let cells = profile.cells();
    let dim = profile.dim();
    let mut rows = Vec::new();

    for cell in 0..cells {
        for user in 0..2 {
            let mut coeffs = vec![0.0; dim];
            coeffs[ue_index(cell, user)] = -1.0;
            rows.push(Row {
                coeffs,
                rhs: 0.0,
                tag: RowTag::Nonneg { cell, user },
            });
        }
    }
    for cell in 0..cells {
        for user in 0..2 {
            let mut coeffs = vec![0.0; dim];
            for s in 0..=user {
                coeffs[ue_index(cell, s)] = 1.0;
            }
            rows.push(Row {
                coeffs,
                rhs: profile.direct(cell, user),
                tag: RowTag::PerCell { cell, user },
            });
        }
    }
    for sequence in enumerate_cyclic_sequences(cells) {
        let m = sequence.len();
        for mask in 0..1usize << m {
            // first cell's selector is the most significant bit
            let users: Vec<usize> = (0..m).map(|j| mask >> (m - 1 - j) & 1).collect();
            let mut coeffs = vec![0.0; dim];
            let mut rhs = 0.0;
            for (j, (&cell, &user)) in sequence.cells().iter().zip(&users).enumerate() {
                for s in 0..=user {
                    coeffs[ue_index(cell, s)] = 1.0;
                }
                rhs +=
                    profile.direct(cell, user) - profile.alpha(cell, user, sequence.predecessor(j));
            }
            rows.push(Row {
                coeffs,
                rhs,
                tag: RowTag::Cyclic {
                    sequence: sequence.clone(),
                    users,
                },
            });
        }
    }
    HalfSpaceRegion { dim, rows }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    /// The sufficient conditions hold: the region is the GDoF region.
    Optimal,
    /// The conditions fail; nothing is claimed either way.
    Unknown,
}

/// A failed optimality inequality `lhs >= rhs`. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "condition", rename_all = "snake_case")]
pub enum ConditionViolation {
    /// `alpha_ii^[2] >= alpha_ii^[1] + max_{j != i} alpha_ij^[2]`
    StrongUserGap { cell: usize, lhs: f64, rhs: f64 },
    /// `alpha_ii^[l] >= max_{j != i} alpha_ij^[l] + max_{(l',k): k != i} alpha_ki^[l']`
    InterferenceBudget {
        cell: usize,
        user: usize,
        lhs: f64,
        rhs: f64,
    },
}

impl std::fmt::Display for ConditionViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ConditionViolation::StrongUserGap { cell, lhs, rhs } => write!(
                f,
                "cell {}: alpha^[2] = {lhs} < alpha^[1] + strongest interference at UE 2 = {rhs}",
                cell + 1
            ),
            ConditionViolation::InterferenceBudget { cell, user, lhs, rhs } => write!(
                f,
                "cell {}, UE {}: alpha = {lhs} < interference received + interference caused = {rhs}",
                cell + 1,
                user + 1
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TinOptimality {
    pub verdict: Verdict,
    pub violations: Vec<ConditionViolation>,
}

/// Checks the sufficient TIN-optimality conditions (within [`TOL`]).
///
/// Maxima over empty sets (single cell) are taken as 0.
pub fn check_tin_optimality(profile: &NetworkProfile) -> TinOptimality {
    let cells = profile.cells();
    let received = |i: usize, l: usize| {
        (0..cells)
            .filter(|&j| j != i)
            .map(|j| profile.alpha(i, l, j))
            .fold(0.0, f64::max)
    };
    let caused = |i: usize| {
        (0..cells)
            .filter(|&k| k != i)
            .flat_map(|k| [profile.alpha(k, 0, i), profile.alpha(k, 1, i)])
            .fold(0.0, f64::max)
    };

    let mut violations = Vec::new();
    for i in 0..cells {
        let lhs = profile.direct(i, 1);
        let rhs = profile.direct(i, 0) + received(i, 1);
        if lhs + TOL < rhs {
            violations.push(ConditionViolation::StrongUserGap { cell: i, lhs, rhs });
        }
    }
    for i in 0..cells {
        for l in 0..2 {
            let lhs = profile.direct(i, l);
            let rhs = received(i, l) + caused(i);
            if lhs + TOL < rhs {
                violations.push(ConditionViolation::InterferenceBudget {
                    cell: i,
                    user: l,
                    lhs,
                    rhs,
                });
            }
        }
    }
    TinOptimality {
        verdict: if violations.is_empty() {
            Verdict::Optimal
        } else {
            Verdict::Unknown
        },
        violations,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Membership {
    pub inside: bool,
    /// Every row with `lhs > rhs + tol` as `(row index, excess)`, in row order.
    pub violations: Vec<(usize, f64)>,
}

impl Membership {
    pub fn first_violation(&self) -> Option<(usize, f64)> {
        self.violations.first().copied()
    }
}

pub fn contains(region: &HalfSpaceRegion, d: &GdofTuple, tol: f64) -> Result<Membership> {
    contains_slice(region, d.as_slice(), tol)
}

pub(crate) fn contains_slice(region: &HalfSpaceRegion, d: &[f64], tol: f64) -> Result<Membership> {
    if d.len() != region.dim {
        return Err(Error::DimensionMismatch {
            what: "GDoF point",
            expected: region.dim,
            actual: d.len(),
        });
    }
    let violations: Vec<(usize, f64)> = region
        .rows
        .iter()
        .enumerate()
        .filter_map(|(idx, row)| {
            let excess = row.lhs(d) - row.rhs;
            (excess > tol).then_some((idx, excess))
        })
        .collect();
    Ok(Membership {
        inside: violations.is_empty(),
        violations,
    })
}

/// Vertices of the region (at most 3 cells, i.e. dimension 6).
///
/// Every `2K`-subset of rows with a unique intersection point is solved; the
/// points satisfying all rows within [`TOL`] are kept, deduplicated, and
/// returned in lexicographic order.
pub fn extreme_points(region: &HalfSpaceRegion) -> Result<Vec<GdofTuple>> {
    if region.dim > MAX_VERTEX_DIM {
        return Err(Error::UnsupportedSize(region.dim / 2));
    }
    Ok(vertices(region, TOL)
        .into_iter()
        .map(|v| {
            GdofTuple::from_vec_unchecked(
                v.into_iter()
                    .map(|x| if x.abs() < TOL { 0.0 } else { x })
                    .collect(),
            )
        })
        .collect())
}

/// Vertex enumeration by depth-first search over row subsets. Each level
/// appends one row to an incrementally reduced system, so linearly
/// dependent prefixes are pruned before they branch.
pub(crate) fn vertices(region: &HalfSpaceRegion, tol: f64) -> Vec<Vec<f64>> {
    let n = region.dim;
    assert!(
        n <= MAX_VERTEX_DIM,
        "vertex enumeration supports at most {MAX_VERTEX_DIM} coordinates"
    );
    let mut found: Vec<Vec<f64>> = Vec::new();
    if n == 0 {
        return found;
    }
    let rows: Vec<Dense> = region
        .rows
        .iter()
        .map(|row| {
            let mut v = [0.0; MAX_VERTEX_DIM + 1];
            v[..n].copy_from_slice(&row.coeffs);
            v[n] = row.rhs;
            v
        })
        .collect();
    let mut search = Search {
        n,
        rows: &rows,
        tol,
        basis: [[0.0; MAX_VERTEX_DIM + 1]; MAX_VERTEX_DIM],
        pivots: [usize::MAX; MAX_VERTEX_DIM],
        depth: 0,
        found: &mut found,
    };
    search.dfs(0);
    found.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    found
}

const MAX_VERTEX_DIM: usize = 6;

/// Row coefficients followed by the right-hand side.
type Dense = [f64; MAX_VERTEX_DIM + 1];

struct Search<'a> {
    n: usize,
    rows: &'a [Dense],
    tol: f64,
    basis: [Dense; MAX_VERTEX_DIM],
    pivots: [usize; MAX_VERTEX_DIM],
    depth: usize,
    found: &'a mut Vec<Vec<f64>>,
}

impl Search<'_> {
    fn dfs(&mut self, start: usize) {
        let n = self.n;
        if self.depth == n {
            self.leaf();
            return;
        }
        let remaining = n - self.depth;
        for idx in start..self.rows.len() {
            if self.rows.len() - idx < remaining {
                break;
            }
            let mut v = self.rows[idx];
            for d in 0..self.depth {
                let factor = v[self.pivots[d]];
                if factor != 0.0 {
                    for (x, b) in v[..=n].iter_mut().zip(&self.basis[d]) {
                        *x -= factor * b;
                    }
                }
            }
            let mut pivot = usize::MAX;
            let mut scale = 0.0f64;
            for (c, &x) in v[..n].iter().enumerate() {
                if !self.pivots[..self.depth].contains(&c) && x.abs() > scale.abs() {
                    pivot = c;
                    scale = x;
                }
            }
            if scale.abs() < 1e-9 {
                continue;
            }
            for x in v[..=n].iter_mut() {
                *x /= scale;
            }
            self.basis[self.depth] = v;
            self.pivots[self.depth] = pivot;
            self.depth += 1;
            self.dfs(idx + 1);
            self.depth -= 1;
        }
    }

    fn leaf(&mut self) {
        let n = self.n;
        let mut x = [0.0; MAX_VERTEX_DIM];
        for d in (0..n).rev() {
            let row = &self.basis[d];
            let pivot = self.pivots[d];
            let mut value = row[n];
            for c in 0..n {
                if c != pivot {
                    value -= row[c] * x[c];
                }
            }
            x[pivot] = value;
        }
        let x = &x[..n];
        let feasible = self.rows.iter().all(|row| {
            row[..n].iter().zip(x).map(|(a, b)| a * b).sum::<f64>() <= row[n] + self.tol
        });
        if feasible
            && !self
                .found
                .iter()
                .any(|v| v.iter().zip(x).all(|(a, b)| (a - b).abs() <= 1e-7))
        {
            self.found.push(x.to_vec());
        }
    }
}

#[derive(Serialize)]
struct RowDocument<'a> {
    coeffs: &'a [f64],
    rhs: f64,
    tag: &'static str,
    indices: serde_json::Value,
}

/// Machine-readable export: rows in region order with 1-based indices, the
/// profile hash and the optimality verdict.
pub fn export_region(
    profile: &NetworkProfile,
    region: &HalfSpaceRegion,
    optimality: &TinOptimality,
) -> String {
    let rows: Vec<RowDocument> = region
        .rows
        .iter()
        .map(|row| RowDocument {
            coeffs: &row.coeffs,
            rhs: row.rhs,
            tag: row.tag.name(),
            indices: match &row.tag {
                RowTag::Nonneg { cell, user } | RowTag::PerCell { cell, user } => {
                    serde_json::json!({ "cell": cell + 1, "user": user + 1 })
                }
                RowTag::Cyclic { sequence, users } => serde_json::json!({
                    "cells": sequence.cells().iter().map(|c| c + 1).collect::<Vec<_>>(),
                    "users": users.iter().map(|u| u + 1).collect::<Vec<_>>(),
                }),
            },
        })
        .collect();
    let note = match optimality.verdict {
        Verdict::Optimal => "optimal GDoF region",
        Verdict::Unknown => "outer structure only under TIN-optimality conditions",
    };
    let doc = serde_json::json!({
        "K": profile.cells(),
        "dim": region.dim,
        "profile_hash": profile_hash(profile),
        "verdict": optimality.verdict,
        "note": note,
        "rows": rows,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("rows are finite");
    text.push('\n');
    text
}
