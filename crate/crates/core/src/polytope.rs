//! The convex hull of the multipermutation matrices: membership testing and
//! a constructive decomposition of any feasible point into a convex
//! combination of multipermutation matrices.
//!
//! A feasible `Z` is expanded into a doubly stochastic `Q` by spreading row
//! `i` of `Z` over the `r_i` sorted positions of symbol `i`, `Q` is peeled
//! into permutation matrices greedily (perfect matching on the positive
//! support, subtract the minimum matched weight, repeat), and each
//! permutation is folded back through the sorted block matrix.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::multiperm::{
    MultiplicityVector, Multipermutation, MultipermutationMatrix, PermutationMatrix,
};

/// Feasibility tolerance for exactly constructed inputs.
pub const EPS_FEAS_EXACT: f64 = 1e-9;
/// Feasibility tolerance for matrices coming out of a floating-point LP.
pub const EPS_FEAS_LP: f64 = 1e-6;

/// An `m x n` real matrix intended to satisfy the polytope conditions:
/// unit column sums, row sums `r_i` and entries in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct RelaxedMatrix {
    data: Vec<f64>, // row-major
    r: MultiplicityVector,
}

impl RelaxedMatrix {
    /// Shape-checks only; see [`membership_check`] for feasibility.
    pub fn new(rows: Vec<Vec<f64>>, r: MultiplicityVector) -> Result<Self> {
        let m = r.num_symbols();
        let n = r.block_length();
        if rows.len() != m || rows.iter().any(|row| row.len() != n) {
            return Err(Error::ShapeMismatch {
                expected_rows: m,
                expected_cols: n,
                rows: rows.len(),
                cols: rows.first().map_or(0, |row| row.len()),
            });
        }
        let data = rows.into_iter().flatten().collect();
        Ok(Self { data, r })
    }

    /// Builds from a flat row-major buffer of length `m * n`.
    pub fn from_flat(data: Vec<f64>, r: MultiplicityVector) -> Result<Self> {
        if data.len() != r.num_symbols() * r.block_length() {
            return Err(Error::LengthMismatch {
                expected: r.num_symbols() * r.block_length(),
                got: data.len(),
            });
        }
        Ok(Self { data, r })
    }

    pub fn from_matrix(x: &MultipermutationMatrix) -> Self {
        Self {
            data: x.to_dense(),
            r: x.multiplicity().clone(),
        }
    }

    pub fn num_rows(&self) -> usize {
        self.r.num_symbols()
    }

    pub fn num_cols(&self) -> usize {
        self.r.block_length()
    }

    pub fn multiplicity(&self) -> &MultiplicityVector {
        &self.r
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.num_cols() + j]
    }

    pub fn as_flat(&self) -> &[f64] {
        &self.data
    }

    /// `t Z` for a row vector of levels `t`.
    pub fn modulate(&self, t: &[f64]) -> Result<Vec<f64>> {
        if t.len() != self.num_rows() {
            return Err(Error::LengthMismatch {
                expected: self.num_rows(),
                got: t.len(),
            });
        }
        let n = self.num_cols();
        Ok((0..n)
            .map(|j| (0..self.num_rows()).map(|i| t[i] * self.entry(i, j)).sum())
            .collect())
    }
}

/// An `n x n` nonnegative matrix with unit row and column sums.
#[derive(Debug, Clone, PartialEq)]
pub struct DoublyStochasticMatrix {
    data: Vec<f64>, // row-major
    size: usize,
}

impl DoublyStochasticMatrix {
    pub fn new(rows: Vec<Vec<f64>>, eps: f64) -> Result<Self> {
        let size = rows.len();
        if rows.iter().any(|row| row.len() != size) {
            return Err(Error::ShapeMismatch {
                expected_rows: size,
                expected_cols: size,
                rows: size,
                cols: rows.iter().map(|r| r.len()).max().unwrap_or(0),
            });
        }
        let mat = Self {
            data: rows.into_iter().flatten().collect(),
            size,
        };
        mat.validate(eps)?;
        Ok(mat)
    }

    fn validate(&self, eps: f64) -> Result<()> {
        for (idx, &v) in self.data.iter().enumerate() {
            if !v.is_finite() || v < -eps {
                return Err(Error::NotInPolytope(format!(
                    "entry ({}, {}) = {v} is negative",
                    idx / self.size + 1,
                    idx % self.size + 1
                )));
            }
        }
        for i in 0..self.size {
            let row: f64 = self.data[i * self.size..(i + 1) * self.size].iter().sum();
            if (row - 1.0).abs() > eps {
                return Err(Error::NotInPolytope(format!(
                    "row {} sums to {row}, expected 1",
                    i + 1
                )));
            }
        }
        for j in 0..self.size {
            let col: f64 = (0..self.size).map(|i| self.data[i * self.size + j]).sum();
            if (col - 1.0).abs() > eps {
                return Err(Error::NotInPolytope(format!(
                    "column {} sums to {col}, expected 1",
                    j + 1
                )));
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.size + j]
    }
}

/// Worst residuals of the three polytope conditions at a given matrix.
#[derive(Debug, Clone)]
pub struct MembershipReport {
    pub eps: f64,
    /// Worst `|sum_i Z_ij - 1|` over columns.
    pub column_sum_residual: f64,
    /// Worst `|sum_j Z_ij - r_i|` over rows.
    pub row_sum_residual: f64,
    /// Worst distance of an entry outside `[0, 1]`.
    pub range_residual: f64,
}

impl MembershipReport {
    pub fn is_member(&self) -> bool {
        self.column_sum_residual <= self.eps
            && self.row_sum_residual <= self.eps
            && self.range_residual <= self.eps
    }

    /// Human-readable list of violated conditions with their residuals.
    pub fn violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        if self.column_sum_residual > self.eps {
            out.push(format!(
                "column sums off by {:.3e}",
                self.column_sum_residual
            ));
        }
        if self.row_sum_residual > self.eps {
            out.push(format!("row sums off by {:.3e}", self.row_sum_residual));
        }
        if self.range_residual > self.eps {
            out.push(format!(
                "entries outside [0,1] by {:.3e}",
                self.range_residual
            ));
        }
        out
    }
}

impl std::fmt::Display for MembershipReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_member() {
            write!(f, "feasible within {:.1e}", self.eps)
        } else {
            write!(f, "{}", self.violations().join("; "))
        }
    }
}

/// Checks the three polytope conditions within `eps` and reports the worst
/// residual of each.
pub fn membership_check(z: &RelaxedMatrix, eps: f64) -> MembershipReport {
    let (m, n) = (z.num_rows(), z.num_cols());
    let mut column_sum_residual: f64 = 0.0;
    for j in 0..n {
        let sum: f64 = (0..m).map(|i| z.entry(i, j)).sum();
        column_sum_residual = column_sum_residual.max((sum - 1.0).abs());
    }
    let mut row_sum_residual: f64 = 0.0;
    for i in 0..m {
        let sum: f64 = (0..n).map(|j| z.entry(i, j)).sum();
        row_sum_residual = row_sum_residual.max((sum - z.multiplicity().counts()[i] as f64).abs());
    }
    let mut range_residual: f64 = 0.0;
    for &v in z.as_flat() {
        if !v.is_finite() {
            range_residual = f64::INFINITY;
        } else {
            range_residual = range_residual.max(-v).max(v - 1.0);
        }
    }
    range_residual = range_residual.max(0.0);
    MembershipReport {
        eps,
        column_sum_residual,
        row_sum_residual,
        range_residual,
    }
}

/// The block "staircase" matrix of the sorted multipermutation: `X_ik = 1`
/// iff `k` lies in the sorted positions `I_i` of symbol `i`.
pub fn canonical_sorted_matrix(r: &MultiplicityVector) -> MultipermutationMatrix {
    Multipermutation::sorted(r)
        .to_matrix(r)
        .expect("sorted word always matches its multiplicity")
}

/// Expands a feasible `Z` into the doubly stochastic `Q` with
/// `Q_kj = Z_ij / r_i` for every sorted position `k` of symbol `i`, so that
/// `canonical_sorted_matrix(r) * Q = Z`.
pub fn stochastic_from_relaxed(z: &RelaxedMatrix, eps: f64) -> Result<DoublyStochasticMatrix> {
    let report = membership_check(z, eps);
    if !report.is_member() {
        return Err(Error::NotInPolytope(report.to_string()));
    }
    let n = z.num_cols();
    let mut rows = Vec::with_capacity(n);
    for (i, positions) in z.multiplicity().index_sets().into_iter().enumerate() {
        let scale = 1.0 / z.multiplicity().counts()[i] as f64;
        let row: Vec<f64> = (0..n).map(|j| scale * z.entry(i, j)).collect();
        for _ in positions {
            rows.push(row.clone());
        }
    }
    let q = DoublyStochasticMatrix::new(rows, eps.max(EPS_FEAS_EXACT) * n as f64)?;

    // Both post-conditions hold by construction; verify the product anyway.
    let x = canonical_sorted_matrix(z.multiplicity());
    for i in 0..z.num_rows() {
        for j in 0..n {
            let prod: f64 = (0..n)
                .filter(|&k| x.entry(i, k) == 1)
                .map(|k| q.entry(k, j))
                .sum();
            if (prod - z.entry(i, j)).abs() > eps.max(EPS_FEAS_EXACT) * n as f64 {
                return Err(Error::SolverFailure(format!(
                    "expansion failed to reproduce entry ({}, {})",
                    i + 1,
                    j + 1
                )));
            }
        }
    }
    Ok(q)
}

/// A weighted list of 0/1 matrices with positive weights summing to one.
#[derive(Debug, Clone)]
pub struct ConvexCombination<M> {
    terms: Vec<(f64, M)>,
}

impl<M> ConvexCombination<M> {
    pub fn new(terms: Vec<(f64, M)>, eps: f64) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidParameter("empty convex combination".into()));
        }
        if terms.iter().any(|&(w, _)| !w.is_finite() || w <= 0.0 || w > 1.0 + eps) {
            return Err(Error::InvalidParameter(
                "convex weights must lie in (0, 1]".into(),
            ));
        }
        let total: f64 = terms.iter().map(|&(w, _)| w).sum();
        if (total - 1.0).abs() > eps {
            return Err(Error::InvalidParameter(format!(
                "convex weights sum to {total}, expected 1"
            )));
        }
        Ok(Self { terms })
    }

    pub fn terms(&self) -> &[(f64, M)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.terms.iter().map(|&(w, _)| w).sum()
    }
}

impl ConvexCombination<PermutationMatrix> {
    /// Dense `sum_h alpha_h P_h`, row-major.
    pub fn recombine(&self) -> Vec<Vec<f64>> {
        let n = self.terms[0].1.size();
        let mut out = vec![vec![0.0; n]; n];
        for (w, p) in &self.terms {
            for j in 0..n {
                out[p.col_to_row()[j]][j] += w;
            }
        }
        out
    }
}

impl ConvexCombination<MultipermutationMatrix> {
    /// Dense `sum_h alpha_h X_h` as a relaxed matrix.
    pub fn recombine(&self) -> Result<RelaxedMatrix> {
        let r = self.terms[0].1.multiplicity().clone();
        let (m, n) = (r.num_symbols(), r.block_length());
        let mut data = vec![0.0; m * n];
        for (w, x) in &self.terms {
            if x.multiplicity() != &r {
                return Err(Error::InvalidParameter(
                    "mixed multiplicities in combination".into(),
                ));
            }
            for j in 0..n {
                data[x.column_support(j) * n + j] += w;
            }
        }
        RelaxedMatrix::from_flat(data, r)
    }
}

/// Deterministic Kuhn matching: rows are processed in index order and the
/// augmenting search scans columns in increasing index. Returns the
/// column-to-row assignment of a perfect matching on `support`, if one
/// exists.
fn perfect_matching(size: usize, support: impl Fn(usize, usize) -> bool) -> Option<Vec<usize>> {
    let mut col_owner: Vec<Option<usize>> = vec![None; size];

    fn augment(
        row: usize,
        size: usize,
        support: &impl Fn(usize, usize) -> bool,
        visited: &mut [bool],
        col_owner: &mut [Option<usize>],
    ) -> bool {
        for col in 0..size {
            if !support(row, col) || visited[col] {
                continue;
            }
            visited[col] = true;
            let free = match col_owner[col] {
                None => true,
                Some(owner) => augment(owner, size, support, visited, col_owner),
            };
            if free {
                col_owner[col] = Some(row);
                return true;
            }
        }
        false
    }

    for row in 0..size {
        let mut visited = vec![false; size];
        if !augment(row, size, &support, &mut visited, &mut col_owner) {
            return None;
        }
    }
    Some(col_owner.into_iter().map(|o| o.expect("perfect")).collect())
}

/// Greedy Birkhoff peeling of a doubly stochastic matrix into permutation
/// matrices. Entries at or below `eps` are clamped to zero up front; the
/// remaining residual after convergence stays below `eps` entrywise.
pub fn birkhoff_decompose(
    q: &DoublyStochasticMatrix,
    eps: f64,
) -> Result<ConvexCombination<PermutationMatrix>> {
    let n = q.size();
    let mut residual: Vec<f64> = (0..n * n)
        .map(|idx| {
            let v = q.entry(idx / n, idx % n);
            if v.abs() <= eps {
                0.0
            } else {
                v
            }
        })
        .collect();

    let mut terms: Vec<(f64, PermutationMatrix)> = Vec::new();
    // Hard stop: every iteration zeroes at least one support entry exactly.
    let max_iterations = n * n + 2;
    for _ in 0..max_iterations {
        let max_entry = residual.iter().cloned().fold(0.0, f64::max);
        if max_entry <= eps {
            break;
        }
        let matching = match perfect_matching(n, |i, j| residual[i * n + j] > 0.0) {
            Some(m) => m,
            None => {
                return Err(Error::NoPerfectMatching(format!(
                    "residual mass {max_entry:.3e} left without a perfect matching; \
                     input was not doubly stochastic within {eps:.1e}"
                )));
            }
        };
        let weight = matching
            .iter()
            .enumerate()
            .map(|(col, &row)| residual[row * n + col])
            .fold(f64::INFINITY, f64::min);
        for (col, &row) in matching.iter().enumerate() {
            let v = &mut residual[row * n + col];
            *v = if *v <= weight { 0.0 } else { *v - weight };
        }
        terms.push((weight, PermutationMatrix::from_col_map(matching)?));
    }

    let leftover = residual.iter().cloned().fold(0.0, f64::max);
    if leftover > eps {
        return Err(Error::SolverFailure(format!(
            "decomposition stalled with residual {leftover:.3e}"
        )));
    }
    ConvexCombination::new(terms, (eps * n as f64).max(EPS_FEAS_EXACT))
}

/// Decomposes a feasible `Z` into a convex combination of multipermutation
/// matrices: expand to `Q`, peel permutations, fold each through the sorted
/// block matrix and merge duplicate terms.
pub fn decompose_relaxed(
    z: &RelaxedMatrix,
    eps: f64,
) -> Result<ConvexCombination<MultipermutationMatrix>> {
    let report = membership_check(z, eps);
    if !report.is_member() {
        return Err(Error::NotInPolytope(report.to_string()));
    }
    let r = z.multiplicity().clone();
    let q = stochastic_from_relaxed(z, eps)?;
    let peeled = birkhoff_decompose(&q, eps)?;

    // Position -> symbol of the sorted word; X P has symbol(sigma(j)) in
    // column j.
    let mut symbol_of_position = vec![0usize; r.block_length()];
    for (i, positions) in r.index_sets().into_iter().enumerate() {
        for k in positions {
            symbol_of_position[k] = i + 1;
        }
    }

    let mut merged: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    for (w, p) in peeled.terms() {
        let word: Vec<usize> = (0..r.block_length())
            .map(|j| symbol_of_position[p.col_to_row()[j]])
            .collect();
        *merged.entry(word).or_insert(0.0) += w;
    }

    let mut terms = Vec::with_capacity(merged.len());
    for (word, weight) in merged {
        let x = Multipermutation::new(word, &r)?.to_matrix(&r)?;
        terms.push((weight, x));
    }
    ConvexCombination::new(terms, (eps * r.block_length() as f64).max(EPS_FEAS_EXACT))
}
