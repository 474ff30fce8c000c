//! LP-relaxation decoders over the code polytope: the memoryless-channel
//! objective and the Chebyshev-radius objective, plus the per-column argmax
//! rounding and the integrality certificate.
//!
//! An integral optimum is provably the maximum-likelihood codeword, so a
//! passing certificate makes the decode exact; fractional optima are rounded
//! and flagged.

use crate::channel::CostMatrix;
use crate::codes::CodeSpec;
use crate::error::{Error, Result};
use crate::lp::{solve_lp, LinearProgram, LpStatus, Relation};
use crate::multiperm::Multipermutation;
use crate::polytope::RelaxedMatrix;

/// Integrality tolerance for the certificate.
pub const EPS_INT: f64 = 1e-6;

/// Decoder output. `decoded` is a 1-based symbol word from per-column argmax
/// rounding; it may violate the multiplicity counts, in which case
/// `decoded_valid` is false and the word is reported rather than repaired.
#[derive(Debug, Clone)]
pub struct DecodeResult {
    pub relaxed: RelaxedMatrix,
    pub objective: f64,
    pub certificate: bool,
    pub decoded: Vec<usize>,
    pub decoded_valid: bool,
    /// Optimal Chebyshev radius, for the distance decoder only.
    pub delta: Option<f64>,
}

/// The feasible region shared by both decoders: variables are the `m * n`
/// entries of `X` in column-major `vec(X)` order, constrained by unit column
/// sums, row sums `r_i`, `[0, 1]` bounds and one row per spec constraint.
/// The objective is left at zero.
pub fn build_polytope_rows(spec: &CodeSpec) -> Result<LinearProgram> {
    let m = spec.num_symbols();
    let n = spec.block_length();
    let var = |i: usize, j: usize| j * m + i;

    let mut lp = LinearProgram::new(m * n);
    for j in 0..n {
        let terms: Vec<(usize, f64)> = (0..m).map(|i| (var(i, j), 1.0)).collect();
        lp.add_row(terms, Relation::Eq, 1.0)?;
    }
    for (i, &count) in spec.multiplicity().counts().iter().enumerate() {
        let terms: Vec<(usize, f64)> = (0..n).map(|j| (var(i, j), 1.0)).collect();
        lp.add_row(terms, Relation::Eq, count as f64)?;
    }
    for constraint in spec.constraints() {
        let terms: Vec<(usize, f64)> = constraint
            .terms()
            .map(|(i, j, coef)| (var(i, j), coef as f64))
            .collect();
        lp.add_row(terms, constraint.relation(), constraint.rhs() as f64)?;
    }
    for v in 0..m * n {
        lp.set_bounds(v, 0.0, 1.0)?;
    }
    Ok(lp)
}

/// Minimizes `Gamma(y) . vec(X)` over the code polytope.
pub fn decode_memoryless(spec: &CodeSpec, gamma: &CostMatrix) -> Result<DecodeResult> {
    if gamma.num_symbols() != spec.num_symbols() || gamma.num_positions() != spec.block_length() {
        return Err(Error::ShapeMismatch {
            expected_rows: spec.num_symbols(),
            expected_cols: spec.block_length(),
            rows: gamma.num_symbols(),
            cols: gamma.num_positions(),
        });
    }
    let mut lp = build_polytope_rows(spec)?;
    lp.set_objective(gamma.objective_vector())?;
    let solution = solve_and_check(&lp)?;
    finish(spec, &solution.values, solution.objective_value, None)
}

/// Minimizes the Chebyshev radius `delta` subject to
/// `-delta <= t X - y <= delta` over the code polytope, then rounds.
pub fn decode_chebyshev(spec: &CodeSpec, y: &[f64]) -> Result<DecodeResult> {
    let m = spec.num_symbols();
    let n = spec.block_length();
    if y.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: y.len(),
        });
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(
            "received word must be finite".into(),
        ));
    }
    let var = |i: usize, j: usize| j * m + i;
    let delta_var = m * n;

    let base = build_polytope_rows(spec)?;
    let mut lp = LinearProgram::new(m * n + 1);
    for row in base.rows() {
        lp.add_row(row.terms.clone(), row.relation, row.rhs)?;
    }
    for v in 0..m * n {
        lp.set_bounds(v, 0.0, 1.0)?;
    }
    lp.set_bounds(delta_var, 0.0, f64::INFINITY)?;
    lp.set_objective_term(delta_var, 1.0)?;

    let levels = spec.initial_vector().levels();
    for (j, &received) in y.iter().enumerate() {
        let mut upper: Vec<(usize, f64)> = (0..m).map(|i| (var(i, j), levels[i])).collect();
        upper.push((delta_var, -1.0));
        lp.add_row(upper, Relation::Le, received)?;
        let mut lower: Vec<(usize, f64)> = (0..m).map(|i| (var(i, j), -levels[i])).collect();
        lower.push((delta_var, -1.0));
        lp.add_row(lower, Relation::Le, -received)?;
    }

    let solution = solve_and_check(&lp)?;
    let delta = solution.values[delta_var];
    finish(spec, &solution.values[..m * n], delta, Some(delta))
}

fn solve_and_check(lp: &LinearProgram) -> Result<crate::lp::LpSolution> {
    let solution = solve_lp(lp)?;
    match solution.status {
        LpStatus::Optimal => Ok(solution),
        LpStatus::Infeasible => Err(Error::InfeasibleProgram),
        LpStatus::Unbounded => Err(Error::UnboundedProgram),
    }
}

fn finish(
    spec: &CodeSpec,
    flat_column_major: &[f64],
    objective: f64,
    delta: Option<f64>,
) -> Result<DecodeResult> {
    let m = spec.num_symbols();
    let n = spec.block_length();
    let mut row_major = vec![0.0; m * n];
    for j in 0..n {
        for i in 0..m {
            row_major[i * n + j] = flat_column_major[j * m + i];
        }
    }
    let relaxed = RelaxedMatrix::from_flat(row_major, spec.multiplicity().clone())?;
    let certificate = certificate_check(&relaxed, EPS_INT);
    let (decoded, decoded_valid) = round_solution(&relaxed);
    if certificate {
        // An integral optimum must be an exact codeword.
        let word = Multipermutation::new(decoded.clone(), spec.multiplicity())
            .map_err(|e| Error::SolverFailure(format!("certified decode invalid: {e}")))?;
        let x = word.to_matrix(spec.multiplicity())?;
        if !crate::codes::satisfies(&x, spec)? {
            return Err(Error::SolverFailure(
                "certified decode violates the code constraints".into(),
            ));
        }
    }
    Ok(DecodeResult {
        relaxed,
        objective,
        certificate,
        decoded,
        decoded_valid,
        delta,
    })
}

/// Per-column argmax with ties broken toward the smallest row index.
/// Returns the 1-based symbol word and whether its symbol counts match the
/// multiplicity vector.
pub fn round_solution(z: &RelaxedMatrix) -> (Vec<usize>, bool) {
    let m = z.num_rows();
    let n = z.num_cols();
    let mut decoded = Vec::with_capacity(n);
    for j in 0..n {
        let mut best_row = 0;
        let mut best_value = z.entry(0, j);
        for i in 1..m {
            if z.entry(i, j) > best_value {
                best_value = z.entry(i, j);
                best_row = i;
            }
        }
        decoded.push(best_row + 1);
    }
    let mut counts = vec![0usize; m];
    for &s in &decoded {
        counts[s - 1] += 1;
    }
    let valid = counts == z.multiplicity().counts();
    (decoded, valid)
}

/// True iff every entry is within `eps` of 0 or 1.
pub fn certificate_check(z: &RelaxedMatrix, eps: f64) -> bool {
    z.as_flat()
        .iter()
        .all(|&v| v.abs().min((v - 1.0).abs()) <= eps)
}
