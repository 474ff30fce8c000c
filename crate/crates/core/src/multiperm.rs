//! Multipermutations, multipermutation matrices and the distances between them.
//!
//! A multipermutation is a permutation of the multiset that contains symbol
//! `i` exactly `r_i` times. It is represented equivalently by an `m x n` 0/1
//! matrix with unit column sums and row sums `r_i`; the two forms are
//! bijective once an initial vector with distinct entries is fixed.

use std::fmt;
use std::ops::Range;

use crate::error::{Error, Result};

/// Per-symbol repetition counts `r = (r_1, ..., r_m)` with `n = sum r_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultiplicityVector {
    counts: Vec<usize>,
    n: usize,
}

impl MultiplicityVector {
    pub fn new(counts: Vec<usize>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::InvalidMultiplicity("no symbols".into()));
        }
        if let Some(i) = counts.iter().position(|&r| r == 0) {
            return Err(Error::InvalidMultiplicity(format!(
                "multiplicity of symbol {} is zero",
                i + 1
            )));
        }
        let n = counts.iter().sum();
        Ok(Self { counts, n })
    }

    /// Constant multiplicity `(r, ..., r)` of length `m`.
    pub fn uniform(r: usize, m: usize) -> Result<Self> {
        Self::new(vec![r; m])
    }

    /// Number of distinct symbols.
    pub fn num_symbols(&self) -> usize {
        self.counts.len()
    }

    /// Block length `n = sum r_i`.
    pub fn block_length(&self) -> usize {
        self.n
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    /// Consecutive position intervals `I_i` (0-based, half-open), where the
    /// sorted multipermutation carries symbol `i` exactly on `I_i`.
    pub fn index_sets(&self) -> Vec<Range<usize>> {
        let mut sets = Vec::with_capacity(self.counts.len());
        let mut start = 0;
        for &r in &self.counts {
            sets.push(start..start + r);
            start += r;
        }
        sets
    }

    /// Number of distinct multipermutations `n! / prod(r_i!)`, or an error on
    /// overflow.
    pub fn multiset_count(&self) -> Result<u128> {
        // Multiply n!/(prod r_i!) incrementally as a product of binomials to
        // keep intermediates integral.
        let mut total: u128 = 1;
        let mut remaining = self.n;
        for &r in &self.counts {
            total = total
                .checked_mul(binomial(remaining, r)?)
                .ok_or_else(|| Error::Overflow("multiset count".into()))?;
            remaining -= r;
        }
        Ok(total)
    }
}

fn binomial(n: usize, k: usize) -> Result<u128> {
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc
            .checked_mul((n - i) as u128)
            .ok_or_else(|| Error::Overflow("binomial".into()))?;
        acc /= (i + 1) as u128;
    }
    Ok(acc)
}

/// The `m` distinct modulation levels `t = (t_1, ..., t_m)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InitialVector {
    levels: Vec<f64>,
}

impl InitialVector {
    pub fn new(levels: Vec<f64>) -> Result<Self> {
        if levels.is_empty() {
            return Err(Error::InvalidParameter("empty initial vector".into()));
        }
        if levels.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "initial vector entries must be finite".into(),
            ));
        }
        for i in 0..levels.len() {
            for j in i + 1..levels.len() {
                if levels[i] == levels[j] {
                    return Err(Error::DuplicateInitialEntries);
                }
            }
        }
        Ok(Self { levels })
    }

    /// The canonical levels `(1, 2, ..., m)`.
    pub fn ramp(m: usize) -> Self {
        Self {
            levels: (1..=m).map(|v| v as f64).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    pub fn levels(&self) -> &[f64] {
        &self.levels
    }

    pub fn level(&self, symbol: usize) -> f64 {
        self.levels[symbol - 1]
    }
}

/// A permutation of the multiset induced by a multiplicity vector. Symbols
/// are 1-based: entry `j` holds a value in `1..=m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Multipermutation {
    symbols: Vec<usize>,
}

impl Multipermutation {
    /// Validates that symbol `i` occurs exactly `r_i` times.
    pub fn new(symbols: Vec<usize>, r: &MultiplicityVector) -> Result<Self> {
        let m = r.num_symbols();
        if symbols.len() != r.block_length() {
            return Err(Error::LengthMismatch {
                expected: r.block_length(),
                got: symbols.len(),
            });
        }
        let mut seen = vec![0usize; m];
        for &s in &symbols {
            if s == 0 || s > m {
                return Err(Error::SymbolCountMismatch(format!(
                    "symbol {s} outside 1..={m}"
                )));
            }
            seen[s - 1] += 1;
        }
        if seen != r.counts() {
            return Err(Error::SymbolCountMismatch(format!(
                "counts {seen:?} differ from multiplicities {:?}",
                r.counts()
            )));
        }
        Ok(Self { symbols })
    }

    /// The sorted multipermutation `(1,...,1,2,...,2,...)`.
    pub fn sorted(r: &MultiplicityVector) -> Self {
        let mut symbols = Vec::with_capacity(r.block_length());
        for (i, &count) in r.counts().iter().enumerate() {
            symbols.extend(std::iter::repeat_n(i + 1, count));
        }
        Self { symbols }
    }

    pub fn symbols(&self) -> &[usize] {
        &self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// The corresponding matrix with `X_ij = 1` iff `x_j = i`.
    pub fn to_matrix(&self, r: &MultiplicityVector) -> Result<MultipermutationMatrix> {
        MultipermutationMatrix::from_multipermutation(self, r)
    }

    /// The transmitted word `t * X` without building the matrix.
    pub fn modulate(&self, t: &InitialVector) -> Result<Vec<f64>> {
        let m = t.len();
        if self.symbols.iter().any(|&s| s > m) {
            return Err(Error::LengthMismatch {
                expected: m,
                got: *self.symbols.iter().max().unwrap_or(&0),
            });
        }
        Ok(self.symbols.iter().map(|&s| t.level(s)).collect())
    }
}

impl fmt::Display for Multipermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (j, s) in self.symbols.iter().enumerate() {
            if j > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

/// An `m x n` 0/1 matrix with unit column sums and row sums `r_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MultipermutationMatrix {
    data: Vec<u8>, // row-major
    rows: usize,
    cols: usize,
    r: MultiplicityVector,
}

impl MultipermutationMatrix {
    /// Validates the defining invariants: entries in {0,1}, each column sums
    /// to 1 and row `i` sums to `r_i`.
    pub fn new(rows: Vec<Vec<u8>>, r: MultiplicityVector) -> Result<Self> {
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
        let mut data = Vec::with_capacity(m * n);
        for row in &rows {
            for &v in row {
                if v > 1 {
                    return Err(Error::InvalidMatrix(format!("entry {v} not in {{0,1}}")));
                }
                data.push(v);
            }
        }
        let mat = Self { data, rows: m, cols: n, r };
        mat.validate()?;
        Ok(mat)
    }

    fn validate(&self) -> Result<()> {
        for j in 0..self.cols {
            let sum: usize = (0..self.rows).map(|i| self.data[i * self.cols + j] as usize).sum();
            if sum != 1 {
                return Err(Error::InvalidMatrix(format!(
                    "column {} sums to {sum}, expected 1",
                    j + 1
                )));
            }
        }
        for i in 0..self.rows {
            let sum: usize = self.data[i * self.cols..(i + 1) * self.cols]
                .iter()
                .map(|&v| v as usize)
                .sum();
            if sum != self.r.counts()[i] {
                return Err(Error::InvalidMatrix(format!(
                    "row {} sums to {sum}, expected {}",
                    i + 1,
                    self.r.counts()[i]
                )));
            }
        }
        Ok(())
    }

    /// Builds the unique matrix with `X_ij = 1` iff `x_j` is symbol `i`.
    pub fn from_multipermutation(x: &Multipermutation, r: &MultiplicityVector) -> Result<Self> {
        let checked = Multipermutation::new(x.symbols().to_vec(), r)?;
        let m = r.num_symbols();
        let n = r.block_length();
        let mut data = vec![0u8; m * n];
        for (j, &s) in checked.symbols().iter().enumerate() {
            data[(s - 1) * n + j] = 1;
        }
        Ok(Self { data, rows: m, cols: n, r: r.clone() })
    }

    pub fn num_rows(&self) -> usize {
        self.rows
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn multiplicity(&self) -> &MultiplicityVector {
        &self.r
    }

    pub fn entry(&self, i: usize, j: usize) -> u8 {
        self.data[i * self.cols + j]
    }

    /// Row index of the single 1 in column `j`.
    pub fn column_support(&self, j: usize) -> usize {
        (0..self.rows)
            .find(|&i| self.data[i * self.cols + j] == 1)
            .expect("every column holds exactly one 1")
    }

    /// Reads the multipermutation back, i.e. multiplies by `(1, ..., m)`.
    pub fn to_multipermutation(&self) -> Multipermutation {
        let symbols = (0..self.cols).map(|j| self.column_support(j) + 1).collect();
        Multipermutation { symbols }
    }

    /// The transmitted word `t * X`.
    pub fn modulate(&self, t: &InitialVector) -> Result<Vec<f64>> {
        if t.len() != self.rows {
            return Err(Error::LengthMismatch {
                expected: self.rows,
                got: t.len(),
            });
        }
        Ok((0..self.cols)
            .map(|j| t.level(self.column_support(j) + 1))
            .collect())
    }

    /// Entries as real values, row-major.
    pub fn to_dense(&self) -> Vec<f64> {
        self.data.iter().map(|&v| v as f64).collect()
    }

    /// Frobenius inner product `<X, Y> = sum_ij X_ij Y_ij`.
    pub fn inner_product(&self, other: &Self) -> Result<usize> {
        check_same_shape(self, other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .filter(|(&a, &b)| a == 1 && b == 1)
            .count())
    }
}

fn fmt_binary_matrix(
    f: &mut fmt::Formatter<'_>,
    rows: usize,
    cols: usize,
    entry: impl Fn(usize, usize) -> u8,
) -> fmt::Result {
    for i in 0..rows {
        for j in 0..cols {
            if j > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", entry(i, j))?;
        }
        if i + 1 < rows {
            writeln!(f)?;
        }
    }
    Ok(())
}

impl fmt::Display for MultipermutationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_binary_matrix(f, self.rows, self.cols, |i, j| self.entry(i, j))
    }
}

/// An `n x n` 0/1 matrix with exactly one 1 per row and per column, stored as
/// the map from column index to the row holding its 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PermutationMatrix {
    col_to_row: Vec<usize>,
}

impl PermutationMatrix {
    /// `col_to_row[j]` is the row of the 1 in column `j`.
    pub fn from_col_map(col_to_row: Vec<usize>) -> Result<Self> {
        let n = col_to_row.len();
        let mut seen = vec![false; n];
        for &i in &col_to_row {
            if i >= n {
                return Err(Error::InvalidPermutation(format!("row index {i} >= {n}")));
            }
            if seen[i] {
                return Err(Error::InvalidPermutation(format!("row {i} used twice")));
            }
            seen[i] = true;
        }
        Ok(Self { col_to_row })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            col_to_row: (0..n).collect(),
        }
    }

    pub fn size(&self) -> usize {
        self.col_to_row.len()
    }

    pub fn num_rows(&self) -> usize {
        self.size()
    }

    pub fn num_cols(&self) -> usize {
        self.size()
    }

    pub fn entry(&self, i: usize, j: usize) -> u8 {
        u8::from(self.col_to_row[j] == i)
    }

    pub fn col_to_row(&self) -> &[usize] {
        &self.col_to_row
    }

    /// Right action on a row vector: `(s P)_j = s_{row(j)}`.
    pub fn permute_row_vector(&self, s: &[f64]) -> Result<Vec<f64>> {
        if s.len() != self.size() {
            return Err(Error::LengthMismatch {
                expected: self.size(),
                got: s.len(),
            });
        }
        Ok(self.col_to_row.iter().map(|&i| s[i]).collect())
    }

    /// Reinterprets the permutation matrix as a multipermutation matrix with
    /// all multiplicities equal to one.
    pub fn to_multipermutation_matrix(&self) -> MultipermutationMatrix {
        let n = self.size();
        let r = MultiplicityVector::new(vec![1; n]).expect("unit multiplicities are valid");
        let mut data = vec![0u8; n * n];
        for (j, &i) in self.col_to_row.iter().enumerate() {
            data[i * n + j] = 1;
        }
        MultipermutationMatrix { data, rows: n, cols: n, r }
    }
}

impl fmt::Display for PermutationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_binary_matrix(f, self.size(), self.size(), |i, j| self.entry(i, j))
    }
}

fn check_same_shape(a: &MultipermutationMatrix, b: &MultipermutationMatrix) -> Result<()> {
    if a.rows != b.rows || a.cols != b.cols {
        return Err(Error::ShapeMismatch {
            expected_rows: a.rows,
            expected_cols: a.cols,
            rows: b.rows,
            cols: b.cols,
        });
    }
    Ok(())
}

/// Number of positions where the two words differ.
pub fn hamming_distance<T: PartialEq>(x: &[T], y: &[T]) -> Result<usize> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    Ok(x.iter().zip(y).filter(|(a, b)| a != b).count())
}

/// Number of entries where the two matrices disagree; always twice the
/// Hamming distance of the underlying words.
pub fn matrix_hamming_distance(
    x: &MultipermutationMatrix,
    y: &MultipermutationMatrix,
) -> Result<usize> {
    check_same_shape(x, y)?;
    Ok(x.data.iter().zip(&y.data).filter(|(a, b)| a != b).count())
}

/// Matrix Hamming distance computed through the Frobenius inner product:
/// each word disagreement contributes one 1 of `X` off the support of `Y`
/// and vice versa, so the distance equals `2 (n - <X, Y>)`.
pub fn trace_distance(x: &MultipermutationMatrix, y: &MultipermutationMatrix) -> Result<usize> {
    let overlap = x.inner_product(y)?;
    Ok(2 * (x.num_cols() - overlap))
}

/// `max_j |x_j - y_j|`.
pub fn chebyshev_distance(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            got: y.len(),
        });
    }
    Ok(x.iter()
        .zip(y)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max))
}
