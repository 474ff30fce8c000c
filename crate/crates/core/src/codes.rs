//! Codes carved out of the multipermutation matrices by integer linear
//! constraints `A vec(X) <= b` / `= b`, together with concrete constraint
//! builders, codebook enumeration and the translation to an equivalent
//! permutation-matrix constraint system.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lp::Relation;
use crate::multiperm::{
    chebyshev_distance, hamming_distance, InitialVector, MultiplicityVector, Multipermutation,
    MultipermutationMatrix, PermutationMatrix,
};

/// Default cap on the number of enumerated candidates.
pub const DEFAULT_ENUMERATION_LIMIT: u128 = 10_000_000;

/// One integer row `sum coef * X_ij  rel  rhs` over an `m x n` grid of 0/1
/// variables. Entries are 0-based internally.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearConstraint {
    terms: BTreeMap<(usize, usize), i64>,
    relation: Relation,
    rhs: i64,
}

impl LinearConstraint {
    /// Accumulates duplicate entries and drops zero coefficients; at least
    /// one nonzero coefficient must remain.
    pub fn new(
        terms: impl IntoIterator<Item = (usize, usize, i64)>,
        relation: Relation,
        rhs: i64,
    ) -> Result<Self> {
        let mut map: BTreeMap<(usize, usize), i64> = BTreeMap::new();
        for (i, j, coef) in terms {
            *map.entry((i, j)).or_insert(0) += coef;
        }
        map.retain(|_, coef| *coef != 0);
        if map.is_empty() {
            return Err(Error::EmptyConstraint);
        }
        Ok(Self { terms: map, relation, rhs })
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.terms.iter().map(|(&(i, j), &coef)| (i, j, coef))
    }

    pub fn relation(&self) -> Relation {
        self.relation
    }

    pub fn rhs(&self) -> i64 {
        self.rhs
    }

    fn check_bounds(&self, rows: usize, cols: usize) -> Result<()> {
        for &(i, j) in self.terms.keys() {
            if i >= rows || j >= cols {
                return Err(Error::ConstraintOutOfBounds { i, j, rows, cols });
            }
        }
        Ok(())
    }

    /// Exact integer evaluation on a word, using `X_ij = 1` iff `x_j = i + 1`.
    fn evaluate_word(&self, word: &[usize]) -> i64 {
        self.terms
            .iter()
            .filter(|(&(i, j), _)| word[j] == i + 1)
            .map(|(_, &coef)| coef)
            .sum()
    }

    fn holds_value(&self, value: i64) -> bool {
        match self.relation {
            Relation::Le => value <= self.rhs,
            Relation::Eq => value == self.rhs,
        }
    }

    /// True when every nonzero entry is forced to zero by this constraint
    /// alone: an equality with zero right-hand side whose coefficients all
    /// share one sign.
    fn forces_entries_to_zero(&self) -> bool {
        self.relation == Relation::Eq
            && self.rhs == 0
            && (self.terms.values().all(|&c| c > 0) || self.terms.values().all(|&c| c < 0))
    }
}

/// A complete code description: multiplicity vector, modulation levels and
/// the integer side constraints.
#[derive(Debug, Clone)]
pub struct CodeSpec {
    r: MultiplicityVector,
    t: InitialVector,
    constraints: Vec<LinearConstraint>,
    name: Option<String>,
}

impl CodeSpec {
    pub fn new(
        r: MultiplicityVector,
        t: InitialVector,
        constraints: Vec<LinearConstraint>,
    ) -> Result<Self> {
        if t.len() != r.num_symbols() {
            return Err(Error::LengthMismatch {
                expected: r.num_symbols(),
                got: t.len(),
            });
        }
        for c in &constraints {
            c.check_bounds(r.num_symbols(), r.block_length())?;
        }
        Ok(Self { r, t, constraints, name: None })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn multiplicity(&self) -> &MultiplicityVector {
        &self.r
    }

    pub fn initial_vector(&self) -> &InitialVector {
        &self.t
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    pub fn num_symbols(&self) -> usize {
        self.r.num_symbols()
    }

    pub fn block_length(&self) -> usize {
        self.r.block_length()
    }

    /// Appends one more constraint, e.g. an exclusion row.
    pub fn push_constraint(&mut self, constraint: LinearConstraint) -> Result<()> {
        constraint.check_bounds(self.num_symbols(), self.block_length())?;
        self.constraints.push(constraint);
        Ok(())
    }
}

/// True iff every constraint row holds for `x` in exact integer arithmetic.
pub fn satisfies(x: &MultipermutationMatrix, spec: &CodeSpec) -> Result<bool> {
    if x.multiplicity() != spec.multiplicity() {
        return Err(Error::ShapeMismatch {
            expected_rows: spec.num_symbols(),
            expected_cols: spec.block_length(),
            rows: x.num_rows(),
            cols: x.num_cols(),
        });
    }
    let word = x.to_multipermutation();
    Ok(spec
        .constraints
        .iter()
        .all(|c| c.holds_value(c.evaluate_word(word.symbols()))))
}

/// Generalized derangements: symbol `i` may not appear on its own sorted
/// positions, i.e. `sum_{j in I_i} X_ij = 0` for every `i`.
pub fn derangement_spec(r: &MultiplicityVector, t: &InitialVector) -> Result<CodeSpec> {
    let mut constraints = Vec::with_capacity(r.num_symbols());
    for (i, positions) in r.index_sets().into_iter().enumerate() {
        let terms: Vec<(usize, usize, i64)> = positions.map(|j| (i, j, 1)).collect();
        constraints.push(LinearConstraint::new(terms, Relation::Eq, 0)?);
    }
    Ok(CodeSpec::new(r.clone(), t.clone(), constraints)?.with_name("derangement"))
}

/// The residue-constrained construction over constant multiplicity `r`:
/// position `j` may only carry symbols congruent to `j` modulo `d`, encoded
/// as one zero-fixing equality per banned entry.
pub fn shieh_spec(r: usize, m: usize, d: usize) -> Result<CodeSpec> {
    if r == 0 || m == 0 || d == 0 {
        return Err(Error::InvalidParameter(
            "r, m and d must all be positive".into(),
        ));
    }
    if !m.is_multiple_of(d) {
        return Err(Error::InvalidParameter(format!(
            "d = {d} does not divide m = {m}"
        )));
    }
    let multiplicity = MultiplicityVector::uniform(r, m)?;
    let n = multiplicity.block_length();
    let mut constraints = Vec::new();
    for j in 0..n {
        for i in 0..m {
            if (i + 1) % d != (j + 1) % d {
                constraints.push(LinearConstraint::new([(i, j, 1)], Relation::Eq, 0)?);
            }
        }
    }
    Ok(
        CodeSpec::new(multiplicity, InitialVector::ramp(m), constraints)?
            .with_name(format!("shieh(r={r},m={m},d={d})")),
    )
}

/// Closed-form codebook size `((a r)! / (r!)^a)^d` with `a = m / d`.
pub fn shieh_cardinality(r: usize, m: usize, d: usize) -> Result<u128> {
    if r == 0 || m == 0 || d == 0 {
        return Err(Error::InvalidParameter(
            "r, m and d must all be positive".into(),
        ));
    }
    if !m.is_multiple_of(d) {
        return Err(Error::InvalidParameter(format!(
            "d = {d} does not divide m = {m}"
        )));
    }
    let a = m / d;
    let base = MultiplicityVector::uniform(r, a)?.multiset_count()?;
    let mut out: u128 = 1;
    for _ in 0..d {
        out = out
            .checked_mul(base)
            .ok_or_else(|| Error::Overflow("codebook cardinality".into()))?;
    }
    Ok(out)
}

/// A row satisfied by every multipermutation matrix except `y` itself:
/// `sum_{(i,j): Y_ij = 1} X_ij <= n - 1`, which holds iff the word distance
/// to `y` is at least one.
pub fn exclusion_constraint(y: &MultipermutationMatrix) -> LinearConstraint {
    let terms: Vec<(usize, usize, i64)> = (0..y.num_rows())
        .flat_map(|i| (0..y.num_cols()).map(move |j| (i, j)))
        .filter(|&(i, j)| y.entry(i, j) == 1)
        .map(|(i, j)| (i, j, 1))
        .collect();
    let n = y.num_cols() as i64;
    LinearConstraint::new(terms, Relation::Le, n - 1)
        .expect("a multipermutation matrix has at least one 1")
}

/// All codewords of a spec, lexicographically sorted by symbol word.
#[derive(Debug, Clone)]
pub struct Codebook {
    r: MultiplicityVector,
    words: Vec<Vec<usize>>,
}

impl Codebook {
    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn multiplicity(&self) -> &MultiplicityVector {
        &self.r
    }

    pub fn word(&self, index: usize) -> Option<&[usize]> {
        self.words.get(index).map(|w| w.as_slice())
    }

    pub fn words(&self) -> impl Iterator<Item = &[usize]> {
        self.words.iter().map(|w| w.as_slice())
    }

    pub fn multipermutation(&self, index: usize) -> Result<Multipermutation> {
        let word = self
            .words
            .get(index)
            .ok_or(Error::IndexOutOfRange { index, len: self.words.len() })?;
        Multipermutation::new(word.clone(), &self.r)
    }

    /// The `k`-th codeword in enumeration order as a matrix.
    pub fn codeword_by_index(&self, index: usize) -> Result<MultipermutationMatrix> {
        self.multipermutation(index)?.to_matrix(&self.r)
    }

    /// Position of a word in enumeration order, if it is a codeword.
    pub fn index_of(&self, word: &[usize]) -> Option<usize> {
        self.words.binary_search_by(|w| w.as_slice().cmp(word)).ok()
    }

    pub fn modulated(&self, index: usize, t: &InitialVector) -> Result<Vec<f64>> {
        self.multipermutation(index)?.modulate(t)
    }
}

/// Enumerates every multipermutation of `M(r)` satisfying the constraints,
/// in lexicographic order. Fails up front when `n! / prod(r_i!)` exceeds the
/// limit (default 10^7).
pub fn enumerate_codebook(spec: &CodeSpec, limit: Option<u128>) -> Result<Codebook> {
    let limit = limit.unwrap_or(DEFAULT_ENUMERATION_LIMIT);
    let size = spec.r.multiset_count()?;
    if size > limit {
        return Err(Error::EnumerationTooLarge { size, limit });
    }

    let m = spec.num_symbols();
    let n = spec.block_length();

    // Zero-forcing equalities become per-position symbol bans that prune the
    // search tree; everything else is checked at the leaves.
    let mut banned = vec![vec![false; m]; n];
    let mut residual: Vec<&LinearConstraint> = Vec::new();
    for c in &spec.constraints {
        if c.forces_entries_to_zero() {
            for (i, j, _) in c.terms() {
                banned[j][i] = true;
            }
        } else {
            residual.push(c);
        }
    }

    let mut counts = spec.r.counts().to_vec();
    let mut word = Vec::with_capacity(n);
    let mut out = Vec::new();
    enumerate_rec(&mut counts, &mut word, n, &banned, &residual, &mut out);
    Ok(Codebook { r: spec.r.clone(), words: out })
}

fn enumerate_rec(
    counts: &mut [usize],
    word: &mut Vec<usize>,
    n: usize,
    banned: &[Vec<bool>],
    residual: &[&LinearConstraint],
    out: &mut Vec<Vec<usize>>,
) {
    if word.len() == n {
        if residual
            .iter()
            .all(|c| c.holds_value(c.evaluate_word(word)))
        {
            out.push(word.clone());
        }
        return;
    }
    let j = word.len();
    for symbol in 1..=counts.len() {
        if counts[symbol - 1] == 0 || banned[j][symbol - 1] {
            continue;
        }
        counts[symbol - 1] -= 1;
        word.push(symbol);
        enumerate_rec(counts, word, n, banned, residual, out);
        word.pop();
        counts[symbol - 1] += 1;
    }
}

/// Distance used for codebook metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    Hamming,
    Chebyshev,
}

/// Minimum pairwise distance between modulated codewords `t * X`.
pub fn min_distance(book: &Codebook, metric: Metric, t: &InitialVector) -> Result<f64> {
    if book.len() < 2 {
        return Err(Error::TooFewCodewords { needed: 2, got: book.len() });
    }
    let modulated: Vec<Vec<f64>> = (0..book.len())
        .map(|k| book.modulated(k, t))
        .collect::<Result<_>>()?;
    let mut best = f64::INFINITY;
    for a in 0..modulated.len() {
        for b in a + 1..modulated.len() {
            let d = match metric {
                Metric::Hamming => hamming_distance(&modulated[a], &modulated[b])? as f64,
                Metric::Chebyshev => chebyshev_distance(&modulated[a], &modulated[b])?,
            };
            best = best.min(d);
        }
    }
    Ok(best)
}

/// The equivalent constraint system over `n x n` permutation matrices: each
/// coefficient on `X_ij` is copied to every row `k in I_i` of `P`, and the
/// initial vector becomes `t` with entry `i` repeated `r_i` times.
#[derive(Debug, Clone)]
pub struct PermutationSystem {
    size: usize,
    s: Vec<f64>,
    constraints: Vec<LinearConstraint>,
}

impl PermutationSystem {
    pub fn size(&self) -> usize {
        self.size
    }

    /// The repeated initial vector `s`.
    pub fn initial_vector(&self) -> &[f64] {
        &self.s
    }

    pub fn constraints(&self) -> &[LinearConstraint] {
        &self.constraints
    }

    pub fn satisfies(&self, p: &PermutationMatrix) -> Result<bool> {
        if p.size() != self.size {
            return Err(Error::LengthMismatch { expected: self.size, got: p.size() });
        }
        // P_kj = 1 iff col_to_row[j] = k.
        Ok(self.constraints.iter().all(|c| {
            let value: i64 = c
                .terms()
                .filter(|&(k, j, _)| p.col_to_row()[j] == k)
                .map(|(_, _, coef)| coef)
                .sum();
            c.holds_value(value)
        }))
    }

    /// The codeword set `{s P}` by exhaustive search over all permutations,
    /// sorted and deduplicated. Guarded by the enumeration limit.
    pub fn enumerate_codewords(&self, limit: Option<u128>) -> Result<Vec<Vec<f64>>> {
        let unit = MultiplicityVector::new(vec![1; self.size])?;
        let all = CodeSpec::new(
            unit.clone(),
            InitialVector::ramp(self.size),
            Vec::new(),
        )?;
        let perms = enumerate_codebook(&all, limit)?;
        let mut out: Vec<Vec<f64>> = Vec::new();
        for word in perms.words() {
            let col_to_row: Vec<usize> = word.iter().map(|&s| s - 1).collect();
            let p = PermutationMatrix::from_col_map(col_to_row)?;
            if self.satisfies(&p)? {
                out.push(p.permute_row_vector(&self.s)?);
            }
        }
        out.sort_by(|a, b| {
            a.iter()
                .zip(b)
                .map(|(x, y)| x.total_cmp(y))
                .find(|c| c.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        out.dedup();
        Ok(out)
    }
}

/// Translates a multipermutation-matrix spec into a permutation-matrix
/// system describing the same codeword set.
pub fn to_permutation_spec(spec: &CodeSpec) -> Result<PermutationSystem> {
    let n = spec.block_length();
    let index_sets = spec.r.index_sets();
    let mut s = Vec::with_capacity(n);
    for (i, &count) in spec.r.counts().iter().enumerate() {
        s.extend(std::iter::repeat_n(spec.t.levels()[i], count));
    }
    let mut constraints = Vec::with_capacity(spec.constraints.len());
    for c in &spec.constraints {
        let terms: Vec<(usize, usize, i64)> = c
            .terms()
            .flat_map(|(i, j, coef)| index_sets[i].clone().map(move |k| (k, j, coef)))
            .collect();
        constraints.push(LinearConstraint::new(terms, c.relation(), c.rhs())?);
    }
    Ok(PermutationSystem { size: n, s, constraints })
}
