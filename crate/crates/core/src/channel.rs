//! Memoryless channel models, noise sampling and the per-symbol negative
//! log-likelihood cost matrices that drive the decoders.
//!
//! Costs drop positive scales and additive constants that cannot change the
//! minimizer: the AWGN cost is the plain squared distance `(y_j - t_i)^2`
//! and the symmetric-channel cost keeps only the two log terms.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_distr::{Distribution, Normal};
use statrs::function::erf::erfc;

use crate::codes::Codebook;
use crate::error::{Error, Result};
use crate::multiperm::InitialVector;

/// The pinned pseudorandom generator for all channel simulation: ChaCha8,
/// seeded explicitly, with the stream id splitting independent trials.
pub fn channel_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Additive white Gaussian noise with standard deviation `sigma > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AwgnChannel {
    sigma: f64,
}

impl AwgnChannel {
    pub fn new(sigma: f64) -> Result<Self> {
        if !sigma.is_finite() || sigma <= 0.0 {
            return Err(Error::InvalidParameter(format!(
                "sigma must be positive and finite, got {sigma}"
            )));
        }
        Ok(Self { sigma })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn sample(&self, x: &[f64], rng: &mut impl Rng) -> Vec<f64> {
        sample_awgn(x, self.sigma, rng)
    }

    pub fn cost_matrix(&self, y: &[f64], t: &InitialVector) -> Result<CostMatrix> {
        cost_matrix_awgn(y, t)
    }
}

/// Symbol-symmetric channel over `{1, ..., m}`: a symbol survives with
/// probability `1 - p` and is otherwise replaced uniformly among the other
/// `m - 1` symbols. `p < (m-1)/m` keeps the likelihood ordering strict.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QSymmetricChannel {
    p: f64,
    m: usize,
}

impl QSymmetricChannel {
    pub fn new(p: f64, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidParameter(
                "symmetric channel needs at least two symbols".into(),
            ));
        }
        if !p.is_finite() || p <= 0.0 || p >= (m as f64 - 1.0) / m as f64 {
            return Err(Error::InvalidParameter(format!(
                "crossover probability {p} outside (0, {})",
                (m as f64 - 1.0) / m as f64
            )));
        }
        Ok(Self { p, m })
    }

    pub fn crossover(&self) -> f64 {
        self.p
    }

    pub fn alphabet_size(&self) -> usize {
        self.m
    }

    pub fn sample(&self, x: &[usize], rng: &mut impl Rng) -> Result<Vec<usize>> {
        sample_qsc(x, self.p, self.m, rng)
    }

    pub fn cost_matrix(&self, y: &[usize]) -> Result<CostMatrix> {
        cost_matrix_qsc(y, self.p, self.m)
    }
}

/// `y_j = x_j + g_j` with iid Gaussian noise of standard deviation `sigma`.
pub fn sample_awgn(x: &[f64], sigma: f64, rng: &mut impl Rng) -> Vec<f64> {
    let normal = Normal::new(0.0, sigma).expect("sigma validated by callers");
    x.iter().map(|&v| v + normal.sample(rng)).collect()
}

/// Applies the symmetric channel to a symbol word. `p = 0` is the valid
/// noiseless limit for sampling even though the cost matrix requires
/// `p > 0`.
pub fn sample_qsc(x: &[usize], p: f64, m: usize, rng: &mut impl Rng) -> Result<Vec<usize>> {
    if m < 2 {
        return Err(Error::InvalidParameter(
            "symmetric channel needs at least two symbols".into(),
        ));
    }
    if !p.is_finite() || !(0.0..(m as f64 - 1.0) / m as f64).contains(&p) {
        return Err(Error::InvalidParameter(format!(
            "crossover probability {p} outside [0, {})",
            (m as f64 - 1.0) / m as f64
        )));
    }
    x.iter()
        .map(|&s| {
            if s == 0 || s > m {
                return Err(Error::InvalidParameter(format!(
                    "symbol {s} outside 1..={m}"
                )));
            }
            if rng.gen::<f64>() < p {
                // Uniform over the other m - 1 symbols.
                let draw = rng.gen_range(1..m);
                Ok(if draw >= s { draw + 1 } else { draw })
            } else {
                Ok(s)
            }
        })
        .collect()
}

/// The `m x n` matrix of per-symbol decoding costs: entry `(i, j)` is the
/// cost of deciding symbol `i` at position `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    gamma: Vec<f64>, // row-major
    num_symbols: usize,
    num_positions: usize,
}

impl CostMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let num_symbols = rows.len();
        let num_positions = rows.first().map_or(0, |r| r.len());
        if num_symbols == 0 || num_positions == 0 {
            return Err(Error::InvalidParameter("empty cost matrix".into()));
        }
        if rows.iter().any(|r| r.len() != num_positions) {
            return Err(Error::ShapeMismatch {
                expected_rows: num_symbols,
                expected_cols: num_positions,
                rows: num_symbols,
                cols: rows.iter().map(|r| r.len()).max().unwrap_or(0),
            });
        }
        let gamma: Vec<f64> = rows.into_iter().flatten().collect();
        if gamma.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "cost matrix entries must be finite".into(),
            ));
        }
        Ok(Self { gamma, num_symbols, num_positions })
    }

    pub fn num_symbols(&self) -> usize {
        self.num_symbols
    }

    pub fn num_positions(&self) -> usize {
        self.num_positions
    }

    pub fn entry(&self, symbol_row: usize, position: usize) -> f64 {
        self.gamma[symbol_row * self.num_positions + position]
    }

    /// Total cost of a symbol word. The per-position costs are summed in
    /// sorted order so words with identical cost multisets produce
    /// bit-identical totals, which keeps cost ranking ties exact.
    pub fn word_cost(&self, word: &[usize]) -> Result<f64> {
        if word.len() != self.num_positions {
            return Err(Error::LengthMismatch {
                expected: self.num_positions,
                got: word.len(),
            });
        }
        let mut costs = Vec::with_capacity(word.len());
        for (j, &s) in word.iter().enumerate() {
            if s == 0 || s > self.num_symbols {
                return Err(Error::InvalidParameter(format!(
                    "symbol {s} outside 1..={}",
                    self.num_symbols
                )));
            }
            costs.push(self.entry(s - 1, j));
        }
        costs.sort_by(f64::total_cmp);
        Ok(costs.iter().sum())
    }

    /// `sum_ij gamma_ij Z_ij` for arbitrary (possibly fractional) entries.
    pub fn relaxed_cost(&self, entries: impl Fn(usize, usize) -> f64) -> f64 {
        let mut total = 0.0;
        for i in 0..self.num_symbols {
            for j in 0..self.num_positions {
                total += self.entry(i, j) * entries(i, j);
            }
        }
        total
    }

    /// The LP objective over `vec(X)` in column-major order.
    pub fn objective_vector(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.gamma.len());
        for j in 0..self.num_positions {
            for i in 0..self.num_symbols {
                out.push(self.entry(i, j));
            }
        }
        out
    }
}

/// AWGN cost `gamma_ij = (y_j - t_i)^2`; the Gaussian scale and the additive
/// constants are dropped since they never move the argmin.
pub fn cost_matrix_awgn(y: &[f64], t: &InitialVector) -> Result<CostMatrix> {
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidParameter(
            "received word must be finite".into(),
        ));
    }
    let rows: Vec<Vec<f64>> = t
        .levels()
        .iter()
        .map(|&ti| y.iter().map(|&yj| (yj - ti) * (yj - ti)).collect())
        .collect();
    CostMatrix::new(rows)
}

/// Symmetric-channel cost `-log(1-p)` on agreement and `-log(p/(m-1))`
/// otherwise; minimizing it is exactly minimum Hamming distance decoding.
pub fn cost_matrix_qsc(y: &[usize], p: f64, m: usize) -> Result<CostMatrix> {
    let channel = QSymmetricChannel::new(p, m)?;
    let agree = -(1.0 - channel.p).ln();
    let disagree = -(channel.p / (m as f64 - 1.0)).ln();
    let mut rows = vec![vec![disagree; y.len()]; m];
    for (j, &s) in y.iter().enumerate() {
        if s == 0 || s > m {
            return Err(Error::InvalidParameter(format!(
                "symbol {s} outside 1..={m}"
            )));
        }
        rows[s - 1][j] = agree;
    }
    CostMatrix::new(rows)
}

/// Tail probability of the standard normal distribution.
pub fn q_function(z: f64) -> f64 {
    0.5 * erfc(z / std::f64::consts::SQRT_2)
}

/// Pairwise error exponent surrogate between two modulated words `x = t X`
/// and `x_hat = t X_hat`: `(||x||^2 - <x_hat, x>) / ||x_hat - x||`.
pub fn pseudodistance_awgn(x: &[f64], x_hat: &[f64]) -> Result<f64> {
    if x.len() != x_hat.len() {
        return Err(Error::LengthMismatch {
            expected: x.len(),
            got: x_hat.len(),
        });
    }
    let norm_sq: f64 = x.iter().map(|v| v * v).sum();
    let cross: f64 = x_hat.iter().zip(x).map(|(a, b)| a * b).sum();
    let diff: f64 = x_hat
        .iter()
        .zip(x)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    if diff == 0.0 {
        return Err(Error::IdenticalWords);
    }
    Ok((norm_sq - cross) / diff)
}

/// Union bound on the block error probability when `word` is transmitted
/// over AWGN with deviation `sigma`: the sum of `Q(omega / sigma)` over all
/// other codewords.
pub fn union_bound_awgn(
    book: &Codebook,
    word: &[usize],
    t: &InitialVector,
    sigma: f64,
) -> Result<f64> {
    let channel = AwgnChannel::new(sigma)?;
    let index = book.index_of(word).ok_or(Error::NotInCodebook)?;
    let transmitted = book.modulated(index, t)?;
    let mut bound = 0.0;
    for other in 0..book.len() {
        if other == index {
            continue;
        }
        let competitor = book.modulated(other, t)?;
        let omega = pseudodistance_awgn(&transmitted, &competitor)?;
        bound += q_function(omega / channel.sigma());
    }
    Ok(bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{enumerate_codebook, CodeSpec};
    use crate::multiperm::{hamming_distance, MultiplicityVector};

    #[test]
    fn awgn_sampling_is_seeded_and_centered() {
        let x = vec![0.0; 100_000];
        let sigma = 0.7;
        let mut rng = channel_rng(42, 0);
        let y = sample_awgn(&x, sigma, &mut rng);

        let mut rng2 = channel_rng(42, 0);
        let y2 = sample_awgn(&x, sigma, &mut rng2);
        assert_eq!(y, y2);

        let mean: f64 = y.iter().sum::<f64>() / y.len() as f64;
        let var: f64 = y.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / y.len() as f64;
        assert!(
            (var - sigma * sigma).abs() < 0.05 * sigma * sigma,
            "empirical variance {var}"
        );
    }

    #[test]
    fn awgn_vanishing_noise_returns_input() {
        let x = vec![1.0, 2.0, 3.0];
        let mut rng = channel_rng(1, 0);
        let y = sample_awgn(&x, 1e-30, &mut rng);
        assert_eq!(y, x);
    }

    #[test]
    fn qsc_noiseless_and_flip_rate() {
        let x: Vec<usize> = (0..100_000).map(|i| i % 3 + 1).collect();
        let mut rng = channel_rng(7, 0);
        let clean = sample_qsc(&x, 0.0, 3, &mut rng).unwrap();
        assert_eq!(clean, x);

        let p = 0.1;
        let mut rng = channel_rng(7, 1);
        let noisy = sample_qsc(&x, p, 3, &mut rng).unwrap();
        let flips = hamming_distance(&x, &noisy).unwrap() as f64;
        let expected = p * x.len() as f64;
        let dev = (p * (1.0 - p) * x.len() as f64).sqrt();
        assert!(
            (flips - expected).abs() <= 3.0 * dev,
            "flip count {flips} vs {expected}"
        );
        for (&a, &b) in x.iter().zip(&noisy) {
            assert!((1..=3).contains(&b));
            let _ = a;
        }
    }

    #[test]
    fn qsc_binary_flips_are_swaps() {
        let x: Vec<usize> = vec![1, 2, 1, 2, 1, 2, 1, 2];
        let mut rng = channel_rng(9, 0);
        let y = sample_qsc(&x, 0.4, 2, &mut rng).unwrap();
        for (&a, &b) in x.iter().zip(&y) {
            assert!(b == a || b == 3 - a);
        }
    }

    #[test]
    fn qsc_rejects_out_of_range_symbols() {
        let mut rng = channel_rng(0, 0);
        assert!(sample_qsc(&[0], 0.1, 3, &mut rng).is_err());
        assert!(sample_qsc(&[4], 0.1, 3, &mut rng).is_err());
        assert!(QSymmetricChannel::new(0.7, 3).is_err());
        assert!(QSymmetricChannel::new(0.0, 3).is_err());
    }

    #[test]
    fn awgn_cost_basics() {
        let t = InitialVector::new(vec![1.0, 2.0]).unwrap();
        let gamma = cost_matrix_awgn(&[1.1], &t).unwrap();
        assert!((gamma.entry(0, 0) - 0.01).abs() < 1e-12);
        assert!((gamma.entry(1, 0) - 0.81).abs() < 1e-12);

        // exact hit is the strict row minimum of its column
        let gamma = cost_matrix_awgn(&[2.0, 1.0], &t).unwrap();
        assert_eq!(gamma.entry(1, 0), 0.0);
        assert!(gamma.entry(0, 0) > 0.0);
    }

    #[test]
    fn awgn_cost_ranking_matches_correlation_form() {
        // argmin of the quadratic costs equals argmax of sum_j y_j t_{x_j}.
        let r = MultiplicityVector::new(vec![2, 2]).unwrap();
        let t = InitialVector::ramp(2);
        let spec = CodeSpec::new(r, t.clone(), vec![]).unwrap();
        let book = enumerate_codebook(&spec, None).unwrap();
        let mut rng = channel_rng(11, 0);
        for _ in 0..100 {
            let y: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..4.0)).collect();
            let gamma = cost_matrix_awgn(&y, &t).unwrap();
            let by_cost = rank_words(&book, |w| gamma.word_cost(w).unwrap());
            let by_corr = rank_words(&book, |w| {
                -w.iter()
                    .zip(&y)
                    .map(|(&s, &yj)| yj * t.level(s))
                    .sum::<f64>()
            });
            assert_eq!(by_cost, by_corr);
        }
    }

    #[test]
    fn qsc_cost_values_and_hamming_equivalence() {
        let gamma = cost_matrix_qsc(&[1, 2, 3], 0.1, 3).unwrap();
        assert!((gamma.entry(0, 0) - 0.105_360_515_657_826_3).abs() < 1e-12);
        assert!((gamma.entry(1, 0) - 2.995_732_273_553_991).abs() < 1e-12);

        let r = MultiplicityVector::new(vec![2, 2]).unwrap();
        let t = InitialVector::ramp(2);
        let spec = CodeSpec::new(r, t, vec![]).unwrap();
        let book = enumerate_codebook(&spec, None).unwrap();
        let mut rng = channel_rng(13, 0);
        for _ in 0..100 {
            let y: Vec<usize> = (0..4).map(|_| rng.gen_range(1..=2)).collect();
            let gamma = cost_matrix_qsc(&y, 0.2, 2).unwrap();
            let by_cost = rank_words(&book, |w| gamma.word_cost(w).unwrap());
            let by_hamming = rank_words(&book, |w| hamming_distance(w, &y).unwrap() as f64);
            assert_eq!(by_cost, by_hamming, "y = {y:?}");
        }
    }

    // Ranking helper with the documented tie rule: rank by value, ties by
    // codebook index.
    fn rank_words(book: &Codebook, value: impl Fn(&[usize]) -> f64) -> Vec<usize> {
        let mut order: Vec<usize> = (0..book.len()).collect();
        let values: Vec<f64> = book.words().map(value).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
        order
    }

    #[test]
    fn word_cost_equals_full_likelihood_up_to_constants() {
        // Summed costs differ from the exact negative log-likelihood by a
        // constant, so differences of word costs must match differences of
        // likelihoods.
        let t = InitialVector::ramp(3);
        let mut rng = channel_rng(17, 0);
        let sigma = 0.8;
        let y: Vec<f64> = (0..6).map(|_| rng.gen_range(0.0..4.0)).collect();
        let gamma = cost_matrix_awgn(&y, &t).unwrap();
        let words = [vec![1, 2, 3, 1, 2, 3], vec![3, 2, 1, 3, 2, 1]];
        let nll = |w: &[usize]| -> f64 {
            w.iter()
                .zip(&y)
                .map(|(&s, &yj)| {
                    let d = yj - t.level(s);
                    d * d / (2.0 * sigma * sigma)
                })
                .sum()
        };
        let delta_cost =
            gamma.word_cost(&words[0]).unwrap() - gamma.word_cost(&words[1]).unwrap();
        let delta_nll = (nll(&words[0]) - nll(&words[1])) * 2.0 * sigma * sigma;
        assert!((delta_cost - delta_nll).abs() < 1e-9);
    }

    #[test]
    fn pseudodistance_reference_values() {
        let omega = pseudodistance_awgn(&[1.0, 2.0], &[2.0, 1.0]).unwrap();
        assert!((omega - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-15);

        // positive homogeneity in the level scale
        let c = 3.5;
        let scaled = pseudodistance_awgn(&[c, 2.0 * c], &[2.0 * c, c]).unwrap();
        assert!((scaled - c * omega).abs() < 1e-12);

        assert!(matches!(
            pseudodistance_awgn(&[1.0, 2.0], &[1.0, 2.0]),
            Err(Error::IdenticalWords)
        ));
    }

    #[test]
    fn union_bound_two_codeword_book() {
        let r = MultiplicityVector::new(vec![1, 1]).unwrap();
        let t = InitialVector::ramp(2);
        let spec = CodeSpec::new(r, t.clone(), vec![]).unwrap();
        let book = enumerate_codebook(&spec, None).unwrap();
        assert_eq!(book.len(), 2);

        let bound = union_bound_awgn(&book, &[1, 2], &t, 1.0).unwrap();
        assert!((bound - 0.239_750_061_093_476_7).abs() < 1e-9);

        // huge noise: every term tends to Q(0) = 1/2
        let washed = union_bound_awgn(&book, &[1, 2], &t, 1e9).unwrap();
        assert!((washed - 0.5).abs() < 1e-6);

        // vanishing noise: bound tends to zero
        let quiet = union_bound_awgn(&book, &[1, 2], &t, 1e-3).unwrap();
        assert!(quiet < 1e-12);

        assert!(matches!(
            union_bound_awgn(&book, &[2, 2], &t, 1.0),
            Err(Error::NotInCodebook)
        ));
    }
}
