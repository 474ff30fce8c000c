//! Acceptance suite: one test per release criterion, each printing a
//! PASS line (visible with `--nocapture`) and enforcing its runtime budget.

use std::time::Instant;

use mpcode::{
    channel_rng, cost_matrix_awgn, cost_matrix_qsc,
    decode_chebyshev, decode_memoryless, decompose_relaxed, derangement_spec, enumerate_codebook,
    hamming_distance, matrix_hamming_distance, min_distance,
    ml_decode_exhaustive, sample_awgn, sample_qsc, shieh_cardinality, shieh_spec,
    to_permutation_spec, trace_distance, CodeSpec, InitialVector, LinearConstraint, Metric,
    MultiplicityVector, Multipermutation, MultipermutationMatrix, RelaxedMatrix, Relation,
    EPS_FEAS_EXACT,
};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

fn budget(start: Instant, seconds: f64, label: &str) {
    let elapsed = start.elapsed().as_secs_f64();
    assert!(
        elapsed < seconds,
        "{label} took {elapsed:.2}s, budget {seconds}s"
    );
    println!("acceptance {label}: PASS ({elapsed:.2}s)");
}

fn random_word(r: &MultiplicityVector, rng: &mut impl Rng) -> Multipermutation {
    let mut symbols = Multipermutation::sorted(r).symbols().to_vec();
    symbols.shuffle(rng);
    Multipermutation::new(symbols, r).unwrap()
}

#[test]
fn acceptance_1_shieh_code_metrics() {
    let start = Instant::now();
    let spec = shieh_spec(2, 6, 3).unwrap();
    let book = enumerate_codebook(&spec, None).unwrap();
    assert_eq!(book.len(), 216);
    assert_eq!(book.len() as u128, shieh_cardinality(2, 6, 3).unwrap());
    let d_inf = min_distance(&book, Metric::Chebyshev, spec.initial_vector()).unwrap();
    assert_eq!(d_inf, 3.0);
    budget(start, 10.0, "1 (codebook size 216, min Chebyshev distance 3)");
}

#[test]
fn acceptance_2_derangement_listing() {
    let start = Instant::now();
    let r = MultiplicityVector::new(vec![2, 2, 2]).unwrap();
    let t = InitialVector::new(vec![1.0, 2.0, 3.0]).unwrap();
    let book = enumerate_codebook(&derangement_spec(&r, &t).unwrap(), None).unwrap();
    let mut expected = vec![
        vec![3, 3, 1, 1, 2, 2],
        vec![2, 2, 3, 3, 1, 1],
        vec![2, 3, 1, 3, 2, 1],
        vec![2, 3, 1, 3, 1, 2],
        vec![2, 3, 3, 1, 2, 1],
        vec![2, 3, 3, 1, 1, 2],
        vec![3, 2, 1, 3, 2, 1],
        vec![3, 2, 1, 3, 1, 2],
        vec![3, 2, 3, 1, 2, 1],
        vec![3, 2, 3, 1, 1, 2],
    ];
    expected.sort();
    let got: Vec<Vec<usize>> = book.words().map(|w| w.to_vec()).collect();
    assert_eq!(got, expected);
    budget(start, 1.0, "2 (derangement codebook matches the 10-word listing)");
}

#[test]
fn acceptance_3_chebyshev_reference_decode() {
    let start = Instant::now();
    let spec = shieh_spec(2, 6, 3).unwrap();
    let y = [2.0, 1.0, 4.0, 3.0, 6.0, 5.0, 2.0, 1.0, 4.0, 3.0, 6.0, 5.0];
    let result = decode_chebyshev(&spec, &y).unwrap();
    assert!((result.delta.unwrap() - 1.0).abs() <= 1e-6);
    assert_eq!(result.decoded, vec![1, 2, 3, 4, 5, 6, 1, 2, 3, 4, 5, 6]);
    assert!(result.decoded_valid);
    // the optimum of this instance is a fractional face; interior entry
    // values are solver-dependent and deliberately not asserted
    assert!(!result.certificate);
    budget(start, 1.0, "3 (reference decode: delta 1, rounded word, fractional)");
}

#[test]
fn acceptance_4_decomposition_pipeline() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(20_240_401);
    let mut done = 0;
    while done < 200 {
        let m = rng.gen_range(2..=4usize);
        let counts: Vec<usize> = (0..m).map(|_| rng.gen_range(1..=3)).collect();
        let r = MultiplicityVector::new(counts).unwrap();
        if r.block_length() > 10 {
            continue;
        }
        done += 1;

        let terms = rng.gen_range(1..=8usize);
        let mut weights: Vec<f64> = (0..terms).map(|_| rng.gen_range(0.02..1.0)).collect();
        let total: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= total);

        let (rows, cols) = (r.num_symbols(), r.block_length());
        let mut flat = vec![0.0; rows * cols];
        for &w in &weights {
            let word = random_word(&r, &mut rng);
            for (j, &s) in word.symbols().iter().enumerate() {
                flat[(s - 1) * cols + j] += w;
            }
        }
        let z = RelaxedMatrix::from_flat(flat, r.clone()).unwrap();
        let combination = decompose_relaxed(&z, EPS_FEAS_EXACT).unwrap();

        let back = combination.recombine().unwrap();
        let worst = z
            .as_flat()
            .iter()
            .zip(back.as_flat())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 1e-8, "reconstruction error {worst}");

        let weight_sum: f64 = combination.terms().iter().map(|&(w, _)| w).sum();
        assert!((weight_sum - 1.0).abs() <= 1e-9, "weights sum to {weight_sum}");
        for (w, x) in combination.terms() {
            assert!(*w > 0.0);
            // re-validate the defining invariants entry by entry
            let rows_dense: Vec<Vec<u8>> = (0..x.num_rows())
                .map(|i| (0..x.num_cols()).map(|j| x.entry(i, j)).collect())
                .collect();
            assert!(MultipermutationMatrix::new(rows_dense, r.clone()).is_ok());
        }
    }
    budget(start, 30.0, "4 (200 random decompositions reconstruct within 1e-8)");
}

#[test]
fn acceptance_5_distance_identities() {
    let start = Instant::now();

    // exhaustive over all pairs for r = (2,2)
    let r = MultiplicityVector::new(vec![2, 2]).unwrap();
    let t = InitialVector::ramp(2);
    let spec = CodeSpec::new(r.clone(), t.clone(), vec![]).unwrap();
    let book = enumerate_codebook(&spec, None).unwrap();
    assert_eq!(book.len(), 6);
    let mut pairs = 0;
    for a in 0..book.len() {
        for b in 0..book.len() {
            let xa = book.codeword_by_index(a).unwrap();
            let xb = book.codeword_by_index(b).unwrap();
            let matrix_d = matrix_hamming_distance(&xa, &xb).unwrap();
            let word_d = hamming_distance(
                &book.modulated(a, &t).unwrap(),
                &book.modulated(b, &t).unwrap(),
            )
            .unwrap();
            assert_eq!(matrix_d, 2 * word_d);
            assert_eq!(matrix_d, trace_distance(&xa, &xb).unwrap());
            pairs += 1;
        }
    }
    assert_eq!(pairs, 36);

    // 1000 random pairs for r = (2,3,2)
    let r = MultiplicityVector::new(vec![2, 3, 2]).unwrap();
    let t = InitialVector::ramp(3);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..1000 {
        let xa = random_word(&r, &mut rng).to_matrix(&r).unwrap();
        let xb = random_word(&r, &mut rng).to_matrix(&r).unwrap();
        let matrix_d = matrix_hamming_distance(&xa, &xb).unwrap();
        let word_d = hamming_distance(
            &xa.modulate(&t).unwrap(),
            &xb.modulate(&t).unwrap(),
        )
        .unwrap();
        assert_eq!(matrix_d, 2 * word_d);
        assert_eq!(matrix_d, trace_distance(&xa, &xb).unwrap());
    }
    budget(start, 5.0, "5 (distance identities, 36 exhaustive + 1000 random pairs)");
}

#[test]
fn acceptance_6_certificate_soundness() {
    let start = Instant::now();
    let spec = shieh_spec(2, 4, 2).unwrap();
    let book = enumerate_codebook(&spec, None).unwrap();
    assert_eq!(book.len(), 36);
    let p = 0.1;
    let m = spec.num_symbols();

    let mut certified = 0;
    let trials = 500;
    for trial in 0..trials {
        let mut rng = channel_rng(60_420, trial);
        let k = rng.gen_range(0..book.len());
        let x = book.word(k).unwrap().to_vec();
        let y = sample_qsc(&x, p, m, &mut rng).unwrap();
        let gamma = cost_matrix_qsc(&y, p, m).unwrap();

        let lp = decode_memoryless(&spec, &gamma).unwrap();
        if lp.certificate {
            certified += 1;
            assert!(lp.decoded_valid);
            let oracle = ml_decode_exhaustive(&book, &gamma).unwrap();
            let lp_cost = gamma.word_cost(&lp.decoded).unwrap();
            assert_eq!(
                lp_cost, oracle.value,
                "certified decode is not maximum likelihood (trial {trial})"
            );
            assert_eq!(lp.decoded, oracle.best.symbols());
        }
    }
    println!(
        "acceptance 6 certificate rate: {certified}/{trials} = {:.3}",
        certified as f64 / trials as f64
    );
    assert!(certified > 0, "no certified decode in {trials} trials");
    budget(start, 60.0, "6 (every certified decode equals the exhaustive optimum)");
}

#[test]
fn acceptance_7_permutation_system_equivalence() {
    let start = Instant::now();

    let check = |spec: &CodeSpec| {
        let book = enumerate_codebook(spec, None).unwrap();
        let words: Vec<Vec<f64>> = (0..book.len())
            .map(|k| book.modulated(k, spec.initial_vector()).unwrap())
            .collect();
        let system = to_permutation_spec(spec).unwrap();
        let perm_words = system.enumerate_codewords(None).unwrap();
        assert_eq!(perm_words, words, "codeword sets differ");
        words.len()
    };

    let r = MultiplicityVector::new(vec![1, 1, 1]).unwrap();
    let n1 = check(&derangement_spec(&r, &InitialVector::ramp(3)).unwrap());
    assert_eq!(n1, 2);

    let n2 = check(&shieh_spec(2, 2, 2).unwrap());
    assert_eq!(n2, 1);

    // a random three-constraint spec with n <= 6; degenerate draws (empty or
    // unconstrained codebooks) are rejected deterministically
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let r = MultiplicityVector::new(vec![2, 2, 1]).unwrap();
    let (m, n) = (r.num_symbols(), r.block_length());
    let full_size = enumerate_codebook(
        &CodeSpec::new(r.clone(), InitialVector::ramp(m), vec![]).unwrap(),
        None,
    )
    .unwrap()
    .len();
    let mut checked_random_spec = false;
    for _attempt in 0..100 {
        let constraints: Vec<LinearConstraint> = (0..3)
            .map(|_| {
                let k = rng.gen_range(2..=4usize);
                let terms: Vec<(usize, usize, i64)> = (0..k)
                    .map(|_| {
                        (
                            rng.gen_range(0..m),
                            rng.gen_range(0..n),
                            *[-2i64, -1, 1, 2].choose(&mut rng).unwrap(),
                        )
                    })
                    .collect();
                let relation = if rng.gen_bool(0.5) { Relation::Le } else { Relation::Eq };
                let rhs = rng.gen_range(-1..=2);
                LinearConstraint::new(terms, relation, rhs).unwrap()
            })
            .collect();
        let spec = CodeSpec::new(r.clone(), InitialVector::ramp(m), constraints).unwrap();
        let size = enumerate_codebook(&spec, None).unwrap().len();
        if size == 0 || size == full_size {
            continue;
        }
        assert_eq!(check(&spec), size);
        checked_random_spec = true;
        break;
    }
    assert!(checked_random_spec, "no non-degenerate random spec in 100 draws");

    budget(start, 30.0, "7 (multipermutation and permutation systems agree)");
}

#[test]
fn acceptance_8_objective_equivalences() {
    let start = Instant::now();
    let r = MultiplicityVector::new(vec![2, 2]).unwrap();
    let t = InitialVector::ramp(2);
    let spec = CodeSpec::new(r, t.clone(), vec![]).unwrap();
    let book = enumerate_codebook(&spec, None).unwrap();

    // tie rule everywhere: sort by value, break ties by codebook index
    let rank = |values: &[f64]| -> Vec<usize> {
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
        order
    };

    let mut rng = ChaCha8Rng::seed_from_u64(88);
    for _ in 0..100 {
        let y: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..4.0)).collect();
        let gamma = cost_matrix_awgn(&y, &t).unwrap();
        let costs: Vec<f64> = book.words().map(|w| gamma.word_cost(w).unwrap()).collect();
        // correlation form: maximizing sum_j y_j t_{x_j}
        let correlations: Vec<f64> = book
            .words()
            .map(|w| -w.iter().zip(&y).map(|(&s, yj)| yj * t.level(s)).sum::<f64>())
            .collect();
        assert_eq!(rank(&costs), rank(&correlations));
    }

    for _ in 0..100 {
        let y: Vec<usize> = (0..4).map(|_| rng.gen_range(1..=2)).collect();
        let gamma = cost_matrix_qsc(&y, 0.15, 2).unwrap();
        let costs: Vec<f64> = book.words().map(|w| gamma.word_cost(w).unwrap()).collect();
        let distances: Vec<f64> = book
            .words()
            .map(|w| hamming_distance(w, &y).unwrap() as f64)
            .collect();
        assert_eq!(rank(&costs), rank(&distances));
    }
    budget(start, 5.0, "8 (cost rankings match correlation and Hamming forms)");
}

#[test]
fn acceptance_9_union_bound() {
    let start = Instant::now();
    let r = MultiplicityVector::new(vec![1, 1]).unwrap();
    let t = InitialVector::ramp(2);
    let spec = CodeSpec::new(r, t.clone(), vec![]).unwrap();
    let book = enumerate_codebook(&spec, None).unwrap();
    assert_eq!(book.len(), 2);

    let sigma = 1.0;
    let bound = mpcode::union_bound_awgn(&book, &[1, 2], &t, sigma).unwrap();
    // Q(1/sqrt(2)) to thirty digits: 0.239750061093476731158626673054
    assert!((bound - 0.239_750_061_093_476_73).abs() <= 1e-9);

    let trials: usize = 100_000;
    let transmitted = book.modulated(0, &t).unwrap();
    let mut errors = 0usize;
    for trial in 0..trials {
        let mut rng = channel_rng(90_001, trial as u64);
        let y = sample_awgn(&transmitted, sigma, &mut rng);
        let gamma = cost_matrix_awgn(&y, &t).unwrap();
        let decoded = ml_decode_exhaustive(&book, &gamma).unwrap();
        if decoded.best.symbols() != book.word(0).unwrap() {
            errors += 1;
        }
    }
    let wer = errors as f64 / trials as f64;
    let three_sigma = 3.0 * (bound * (1.0 - bound) / trials as f64).sqrt();
    println!("acceptance 9 monte carlo WER {wer:.5} vs bound {bound:.5} + {three_sigma:.5}");
    assert!(wer <= bound + three_sigma);
    budget(start, 60.0, "9 (union bound value and Monte-Carlo consistency)");
}
