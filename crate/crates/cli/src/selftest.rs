//! Golden checks over the bundled worked instances: the 4x10 word/matrix
//! bijection, the duplicated-word permutation pair, the derangement
//! listing, the residue code metrics and the fractional Chebyshev decode.

use mpcode::{
    certificate_check, decode_chebyshev, derangement_spec, enumerate_codebook, hamming_distance,
    matrix_hamming_distance, min_distance, shieh_spec, InitialVector, Metric, MultiplicityVector,
    Multipermutation, PermutationMatrix,
};

use crate::CliError;

type Check = fn() -> Result<(), String>;

pub fn run() -> Result<(), CliError> {
    let checks: Vec<(&str, Check)> = vec![
        ("word/matrix bijection on the 4x10 instance", check_bijection),
        ("duplicated-word distances and unique matrix", check_duplicated_word),
        ("derangement listing for r = (2,2,2)", check_derangement_listing),
        ("residue code size and Chebyshev distance", check_residue_metrics),
        ("fractional Chebyshev decode", check_chebyshev_decode),
    ];

    let mut failures = 0;
    for (name, check) in checks {
        match check() {
            Ok(()) => println!("PASS {name}"),
            Err(why) => {
                failures += 1;
                println!("FAIL {name}: {why}");
            }
        }
    }
    if failures > 0 {
        return Err(CliError::Run(format!("{failures} selftest check(s) failed")));
    }
    Ok(())
}

fn check_bijection() -> Result<(), String> {
    let r = MultiplicityVector::new(vec![2, 3, 2, 3]).map_err(|e| e.to_string())?;
    let word = Multipermutation::new(vec![2, 1, 4, 1, 2, 3, 4, 4, 2, 3], &r)
        .map_err(|e| e.to_string())?;
    let matrix = word.to_matrix(&r).map_err(|e| e.to_string())?;
    let expected = [
        [0, 1, 0, 1, 0, 0, 0, 0, 0, 0],
        [1, 0, 0, 0, 1, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 1, 0, 0, 0, 1],
        [0, 0, 1, 0, 0, 0, 1, 1, 0, 0],
    ];
    for (i, row) in expected.iter().enumerate() {
        for (j, &cell) in row.iter().enumerate() {
            if matrix.entry(i, j) != cell {
                return Err(format!("entry ({}, {}) differs", i + 1, j + 1));
            }
        }
    }
    let t = InitialVector::new(vec![1.0, 2.0, 3.0, 4.0]).map_err(|e| e.to_string())?;
    let modulated = matrix.modulate(&t).map_err(|e| e.to_string())?;
    let expected_word = [2.0, 1.0, 4.0, 1.0, 2.0, 3.0, 4.0, 4.0, 2.0, 3.0];
    if modulated != expected_word {
        return Err("t X does not reproduce the word".into());
    }
    Ok(())
}

fn check_duplicated_word() -> Result<(), String> {
    let p1 = PermutationMatrix::identity(4);
    let p2 = PermutationMatrix::from_col_map(vec![1, 0, 3, 2]).map_err(|e| e.to_string())?;
    let s = [1.0, 1.0, 2.0, 2.0];
    let sp1 = p1.permute_row_vector(&s).map_err(|e| e.to_string())?;
    let sp2 = p2.permute_row_vector(&s).map_err(|e| e.to_string())?;
    if hamming_distance(&sp1, &sp2).map_err(|e| e.to_string())? != 0 {
        return Err("s P1 and s P2 should coincide".into());
    }
    let d = matrix_hamming_distance(&p1.to_multipermutation_matrix(), &p2.to_multipermutation_matrix())
        .map_err(|e| e.to_string())?;
    if d != 8 {
        return Err(format!("matrix distance {d}, expected 8"));
    }

    let r = MultiplicityVector::new(vec![2, 2]).map_err(|e| e.to_string())?;
    let x = Multipermutation::new(vec![1, 1, 2, 2], &r)
        .map_err(|e| e.to_string())?
        .to_matrix(&r)
        .map_err(|e| e.to_string())?;
    if x.to_dense() != vec![1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 1.0, 1.0] {
        return Err("unique matrix for (1,1,2,2) has the wrong block form".into());
    }
    Ok(())
}

fn check_derangement_listing() -> Result<(), String> {
    let r = MultiplicityVector::new(vec![2, 2, 2]).map_err(|e| e.to_string())?;
    let t = InitialVector::new(vec![1.0, 2.0, 3.0]).map_err(|e| e.to_string())?;
    let spec = derangement_spec(&r, &t).map_err(|e| e.to_string())?;
    let book = enumerate_codebook(&spec, None).map_err(|e| e.to_string())?;
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
    if got != expected {
        return Err(format!("listing has {} words, expected the 10 known ones", got.len()));
    }
    Ok(())
}

fn check_residue_metrics() -> Result<(), String> {
    let spec = shieh_spec(2, 6, 3).map_err(|e| e.to_string())?;
    let book = enumerate_codebook(&spec, None).map_err(|e| e.to_string())?;
    if book.len() != 216 {
        return Err(format!("{} codewords, expected 216", book.len()));
    }
    let d_inf = min_distance(&book, Metric::Chebyshev, spec.initial_vector())
        .map_err(|e| e.to_string())?;
    if d_inf != 3.0 {
        return Err(format!("minimum Chebyshev distance {d_inf}, expected 3"));
    }
    Ok(())
}

fn check_chebyshev_decode() -> Result<(), String> {
    let spec = shieh_spec(2, 6, 3).map_err(|e| e.to_string())?;
    let y = [2.0, 1.0, 4.0, 3.0, 6.0, 5.0, 2.0, 1.0, 4.0, 3.0, 6.0, 5.0];
    let result = decode_chebyshev(&spec, &y).map_err(|e| e.to_string())?;
    let delta = result.delta.ok_or("missing delta")?;
    if (delta - 1.0).abs() > 1e-6 {
        return Err(format!("delta {delta}, expected 1"));
    }
    if result.decoded != vec![1, 2, 3, 4, 5, 6, 1, 2, 3, 4, 5, 6] {
        return Err(format!("rounded decode {:?}", result.decoded));
    }
    // the optimum is a fractional face; the certificate must stay false even
    // with a zero integrality tolerance
    if result.certificate || certificate_check(&result.relaxed, 0.0) {
        return Err("solution unexpectedly integral".into());
    }
    Ok(())
}
