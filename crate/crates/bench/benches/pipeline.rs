use criterion::{black_box, criterion_group, criterion_main, Criterion};

use mpcode::{
    cost_matrix_qsc, decode_chebyshev, decode_memoryless, decompose_relaxed, enumerate_codebook,
    shieh_spec, MultiplicityVector, EPS_FEAS_EXACT,
};
use mpcode_bench::random_relaxed;

fn bench_enumerate(c: &mut Criterion) {
    let spec = shieh_spec(2, 6, 3).unwrap();
    c.bench_function("enumerate shieh(2,6,3)", |b| {
        b.iter(|| enumerate_codebook(black_box(&spec), None).unwrap().len())
    });
}

fn bench_decode_chebyshev(c: &mut Criterion) {
    let spec = shieh_spec(2, 6, 3).unwrap();
    let y = [2.0, 1.0, 4.0, 3.0, 6.0, 5.0, 2.0, 1.0, 4.0, 3.0, 6.0, 5.0];
    c.bench_function("decode_chebyshev shieh(2,6,3)", |b| {
        b.iter(|| decode_chebyshev(black_box(&spec), black_box(&y)).unwrap().objective)
    });
}

fn bench_decode_memoryless(c: &mut Criterion) {
    let spec = shieh_spec(2, 4, 2).unwrap();
    let gamma = cost_matrix_qsc(&[1, 2, 1, 2, 3, 4, 3, 4], 0.1, 4).unwrap();
    c.bench_function("decode_memoryless shieh(2,4,2)", |b| {
        b.iter(|| decode_memoryless(black_box(&spec), black_box(&gamma)).unwrap().objective)
    });
}

fn bench_decompose(c: &mut Criterion) {
    let r = MultiplicityVector::new(vec![3, 3, 2, 2]).unwrap();
    let z = random_relaxed(&r, 8, 99);
    c.bench_function("decompose_relaxed m=4 n=10", |b| {
        b.iter(|| decompose_relaxed(black_box(&z), EPS_FEAS_EXACT).unwrap().len())
    });
}

criterion_group!(
    benches,
    bench_enumerate,
    bench_decode_chebyshev,
    bench_decode_memoryless,
    bench_decompose
);
criterion_main!(benches);
