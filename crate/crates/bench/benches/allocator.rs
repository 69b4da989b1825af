use criterion::{criterion_group, criterion_main, BatchSize, BenchmarkId, Criterion};

use omegakit::kc_oracle::kc_ref;
use omegakit::verify::gen;
use omegakit::{allocate_lengths, dyadic_decompose};

fn lengths(count: usize) -> Vec<usize> {
    let mut rng = gen::rng(1);
    loop {
        let v = gen::kraft_lengths(&mut rng, count, 24);
        if v.len() * 10 >= count * 9 {
            return v;
        }
    }
}

fn allocation(c: &mut Criterion) {
    let mut g = c.benchmark_group("allocate");
    for count in [16, 64, 256] {
        let ls = lengths(count);
        g.bench_with_input(BenchmarkId::new("allocator", count), &ls, |b, ls| {
            b.iter(|| allocate_lengths(ls).unwrap())
        });
        let mut rev = ls.clone();
        rev.reverse();
        g.bench_with_input(BenchmarkId::new("oracle", count), &rev, |b, rev| b.iter(|| kc_ref(rev)));
    }
    g.finish();
}

fn decomposition(c: &mut Criterion) {
    let mut g = c.benchmark_group("decompose");
    for k in [10, 50, 200] {
        g.bench_function(BenchmarkId::from_parameter(k), |b| {
            b.iter_batched(
                || gen::increasing_sequence(&mut gen::rng(k as u64), k),
                |seq| dyadic_decompose(&seq, k).unwrap(),
                BatchSize::SmallInput,
            )
        });
    }
    g.finish();
}

criterion_group!(benches, allocation, decomposition);
criterion_main!(benches);
