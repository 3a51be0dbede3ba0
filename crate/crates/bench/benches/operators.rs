use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qfock::calculus::{wick_partition, wick_recursive};
use qfock::combinat::{self, Family};
use qfock::dualsys::{commutator_residual, conjugate_series, Strategy};
use qfock::{Deformation, FockSpace, Scalar, Word};

fn gram(c: &mut Criterion) {
    c.bench_function("gram level 6, d=2, q=1/2", |b| {
        b.iter(|| {
            let f = FockSpace::scalar(2, Scalar::ratio(1, 2), 6).unwrap();
            black_box(f.gram(6).unwrap());
        })
    });
}

fn partitions(c: &mut Criterion) {
    c.bench_function("enumerate C(8)", |b| b.iter(|| black_box(combinat::enumerate(Family::C, 8))));
}

fn commutator(c: &mut Criterion) {
    let mut g = c.benchmark_group("commutator d=2 len<=4");
    for (name, strategy) in [("recursive", Strategy::Recursive), ("partition", Strategy::PartitionFormula)] {
        g.bench_function(name, |b| {
            b.iter(|| {
                let f = FockSpace::scalar(2, Scalar::ratio(1, 2), 5).unwrap();
                black_box(commutator_residual(&f, 1, 2, 4, strategy).unwrap());
            })
        });
    }
    g.finish();
}

fn wick(c: &mut Criterion) {
    let def = Deformation::Scalar(Scalar::q());
    let w = Word::from([1, 2, 1, 2, 1]);
    c.bench_function("wick recursive, symbolic, len 5", |b| b.iter(|| black_box(wick_recursive(&def, &w))));
    c.bench_function("wick partition, symbolic, len 5", |b| b.iter(|| black_box(wick_partition(&def, &w))));
}

fn xi(c: &mut Criterion) {
    c.bench_function("conjugate series M=2, d=2, f64", |b| {
        b.iter(|| {
            let f = FockSpace::scalar(2, 0.5f64, 5).unwrap();
            black_box(conjugate_series(&f, 1, 2).unwrap());
        })
    });
}

criterion_group!(benches, gram, partitions, commutator, wick, xi);
criterion_main!(benches);
