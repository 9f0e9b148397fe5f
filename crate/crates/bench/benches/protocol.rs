use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use qct_core::channel::{random_cptp, KrausChannel};
use qct_core::matrix::{haar_random_unitary, random_gaussian_matrix};
use qct_core::protocol::{
    assemble, sample_ancilla_noise, AncillaNoiseKind, AncillaNoiseSpec, AncillaOrder,
    CorrectionVariant,
};
use qct_core::weyl::WeylFrame;

fn bench_twirl(c: &mut Criterion) {
    let frame = WeylFrame::new(5).unwrap();
    let f = random_gaussian_matrix(5, 5, 1);
    c.bench_function("twirl d=5", |b| {
        b.iter(|| frame.twirl(black_box(&f)).unwrap())
    });
}

fn bench_haar(c: &mut Criterion) {
    c.bench_function("haar unitary 125", |b| {
        let mut seed = 0u64;
        b.iter(|| {
            seed = seed.wrapping_add(1);
            haar_random_unitary(black_box(125), seed)
        })
    });
}

fn bench_choi(c: &mut Criterion) {
    let ch = random_cptp(5, 4, 3).unwrap();
    c.bench_function("choi d=5 rank=4", |b| b.iter(|| black_box(&ch).choi()));
}

fn bench_pipeline(c: &mut Criterion) {
    for d in [2usize, 3, 5] {
        let system = random_cptp(d, 4, 7).unwrap();
        let ancilla = if d == 2 {
            sample_ancilla_noise(&AncillaNoiseSpec {
                kind: AncillaNoiseKind::General,
                d,
                seed: 11,
            })
            .unwrap()
        } else {
            KrausChannel::identity(d * d)
        };
        c.bench_function(&format!("assemble + effective choi d={d}"), |b| {
            b.iter(|| {
                let assembly = assemble(
                    black_box(&system),
                    black_box(&ancilla),
                    d,
                    CorrectionVariant::DirectUnitary,
                    AncillaOrder::AB,
                )
                .unwrap();
                assembly
                    .effective_system_choi()
                    .entanglement_fidelity()
                    .unwrap()
            })
        });
    }
}

criterion_group!(benches, bench_twirl, bench_haar, bench_choi, bench_pipeline);
criterion_main!(benches);
