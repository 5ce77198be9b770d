//! Benchmarks for the hot paths: oracle application on a mid-size search
//! state, density/entropy extraction, the minimax query search, and the
//! history span reconstruction.

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use qhalf_core::fiftyrule::{
    classical_query_complexity, enumerate_good_half_tables, KnowledgeState,
};
use qhalf_core::histories::span_reconstruction;
use qhalf_core::problems::{build_family, FamilyKind};
use qhalf_core::runner::grover_success_probabilities;
use qhalf_core::statevec::{apply_unitary, QOp, Register, RegisterSet};

fn bench_search_iteration(c: &mut Criterion) {
    let family = build_family(FamilyKind::Grover, 8, None).unwrap();
    let oracle = family.oracle_unitary();
    let diffusion = QOp::InvertAboutMean {
        target: Register::Argument,
    };
    let state = family.prepare_selected(0).unwrap();
    c.bench_function("search_iteration_n8", |b| {
        b.iter(|| {
            let s = apply_unitary(black_box(&state), &oracle);
            apply_unitary(&s, &diffusion)
        })
    });
}

fn bench_sweep_small(c: &mut Criterion) {
    c.bench_function("sweep_n6_full_schedule", |b| {
        b.iter(|| grover_success_probabilities(black_box(6), 13).unwrap())
    });
}

fn bench_problem_entropy(c: &mut Criterion) {
    let family = build_family(FamilyKind::Simon, 2, None).unwrap();
    let state = family.prepare_initial(family.value_preparation()).unwrap();
    let problem = RegisterSet::single(Register::Problem);
    c.bench_function("problem_entropy_simon2", |b| {
        b.iter(|| {
            black_box(&state)
                .reduced_density(&problem)
                .unwrap()
                .von_neumann_entropy()
        })
    });
}

fn bench_minimax(c: &mut Criterion) {
    let family = build_family(FamilyKind::DeutschJozsa, 3, None).unwrap();
    c.bench_function("minimax_dj3_full_ignorance", |b| {
        b.iter(|| {
            classical_query_complexity(black_box(&family), &KnowledgeState::full(&family)).unwrap()
        })
    });
}

fn bench_span_reconstruction(c: &mut Criterion) {
    let family = build_family(FamilyKind::Grover, 2, None).unwrap();
    let halves = enumerate_good_half_tables(&family, 0);
    c.bench_function("span_reconstruction_grover2", |b| {
        b.iter(|| {
            for half in &halves {
                span_reconstruction(black_box(&family), half).unwrap();
            }
        })
    });
}

criterion_group!(
    benches,
    bench_search_iteration,
    bench_sweep_small,
    bench_problem_entropy,
    bench_minimax,
    bench_span_reconstruction
);
criterion_main!(benches);
