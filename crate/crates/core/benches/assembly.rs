//! Assembly and dense-algebra timings. Run once with the default features and
//! once with `--no-default-features` to compare the rayon and sequential
//! paths; the group name records which one was measured.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use eringen_core::assembly::OuterDomainMode;
use eringen_core::linalg::sym_eigvals;
use eringen_core::{
    assemble_heterogeneous, assemble_mass_l2, assemble_nonlocal_stiffness, build_space, cholesky,
    gen_eig_extremes, KernelSpec, StiffnessProfile,
};

fn mode_label() -> &'static str {
    if eringen_core::par::is_parallel() {
        "rayon"
    } else {
        "sequential"
    }
}

fn nonlocal(c: &mut Criterion) {
    let mut group = c.benchmark_group(format!("nonlocal-assembly/{}", mode_label()));
    let riesz = KernelSpec::riesz(2.0 / 3.0).unwrap();
    for n in [128, 512] {
        let space = build_space(n, 1).unwrap();
        group.bench_with_input(BenchmarkId::new("riesz-p1", n), &space, |b, s| {
            b.iter(|| assemble_nonlocal_stiffness(black_box(s), &riesz, 1.0).unwrap())
        });
        let p2 = build_space(n, 2).unwrap();
        group.bench_with_input(BenchmarkId::new("cubic-p2", n), &p2, |b, s| {
            b.iter(|| {
                assemble_nonlocal_stiffness(black_box(s), &KernelSpec::SmoothCubic, 1.0).unwrap()
            })
        });
    }
    group.finish();
}

fn heterogeneous(c: &mut Criterion) {
    let mut group = c.benchmark_group(format!("heterogeneous-assembly/{}", mode_label()));
    group.sample_size(10);
    let profile = StiffnessProfile::constant(1.0).unwrap();
    for n in [16, 64] {
        let space = build_space(n, 1).unwrap();
        group.bench_with_input(BenchmarkId::new("full-line", n), &space, |b, s| {
            b.iter(|| {
                assemble_heterogeneous(
                    black_box(s),
                    2.0 / 3.0,
                    &profile,
                    OuterDomainMode::full_line(),
                )
                .unwrap()
            })
        });
    }
    group.finish();
}

fn dense(c: &mut Criterion) {
    let mut group = c.benchmark_group(format!("dense/{}", mode_label()));
    group.sample_size(10);
    let riesz = KernelSpec::riesz(2.0 / 3.0).unwrap();
    for n in [128, 256] {
        let space = build_space(n, 1).unwrap();
        let k = assemble_nonlocal_stiffness(&space, &riesz, 1.0).unwrap();
        let m = assemble_mass_l2(&space);
        group.bench_with_input(BenchmarkId::new("cholesky", n), &k, |b, k| {
            b.iter(|| cholesky(black_box(k)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("eigvals", n), &k, |b, k| {
            b.iter(|| sym_eigvals(black_box(k)).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("gen-eig", n), &(k, m), |b, (k, m)| {
            b.iter(|| gen_eig_extremes(black_box(k), m).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, nonlocal, heterogeneous, dense);
criterion_main!(benches);
