use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use farey_core::exact_farey::knauf_partition_with;
use farey_core::hankel::{reciprocity_residual, FamilyKind};
use farey_core::laguerre_space::SpaceParams;
use farey_core::par::Exec;
use farey_core::polynomial_eigen::mk_spectra;
use farey_core::transfer_operators::assemble_n_kernel_with;

const EXECS: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn partition(c: &mut Criterion) {
    let mut g = c.benchmark_group("partition_n20");
    for (name, exec) in EXECS {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| knauf_partition_with(exec, black_box(20), 1.0).unwrap())
        });
    }
    g.finish();
}

fn kernel_n(c: &mut Criterion) {
    let params = SpaceParams::new(1.0, 24).unwrap();
    let mut g = c.benchmark_group("kernel_n_K24");
    g.sample_size(10);
    for (name, exec) in EXECS {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| assemble_n_kernel_with(exec, black_box(&params), 120).unwrap())
        });
    }
    g.finish();
}

fn hankel(c: &mut Criterion) {
    let mut g = c.benchmark_group("hankel_phi_p1_n8");
    g.sample_size(10);
    for (name, exec) in EXECS {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| reciprocity_residual(exec, FamilyKind::Phi, black_box(1.0), 8).unwrap())
        });
    }
    g.finish();
}

fn mk(c: &mut Criterion) {
    let ks: Vec<usize> = (1..=14).collect();
    let mut g = c.benchmark_group("mk_spectra_1_to_14");
    g.sample_size(10);
    for (name, exec) in EXECS {
        g.bench_function(BenchmarkId::from_parameter(name), |b| b.iter(|| mk_spectra(exec, black_box(&ks)).unwrap()));
    }
    g.finish();
}

criterion_group!(benches, partition, kernel_n, hankel, mk);
criterion_main!(benches);
