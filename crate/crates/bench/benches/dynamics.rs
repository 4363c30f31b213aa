//! Benchmarks of the pipeline stages at reduced but representative sizes:
//! kernel quadrature, the O(N²) amplitude solve, the O(N²) thermal
//! injection, and the discrete-bath propagation.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use rwa_dynamics::{
    discretize_bath, kernel_restricted_thermal, kernel_zero_t, oracle_population,
    partition_restricted, resolved_window, solve_amplitude, thermal_injection, Dispersion,
    FriedrichsInitial, SolverConfig, TimeGrid,
};
use rwa_dynamics_bench::{grid, standard_density, standard_quadrature};

fn bench_kernel_build(c: &mut Criterion) {
    let density = standard_density();
    let quad = standard_quadrature();
    let mut group = c.benchmark_group("kernel_build");
    for samples in [1_000usize, 4_000] {
        let g = grid(samples);
        group.bench_with_input(BenchmarkId::new("zero_t", samples), &g, |b, g| {
            b.iter(|| kernel_zero_t(&density, *g, &quad).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("boltzmann", samples), &g, |b, g| {
            b.iter(|| kernel_restricted_thermal(&density, 0.5, *g, &quad).unwrap())
        });
    }
    group.finish();
}

fn bench_amplitude_solve(c: &mut Criterion) {
    let density = standard_density();
    let quad = standard_quadrature();
    let mut group = c.benchmark_group("amplitude_solve");
    for samples in [1_000usize, 4_000] {
        let g = grid(samples);
        let kernel = kernel_zero_t(&density, g, &quad).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(samples), &g, |b, g| {
            b.iter(|| solve_amplitude(5.0, &kernel, g.samples(), &SolverConfig::new(g.dt())).unwrap())
        });
    }
    group.finish();
}

fn bench_thermal_injection(c: &mut Criterion) {
    let density = standard_density();
    let quad = standard_quadrature();
    let mut group = c.benchmark_group("thermal_injection");
    for samples in [1_000usize, 4_000] {
        let g = grid(samples);
        let memory = kernel_zero_t(&density, g, &quad).unwrap();
        let thermal = kernel_restricted_thermal(&density, 0.5, g, &quad).unwrap();
        let x = solve_amplitude(5.0, &memory, g.samples(), &SolverConfig::new(g.dt())).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(samples), &x, |b, x| {
            b.iter(|| thermal_injection(x, &thermal).unwrap())
        });
    }
    group.finish();
}

fn bench_discrete_bath(c: &mut Criterion) {
    let density = standard_density();
    let quad = standard_quadrature();
    let window = resolved_window(&density, &quad).unwrap();
    let z = partition_restricted(Dispersion::linear(100.0).unwrap(), 0.5).unwrap();
    let initial = FriedrichsInitial::new(0.3, z, 0.5).unwrap();
    let mut group = c.benchmark_group("discrete_bath_population");
    group.sample_size(10);
    for modes in [500usize, 2_000] {
        let bath = discretize_bath(&density, modes, window).unwrap();
        let g = TimeGrid::new(1e-3, 1_000).unwrap();
        group.bench_with_input(BenchmarkId::from_parameter(modes), &bath, |b, bath| {
            b.iter(|| oracle_population(bath, 5.0, &initial, g).unwrap())
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_kernel_build,
    bench_amplitude_solve,
    bench_thermal_injection,
    bench_discrete_bath
);
criterion_main!(benches);
