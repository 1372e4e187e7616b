use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use spinboson_core::*;

fn fig2_system() -> SystemHamiltonian {
    SystemHamiltonian::new(BareParameters {
        eps0: EnergyWavenumber(10570.0),
        eps_h: EnergyWavenumber(12108.0),
        eps_b: EnergyWavenumber(12000.0),
        eps_hb: EnergyWavenumber(0.0),
        j0: EnergyWavenumber(20.0),
        kappa0: EnergyWavenumber(210.0),
        gamma1: 3e-6,
        gamma2: 3e-6,
        t1: TimeFs(30.0),
    })
    .unwrap()
}

fn fig2_bath() -> BathSpec {
    BathSpec::new(
        1.0,
        0.75,
        EnergyWavenumber(2000.0),
        Temperature::new(77.0).unwrap(),
    )
    .unwrap()
}

fn memory_length(c: &mut Criterion) {
    let sys = fig2_system();
    let dt = TimeFs(5.0);
    let kernel = influence_coefficients(&fig2_bath(), dt, 6).unwrap();
    let rho0 = initial_state();

    let mut group = c.benchmark_group("propagate_600fs");
    for dk_max in [0usize, 1, 3, 5, 6] {
        group.bench_with_input(BenchmarkId::from_parameter(dk_max), &dk_max, |b, &dk| {
            b.iter(|| propagate(&sys, &kernel, black_box(&rho0), dt, 120, dk).unwrap())
        });
    }
    group.finish();
}

fn closed_system(c: &mut Criterion) {
    let sys = fig2_system();
    let rho0 = initial_state();
    c.bench_function("unitary_evolution_600fs", |b| {
        b.iter(|| {
            unitary_evolution(&sys, black_box(&rho0), TimeFs(600.0), &OdeConfig::default()).unwrap()
        })
    });
    c.bench_function("step_propagator", |b| {
        b.iter(|| step_propagator(&sys, black_box(TimeFs(12.5)), TimeFs(5.0)))
    });
}

criterion_group!(benches, memory_length, closed_system);
criterion_main!(benches);
