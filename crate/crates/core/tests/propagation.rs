//! Reduced dynamics against exact limits and structural invariants.

use num_complex::Complex64;
use proptest::prelude::*;
use spinboson_core::units::RAD_PER_FS_PER_WAVENUMBER;
use spinboson_core::*;

fn params(split: f64, j0: f64, kappa0: f64) -> BareParameters {
    BareParameters {
        eps0: EnergyWavenumber(10570.0),
        eps_h: EnergyWavenumber(12000.0 + split),
        eps_b: EnergyWavenumber(12000.0),
        eps_hb: EnergyWavenumber(0.0),
        j0: EnergyWavenumber(j0),
        kappa0: EnergyWavenumber(kappa0),
        gamma1: 3e-6,
        gamma2: 3e-6,
        t1: TimeFs(30.0),
    }
}

fn bath(s: f64, xi: f64, wc: f64, t: f64) -> BathSpec {
    BathSpec::new(s, xi, EnergyWavenumber(wc), Temperature::new(t).unwrap()).unwrap()
}

fn sup_diff(a: &Trajectory, b: &Trajectory) -> f64 {
    assert_eq!(a.len(), b.len());
    a.samples
        .iter()
        .zip(&b.samples)
        .map(|(x, y)| {
            assert!((x.t.0 - y.t.0).abs() < 1e-9);
            (x.rho.0 - y.rho.0)
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max)
        })
        .fold(0.0, f64::max)
}

#[test]
fn pure_dephasing_with_full_memory_is_exact() {
    // No tunnelling and no pulse: populations are frozen and the coherence
    // picks up exp(−4 Re g(t)), which the zero-temperature Ohmic bath gives
    // in closed form.
    let (xi, wc) = (0.3, 500.0);
    let sys = SystemHamiltonian::new(params(108.0, 0.0, 0.0)).unwrap();
    let spec = bath(1.0, xi, wc, 1e-3);
    let dt = TimeFs(5.0);
    let n = 7;
    let kernel = influence_coefficients(&spec, dt, n).unwrap();
    let traj = propagate(&sys, &kernel, &initial_state(), dt, n, n).unwrap();
    for s in &traj.samples {
        let t = s.t.0;
        let w = wc * RAD_PER_FS_PER_WAVENUMBER * t;
        let g = 0.5 * xi * (Complex64::new(1.0, w).ln() - Complex64::new(0.0, w));
        let phase = Complex64::new(0.0, -108.0 * RAD_PER_FS_PER_WAVENUMBER * t).exp();
        let want = 0.5 * phase * (-4.0 * g.re).exp();
        assert!(
            (s.rho.rho_hb() - want).norm() < 1e-9,
            "t = {t}: {} vs {want}",
            s.rho.rho_hb()
        );
        assert!((s.rho.rho_hh() - 0.5).abs() < 1e-12);
    }
}

#[test]
fn uncoupled_bath_reproduces_closed_system() {
    let sys = SystemHamiltonian::new(params(108.0, 20.0, 210.0)).unwrap();
    let dt = TimeFs(5.0);
    let rho0 = initial_state();
    let kernel = influence_coefficients(&bath(1.0, 0.0, 2000.0, 77.0), dt, 3).unwrap();
    let quapi = propagate(&sys, &kernel, &rho0, dt, 120, 3).unwrap();
    let exact = unitary_evolution(&sys, &rho0, TimeFs(600.0), &OdeConfig::default()).unwrap();
    assert!(sup_diff(&quapi, &exact) < 1e-3);
}

#[test]
fn midpoint_error_is_second_order() {
    let sys = SystemHamiltonian::new(params(108.0, 20.0, 250.0)).unwrap();
    let rho0 = initial_state();
    let cfg = OdeConfig {
        output_step: TimeFs(40.0),
        ..Default::default()
    };
    let exact = unitary_evolution(&sys, &rho0, TimeFs(400.0), &cfg).unwrap();
    let err = |dt: f64| {
        let n = (400.0 / dt).round() as usize;
        let stride = (40.0 / dt).round() as usize;
        let kernel = InfluenceKernel::zero(TimeFs(dt), 0);
        let traj = propagate(&sys, &kernel, &rho0, TimeFs(dt), n, 0).unwrap();
        let coarse = Trajectory {
            samples: traj.samples.iter().step_by(stride).copied().collect(),
        };
        sup_diff(&coarse, &exact)
    };
    let (e1, e2) = (err(20.0), err(10.0));
    assert!(e1 / e2 > 3.0, "{e1} / {e2}");
}

#[test]
fn markov_limit_uses_only_same_slice_terms() {
    let sys = SystemHamiltonian::new(params(108.0, 20.0, 210.0)).unwrap();
    let dt = TimeFs(5.0);
    let kernel = influence_coefficients(&bath(1.0, 0.75, 2000.0, 77.0), dt, 3).unwrap();
    let a = markov_propagate(&sys, &kernel, &initial_state(), dt, 40).unwrap();
    let b = propagate(&sys, &kernel.truncated(0), &initial_state(), dt, 40, 0).unwrap();
    assert_eq!(a, b);
}

#[test]
fn propagation_is_deterministic() {
    let sys = SystemHamiltonian::new(params(108.0, 20.0, 210.0)).unwrap();
    let dt = TimeFs(5.0);
    let kernel = influence_coefficients(&bath(1.0, 0.75, 2000.0, 77.0), dt, 3).unwrap();
    let a = propagate(&sys, &kernel, &initial_state(), dt, 60, 3).unwrap();
    let b = propagate(&sys, &kernel, &initial_state(), dt, 60, 3).unwrap();
    for (x, y) in a.samples.iter().zip(&b.samples) {
        for (p, q) in x.rho.0.iter().zip(y.rho.0.iter()) {
            assert_eq!(p.re.to_bits(), q.re.to_bits());
            assert_eq!(p.im.to_bits(), q.im.to_bits());
        }
    }
}

#[test]
fn rejects_mismatched_kernels() {
    let sys = SystemHamiltonian::new(params(108.0, 20.0, 210.0)).unwrap();
    let kernel = InfluenceKernel::zero(TimeFs(5.0), 2);
    let rho0 = initial_state();
    assert!(matches!(
        propagate(&sys, &kernel, &rho0, TimeFs(2.5), 10, 2),
        Err(Error::Config(_))
    ));
    assert!(matches!(
        propagate(&sys, &kernel, &rho0, TimeFs(5.0), 10, 3),
        Err(Error::Config(_))
    ));
    assert!(matches!(
        propagate(&sys, &kernel, &rho0, TimeFs(5.0), 0, 2),
        Err(Error::Config(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn trace_and_hermiticity_survive_any_bath(
        split in 0.0f64..200.0,
        j0 in 0.0f64..40.0,
        kappa0 in 0.0f64..300.0,
        s in 0.4f64..2.5,
        xi in 0.0f64..1.0,
        temp in 1.0f64..400.0,
        dk_max in 0usize..4,
    ) {
        let sys = SystemHamiltonian::new(params(split, j0, kappa0)).unwrap();
        let dt = TimeFs(5.0);
        let kernel = influence_coefficients(&bath(s, xi, 2000.0, temp), dt, dk_max).unwrap();
        let traj = propagate(&sys, &kernel, &initial_state(), dt, 40, dk_max).unwrap();
        for sample in &traj.samples {
            prop_assert!((sample.rho.trace() - 1.0).norm() < 1e-4);
            prop_assert!(sample.rho.hermiticity_defect() < 1e-10);
        }
    }
}
