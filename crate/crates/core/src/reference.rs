//! Baselines: closed-system evolution by an adaptive Runge–Kutta integrator,
//! and the memoryless (`dk_max = 0`) limit of the path-integral propagator.

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::bath::InfluenceKernel;
use crate::driven_system::{hamiltonian_matrix, SystemHamiltonian};
use crate::error::{Error, Result};
use crate::quapi::{propagate, ReducedDensity, Sample, Trajectory};
use crate::units::{TimeFs, RAD_PER_FS_PER_WAVENUMBER};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeConfig {
    pub rel_tol: f64,
    pub abs_tol: f64,
    pub max_step: TimeFs,
    /// Spacing of the returned samples.
    pub output_step: TimeFs,
}

impl Default for OdeConfig {
    fn default() -> Self {
        Self {
            rel_tol: 1e-10,
            abs_tol: 1e-12,
            max_step: TimeFs(1.0),
            output_step: TimeFs(5.0),
        }
    }
}

type Mat = Matrix2<Complex64>;

// Dormand–Prince 5(4) tableau.
const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

fn liouville(sys: &SystemHamiltonian, t: f64, rho: &Mat) -> Mat {
    let h = hamiltonian_matrix(sys, TimeFs(t)) * Complex64::new(RAD_PER_FS_PER_WAVENUMBER, 0.0);
    let comm = h * rho - rho * h;
    comm * Complex64::new(0.0, -1.0)
}

/// One Dormand–Prince step; returns the 5th-order solution and the scaled
/// error norm.
fn dopri_step(sys: &SystemHamiltonian, t: f64, h: f64, rho: &Mat, cfg: &OdeConfig) -> (Mat, f64) {
    let mut k: [Mat; 7] = [Mat::zeros(); 7];
    for stage in 0..7 {
        let mut y = *rho;
        for (j, kj) in k.iter().enumerate().take(stage) {
            if A[stage][j] != 0.0 {
                y += kj * Complex64::new(h * A[stage][j], 0.0);
            }
        }
        k[stage] = liouville(sys, t + C[stage] * h, &y);
    }
    let mut y5 = *rho;
    let mut diff = Mat::zeros();
    for s in 0..7 {
        y5 += k[s] * Complex64::new(h * B5[s], 0.0);
        diff += k[s] * Complex64::new(h * (B5[s] - B4[s]), 0.0);
    }
    let err = diff
        .iter()
        .zip(rho.iter().zip(y5.iter()))
        .map(|(d, (a, b))| d.norm() / (cfg.abs_tol + cfg.rel_tol * a.norm().max(b.norm())))
        .fold(0.0, f64::max);
    (y5, err)
}

/// Integrates dρ/dt = −i[H₀(t), ρ] from t = 0 to `t_end`, sampling every
/// `cfg.output_step`.
pub fn unitary_evolution(
    sys: &SystemHamiltonian,
    rho0: &ReducedDensity,
    t_end: TimeFs,
    cfg: &OdeConfig,
) -> Result<Trajectory> {
    if t_end.0.is_nan() || t_end.0 <= 0.0 {
        return Err(Error::Domain(format!(
            "t_end must be positive, got {t_end}"
        )));
    }
    if !(cfg.rel_tol > 0.0 && cfg.abs_tol > 0.0 && cfg.max_step.0 > 0.0 && cfg.output_step.0 > 0.0)
    {
        return Err(Error::Domain(
            "ODE tolerances and steps must be positive".into(),
        ));
    }

    let n_out = (t_end.0 / cfg.output_step.0 - 1e-9).ceil() as usize;
    let mut samples = Vec::with_capacity(n_out + 1);
    samples.push(Sample {
        t: TimeFs(0.0),
        rho: *rho0,
    });

    let mut rho = rho0.0;
    let mut t = 0.0;
    let mut h = cfg.max_step.0.min(cfg.output_step.0);
    for i in 1..=n_out {
        let target = (i as f64 * cfg.output_step.0).min(t_end.0);
        while t < target {
            let step = h.min(target - t).min(cfg.max_step.0);
            if step < 1e-12 * target.max(1.0) && target - t > step {
                return Err(Error::StepUnderflow { t, h: step });
            }
            let (next, err) = dopri_step(sys, t, step, &rho, cfg);
            if err <= 1.0 {
                t = if target - t <= step { target } else { t + step };
                rho = next;
            }
            let factor = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            h = step * factor;
        }
        samples.push(Sample {
            t: TimeFs(target),
            rho: ReducedDensity(rho),
        });
    }
    Ok(Trajectory { samples })
}

/// The same propagator with bath memory confined to a single time slice.
pub fn markov_propagate(
    sys: &SystemHamiltonian,
    kernel: &InfluenceKernel,
    rho0: &ReducedDensity,
    dt: TimeFs,
    n_steps: usize,
) -> Result<Trajectory> {
    propagate(sys, kernel, rho0, dt, n_steps, 0)
}
