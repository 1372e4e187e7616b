//! Reduced density matrix propagation by iterative tensor multiplication.
//!
//! Forward and backward paths are discretized on the σ_z eigenbasis at
//! t_k = k·dt. Each path point carries a pair (s⁺, s⁻) ∈ {±1}², encoded as
//! `2·i⁺ + i⁻` with index 0 ↔ |H⟩ (s = +1) and 1 ↔ |B⟩ (s = −1). Between
//! points the bare system propagates with the midpoint propagator; at each
//! point the bath contributes
//!
//! ```text
//! exp(−(s⁺_k − s⁻_k)(η s⁺_j − η* s⁻_j))
//! ```
//!
//! for every earlier point j within `dk_max` steps. The augmented tensor
//! holds the last `dk_max + 1` points; the oldest one is summed out once it
//! drops out of the memory window.

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::bath::{InfluenceKernel, Slot};
use crate::driven_system::{step_propagator, SystemHamiltonian};
use crate::error::{Error, Result};
use crate::units::TimeFs;

const SIGN: [f64; 2] = [1.0, -1.0];

/// 2×2 density matrix in the {|H⟩, |B⟩} basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReducedDensity(pub Matrix2<Complex64>);

impl ReducedDensity {
    pub fn matrix(&self) -> &Matrix2<Complex64> {
        &self.0
    }

    pub fn rho_hh(&self) -> f64 {
        self.0[(0, 0)].re
    }

    pub fn rho_bb(&self) -> f64 {
        self.0[(1, 1)].re
    }

    /// Off-diagonal coherence ⟨H|ρ|B⟩.
    pub fn rho_hb(&self) -> Complex64 {
        self.0[(0, 1)]
    }

    pub fn trace(&self) -> Complex64 {
        self.0.trace()
    }

    /// max |ρ − ρ†|.
    pub fn hermiticity_defect(&self) -> f64 {
        (self.0 - self.0.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }

    /// Smaller eigenvalue of the Hermitian part.
    pub fn min_eigenvalue(&self) -> f64 {
        let a = self.0[(0, 0)].re;
        let d = self.0[(1, 1)].re;
        let b = 0.5 * (self.0[(0, 1)] + self.0[(1, 0)].conj());
        0.5 * (a + d) - (0.25 * (a - d).powi(2) + b.norm_sqr()).sqrt()
    }

    fn entry(&self, x: usize) -> Complex64 {
        self.0[(x >> 1, x & 1)]
    }
}

/// (|H⟩ + |B⟩)/√2 as a density matrix.
pub fn initial_state() -> ReducedDensity {
    ReducedDensity(Matrix2::from_element(Complex64::new(0.5, 0.0)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub t: TimeFs,
    pub rho: ReducedDensity,
}

/// Time series of reduced density matrices, strictly increasing in t.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.t.0).collect()
    }

    pub fn coherence_abs(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.rho.rho_hb().norm()).collect()
    }

    pub fn coherence_re(&self) -> Vec<f64> {
        self.samples.iter().map(|s| s.rho.rho_hb().re).collect()
    }

    /// Linear interpolation of |ρ_HB| at `t`, clamped to the sampled range.
    pub fn coherence_abs_at(&self, t: f64) -> Option<f64> {
        let first = self.samples.first()?;
        if t <= first.t.0 {
            return Some(first.rho.rho_hb().norm());
        }
        for w in self.samples.windows(2) {
            let (a, b) = (&w[0], &w[1]);
            if t <= b.t.0 {
                let f = (t - a.t.0) / (b.t.0 - a.t.0);
                let (ya, yb) = (a.rho.rho_hb().norm(), b.rho.rho_hb().norm());
                return Some(ya + f * (yb - ya));
            }
        }
        self.samples.last().map(|s| s.rho.rho_hb().norm())
    }
}

/// Per-step bath factors between the newest point (digit 0) and the point
/// `p` steps earlier.
struct FactorTables {
    tables: Vec<[[Complex64; 4]; 4]>,
}

impl FactorTables {
    fn new(kernel: &InfluenceKernel, k: usize, points: usize, later: Slot) -> Self {
        let tables = (0..points)
            .map(|p| {
                let earlier = if k == p { Slot::Start } else { Slot::Interior };
                let eta = kernel.eta(p, later, earlier);
                let mut t = [[Complex64::default(); 4]; 4];
                for (xk, row) in t.iter_mut().enumerate() {
                    let dk = SIGN[xk >> 1] - SIGN[xk & 1];
                    for (xj, v) in row.iter_mut().enumerate() {
                        let (sp, sm) = if p == 0 {
                            (SIGN[xk >> 1], SIGN[xk & 1])
                        } else {
                            (SIGN[xj >> 1], SIGN[xj & 1])
                        };
                        *v = (-(eta * sp - eta.conj() * sm) * dk).exp();
                    }
                }
                t
            })
            .collect();
        Self { tables }
    }

    fn weight(&self, idx: usize) -> Complex64 {
        let xk = idx & 3;
        let mut w = self.tables[0][xk][xk];
        for (p, t) in self.tables.iter().enumerate().skip(1) {
            w *= t[xk][(idx >> (2 * p)) & 3];
        }
        w
    }
}

/// Propagates `rho0` for `n_steps` steps of `dt`, keeping bath memory for
/// `dk_max` steps. The kernel must have been built for the same `dt` and a
/// memory of at least `dk_max`; it is truncated if longer.
pub fn propagate(
    sys: &SystemHamiltonian,
    kernel: &InfluenceKernel,
    rho0: &ReducedDensity,
    dt: TimeFs,
    n_steps: usize,
    dk_max: usize,
) -> Result<Trajectory> {
    if n_steps == 0 {
        return Err(Error::Config("n_steps must be at least 1".into()));
    }
    if (kernel.dt().0 - dt.0).abs() > 1e-12 * dt.0.abs() {
        return Err(Error::Config(format!(
            "kernel built for dt = {}, propagation uses dt = {dt}",
            kernel.dt()
        )));
    }
    if kernel.dk_max() < dk_max {
        return Err(Error::Config(format!(
            "kernel memory {} shorter than requested dk_max = {dk_max}",
            kernel.dk_max()
        )));
    }

    let mut samples = Vec::with_capacity(n_steps + 1);
    samples.push(Sample {
        t: TimeFs(0.0),
        rho: *rho0,
    });

    let mut tensor: Vec<Complex64> = (0..4).map(|x| rho0.entry(x)).collect();
    let mut points = 1usize;

    for k in 0..n_steps {
        if k > 0 {
            let end = FactorTables::new(kernel, k, points, Slot::End);
            let mut rho = Matrix2::zeros();
            for (idx, v) in tensor.iter().enumerate() {
                let x = idx & 3;
                rho[(x >> 1, x & 1)] += v * end.weight(idx);
            }
            samples.push(Sample {
                t: TimeFs(k as f64 * dt.0),
                rho: ReducedDensity(rho),
            });
        }

        let later = if k == 0 { Slot::Start } else { Slot::Interior };
        let factors = FactorTables::new(kernel, k, points, later);
        let u = step_propagator(sys, TimeFs(k as f64 * dt.0), dt);
        let mut transfer = [[Complex64::default(); 4]; 4];
        for (xn, row) in transfer.iter_mut().enumerate() {
            for (xo, v) in row.iter_mut().enumerate() {
                *v = u[(xn >> 1, xo >> 1)] * u[(xn & 1, xo & 1)].conj();
            }
        }

        let full = points == dk_max + 1;
        let next_points = if full { points } else { points + 1 };
        let keep = if full {
            1usize << (2 * (points - 1))
        } else {
            tensor.len()
        };
        let mut next = vec![Complex64::default(); 1 << (2 * next_points)];
        for (idx, v) in tensor.iter().enumerate() {
            let weighted = v * factors.weight(idx);
            let xo = idx & 3;
            let rest = (idx % keep) << 2;
            for (xn, row) in transfer.iter().enumerate() {
                next[rest | xn] += row[xo] * weighted;
            }
        }
        if next.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite { step: k + 1 });
        }
        tensor = next;
        points = next_points;
    }

    let k = n_steps;
    let end = FactorTables::new(kernel, k, points, Slot::End);
    let mut rho = Matrix2::zeros();
    for (idx, v) in tensor.iter().enumerate() {
        let x = idx & 3;
        rho[(x >> 1, x & 1)] += v * end.weight(idx);
    }
    samples.push(Sample {
        t: TimeFs(k as f64 * dt.0),
        rho: ReducedDensity(rho),
    });

    Ok(Trajectory { samples })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub time: f64,
    pub amplitude: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct PeakAnalysis {
    pub peaks: Vec<Peak>,
    /// Differences between successive peak times.
    pub periods: Vec<f64>,
}

/// Interior local maxima of |ρ_HB(t)|, refined by a parabola through the
/// three samples around each maximum.
pub fn peak_analysis(traj: &Trajectory) -> PeakAnalysis {
    peaks_of(&traj.times(), &traj.coherence_abs())
}

pub fn peaks_of(times: &[f64], values: &[f64]) -> PeakAnalysis {
    let mut peaks = Vec::new();
    for i in 1..values.len().saturating_sub(1) {
        let (a, b, c) = (values[i - 1], values[i], values[i + 1]);
        if !(b > a && b >= c) {
            continue;
        }
        let curvature = a - 2.0 * b + c;
        let (offset, amplitude) = if curvature < 0.0 {
            let d = 0.5 * (a - c) / curvature;
            (d, b - 0.25 * (a - c) * d)
        } else {
            (0.0, b)
        };
        let step = if offset >= 0.0 {
            times[i + 1] - times[i]
        } else {
            times[i] - times[i - 1]
        };
        peaks.push(Peak {
            time: times[i] + offset * step,
            amplitude,
        });
    }
    let periods = peaks.windows(2).map(|w| w[1].time - w[0].time).collect();
    PeakAnalysis { peaks, periods }
}
