//! The photon-driven two-level system.
//!
//! Two Gaussian pulses dress the {|H⟩, |B⟩} pair through a canonical
//! transformation that decouples the ground and doubly excited states. What
//! remains is H₀(t) = ε(t)/2 σ_z + Δ(t)/2 σ_x with
//!
//! ```text
//! ε(t) = ε_H − ε_B + κ²(t)(α − β)
//! Δ(t) = 2 J₀     + κ²(t)(α + β)
//! ```
//!
//! where κ(t) is the pulse envelope times the dipole coupling. Optical
//! carriers are not resolved: κ(t) is the real envelope sum.

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::units::{
    wavenumber_to_angular_frequency, EnergyWavenumber, TimeFs, SPEED_OF_LIGHT_CM_PER_S,
};

/// Above this value of max κ·max(α, β) the perturbative transformation is
/// suspect and a warning should be raised.
pub const SMALL_PARAMETER_WARNING: f64 = 0.5;

/// Chromophore energies, couplings and pulse shape. Pulse 2 is centered at
/// t = 0 and pulse 1 at t = −t1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BareParameters {
    pub eps0: EnergyWavenumber,
    pub eps_h: EnergyWavenumber,
    pub eps_b: EnergyWavenumber,
    /// Doubly excited state; decoupled from the reduced dynamics.
    pub eps_hb: EnergyWavenumber,
    pub j0: EnergyWavenumber,
    /// Peak dipole-field coupling μ·E₀.
    pub kappa0: EnergyWavenumber,
    /// Pulse decay constants, fs⁻².
    pub gamma1: f64,
    pub gamma2: f64,
    pub t1: TimeFs,
}

impl BareParameters {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.eps0.0,
            self.eps_h.0,
            self.eps_b.0,
            self.eps_hb.0,
            self.j0.0,
            self.kappa0.0,
            self.gamma1,
            self.gamma2,
            self.t1.0,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::Domain("bare parameters must be finite".into()));
        }
        if self.eps_h.0 <= self.eps0.0 || self.eps_b.0 <= self.eps0.0 {
            return Err(Error::Domain(
                "excited-state energies must lie above the ground state".into(),
            ));
        }
        if self.gamma1 <= 0.0 || self.gamma2 <= 0.0 {
            return Err(Error::Domain(
                "pulse decay constants must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Coefficients of the canonical transformation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveDrive {
    /// (ε_B − ε₀ − J₀)/Ω, in cm.
    pub alpha: f64,
    /// (ε_H − ε₀ − J₀)/Ω, in cm.
    pub beta: f64,
    /// (ε_H − ε₀)(ε_B − ε₀) − J₀², in cm⁻².
    pub omega: f64,
    /// max_t κ(t) · max(α, β).
    pub small_parameter: f64,
}

impl EffectiveDrive {
    pub fn exceeds_small_parameter(&self) -> bool {
        self.small_parameter > SMALL_PARAMETER_WARNING
    }
}

/// κ(t) = κ₀ [exp(−Γ₁(t + t₁)²) + exp(−Γ₂ t²)].
pub fn kappa(params: &BareParameters, t: TimeFs) -> EnergyWavenumber {
    let t = t.0;
    let first = (-params.gamma1 * (t + params.t1.0).powi(2)).exp();
    let second = (-params.gamma2 * t * t).exp();
    EnergyWavenumber(params.kappa0.0 * (first + second))
}

fn peak_kappa(params: &BareParameters) -> f64 {
    // Both envelopes are contained in this window; the sum peaks between
    // the two pulse centers.
    let width = 1.0 / params.gamma1.min(params.gamma2).sqrt();
    let lo = -params.t1.0.max(0.0) - 6.0 * width;
    let hi = params.t1.0.abs() + 6.0 * width;
    let n = 20_000;
    (0..=n)
        .map(|i| {
            kappa(params, TimeFs(lo + (hi - lo) * i as f64 / n as f64))
                .0
                .abs()
        })
        .fold(0.0, f64::max)
}

pub fn effective_drive(params: &BareParameters) -> Result<EffectiveDrive> {
    let dh = params.eps_h.0 - params.eps0.0;
    let db = params.eps_b.0 - params.eps0.0;
    let j0 = params.j0.0;
    let omega = dh * db - j0 * j0;
    if omega == 0.0 || !omega.is_finite() {
        return Err(Error::SingularTransformation);
    }
    let alpha = (db - j0) / omega;
    let beta = (dh - j0) / omega;
    Ok(EffectiveDrive {
        alpha,
        beta,
        omega,
        small_parameter: peak_kappa(params) * alpha.abs().max(beta.abs()),
    })
}

/// ε(t) and Δ(t) for a validated parameter set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemHamiltonian {
    params: BareParameters,
    drive: EffectiveDrive,
}

impl SystemHamiltonian {
    pub fn new(params: BareParameters) -> Result<Self> {
        params.validate()?;
        let drive = effective_drive(&params)?;
        Ok(Self { params, drive })
    }

    pub fn params(&self) -> &BareParameters {
        &self.params
    }

    pub fn drive(&self) -> &EffectiveDrive {
        &self.drive
    }

    pub fn eps(&self, t: TimeFs) -> EnergyWavenumber {
        let k = kappa(&self.params, t).0;
        EnergyWavenumber(
            self.params.eps_h.0 - self.params.eps_b.0
                + k * k * (self.drive.alpha - self.drive.beta),
        )
    }

    pub fn delta(&self, t: TimeFs) -> EnergyWavenumber {
        let k = kappa(&self.params, t).0;
        EnergyWavenumber(2.0 * self.params.j0.0 + k * k * (self.drive.alpha + self.drive.beta))
    }

    pub fn matrix(&self, t: TimeFs) -> Matrix2<Complex64> {
        hamiltonian_matrix(self, t)
    }
}

/// H₀(t) in the {|H⟩, |B⟩} basis, cm⁻¹.
pub fn hamiltonian_matrix(sys: &SystemHamiltonian, t: TimeFs) -> Matrix2<Complex64> {
    let e = 0.5 * sys.eps(t).0;
    let d = 0.5 * sys.delta(t).0;
    Matrix2::new(
        Complex64::new(e, 0.0),
        Complex64::new(d, 0.0),
        Complex64::new(d, 0.0),
        Complex64::new(-e, 0.0),
    )
}

/// exp(−i H₀(t + dt/2) dt), the midpoint approximation to the time-ordered
/// propagator over [t, t + dt].
pub fn step_propagator(sys: &SystemHamiltonian, t_start: TimeFs, dt: TimeFs) -> Matrix2<Complex64> {
    let mid = TimeFs(t_start.0 + 0.5 * dt.0);
    let hz = 0.5 * sys.eps(mid).0;
    let hx = 0.5 * sys.delta(mid).0;
    su2_exponential(
        hz,
        hx,
        wavenumber_to_angular_frequency(EnergyWavenumber(1.0)) * dt.0,
    )
}

/// exp(−i τ (hz σ_z + hx σ_x)).
pub(crate) fn su2_exponential(hz: f64, hx: f64, tau: f64) -> Matrix2<Complex64> {
    let norm = hz.hypot(hx);
    if norm == 0.0 {
        return Matrix2::identity();
    }
    let theta = norm * tau;
    let (s, c) = theta.sin_cos();
    let (nz, nx) = (hz / norm, hx / norm);
    Matrix2::new(
        Complex64::new(c, -s * nz),
        Complex64::new(0.0, -s * nx),
        Complex64::new(0.0, -s * nx),
        Complex64::new(c, s * nz),
    )
}

const DEBYE_C_M: f64 = 1e-21 / (SPEED_OF_LIGHT_CM_PER_S * 1e-2);
const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;
const PLANCK: f64 = 6.626_070_15e-34;

/// Inputs of the dipole-strength estimate of κ₀.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleEstimateInputs {
    pub refractive_index: f64,
    /// ε_max(H) / ε_max(B).
    pub eps_ratio: f64,
    /// δ(H) / δ(B).
    pub delta_ratio: f64,
    /// Dipole strength of the B band, debye².
    pub d_b: f64,
    pub lambda_h_nm: f64,
    pub lambda_b_nm: f64,
    /// Pulse fluence, J/cm².
    pub fluence: f64,
    /// Pulse duration, fs.
    pub duration_fs: f64,
}

impl DipoleEstimateInputs {
    /// Values for the Rb. sphaeroides reaction-center experiment.
    pub fn reaction_center() -> Self {
        Self {
            refractive_index: 1.359,
            eps_ratio: 0.5,
            delta_ratio: 1.1,
            d_b: 40.0,
            lambda_h_nm: 750.0,
            lambda_b_nm: 800.0,
            fluence: 1.3e-4,
            duration_fs: 40.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DipoleEstimate {
    /// Dipole strength of the H band, debye².
    pub d_h: f64,
    /// Mean dipole moment, debye.
    pub mu_debye: f64,
    /// Pulse intensity, W/cm².
    pub intensity: f64,
    /// Field amplitude, V/cm.
    pub field_amplitude: f64,
    pub kappa0: EnergyWavenumber,
}

/// κ₀ = μ·E₀ from band dipole strengths and pulse energetics.
///
/// The dipole strength D ∝ n ε_max δ / λ_max, so the H-band strength follows
/// from the B band through the three ratios. The mean of the two strengths
/// gives μ = √D. The field is E₀ = √2·E_rm with E_rm = √(2I/(cε₀)) and
/// I = fluence / duration.
pub fn estimate_kappa0(inputs: &DipoleEstimateInputs) -> Result<DipoleEstimate> {
    let strictly_positive = [
        ("refractive index", inputs.refractive_index),
        ("extinction ratio", inputs.eps_ratio),
        ("width ratio", inputs.delta_ratio),
        ("B-band dipole strength", inputs.d_b),
        ("H-band wavelength", inputs.lambda_h_nm),
        ("B-band wavelength", inputs.lambda_b_nm),
        ("pulse duration", inputs.duration_fs),
    ];
    for (name, v) in strictly_positive {
        if !(v.is_finite() && v > 0.0) {
            return Err(Error::Domain(format!("{name} must be positive, got {v}")));
        }
    }
    if !(inputs.fluence.is_finite() && inputs.fluence >= 0.0) {
        return Err(Error::Domain(format!(
            "pulse fluence must be non-negative, got {}",
            inputs.fluence
        )));
    }

    let d_h = inputs.d_b * inputs.eps_ratio * inputs.delta_ratio * inputs.lambda_b_nm
        / inputs.lambda_h_nm;
    let mu_debye = (0.5 * (inputs.d_b + d_h)).sqrt();

    let intensity = inputs.fluence / (inputs.duration_fs * 1e-15);
    let intensity_si = intensity * 1e4;
    let c_si = SPEED_OF_LIGHT_CM_PER_S * 1e-2;
    let e_rm = (2.0 * intensity_si / (c_si * VACUUM_PERMITTIVITY)).sqrt();
    let e0_si = std::f64::consts::SQRT_2 * e_rm;

    let energy_joule = mu_debye * DEBYE_C_M * e0_si;
    let kappa0 = energy_joule / (PLANCK * SPEED_OF_LIGHT_CM_PER_S);

    Ok(DipoleEstimate {
        d_h,
        mu_debye,
        intensity,
        field_amplitude: e0_si * 1e-2,
        kappa0: EnergyWavenumber(kappa0),
    })
}
