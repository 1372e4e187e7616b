//! Decoherence of a laser-driven two-level system in a harmonic bath.
//!
//! The pulse-dressed {|H⟩, |B⟩} pair is described by a time-dependent
//! spin-boson Hamiltonian ([`driven_system`]); the bath enters only through
//! its spectral density ([`bath`]). Reduced dynamics are computed with the
//! quasi-adiabatic propagator path integral in its iterative tensor form
//! ([`quapi`]), with closed-system and memoryless baselines in
//! [`reference`].

pub mod bath;
pub mod driven_system;
pub mod error;
pub mod quadrature;
pub mod quapi;
pub mod reference;
pub mod units;

pub use bath::{
    correlation_time, influence_coefficients, lineshape_function, response_function,
    spectral_density, BathSpec, InfluenceKernel, ResponseSample, Slot, SpectralFamily,
};
pub use driven_system::{
    effective_drive, estimate_kappa0, hamiltonian_matrix, kappa, step_propagator, BareParameters,
    DipoleEstimate, DipoleEstimateInputs, EffectiveDrive, SystemHamiltonian,
};
pub use error::{Error, Result};
pub use quapi::{
    initial_state, peak_analysis, propagate, Peak, PeakAnalysis, ReducedDensity, Sample, Trajectory,
};
pub use reference::{markov_propagate, unitary_evolution, OdeConfig};
pub use units::{
    thermal_energy, wavenumber_to_angular_frequency, EnergyWavenumber, Temperature, TimeFs,
};
