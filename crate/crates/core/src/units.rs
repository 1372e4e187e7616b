//! Physical constants and the handful of unit conversions the simulator needs.
//!
//! Internally energies are wavenumbers (cm⁻¹), times are femtoseconds and
//! temperatures are kelvin, with ħ = 1. A wavenumber becomes an angular
//! frequency in rad/fs through the single factor 2πc.

use std::fmt;

use crate::error::{Error, Result};

/// Speed of light in vacuum, cm/s.
pub const SPEED_OF_LIGHT_CM_PER_S: f64 = 2.997_924_58e10;

/// Speed of light in vacuum, cm/fs.
pub const SPEED_OF_LIGHT_CM_PER_FS: f64 = SPEED_OF_LIGHT_CM_PER_S * 1e-15;

/// Boltzmann constant, cm⁻¹/K.
pub const BOLTZMANN_WAVENUMBER_PER_K: f64 = 0.695_034_80;

/// rad/fs per cm⁻¹.
pub const RAD_PER_FS_PER_WAVENUMBER: f64 = 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT_CM_PER_FS;

/// An energy expressed as a wavenumber (cm⁻¹). May be negative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct EnergyWavenumber(pub f64);

/// A time in femtoseconds.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct TimeFs(pub f64);

/// An absolute temperature in kelvin, always strictly positive.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Temperature(f64);

impl EnergyWavenumber {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl TimeFs {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl Temperature {
    pub fn new(kelvin: f64) -> Result<Self> {
        if kelvin.is_finite() && kelvin > 0.0 {
            Ok(Self(kelvin))
        } else {
            Err(Error::Domain(format!(
                "temperature must be finite and positive, got {kelvin} K"
            )))
        }
    }

    pub fn kelvin(self) -> f64 {
        self.0
    }
}

impl fmt::Display for EnergyWavenumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} cm-1", self.0)
    }
}

impl fmt::Display for TimeFs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fs", self.0)
    }
}

impl fmt::Display for Temperature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} K", self.0)
    }
}

/// 2πc·x: cm⁻¹ to rad/fs.
pub fn wavenumber_to_angular_frequency(x: EnergyWavenumber) -> f64 {
    x.0 * RAD_PER_FS_PER_WAVENUMBER
}

/// Inverse of [`wavenumber_to_angular_frequency`].
pub fn angular_frequency_to_wavenumber(omega: f64) -> EnergyWavenumber {
    EnergyWavenumber(omega / RAD_PER_FS_PER_WAVENUMBER)
}

/// k_B·T in cm⁻¹.
pub fn thermal_energy(t: Temperature) -> EnergyWavenumber {
    EnergyWavenumber(BOLTZMANN_WAVENUMBER_PER_K * t.0)
}
