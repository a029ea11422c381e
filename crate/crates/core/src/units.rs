//! Physical unit bookkeeping.
//!
//! The library works in natural units `m3 = L = hbar = 1`; everything here
//! converts those numbers to a concrete choice of scales on output.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Mass of the lightest particle `m3`, box length `L` and `hbar`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhysicalUnits {
    pub m3: f64,
    pub length: f64,
    pub hbar: f64,
}

impl Default for PhysicalUnits {
    fn default() -> Self {
        Self::NATURAL
    }
}

impl PhysicalUnits {
    pub const NATURAL: Self = Self {
        m3: 1.0,
        length: 1.0,
        hbar: 1.0,
    };

    pub fn new(m3: f64, length: f64, hbar: f64) -> Result<Self> {
        for (name, v) in [("m3", m3), ("length", length), ("hbar", hbar)] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "{name} must be finite and positive, got {v}"
                )));
            }
        }
        Ok(Self { m3, length, hbar })
    }

    /// `hbar^2 / (m3 L^2)`.
    pub fn energy_scale(&self) -> f64 {
        self.hbar * self.hbar / (self.m3 * self.length * self.length)
    }

    /// Energy of one spectral unit, `pi^2 hbar^2 / (6 m3 L^2)`.
    pub fn spectral_unit(&self) -> f64 {
        PI * PI / 6.0 * self.energy_scale()
    }

    /// Physical energy of an exact integer spectral energy.
    pub fn energy_from_int(&self, e_int: u64) -> f64 {
        e_int as f64 * self.spectral_unit()
    }

    /// Largest integer spectral energy not exceeding `energy`.
    pub fn int_floor_of_energy(&self, energy: f64) -> Result<u64> {
        if !(energy.is_finite() && energy >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "energy must be finite and nonnegative, got {energy}"
            )));
        }
        Ok((energy / self.spectral_unit()).floor() as u64)
    }

    /// Wavevector scale `pi / L`.
    pub fn wavevector_unit(&self) -> f64 {
        PI / self.length
    }
}
