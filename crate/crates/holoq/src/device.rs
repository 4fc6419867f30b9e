//! Measured parameters of the superconducting three-level device.

use crate::error::{Error, Result};

/// Transition frequencies, resonator parameters and coherence times.
///
/// Defaults are the measured values at the operating flux point; the
/// coherence times were measured at the flux sweet spot and are configurable
/// because the operating-point values are not separately known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceParams {
    /// 0-1 transition frequency, Hz.
    pub f01: f64,
    /// 1-2 transition frequency, Hz.
    pub f12: f64,
    /// Readout resonator frequency, Hz.
    pub fr: f64,
    /// Transmon-resonator coupling g/2pi, Hz.
    pub g_over_2pi: f64,
    /// Loaded resonator quality factor.
    pub q_loaded: f64,
    /// Anharmonicity E_C/h, Hz.
    pub ec_over_h: f64,
    /// Qubit relaxation time, s.
    pub t1: f64,
    /// Qubit dephasing time, s.
    pub t2: f64,
}

impl Default for DeviceParams {
    fn default() -> Self {
        Self {
            f01: 7.529e9,
            f12: 7.238e9,
            fr: 5.1249e9,
            g_over_2pi: 103.0e6,
            q_loaded: 7000.0,
            ec_over_h: 291.0e6,
            t1: 430.0e-9,
            t2: 250.0e-9,
        }
    }
}

impl DeviceParams {
    /// Consistency check: the anharmonicity must equal f01 - f12 within the
    /// config tolerance of 1 MHz.
    pub fn validate(&self) -> Result<()> {
        let diff = (self.f01 - self.f12 - self.ec_over_h).abs();
        if diff > 1.0e6 {
            return Err(Error::Config(format!(
                "f01 - f12 = {:.3} MHz disagrees with EC/h = {:.3} MHz by more than 1 MHz",
                (self.f01 - self.f12) / 1e6,
                self.ec_over_h / 1e6
            )));
        }
        if self.t1 <= 0.0 || self.t2 <= 0.0 {
            return Err(Error::Config("coherence times must be positive".into()));
        }
        Ok(())
    }

    /// Intermediate-state detuning of the two-photon drive:
    /// delta = (w01 - w12)/2 in rad/s.
    pub fn two_photon_delta(&self) -> f64 {
        std::f64::consts::PI * (self.f01 - self.f12)
    }

    /// 0-1 carrier angular frequency, rad/s.
    pub fn omega01(&self) -> f64 {
        std::f64::consts::TAU * self.f01
    }

    /// 1-2 carrier angular frequency, rad/s.
    pub fn omega12(&self) -> f64 {
        std::f64::consts::TAU * self.f12
    }

    /// Two-photon carrier angular frequency (w01 + w12)/2, rad/s.
    pub fn omega_two_photon(&self) -> f64 {
        std::f64::consts::PI * (self.f01 + self.f12)
    }
}
