//! Run configuration: one TOML file, with every physical quantity carrying
//! its unit in the key name. Units in names is the whole schema convention;
//! it removes the dominant error class in this kind of tooling.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::device::DeviceParams;
use crate::error::{Error, Result};
use crate::scenario::{ScenarioSettings, TwoPhotonModel};

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub device: DeviceSection,
    pub pulses: PulseSection,
    pub integrator: IntegratorSection,
    pub sweep: SweepSection,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct DeviceSection {
    pub f01_ghz: f64,
    pub f12_ghz: f64,
    pub fr_ghz: f64,
    pub g_over_2pi_mhz: f64,
    pub q_loaded: f64,
    pub ec_over_h_mhz: f64,
    pub t1_ns: f64,
    pub t2_ns: f64,
}

impl Default for DeviceSection {
    fn default() -> Self {
        Self {
            f01_ghz: 7.529,
            f12_ghz: 7.238,
            fr_ghz: 5.1249,
            g_over_2pi_mhz: 103.0,
            q_loaded: 7000.0,
            ec_over_h_mhz: 291.0,
            t1_ns: 430.0,
            t2_ns: 250.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct PulseSection {
    pub td01_ns: f64,
    pub td12_ns: f64,
    pub td02_ns: f64,
    pub gap_ns: f64,
}

impl Default for PulseSection {
    fn default() -> Self {
        Self {
            td01_ns: 6.5,
            td12_ns: 6.5,
            td02_ns: 9.0,
            gap_ns: 0.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct IntegratorSection {
    pub dt_ps: f64,
    pub dt_open_ps: f64,
    pub trajectory_stride: usize,
}

impl Default for IntegratorSection {
    fn default() -> Self {
        Self {
            dt_ps: 1.0,
            dt_open_ps: 10.0,
            trajectory_stride: 50,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(default, deny_unknown_fields)]
pub struct SweepSection {
    pub points: usize,
}

impl Default for SweepSection {
    fn default() -> Self {
        Self { points: 41 }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        toml::from_str(&text).map_err(|e| Error::Config(format!("{path:?}: {e}")))
    }

    pub fn device_params(&self) -> DeviceParams {
        DeviceParams {
            f01: self.device.f01_ghz * 1e9,
            f12: self.device.f12_ghz * 1e9,
            fr: self.device.fr_ghz * 1e9,
            g_over_2pi: self.device.g_over_2pi_mhz * 1e6,
            q_loaded: self.device.q_loaded,
            ec_over_h: self.device.ec_over_h_mhz * 1e6,
            t1: self.device.t1_ns * 1e-9,
            t2: self.device.t2_ns * 1e-9,
        }
    }

    /// Resolve into scenario settings, validating the physical consistency
    /// constraints.
    pub fn settings(
        &self,
        model: TwoPhotonModel,
        decoherence: bool,
    ) -> Result<ScenarioSettings> {
        let device = self.device_params();
        device.validate()?;
        if (self.pulses.td01_ns - self.pulses.td12_ns).abs() > 1e-12 {
            return Err(Error::Config(
                "holonomic drives need identical envelopes: td01_ns must equal td12_ns".into(),
            ));
        }
        if self.pulses.td01_ns <= 0.0 || self.pulses.td02_ns <= 0.0 {
            return Err(Error::Config("pulse widths must be positive".into()));
        }
        if self.integrator.dt_ps <= 0.0 || self.integrator.dt_open_ps <= 0.0 {
            return Err(Error::Config("integrator steps must be positive".into()));
        }
        if self.sweep.points < 2 {
            return Err(Error::Config("sweep needs at least 2 points".into()));
        }
        Ok(ScenarioSettings {
            device,
            td01: self.pulses.td01_ns * 1e-9,
            td02: self.pulses.td02_ns * 1e-9,
            gap: self.pulses.gap_ns * 1e-9,
            dt: self.integrator.dt_ps * 1e-12,
            dt_open: self.integrator.dt_open_ps * 1e-12,
            points: self.sweep.points,
            model,
            decoherence,
            trajectory_stride: self.integrator.trajectory_stride.max(1),
        })
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }
}
