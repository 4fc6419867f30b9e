//! Pulse-level simulator of non-adiabatic, non-Abelian holonomic gates on the
//! lowest three levels of a transmon.
//!
//! Two simultaneous shaped microwave drives on the 0-1 and 1-2 transitions,
//! with a common 2*pi-calibrated envelope and complex amplitude scalings
//! (a, b), realize a purely geometric unitary on the (|0>, |2>) subspace.
//! The crate provides:
//!
//! - exact 3x3 complex linear algebra for states, operators and density
//!   matrices ([`qutrit`]);
//! - the quartic super-Gaussian pulse shapes and their area calibration
//!   ([`pulse`]);
//! - the gate algebra: dark/bright basis, closed-form cyclic-evolution
//!   unitaries and the (theta, phi) parameterization ([`holonomy`]);
//! - time-ordered propagators, closed and open (Lindblad) system, plus the
//!   parallel-transport monitor ([`dynamics`]);
//! - the two-photon 0-2 drive, both as an ideal pi/2 operator and as a full
//!   ladder model with Stark-compensated calibration ([`twophoton`]);
//! - scenario sweeps reproducing the population-control, phase-control and
//!   gate-on-superposition experiments with closed-form expectations
//!   ([`scenario`]), with CSV/manifest output ([`report`]).
//!
//! The `holoq` binary exposes the scenarios as a CLI; see the README.

pub mod config;
pub mod device;
pub mod dynamics;
pub mod error;
pub mod fit;
pub mod holonomy;
pub mod pulse;
pub mod qutrit;
pub mod report;
pub mod scenario;
pub mod twophoton;

pub use error::{Error, Result};
pub use qutrit::{DensityMatrix, Operator2, Operator3, StateVector};
