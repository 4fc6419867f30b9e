//! Quartic super-Gaussian drive pulses, their areas, and the 2*pi-area
//! calibration used by the holonomic gate drives.
//!
//! The envelope is Omega_0 * exp(-((t - t0)/td)^4 / 2), truncated to zero
//! outside |t - t0| < 2 td. Truncation costs only ~e^-8 of the peak, so the
//! pulse has no abrupt edges.

use std::sync::OnceLock;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Pulse envelope parameters: peak Rabi amplitude (rad/s), center time (s)
/// and width constant (s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Envelope {
    omega0: f64,
    t0: f64,
    td: f64,
}

impl Envelope {
    pub fn new(omega0: f64, t0: f64, td: f64) -> Result<Self> {
        if !(td > 0.0) {
            return Err(Error::InvalidEnvelope {
                reason: "width constant td must be positive",
            });
        }
        if !(omega0 >= 0.0) {
            return Err(Error::InvalidEnvelope {
                reason: "peak amplitude must be nonnegative",
            });
        }
        Ok(Self { omega0, t0, td })
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn td(&self) -> f64 {
        self.td
    }

    /// Same shape with a different peak amplitude.
    pub fn with_omega0(&self, omega0: f64) -> Self {
        Self { omega0, ..*self }
    }

    /// Envelope value at time t; exactly zero outside the truncation window.
    pub fn value(&self, t: f64) -> f64 {
        let x = (t - self.t0) / self.td;
        if x.abs() < 2.0 {
            self.omega0 * (-0.5 * x.powi(4)).exp()
        } else {
            0.0
        }
    }

    /// Truncation window [t0 - 2 td, t0 + 2 td].
    pub fn support(&self) -> (f64, f64) {
        (self.t0 - 2.0 * self.td, self.t0 + 2.0 * self.td)
    }

    /// Total pulse duration 4 td.
    pub fn duration(&self) -> f64 {
        4.0 * self.td
    }
}

/// Which transition of the three-level ladder a tone addresses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Transition {
    T01,
    T12,
    T02,
}

/// A shaped microwave tone: envelope, addressed transition, carrier and phase.
///
/// In the rotating frames used by the propagators the carrier is bookkeeping;
/// the Hamiltonian is assembled from the envelope and the complex scaling
/// parameters directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriveTone {
    pub envelope: Envelope,
    pub transition: Transition,
    pub carrier_freq: f64,
    pub phase: f64,
}

/// Complex drive scalings (a, b) with |a|^2 + |b|^2 = 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingPair {
    a: C64,
    b: C64,
}

impl ScalingPair {
    pub fn new(a: C64, b: C64) -> Result<Self> {
        let norm_sq = a.norm_sqr() + b.norm_sqr();
        if (norm_sq - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidScalingPair { norm_sq });
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> C64 {
        self.a
    }

    pub fn b(&self) -> C64 {
        self.b
    }
}

/// Dimensionless area of exp(-x^4/2) over the truncation window [-2, 2].
pub fn quartic_shape_area() -> f64 {
    static AREA: OnceLock<f64> = OnceLock::new();
    *AREA.get_or_init(|| integrate(|x| (-0.5 * x.powi(4)).exp(), -2.0, 2.0, 1e-13))
}

/// Pulse area integral of the envelope over its truncation window (rad).
pub fn pulse_area(env: &Envelope) -> f64 {
    let (lo, hi) = env.support();
    integrate(|t| env.value(t), lo, hi, 1e-12 * env.omega0.max(1.0) * env.td)
}

/// Peak amplitude such that the pulse area equals 2*pi for the given width.
///
/// The area is linear in the amplitude, so this reduces to
/// 2*pi / (td * A) with A the shape area computed once.
pub fn calibrate_2pi(td: f64) -> Result<f64> {
    if !(td > 0.0) {
        return Err(Error::InvalidEnvelope {
            reason: "width constant td must be positive",
        });
    }
    Ok(std::f64::consts::TAU / (td * quartic_shape_area()))
}

/// Build the simultaneous 0-1 / 1-2 tone pair realizing a holonomic gate.
///
/// Peak amplitudes are |a| and |b| times the respective calibrated 2*pi
/// amplitudes; the 0-1 tone carries the controllable phase phi01 and the 1-2
/// tone phase is fixed to zero (it can be gauged away). Carrier frequencies
/// are resolved by the scenario layer from the device parameters.
pub fn make_holonomic_pair(
    sp: &ScalingPair,
    td: f64,
    t0: f64,
    phi01: f64,
) -> Result<(DriveTone, DriveTone)> {
    let omega_2pi_01 = calibrate_2pi(td)?;
    let omega_2pi_12 = calibrate_2pi(td)?;
    make_holonomic_pair_with_calibrations(sp, td, t0, phi01, omega_2pi_01, omega_2pi_12)
}

/// Same as [`make_holonomic_pair`] but with externally calibrated 2*pi
/// amplitudes, one per transition. The two couplings differ on hardware
/// (by sqrt(2) in the harmonic approximation), so the calibrations are kept
/// distinct even though the idealized model makes them equal.
pub fn make_holonomic_pair_with_calibrations(
    sp: &ScalingPair,
    td: f64,
    t0: f64,
    phi01: f64,
    omega_2pi_01: f64,
    omega_2pi_12: f64,
) -> Result<(DriveTone, DriveTone)> {
    let tone01 = DriveTone {
        envelope: Envelope::new(sp.a().norm() * omega_2pi_01, t0, td)?,
        transition: Transition::T01,
        carrier_freq: 0.0,
        phase: phi01,
    };
    let tone12 = DriveTone {
        envelope: Envelope::new(sp.b().norm() * omega_2pi_12, t0, td)?,
        transition: Transition::T12,
        carrier_freq: 0.0,
        phase: 0.0,
    };
    Ok((tone01, tone12))
}

/// Adaptive Simpson quadrature with Richardson acceptance test.
///
/// The integrands here are smooth and cheap; the tolerance is an absolute
/// error bound for the whole interval.
pub(crate) fn integrate<F: Fn(f64) -> f64 + Copy>(f: F, lo: f64, hi: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, m: f64, b: f64) -> f64 {
        (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b))
    }
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let left = simpson(f, a, 0.5 * (a + m), m);
        let right = simpson(f, m, 0.5 * (m + b), b);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, m, left, tol / 2.0, depth - 1)
                + recurse(f, m, b, right, tol / 2.0, depth - 1)
        }
    }
    let m = 0.5 * (lo + hi);
    let whole = simpson(&f, lo, m, hi);
    // floor the tolerance at the rounding scale of the integral itself, so
    // tiny-magnitude integrals (SI seconds times rad/s) still refine
    let tol = tol.max(whole.abs() * 1e-15).max(f64::MIN_POSITIVE);
    recurse(&f, lo, hi, whole, tol, 48)
}
