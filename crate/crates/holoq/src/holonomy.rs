//! Gate algebra of the non-adiabatic holonomic gates.
//!
//! Simultaneous shaped drives on the 0-1 and 1-2 transitions with complex
//! scalings (a, b) leave the dark state -b|0> + a|2> untouched while the
//! bright state traverses a 2*pi cycle against |1>, so the net unitary acts
//! on the computational (|0>, |2>) subspace as n.sigma for a unit vector n
//! set by the gate angles (theta, phi).

use nalgebra::Matrix3;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::pulse::{self, Envelope, ScalingPair};
use crate::qutrit::{Operator2, Operator3, StateVector};

/// Gate angles: theta in [0, pi], phi in [0, 2*pi).
///
/// At theta = 0 or pi the rotation axis is the pole and phi is degenerate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GateSpec {
    theta: f64,
    phi: f64,
}

impl GateSpec {
    pub fn new(theta: f64, phi: f64) -> Result<Self> {
        if !(0.0..=std::f64::consts::PI).contains(&theta) {
            return Err(Error::InvalidGateAngle { theta });
        }
        Ok(Self {
            theta,
            phi: phi.rem_euclid(std::f64::consts::TAU),
        })
    }

    /// NOT gate in the computational subspace: theta = pi/2, phi = 0.
    pub fn not() -> Self {
        Self {
            theta: std::f64::consts::FRAC_PI_2,
            phi: 0.0,
        }
    }

    /// Hadamard-like gate: theta = pi/4, with the phase carried by phi.
    pub fn hadamard(phi: f64) -> Self {
        Self {
            theta: std::f64::consts::FRAC_PI_4,
            phi: phi.rem_euclid(std::f64::consts::TAU),
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Unit vector n = (sin t cos p, sin t sin p, cos t) of the rotation axis.
    pub fn bloch_axis(&self) -> [f64; 3] {
        [
            self.theta.sin() * self.phi.cos(),
            self.theta.sin() * self.phi.sin(),
            self.theta.cos(),
        ]
    }
}

/// Drive scalings a = sin(theta/2) e^{i phi}, b = -cos(theta/2).
pub fn ab_from_angles(gate: &GateSpec) -> ScalingPair {
    let a = C64::from_polar((gate.theta / 2.0).sin(), gate.phi);
    let b = C64::new(-(gate.theta / 2.0).cos(), 0.0);
    ScalingPair::new(a, b).expect("sin^2 + cos^2 normalization is exact")
}

/// Drive Hamiltonian (Omega/2)(a |1><0| + b |1><2| + h.c.) in rad/s.
pub fn drive_hamiltonian(sp: &ScalingPair, omega: f64) -> Operator3 {
    let half = 0.5 * omega;
    let mut m = Matrix3::<C64>::zeros();
    m[(1, 0)] = sp.a() * half;
    m[(0, 1)] = sp.a().conj() * half;
    m[(1, 2)] = sp.b() * half;
    m[(2, 1)] = sp.b().conj() * half;
    Operator3::from_matrix(m)
}

/// The dark/bright orthonormal basis of the computational subspace.
#[derive(Debug, Clone, Copy)]
pub struct DarkBrightBasis {
    pub dark: StateVector,
    pub bright: StateVector,
}

/// dark = -b|0> + a|2> decouples from the drives; bright = a*|0> + b*|2>
/// couples to |1> like a two-level sigma_x drive.
pub fn dark_bright(sp: &ScalingPair) -> DarkBrightBasis {
    DarkBrightBasis {
        dark: StateVector::new(-sp.b(), C64::new(0.0, 0.0), sp.a()),
        bright: StateVector::new(sp.a().conj(), C64::new(0.0, 0.0), sp.b().conj()),
    }
}

/// Basis change T from (|0>, |1>, |2>) to (|D>, |1>, |B>).
pub fn basis_change(sp: &ScalingPair) -> Operator3 {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    Operator3::from_matrix(Matrix3::new(
        -sp.b().conj(), z, sp.a().conj(),
        z, one, z,
        sp.a(), z, sp.b(),
    ))
}

/// Closed-form cyclic-evolution unitary in the (|0>, |1>, |2>) basis.
///
/// Equal to T^-1 diag(1, -1, -1) T: the dark state is fixed while |1> and
/// the bright state pick up a sign. Hermitian, so an involution.
pub fn holonomic_unitary3(sp: &ScalingPair) -> Operator3 {
    let z = C64::new(0.0, 0.0);
    let pop_diff = sp.b().norm_sqr() - sp.a().norm_sqr();
    Operator3::from_matrix(Matrix3::new(
        C64::new(pop_diff, 0.0), z, -2.0 * sp.b() * sp.a().conj(),
        z, C64::new(-1.0, 0.0), z,
        -2.0 * sp.a() * sp.b().conj(), z, C64::new(-pop_diff, 0.0),
    ))
}

/// Gate unitary on the computational subspace:
/// [[cos t, e^{-i p} sin t], [e^{i p} sin t, -cos t]] = n.sigma.
pub fn holonomic_unitary2(gate: &GateSpec) -> Operator2 {
    let st = gate.theta.sin();
    let ct = gate.theta.cos();
    Operator2::from_rows(
        C64::new(ct, 0.0),
        C64::from_polar(st, -gate.phi),
        C64::from_polar(st, gate.phi),
        C64::new(-ct, 0.0),
    )
}

/// n.sigma for a unit 3-vector n.
pub fn axis_operator(n: [f64; 3]) -> Operator2 {
    Operator2::from_rows(
        C64::new(n[2], 0.0),
        C64::new(n[0], -n[1]),
        C64::new(n[0], n[1]),
        C64::new(-n[2], 0.0),
    )
}

/// Commutator [n1.sigma, n2.sigma]; equals 2i (n1 x n2).sigma.
pub fn commutator(n1: [f64; 3], n2: [f64; 3]) -> Operator2 {
    let u1 = axis_operator(n1);
    let u2 = axis_operator(n2);
    u1 * u2 - u2 * u1
}

pub fn cross(n1: [f64; 3], n2: [f64; 3]) -> [f64; 3] {
    [
        n1[1] * n2[2] - n1[2] * n2[1],
        n1[2] * n2[0] - n1[0] * n2[2],
        n1[0] * n2[1] - n1[1] * n2[0],
    ]
}

/// A fully specified holonomic gate drive: scaling pair plus the shared,
/// 2*pi-calibrated envelope and the 0-1 tone phase.
///
/// The time-dependent Hamiltonian is [`drive_hamiltonian`] evaluated on the
/// common envelope; the individual tones (amplitudes |a| Omega_2pi and
/// |b| Omega_2pi) are available for serialization via [`tones`](Self::tones).
#[derive(Debug, Clone, Copy)]
pub struct HolonomicDrive {
    pair: ScalingPair,
    base: Envelope,
    phi01: f64,
}

impl HolonomicDrive {
    /// Calibrate the base envelope to pulse area 2*pi and attach the pair.
    pub fn new(pair: ScalingPair, td: f64, t0: f64, phi01: f64) -> Result<Self> {
        let omega_2pi = pulse::calibrate_2pi(td)?;
        Ok(Self {
            pair,
            base: Envelope::new(omega_2pi, t0, td)?,
            phi01,
        })
    }

    /// Drive realizing a (theta, phi) gate; the 0-1 tone phase is the gate
    /// phase itself.
    pub fn for_gate(gate: &GateSpec, td: f64, t0: f64) -> Result<Self> {
        Self::new(ab_from_angles(gate), td, t0, gate.phi())
    }

    pub fn pair(&self) -> &ScalingPair {
        &self.pair
    }

    pub fn base_envelope(&self) -> &Envelope {
        &self.base
    }

    pub fn phi01(&self) -> f64 {
        self.phi01
    }

    /// Peak Rabi rate of the calibrated base envelope (rad/s).
    pub fn peak_rabi(&self) -> f64 {
        self.base.omega0()
    }

    pub fn support(&self) -> (f64, f64) {
        self.base.support()
    }

    /// Instantaneous drive Hamiltonian at time t.
    pub fn hamiltonian_at(&self, t: f64) -> Operator3 {
        drive_hamiltonian(&self.pair, self.base.value(t))
    }

    /// The two lab-frame tones of this drive.
    pub fn tones(&self) -> Result<(crate::pulse::DriveTone, crate::pulse::DriveTone)> {
        pulse::make_holonomic_pair(&self.pair, self.base.td(), self.base.t0(), self.phi01)
    }
}
