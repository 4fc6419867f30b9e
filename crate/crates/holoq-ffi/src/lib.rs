//! C ABI for the holoq simulator.
//!
//! Conventions:
//! - every fallible call returns a [`HoloqStatus`]; outputs are written
//!   through caller-provided pointers only on `Ok`;
//! - complex matrices cross the boundary as separate row-major real and
//!   imaginary arrays;
//! - trajectories are opaque handles that must be released with
//!   [`holoq_trajectory_free`].
//!
//! The matching header lives in `include/holoq.h` and is generated with
//! cbindgen (see `cbindgen.toml`).

use std::os::raw::c_char;

use holoq::dynamics::{propagate_unitary_trajectory, TimeGrid, TrajectoryRecord};
use holoq::holonomy::{ab_from_angles, holonomic_unitary2, holonomic_unitary3, GateSpec, HolonomicDrive};
use holoq::pulse::calibrate_2pi;
use holoq::qutrit::{Operator2, Operator3, StateVector};
use holoq::twophoton::ideal_pi2_gate;
use num_complex::Complex64 as C64;

/// Status code of every fallible call.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HoloqStatus {
    Ok = 0,
    /// A required pointer argument was null.
    NullArgument = 1,
    /// An argument was out of its documented domain.
    InvalidArgument = 2,
    /// The simulation left the numerically valid regime.
    Numeric = 3,
}

fn status_of(err: &holoq::Error) -> HoloqStatus {
    match err {
        holoq::Error::NumericalDrift { .. } => HoloqStatus::Numeric,
        _ => HoloqStatus::InvalidArgument,
    }
}

/// Version string of the underlying crate; static storage, do not free.
#[no_mangle]
pub extern "C" fn holoq_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

unsafe fn write_op2(u: &Operator2, out_re: *mut f64, out_im: *mut f64) {
    for i in 0..2 {
        for j in 0..2 {
            let z = u.element(i, j);
            *out_re.add(i * 2 + j) = z.re;
            *out_im.add(i * 2 + j) = z.im;
        }
    }
}

unsafe fn write_op3(u: &Operator3, out_re: *mut f64, out_im: *mut f64) {
    for i in 0..3 {
        for j in 0..3 {
            let z = u.element(i, j);
            *out_re.add(i * 3 + j) = z.re;
            *out_im.add(i * 3 + j) = z.im;
        }
    }
}

/// Holonomic gate unitary on the (|0>, |2>) subspace, row-major 2x2.
///
/// # Safety
/// `out_re` and `out_im` must point to at least 4 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn holoq_gate_unitary2(
    theta: f64,
    phi: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> HoloqStatus {
    if out_re.is_null() || out_im.is_null() {
        return HoloqStatus::NullArgument;
    }
    match GateSpec::new(theta, phi) {
        Ok(gate) => {
            write_op2(&holonomic_unitary2(&gate), out_re, out_im);
            HoloqStatus::Ok
        }
        Err(_) => HoloqStatus::InvalidArgument,
    }
}

/// Closed-form three-level gate unitary, row-major 3x3.
///
/// # Safety
/// `out_re` and `out_im` must point to at least 9 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn holoq_gate_unitary3(
    theta: f64,
    phi: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> HoloqStatus {
    if out_re.is_null() || out_im.is_null() {
        return HoloqStatus::NullArgument;
    }
    match GateSpec::new(theta, phi) {
        Ok(gate) => {
            let u = holonomic_unitary3(&ab_from_angles(&gate));
            write_op3(&u, out_re, out_im);
            HoloqStatus::Ok
        }
        Err(_) => HoloqStatus::InvalidArgument,
    }
}

/// Ideal two-photon pi/2 gate on the (|0>, |2>) subspace, row-major 2x2.
///
/// # Safety
/// `out_re` and `out_im` must point to at least 4 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn holoq_ideal_pi2(
    phi02: f64,
    out_re: *mut f64,
    out_im: *mut f64,
) -> HoloqStatus {
    if out_re.is_null() || out_im.is_null() {
        return HoloqStatus::NullArgument;
    }
    write_op2(&ideal_pi2_gate(phi02), out_re, out_im);
    HoloqStatus::Ok
}

/// Peak amplitude (rad/s) whose quartic super-Gaussian pulse of width
/// `td_s` has area 2*pi.
///
/// # Safety
/// `out_omega0` must point to a writable double.
#[no_mangle]
pub unsafe extern "C" fn holoq_calibrate_2pi(td_s: f64, out_omega0: *mut f64) -> HoloqStatus {
    if out_omega0.is_null() {
        return HoloqStatus::NullArgument;
    }
    match calibrate_2pi(td_s) {
        Ok(omega0) => {
            *out_omega0 = omega0;
            HoloqStatus::Ok
        }
        Err(_) => HoloqStatus::InvalidArgument,
    }
}

/// Opaque time-resolved trajectory handle.
pub struct HoloqTrajectory {
    record: TrajectoryRecord,
}

/// Propagate the calibrated holonomic gate pulse for gate angles
/// (theta, phi), starting from the state with amplitudes `init_re/init_im`
/// (length 3; pass null for the ground state). Populations are recorded
/// every `stride` integrator steps.
///
/// On success `*out` owns a new trajectory; release it with
/// [`holoq_trajectory_free`].
///
/// # Safety
/// `out` must be a valid pointer; `init_re`/`init_im`, when non-null, must
/// point to 3 readable doubles each (and must both be given together).
#[no_mangle]
pub unsafe extern "C" fn holoq_simulate_holonomic(
    theta: f64,
    phi: f64,
    td_s: f64,
    dt_s: f64,
    stride: usize,
    init_re: *const f64,
    init_im: *const f64,
    out: *mut *mut HoloqTrajectory,
) -> HoloqStatus {
    if out.is_null() || (init_re.is_null() != init_im.is_null()) {
        return HoloqStatus::NullArgument;
    }
    let gate = match GateSpec::new(theta, phi) {
        Ok(g) => g,
        Err(_) => return HoloqStatus::InvalidArgument,
    };
    let psi0 = if init_re.is_null() {
        StateVector::basis(0)
    } else {
        let amp = |k: usize| C64::new(*init_re.add(k), *init_im.add(k));
        match StateVector::new(amp(0), amp(1), amp(2)).normalize() {
            Ok(psi) => psi,
            Err(_) => return HoloqStatus::InvalidArgument,
        }
    };
    let run = || -> holoq::Result<TrajectoryRecord> {
        let drive = HolonomicDrive::for_gate(&gate, td_s, 2.0 * td_s)?;
        let grid = TimeGrid::new(0.0, 4.0 * td_s, dt_s)?;
        let (_, rec) =
            propagate_unitary_trajectory(|t| drive.hamiltonian_at(t), &grid, &psi0, stride, false)?;
        Ok(rec)
    };
    match run() {
        Ok(record) => {
            *out = Box::into_raw(Box::new(HoloqTrajectory { record }));
            HoloqStatus::Ok
        }
        Err(err) => status_of(&err),
    }
}

/// Number of recorded rows in a trajectory; 0 for a null handle.
///
/// # Safety
/// `traj`, when non-null, must be a live handle from this library.
#[no_mangle]
pub unsafe extern "C" fn holoq_trajectory_len(traj: *const HoloqTrajectory) -> usize {
    if traj.is_null() {
        return 0;
    }
    (*traj).record.times.len()
}

/// Read one recorded row: time (s) and the three populations.
///
/// # Safety
/// `traj` must be a live handle; `out_time_s` and `out_populations` must
/// point to 1 and 3 writable doubles.
#[no_mangle]
pub unsafe extern "C" fn holoq_trajectory_row(
    traj: *const HoloqTrajectory,
    index: usize,
    out_time_s: *mut f64,
    out_populations: *mut f64,
) -> HoloqStatus {
    if traj.is_null() || out_time_s.is_null() || out_populations.is_null() {
        return HoloqStatus::NullArgument;
    }
    let record = &(*traj).record;
    if index >= record.times.len() {
        return HoloqStatus::InvalidArgument;
    }
    *out_time_s = record.times[index];
    for k in 0..3 {
        *out_populations.add(k) = record.populations[index][k];
    }
    HoloqStatus::Ok
}

/// Release a trajectory handle. Null is a no-op.
///
/// # Safety
/// `traj` must be a handle from [`holoq_simulate_holonomic`] that has not
/// been freed yet.
#[no_mangle]
pub unsafe extern "C" fn holoq_trajectory_free(traj: *mut HoloqTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}
