/* C interface of the holoq holonomic-gate simulator. */

#ifndef HOLOQ_H
#define HOLOQ_H

/* Generated with cbindgen; edit cbindgen.toml and regenerate instead. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/*
 Status code of every fallible call.
 */
typedef enum HoloqStatus {
  HOLOQ_STATUS_OK = 0,
  /*
   A required pointer argument was null.
   */
  HOLOQ_STATUS_NULL_ARGUMENT = 1,
  /*
   An argument was out of its documented domain.
   */
  HOLOQ_STATUS_INVALID_ARGUMENT = 2,
  /*
   The simulation left the numerically valid regime.
   */
  HOLOQ_STATUS_NUMERIC = 3,
} HoloqStatus;

/*
 Opaque time-resolved trajectory handle.
 */
typedef struct HoloqTrajectory HoloqTrajectory;

/*
 Version string of the underlying crate; static storage, do not free.
 */
const char *holoq_version(void);

/*
 Holonomic gate unitary on the (|0>, |2>) subspace, row-major 2x2.

 # Safety
 `out_re` and `out_im` must point to at least 4 writable doubles.
 */
enum HoloqStatus holoq_gate_unitary2(double theta, double phi, double *out_re, double *out_im);

/*
 Closed-form three-level gate unitary, row-major 3x3.

 # Safety
 `out_re` and `out_im` must point to at least 9 writable doubles.
 */
enum HoloqStatus holoq_gate_unitary3(double theta, double phi, double *out_re, double *out_im);

/*
 Ideal two-photon pi/2 gate on the (|0>, |2>) subspace, row-major 2x2.

 # Safety
 `out_re` and `out_im` must point to at least 4 writable doubles.
 */
enum HoloqStatus holoq_ideal_pi2(double phi02, double *out_re, double *out_im);

/*
 Peak amplitude (rad/s) whose quartic super-Gaussian pulse of width
 `td_s` has area 2*pi.

 # Safety
 `out_omega0` must point to a writable double.
 */
enum HoloqStatus holoq_calibrate_2pi(double td_s, double *out_omega0);

/*
 Propagate the calibrated holonomic gate pulse for gate angles
 (theta, phi), starting from the state with amplitudes `init_re/init_im`
 (length 3; pass null for the ground state). Populations are recorded
 every `stride` integrator steps.

 On success `*out` owns a new trajectory; release it with
 [`holoq_trajectory_free`].

 # Safety
 `out` must be a valid pointer; `init_re`/`init_im`, when non-null, must
 point to 3 readable doubles each (and must both be given together).
 */
enum HoloqStatus holoq_simulate_holonomic(double theta,
                                          double phi,
                                          double td_s,
                                          double dt_s,
                                          size_t stride,
                                          const double *init_re,
                                          const double *init_im,
                                          struct HoloqTrajectory **out);

/*
 Number of recorded rows in a trajectory; 0 for a null handle.

 # Safety
 `traj`, when non-null, must be a live handle from this library.
 */
size_t holoq_trajectory_len(const struct HoloqTrajectory *traj);

/*
 Read one recorded row: time (s) and the three populations.

 # Safety
 `traj` must be a live handle; `out_time_s` and `out_populations` must
 point to 1 and 3 writable doubles.
 */
enum HoloqStatus holoq_trajectory_row(const struct HoloqTrajectory *traj,
                                      size_t index,
                                      double *out_time_s,
                                      double *out_populations);

/*
 Release a trajectory handle. Null is a no-op.

 # Safety
 `traj` must be a handle from [`holoq_simulate_holonomic`] that has not
 been freed yet.
 */
void holoq_trajectory_free(struct HoloqTrajectory *traj);

#endif  /* HOLOQ_H */
