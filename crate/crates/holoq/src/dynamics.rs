//! Time-ordered propagation of the driven three-level system.
//!
//! Closed-system evolution uses a midpoint exponential integrator: the
//! Hamiltonian is sampled at each step midpoint and exponentiated exactly by
//! spectral decomposition, so the scheme is second order in the step size and
//! unconditionally norm-preserving. Open-system evolution applies the same
//! midpoint stepping to the vectorized Lindblad superoperator.

use nalgebra::{Matrix3, SMatrix};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::qutrit::{expm_skew_hermitian, DensityMatrix, Operator3, StateVector};

/// Uniform time grid. The step count is `round((t_end - t_start)/dt)`, so the
/// effective step matches `dt` exactly whenever the span is a multiple of it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeGrid {
    t_start: f64,
    t_end: f64,
    dt: f64,
}

impl TimeGrid {
    pub fn new(t_start: f64, t_end: f64, dt: f64) -> Result<Self> {
        if !(dt > 0.0) {
            return Err(Error::InvalidTimeGrid {
                reason: "step dt must be positive",
            });
        }
        // the span must round to at least one step; the half-step slack
        // absorbs rounding in spans assembled from sums of segment lengths
        if !((t_end - t_start) / dt >= 0.5) {
            return Err(Error::InvalidTimeGrid {
                reason: "span must cover at least one step",
            });
        }
        Ok(Self { t_start, t_end, dt })
    }

    pub fn t_start(&self) -> f64 {
        self.t_start
    }

    pub fn t_end(&self) -> f64 {
        self.t_end
    }

    pub fn n_steps(&self) -> usize {
        (((self.t_end - self.t_start) / self.dt).round() as usize).max(1)
    }

    /// Actual step size after rounding the span to a whole number of steps.
    pub fn step(&self) -> f64 {
        (self.t_end - self.t_start) / self.n_steps() as f64
    }
}

/// Relaxation and dephasing times in seconds; `f64::INFINITY` disables a
/// channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecoherenceParams {
    /// 1 -> 0 relaxation time.
    pub t1_10: f64,
    /// 2 -> 1 relaxation time.
    pub t1_21: f64,
    /// Pure-dephasing time attached to the number operator diag(0, 1, 2).
    pub t_phi: f64,
}

impl DecoherenceParams {
    /// Closed system: all channels off.
    pub fn off() -> Self {
        Self {
            t1_10: f64::INFINITY,
            t1_21: f64::INFINITY,
            t_phi: f64::INFINITY,
        }
    }

    /// Derive the full channel set from measured qubit T1 and T2.
    ///
    /// The 2 -> 1 relaxation is taken twice as fast as 1 -> 0 (harmonic
    /// matrix-element scaling), and the pure-dephasing rate is
    /// 1/T2 - 1/(2 T1), clamped at zero.
    pub fn from_t1_t2(t1: f64, t2: f64) -> Self {
        let gamma_phi = 1.0 / t2 - 0.5 / t1;
        Self {
            t1_10: t1,
            t1_21: 0.5 * t1,
            t_phi: if gamma_phi > 0.0 {
                1.0 / gamma_phi
            } else {
                f64::INFINITY
            },
        }
    }

    pub fn is_off(&self) -> bool {
        self.t1_10.is_infinite() && self.t1_21.is_infinite() && self.t_phi.is_infinite()
    }

    fn rate(t: f64) -> f64 {
        if t.is_finite() {
            1.0 / t
        } else {
            0.0
        }
    }

    /// Collapse operators scaled by the square roots of their rates.
    pub fn collapse_operators(&self) -> Vec<Matrix3<C64>> {
        let mut ops = Vec::new();
        let g10 = Self::rate(self.t1_10);
        if g10 > 0.0 {
            let mut l = Matrix3::<C64>::zeros();
            l[(0, 1)] = C64::new(g10.sqrt(), 0.0);
            ops.push(l);
        }
        let g21 = Self::rate(self.t1_21);
        if g21 > 0.0 {
            let mut l = Matrix3::<C64>::zeros();
            l[(1, 2)] = C64::new(g21.sqrt(), 0.0);
            ops.push(l);
        }
        let gphi = Self::rate(self.t_phi);
        if gphi > 0.0 {
            let s = (2.0 * gphi).sqrt();
            let mut l = Matrix3::<C64>::zeros();
            l[(1, 1)] = C64::new(s, 0.0);
            l[(2, 2)] = C64::new(2.0 * s, 0.0);
            ops.push(l);
        }
        ops
    }
}

/// A state snapshot along a trajectory.
#[derive(Debug, Clone, Copy)]
pub enum Snapshot {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

/// Time-resolved record of a propagated scenario: times, populations and
/// decimated state snapshots, plus parallel-transport residuals when the
/// monitor is attached.
#[derive(Debug, Clone, Default)]
pub struct TrajectoryRecord {
    pub times: Vec<f64>,
    pub populations: Vec<[f64; 3]>,
    pub snapshots: Vec<Snapshot>,
    pub residuals: Vec<f64>,
}

impl TrajectoryRecord {
    pub fn final_populations(&self) -> [f64; 3] {
        *self.populations.last().expect("empty trajectory")
    }

    pub fn max_p1(&self) -> f64 {
        self.populations.iter().map(|p| p[1]).fold(0.0, f64::max)
    }

    /// Largest deviation of p0 + p1 + p2 from one over the record.
    pub fn max_population_defect(&self) -> f64 {
        self.populations
            .iter()
            .map(|p| (p[0] + p[1] + p[2] - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// Population triple at the recorded time closest to `t`.
    pub fn populations_at(&self, t: f64) -> [f64; 3] {
        let idx = self
            .times
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                (*a - t).abs().partial_cmp(&(*b - t).abs()).unwrap()
            })
            .map(|(i, _)| i)
            .expect("empty trajectory");
        self.populations[idx]
    }

    fn push_pure(&mut self, t: f64, psi: &StateVector, keep_state: bool) {
        self.times.push(t);
        self.populations.push(psi.populations());
        if keep_state {
            self.snapshots.push(Snapshot::Pure(*psi));
        }
    }

    fn push_mixed(&mut self, t: f64, rho: &DensityMatrix, keep_state: bool) {
        self.times.push(t);
        self.populations.push(rho.populations());
        if keep_state {
            self.snapshots.push(Snapshot::Mixed(*rho));
        }
    }
}

fn check_step_hamiltonian(h: &Operator3) -> Result<()> {
    if !h.is_hermitian() {
        return Err(Error::NonHermitian {
            residual: h.hermiticity_residual(),
        });
    }
    Ok(())
}

/// Total time-ordered unitary over the grid.
pub fn propagate_unitary<F>(h_of_t: F, grid: &TimeGrid) -> Result<Operator3>
where
    F: Fn(f64) -> Operator3,
{
    let n = grid.n_steps();
    let dt = grid.step();
    let mut total = Operator3::identity();
    for k in 0..n {
        let t_mid = grid.t_start() + (k as f64 + 0.5) * dt;
        let h = h_of_t(t_mid);
        check_step_hamiltonian(&h)?;
        total = expm_skew_hermitian(&h, dt)? * total;
    }
    Ok(total)
}

/// Time-ordered unitary together with the trajectory of one initial state.
///
/// Populations are recorded every `stride` steps (and always at both ends);
/// state snapshots are kept only when `keep_states` is set.
pub fn propagate_unitary_trajectory<F>(
    h_of_t: F,
    grid: &TimeGrid,
    psi0: &StateVector,
    stride: usize,
    keep_states: bool,
) -> Result<(Operator3, TrajectoryRecord)>
where
    F: Fn(f64) -> Operator3,
{
    let n = grid.n_steps();
    let dt = grid.step();
    let stride = stride.max(1);
    let mut total = Operator3::identity();
    let mut psi = *psi0;
    let mut record = TrajectoryRecord::default();
    record.push_pure(grid.t_start(), &psi, keep_states);
    for k in 0..n {
        let t_mid = grid.t_start() + (k as f64 + 0.5) * dt;
        let h = h_of_t(t_mid);
        check_step_hamiltonian(&h)?;
        let u = expm_skew_hermitian(&h, dt)?;
        total = u * total;
        psi = u.apply(&psi);
        if (k + 1) % stride == 0 || k + 1 == n {
            record.push_pure(grid.t_start() + (k + 1) as f64 * dt, &psi, keep_states);
        }
    }
    Ok((total, record))
}

/// Column-major vectorization index of a 3x3 matrix entry.
#[inline]
fn vec_idx(row: usize, col: usize) -> usize {
    col * 3 + row
}

fn kron(left: &Matrix3<C64>, right: &Matrix3<C64>) -> SMatrix<C64, 9, 9> {
    let mut out = SMatrix::<C64, 9, 9>::zeros();
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                for l in 0..3 {
                    out[(i * 3 + k, j * 3 + l)] = left[(i, j)] * right[(k, l)];
                }
            }
        }
    }
    out
}

/// Lindblad generator on column-stacked density matrices:
/// vec(d rho/dt) = L vec(rho).
fn liouvillian(h: &Matrix3<C64>, collapse: &[Matrix3<C64>]) -> SMatrix<C64, 9, 9> {
    let eye = Matrix3::<C64>::identity();
    let minus_i = C64::new(0.0, -1.0);
    let mut sup = (kron(&eye, h) - kron(&h.transpose(), &eye)) * minus_i;
    for l in collapse {
        let ldl = l.adjoint() * l;
        sup += kron(&l.conjugate(), l)
            - (kron(&eye, &ldl) + kron(&ldl.transpose(), &eye)) * C64::new(0.5, 0.0);
    }
    sup
}

/// exp of the step generator by scaling-and-squaring with a Taylor series.
///
/// Step generators here have norm well below one (rates and H both enter
/// multiplied by dt), so the series converges in a handful of terms; the
/// scaling branch only exists to keep large user-chosen steps correct.
fn expm9(a: &SMatrix<C64, 9, 9>) -> SMatrix<C64, 9, 9> {
    let norm = a.norm();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a * C64::new(1.0 / (1u64 << squarings) as f64, 0.0);
    let mut sum = SMatrix::<C64, 9, 9>::identity();
    let mut term = SMatrix::<C64, 9, 9>::identity();
    for k in 1..=24u32 {
        term = (term * scaled) * C64::new(1.0 / k as f64, 0.0);
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            break;
        }
    }
    for _ in 0..squarings {
        sum = sum * sum;
    }
    sum
}

fn vectorize(rho: &Matrix3<C64>) -> SMatrix<C64, 9, 1> {
    let mut v = SMatrix::<C64, 9, 1>::zeros();
    for r in 0..3 {
        for c in 0..3 {
            v[vec_idx(r, c)] = rho[(r, c)];
        }
    }
    v
}

fn unvectorize(v: &SMatrix<C64, 9, 1>) -> Matrix3<C64> {
    let mut m = Matrix3::<C64>::zeros();
    for r in 0..3 {
        for c in 0..3 {
            m[(r, c)] = v[vec_idx(r, c)];
        }
    }
    m
}

/// Lindblad master-equation propagation with the midpoint exponential
/// integrator on the vectorized superoperator.
///
/// The per-step propagator is reused while the sampled generator stays
/// bitwise identical, so constant-Hamiltonian segments cost one matrix
/// exponential. Trace and positivity are monitored as the run proceeds and
/// a drift beyond 1e-6 aborts with a diagnostic.
pub fn propagate_lindblad<F>(
    h_of_t: F,
    dec: &DecoherenceParams,
    rho0: &DensityMatrix,
    grid: &TimeGrid,
    stride: usize,
    keep_states: bool,
) -> Result<TrajectoryRecord>
where
    F: Fn(f64) -> Operator3,
{
    const MONITOR_STRIDE: usize = 512;
    const DRIFT_TOL: f64 = 1e-6;

    let collapse = dec.collapse_operators();
    let n = grid.n_steps();
    let dt = grid.step();
    let stride = stride.max(1);
    let mut rho = *rho0.as_matrix();
    let mut record = TrajectoryRecord::default();
    record.push_mixed(grid.t_start(), rho0, keep_states);

    let mut cached: Option<(SMatrix<C64, 9, 9>, SMatrix<C64, 9, 9>)> = None;
    for k in 0..n {
        let t_mid = grid.t_start() + (k as f64 + 0.5) * dt;
        let h = h_of_t(t_mid);
        check_step_hamiltonian(&h)?;
        let gen = liouvillian(h.as_matrix(), &collapse) * C64::new(dt, 0.0);
        let step = match &cached {
            Some((prev_gen, prev_step)) if *prev_gen == gen => *prev_step,
            _ => {
                let step = expm9(&gen);
                cached = Some((gen, step));
                step
            }
        };
        rho = unvectorize(&(step * vectorize(&rho)));

        if (k + 1) % MONITOR_STRIDE == 0 {
            let tr = rho.trace();
            if (tr.re - 1.0).abs() > DRIFT_TOL || tr.im.abs() > DRIFT_TOL {
                return Err(Error::NumericalDrift {
                    reason: "trace drifted from one",
                    value: (tr - C64::new(1.0, 0.0)).norm(),
                });
            }
            let min_ev = DensityMatrix::from_matrix_unchecked(rho).min_eigenvalue();
            if min_ev < -DRIFT_TOL {
                return Err(Error::NumericalDrift {
                    reason: "density matrix lost positivity",
                    value: min_ev,
                });
            }
        }
        if (k + 1) % stride == 0 || k + 1 == n {
            record.push_mixed(
                grid.t_start() + (k + 1) as f64 * dt,
                &DensityMatrix::from_matrix_unchecked(rho),
                keep_states,
            );
        }
    }
    Ok(record)
}

/// Maximum of |<psi_0(t)| H(t) |psi_2(t)>| over the grid, where the two
/// states are propagated from |0> and |2>.
///
/// For drives built from a constant scaling pair this matrix element vanishes
/// identically (the gate is parallel-transported); a time-varying pair breaks
/// it. Returned in rad/s.
pub fn parallel_transport_residual<F>(h_of_t: F, grid: &TimeGrid) -> Result<f64>
where
    F: Fn(f64) -> Operator3,
{
    let (max_residual, _) = parallel_transport_trajectory(h_of_t, grid, usize::MAX)?;
    Ok(max_residual)
}

/// Parallel-transport monitor with a time-resolved record: the trajectory of
/// the |0>-propagated state, with the per-sample transport residuals
/// |<psi_0(t)| H(t) |psi_2(t)>| in `residuals`.
pub fn parallel_transport_trajectory<F>(
    h_of_t: F,
    grid: &TimeGrid,
    stride: usize,
) -> Result<(f64, TrajectoryRecord)>
where
    F: Fn(f64) -> Operator3,
{
    let n = grid.n_steps();
    let dt = grid.step();
    let stride = stride.max(1);
    let mut psi0 = StateVector::basis(0);
    let mut psi2 = StateVector::basis(2);
    let mut record = TrajectoryRecord::default();
    let initial_residual = h_of_t(grid.t_start()).sandwich(&psi0, &psi2).norm();
    record.push_pure(grid.t_start(), &psi0, false);
    record.residuals.push(initial_residual);
    let mut max_residual = initial_residual;
    for k in 0..n {
        let t_mid = grid.t_start() + (k as f64 + 0.5) * dt;
        let h = h_of_t(t_mid);
        check_step_hamiltonian(&h)?;
        let u = expm_skew_hermitian(&h, dt)?;
        psi0 = u.apply(&psi0);
        psi2 = u.apply(&psi2);
        let residual = h.sandwich(&psi0, &psi2).norm();
        max_residual = max_residual.max(residual);
        if (k + 1) % stride == 0 || k + 1 == n {
            record.push_pure(grid.t_start() + (k + 1) as f64 * dt, &psi0, false);
            record.residuals.push(residual);
        }
    }
    Ok((max_residual, record))
}

/// Total unitary plus the trajectories of all three basis initial states, for
/// the time-sliced population readout of a pulse.
pub fn propagate_basis_trajectories<F>(
    h_of_t: F,
    grid: &TimeGrid,
    stride: usize,
) -> Result<(Operator3, [TrajectoryRecord; 3])>
where
    F: Fn(f64) -> Operator3,
{
    let n = grid.n_steps();
    let dt = grid.step();
    let stride = stride.max(1);
    let mut total = Operator3::identity();
    let mut states = [
        StateVector::basis(0),
        StateVector::basis(1),
        StateVector::basis(2),
    ];
    let mut records: [TrajectoryRecord; 3] = Default::default();
    for (rec, psi) in records.iter_mut().zip(&states) {
        rec.push_pure(grid.t_start(), psi, false);
    }
    for k in 0..n {
        let t_mid = grid.t_start() + (k as f64 + 0.5) * dt;
        let h = h_of_t(t_mid);
        check_step_hamiltonian(&h)?;
        let u = expm_skew_hermitian(&h, dt)?;
        total = u * total;
        for psi in states.iter_mut() {
            *psi = u.apply(psi);
        }
        if (k + 1) % stride == 0 || k + 1 == n {
            let t = grid.t_start() + (k + 1) as f64 * dt;
            for (rec, psi) in records.iter_mut().zip(&states) {
                rec.push_pure(t, psi, false);
            }
        }
    }
    Ok((total, records))
}

/// Purity-preserving reference: evolve |psi0><psi0| unitarily and return the
/// trajectory, for cross-checking the Lindblad path with all channels off.
pub fn propagate_unitary_density<F>(
    h_of_t: F,
    rho0: &DensityMatrix,
    grid: &TimeGrid,
    stride: usize,
) -> Result<TrajectoryRecord>
where
    F: Fn(f64) -> Operator3,
{
    let n = grid.n_steps();
    let dt = grid.step();
    let stride = stride.max(1);
    let mut rho = *rho0;
    let mut record = TrajectoryRecord::default();
    record.push_mixed(grid.t_start(), &rho, false);
    for k in 0..n {
        let t_mid = grid.t_start() + (k as f64 + 0.5) * dt;
        let h = h_of_t(t_mid);
        check_step_hamiltonian(&h)?;
        let u = expm_skew_hermitian(&h, dt)?;
        rho = u.conjugate(&rho);
        if (k + 1) % stride == 0 || k + 1 == n {
            record.push_mixed(grid.t_start() + (k + 1) as f64 * dt, &rho, false);
        }
    }
    Ok(record)
}
