//! States and operators of a three-level system in the basis (|0>, |1>, |2>).
//!
//! Everything here is an immutable value type backed by fixed-size complex
//! matrices. Hamiltonians are stored in angular-frequency units (rad/s), so a
//! propagation step is exp(-i H dt) with no hbar bookkeeping.

use nalgebra::{Matrix2, Matrix3, SymmetricEigen, Vector3};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Tolerance for Hermiticity checks, relative to the operator norm.
pub const HERMITICITY_TOL: f64 = 1e-12;

/// Pure state of the three-level system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateVector(Vector3<C64>);

impl StateVector {
    pub fn new(c0: C64, c1: C64, c2: C64) -> Self {
        Self(Vector3::new(c0, c1, c2))
    }

    /// Basis state |k> for k in 0..3.
    pub fn basis(k: usize) -> Self {
        assert!(k < 3, "basis index out of range");
        let mut v = Vector3::zeros();
        v[k] = C64::new(1.0, 0.0);
        Self(v)
    }

    pub fn amplitude(&self, k: usize) -> C64 {
        self.0[k]
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    /// Rescale to unit norm, preserving direction.
    ///
    /// Errors on a zero-norm input, which signals a degenerate construction
    /// upstream rather than anything recoverable.
    pub fn normalize(&self) -> Result<Self> {
        let n = self.norm();
        if n <= 0.0 {
            return Err(Error::ZeroNormState);
        }
        Ok(Self(self.0.map(|c| c / n)))
    }

    /// Populations (p0, p1, p2) = |c_i|^2.
    pub fn populations(&self) -> [f64; 3] {
        [
            self.0[0].norm_sqr(),
            self.0[1].norm_sqr(),
            self.0[2].norm_sqr(),
        ]
    }

    pub fn inner(&self, other: &Self) -> C64 {
        self.0.dotc(&other.0)
    }

    /// Rank-1 projector |psi><psi|.
    pub fn outer(&self) -> DensityMatrix {
        DensityMatrix(self.0 * self.0.adjoint())
    }

    pub fn as_vector(&self) -> &Vector3<C64> {
        &self.0
    }
}

/// Mixed state of the three-level system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityMatrix(Matrix3<C64>);

impl DensityMatrix {
    /// Pure-state density matrix from a normalized state vector.
    pub fn pure(psi: &StateVector) -> Self {
        psi.outer()
    }

    /// Diagonal (fully dephased) density matrix from populations.
    pub fn from_populations(p: [f64; 3]) -> Self {
        let mut m = Matrix3::zeros();
        for k in 0..3 {
            m[(k, k)] = C64::new(p[k], 0.0);
        }
        Self(m)
    }

    /// Wrap an explicit matrix, enforcing Hermiticity and unit trace.
    pub fn from_matrix(m: Matrix3<C64>) -> Result<Self> {
        let herm = (m - m.adjoint()).norm();
        if herm > HERMITICITY_TOL * m.norm().max(1.0) {
            return Err(Error::InvalidDensityMatrix {
                reason: "not Hermitian",
                residual: herm,
            });
        }
        let tr = m.trace();
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::InvalidDensityMatrix {
                reason: "trace differs from one",
                residual: (tr - C64::new(1.0, 0.0)).norm(),
            });
        }
        Ok(Self(m))
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    pub fn populations(&self) -> [f64; 3] {
        [self.0[(0, 0)].re, self.0[(1, 1)].re, self.0[(2, 2)].re]
    }

    pub fn element(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn hermiticity_residual(&self) -> f64 {
        (self.0 - self.0.adjoint()).norm()
    }

    /// Eigenvalues sorted ascending; used for positivity checks.
    pub fn eigenvalues(&self) -> [f64; 3] {
        let herm = (self.0 + self.0.adjoint()).map(|c| c * 0.5);
        let mut ev: Vec<f64> = SymmetricEigen::new(herm).eigenvalues.iter().copied().collect();
        ev.sort_by(|a, b| a.partial_cmp(b).unwrap());
        [ev[0], ev[1], ev[2]]
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues()[0]
    }

    pub fn as_matrix(&self) -> &Matrix3<C64> {
        &self.0
    }

    pub(crate) fn from_matrix_unchecked(m: Matrix3<C64>) -> Self {
        Self(m)
    }
}

/// A 3x3 complex operator: Hamiltonians (rad/s) or unitaries (dimensionless).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Operator3(Matrix3<C64>);

impl Operator3 {
    pub fn zeros() -> Self {
        Self(Matrix3::zeros())
    }

    pub fn identity() -> Self {
        Self(Matrix3::identity())
    }

    pub fn from_matrix(m: Matrix3<C64>) -> Self {
        Self(m)
    }

    pub fn as_matrix(&self) -> &Matrix3<C64> {
        &self.0
    }

    pub fn element(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn scale(&self, s: f64) -> Self {
        Self(self.0.map(|c| c * s))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn hermiticity_residual(&self) -> f64 {
        (self.0 - self.0.adjoint()).norm()
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermiticity_residual() <= HERMITICITY_TOL * self.frobenius_norm().max(1.0)
    }

    /// Frobenius norm of U^dagger U - I.
    pub fn unitarity_residual(&self) -> f64 {
        (self.0.adjoint() * self.0 - Matrix3::identity()).norm()
    }

    pub fn apply(&self, psi: &StateVector) -> StateVector {
        StateVector(self.0 * psi.0)
    }

    /// Conjugation rho -> U rho U^dagger.
    pub fn conjugate(&self, rho: &DensityMatrix) -> DensityMatrix {
        DensityMatrix(self.0 * rho.0 * self.0.adjoint())
    }

    /// Matrix element <bra| O |ket>.
    pub fn sandwich(&self, bra: &StateVector, ket: &StateVector) -> C64 {
        bra.0.dotc(&(self.0 * ket.0))
    }

    /// Eigendecomposition of a Hermitian operator: real eigenvalues and a
    /// unitary of eigenvectors.
    pub fn hermitian_eigen(&self) -> Result<(Vector3<f64>, Matrix3<C64>)> {
        let residual = self.hermiticity_residual();
        if residual > HERMITICITY_TOL * self.frobenius_norm().max(1.0) {
            return Err(Error::NonHermitian { residual });
        }
        let se = SymmetricEigen::new(self.0);
        Ok((se.eigenvalues, se.eigenvectors))
    }
}

impl std::ops::Add for Operator3 {
    type Output = Operator3;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl std::ops::Sub for Operator3 {
    type Output = Operator3;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl std::ops::Mul for Operator3 {
    type Output = Operator3;
    fn mul(self, rhs: Self) -> Self {
        Self(self.0 * rhs.0)
    }
}

/// exp(-i H dt) for a Hermitian generator, by spectral decomposition.
///
/// Exact for any step size, which is what makes the piecewise-constant
/// propagator unconditionally norm-preserving.
pub fn expm_skew_hermitian(h: &Operator3, dt: f64) -> Result<Operator3> {
    let (eigenvalues, vectors) = h.hermitian_eigen()?;
    let mut phases = Matrix3::<C64>::zeros();
    for k in 0..3 {
        phases[(k, k)] = C64::new(0.0, -eigenvalues[k] * dt).exp();
    }
    Ok(Operator3(vectors * phases * vectors.adjoint()))
}

/// A 2x2 complex operator on the computational (|0>, |2>) subspace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Operator2(Matrix2<C64>);

impl Operator2 {
    pub fn identity() -> Self {
        Self(Matrix2::identity())
    }

    pub fn from_matrix(m: Matrix2<C64>) -> Self {
        Self(m)
    }

    pub fn from_rows(m00: C64, m01: C64, m10: C64, m11: C64) -> Self {
        Self(Matrix2::new(m00, m01, m10, m11))
    }

    pub fn as_matrix(&self) -> &Matrix2<C64> {
        &self.0
    }

    pub fn element(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn unitarity_residual(&self) -> f64 {
        (self.0.adjoint() * self.0 - Matrix2::identity()).norm()
    }

    /// Apply to amplitudes (c0, c2) of a state in the computational subspace.
    pub fn apply(&self, amps: (C64, C64)) -> (C64, C64) {
        (
            self.0[(0, 0)] * amps.0 + self.0[(0, 1)] * amps.1,
            self.0[(1, 0)] * amps.0 + self.0[(1, 1)] * amps.1,
        )
    }

    /// Embed into the three-level space, acting trivially on |1>.
    pub fn embed(&self) -> Operator3 {
        let mut m = Matrix3::<C64>::identity();
        m[(0, 0)] = self.0[(0, 0)];
        m[(0, 2)] = self.0[(0, 1)];
        m[(2, 0)] = self.0[(1, 0)];
        m[(2, 2)] = self.0[(1, 1)];
        Operator3(m)
    }
}

impl std::ops::Add for Operator2 {
    type Output = Operator2;
    fn add(self, rhs: Self) -> Self {
        Self(self.0 + rhs.0)
    }
}

impl std::ops::Sub for Operator2 {
    type Output = Operator2;
    fn sub(self, rhs: Self) -> Self {
        Self(self.0 - rhs.0)
    }
}

impl std::ops::Mul for Operator2 {
    type Output = Operator2;
    fn mul(self, rhs: Self) -> Self {
        Self(self.0 * rhs.0)
    }
}
