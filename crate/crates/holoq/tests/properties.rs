//! Property tests for the crate-wide invariants.

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use std::f64::consts::{PI, TAU};

use holoq::dynamics::{propagate_unitary_trajectory, TimeGrid};
use holoq::holonomy::{
    ab_from_angles, dark_bright, drive_hamiltonian, holonomic_unitary2, holonomic_unitary3,
    GateSpec, HolonomicDrive,
};
use holoq::pulse::{calibrate_2pi, pulse_area, Envelope};
use holoq::qutrit::{expm_skew_hermitian, DensityMatrix, Operator2, Operator3, StateVector};

fn hermitian_from(parts: [f64; 9]) -> Operator3 {
    let [d0, d1, d2, a_re, a_im, b_re, b_im, c_re, c_im] = parts;
    let m = nalgebra::Matrix3::new(
        C64::new(d0, 0.0),
        C64::new(a_re, a_im),
        C64::new(b_re, b_im),
        C64::new(a_re, -a_im),
        C64::new(d1, 0.0),
        C64::new(c_re, c_im),
        C64::new(b_re, -b_im),
        C64::new(c_re, -c_im),
        C64::new(d2, 0.0),
    );
    Operator3::from_matrix(m)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn spectral_exponential_is_unitary_and_norm_preserving(
        parts in prop::array::uniform9(-5.0f64..5.0),
        dt in 0.01f64..10.0,
        amps in prop::array::uniform6(-1.0f64..1.0),
    ) {
        let h = hermitian_from(parts);
        let u = expm_skew_hermitian(&h, dt).unwrap();
        prop_assert!(u.unitarity_residual() < 1e-12);

        let psi = StateVector::new(
            C64::new(amps[0], amps[1]),
            C64::new(amps[2], amps[3]),
            C64::new(amps[4], amps[5]),
        );
        prop_assume!(psi.norm() > 1e-6);
        let psi = psi.normalize().unwrap();
        let moved = u.apply(&psi);
        prop_assert!((moved.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn populations_of_normalize_are_a_distribution(
        amps in prop::array::uniform6(-1.0f64..1.0),
    ) {
        let psi = StateVector::new(
            C64::new(amps[0], amps[1]),
            C64::new(amps[2], amps[3]),
            C64::new(amps[4], amps[5]),
        );
        prop_assume!(psi.norm() > 1e-6);
        let n = psi.normalize().unwrap();
        let p = n.populations();
        prop_assert!(p.iter().all(|&x| (0.0..=1.0 + 1e-12).contains(&x)));
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        // normalize is idempotent
        let again = n.normalize().unwrap();
        let q = again.populations();
        for k in 0..3 {
            prop_assert!((p[k] - q[k]).abs() < 1e-15);
        }
    }

    #[test]
    fn pure_density_matrices_are_rank_one(
        amps in prop::array::uniform6(-1.0f64..1.0),
    ) {
        let psi = StateVector::new(
            C64::new(amps[0], amps[1]),
            C64::new(amps[2], amps[3]),
            C64::new(amps[4], amps[5]),
        );
        prop_assume!(psi.norm() > 1e-6);
        let rho = DensityMatrix::pure(&psi.normalize().unwrap());
        prop_assert!((rho.trace().re - 1.0).abs() < 1e-12);
        prop_assert!(rho.hermiticity_residual() < 1e-12);
        let ev = rho.eigenvalues();
        prop_assert!(ev[0].abs() < 1e-10 && ev[1].abs() < 1e-10);
        prop_assert!((ev[2] - 1.0).abs() < 1e-10);
    }

    #[test]
    fn calibrated_pulse_area_round_trips(td_ns in 1.0f64..20.0) {
        let td = td_ns * 1e-9;
        let omega0 = calibrate_2pi(td).unwrap();
        let env = Envelope::new(omega0, 2.0 * td, td).unwrap();
        let area = pulse_area(&env);
        prop_assert!((area - TAU).abs() / TAU < 1e-10, "area {}", area);
    }

    #[test]
    fn envelope_is_even_and_truncated(
        omega0 in 0.0f64..1e9,
        td_ns in 0.5f64..20.0,
        x in 0.0f64..3.0,
    ) {
        let td = td_ns * 1e-9;
        let env = Envelope::new(omega0, 0.0, td).unwrap();
        let delta = x * td;
        prop_assert_eq!(env.value(delta), env.value(-delta));
        if x > 2.0 {
            prop_assert_eq!(env.value(delta), 0.0);
        } else {
            prop_assert!(env.value(delta) <= omega0);
        }
    }

    #[test]
    fn gate_algebra_identities(theta in 0.0f64..PI, phi in 0.0f64..TAU) {
        let gate = GateSpec::new(theta, phi).unwrap();
        let sp = ab_from_angles(&gate);
        prop_assert!((sp.a().norm_sqr() + sp.b().norm_sqr() - 1.0).abs() < 1e-14);

        // involution and embedding
        let u2 = holonomic_unitary2(&gate);
        prop_assert!((u2 * u2 - Operator2::identity()).frobenius_norm() < 1e-14);
        let u3 = holonomic_unitary3(&sp);
        prop_assert!(u3.unitarity_residual() < 1e-12);
        prop_assert!((u3.element(0, 0) - u2.element(0, 0)).norm() < 1e-14);
        prop_assert!((u3.element(0, 2) - u2.element(0, 1)).norm() < 1e-14);

        // dark state is invariant, bright and middle flip sign
        let db = dark_bright(&sp);
        let ud = u3.apply(&db.dark);
        let ub = u3.apply(&db.bright);
        for k in 0..3 {
            prop_assert!((ud.amplitude(k) - db.dark.amplitude(k)).norm() < 1e-13);
            prop_assert!((ub.amplitude(k) + db.bright.amplitude(k)).norm() < 1e-13);
        }

        // the drive annihilates the dark state at any strength
        let h = drive_hamiltonian(&sp, 7.7e8);
        prop_assert!(h.apply(&db.dark).norm() < 1e-13 * 7.7e8);
    }

    #[test]
    fn cyclic_drive_from_computational_subspace_leaves_p1_empty(
        theta in 0.05f64..3.09,
        phi in 0.0f64..TAU,
        mix in 0.0f64..1.0,
        rel in 0.0f64..TAU,
    ) {
        // coarse grid keeps this cheap; the acceptance suite re-checks at 1 ps
        let gate = GateSpec::new(theta, phi).unwrap();
        let drive = HolonomicDrive::for_gate(&gate, 6.5e-9, 13.0e-9).unwrap();
        let grid = TimeGrid::new(0.0, 26.0e-9, 10.0e-12).unwrap();
        let psi0 = StateVector::new(
            C64::new(mix.sqrt(), 0.0),
            C64::new(0.0, 0.0),
            C64::from_polar((1.0 - mix).sqrt(), rel),
        );
        let (u, rec) = propagate_unitary_trajectory(
            |t| drive.hamiltonian_at(t),
            &grid,
            &psi0,
            5_000,
            false,
        ).unwrap();
        prop_assert!(rec.final_populations()[1] < 1e-6);
        prop_assert!(u.unitarity_residual() < 1e-10);
        prop_assert!(rec.max_population_defect() < 1e-10);
    }
}
