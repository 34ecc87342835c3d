use ccch_core::pde_sim::*;
use ccch_core::scattering::sech_profile;
use ccch_core::Error;
use num_complex::Complex64 as C;
use proptest::prelude::*;

/// Travelling plane wave A e^{i(kx + ct)}: an exact periodic solution with
/// c = k/(1 + k^2) + A^2 k (3 - k^2)/2.
fn plane_wave(amp: f64, k: f64, x: &[f64], t: f64) -> Vec<C> {
    let c = k / (1.0 + k * k) + amp * amp * k * (3.0 - k * k) / 2.0;
    x.iter().map(|&x| C::from_polar(amp, k * x + c * t)).collect()
}

#[test]
fn zero_data_stays_zero() {
    let sim = Simulator::new(20.0, 128).unwrap();
    let traj = sim.evolve(&sim.snapshot_from_u(vec![C::new(0.0, 0.0); 128], 0.0), 0.05, &[1.0, 2.0]).unwrap();
    assert_eq!(traj.snapshots.len(), 3);
    assert!(traj.last().u.iter().all(|v| v.norm() == 0.0));
    assert_eq!(traj.g_drift(), 0.0);
}

#[test]
fn plane_wave_speed() {
    let (l, n) = (10.0, 64);
    let sim = Simulator::new(l, n).unwrap();
    let x = sim.x_grid();
    for (amp, j) in [(0.3, 1), (0.5, 3), (0.1, -2)] {
        let k = std::f64::consts::PI * j as f64 / l;
        let traj = sim.evolve(&sim.snapshot_from_u(plane_wave(amp, k, &x, 0.0), 0.0), 0.01, &[3.0]).unwrap();
        let want = plane_wave(amp, k, &x, 3.0);
        assert!(relative_l2(&traj.last().u, &want) < 1e-8, "A = {amp}, j = {j}");
    }
}

#[test]
fn rejects_bad_parameters() {
    assert!(matches!(Simulator::<f64>::new(10.0, 100), Err(Error::InvalidInput(_))));
    assert!(matches!(Simulator::<f64>::new(-1.0, 128), Err(Error::InvalidInput(_))));
    let sim = Simulator::new(10.0, 128).unwrap();
    let snap = sim.snapshot_from_u(vec![C::new(0.0, 0.0); 128], 0.0);
    assert!(matches!(sim.evolve(&snap, 1.0, &[1.0]), Err(Error::InvalidInput(_))));
    assert!(matches!(sim.evolve(&snap, 0.01, &[1.0, 0.5]), Err(Error::InvalidInput(_))));
}

#[test]
fn sech_datum_conserves_g() {
    let sim = Simulator::new(40.0, 1024).unwrap();
    let u0 = sech_profile(0.4, 0.5, 40.0, 1024);
    let traj = sim.evolve(&sim.snapshot_from_u(u0, 0.0), 0.01, &[2.0, 4.0, 6.0]).unwrap();
    assert!(traj.g_drift() < 1e-10, "drift {:e}", traj.g_drift());
    assert!(helmholtz_residual(&sim, traj.last()) < 1e-12);
    assert!(traj.boundary_ratio < 1e-3);
}

#[test]
fn f32_instantiation() {
    let sim = Simulator::<f32>::new(20.0, 128).unwrap();
    let u0 = sech_profile(0.3f32, 0.5, 20.0, 128);
    let traj = sim.evolve(&sim.snapshot_from_u(u0, 0.0), 0.05, &[1.0]).unwrap();
    assert!(traj.g_drift() < 1e-3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn helmholtz_round_trip(coef in prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), 8)) {
        let sim = Simulator::new(15.0, 128).unwrap();
        let x = sim.x_grid();
        let u: Vec<C> = x
            .iter()
            .map(|&x| coef.iter().enumerate().map(|(j, &(a, b))| C::new(a, b) * (-(x - 2.0 * j as f64 + 7.0).powi(2)).exp()).sum())
            .collect();
        let back = sim.invert_helmholtz(&sim.helmholtz(&u));
        prop_assert!(relative_l2(&back, &u) < 1e-12);
    }
}
