use ccch_core::pde_sim::{relative_l2, Simulator};
use ccch_core::soliton::*;
use ccch_core::Error;
use num_complex::Complex64 as C;
use proptest::prelude::*;

fn one_soliton() -> SolitonData<f64> {
    SolitonData::paired(C::from_polar(1.0, 0.15 * std::f64::consts::PI), C::new(1.0, 0.0)).unwrap()
}

fn two_soliton() -> SolitonData<f64> {
    one_soliton().with_pair(C::from_polar(1.3, 0.35 * std::f64::consts::PI), C::new(0.5, 0.2)).unwrap()
}

#[test]
fn empty_data_gives_zero_solution() {
    let s = solve_soliton_system(&SolitonData::<f64>::empty(), 3.0, 2.0).unwrap();
    let r = reconstruct(&s);
    assert_eq!(r.u, C::new(0.0, 0.0));
    assert_eq!(r.x, 3.0);
}

#[test]
fn pairing_rule() {
    let rho = C::new(0.4, 0.8);
    let c = C::new(0.3, -1.1);
    let d = SolitonData::paired(rho, c).unwrap();
    assert_eq!(d.poles, vec![rho, -rho.inv()]);
    assert!((d.norming_mod[1] + c / (rho * rho)).norm() < 1e-15);
}

#[test]
fn invalid_poles_are_rejected() {
    assert!(matches!(SolitonData::new(vec![C::new(0.3, -0.5)], vec![C::new(1.0, 0.0)]), Err(Error::InvalidInput(_))));
    let d = SolitonData::new(vec![C::new(0.01, 1.01)], vec![C::new(1.0, 0.0)]).unwrap();
    assert!(matches!(solve_soliton_system(&d, 0.0, 0.0), Err(Error::PoleTooCloseToI { .. })));
    assert!(matches!(solve_soliton_system(&one_soliton(), 0.0, -1.0), Err(Error::InvalidInput(_))));
}

#[test]
fn x_map_is_increasing_and_u_decays() {
    let data = one_soliton();
    let mut prev = f64::NEG_INFINITY;
    for j in 0..201 {
        let y = -50.0 + 0.5 * j as f64;
        let r = reconstruct(&solve_soliton_system(&data, y, 1.0).unwrap());
        assert!(r.x > prev);
        prev = r.x;
        if y.abs() > 45.0 {
            assert!(r.u.norm() < 1e-6, "u({y}) = {}", r.u);
        }
    }
}

#[test]
fn matches_simulator_over_one_time_unit() {
    let data = one_soliton();
    let sim = Simulator::new(40.0, 1024).unwrap();
    let x = sim.x_grid();
    let u0 = profile_refined(&data, 0.0, (-70.0, 70.0), 800, &x).unwrap();
    let u1 = profile_refined(&data, 1.0, (-70.0, 70.0), 800, &x).unwrap();
    let traj = sim.evolve(&sim.snapshot_from_u(u0, 0.0), 0.01, &[1.0]).unwrap();
    assert!(relative_l2(&traj.last().u, &u1) < 1e-4);
}

#[test]
fn pchip_profile_is_close_to_refined() {
    let data = one_soliton();
    let x: Vec<f64> = (0..256).map(|j| -20.0 + 40.0 * j as f64 / 256.0).collect();
    let a = profile_on_grid(&data, 0.5, (-40.0, 40.0), 800, &x).unwrap();
    let b = profile_refined(&data, 0.5, (-40.0, 40.0), 800, &x).unwrap();
    assert!(relative_l2(&a, &b) < 1e-4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn system_residual_is_small(y in -30.0f64..30.0, t in 0.0f64..20.0, two in any::<bool>()) {
        let data = if two { two_soliton() } else { one_soliton() };
        let s = solve_soliton_system(&data, y, t).unwrap();
        prop_assert!(s.residual < 1e-10);
    }

    #[test]
    fn m_is_unimodular(y in -20.0f64..20.0, t in 0.0f64..10.0, re in -3.0f64..3.0, im in -3.0f64..3.0) {
        let data = two_soliton();
        let s = solve_soliton_system(&data, y, t).unwrap();
        let z = C::new(re, im);
        prop_assume!(data.poles.iter().all(|p| (z - p).norm() > 0.05 && (z - p.conj()).norm() > 0.05));
        let m = eval_m(&s, z).unwrap();
        prop_assert!((m.det() - 1.0).norm() < 1e-9 * (1.0 + m.max_abs().powi(2)));
    }

    #[test]
    fn derivative_matches_finite_difference(y in -10.0f64..10.0, re in -2.0f64..2.0, im in 0.2f64..2.0) {
        let data = one_soliton();
        let s = solve_soliton_system(&data, y, 0.5).unwrap();
        let z = C::new(re, im);
        prop_assume!(data.poles.iter().all(|p| (z - p).norm() > 0.1));
        let h = 1e-5;
        let fd = (eval_m(&s, z + h).unwrap() - eval_m(&s, z - h).unwrap()).scale(C::new(0.5 / h, 0.0));
        let d = eval_m_prime(&s, z).unwrap();
        prop_assert!((fd - d).max_abs() < 1e-6 * (1.0 + d.max_abs()));
    }
}
