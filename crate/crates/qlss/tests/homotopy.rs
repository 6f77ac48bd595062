use proptest::prelude::*;
use qlss::instance::min_norm_solution;
use qlss::systems::{homotopy_instance, homotopy_norm, homotopy_norm_ratio, homotopy_point, schedule_f};
use qlss::{random_instance, Svd};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn singular_values_stay_in_window(seed in 0u64..1000, kappa in 2.0f64..40.0, u in 0.0f64..1.0) {
        let inst = random_instance(5, kappa, None, seed).unwrap();
        let sigma = (1.0 / kappa).powf(u);
        let p = homotopy_point(&inst, sigma, None).unwrap();
        let s = Svd::new(&p.a_bar);
        for v in s.nonzero() {
            prop_assert!(*v >= sigma - 1e-8 && *v <= 1.0 + 1e-8);
        }
    }

    #[test]
    fn norm_ratio_within_scale(seed in 0u64..1000, kappa in 2.0f64..40.0, u in 0.0f64..1.0, v in 0.0f64..1.0) {
        let inst = random_instance(5, kappa, None, seed).unwrap();
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        let (s1, s2) = ((1.0 / kappa).powf(b), (1.0 / kappa).powf(a));
        let r = homotopy_norm_ratio(&inst, s1, s2).unwrap();
        prop_assert!(r >= 1.0 - 1e-8 && r <= s2 / s1 + 1e-8);
    }

    #[test]
    fn neighbouring_solutions_overlap(seed in 0u64..1000, kappa in 2.0f64..40.0, u in 0.0f64..1.0, v in 0.0f64..1.0) {
        let inst = random_instance(5, kappa, None, seed).unwrap();
        let (a, b) = if u < v { (u, v) } else { (v, u) };
        let (s1, s2) = ((1.0 / kappa).powf(b), (1.0 / kappa).powf(a));
        let x1 = homotopy_point(&inst, s1, None).unwrap().x_bar;
        let x2 = homotopy_point(&inst, s2, None).unwrap().x_bar;
        let overlap = x1.dotc(&x2).norm() / (x1.norm() * x2.norm());
        let f = |s| schedule_f(s, kappa).unwrap();
        prop_assert!(overlap >= 1.0 - (f(s2) - f(s1)) / s2 - 1e-8);
    }
}

#[test]
fn endpoint_norms() {
    for seed in 0..10 {
        let inst = random_instance(6, 25.0, None, seed).unwrap();
        assert!((homotopy_norm(&inst, 1.0).unwrap() - 1.0).abs() < 1e-12);
        assert!((homotopy_norm(&inst, 1.0 / 25.0).unwrap() - inst.x_norm()).abs() < 1e-8 * inst.x_norm());
    }
}

#[test]
fn trivial_endpoint_ignores_matrix() {
    let a = random_instance(4, 9.0, None, 1).unwrap();
    let p = homotopy_point(&a, 1.0, None).unwrap();
    assert!(p.a_bar.columns(0, 4).norm() < 1e-15);
}

#[test]
fn solution_matches_pseudoinverse() {
    let inst = random_instance(6, 20.0, None, 4).unwrap();
    let p = homotopy_point(&inst, 0.3, None).unwrap();
    let residual = (&p.a_bar * &p.x_bar - inst.b()).norm();
    assert!(residual <= 1e-10);
    let oracle = min_norm_solution(&p.a_bar, inst.b()).unwrap();
    assert!((oracle - &p.x_bar).norm() <= 1e-10);
}

#[test]
fn family_member_has_condition_bound() {
    let inst = random_instance(4, 32.0, None, 8).unwrap();
    let h = homotopy_instance(&inst, 0.25).unwrap();
    assert_eq!(h.kappa(), 4.0);
    assert!((h.x_norm() - homotopy_norm(&inst, 0.25).unwrap()).abs() < 1e-10);
}

#[test]
fn unit_condition_ratio_is_one() {
    let inst = random_instance(3, 1.0, None, 7).unwrap();
    assert!((homotopy_norm_ratio(&inst, 1.0, 1.0).unwrap() - 1.0).abs() < 1e-14);
    assert!((inst.x_norm() - 1.0).abs() < 1e-12);
}

#[test]
fn schedule_identity() {
    assert!((schedule_f((5.0f64 / 8.0).sqrt(), 2.0).unwrap() - 0.5f64.sqrt()).abs() < 1e-14);
    for i in 0..=50 {
        let s = 0.1 + 0.9 * i as f64 / 50.0;
        let f = schedule_f(s, 10.0).unwrap();
        assert!((f * f + (1.0 - f * f) / 100.0 - s * s).abs() < 1e-14);
    }
}
