use proptest::prelude::*;
use qlss::algorithms::Hats;
use qlss::bounds::*;

#[test]
fn known_norm_with_unit_ratio() {
    let (kappa, eps) = (100.0f64, 0.01f64);
    let e = eps / (2.0 * 2f64.sqrt());
    let oracle = ((1.0 + e) / (1.0 - e)).powi(2) * 4.0 * ((kappa / 2.0) * (4.0 * 2f64.sqrt() / eps).ln()).ceil();
    let r = corollary_beta(kappa, eps, 1.0).unwrap();
    assert!((r.value - oracle).abs() <= 1e-9 * oracle);
}

#[test]
fn degree_bound_example() {
    assert_eq!(half_degree_bound(10.0, 0.01), 27);
    assert_eq!(known_norm(10.0, 0.01).unwrap().value, 54.0);
}

#[test]
fn table_rows_at_reference_point() {
    let rows = comparison_report(1e5, 1e-10).unwrap();
    let per: Vec<Option<f64>> = rows.iter().map(|r| r.per_kappa.map(f64::round)).collect();
    assert_eq!(per[0], Some(234565.0));
    assert_eq!(per[1], Some(2173.0));
    assert_eq!(per[5], None);
    assert_eq!(per[6], Some(80.0));
    // frozen values of the remaining rows
    assert_eq!(per[2], Some(1721.0));
    assert_eq!(per[3], Some(82.0));
    assert_eq!(per[4], Some(64.0));
    assert!(per[4] < per[6]);
}

#[test]
fn table_csv_shape() {
    let csv = comparison_csv(&comparison_report(1e5, 1e-10).unwrap());
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "method,asymptotic,bound,value_per_kappa");
    assert_eq!(lines.len(), 8);
    assert!(lines[7].starts_with("augmented KR + adiabatic,") && lines[7].ends_with(",80"));
    assert!(lines[6].contains("not analyzed"));
}

#[test]
fn smallest_condition_number_is_finite() {
    for r in comparison_report(3.0, 1e-3).unwrap() {
        if let Some(b) = r.bound {
            assert!(b.is_finite() && b > 0.0, "{}", r.method);
        }
    }
}

#[test]
fn out_of_range_condition_number() {
    assert_eq!(comparison_report(2.0, 1e-3).unwrap_err().code(), "domain_error");
    assert_eq!(random_t_practical(2e6, 1e-3).unwrap_err().code(), "domain_error");
    assert!(optimal_theorem(100.0, 0.0).is_err());
}

#[test]
fn exact_expression_tracks_simplified() {
    for kappa in [20.0, 1e3, 1e5] {
        let e = optimal_exact(kappa, 1e-10, &Hats::default()).unwrap().value;
        let s = optimal_theorem(kappa, 1e-10).unwrap().value;
        assert!(e <= 1.01 * s && e >= 0.9 * s, "kappa {kappa}: {e} vs {s}");
    }
}

#[test]
fn fpaa_round_counts() {
    assert_eq!(fpaa_rounds(0.9, 0.25) % 2, 1);
    assert_eq!(fpaa_rounds(1.0, 0.999), 1);
    let l = fpaa_rounds(0.01, 0.25) as f64;
    assert!(l >= 10.0 * (2.0f64 / 0.5).ln());
}

#[test]
fn dispatch_matches_direct_calls() {
    let p = BoundParams::new(64.0, 1e-3);
    assert_eq!(bound_formula(BoundKind::Optimal, &p).unwrap(), optimal_theorem(64.0, 1e-3).unwrap());
    assert_eq!(bound_formula(BoundKind::Randomization, &p).unwrap(), randomization(64.0, 1e-3).unwrap());
    let r = bound_formula(BoundKind::RandomT, &p).unwrap();
    assert!(r.params.iter().any(|(k, v)| k == "mu" && (v - 0.25).abs() < 1e-12));
}

proptest! {
    #[test]
    fn bounds_positive_on_domain(kappa in 3.0f64..1e6, leps in -12.0f64..-1.0) {
        let eps = 10f64.powf(leps);
        let p = BoundParams::new(kappa, eps);
        for kind in [BoundKind::RandomT, BoundKind::RandomTPractical, BoundKind::Fpaa, BoundKind::FpaaPractical,
                     BoundKind::Optimal, BoundKind::QuantumWalk, BoundKind::KnownNormBeta] {
            let r = bound_formula(kind, &p).unwrap();
            prop_assert!(r.value.is_finite() && r.value > 0.0);
            let sum: f64 = r.terms.iter().map(|t| t.1).sum();
            prop_assert!((sum - r.value).abs() <= 1e-12 * r.value);
        }
    }

    #[test]
    fn degree_bound_scales_linearly(leta in -6.0f64..-1.0) {
        let eta = 10f64.powf(leta);
        let ratio = half_degree_bound(1000.0, eta) as f64 / half_degree_bound(100.0, eta) as f64;
        prop_assert!((9.5..=10.5).contains(&ratio));
    }
}
