use qlss::algorithms::known_norm::projection_success_on_en;
use qlss::algorithms::random_t::{deviation_probability, sample_norm_candidate, success_probability};
use qlss::algorithms::search::log_candidates;
use qlss::algorithms::{
    adiabatic_norm_search, binary_norm_search, exhaustive_norm_search, refine_norm_amplitude_estimation, AeNoise,
    TauDistribution,
};
use qlss::bounds::{exhaustive_search, random_t_deviation, random_t_success_lower};
use qlss::{random_instance, DegreeRule};

#[test]
fn tiny_candidate_set() {
    let inst = random_instance(2, 1.0, None, 7).unwrap().with_kappa(2.0).unwrap();
    assert_eq!(log_candidates(2.0), vec![0.0, std::f64::consts::LN_2]);
    for seed in 0..10 {
        let e = exhaustive_norm_search(&inst, 2.0, seed).unwrap();
        assert!(e.within(1.0, 2.0));
    }
}

#[test]
fn exhaustive_ledger_is_closed_form() {
    for (kappa, seed) in [(16.0, 1), (64.0, 2), (10.0, 3)] {
        let inst = random_instance(6, kappa, None, seed).unwrap();
        let e = exhaustive_norm_search(&inst, kappa, seed).unwrap();
        let expect = exhaustive_search(kappa, 0.025, log_candidates(kappa).len()).value;
        assert_eq!(e.queries.combined_a() as f64, expect);
        assert_eq!(e.queries.combined_b(), 2 * e.queries.combined_a());
    }
}

#[test]
fn projection_success_is_half_at_the_norm() {
    let inst = random_instance(8, 32.0, None, 5).unwrap();
    for eta in [0.1, 0.01] {
        let (q, _) = projection_success_on_en(&inst, eta, inst.x_norm(), DegreeRule::Exact).unwrap();
        assert!((q - 0.5).abs() <= 2.0 * eta * eta, "q = {q}");
    }
}

#[test]
fn searches_return_two_approximations() {
    let n = 40;
    for kappa in [16.0, 64.0] {
        let mut hits = [0; 3];
        for s in 0..n {
            let inst = random_instance(6, kappa, None, 500 + s).unwrap();
            let nx = inst.x_norm();
            let ok = |r: qlss::Result<qlss::algorithms::NormEstimate>| r.map(|e| e.within(nx, 2.0)).unwrap_or(false);
            hits[0] += ok(exhaustive_norm_search(&inst, kappa, s)) as u32;
            hits[1] += ok(binary_norm_search(&inst, kappa, s)) as u32;
            hits[2] += ok(adiabatic_norm_search(&inst, kappa, s)) as u32;
        }
        for h in hits {
            assert!(h as f64 >= 0.9 * n as f64, "kappa {kappa}: {hits:?}");
        }
    }
}

#[test]
fn adiabatic_search_rounds_condition_bound() {
    let inst = random_instance(4, 20.0, None, 9).unwrap();
    let e = adiabatic_norm_search(&inst, 20.0, 1).unwrap();
    assert!(e.notes.iter().any(|n| n.contains("32")));
}

#[test]
fn degenerate_bracket_always_returns_endpoint() {
    let d = TauDistribution::new(3.0, 3.0).unwrap();
    assert_eq!(d.endpoint_mass(), 0.5);
    let inst = random_instance(4, 10.0, Some(3.0), 1).unwrap();
    for seed in 0..20 {
        let c = sample_norm_candidate(&inst, (3.0, 3.0), 0.05, seed).unwrap();
        assert!((c.t - 3.0).abs() < 1e-12);
    }
}

#[test]
fn quadrature_weights_sum_to_one() {
    let d = TauDistribution::new(1.0, 50.0).unwrap();
    let total: f64 = d.quadrature(16, 8).iter().map(|n| n.1).sum();
    assert!((total - 1.0).abs() < 1e-13);
    let total: f64 = d.grid(5).iter().map(|n| n.1).sum();
    assert!((total - 1.0).abs() < 1e-13);
}

#[test]
fn random_t_success_and_deviation_bounds() {
    for seed in 0..5 {
        let inst = random_instance(6, 50.0, None, seed).unwrap();
        let q = success_probability(&inst, (1.0, 50.0), 0.025).unwrap();
        assert!(q >= random_t_success_lower(0.025, 1.0, 50.0) - 1e-10);
        let dev = deviation_probability(&inst, (1.0, 50.0), 0.025, 3.0).unwrap();
        assert!(dev <= random_t_deviation(0.025, 1.0, 50.0, 3.0) + 1e-10);
    }
}

#[test]
fn empirical_success_rate_matches_quadrature() {
    let inst = random_instance(4, 50.0, None, 3).unwrap();
    let q = success_probability(&inst, (1.0, 50.0), 0.025).unwrap();
    let n = 4000;
    let hits = (0..n).filter(|&s| sample_norm_candidate(&inst, (1.0, 50.0), 0.025, s).unwrap().state.is_some()).count();
    let sd = (q * (1.0 - q) / n as f64).sqrt();
    assert!((hits as f64 / n as f64 - q).abs() <= 4.0 * sd);
}

#[test]
fn exact_refinement_recovers_norm() {
    for seed in 0..10 {
        let inst = random_instance(8, 16.0, None, seed).unwrap();
        let nx = inst.x_norm();
        let t_in = (nx * 1.8).clamp(1.0, 16.0);
        let e = refine_norm_amplitude_estimation(&inst, t_in, 0.01, AeNoise::Exact, 0).unwrap();
        assert!((e.t / nx - 1.0).abs() < 2e-4, "{} vs {nx}", e.t);
    }
}

#[test]
fn projection_success_range_for_two_approximations() {
    let inst = random_instance(8, 16.0, Some(4.0), 2).unwrap();
    for f in [0.5, 0.7, 1.0, 1.4, 2.0] {
        let eta = (0.01f64 / 100.0).sqrt();
        let (q, _) = projection_success_on_en(&inst, eta, 4.0 * f, DegreeRule::Exact).unwrap();
        assert!(q >= 0.2 - 2.0 * eta * eta && q <= 0.8 + 2.0 * eta * eta, "q = {q} at ratio {f}");
    }
}

#[test]
fn ideal_noise_mostly_within_precision() {
    let mut good = 0;
    let trials = 500;
    for s in 0..trials {
        let inst = random_instance(8, 16.0, None, s % 25).unwrap();
        let nx = inst.x_norm();
        let t_in = (nx * if s % 2 == 0 { 0.6 } else { 1.9 }).clamp(1.0, 16.0);
        let e = refine_norm_amplitude_estimation(&inst, t_in, 0.01, AeNoise::Ideal, s).unwrap();
        let ratio = (e.t / nx).max(nx / e.t);
        good += (ratio <= 1.01) as u32;
    }
    assert!(good as f64 >= 0.95 * trials as f64, "{good}/{trials}");
}

#[test]
fn refinement_rejects_poor_input() {
    let inst = random_instance(4, 16.0, Some(2.0), 2).unwrap();
    let e = refine_norm_amplitude_estimation(&inst, 8.0, 0.01, AeNoise::Exact, 0).unwrap_err();
    assert_eq!(e.code(), "bad_input");
}
