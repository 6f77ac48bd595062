use qlss::algorithms::ensemble::{fpaa_ensemble, optimal_ensemble, random_t_ensemble};
use qlss::algorithms::known_norm::{known_norm_branch, SolutionProjector};
use qlss::algorithms::near_optimal::{fixed_point_success, FpaaPlan};
use qlss::algorithms::optimal::OptimalPlan;
use qlss::algorithms::{full_qlss_fpaa, full_qlss_optimal, full_qlss_random_t, rng_from, Algo3Config, FpaaConfig, Hats, OptimalParams};
use qlss::linalg::basis;
use qlss::systems::homotopy_norm;
use qlss::{random_instance, CMat, DegreeRule, LinearSystemInstance};

fn identity_instance() -> LinearSystemInstance {
    LinearSystemInstance::new(CMat::identity(4, 4), basis(4, 0), 2.0).unwrap()
}

#[test]
fn ensembles_meet_target_error() {
    let eps = 1e-2;
    let params = OptimalParams::new(&Hats::default(), 16.0, eps).unwrap();
    let cfg = Algo3Config::with_mu(0.25, eps, (1.0, 16.0)).unwrap();
    for seed in 0..4 {
        let inst = random_instance(8, 16.0, None, seed).unwrap();
        let a = random_t_ensemble(&inst, &cfg).unwrap();
        let b = optimal_ensemble(&inst, &params).unwrap();
        assert!(a.trace_distance <= eps, "{}", a.trace_distance);
        assert!(b.trace_distance <= eps, "{}", b.trace_distance);
        let total: f64 = a.members.iter().map(|m| m.0).sum();
        assert!((total - 1.0).abs() < 1e-12);
    }
}

#[test]
fn amplified_ensemble_meets_target_error() {
    let inst = random_instance(6, 16.0, None, 3).unwrap();
    let base = Algo3Config::with_mu(0.25, 1e-2, (1.0, 16.0)).unwrap();
    let plan = FpaaPlan::new(&inst, &FpaaConfig { base, delta: 0.25, d: 4 }).unwrap();
    assert!(fpaa_ensemble(&inst, &plan).unwrap().trace_distance <= 1e-2);
}

#[test]
fn identity_instance_is_solved_exactly() {
    let inst = identity_instance();
    let cfg = Algo3Config::new(0.05, 1e-3, (1.0, 1.0)).unwrap();
    for seed in 0..10 {
        let o = full_qlss_random_t(&inst, &cfg, seed).unwrap();
        assert_eq!(o.restarts, 0);
        assert!(o.overlap_with_x > 1.0 - 1e-12);
    }
    let c = known_norm_branch(&inst, 0.05, 1.0, DegreeRule::Exact).unwrap();
    assert!(c.p_succ > 0.8);
}

#[test]
fn amplification_reaches_target() {
    let inst = random_instance(6, 16.0, None, 7).unwrap();
    let base = Algo3Config::with_mu(0.25, 1e-3, (1.0, 16.0)).unwrap();
    let plan = FpaaPlan::new(&inst, &FpaaConfig { base, delta: 0.25, d: 4 }).unwrap();
    assert!(plan.lambda >= plan.lambda_bound - 1e-12);
    assert!(plan.amplified >= 0.75);
    let mut rng = rng_from(1);
    let trials = 4000;
    let hits = (0..trials).filter(|_| plan.search(&mut rng).0.is_some()).count();
    let sd = (0.75 * 0.25 / trials as f64).sqrt();
    assert!(hits as f64 / trials as f64 >= 0.75 - 3.0 * sd);
}

#[test]
fn nearly_certain_failure_target_gives_single_round() {
    let inst = random_instance(6, 16.0, Some(5.0), 7).unwrap();
    let base = Algo3Config::new(0.05, 1e-2, (5.0, 5.0)).unwrap();
    let plan = FpaaPlan::new(&inst, &FpaaConfig { base, delta: 0.999, d: 1 }).unwrap();
    assert_eq!(plan.rounds, 1);
    assert!((plan.amplified - plan.lambda).abs() < 1e-12);
    assert!((fixed_point_success(0.3, 0.999, 1) - 0.3).abs() < 1e-12);
}

#[test]
fn amplified_solver_runs() {
    let inst = random_instance(6, 16.0, None, 9).unwrap();
    let base = Algo3Config::with_mu(0.25, 1e-2, (1.0, 16.0)).unwrap();
    let o = full_qlss_fpaa(&inst, &FpaaConfig { base, delta: 0.25, d: 3 }, 4).unwrap();
    assert!(o.trace_distance_to_x < 0.1);
}

#[test]
fn random_t_ledger_is_sum_of_component_costs() {
    let inst = random_instance(6, 16.0, None, 2).unwrap();
    let cfg = Algo3Config::with_mu(0.25, 1e-2, (1.0, 16.0)).unwrap();
    let draw = known_norm_branch(&inst, cfg.eta, 2.0, DegreeRule::Exact).unwrap().queries.combined_a();
    let proj = SolutionProjector::new(&inst, cfg.eta_kp).unwrap().queries().combined_a();
    for seed in 0..30 {
        let o = full_qlss_random_t(&inst, &cfg, seed).unwrap();
        let rest = o.queries.combined_a() - (o.restarts + 1) * proj;
        assert_eq!(rest % draw, 0);
        assert!(rest / draw > o.restarts);
        assert_eq!(o.queries.combined_b(), 2 * o.queries.combined_a());
    }
}

#[test]
fn bracket_contains_next_norm_for_good_estimates() {
    let kappa = 400.0;
    let params = OptimalParams::new(&Hats::default(), kappa, 1e-2).unwrap();
    assert_eq!(params.j, 2);
    for seed in 0..10 {
        let inst = random_instance(6, kappa, None, seed).unwrap();
        let mut prev_norm = 1.0;
        for s in &params.steps {
            let next = homotopy_norm(&inst, s.sigma).unwrap();
            let b = params.beta(s.j - 1);
            for t_prev in [prev_norm / b, prev_norm, prev_norm * b] {
                let (l, r) = params.bracket(s.j, t_prev.max(1.0));
                assert!(next >= l * (1.0 - 1e-9) && next <= r * (1.0 + 1e-9), "{next} not in [{l}, {r}]");
            }
            prev_norm = next;
        }
    }
}

#[test]
fn empty_bracket_is_clamped() {
    let params = OptimalParams::new(&Hats::default(), 400.0, 1e-2).unwrap();
    let (l, r) = params.bracket(1, 1e4);
    assert_eq!(l, r);
    assert!(l <= 1.0 / params.steps[0].sigma);
}

#[test]
fn optimal_solver_below_condition_constant() {
    let inst = random_instance(6, 16.0, None, 5).unwrap();
    let o = full_qlss_optimal(&inst, 1e-2, &Hats::default(), 3).unwrap();
    assert!(o.notes.iter().any(|n| n.contains("J = 1")));
    assert!(o.trace_distance_to_x < 0.2);
    let params = OptimalParams::new(&Hats::default(), 16.0, 1e-3).unwrap();
    assert_eq!(params.steps[0].cap, 61);
    assert!((params.mu - 0.2307).abs() < 1e-3);
}

#[test]
fn optimal_solver_two_steps() {
    let inst = random_instance(6, 400.0, None, 5).unwrap();
    let plan = OptimalPlan::new(&inst, OptimalParams::new(&Hats::default(), 400.0, 1e-2).unwrap()).unwrap();
    let o = plan.run(&mut rng_from(8)).unwrap();
    assert!(o.succeeded);
}
