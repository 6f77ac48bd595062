use proptest::prelude::*;
use qlss::algorithms::known_norm::solve_given_norm;
use qlss::montecarlo::{expected_query_monte_carlo, trial_seed};
use qlss::svt::op_cost_ell;
use qlss::{random_instance, BlockKind, Mode, QlssError, QueryLedger};

fn ledger() -> impl Strategy<Value = QueryLedger> {
    proptest::array::uniform8(0u64..1_000_000).prop_map(|v| QueryLedger {
        u_a: v[0],
        u_a_dag: v[1],
        c_u_a: v[2],
        c_u_a_dag: v[3],
        u_b: v[4],
        u_b_dag: v[5],
        c_u_b: v[6],
        c_u_b_dag: v[7],
    })
}

proptest! {
    #[test]
    fn merging_is_associative_and_commutative(a in ledger(), b in ledger(), c in ledger()) {
        prop_assert_eq!((a + b) + c, a + (b + c));
        prop_assert_eq!(a + b, b + a);
        prop_assert_eq!((a + b).total(), a.total() + b.total());
        let mut m = a;
        m.merge(&b);
        prop_assert_eq!(m, a + b);
    }

    #[test]
    fn scaling_is_repeated_addition(a in ledger(), k in 0u64..20) {
        let sum: QueryLedger = std::iter::repeat_n(a, k as usize).sum();
        prop_assert_eq!(a * k, sum);
    }

    #[test]
    fn filter_cost_multiplicities(ell in 1u64..10_000) {
        let g = op_cost_ell(ell, BlockKind::Gt);
        prop_assert_eq!(g.combined_a(), 2 * ell);
        prop_assert_eq!(g.combined_b(), 4 * ell);
        prop_assert_eq!(g.u_a, 0);
        let p = op_cost_ell(ell, BlockKind::G);
        prop_assert_eq!(p.c_u_a, 0);
        prop_assert_eq!(p.combined_a(), 2 * ell);
    }
}

#[test]
fn deterministic_solver_has_zero_width_interval() {
    let inst = random_instance(4, 10.0, None, 1).unwrap();
    let r = expected_query_monte_carlo(32, 5, 3.0, |_| Ok(solve_given_norm(&inst, 0.01, 2.0, Mode::Exact)?.queries));
    assert_eq!(r.mean, 54.0);
    assert_eq!(r.ci_high - r.ci_low, 0.0);
    assert_eq!(r.histogram.len(), 1);
}

#[test]
fn doubling_trials_shrinks_interval_by_root_two() {
    let draw = |s: u64| Ok(QueryLedger { c_u_a: s % 1000, ..Default::default() });
    let w1 = {
        let r = expected_query_monte_carlo(4000, 9, 1.96, draw);
        r.ci_high - r.ci_low
    };
    let w4 = {
        let r = expected_query_monte_carlo(16000, 9, 1.96, draw);
        r.ci_high - r.ci_low
    };
    let w2 = {
        let r = expected_query_monte_carlo(8000, 9, 1.96, draw);
        r.ci_high - r.ci_low
    };
    assert!((w1 / w2 - 2f64.sqrt()).abs() <= 0.2 * 2f64.sqrt());
    assert!((w1 / w4 - 2.0).abs() <= 0.2 * 2.0);
}

#[test]
fn results_do_not_depend_on_scheduling() {
    let f = |s: u64| Ok(QueryLedger { u_b: s % 97, ..Default::default() });
    let a = expected_query_monte_carlo(500, 3, 3.0, f);
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let b = pool.install(|| expected_query_monte_carlo(500, 3, 3.0, f));
    assert_eq!(a, b);
    assert_eq!(trial_seed(3, 0), trial_seed(3, 0));
}

#[test]
fn errors_are_counted_per_code() {
    let r = expected_query_monte_carlo(10, 1, 3.0, |s| {
        if s % 2 == 0 {
            Err(QlssError::CapExceeded(5))
        } else {
            Ok(QueryLedger::zero())
        }
    });
    assert_eq!(r.failures, r.errors.get("cap_exceeded").copied().unwrap_or(0));
    assert_eq!(r.failures + r.histogram.values().sum::<u64>(), 10);
}
