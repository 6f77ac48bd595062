use std::collections::BTreeSet;
use std::path::Path;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use qlss::algorithms::ensemble::{fpaa_ensemble, optimal_ensemble, random_t_ensemble};
use qlss::algorithms::known_norm::{known_norm_branch, projection_curve, projection_success_on_en, reflection_curve, SolutionProjector};
use qlss::algorithms::near_optimal::{random_t_run, FpaaPlan};
use qlss::algorithms::optimal::OptimalPlan;
use qlss::algorithms::refine::refine_with;
use qlss::algorithms::search::{adiabatic_norm_search_with, binary_norm_search_with, exhaustive_norm_search_with, log_candidates};
use qlss::algorithms::{rng_from, solve_given_norm, Algo3Config, FpaaConfig, Hats, NormEstimate, NormMethod, OptimalParams};
use qlss::bounds::{self, comparison_csv, comparison_report, BoundReport};
use qlss::circuits::{assemble_circuit, circuit_error, CircuitInputs, CircuitKind};
use qlss::instance::{hard_instance_ratio_bound, random_instance_with};
use qlss::montecarlo::{expected_query_monte_carlo, McReport};
use qlss::systems::schedule_f;
use qlss::{hard_instance_family, random_instance, DegreeRule, HardCase, LinearSystemInstance, Mode, QueryLedger};
use serde_json::json;

use crate::config::{Command, InstanceSource, RunConfig, Solver};
use crate::error::{CliError, CliResult};
use crate::plot::{render_svg, PlotSpec, Series};
use crate::store::{instance_to_json, load_instance};

/// Header of the solver and norm-estimation CSV files.
pub const BENCH_HEADER: &str = "method,kappa,eps,bound,measured_mean,ci_low,ci_high";

#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub name: String,
    pub contents: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutput {
    pub command: Command,
    /// Files written under the output directory; the first is the primary CSV.
    pub artifacts: Vec<Artifact>,
}

impl RunOutput {
    fn new(command: Command) -> Self {
        Self { command, artifacts: vec![] }
    }

    fn add(&mut self, name: impl Into<String>, contents: impl Into<String>) {
        self.artifacts.push(Artifact { name: name.into(), contents: contents.into() });
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.artifacts.iter().find(|a| a.name == name).map(|a| a.contents.as_str())
    }

    /// Contents printed when no output directory is given.
    pub fn primary(&self) -> &str {
        self.artifacts.first().map(|a| a.contents.as_str()).unwrap_or("")
    }

    pub fn write_to(&self, dir: &Path) -> CliResult<()> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        for a in &self.artifacts {
            let p = dir.join(&a.name);
            std::fs::write(&p, &a.contents).map_err(|e| CliError::io(&p, e))?;
        }
        Ok(())
    }
}

pub fn resolve_instance(cfg: &RunConfig) -> CliResult<LinearSystemInstance> {
    match &cfg.instance {
        Some(InstanceSource::File(p)) => load_instance(p),
        Some(InstanceSource::Generate(spec)) => Ok(random_instance_with(spec, cfg.seed)?),
        None => Ok(random_instance(cfg.params.n, cfg.params.kappa, None, cfg.seed)?),
    }
}

pub fn run(command: Command, cfg: &RunConfig) -> CliResult<RunOutput> {
    if let Some(c) = cfg.command {
        if c != command {
            return Err(CliError::Config(format!("config is for `{}`, not `{}`", c.name(), command.name())));
        }
    }
    cfg.validate()?;
    match command {
        Command::Solve => solve(cfg),
        Command::NormEst => norm_est(cfg),
        Command::SweepCurves => sweep_success(cfg),
        Command::VerifyCircuits => verify_circuits(cfg),
        Command::BenchBounds => bench_bounds(cfg),
        Command::HardInstance => hard_instance(cfg),
    }
}

fn bench_row(method: &str, kappa: f64, eps: f64, bound: Option<f64>, r: &McReport) -> String {
    let b = bound.map(|b| b.to_string()).unwrap_or_default();
    format!("{BENCH_HEADER}\n{method},{kappa},{eps},{b},{},{},{}\n", r.mean, r.ci_low, r.ci_high)
}

fn json_text(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("summary json");
    s.push('\n');
    s
}

/// Runs `trials` seeded calls of `f` and collects notes from every run.
fn monte_carlo<F>(cfg: &RunConfig, f: F) -> (McReport, Vec<String>)
where
    F: Fn(u64) -> qlss::Result<(QueryLedger, Vec<String>)> + Sync,
{
    let notes = Mutex::new(BTreeSet::new());
    let r = expected_query_monte_carlo(cfg.trials, cfg.seed, cfg.params.z, |s| {
        let (q, n) = f(s)?;
        if !n.is_empty() {
            notes.lock().unwrap().extend(n);
        }
        Ok(q)
    });
    (r, notes.into_inner().unwrap().into_iter().collect())
}

fn solve(cfg: &RunConfig) -> CliResult<RunOutput> {
    let inst = resolve_instance(cfg)?;
    let p = &cfg.params;
    let kappa = inst.kappa();
    let sampled = cfg.sampled;
    let mut ensemble_td = None;
    let (eps_col, bound, (report, notes)): (f64, BoundReport, _) = match p.solver {
        Solver::KnownNorm => {
            let t = p.t.unwrap_or(inst.x_norm());
            let mc = monte_carlo(cfg, |s| {
                let mode = if sampled { Mode::Sampled(s) } else { Mode::Exact };
                let o = solve_given_norm(&inst, p.eta, t, mode)?;
                Ok((o.queries, o.notes))
            });
            if !sampled {
                ensemble_td = Some(solve_given_norm(&inst, p.eta, t, Mode::Exact)?.trace_distance_to_x);
            }
            (p.eta, bounds::known_norm(kappa, p.eta)?, mc)
        }
        Solver::RandomT | Solver::Fpaa => {
            let base = Algo3Config::with_mu(p.mu, p.eps, (1.0, kappa))?;
            if p.solver == Solver::RandomT {
                let proj = SolutionProjector::new(&inst, base.eta_kp)?;
                let mc = monte_carlo(cfg, |s| {
                    let o = random_t_run(&inst, &base, &proj, &mut rng_from(s))?;
                    Ok((o.queries, o.notes))
                });
                if !sampled {
                    ensemble_td = Some(random_t_ensemble(&inst, &base)?.trace_distance);
                }
                (p.eps, bounds::random_t_theorem(kappa, base.eta, p.eps, 1.0, kappa)?, mc)
            } else {
                let fc = FpaaConfig { base: base.clone(), delta: p.delta, d: p.grid_d };
                let plan = FpaaPlan::new(&inst, &fc)?;
                let mc = monte_carlo(cfg, |s| {
                    let o = plan.run(&inst, &mut rng_from(s))?;
                    Ok((o.queries, o.notes))
                });
                if !sampled {
                    ensemble_td = Some(fpaa_ensemble(&inst, &plan)?.trace_distance);
                }
                (p.eps, bounds::fpaa_theorem(kappa, base.eta, p.eps, 1.0, kappa, p.delta, Some(p.grid_d))?, mc)
            }
        }
        Solver::Optimal => {
            let params = OptimalParams::new(&p.hats, kappa, p.eps)?;
            let plan = OptimalPlan::new(&inst, params.clone())?;
            let mc = monte_carlo(cfg, |s| {
                let o = plan.run(&mut rng_from(s))?;
                Ok((o.queries, o.notes))
            });
            if !sampled {
                ensemble_td = Some(optimal_ensemble(&inst, &params)?.trace_distance);
            }
            let b = if p.hats == Hats::default() {
                bounds::optimal_theorem(kappa, p.eps)?
            } else {
                bounds::optimal_exact(kappa, p.eps, &p.hats)?
            };
            (p.eps, b, mc)
        }
    };
    let mut out = RunOutput::new(Command::Solve);
    out.add("solve.csv", bench_row(p.solver.name(), kappa, eps_col, Some(bound.value), &report));
    out.add(
        "solve.json",
        json_text(&json!({
            "command": "solve",
            "method": p.solver.name(),
            "mode": if sampled { "sampled" } else { "exact" },
            "seed": cfg.seed,
            "x_norm": inst.x_norm(),
            "bound": bound,
            "monte_carlo": report,
            "ensemble_trace_distance": ensemble_td,
            "notes": notes,
        })),
    );
    Ok(out)
}

fn norm_est(cfg: &RunConfig) -> CliResult<RunOutput> {
    let inst = resolve_instance(cfg)?;
    let p = &cfg.params;
    let kappa = inst.kappa();
    let xn = inst.x_norm();
    let cands = log_candidates(kappa).len();
    let (bound, beta) = match p.method {
        NormMethod::Exhaustive => (Some(bounds::exhaustive_search(kappa, p.search.exhaustive_eta, cands).value), 2.0),
        NormMethod::Binary => (Some(bounds::binary_search(kappa, p.search.binary_eta, cands).value), 2.0),
        NormMethod::Adiabatic => (None, 2.0),
        NormMethod::AeRefine => (None, 1.0 + p.eps),
        NormMethod::RandomT => {
            return Err(CliError::Config("norm-est supports exhaustive, binary, adiabatic and ae-refine".into()))
        }
    };
    let t_in = p.t.unwrap_or(1.5 * xn);
    let hits = AtomicU64::new(0);
    let (report, notes) = monte_carlo(cfg, |s| {
        let rng = &mut rng_from(s);
        let est: NormEstimate = match p.method {
            NormMethod::Exhaustive => exhaustive_norm_search_with(&inst, kappa, &p.search, rng)?,
            NormMethod::Binary => binary_norm_search_with(&inst, kappa, &p.search, rng)?,
            NormMethod::Adiabatic => adiabatic_norm_search_with(&inst, kappa, &p.search, rng)?,
            _ => refine_with(&inst, t_in, p.eps, p.noise, rng)?,
        };
        if est.within(xn, beta) {
            hits.fetch_add(1, Ordering::Relaxed);
        }
        Ok((est.queries, est.notes))
    });
    let hits = hits.into_inner();
    let mut out = RunOutput::new(Command::NormEst);
    out.add("norm_est.csv", bench_row(p.method.name(), kappa, p.eps, bound, &report));
    out.add(
        "norm_est.json",
        json_text(&json!({
            "command": "norm-est",
            "method": p.method.name(),
            "seed": cfg.seed,
            "x_norm": xn,
            "beta": beta,
            "within_beta": hits,
            "success_rate": hits as f64 / cfg.trials as f64,
            "monte_carlo": report,
            "notes": notes,
        })),
    );
    Ok(out)
}

/// Log-spaced grid of t/‖x‖ with both ends included.
pub fn ratio_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    let step = (hi / lo).ln() / (points - 1) as f64;
    (0..points).map(|k| if k + 1 == points { hi } else { lo * (step * k as f64).exp() }).collect()
}

/// Rows (r, reflection success, projection success) of the η → 0 success curves.
pub fn success_curves(lo: f64, hi: f64, points: usize) -> Vec<(f64, f64, f64)> {
    ratio_grid(lo, hi, points).into_iter().map(|r| (r, reflection_curve(r), projection_curve(r))).collect()
}

pub fn success_svg(rows: &[(f64, f64, f64)]) -> CliResult<String> {
    let spec = PlotSpec {
        title: "Success probability vs norm estimate".into(),
        x_label: "t / |x|".into(),
        y_label: "success probability".into(),
        log_x: true,
    };
    render_svg(
        &spec,
        &[
            Series { name: "kernel reflection".into(), points: rows.iter().map(|r| (r.0, r.1)).collect() },
            Series { name: "kernel projection".into(), points: rows.iter().map(|r| (r.0, r.2)).collect() },
        ],
    )
}

fn sweep_success(cfg: &RunConfig) -> CliResult<RunOutput> {
    let p = &cfg.params;
    let rows = success_curves(p.ratio_min, p.ratio_max, p.points);
    let mut csv = String::from("ratio,reflection,projection");
    // Finite-η success probabilities on a concrete instance when one is given.
    let sim = match &cfg.instance {
        Some(_) => {
            let inst = resolve_instance(cfg)?;
            let xn = inst.x_norm();
            csv.push_str(",reflection_sim,projection_sim");
            let v = rows
                .iter()
                .map(|&(r, _, _)| {
                    let kr = known_norm_branch(&inst, p.eta, r * xn, DegreeRule::Exact)?.p_succ;
                    let kp = projection_success_on_en(&inst, p.eta, r * xn, DegreeRule::Exact)?.0;
                    Ok((kr, kp))
                })
                .collect::<qlss::Result<Vec<_>>>()?;
            Some(v)
        }
        None => None,
    };
    csv.push('\n');
    for (k, (r, kr, kp)) in rows.iter().enumerate() {
        csv.push_str(&format!("{r},{kr},{kp}"));
        if let Some(s) = &sim {
            csv.push_str(&format!(",{},{}", s[k].0, s[k].1));
        }
        csv.push('\n');
    }
    let mut out = RunOutput::new(Command::SweepCurves);
    out.add("success_curves.csv", csv);
    if p.svg {
        out.add("success_curves.svg", success_svg(&rows)?);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct CircuitRow {
    pub kind: CircuitKind,
    pub qubits: usize,
    pub ancillas: usize,
    pub max_error: f64,
    pub pass: bool,
}

/// Assembles every circuit for (A, b) on `s` system qubits and compares with its target.
pub fn circuit_table(inst: &LinearSystemInstance, s: usize, t: f64, f: f64, tol: f64) -> qlss::Result<Vec<CircuitRow>> {
    let mut inputs = CircuitInputs::from_system(inst.a(), inst.b(), s)?;
    inputs.t = Some(t);
    inputs.f = Some(f);
    CircuitKind::ALL
        .iter()
        .map(|&kind| {
            let c = assemble_circuit(kind, &inputs)?;
            let max_error = circuit_error(kind, inst.a(), inst.b(), &inputs)?;
            Ok(CircuitRow { kind, qubits: c.circuit.qubits, ancillas: c.ancillas, max_error, pass: max_error <= tol })
        })
        .collect()
}

fn verify_circuits(cfg: &RunConfig) -> CliResult<RunOutput> {
    let p = &cfg.params;
    let s = p.qubits;
    if s < 2 {
        return Err(CliError::Config("verify-circuits needs at least 2 system qubits".into()));
    }
    let inst = match &cfg.instance {
        Some(_) => resolve_instance(cfg)?,
        None => random_instance((1 << s) - 1, p.kappa, None, cfg.seed)?,
    };
    let kappa = inst.kappa();
    let f = schedule_f(0.5f64.max(1.0 / kappa), kappa)?;
    let rows = circuit_table(&inst, s, p.t.unwrap_or(inst.x_norm()), f, 1e-10)?;
    let mut csv = String::from("circuit,qubits,ancillas,max_error,status\n");
    for r in &rows {
        let status = if r.pass { "PASS" } else { "FAIL" };
        csv.push_str(&format!("{},{},{},{:.3e},{status}\n", r.kind.name(), r.qubits, r.ancillas, r.max_error));
    }
    if let Some(r) = rows.iter().find(|r| !r.pass) {
        return Err(CliError::VerificationFailed(format!("{} deviates by {:.3e}", r.kind.name(), r.max_error)));
    }
    let mut out = RunOutput::new(Command::VerifyCircuits);
    out.add("circuits.csv", csv);
    Ok(out)
}

fn bench_bounds(cfg: &RunConfig) -> CliResult<RunOutput> {
    let p = &cfg.params;
    let mut out = RunOutput::new(Command::BenchBounds);
    out.add("bounds.csv", comparison_csv(&comparison_report(p.kappa, p.eps)?));
    Ok(out)
}

fn hard_instance(cfg: &RunConfig) -> CliResult<RunOutput> {
    let p = &cfg.params;
    let mut csv = String::from("case,n,kappa,eps,margin,norm_sq\n");
    let mut norms = vec![];
    let mut files = vec![];
    for (case, tag) in [(HardCase::I, "i"), (HardCase::Ii, "ii")] {
        let h = hard_instance_family(p.n, p.kappa, p.eps, case, cfg.seed)?;
        let nsq = h.instance.x_norm().powi(2);
        csv.push_str(&format!("{tag},{},{},{},{},{nsq}\n", p.n, p.kappa, p.eps, h.m));
        norms.push(nsq);
        files.push((format!("hard_{tag}.qlsi"), instance_to_json(&h.instance)));
    }
    let ratio = (norms[0] / norms[1]).max(norms[1] / norms[0]);
    let bound = hard_instance_ratio_bound(p.eps);
    let mut out = RunOutput::new(Command::HardInstance);
    out.add("hard_instance.csv", csv);
    out.add(
        "hard_instance.json",
        json_text(&json!({ "command": "hard-instance", "seed": cfg.seed, "ratio": ratio, "ratio_bound": bound, "separated": ratio >= bound })),
    );
    for (n, c) in files {
        out.add(n, c);
    }
    Ok(out)
}
