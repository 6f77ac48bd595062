use std::path::{Path, PathBuf};

use qlss::algorithms::{AeNoise, Hats, SearchConfig};
use qlss::algorithms::NormMethod;
use qlss::InstanceSpec;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Solve,
    NormEst,
    #[serde(rename = "sweep-fig2")]
    SweepCurves,
    VerifyCircuits,
    BenchBounds,
    HardInstance,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::NormEst => "norm-est",
            Command::SweepCurves => "sweep-fig2",
            Command::VerifyCircuits => "verify-circuits",
            Command::BenchBounds => "bench-bounds",
            Command::HardInstance => "hard-instance",
        }
    }
}

/// Which solver `solve` runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Solver {
    /// Kernel reflection at a given norm estimate t.
    KnownNorm,
    /// Random-t search followed by kernel projection.
    RandomT,
    /// Random-t search under fixed-point amplification.
    Fpaa,
    /// Norm tracking along the homotopy family.
    Optimal,
}

impl Solver {
    pub fn name(self) -> &'static str {
        match self {
            Solver::KnownNorm => "known-norm",
            Solver::RandomT => "random-t",
            Solver::Fpaa => "fpaa",
            Solver::Optimal => "optimal",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum InstanceSource {
    /// Path to a `.qlsi` file.
    File(PathBuf),
    Generate(InstanceSpec),
}

/// Algorithm parameters; every field has a default.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Params {
    pub solver: Solver,
    pub method: NormMethod,
    /// Condition bound passed to solvers and bound formulas.
    pub kappa: f64,
    pub eps: f64,
    /// Filter tail bound for the known-norm solver.
    pub eta: f64,
    /// Norm estimate; defaults to ‖x‖ for `known-norm` and 1.5‖x‖ for `ae-refine`.
    pub t: Option<f64>,
    /// Target μ of the random-t solvers; fixes their η on the bracket [1, κ].
    pub mu: f64,
    /// Amplified search failure target.
    pub delta: f64,
    /// Amplified search grid spacing 2^-d.
    pub grid_d: u32,
    pub hats: Hats,
    pub search: SearchConfig,
    pub noise: AeNoise,
    /// Dimension of the default generated instance and of `hard-instance`.
    pub n: usize,
    /// Sweep grid in t/‖x‖.
    pub points: usize,
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub svg: bool,
    /// Confidence-interval half-width in standard errors.
    pub z: f64,
    /// Qubits of the system register in `verify-circuits`.
    pub qubits: usize,
}

impl Default for Params {
    fn default() -> Self {
        Self {
            solver: Solver::KnownNorm,
            method: NormMethod::Exhaustive,
            kappa: 16.0,
            eps: 1e-2,
            eta: 1e-2,
            t: None,
            mu: 0.25,
            delta: 0.25,
            grid_d: 4,
            hats: Hats::default(),
            search: SearchConfig::default(),
            noise: AeNoise::Ideal,
            n: 8,
            points: 200,
            ratio_min: 0.1,
            ratio_max: 10.0,
            svg: true,
            z: 3.0,
            qubits: 2,
        }
    }
}

fn one() -> u64 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub command: Option<Command>,
    /// Defaults to a random square instance of size `params.n` and condition `params.kappa`.
    #[serde(default)]
    pub instance: Option<InstanceSource>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "one")]
    pub trials: u64,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub sampled: bool,
    #[serde(default)]
    pub params: Params,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { command: None, instance: None, seed: 0, trials: 1, out: None, sampled: false, params: Params::default() }
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> CliResult<Self> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("line {} column {}: {e}", e.line(), e.column())))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> CliResult<()> {
        let p = &self.params;
        let bad = |m: String| Err(CliError::Config(m));
        if self.trials == 0 {
            return bad("trials must be at least 1".into());
        }
        if !(p.kappa >= 1.0) {
            return bad(format!("kappa = {} must be at least 1", p.kappa));
        }
        if !(p.eps > 0.0 && p.eps < 1.0) || !(p.eta > 0.0 && p.eta < 1.0) {
            return bad("eps and eta must lie in (0, 1)".into());
        }
        if p.points < 2 || !(p.ratio_min > 0.0 && p.ratio_max > p.ratio_min) {
            return bad("sweep needs at least two points and 0 < ratio_min < ratio_max".into());
        }
        if !(p.z > 0.0) {
            return bad("z must be positive".into());
        }
        Ok(())
    }
}
