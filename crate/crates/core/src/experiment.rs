//! Experiment assembly: graph, policy and initial state for each adversary
//! class, and the averaged simulation run.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bounds::{worst_target, Informed};
use crate::dynamics::{mean_efficiency_over_reps, InitialState, RepSummary, SimConfig};
use crate::error::{Error, Result};
use crate::game::{ActionProfile, GameParams};
use crate::oracle::potential_argmax;
use crate::policy::{
    aggressive_budget, budget_of, static_informed_policy, static_uninformed_allocation, AggressivePolicy,
    Policy, UninformedPolicy,
};
use crate::ring::RingGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Model {
    Su,
    Si,
    Du,
    Di,
}

impl Model {
    pub const ALL: [Model; 4] = [Model::Su, Model::Si, Model::Du, Model::Di];

    pub fn as_str(&self) -> &'static str {
        match self {
            Model::Su => "SU",
            Model::Si => "SI",
            Model::Du => "DU",
            Model::Di => "DI",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "SU" => Ok(Model::Su),
            "SI" => Ok(Model::Si),
            "DU" => Ok(Model::Du),
            "DI" => Ok(Model::Di),
            _ => Err(Error::InvalidParameter(format!("unknown model {s:?} (expected SU, SI, DU or DI)"))),
        }
    }
}

pub const DEFAULT_BETA: f64 = 25.0;
pub const DEFAULT_STEPS: u64 = 1_000_000;
pub const DEFAULT_REPS: usize = 30;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub model: Model,
    pub n: usize,
    pub k: usize,
    pub alpha: f64,
    pub gamma: f64,
    /// Deterministic share for the dynamic uninformed policy; `gamma / 2` when absent.
    pub gamma_prime: Option<f64>,
    pub beta: f64,
    pub steps: u64,
    pub burn_in: u64,
    pub reps: usize,
    pub seed: u64,
    /// Run-length target such as `x2y5`, repeated to fill the ring.
    pub target: Option<String>,
}

impl ExperimentConfig {
    pub fn new(model: Model, n: usize, alpha: f64, gamma: f64) -> Self {
        ExperimentConfig {
            model,
            n,
            k: 1,
            alpha,
            gamma,
            gamma_prime: None,
            beta: DEFAULT_BETA,
            steps: DEFAULT_STEPS,
            burn_in: 0,
            reps: DEFAULT_REPS,
            seed: 0,
            target: None,
        }
    }

    pub fn sim_config(&self) -> SimConfig {
        SimConfig {
            beta: self.beta,
            steps: self.steps,
            seed: self.seed,
            burn_in: self.burn_in,
            record_every: 0,
        }
    }
}

/// Everything needed to simulate or analyze one configuration.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub graph: RingGraph,
    pub params: GameParams,
    pub policy: Policy,
    pub init: InitialState,
    pub target: Option<ActionProfile>,
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&gamma) {
        return Err(Error::InvalidParameter(format!("gamma = {gamma} must lie in [0, 1]")));
    }
    Ok(())
}

fn resolve_target(cfg: &ExperimentConfig, kind: Informed) -> Result<ActionProfile> {
    match &cfg.target {
        Some(spec) => ActionProfile::from_pattern(spec, cfg.n),
        None => Ok(worst_target(kind, cfg.n, cfg.alpha, cfg.gamma)?.profile),
    }
}

/// Builds the policy for `cfg`. Informed models without an explicit target
/// aim at the least efficient profile their budget can stabilize.
pub fn prepare(cfg: &ExperimentConfig) -> Result<Prepared> {
    let graph = RingGraph::new(cfg.n, cfg.k)?;
    let params = GameParams::new(cfg.alpha)?;
    check_gamma(cfg.gamma)?;
    let n = cfg.n;
    let (policy, init, target) = match cfg.model {
        Model::Su => {
            let inf = static_uninformed_allocation(&graph, &params, cfg.gamma);
            let start = potential_argmax(&graph, &params, &inf);
            (Policy::Static(inf), InitialState::Fixed(start), None)
        }
        Model::Si => {
            if cfg.k != 1 {
                return Err(Error::RequiresUnitRing("static informed model"));
            }
            let target = resolve_target(cfg, Informed::Static)?;
            let inf = static_informed_policy(&graph, &params, &target, cfg.gamma)?;
            (Policy::Static(inf), InitialState::Fixed(target.clone()), Some(target))
        }
        Model::Du => {
            let gp = cfg.gamma_prime.unwrap_or(cfg.gamma / 2.0);
            let u = UninformedPolicy::new(n, cfg.gamma, gp)?;
            (Policy::Uninformed(u), InitialState::Random, None)
        }
        Model::Di => {
            if cfg.k != 1 {
                return Err(Error::RequiresUnitRing("dynamic informed model"));
            }
            let target = resolve_target(cfg, Informed::Dynamic)?;
            let policy = if target == ActionProfile::all_x(n) {
                Policy::None
            } else {
                let budget = budget_of(cfg.gamma, n);
                let need = aggressive_budget(&target, cfg.alpha);
                if need > budget {
                    return Err(Error::InsufficientBudget {
                        budget,
                        shortfall: need - budget,
                    });
                }
                Policy::Aggressive(AggressivePolicy::new(target.clone(), cfg.alpha)?)
            };
            (policy, InitialState::Fixed(target.clone()), Some(target))
        }
    };
    Ok(Prepared {
        graph,
        params,
        policy,
        init,
        target,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimOutcome {
    pub summary: RepSummary,
    pub target: Option<ActionProfile>,
}

pub fn simulate(cfg: &ExperimentConfig) -> Result<SimOutcome> {
    let prep = prepare(cfg)?;
    let summary = mean_efficiency_over_reps(
        &prep.graph,
        &prep.params,
        &prep.policy,
        &cfg.sim_config(),
        cfg.reps,
        &prep.init,
    )?;
    Ok(SimOutcome {
        summary,
        target: prep.target,
    })
}
