//! Row layouts shared by the single-shot commands and sweeps.

use ringlll::bounds::{di_bound, du_bound, si_bound, su_bound, BoundResult};
use ringlll::experiment::{simulate, ExperimentConfig, Model};

use crate::output::sig6;

pub const SIM_HEADER: &[&str] = &[
    "model",
    "n",
    "k",
    "alpha",
    "gamma",
    "gamma_prime",
    "beta",
    "steps",
    "burn_in",
    "reps",
    "seed",
    "target_spec",
    "target",
    "mean_efficiency",
    "std_error",
    "per_rep",
    "status",
];

pub const SIM_KEY: &[&str] = &[
    "model",
    "n",
    "k",
    "alpha",
    "gamma",
    "gamma_prime",
    "beta",
    "steps",
    "burn_in",
    "reps",
    "seed",
    "target_spec",
];

pub const BOUNDS_HEADER: &[&str] = &["model", "alpha", "gamma", "k", "search_bound", "value", "witness"];
pub const BOUNDS_KEY: &[&str] = &["model", "alpha", "gamma", "k", "search_bound"];

fn key_fields(e: &ExperimentConfig) -> Vec<String> {
    vec![
        e.model.to_string(),
        e.n.to_string(),
        e.k.to_string(),
        sig6(e.alpha),
        sig6(e.gamma),
        e.gamma_prime.map(sig6).unwrap_or_default(),
        sig6(e.beta),
        e.steps.to_string(),
        e.burn_in.to_string(),
        e.reps.to_string(),
        e.seed.to_string(),
        e.target.clone().unwrap_or_default(),
    ]
}

pub fn sim_key(e: &ExperimentConfig) -> String {
    key_fields(e).join("|")
}

/// Result row for one experiment. Errors land in the status column.
pub fn simulate_row(e: &ExperimentConfig) -> Vec<String> {
    let mut row = key_fields(e);
    match simulate(e) {
        Ok(out) => {
            row.push(out.target.map(|t| t.to_pattern()).unwrap_or_default());
            row.push(sig6(out.summary.mean));
            row.push(sig6(out.summary.std_error));
            row.push(
                out.summary
                    .per_rep
                    .iter()
                    .map(|v| sig6(*v))
                    .collect::<Vec<_>>()
                    .join(";"),
            );
            row.push("ok".into());
        }
        Err(err) => {
            row.extend([String::new(), String::new(), String::new(), String::new()]);
            row.push(format!("error: {err}"));
        }
    }
    row
}

pub fn bounds_key(model: Model, alpha: f64, gamma: f64, k: usize, search_bound: usize) -> String {
    [model.to_string(), sig6(alpha), sig6(gamma), k.to_string(), search_bound.to_string()].join("|")
}

fn informed_row(r: ringlll::Result<BoundResult>) -> (String, String) {
    match r {
        Ok(b) => (
            sig6(b.value),
            b.witness.map(|w| w.summary()).unwrap_or_else(|| "none".into()),
        ),
        Err(e) => (String::new(), format!("error: {e}")),
    }
}

/// One row per model. Informed programs are defined on the unit ring only.
pub fn bounds_rows(models: &[Model], alpha: f64, gamma: f64, k: usize, search_bound: usize) -> Vec<Vec<String>> {
    models
        .iter()
        .map(|&m| {
            let (value, witness) = match m {
                Model::Su => (sig6(su_bound(alpha, gamma, k)), "closed form".into()),
                Model::Du => (sig6(du_bound(alpha, gamma, k)), "closed form".into()),
                Model::Si | Model::Di if k != 1 => (String::new(), "requires k = 1".into()),
                Model::Si => informed_row(si_bound(alpha, gamma, search_bound)),
                Model::Di => informed_row(di_bound(alpha, gamma, search_bound)),
            };
            vec![
                m.to_string(),
                sig6(alpha),
                sig6(gamma),
                k.to_string(),
                search_bound.to_string(),
                value,
                witness,
            ]
        })
        .collect()
}
