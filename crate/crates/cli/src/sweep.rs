//! Parameter sweeps from TOML: cross-product of grids, concurrent rows, a
//! single serialized writer and resumption by row key.

use std::collections::HashSet;
use std::path::Path;
use std::sync::mpsc;
use std::time::Instant;

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::Deserialize;

use ringlll::bounds::DEFAULT_SEARCH_BOUND;
use ringlll::experiment::{ExperimentConfig, Model, DEFAULT_BETA, DEFAULT_REPS, DEFAULT_STEPS};

use crate::output::{base_meta, existing_keys, open_csv, write_sidecar};
use crate::rows::{bounds_rows, simulate_row, BOUNDS_HEADER, BOUNDS_KEY, SIM_HEADER, SIM_KEY};

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum Grid<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> Grid<T> {
    pub fn values(&self) -> Vec<T> {
        match self {
            Grid::One(v) => vec![v.clone()],
            Grid::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum SweepKind {
    #[default]
    Simulate,
    Bounds,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub kind: SweepKind,
    pub models: Grid<Model>,
    #[serde(default = "default_n")]
    pub n: Grid<usize>,
    #[serde(default = "default_k")]
    pub k: Grid<usize>,
    pub alpha: Grid<f64>,
    pub gamma: Grid<f64>,
    #[serde(default = "default_beta")]
    pub beta: Grid<f64>,
    #[serde(default = "default_steps")]
    pub steps: Grid<u64>,
    #[serde(default = "default_reps")]
    pub reps: Grid<usize>,
    #[serde(default = "default_seed")]
    pub seed: Grid<u64>,
    #[serde(default)]
    pub burn_in: u64,
    pub gamma_prime: Option<f64>,
    pub target: Option<String>,
    #[serde(default = "default_search_bound")]
    pub search_bound: usize,
}

fn default_n() -> Grid<usize> {
    Grid::Many(Vec::new())
}
fn default_k() -> Grid<usize> {
    Grid::One(1)
}
fn default_beta() -> Grid<f64> {
    Grid::One(DEFAULT_BETA)
}
fn default_steps() -> Grid<u64> {
    Grid::One(DEFAULT_STEPS)
}
fn default_reps() -> Grid<usize> {
    Grid::One(DEFAULT_REPS)
}
fn default_seed() -> Grid<u64> {
    Grid::One(0)
}
fn default_search_bound() -> usize {
    DEFAULT_SEARCH_BOUND
}

/// Table preset: all four models, n in {10, 20, 30}, alpha in {0.3, 0.5, 0.7},
/// at gamma = 1.
pub const TABLE_PRESET: &str = r#"
kind = "simulate"
models = ["SI", "DI", "SU", "DU"]
n = [10, 20, 30]
alpha = [0.3, 0.5, 0.7]
gamma = 1.0
"#;

pub fn parse(text: &str) -> Result<SweepConfig> {
    toml::from_str(text).map_err(|e| anyhow::anyhow!("malformed sweep config: {e}"))
}

impl SweepConfig {
    pub fn experiments(&self) -> Vec<ExperimentConfig> {
        let mut out = Vec::new();
        for model in self.models.values() {
            for n in self.n.values() {
                for k in self.k.values() {
                    for alpha in self.alpha.values() {
                        for gamma in self.gamma.values() {
                            for beta in self.beta.values() {
                                for steps in self.steps.values() {
                                    for reps in self.reps.values() {
                                        for seed in self.seed.values() {
                                            out.push(ExperimentConfig {
                                                model,
                                                n,
                                                k,
                                                alpha,
                                                gamma,
                                                gamma_prime: self.gamma_prime,
                                                beta,
                                                steps,
                                                burn_in: self.burn_in,
                                                reps,
                                                seed,
                                                target: self.target.clone(),
                                            });
                                        }
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }
}

pub struct SweepReport {
    pub written: usize,
    pub skipped: usize,
}

/// Runs the sweep, appending to `output` and skipping rows already there.
pub fn run(cfg: &SweepConfig, output: &Path, source: &str) -> Result<SweepReport> {
    let start = Instant::now();
    let (header, key_cols) = match cfg.kind {
        SweepKind::Simulate => (SIM_HEADER, SIM_KEY),
        SweepKind::Bounds => (BOUNDS_HEADER, BOUNDS_KEY),
    };
    let done: HashSet<String> = existing_keys(output, key_cols)
        .with_context(|| format!("reading {} for resume", output.display()))?
        .into_iter()
        .collect();
    let mut writer = open_csv(output, header, true)?;

    let (tx, rx) = mpsc::channel::<Vec<Vec<String>>>();
    let mut skipped = 0;
    let mut written = 0;
    match cfg.kind {
        SweepKind::Simulate => {
            let todo: Vec<ExperimentConfig> = cfg
                .experiments()
                .into_iter()
                .filter(|e| {
                    let keep = !done.contains(&crate::rows::sim_key(e));
                    if !keep {
                        skipped += 1;
                    }
                    keep
                })
                .collect();
            std::thread::scope(|s| {
                s.spawn(move || {
                    todo.par_iter().for_each_with(tx, |tx, e| {
                        let _ = tx.send(vec![simulate_row(e)]);
                    });
                });
                for rows in rx {
                    for r in rows {
                        writer.write_record(&r)?;
                        written += 1;
                    }
                    writer.flush()?;
                }
                anyhow::Ok(())
            })?;
        }
        SweepKind::Bounds => {
            let mut todo = Vec::new();
            for model in cfg.models.values() {
                for k in cfg.k.values() {
                    for alpha in cfg.alpha.values() {
                        for gamma in cfg.gamma.values() {
                            let key = crate::rows::bounds_key(model, alpha, gamma, k, cfg.search_bound);
                            if done.contains(&key) {
                                skipped += 1;
                            } else {
                                todo.push((model, alpha, gamma, k));
                            }
                        }
                    }
                }
            }
            let bound = cfg.search_bound;
            std::thread::scope(|s| {
                s.spawn(move || {
                    todo.par_iter().for_each_with(tx, |tx, &(m, a, g, k)| {
                        let _ = tx.send(bounds_rows(&[m], a, g, k, bound));
                    });
                });
                for rows in rx {
                    for r in rows {
                        writer.write_record(&r)?;
                        written += 1;
                    }
                    writer.flush()?;
                }
                anyhow::Ok(())
            })?;
        }
    }

    let mut meta = base_meta("sweep");
    meta.push(("config", source.to_string()));
    meta.push(("rows_written", written.to_string()));
    meta.push(("rows_skipped", skipped.to_string()));
    meta.push(("workers", rayon::current_num_threads().to_string()));
    meta.push(("elapsed_s", format!("{:.3}", start.elapsed().as_secs_f64())));
    write_sidecar(output, &meta)?;
    Ok(SweepReport { written, skipped })
}
