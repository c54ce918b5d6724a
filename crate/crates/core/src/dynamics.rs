//! Log-linear learning under adversarial influence.
//!
//! Each step draws, in order: the revising agent (`gen_range(0..n)`), the
//! agent's adversary tag when the policy is randomized (one `f64` draw), and
//! the action variate (one `f64` draw). Generators are `ChaCha8Rng` seeded
//! with `seed_from_u64(seed)`; repetition `r` runs on stream `r`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::game::{optimal_welfare, utility_of, welfare, Action, ActionProfile, GameParams};
use crate::policy::{AggressivePolicy, Policy, UninformedPolicy};
use crate::ring::RingGraph;

/// Generator family recorded in output metadata.
pub const RNG_NAME: &str = "ChaCha8Rng(seed_from_u64, stream = repetition)";

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub beta: f64,
    pub steps: u64,
    pub seed: u64,
    pub burn_in: u64,
    /// Keep every `record_every`-th post-step state; 0 keeps none.
    pub record_every: u64,
}

impl SimConfig {
    pub fn new(beta: f64, steps: u64, seed: u64) -> Self {
        SimConfig {
            beta,
            steps,
            seed,
            burn_in: 0,
            record_every: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidParameter(format!("beta = {} must be finite and >= 0", self.beta)));
        }
        if self.steps == 0 || self.steps <= self.burn_in {
            return Err(Error::InvalidParameter(format!(
                "steps = {} must exceed burn_in = {}",
                self.steps, self.burn_in
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub states: Vec<ActionProfile>,
    pub final_state: ActionProfile,
    pub mean_efficiency: f64,
    /// Share of averaged steps spent in the initial profile.
    pub fraction_at_start: f64,
}

/// `(P(x), P(y))` for agent `i` revising against `tag`.
pub fn update_distribution(
    g: &RingGraph,
    p: &GameParams,
    a: &ActionProfile,
    i: usize,
    tag: Option<Action>,
    beta: f64,
) -> (f64, f64) {
    let ux = utility_of(g, p, a, i, Action::X, tag);
    let uy = utility_of(g, p, a, i, Action::Y, tag);
    logit(ux, uy, beta)
}

fn logit(ux: f64, uy: f64, beta: f64) -> (f64, f64) {
    let m = ux.max(uy);
    let ex = (beta * (ux - m)).exp();
    let ey = (beta * (uy - m)).exp();
    let px = ex / (ex + ey);
    (px, 1.0 - px)
}

fn draw_tag<R: Rng + ?Sized>(
    policy: &Policy,
    a: &ActionProfile,
    i: usize,
    rng: &mut R,
) -> Option<Action> {
    match policy {
        Policy::None => None,
        Policy::Static(inf) => inf.tag(i),
        Policy::Aggressive(pol) => pol.influence(a).tag(i),
        Policy::Uninformed(u) => u.sample_agent(i, rng),
    }
}

/// One revision. Influence is evaluated at the pre-step state.
pub fn step<R: Rng + ?Sized>(
    g: &RingGraph,
    p: &GameParams,
    a: &ActionProfile,
    policy: &Policy,
    beta: f64,
    rng: &mut R,
) -> ActionProfile {
    let i = rng.gen_range(0..g.n());
    let tag = draw_tag(policy, a, i, rng);
    let (px, _) = update_distribution(g, p, a, i, tag, beta);
    let u: f64 = rng.gen();
    let mut next = a.clone();
    next.set(i, if u < px { Action::X } else { Action::Y });
    next
}

/// Per-policy tag lookup for the inner loop. Aggressive influence is cached
/// and refreshed only when the state changes.
enum Tagger<'a> {
    Fixed(Vec<Option<Action>>),
    Aggressive {
        policy: &'a AggressivePolicy,
        tags: Vec<Option<Action>>,
        stale: bool,
    },
    Uninformed(&'a UninformedPolicy),
}

impl<'a> Tagger<'a> {
    fn new(policy: &'a Policy, n: usize) -> Self {
        match policy {
            Policy::None => Tagger::Fixed(vec![None; n]),
            Policy::Static(inf) => Tagger::Fixed(inf.tags().to_vec()),
            Policy::Aggressive(pol) => Tagger::Aggressive {
                policy: pol,
                tags: Vec::new(),
                stale: true,
            },
            Policy::Uninformed(u) => Tagger::Uninformed(u),
        }
    }

    fn tag<R: Rng + ?Sized>(&mut self, a: &ActionProfile, i: usize, rng: &mut R) -> Option<Action> {
        match self {
            Tagger::Fixed(tags) => tags[i],
            Tagger::Aggressive { policy, tags, stale } => {
                if *stale {
                    *tags = policy.influence(a).tags().to_vec();
                    *stale = false;
                }
                tags[i]
            }
            Tagger::Uninformed(u) => u.sample_agent(i, rng),
        }
    }

    fn changed(&mut self) {
        if let Tagger::Aggressive { stale, .. } = self {
            *stale = true;
        }
    }
}

fn link(p: &GameParams, a: Action, b: Action) -> f64 {
    if a == b {
        p.link_value(a)
    } else {
        0.0
    }
}

fn run_rng(
    g: &RingGraph,
    p: &GameParams,
    policy: &Policy,
    cfg: &SimConfig,
    a0: ActionProfile,
    rng: &mut ChaCha8Rng,
) -> Trajectory {
    let n = g.n();
    let w_opt = optimal_welfare(g, p);
    let mut a = a0;
    let start = a.clone();
    let mut mismatched = 0usize;
    let mut w = welfare(g, p, &a);
    let mut tagger = Tagger::new(policy, n);
    let mut eff_sum = 0.0;
    let mut at_start = 0u64;
    let mut states = Vec::new();

    for t in 1..=cfg.steps {
        let i = rng.gen_range(0..n);
        let tag = tagger.tag(&a, i, rng);
        let (px, _) = update_distribution(g, p, &a, i, tag, cfg.beta);
        let u: f64 = rng.gen();
        let new = if u < px { Action::X } else { Action::Y };
        let old = a.get(i);
        if new != old {
            let mut dw = 0.0;
            for &j in g.adj(i) {
                let aj = a.get(j);
                dw += link(p, new, aj) - link(p, old, aj);
            }
            w += 2.0 * dw;
            a.set(i, new);
            if new == start.get(i) {
                mismatched -= 1;
            } else {
                mismatched += 1;
            }
            tagger.changed();
        }
        if t > cfg.burn_in {
            eff_sum += w / w_opt;
            if mismatched == 0 {
                at_start += 1;
            }
        }
        if cfg.record_every > 0 && t % cfg.record_every == 0 {
            states.push(a.clone());
        }
    }
    let counted = (cfg.steps - cfg.burn_in) as f64;
    Trajectory {
        states,
        final_state: a,
        mean_efficiency: (eff_sum / counted).clamp(0.0, 1.0),
        fraction_at_start: at_start as f64 / counted,
    }
}

fn rep_rng(seed: u64, rep: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep);
    rng
}

fn check_shape(g: &RingGraph, a0: &ActionProfile) -> Result<()> {
    if a0.len() != g.n() {
        return Err(Error::ProfileLength {
            expected: g.n(),
            got: a0.len(),
        });
    }
    Ok(())
}

/// Runs one trajectory on stream 0 of `cfg.seed`.
pub fn run(
    g: &RingGraph,
    p: &GameParams,
    policy: &Policy,
    cfg: &SimConfig,
    a0: ActionProfile,
) -> Result<Trajectory> {
    cfg.validate()?;
    check_shape(g, &a0)?;
    Ok(run_rng(g, p, policy, cfg, a0, &mut rep_rng(cfg.seed, 0)))
}

/// Starting profile of each repetition.
#[derive(Debug, Clone, PartialEq)]
pub enum InitialState {
    Fixed(ActionProfile),
    /// Uniform over profiles, drawn from the repetition's own stream before
    /// the first step (one `bool` per agent, in index order).
    Random,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepSummary {
    pub mean: f64,
    pub std_error: f64,
    pub per_rep: Vec<f64>,
}

impl RepSummary {
    pub fn from_values(per_rep: Vec<f64>) -> Self {
        let m = per_rep.len() as f64;
        let mean = per_rep.iter().sum::<f64>() / m;
        let std_error = if per_rep.len() > 1 {
            let var = per_rep.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (m - 1.0);
            (var / m).sqrt()
        } else {
            0.0
        };
        RepSummary {
            mean,
            std_error,
            per_rep,
        }
    }
}

/// Averages `reps` independent trajectories, run in parallel.
pub fn mean_efficiency_over_reps(
    g: &RingGraph,
    p: &GameParams,
    policy: &Policy,
    cfg: &SimConfig,
    reps: usize,
    init: &InitialState,
) -> Result<RepSummary> {
    cfg.validate()?;
    if reps == 0 {
        return Err(Error::InvalidParameter("reps must be at least 1".into()));
    }
    if let InitialState::Fixed(a0) = init {
        check_shape(g, a0)?;
    }
    let per_rep: Vec<f64> = (0..reps as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = rep_rng(cfg.seed, r);
            let a0 = match init {
                InitialState::Fixed(a) => a.clone(),
                InitialState::Random => {
                    ActionProfile::new((0..g.n()).map(|_| if rng.gen::<bool>() { Action::Y } else { Action::X }).collect())
                }
            };
            run_rng(g, p, policy, cfg, a0, &mut rng).mean_efficiency
        })
        .collect();
    Ok(RepSummary::from_values(per_rep))
}
