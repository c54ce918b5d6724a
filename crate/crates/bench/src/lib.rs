//! Fixtures shared by the benchmarks.

use ringlll::{ActionProfile, GameParams, Policy, RingGraph};
use ringlll::policy::{AggressivePolicy, UninformedPolicy};

pub struct Fixture {
    pub graph: RingGraph,
    pub params: GameParams,
    pub policy: Policy,
    pub start: ActionProfile,
}

/// Aggressive adversaries holding `x2y8` repeated on a ring of `n` agents.
pub fn aggressive(n: usize, alpha: f64) -> Fixture {
    let target = ActionProfile::from_pattern("x2y8", n).expect("n divisible by 10");
    Fixture {
        graph: RingGraph::ring(n).unwrap(),
        params: GameParams::new(alpha).unwrap(),
        policy: Policy::Aggressive(AggressivePolicy::new(target.clone(), alpha).unwrap()),
        start: target,
    }
}

/// Uninformed adversaries on a `k`-ring, starting from all-x.
pub fn uninformed(n: usize, k: usize, alpha: f64, gamma: f64) -> Fixture {
    Fixture {
        graph: RingGraph::new(n, k).unwrap(),
        params: GameParams::new(alpha).unwrap(),
        policy: Policy::Uninformed(UninformedPolicy::with_default_split(n, gamma).unwrap()),
        start: ActionProfile::all_x(n),
    }
}
