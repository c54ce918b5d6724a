//! Resistances of single-agent revisions.

use crate::error::{Error, Result};
use crate::game::{utility_of, Action, ActionProfile, GameParams};
use crate::numeric::pos;
use crate::policy::Policy;
use crate::ring::RingGraph;

/// `omega(z, b, s)`: resistance of an agent playing `z` with `b` matching
/// neighbors and adversary `s` switching to the other action on a k-ring.
pub fn deviation_resistance(z: Action, b: usize, s: Option<Action>, alpha: f64, k: usize) -> f64 {
    let v = |w: Action| match w {
        Action::X => 1.0 + alpha,
        Action::Y => 1.0,
    };
    let adv = |w: Action| if s == Some(w) { v(w) } else { 0.0 };
    let z2 = z.other();
    let deg = 2 * k;
    pos(b as f64 * v(z) + adv(z) - (deg.saturating_sub(b)) as f64 * v(z2) - adv(z2))
}

/// Resistance of a revision by agent `i` from `a`, given its adversary tag.
pub(crate) fn flip_resistance(
    g: &RingGraph,
    p: &GameParams,
    a: &ActionProfile,
    i: usize,
    tag: Option<Action>,
) -> f64 {
    let z = a.get(i);
    pos(utility_of(g, p, a, i, z, tag) - utility_of(g, p, a, i, z.other(), tag))
}

/// `r(a1 -> a2)`, with influence evaluated at `a1`. Randomized policies take
/// the cheapest adversary type in their support. `None` when the profiles
/// differ in more than one agent.
pub fn transition_resistance(
    g: &RingGraph,
    p: &GameParams,
    a1: &ActionProfile,
    a2: &ActionProfile,
    policy: &Policy,
) -> Result<Option<f64>> {
    for a in [a1, a2] {
        if a.len() != g.n() {
            return Err(Error::ProfileLength {
                expected: g.n(),
                got: a.len(),
            });
        }
    }
    let diff: Vec<usize> = (0..g.n()).filter(|&i| a1.get(i) != a2.get(i)).collect();
    match diff.as_slice() {
        [] => Ok(Some(0.0)),
        [i] => {
            let opts = policy.agent_options(a1);
            let r = opts[*i]
                .iter()
                .map(|t| flip_resistance(g, p, a1, *i, t))
                .fold(f64::INFINITY, f64::min);
            Ok(Some(r))
        }
        _ => Ok(None),
    }
}

/// Path resistances `(all-x -> all-y, all-y -> all-x)` for the randomized
/// uninformed policy on a k-ring, summed over the k boundary revisions.
pub fn uninformed_path_resistances(k: usize, alpha: f64) -> (f64, f64) {
    let kf = k as f64;
    let mut xy = 0.0;
    let mut yx = 0.0;
    for i in 1..=k {
        let i = i as f64;
        xy += (1.0 + alpha) * (2.0 * kf - (i - 1.0)) - i;
        yx += pos((2.0 * kf - (i - 1.0)) - (i - 1.0) * (1.0 + alpha));
    }
    (xy, yx)
}
