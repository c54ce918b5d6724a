//! Static adversary placements: segment-stabilizing (informed) and
//! budget-spreading (uninformed).

use crate::error::{Error, Result};
use crate::game::{Action, ActionProfile, GameParams, InfluenceSets};
use crate::numeric::{ceil_guarded, floor_guarded, min_y_length, pos};
use crate::ring::{decompose_segments, RingGraph, Segment};

/// Fewest y-adversaries that keep a y segment of length `ly` stable on a
/// k-connected ring.
pub fn min_y_adversaries(ly: usize, alpha: f64, k: usize) -> usize {
    let (ly, kf) = (ly as f64, k as f64);
    let links = kf * ly + kf * (kf + 1.0) / 2.0;
    ceil_guarded(alpha * links) as usize + k * (k + 1)
}

/// Fewest x-adversaries that keep an x segment of length `lx` stable (k = 1).
pub fn min_x_adversaries(lx: usize, alpha: f64) -> Result<usize> {
    if lx < 2 {
        return Err(Error::ShortXSegment(lx));
    }
    let need = pos(2.0 - alpha * (lx as f64 - 1.0)) / (1.0 + alpha);
    Ok(ceil_guarded(need) as usize)
}

/// `count` offsets spread evenly over `0..len`.
pub(crate) fn spread(count: usize, len: usize) -> Vec<usize> {
    let count = count.min(len);
    (0..count).map(|t| (2 * t + 1) * len / (2 * count)).collect()
}

/// Offsets within a y segment that receive adversaries: every position where
/// `floor(alpha * (o + 1))` steps up, the two endpoints, and the last position
/// not otherwise chosen. Returned in ascending offset order.
pub fn stabilizing_y_offsets(ly: usize, alpha: f64) -> Vec<usize> {
    if ly == 0 {
        return Vec::new();
    }
    let last = ly - 1;
    let mut chosen = vec![false; ly];
    for (o, slot) in chosen.iter_mut().enumerate() {
        let step = floor_guarded(alpha * (o + 1) as f64) - floor_guarded(alpha * o as f64);
        *slot = step > 0;
    }
    let w = (0..last).rev().find(|&o| !chosen[o]);
    chosen[0] = true;
    chosen[last] = true;
    if let Some(w) = w {
        chosen[w] = true;
    }
    (0..ly).filter(|&o| chosen[o]).collect()
}

/// Agent indices of [`stabilizing_y_offsets`] for a concrete segment.
pub fn stabilizing_y_placement(segment: &Segment, alpha: f64, n: usize) -> Vec<usize> {
    stabilizing_y_offsets(segment.length, alpha)
        .into_iter()
        .map(|o| (segment.start + o) % n)
        .collect()
}

/// Members of a segment in the order adversaries are assigned: the required
/// placement first, then the remaining members by offset.
fn placement_order(segment: &Segment, required: &[usize], n: usize) -> Vec<usize> {
    let mut order = required.to_vec();
    order.extend(segment.members(n).filter(|i| !required.contains(i)));
    order
}

/// Budget in agents for a fractional budget `gamma`.
pub fn budget_of(gamma: f64, n: usize) -> usize {
    floor_guarded(gamma * n as f64).max(0) as usize
}

/// Static placement stabilizing `target`, using the full budget `floor(gamma n)`.
///
/// Surplus adversaries are dealt round-robin over the segments in canonical
/// order, each segment taking its next unused member.
pub fn static_informed_policy(
    g: &RingGraph,
    p: &GameParams,
    target: &ActionProfile,
    gamma: f64,
) -> Result<InfluenceSets> {
    if g.k() != 1 {
        return Err(Error::RequiresUnitRing("static informed placement"));
    }
    let n = g.n();
    if target.len() != n {
        return Err(Error::ProfileLength {
            expected: n,
            got: target.len(),
        });
    }
    let alpha = p.alpha();
    let budget = budget_of(gamma, n);
    let segments = decompose_segments(target);

    if segments.len() == 1 && segments[0].kind == Action::X {
        return Ok(InfluenceSets::empty(n));
    }

    let mut orders: Vec<(Action, Vec<usize>, usize)> = Vec::new();
    if segments.len() == 1 {
        // all-y: beat all-x globally with evenly spaced adversaries
        let need = ceil_guarded(alpha * n as f64) as usize;
        let required: Vec<usize> = spread(need, n);
        let order = placement_order(&segments[0], &required, n);
        orders.push((Action::Y, order, required.len()));
    } else {
        let ell = min_y_length(alpha);
        for s in &segments {
            match s.kind {
                Action::Y => {
                    if s.length < ell {
                        return Err(Error::ShortYSegment {
                            length: s.length,
                            required: ell,
                        });
                    }
                    let mut required = stabilizing_y_placement(s, alpha, n);
                    let need = min_y_adversaries(s.length, alpha, 1);
                    let extra: Vec<usize> = s.members(n).filter(|i| !required.contains(i)).collect();
                    let short = need.saturating_sub(required.len());
                    required.extend(extra.into_iter().take(short));
                    let order = placement_order(s, &required, n);
                    orders.push((Action::Y, order, required.len()));
                }
                Action::X => {
                    let need = min_x_adversaries(s.length, alpha)?;
                    let required: Vec<usize> = spread(need, s.length)
                        .into_iter()
                        .map(|o| (s.start + o) % n)
                        .collect();
                    let order = placement_order(s, &required, n);
                    orders.push((Action::X, order, required.len()));
                }
            }
        }
    }

    let total: usize = orders.iter().map(|(_, _, r)| r).sum();
    if total > budget {
        return Err(Error::InsufficientBudget {
            budget,
            shortfall: total - budget,
        });
    }

    let mut inf = InfluenceSets::empty(n);
    let mut used: Vec<usize> = orders.iter().map(|(_, _, r)| *r).collect();
    for (kind, order, r) in &orders {
        for &i in &order[..*r] {
            inf.insert(i, *kind)?;
        }
    }
    let mut surplus = budget - total;
    while surplus > 0 {
        let mut placed = false;
        for (slot, (kind, order, _)) in orders.iter().enumerate() {
            if surplus == 0 {
                break;
            }
            if used[slot] < order.len() {
                inf.insert(order[used[slot]], *kind)?;
                used[slot] += 1;
                surplus -= 1;
                placed = true;
            }
        }
        if !placed {
            break;
        }
    }
    Ok(inf)
}

/// Least damaging static placement of `floor(gamma n)` y-adversaries.
///
/// Below `gamma = k alpha` the adversaries are spread evenly. Otherwise a
/// contiguous block of fraction `(gamma - k alpha) / (1 - k alpha)` is fully
/// influenced and the remaining adversaries are spread over the rest.
pub fn static_uninformed_allocation(g: &RingGraph, p: &GameParams, gamma: f64) -> InfluenceSets {
    let n = g.n();
    let budget = budget_of(gamma, n).min(n);
    let ka = g.k() as f64 * p.alpha();
    let mut inf = InfluenceSets::empty(n);
    let block = if ka >= 1.0 || gamma < ka {
        0
    } else {
        let f = (gamma - ka) / (1.0 - ka);
        (floor_guarded(f * n as f64).max(0) as usize).min(budget)
    };
    for i in 0..block {
        inf.insert(i, Action::Y).expect("fresh index");
    }
    for o in spread(budget - block, n - block) {
        inf.insert(block + o, Action::Y).expect("fresh index");
    }
    inf
}
