//! State-dependent policy that defends every target segment and repairs one
//! misaligned segment at a time.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::game::{Action, ActionProfile, InfluenceSets};
use crate::numeric::floor_guarded;
use crate::ring::{decompose_segments, Segment};

/// Which end of a defended run an adversary sits on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Side {
    Low,
    High,
}

/// A defensive position: `(segment index, side)`.
pub type DefensiveSlot = (usize, Side);

/// Longest x segment that still needs defending: `1 + floor((1 - alpha) / alpha)`.
/// `None` means unbounded (alpha = 0).
pub fn x_defense_threshold(alpha: f64) -> Option<usize> {
    if alpha <= 0.0 {
        None
    } else {
        Some(1 + floor_guarded((1.0 - alpha) / alpha) as usize)
    }
}

fn x_defended(segment: &Segment, alpha: f64) -> bool {
    if alpha >= 0.5 || segment.kind != Action::X || segment.boundary_free {
        return false;
    }
    x_defense_threshold(alpha).is_none_or(|t| segment.length <= t)
}

/// Adversaries needed to run the policy against `target`.
pub fn aggressive_budget(target: &ActionProfile, alpha: f64) -> usize {
    let segments = decompose_segments(target);
    let n_y = segments.iter().filter(|s| s.kind == Action::Y).count();
    let n_x = segments.iter().filter(|s| x_defended(s, alpha)).count();
    if alpha < 0.5 {
        2 * (n_y + n_x) + 1
    } else {
        2 * n_y + 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AggressivePolicy {
    target: ActionProfile,
    segments: Vec<Segment>,
    defended_x: Vec<bool>,
    disabled: BTreeSet<DefensiveSlot>,
}

/// Run `[p, q]` given as offsets into a segment, plus whether it spans the
/// whole ring.
#[derive(Debug, Clone, Copy)]
struct Run {
    p: usize,
    q: usize,
    len: usize,
}

impl AggressivePolicy {
    pub fn new(target: ActionProfile, alpha: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::AlphaOutOfRange(alpha));
        }
        let segments = decompose_segments(&target);
        let defended_x = segments.iter().map(|s| x_defended(s, alpha)).collect();
        Ok(AggressivePolicy {
            target,
            segments,
            defended_x,
            disabled: BTreeSet::new(),
        })
    }

    pub fn target(&self) -> &ActionProfile {
        &self.target
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn budget(&self) -> usize {
        // defended_x is only ever set when alpha < 1/2
        let n_y = self.segments.iter().filter(|s| s.kind == Action::Y).count();
        let n_x = self.defended_x.iter().filter(|&&d| d).count();
        2 * (n_y + n_x) + 1
    }

    /// Every slot the policy may fill while defending.
    pub fn defensive_slots(&self) -> Vec<DefensiveSlot> {
        self.segments
            .iter()
            .enumerate()
            .filter(|(i, s)| s.kind == Action::Y || self.defended_x[*i])
            .flat_map(|(i, _)| [(i, Side::Low), (i, Side::High)])
            .collect()
    }

    /// Copy of the policy that never fills `slot`.
    pub fn without_slot(&self, slot: DefensiveSlot) -> Self {
        let mut out = self.clone();
        out.disabled.insert(slot);
        out
    }

    fn longest_run(&self, seg: &Segment, a: &ActionProfile, kind: Action) -> Option<Run> {
        let n = a.len();
        let at = |o: usize| a.get((seg.start + o) % n) == kind;
        if seg.boundary_free {
            if (0..n).all(at) {
                return Some(Run {
                    p: 0,
                    q: n - 1,
                    len: n,
                });
            }
            // scan starting just after an agent off `kind` so no run wraps
            let anchor = (0..n).find(|&o| !at(o)).expect("not all on kind");
            let mut best: Option<Run> = None;
            let mut cur = 0;
            for t in 1..=n {
                let o = (anchor + t) % n;
                if at(o) {
                    cur += 1;
                    let cand = Run {
                        p: (o + n + 1 - cur) % n,
                        q: o,
                        len: cur,
                    };
                    let better = match best {
                        None => true,
                        Some(b) => cur > b.len || (cur == b.len && cand.p < b.p),
                    };
                    if better {
                        best = Some(cand);
                    }
                } else {
                    cur = 0;
                }
            }
            return best;
        }
        let mut best: Option<Run> = None;
        let mut cur = 0;
        for o in 0..seg.length {
            if at(o) {
                cur += 1;
                if best.is_none_or(|b| cur > b.len) {
                    best = Some(Run {
                        p: o + 1 - cur,
                        q: o,
                        len: cur,
                    });
                }
            } else {
                cur = 0;
            }
        }
        best
    }

    /// Influence sets the policy applies in state `current`.
    pub fn influence(&self, current: &ActionProfile) -> InfluenceSets {
        let n = self.target.len();
        let mut tags: Vec<Option<Action>> = vec![None; n];
        let idx = |seg: &Segment, o: usize| (seg.start + o) % n;

        for (si, seg) in self.segments.iter().enumerate() {
            let place = |tags: &mut Vec<Option<Action>>, side: Side, i: usize| {
                if !self.disabled.contains(&(si, side)) {
                    tags[i] = Some(seg.kind);
                }
            };
            match seg.kind {
                Action::Y => {
                    let Some(run) = self.longest_run(seg, current, Action::Y) else {
                        continue;
                    };
                    if run.len < 2 {
                        continue;
                    }
                    let (p, q) = (idx(seg, run.p), idx(seg, run.q));
                    if run.len == n {
                        place(&mut tags, Side::Low, p);
                        place(&mut tags, Side::High, q);
                        continue;
                    }
                    let left = current.get((p + n - 1) % n);
                    let right = current.get((q + 1) % n);
                    match (left, right) {
                        (Action::X, Action::X) => {
                            place(&mut tags, Side::Low, p);
                            place(&mut tags, Side::High, q);
                        }
                        (Action::X, Action::Y) => place(&mut tags, Side::Low, p),
                        (Action::Y, Action::X) => place(&mut tags, Side::High, q),
                        (Action::Y, Action::Y) => {}
                    }
                }
                Action::X => {
                    if !self.defended_x[si] {
                        continue;
                    }
                    if let Some(run) = self.longest_run(seg, current, Action::X) {
                        if run.len == 2 {
                            place(&mut tags, Side::Low, idx(seg, run.p));
                            place(&mut tags, Side::High, idx(seg, run.q));
                        }
                    }
                }
            }
        }

        let misaligned = self
            .segments
            .iter()
            .find(|s| s.members(n).any(|i| current.get(i) != s.kind));
        if let Some(seg) = misaligned {
            let z = seg.kind;
            let spot = match self.longest_run(seg, current, z) {
                Some(run) => {
                    if seg.boundary_free || run.p > 0 {
                        (idx(seg, run.p) + n - 1) % n
                    } else {
                        idx(seg, run.q + 1)
                    }
                }
                None => {
                    let u = seg.start;
                    let v = seg.end(n);
                    let left = current.get((u + n - 1) % n);
                    let right = current.get((v + 1) % n);
                    if right == z && left != z {
                        v
                    } else {
                        u
                    }
                }
            };
            tags[spot] = Some(z);
        }
        InfluenceSets::from_tags(tags)
    }
}
