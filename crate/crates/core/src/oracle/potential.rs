//! Potential maximization for static placements.

use rayon::prelude::*;

use super::{check_cap, DEFAULT_ENUMERATION_CAP};
use crate::error::Result;
use crate::game::{potential, welfare, Action, ActionProfile, GameParams, InfluenceSets};
use crate::numeric::TOL;
use crate::ring::RingGraph;

/// All maximizers of the potential, sorted by bitmask.
pub fn sss_static(g: &RingGraph, p: &GameParams, inf: &InfluenceSets) -> Result<Vec<ActionProfile>> {
    sss_static_capped(g, p, inf, DEFAULT_ENUMERATION_CAP)
}

pub fn sss_static_capped(
    g: &RingGraph,
    p: &GameParams,
    inf: &InfluenceSets,
    cap: usize,
) -> Result<Vec<ActionProfile>> {
    let n = g.n();
    check_cap(n, cap)?;
    let phis: Vec<f64> = (0..1u64 << n)
        .into_par_iter()
        .map(|s| potential(g, p, &ActionProfile::from_bits(s, n), inf))
        .collect();
    let best = phis.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok((0..phis.len())
        .filter(|&s| phis[s] >= best - TOL)
        .map(|s| ActionProfile::from_bits(s as u64, n))
        .collect())
}

#[derive(Debug, Clone, Copy)]
struct Score {
    phi: f64,
    links: f64,
}

impl Score {
    const NONE: Score = Score {
        phi: f64::NEG_INFINITY,
        links: 0.0,
    };

    /// Higher potential wins; ties go to the lower welfare.
    fn beats(self, other: Score) -> bool {
        self.phi > other.phi + TOL || ((self.phi - other.phi).abs() <= TOL && self.links < other.links - TOL)
    }

    fn add(self, links: f64, adv: f64) -> Score {
        Score {
            phi: self.phi + links + adv,
            links: self.links + links,
        }
    }
}

/// A potential maximizer of least welfare. Uses the ring transfer-matrix
/// recursion when `n > 2k`, enumeration otherwise.
pub fn potential_argmax(g: &RingGraph, p: &GameParams, inf: &InfluenceSets) -> ActionProfile {
    if g.n() > 2 * g.k() {
        return potential_argmax_dp(g, p, inf);
    }
    let n = g.n();
    let mut best: Option<(Score, ActionProfile)> = None;
    for s in 0..1u64 << n {
        let a = ActionProfile::from_bits(s, n);
        let sc = Score {
            phi: potential(g, p, &a, inf),
            links: welfare(g, p, &a) / 2.0,
        };
        if best.as_ref().is_none_or(|(b, _)| sc.beats(*b)) {
            best = Some((sc, a));
        }
    }
    best.expect("non-empty").1
}

/// Transfer-matrix maximization over the ring: fix the first `k` actions,
/// sweep with the last `k` actions as state, then close the ring.
pub fn potential_argmax_dp(g: &RingGraph, p: &GameParams, inf: &InfluenceSets) -> ActionProfile {
    let (n, k) = (g.n(), g.k());
    assert!(n > 2 * k, "transfer recursion needs n > 2k");
    let width = 1usize << k;
    let act = |bit: usize| if bit == 1 { Action::Y } else { Action::X };
    let link = |a: Action, b: Action| if a == b { p.link_value(a) } else { 0.0 };
    let adv = |i: usize, a: Action| {
        if inf.tag(i) == Some(a) {
            p.link_value(a)
        } else {
            0.0
        }
    };

    let mut best: Option<(Score, Vec<Action>)> = None;
    for head in 0..width {
        let head_act = |j: usize| act(head >> j & 1);
        let mut start = Score { phi: 0.0, links: 0.0 };
        for j in 0..k {
            let mut l = 0.0;
            for m in 0..j {
                l += link(head_act(m), head_act(j));
            }
            start = start.add(l, adv(j, head_act(j)));
        }
        // window bit t holds agent i - k + t
        let mut dp = vec![Score::NONE; width];
        dp[head] = start;
        let mut back: Vec<Vec<usize>> = Vec::with_capacity(n - k);
        for i in k..n {
            let mut next = vec![Score::NONE; width];
            let mut from = vec![usize::MAX; width];
            for (s, &sc) in dp.iter().enumerate() {
                if sc.phi == f64::NEG_INFINITY {
                    continue;
                }
                for c in 0..2 {
                    let a = act(c);
                    let mut l = 0.0;
                    for d in 1..=k {
                        l += link(a, act(s >> (k - d) & 1));
                    }
                    let cand = sc.add(l, adv(i, a));
                    let t = (s >> 1) | (c << (k - 1));
                    if from[t] == usize::MAX || cand.beats(next[t]) {
                        next[t] = cand;
                        from[t] = s;
                    }
                }
            }
            back.push(from);
            dp = next;
        }
        for (s, &sc) in dp.iter().enumerate() {
            if sc.phi == f64::NEG_INFINITY {
                continue;
            }
            let mut l = 0.0;
            for t in 0..k {
                let i = n - k + t;
                for j in 0..k {
                    if j + n - i <= k {
                        l += link(act(s >> t & 1), head_act(j));
                    }
                }
            }
            let total = sc.add(l, 0.0);
            if best.as_ref().is_none_or(|(b, _)| total.beats(*b)) {
                let mut acts = vec![Action::X; n];
                let mut state = s;
                for i in (k..n).rev() {
                    acts[i] = act(state >> (k - 1) & 1);
                    state = back[i - k][state];
                }
                for (j, slot) in acts.iter_mut().enumerate().take(k) {
                    *slot = head_act(j);
                }
                best = Some((total, acts));
            }
        }
    }
    ActionProfile::new(best.expect("non-empty").1)
}
