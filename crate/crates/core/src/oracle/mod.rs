//! Exact stochastically stable states on small rings.
//!
//! Static placements reduce to maximizing the potential. State-dependent and
//! randomized placements go through the resistance-tree construction over all
//! `2^n` profiles: recurrent classes are the sink components of the
//! zero-resistance revision graph, inter-class resistances are shortest paths
//! over the full revision graph, and the stable classes minimize the
//! stochastic potential.

pub mod arborescence;
mod potential;
mod resistance;
pub mod scc;

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;

pub use arborescence::stochastic_potentials;
pub use potential::{potential_argmax, potential_argmax_dp, sss_static, sss_static_capped};
pub use resistance::{deviation_resistance, transition_resistance, uninformed_path_resistances};

use crate::error::{Error, Result};
use crate::game::{ActionProfile, GameParams};
use crate::numeric::TOL;
use crate::policy::Policy;
use crate::ring::RingGraph;
use resistance::flip_resistance;

/// Largest ring enumerated by default.
pub const DEFAULT_ENUMERATION_CAP: usize = 14;

pub(crate) fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap || n > 30 {
        return Err(Error::EnumerationCap { n, cap });
    }
    Ok(())
}

/// Revision resistances for every profile and agent.
#[derive(Debug, Clone)]
pub struct StateSpace {
    n: usize,
    /// `weights[s * n + i]`: resistance of agent `i` revising in profile `s`.
    weights: Vec<f64>,
}

impl StateSpace {
    pub fn build(g: &RingGraph, p: &GameParams, policy: &Policy, cap: usize) -> Result<Self> {
        let n = g.n();
        check_cap(n, cap)?;
        let states = 1usize << n;
        let mut weights = vec![0.0; states * n];
        weights
            .par_chunks_mut(n)
            .enumerate()
            .for_each(|(s, row)| {
                let a = ActionProfile::from_bits(s as u64, n);
                let opts = policy.agent_options(&a);
                for (i, w) in row.iter_mut().enumerate() {
                    *w = opts[i]
                        .iter()
                        .map(|t| flip_resistance(g, p, &a, i, t))
                        .fold(f64::INFINITY, f64::min);
                }
            });
        Ok(StateSpace { n, weights })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn state_count(&self) -> usize {
        1 << self.n
    }

    #[inline]
    pub fn weight(&self, s: usize, i: usize) -> f64 {
        self.weights[s * self.n + i]
    }

    /// Sink components of the zero-resistance graph, each sorted ascending;
    /// classes are ordered by their smallest profile.
    pub fn recurrent_classes(&self) -> Vec<Vec<usize>> {
        let n = self.n;
        let zero = |s: usize, out: &mut Vec<usize>| {
            for i in 0..n {
                if self.weight(s, i) <= TOL {
                    out.push(s ^ (1 << i));
                }
            }
        };
        let (comp, count) = scc::tarjan(self.state_count(), zero);
        let mut is_sink = vec![true; count];
        for s in 0..self.state_count() {
            for i in 0..n {
                if self.weight(s, i) <= TOL && comp[s ^ (1 << i)] != comp[s] {
                    is_sink[comp[s]] = false;
                }
            }
        }
        let mut members: Vec<Vec<usize>> = vec![Vec::new(); count];
        for s in 0..self.state_count() {
            if is_sink[comp[s]] {
                members[comp[s]].push(s);
            }
        }
        let mut classes: Vec<Vec<usize>> = members.into_iter().filter(|m| !m.is_empty()).collect();
        classes.sort_by_key(|c| c[0]);
        classes
    }

    /// Shortest resistance from any profile in `sources` to every profile.
    pub fn distances_from(&self, sources: &[usize]) -> Vec<f64> {
        #[derive(PartialEq)]
        struct Item(f64, usize);
        impl Eq for Item {}
        impl PartialOrd for Item {
            fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
                Some(self.cmp(o))
            }
        }
        impl Ord for Item {
            fn cmp(&self, o: &Self) -> Ordering {
                o.0.total_cmp(&self.0).then(o.1.cmp(&self.1))
            }
        }
        let mut dist = vec![f64::INFINITY; self.state_count()];
        let mut heap = BinaryHeap::new();
        for &s in sources {
            dist[s] = 0.0;
            heap.push(Item(0.0, s));
        }
        while let Some(Item(d, s)) = heap.pop() {
            if d > dist[s] {
                continue;
            }
            for i in 0..self.n {
                let t = s ^ (1 << i);
                let nd = d + self.weight(s, i);
                if nd < dist[t] {
                    dist[t] = nd;
                    heap.push(Item(nd, t));
                }
            }
        }
        dist
    }

    /// Minimum path resistance from class `from` to class `to`.
    pub fn inter_class_resistance(&self, from: &[usize], to: &[usize]) -> f64 {
        let dist = self.distances_from(from);
        to.iter().map(|&s| dist[s]).fold(f64::INFINITY, f64::min)
    }
}

/// Recurrent classes, inter-class resistances and stochastic potentials.
#[derive(Debug, Clone)]
pub struct ResistanceModel {
    pub n: usize,
    /// Profiles of each class as bitmasks (bit set = y).
    pub classes: Vec<Vec<u64>>,
    pub rho: Vec<Vec<f64>>,
    pub psi: Vec<f64>,
}

impl ResistanceModel {
    pub fn build(g: &RingGraph, p: &GameParams, policy: &Policy, cap: usize) -> Result<Self> {
        let space = StateSpace::build(g, p, policy, cap)?;
        Ok(Self::from_space(&space))
    }

    pub fn from_space(space: &StateSpace) -> Self {
        let classes = space.recurrent_classes();
        let m = classes.len();
        let rho: Vec<Vec<f64>> = classes
            .par_iter()
            .enumerate()
            .map(|(i, ci)| {
                let dist = space.distances_from(ci);
                (0..m)
                    .map(|j| {
                        if i == j {
                            0.0
                        } else {
                            classes[j].iter().map(|&s| dist[s]).fold(f64::INFINITY, f64::min)
                        }
                    })
                    .collect()
            })
            .collect();
        let psi = stochastic_potentials(&rho);
        ResistanceModel {
            n: space.n(),
            classes: classes
                .into_iter()
                .map(|c| c.into_iter().map(|s| s as u64).collect())
                .collect(),
            rho,
            psi,
        }
    }

    pub fn min_psi(&self) -> f64 {
        self.psi.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Indices of the classes with minimal stochastic potential.
    pub fn stable_classes(&self) -> Vec<usize> {
        let m = self.min_psi();
        (0..self.psi.len())
            .filter(|&k| self.psi[k] <= m + TOL)
            .collect()
    }

    /// Union of the stable classes, sorted by bitmask.
    pub fn stable_states(&self) -> Vec<ActionProfile> {
        let mut bits: Vec<u64> = self
            .stable_classes()
            .into_iter()
            .flat_map(|k| self.classes[k].iter().copied())
            .collect();
        bits.sort_unstable();
        bits.into_iter()
            .map(|b| ActionProfile::from_bits(b, self.n))
            .collect()
    }

    pub fn class_profiles(&self, k: usize) -> Vec<ActionProfile> {
        self.classes[k]
            .iter()
            .map(|&b| ActionProfile::from_bits(b, self.n))
            .collect()
    }

    pub fn class_of(&self, a: &ActionProfile) -> Option<usize> {
        let b = a.to_bits();
        self.classes.iter().position(|c| c.binary_search(&b).is_ok())
    }
}

pub fn recurrent_classes(g: &RingGraph, p: &GameParams, policy: &Policy) -> Result<Vec<Vec<ActionProfile>>> {
    let space = StateSpace::build(g, p, policy, DEFAULT_ENUMERATION_CAP)?;
    Ok(space
        .recurrent_classes()
        .into_iter()
        .map(|c| {
            c.into_iter()
                .map(|s| ActionProfile::from_bits(s as u64, g.n()))
                .collect()
        })
        .collect())
}

pub fn stochastically_stable_states(
    g: &RingGraph,
    p: &GameParams,
    policy: &Policy,
) -> Result<Vec<ActionProfile>> {
    Ok(ResistanceModel::build(g, p, policy, DEFAULT_ENUMERATION_CAP)?.stable_states())
}
