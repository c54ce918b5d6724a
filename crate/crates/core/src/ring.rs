//! k-connected ring graphs and segment decomposition of profiles.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::game::{Action, ActionProfile};

/// Ring of `n` agents where each agent is linked to the `k` nearest agents
/// on either side.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingGraph {
    n: usize,
    k: usize,
    adjacency: Vec<Vec<usize>>,
}

impl RingGraph {
    pub fn new(n: usize, k: usize) -> Result<Self> {
        if n < 2 || k == 0 || k > n / 2 {
            return Err(Error::InvalidRing { n, k });
        }
        let adjacency = (0..n)
            .map(|i| {
                let set: BTreeSet<usize> = (1..=k)
                    .flat_map(|d| [(i + d) % n, (i + n - d) % n])
                    .collect();
                set.into_iter().collect()
            })
            .collect();
        Ok(RingGraph { n, k, adjacency })
    }

    /// The plain ring (k = 1).
    pub fn ring(n: usize) -> Result<Self> {
        Self::new(n, 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Neighbors of agent `i` in ascending index order.
    pub fn neighbors(&self, i: usize) -> Result<&[usize]> {
        self.adjacency
            .get(i)
            .map(Vec::as_slice)
            .ok_or(Error::AgentOutOfRange { index: i, n: self.n })
    }

    /// Unchecked neighbor slice for hot loops.
    #[inline]
    pub(crate) fn adj(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    /// Undirected edge list, each edge once with `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.n {
            for &j in &self.adjacency[i] {
                if i < j {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }
}

/// Maximal run of agents playing the same convention.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Segment {
    pub start: usize,
    pub length: usize,
    pub kind: Action,
    /// Set for the single segment of a homogeneous profile; such a segment
    /// has no boundary agents.
    pub boundary_free: bool,
}

impl Segment {
    /// Index of the last member, modulo `n`.
    pub fn end(&self, n: usize) -> usize {
        (self.start + self.length - 1) % n
    }

    pub fn members(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        let start = self.start;
        (0..self.length).map(move |o| (start + o) % n)
    }

    pub fn contains(&self, i: usize, n: usize) -> bool {
        (i + n - self.start) % n < self.length
    }

    /// Position of `i` relative to `start`, if `i` is a member.
    pub fn offset_of(&self, i: usize, n: usize) -> Option<usize> {
        let o = (i + n - self.start) % n;
        (o < self.length).then_some(o)
    }
}

/// Splits a profile into alternating maximal segments.
///
/// Segments are listed in ring order beginning with the segment that starts
/// at the lowest-index boundary. A homogeneous profile yields one
/// boundary-free segment starting at agent 0.
pub fn decompose_segments(a: &ActionProfile) -> Vec<Segment> {
    let n = a.len();
    let acts = a.actions();
    let first_boundary = (0..n).find(|&i| acts[i] != acts[(i + n - 1) % n]);
    let Some(b0) = first_boundary else {
        return vec![Segment {
            start: 0,
            length: n,
            kind: acts[0],
            boundary_free: true,
        }];
    };
    let mut segments = Vec::new();
    let mut start = b0;
    let mut length = 1;
    for o in 1..n {
        let i = (b0 + o) % n;
        if acts[i] == acts[start] {
            length += 1;
        } else {
            segments.push(Segment {
                start,
                length,
                kind: acts[start],
                boundary_free: false,
            });
            start = i;
            length = 1;
        }
    }
    segments.push(Segment {
        start,
        length,
        kind: acts[start],
        boundary_free: false,
    });
    segments
}

/// Inverse of [`decompose_segments`].
pub fn profile_from_segments(n: usize, segments: &[Segment]) -> ActionProfile {
    let mut acts = vec![Action::X; n];
    for s in segments {
        for i in s.members(n) {
            acts[i] = s.kind;
        }
    }
    ActionProfile::new(acts)
}
