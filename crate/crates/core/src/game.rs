//! Two-convention coordination payoffs, utilities, welfare and potential.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ring::RingGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Action {
    X,
    Y,
}

impl Action {
    pub fn other(self) -> Action {
        match self {
            Action::X => Action::Y,
            Action::Y => Action::X,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Action::X => 'x',
            Action::Y => 'y',
        }
    }

    fn from_char(c: char) -> Option<Action> {
        match c {
            'x' | 'X' => Some(Action::X),
            'y' | 'Y' => Some(Action::Y),
            _ => None,
        }
    }
}

impl fmt::Display for Action {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GameParams {
    alpha: f64,
}

impl GameParams {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&alpha) {
            return Err(Error::AlphaOutOfRange(alpha));
        }
        Ok(GameParams { alpha })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// Payoff of a coordinated link on `action`.
    #[inline]
    pub fn link_value(&self, action: Action) -> f64 {
        match action {
            Action::X => 1.0 + self.alpha,
            Action::Y => 1.0,
        }
    }
}

/// `V(mine, theirs)`.
#[inline]
pub fn pairwise_payoff(p: &GameParams, mine: Action, theirs: Action) -> f64 {
    if mine == theirs {
        p.link_value(mine)
    } else {
        0.0
    }
}

/// Joint action of all agents on the ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ActionProfile {
    actions: Vec<Action>,
}

impl ActionProfile {
    pub fn new(actions: Vec<Action>) -> Self {
        ActionProfile { actions }
    }

    pub fn uniform(n: usize, action: Action) -> Self {
        ActionProfile {
            actions: vec![action; n],
        }
    }

    pub fn all_x(n: usize) -> Self {
        Self::uniform(n, Action::X)
    }

    pub fn all_y(n: usize) -> Self {
        Self::uniform(n, Action::Y)
    }

    /// Bit `i` set means agent `i` plays y.
    pub fn from_bits(bits: u64, n: usize) -> Self {
        ActionProfile {
            actions: (0..n)
                .map(|i| if bits >> i & 1 == 1 { Action::Y } else { Action::X })
                .collect(),
        }
    }

    /// Inverse of [`ActionProfile::from_bits`]; requires `n <= 64`.
    pub fn to_bits(&self) -> u64 {
        self.actions
            .iter()
            .enumerate()
            .filter(|(_, &a)| a == Action::Y)
            .fold(0u64, |acc, (i, _)| acc | 1 << i)
    }

    pub fn len(&self) -> usize {
        self.actions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.actions.is_empty()
    }

    pub fn actions(&self) -> &[Action] {
        &self.actions
    }

    #[inline]
    pub fn get(&self, i: usize) -> Action {
        self.actions[i]
    }

    #[inline]
    pub fn set(&mut self, i: usize, action: Action) {
        self.actions[i] = action;
    }

    pub fn count(&self, action: Action) -> usize {
        self.actions.iter().filter(|&&a| a == action).count()
    }

    pub fn is_homogeneous(&self) -> bool {
        self.actions.windows(2).all(|w| w[0] == w[1])
    }

    /// Cyclic shift so that agent `i` of the result plays what agent
    /// `i - shift` played.
    pub fn rotated(&self, shift: usize) -> Self {
        let n = self.len();
        ActionProfile {
            actions: (0..n).map(|i| self.actions[(i + n - shift % n) % n]).collect(),
        }
    }

    /// Builds a profile from a run-length pattern such as `x2y5`, repeated to
    /// fill `n` agents. A bare letter counts as a run of one.
    pub fn from_pattern(spec: &str, n: usize) -> Result<Self> {
        let err = |reason: &str| Error::ProfileSpec {
            spec: spec.to_string(),
            reason: reason.to_string(),
        };
        let mut unit = Vec::new();
        let mut chars = spec.trim().chars().peekable();
        while let Some(c) = chars.next() {
            let action = Action::from_char(c).ok_or_else(|| err("expected 'x' or 'y'"))?;
            let mut digits = String::new();
            while let Some(d) = chars.peek().filter(|d| d.is_ascii_digit()) {
                digits.push(*d);
                chars.next();
            }
            let count: usize = if digits.is_empty() {
                1
            } else {
                digits.parse().map_err(|_| err("bad run length"))?
            };
            if count == 0 {
                return Err(err("run length must be positive"));
            }
            unit.extend(std::iter::repeat_n(action, count));
        }
        if unit.is_empty() {
            return Err(err("empty pattern"));
        }
        if !n.is_multiple_of(unit.len()) {
            return Err(err(&format!(
                "pattern length {} does not divide n = {n}",
                unit.len()
            )));
        }
        Ok(ActionProfile {
            actions: unit.iter().copied().cycle().take(n).collect(),
        })
    }

    /// Run-length rendering, e.g. `x2y5`.
    pub fn to_pattern(&self) -> String {
        let mut out = String::new();
        let mut i = 0;
        while i < self.len() {
            let a = self.actions[i];
            let mut j = i;
            while j < self.len() && self.actions[j] == a {
                j += 1;
            }
            out.push(a.as_char());
            out.push_str(&(j - i).to_string());
            i = j;
        }
        out
    }
}

impl fmt::Display for ActionProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for a in &self.actions {
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl FromStr for ActionProfile {
    type Err = Error;

    /// Parses one character per agent, e.g. `xxyyy`.
    fn from_str(s: &str) -> Result<Self> {
        s.trim()
            .chars()
            .map(|c| {
                Action::from_char(c).ok_or_else(|| Error::ProfileSpec {
                    spec: s.to_string(),
                    reason: format!("unexpected character {c:?}"),
                })
            })
            .collect::<Result<Vec<_>>>()
            .map(ActionProfile::new)
    }
}

/// Agents carrying an x- or y-adversary link. Each agent hosts at most one.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct InfluenceSets {
    tags: Vec<Option<Action>>,
}

impl InfluenceSets {
    pub fn empty(n: usize) -> Self {
        InfluenceSets {
            tags: vec![None; n],
        }
    }

    pub fn new(n: usize, s_x: &[usize], s_y: &[usize]) -> Result<Self> {
        let mut inf = Self::empty(n);
        for &i in s_x {
            inf.insert(i, Action::X)?;
        }
        for &i in s_y {
            inf.insert(i, Action::Y)?;
        }
        Ok(inf)
    }

    pub(crate) fn from_tags(tags: Vec<Option<Action>>) -> Self {
        InfluenceSets { tags }
    }

    /// Attaches an adversary of type `kind` to agent `i`. Re-adding the same
    /// type is a no-op; adding the other type is an error.
    pub fn insert(&mut self, i: usize, kind: Action) -> Result<()> {
        let n = self.tags.len();
        let slot = self
            .tags
            .get_mut(i)
            .ok_or(Error::AgentOutOfRange { index: i, n })?;
        match *slot {
            Some(k) if k != kind => Err(Error::OverlappingInfluence(i)),
            _ => {
                *slot = Some(kind);
                Ok(())
            }
        }
    }

    pub fn remove(&mut self, i: usize) {
        if let Some(t) = self.tags.get_mut(i) {
            *t = None;
        }
    }

    #[inline]
    pub fn tag(&self, i: usize) -> Option<Action> {
        self.tags[i]
    }

    pub fn tags(&self) -> &[Option<Action>] {
        &self.tags
    }

    pub fn n(&self) -> usize {
        self.tags.len()
    }

    pub fn s_x(&self) -> Vec<usize> {
        self.members(Action::X)
    }

    pub fn s_y(&self) -> Vec<usize> {
        self.members(Action::Y)
    }

    fn members(&self, kind: Action) -> Vec<usize> {
        (0..self.tags.len())
            .filter(|&i| self.tags[i] == Some(kind))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.tags.iter().filter(|t| t.is_some()).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

fn check_len(g: &RingGraph, a: &ActionProfile) -> Result<()> {
    if a.len() != g.n() {
        return Err(Error::ProfileLength {
            expected: g.n(),
            got: a.len(),
        });
    }
    Ok(())
}

fn check_index(g: &RingGraph, i: usize) -> Result<()> {
    if i >= g.n() {
        return Err(Error::AgentOutOfRange { index: i, n: g.n() });
    }
    Ok(())
}

/// Utility agent `i` would get playing `action` against the others in `a`,
/// including the adversary link `tag`.
#[inline]
pub(crate) fn utility_of(
    g: &RingGraph,
    p: &GameParams,
    a: &ActionProfile,
    i: usize,
    action: Action,
    tag: Option<Action>,
) -> f64 {
    let matches = g.adj(i).iter().filter(|&&j| a.get(j) == action).count();
    let mut u = matches as f64 * p.link_value(action);
    if tag == Some(action) {
        u += p.link_value(action);
    }
    u
}

pub fn agent_utility(g: &RingGraph, p: &GameParams, a: &ActionProfile, i: usize) -> Result<f64> {
    check_len(g, a)?;
    check_index(g, i)?;
    Ok(utility_of(g, p, a, i, a.get(i), None))
}

pub fn perceived_utility(
    g: &RingGraph,
    p: &GameParams,
    a: &ActionProfile,
    i: usize,
    inf: &InfluenceSets,
) -> Result<f64> {
    check_len(g, a)?;
    check_index(g, i)?;
    Ok(utility_of(g, p, a, i, a.get(i), inf.tag(i)))
}

pub fn welfare(g: &RingGraph, p: &GameParams, a: &ActionProfile) -> f64 {
    (0..g.n())
        .map(|i| utility_of(g, p, a, i, a.get(i), None))
        .sum()
}

/// Welfare of the all-x optimum.
pub fn optimal_welfare(g: &RingGraph, p: &GameParams) -> f64 {
    2.0 * g.edge_count() as f64 * p.link_value(Action::X)
}

/// `W(a) / 2` plus the payoff of every coordinated adversary link.
pub fn potential(g: &RingGraph, p: &GameParams, a: &ActionProfile, inf: &InfluenceSets) -> f64 {
    let adversary: f64 = (0..g.n())
        .filter(|&i| inf.tag(i) == Some(a.get(i)))
        .map(|i| p.link_value(a.get(i)))
        .sum();
    welfare(g, p, a) / 2.0 + adversary
}

pub fn efficiency(g: &RingGraph, p: &GameParams, a: &ActionProfile) -> f64 {
    welfare(g, p, a) / optimal_welfare(g, p)
}

/// Efficiency of a ring profile built by repeating x/y segment patterns
/// `(lx[j], ly[j])` `r[j]` times each.
pub fn efficiency_from_description(
    p: &GameParams,
    lx: &[usize],
    ly: &[usize],
    r: &[usize],
) -> Result<f64> {
    if lx.len() != ly.len() || lx.len() != r.len() || lx.is_empty() {
        return Err(Error::InvalidParameter(
            "description vectors must be non-empty and of equal length".into(),
        ));
    }
    if lx.iter().chain(ly).chain(r).any(|&v| v == 0) {
        return Err(Error::InvalidParameter(
            "segment lengths and repetitions must be positive".into(),
        ));
    }
    let al = p.alpha();
    let (mut num, mut len, mut reps) = (0.0, 0.0, 0.0);
    for j in 0..lx.len() {
        let rj = r[j] as f64;
        num += rj * ((1.0 + al) * lx[j] as f64 + ly[j] as f64);
        len += rj * (lx[j] + ly[j]) as f64;
        reps += rj;
    }
    Ok((num - (2.0 + al) * reps) / ((1.0 + al) * len))
}

/// Concrete profile for a description: pattern 0 repeated `r[0]` times, then
/// pattern 1, each pattern written as its x run followed by its y run.
pub fn profile_from_description(lx: &[usize], ly: &[usize], r: &[usize]) -> ActionProfile {
    let mut acts = Vec::new();
    for j in 0..lx.len() {
        for _ in 0..r[j] {
            acts.extend(std::iter::repeat_n(Action::X, lx[j]));
            acts.extend(std::iter::repeat_n(Action::Y, ly[j]));
        }
    }
    ActionProfile::new(acts)
}
