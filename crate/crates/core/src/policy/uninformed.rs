//! Randomized, structure-blind y-adversary policy with a fixed core.

use rand::seq::index;
use rand::Rng;

use crate::error::{Error, Result};
use crate::game::{Action, InfluenceSets};
use crate::policy::placement::budget_of;

/// Fixed block `T = {0, .., t - 1}` always influenced; the rest of the budget
/// goes to a fresh uniform subset of the other agents every step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UninformedPolicy {
    n: usize,
    fixed: usize,
    budget: usize,
}

impl UninformedPolicy {
    pub fn new(n: usize, gamma: f64, gamma_prime: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidParameter(format!(
                "gamma = {gamma} must lie in [0, 1]"
            )));
        }
        if gamma > 0.0 && !(0.0..gamma).contains(&gamma_prime) {
            return Err(Error::InvalidParameter(format!(
                "gamma' = {gamma_prime} must lie in [0, gamma = {gamma})"
            )));
        }
        let budget = budget_of(gamma, n).min(n);
        let fixed = if gamma > 0.0 {
            budget_of(gamma_prime, n).min(budget)
        } else {
            0
        };
        Ok(UninformedPolicy { n, fixed, budget })
    }

    /// Default split with `gamma' = gamma / 2`.
    pub fn with_default_split(n: usize, gamma: f64) -> Result<Self> {
        Self::new(n, gamma, gamma / 2.0)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn fixed_len(&self) -> usize {
        self.fixed
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn is_fixed(&self, i: usize) -> bool {
        i < self.fixed
    }

    /// Chance that an agent outside `T` is influenced in a given step.
    pub fn random_share(&self) -> f64 {
        let rest = self.n - self.fixed;
        if rest == 0 {
            0.0
        } else {
            (self.budget - self.fixed) as f64 / rest as f64
        }
    }

    /// Full influence draw for one step.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> InfluenceSets {
        let mut tags = vec![None; self.n];
        for t in tags.iter_mut().take(self.fixed) {
            *t = Some(Action::Y);
        }
        for o in index::sample(rng, self.n - self.fixed, self.budget - self.fixed) {
            tags[self.fixed + o] = Some(Action::Y);
        }
        InfluenceSets::from_tags(tags)
    }

    /// Influence on agent `i` alone, with the same marginal as [`Self::sample`].
    /// Consumes exactly one uniform draw.
    pub fn sample_agent<R: Rng + ?Sized>(&self, i: usize, rng: &mut R) -> Option<Action> {
        let u: f64 = rng.gen();
        if self.is_fixed(i) || u < self.random_share() {
            Some(Action::Y)
        } else {
            None
        }
    }
}

/// One draw of the randomized policy on `n` agents.
pub fn dynamic_uninformed_policy<R: Rng + ?Sized>(
    n: usize,
    gamma: f64,
    gamma_prime: f64,
    rng: &mut R,
) -> Result<InfluenceSets> {
    Ok(UninformedPolicy::new(n, gamma, gamma_prime)?.sample(rng))
}
