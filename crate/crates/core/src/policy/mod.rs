//! Adversarial policy classes.

mod aggressive;
mod placement;
mod uninformed;

pub use aggressive::{aggressive_budget, x_defense_threshold, AggressivePolicy, DefensiveSlot, Side};
pub use placement::{
    budget_of, min_x_adversaries, min_y_adversaries, stabilizing_y_offsets,
    stabilizing_y_placement, static_informed_policy, static_uninformed_allocation,
};
pub use uninformed::{dynamic_uninformed_policy, UninformedPolicy};

use crate::game::{Action, ActionProfile, InfluenceSets};

/// Adversary types an agent can face in a given state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct TagOptions(u8);

impl TagOptions {
    const NONE: u8 = 1;
    const X: u8 = 2;
    const Y: u8 = 4;

    pub fn only(tag: Option<Action>) -> Self {
        let mut o = TagOptions(0);
        o.add(tag);
        o
    }

    pub fn add(&mut self, tag: Option<Action>) {
        self.0 |= match tag {
            None => Self::NONE,
            Some(Action::X) => Self::X,
            Some(Action::Y) => Self::Y,
        };
    }

    pub fn iter(self) -> impl Iterator<Item = Option<Action>> {
        [
            (Self::NONE, None),
            (Self::X, Some(Action::X)),
            (Self::Y, Some(Action::Y)),
        ]
        .into_iter()
        .filter(move |(bit, _)| self.0 & bit != 0)
        .map(|(_, t)| t)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Policy {
    None,
    Static(InfluenceSets),
    Aggressive(AggressivePolicy),
    Uninformed(UninformedPolicy),
}

impl Policy {
    pub fn is_static(&self) -> bool {
        matches!(self, Policy::None | Policy::Static(_))
    }

    pub fn is_randomized(&self) -> bool {
        matches!(self, Policy::Uninformed(_))
    }

    /// Influence sets in state `a` for deterministic policies.
    pub fn influence(&self, a: &ActionProfile) -> Option<InfluenceSets> {
        match self {
            Policy::None => Some(InfluenceSets::empty(a.len())),
            Policy::Static(inf) => Some(inf.clone()),
            Policy::Aggressive(p) => Some(p.influence(a)),
            Policy::Uninformed(_) => None,
        }
    }

    /// Per-agent support of the influence distribution in state `a`.
    pub fn agent_options(&self, a: &ActionProfile) -> Vec<TagOptions> {
        match self {
            Policy::Uninformed(u) => {
                let share = u.random_share();
                (0..a.len())
                    .map(|i| {
                        if u.is_fixed(i) || share >= 1.0 {
                            TagOptions::only(Some(Action::Y))
                        } else if share <= 0.0 {
                            TagOptions::only(None)
                        } else {
                            let mut o = TagOptions::only(None);
                            o.add(Some(Action::Y));
                            o
                        }
                    })
                    .collect()
            }
            _ => {
                let inf = self.influence(a).expect("deterministic policy");
                inf.tags().iter().map(|&t| TagOptions::only(t)).collect()
            }
        }
    }

    /// Largest number of adversaries the policy can deploy at once.
    pub fn max_adversaries(&self) -> usize {
        match self {
            Policy::None => 0,
            Policy::Static(inf) => inf.len(),
            Policy::Aggressive(p) => p.budget(),
            Policy::Uninformed(u) => u.budget(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn options_iterate_in_order() {
        let mut o = TagOptions::only(Some(Action::Y));
        o.add(None);
        assert_eq!(o.iter().collect::<Vec<_>>(), vec![None, Some(Action::Y)]);
    }

    #[test]
    fn uninformed_options() {
        let pol = Policy::Uninformed(UninformedPolicy::new(10, 0.4, 0.2).unwrap());
        let opts = pol.agent_options(&ActionProfile::all_x(10));
        assert_eq!(opts[0], TagOptions::only(Some(Action::Y)));
        assert_eq!(opts[5].iter().count(), 2);
        let full = Policy::Uninformed(UninformedPolicy::new(10, 1.0, 0.5).unwrap());
        assert!(full
            .agent_options(&ActionProfile::all_x(10))
            .iter()
            .all(|o| *o == TagOptions::only(Some(Action::Y))));
    }
}
