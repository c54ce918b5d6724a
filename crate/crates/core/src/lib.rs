//! Log-linear learning on k-connected rings under adversarial influence.
//!
//! Agents play a two-action coordination game with their ring neighbors and
//! revise by log-linear learning. Adversaries attach to agents and bias their
//! revisions. The crate simulates the resulting dynamics, computes exact
//! stochastically stable states on small rings, and evaluates worst-case
//! efficiency bounds for static and dynamic, informed and uninformed
//! adversaries.

pub mod bounds;
pub mod dynamics;
pub mod error;
pub mod experiment;
pub mod game;
pub mod numeric;
pub mod oracle;
pub mod policy;
pub mod ring;

pub use error::{Error, Result};
pub use game::{Action, ActionProfile, GameParams, InfluenceSets};
pub use policy::Policy;
pub use ring::{RingGraph, Segment};
