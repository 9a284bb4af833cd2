//! Hanabi simulation and evolution of rule-ordering agents.
//!
//! The crate is layered bottom-up:
//!
//! * [`engine`]: the seeded game state machine.
//! * [`knowledge`]: per-slot beliefs and probability queries behind a
//!   [`knowledge::PlayerView`] that hides the viewer's own cards.
//! * [`rules`]: the rule catalog, in an old and a new edition.
//! * [`agents`]: chromosome agents, the baseline test pool and the
//!   size-dispatching situational agent.
//! * [`eval`]: mirror and mixed fitness with shared seeds.
//! * [`evolve`]: the permutation genetic algorithm.
//! * [`analysis`]: chromosome composition reports and fitness curves.

pub mod agents;
pub mod analysis;
pub mod card;
pub mod config;
pub mod engine;
pub mod error;
pub mod eval;
pub mod evolve;
pub mod knowledge;
pub mod rng;
pub mod rules;
pub mod runs;

pub use card::{Card, Color, DeckSpec};
pub use engine::{Action, Event, EventKind, GameState, Hint, Scenario, TerminalStatus};
pub use error::{HanabiError, Result};
