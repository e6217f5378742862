//! Exact cooperative-game queries for concurrent multi-player mean-payoff
//! games.
//!
//! Players pick actions simultaneously, every state carries an integer weight
//! per player, and a player's payoff is the long-run average weight of the
//! run. Strategies are finite-state machines, so every strategy profile
//! induces a lasso and payoffs are exact rationals.
//!
//! The crate answers the cooperative questions: whether a coalition can
//! strictly improve on a payoff vector ([`decisions::dominated`]), whether a
//! profile is in the core ([`decisions::membership`]), whether the core is
//! non-empty ([`decisions::core_nonempty`]), and whether some or every core
//! outcome satisfies a GR(1) specification ([`decisions::e_core_gr1`],
//! [`decisions::a_core_gr1`]).
//!
//! Everything is computed with exact rational arithmetic: a dense simplex
//! ([`lp`]), polyhedra with facet enumeration and projection ([`geometry`]),
//! and coalition value sets built from simple-cycle averages ([`values`]).
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod budget;
pub mod decisions;
pub mod error;
pub mod game;
pub mod geometry;
pub mod gr1;
pub mod graph;
pub mod lp;
pub mod oracle;
pub mod payoff;
pub mod rational;
pub mod reductions;
pub mod search;
pub mod sequentialise;
pub mod values;

pub use budget::Budget;
pub use error::{Error, Result};
pub use game::{Coalition, Game, StrategyMachine, StrategyProfile};
pub use rational::{Rat, RatVec};
