//! Epistemic analysis of the core of TU cooperative games.
//!
//! * [`game`]: TU games, the core, domination and blocking witnesses.
//! * [`logic`]: a multi-agent KD sequent calculus with a proof checker.
//! * [`accept`]: the C-acceptability criterion, its decision procedure and
//!   proof emission.
//! * [`knowledge`] and [`balanced`]: knowledge profiles versus the core,
//!   balanced families and the Bondareva-Shapley test.
//! * [`replica`]: Edgeworth economies, replicas and their grid cores.

pub mod accept;
pub mod balanced;
pub mod coalition;
pub mod error;
pub mod game;
pub mod knowledge;
pub mod logic;
pub mod lp;
pub mod point;
pub mod rational;
pub mod replica;

pub use coalition::{Coalition, Player};
pub use error::{Error, Result};
pub use game::{PayoffVector, TUGame};
pub use point::Point;
pub use rational::Rational;
