//! Approximate Nash equilibria of bimatrix games by descent to stationary
//! points of the maximum regret, the adjustments that turn a stationary point
//! into a 1/3-ish equilibrium, a linear-programming generator of games where
//! those adjustments are tight, and an experiment harness around them.
//!
//! Payoffs are assumed to lie in `[0,1]`.

pub mod adjustments;
pub mod baselines;
pub mod descent;
pub mod dfm;
pub mod game;
pub mod generator;
pub mod harness;
pub mod linalg;
pub mod lp;
