//! Two-player 2×2 bimatrix games in which player 1 may hold the wrong model
//! of player 2's payoffs.
//!
//! Player 2's true matrix `R` is one of `F(B) = {B, B12, B23, B34}`, the
//! matrix player 1 believes in and its three adjacent-preference swaps.
//! [`robust`] solves the four belief cases, [`catalog`] enumerates the 78
//! strict ordinal games and [`experiment`] measures player 1's loss over
//! all of them. All arithmetic is exact.

pub mod catalog;
pub mod equilibrium;
pub mod error;
pub mod experiment;
pub mod robust;
pub mod types;

pub use catalog::{canonical_form, enumerate_games, BimatrixGame, CanonicalGame};
pub use equilibrium::{nash_equilibria, Equilibrium, SelectionRule};
pub use error::{Error, Result};
pub use robust::{CaseSolution, MaxMinResult, Rules, WrongGame};
pub use types::{
    family_of, payoff, GameCase, GameFamily, MixedStrategy, PayoffMatrix, Rational, Side,
    SidedParam, StrictOrdinalMatrix, TieBreakRule,
};
