//! Interval exchange transformations with flips, generalized Rauzy
//! induction, and an exact verification pipeline for an eight-interval
//! example carrying three distinct ergodic invariant measures.

pub mod interval;
pub mod keane;
pub mod matrix;
pub mod rational;
pub mod rauzy;
pub mod verify;
pub mod wire;

pub use interval::{Fiet, FietCombinatorics, IntervalError, Label, LengthVector, OrbitPoint, Permutation, Subinterval};
pub use matrix::TransitionMatrix;
pub use rational::Rational;
pub use rauzy::{CaseTag, RauzyError, RauzyPath, StepLabel, StepOutcome};
