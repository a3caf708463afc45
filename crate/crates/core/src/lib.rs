//! Simulation of measure-many one-way quantum and probabilistic finite
//! automata that test string equality by prime fingerprinting.
//!
//! The core is generic over the scalar type: quantum machines use
//! `Complex<T>` amplitudes and probabilistic machines use a real `T`, where
//! `T` is `f64`, `f32` or an exact rational. The aliases below fix the
//! common choices.

pub mod analysis;
pub mod automata;
pub mod builders;
pub mod error;
pub mod experiments;
pub mod languages;
pub mod number_theory;
pub mod scalar;

use num_rational::BigRational;

pub use error::{Error, Result};
pub use scalar::{Emulation, Model, Real, Weight};

/// Double-precision quantum automaton.
pub type Qfa = automata::QfaSpec<f64>;
/// Double-precision probabilistic automaton.
pub type Pfa = automata::PfaSpec<f64>;
/// Probabilistic automaton with exact rational weights.
pub type ExactPfa = automata::PfaSpec<BigRational>;
