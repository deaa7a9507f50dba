//! Quantum fuzzy sets on a simulated qubit register.
//!
//! A fuzzy set over `{1..N}` is encoded as the product state
//! `⊗ᵢ [√(1−f(i))|0⟩ + √f(i)|1⟩]`; each computational basis state is a
//! crisp subset, so measuring the register draws a crisp subset with
//! probability `∏_{i∈S} f(i) ∏_{i∉S} (1−f(i))`. On top of that encoding the
//! crate provides the probabilistic connectives as gates (NOT, Toffoli AND,
//! OR), a square-window fuzzifier, a centre-of-mass defuzzifier built as a
//! reversible oracle, superpositions of encoded sets, structural diagnostics
//! and a small expression language tying it together.

pub mod analysis;
pub mod error;
pub mod expr;
pub mod fuzzy;
pub mod outcome;
pub mod qfs;
pub mod rng;
pub mod statevec;

pub use error::{Error, Result};
pub use fuzzy::{CrispSubset, FuzzySet};
pub use num_complex::Complex64;
pub use outcome::OutcomeDistribution;
pub use qfs::{QuantumFuzzySet, RegisterLayout};
pub use statevec::{QubitCap, SingleQubitGate, StateVector};
