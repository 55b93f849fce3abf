//! Few-copy entanglement detection for noisy graph states.
//!
//! Each copy of the state is asked one randomly chosen yes/no question: the
//! projector `(𝟙 + S)/2` onto the +1 eigenspace of a stabilizer `S` of the
//! target graph state. No separable state answers "yes" with probability
//! above `p_s = 3/4`, so the observed rate `S/N` turns into a confidence bound
//! `1 − exp(−D(S/N ‖ p_s)·N)` after only a handful of copies.
//!
//! * [`pauli`]: symplectic Pauli strings and stabilizer groups.
//! * [`states`]: graph states, the white-noise model and the observable set.
//! * [`detector`]: confidence bounds and the seeded protocol simulation.
//! * [`baseline`]: term-by-term witness estimation for comparison.
//! * [`fidelity`]: fidelity estimates from protocol traces.

pub mod baseline;
pub mod detector;
mod error;
pub mod fidelity;
pub mod pauli;
pub mod states;

pub use error::{Error, Result};
