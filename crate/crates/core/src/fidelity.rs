//! Fidelity with the target read off the protocol data already collected.
//!
//! Since `|C⟩⟨C| = 2^{-n} Σ_i (2M_i − 𝟙)`, the fidelity is `2⟨M⟩ − 1` where
//! `⟨M⟩` is the uniform average of the observable expectations, and `S/N` of a
//! uniformly sampled trace estimates exactly that average.

use serde::Serialize;

use crate::detector::ConfidenceTrace;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct FidelityEstimate {
    pub f_hat: f64,
    /// Binomial plug-in standard error of `f_hat`.
    pub std_error: f64,
    pub n_copies_used: u64,
}

impl FidelityEstimate {
    /// Plug-in value of `⟨½𝟙 − |C⟩⟨C|⟩`; negative means the witness fires.
    pub fn witness_value(&self) -> f64 {
        0.5 - self.f_hat
    }
}

pub fn fidelity_from_trace(t: &ConfidenceTrace) -> Result<FidelityEstimate> {
    if !t.uniform_weights {
        return Err(Error::NonUniformWeights);
    }
    let n = t.n_copies();
    let p = t.successes() as f64 / n as f64;
    Ok(FidelityEstimate {
        f_hat: 2.0 * p - 1.0,
        std_error: 2.0 * (p * (1.0 - p) / n as f64).sqrt(),
        n_copies_used: n,
    })
}

/// `1 − λ(2^n − 1)/2^n`, the fidelity of the white-noise state.
pub fn expected_fidelity(lambda: f64, n: usize) -> f64 {
    1.0 - lambda * (1.0 - 0.5f64.powi(n as i32))
}
