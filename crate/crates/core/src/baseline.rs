//! The standard alternative: estimate the witness expectation value term by
//! term, each to accuracy `ε` at a given confidence level.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};
use serde::Serialize;
use statrs::distribution::{ContinuousCDF, Normal};

use crate::detector::{derive_seed, max_copies_for_noise};
use crate::error::{Error, Result};
use crate::states::{DenseState, GraphState, STABILIZER_SEPARABLE_BOUND};

/// Two-sided normal quantile for `confidence_level`. The 68% level is taken
/// as exactly one standard deviation.
pub fn z_score(confidence_level: f64) -> Result<f64> {
    if !(confidence_level > 0.0 && confidence_level < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "confidence level {confidence_level} outside (0, 1)"
        )));
    }
    if (confidence_level - 0.68).abs() < 1e-12 {
        return Ok(1.0);
    }
    let normal = Normal::new(0.0, 1.0).expect("standard normal");
    Ok(normal.inverse_cdf(1.0 - (1.0 - confidence_level) / 2.0))
}

/// Smallest `N` with `z·sqrt((1 − mean²)/N) ≤ ε` for a ±1-valued observable
/// with true mean `mean`.
pub fn shots_for_accuracy(mean: f64, epsilon: f64, confidence_level: f64) -> Result<u64> {
    if !(epsilon > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "accuracy epsilon must be positive, got {epsilon}"
        )));
    }
    if !(-1.0..=1.0).contains(&mean) {
        return Err(Error::InvalidArgument(format!(
            "mean {mean} of a ±1 observable outside [-1, 1]"
        )));
    }
    let z = z_score(confidence_level)?;
    let variance = 1.0 - mean * mean;
    let shots = (z * z * variance / (epsilon * epsilon)).ceil();
    Ok((shots as u64).max(1))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoverageReport {
    pub lambda: f64,
    pub epsilon: f64,
    pub confidence_level: f64,
    pub shots_per_trial: u64,
    pub trials: u64,
    pub within_epsilon: u64,
    pub coverage: f64,
}

/// Repeats the estimation of a stabilizer with noisy mean `1 − λ` over
/// `trials` independent runs of `shots_for_accuracy` shots each and counts how
/// often the sample mean lands within `ε` of the truth.
pub fn simulate_expectation_estimation(
    lambda: f64,
    epsilon: f64,
    confidence_level: f64,
    trials: u64,
    seed: u64,
) -> Result<CoverageReport> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::InvalidArgument(format!(
            "noise lambda must lie in [0, 1], got {lambda}"
        )));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let mean = 1.0 - lambda;
    let shots = shots_for_accuracy(mean, epsilon, confidence_level)?;
    let plus_one = Binomial::new(shots, (1.0 + mean) / 2.0)
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    let within = (0..trials)
        .filter(|&t| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, t));
            let k = plus_one.sample(&mut rng);
            let estimate = 2.0 * k as f64 / shots as f64 - 1.0;
            (estimate - mean).abs() <= epsilon
        })
        .count() as u64;
    Ok(CoverageReport {
        lambda,
        epsilon,
        confidence_level,
        shots_per_trial: shots,
        trials,
        within_epsilon: within,
        coverage: within as f64 / trials as f64,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ShotEstimate {
    pub epsilon: f64,
    pub confidence_level: f64,
    pub lambda: f64,
    pub shots_per_term: u64,
    pub n_terms: u64,
    pub total_shots: u64,
}

/// Cost of estimating all `q_terms` local terms with a uniform per-term
/// budget. `q_terms` defaults to `2^n`, the full stabilizer decomposition.
pub fn witness_total_cost(
    n: usize,
    lambda: f64,
    epsilon: f64,
    confidence_level: f64,
    q_terms: Option<u64>,
) -> Result<ShotEstimate> {
    let q = match q_terms {
        Some(0) => return Err(Error::InvalidArgument("q_terms must be at least 1".into())),
        Some(q) => q,
        None => 1u64
            .checked_shl(n as u32)
            .ok_or_else(|| Error::InvalidArgument(format!("2^{n} terms overflow")))?,
    };
    let per_term = shots_for_accuracy(1.0 - lambda, epsilon, confidence_level)?;
    let total = per_term
        .checked_mul(q)
        .ok_or_else(|| Error::InvalidArgument("total shot count overflows".into()))?;
    Ok(ShotEstimate {
        epsilon,
        confidence_level,
        lambda,
        shots_per_term: per_term,
        n_terms: q,
        total_shots: total,
    })
}

/// Witness cost next to the few-copy copy budget at the same noise level.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ResourceComparison {
    pub estimate: ShotEstimate,
    pub fewcopy_n_max: f64,
    pub ratio: f64,
}

pub fn compare_resources(
    n: usize,
    lambda: f64,
    epsilon: f64,
    confidence_level: f64,
    q_terms: Option<u64>,
    target_confidence: f64,
) -> Result<ResourceComparison> {
    let estimate = witness_total_cost(n, lambda, epsilon, confidence_level, q_terms)?;
    let n_max = max_copies_for_noise(target_confidence, lambda, n, STABILIZER_SEPARABLE_BOUND)?;
    Ok(ResourceComparison {
        estimate,
        fewcopy_n_max: n_max,
        ratio: estimate.total_shots as f64 / n_max,
    })
}

/// Noise threshold of the projector witness `W = ½𝟙 − |C⟩⟨C|`:
/// `−Tr[Wρ_t] / (Tr[W]/2^n − Tr[Wρ_t])`, evaluated in closed form with
/// `Tr[Wρ_t] = −½` and `Tr[W] = 2^(n−1) − 1`.
pub fn witness_lambda_limit(g: &GraphState) -> f64 {
    let dim_inv = 0.5f64.powi(g.n_qubits() as i32);
    let w_target = -0.5;
    let w_trace_normalized = 0.5 - dim_inv;
    -w_target / (w_trace_normalized - w_target)
}

/// The same threshold with both traces computed on the statevector, writing
/// `|C⟩⟨C|` as the uniform average of the `2^n` stabilizers.
pub fn witness_lambda_limit_dense(g: &GraphState) -> Result<f64> {
    let psi = DenseState::from_graph(g)?;
    let elements = g.generators().elements()?;
    let dim = elements.len() as f64;
    let mut projector_expectation = 0.0;
    let mut projector_trace = 0.0;
    for s in &elements {
        projector_expectation += psi.expectation(s)?.re;
        projector_trace += crate::states::pauli_trace(s)?.re;
    }
    projector_expectation /= dim;
    projector_trace /= dim;
    let norm = psi.inner(psi.amplitudes()).re;
    let w_target = 0.5 * norm - projector_expectation;
    let w_trace = 0.5 * dim - projector_trace;
    Ok(-w_target / (w_trace / dim - w_target))
}
