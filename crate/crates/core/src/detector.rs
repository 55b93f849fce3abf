//! The few-copy detection protocol: confidence bounds from the binary
//! Kullback–Leibler divergence, and a seeded simulation that queries copies of
//! a noisy graph state with randomly drawn stabilizer observables.
//!
//! Copies are drawn i.i.d. from the configured [`NoisyState`]. Randomness comes
//! from ChaCha8 seeded with a `u64`, which produces the same stream on every
//! platform; independent trials use separate ChaCha streams (see
//! [`derive_seed`]).

use rand::distr::weighted::WeightedIndex;
use rand::distr::Distribution;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::states::{
    expected_p_e, outcome_probability, DenseState, NoisyState, ObservableSet, SamplingWeights,
    MAX_DENSE_QUBITS,
};

/// Binary KL divergence `D(x‖y)` in nats, with `0·ln 0 = 0`.
pub fn kl_divergence(x: f64, y: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidArgument(format!(
            "KL divergence argument x = {x} outside [0, 1]"
        )));
    }
    if !(y > 0.0 && y < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "KL divergence argument y = {y} outside (0, 1)"
        )));
    }
    let term = |a: f64, b: f64| if a == 0.0 { 0.0 } else { a * (a / b).ln() };
    // Rounding can leave a tiny negative value when x ≈ y.
    Ok((term(x, y) + term(1.0 - x, 1.0 - y)).max(0.0))
}

/// Lower bound `1 − exp(−D(p_s + δ‖p_s)·n)` on the confidence that a state
/// showing deviation `δ` over `n` copies is entangled.
///
/// Returns `Ok(None)` when `δ ≤ 0`: the run is inconclusive and carries no
/// confidence at all.
pub fn confidence_min(delta: f64, p_s: f64, n: u64) -> Result<Option<f64>> {
    if delta.is_nan() {
        return Err(Error::InvalidArgument("deviation is NaN".into()));
    }
    if delta <= 0.0 {
        return Ok(None);
    }
    if p_s + delta > 1.0 {
        return Err(Error::InvalidArgument(format!(
            "p_s + delta = {} exceeds 1",
            p_s + delta
        )));
    }
    let d = kl_divergence(p_s + delta, p_s)?;
    Ok(Some(-(-d * n as f64).exp_m1()))
}

/// Upper bound `−ln(1 − C₀) / D(p_s + δ‖p_s)` on the copies needed to reach
/// confidence `C₀`. Left real-valued; round up for an integer budget.
pub fn max_copies(c0: f64, p_s: f64, delta: f64) -> Result<f64> {
    if !(c0 > 0.0 && c0 < 1.0) {
        return Err(Error::InvalidArgument(format!(
            "target confidence {c0} outside (0, 1)"
        )));
    }
    if !(delta > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "deviation {delta} is not positive: noise at or beyond the limit"
        )));
    }
    if p_s + delta > 1.0 {
        return Err(Error::InvalidArgument(format!(
            "p_s + delta = {} exceeds 1",
            p_s + delta
        )));
    }
    Ok(-(-c0).ln_1p() / kl_divergence(p_s + delta, p_s)?)
}

/// Noise level at which the expected deviation from `p_s` vanishes for the
/// uniform stabilizer observables on `n` qubits.
fn noise_threshold(p_s: f64, n: usize) -> f64 {
    2.0 * (1.0 - p_s) / (1.0 - 0.5f64.powi(n as i32))
}

/// Expected deviation `p_e(λ) − p_s`, or an error when it is not positive.
pub fn expected_delta(lambda: f64, n: usize, p_s: f64) -> Result<f64> {
    let delta = expected_p_e(lambda, n) - p_s;
    if !(delta > 0.0) {
        return Err(Error::NoiseBeyondLimit {
            lambda,
            limit: noise_threshold(p_s, n),
        });
    }
    Ok(delta)
}

/// `N_max(λ)` for the white-noise model.
pub fn max_copies_for_noise(c0: f64, lambda: f64, n: usize, p_s: f64) -> Result<f64> {
    max_copies(c0, p_s, expected_delta(lambda, n, p_s)?)
}

/// Theoretical `C_min` for `N = 1..=max_n` at the expected deviation of the
/// white-noise model.
pub fn confidence_curve(lambda: f64, n: usize, p_s: f64, max_n: u64) -> Result<Vec<(u64, f64)>> {
    let delta = expected_delta(lambda, n, p_s)?;
    (1..=max_n)
        .map(|copies| {
            let c = confidence_min(delta, p_s, copies)?.unwrap_or(0.0);
            Ok((copies, c))
        })
        .collect()
}

/// How outcome probabilities are computed during a run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Closed form for white noise over a stabilizer state.
    #[default]
    Analytic,
    /// Dense statevector evaluation; limited to small registers.
    Oracle,
}

#[derive(Clone, Debug)]
pub struct ProtocolConfig {
    pub observable_set: ObservableSet,
    pub state: NoisyState,
    pub n_copies: u64,
    pub target_confidence: f64,
    pub rng_seed: u64,
    pub mode: Mode,
}

impl ProtocolConfig {
    /// Config with target confidence 0.99, seed 0 and analytic mode.
    pub fn new(observable_set: ObservableSet, state: NoisyState, n_copies: u64) -> Self {
        Self {
            observable_set,
            state,
            n_copies,
            target_confidence: 0.99,
            rng_seed: 0,
            mode: Mode::Analytic,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.rng_seed = seed;
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_target_confidence(mut self, c0: f64) -> Self {
        self.target_confidence = c0;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_copies == 0 {
            return Err(Error::InvalidArgument("n_copies must be at least 1".into()));
        }
        if !(self.target_confidence > 0.0 && self.target_confidence < 1.0) {
            return Err(Error::InvalidArgument(format!(
                "target confidence {} outside (0, 1)",
                self.target_confidence
            )));
        }
        if self.observable_set.n_qubits() != self.state.n_qubits() {
            return Err(Error::DimensionMismatch {
                left: self.observable_set.n_qubits(),
                right: self.state.n_qubits(),
            });
        }
        if self.observable_set.source_group() != self.state.target().generators() {
            return Err(Error::InvalidArgument(
                "observable set was not built from the target state".into(),
            ));
        }
        if self.mode == Mode::Oracle && self.state.n_qubits() > MAX_DENSE_QUBITS {
            return Err(Error::TooManyQubits {
                n_qubits: self.state.n_qubits(),
                max: MAX_DENSE_QUBITS,
            });
        }
        Ok(())
    }
}

/// One queried copy.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TraceRecord {
    /// Zero-based; this record summarizes `copy_index + 1` copies.
    pub copy_index: u64,
    pub observable_mask: u64,
    pub outcome: u8,
    pub cumulative_s: u64,
    pub p_e_obs: f64,
    pub delta: f64,
    /// `None` when `delta ≤ 0`.
    pub c_min: Option<f64>,
}

impl TraceRecord {
    pub fn copies(&self) -> u64 {
        self.copy_index + 1
    }

    pub fn is_conclusive(&self) -> bool {
        self.c_min.is_some()
    }
}

/// Outcome after the last copy: a positive deviation certifies entanglement
/// with confidence `C_min`, anything else carries no information.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "verdict", rename_all = "lowercase")]
pub enum Verdict {
    Entangled { confidence: f64 },
    Inconclusive,
}

impl Verdict {
    pub fn is_entangled(&self) -> bool {
        matches!(self, Verdict::Entangled { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfidenceTrace {
    pub n_qubits: usize,
    pub separable_bound: f64,
    pub uniform_weights: bool,
    pub target_confidence: f64,
    pub records: Vec<TraceRecord>,
    pub verdict: Verdict,
    /// Whether the final `C_min` reached `target_confidence`.
    pub target_met: bool,
}

impl ConfidenceTrace {
    pub fn last(&self) -> &TraceRecord {
        self.records.last().expect("a trace holds at least one record")
    }

    /// Total number of `1` outcomes.
    pub fn successes(&self) -> u64 {
        self.last().cumulative_s
    }

    pub fn n_copies(&self) -> u64 {
        self.last().copies()
    }

    pub fn observed_p_e(&self) -> f64 {
        self.last().p_e_obs
    }

    pub fn final_delta(&self) -> f64 {
        self.last().delta
    }
}

/// Seed for trial `trial_index` of a batch, taken from its own ChaCha stream
/// so that trials stay independent but reproducible.
pub fn derive_seed(seed: u64, trial_index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial_index);
    rng.next_u64()
}

enum ObservableSampler {
    Uniform { order: Option<u64> },
    Weighted(WeightedIndex<f64>),
}

impl ObservableSampler {
    fn new(set: &ObservableSet) -> Result<Self> {
        Ok(match set.weights() {
            SamplingWeights::Uniform => Self::Uniform { order: set.len() },
            SamplingWeights::Custom(w) => Self::Weighted(
                WeightedIndex::new(w).map_err(|e| Error::InvalidArgument(e.to_string()))?,
            ),
        })
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> u64 {
        match self {
            Self::Uniform { order: Some(order) } => rng.random_range(0..*order),
            Self::Uniform { order: None } => rng.random(),
            Self::Weighted(dist) => dist.sample(rng) as u64,
        }
    }
}

/// Runs the fixed-`N` protocol: draw an observable, query one copy, update
/// `S`, `δ = S/N − p_s` and `C_min`, and repeat for every copy.
pub fn run_protocol(cfg: &ProtocolConfig) -> Result<ConfidenceTrace> {
    cfg.validate()?;
    let set = &cfg.observable_set;
    let p_s = set.separable_bound();
    let lambda = cfg.state.lambda();
    let sampler = ObservableSampler::new(set)?;
    let dense = match cfg.mode {
        Mode::Analytic => None,
        Mode::Oracle => Some(DenseState::from_graph(cfg.state.target())?),
    };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
    let mut records = Vec::with_capacity(cfg.n_copies as usize);
    let mut successes = 0u64;
    for copy_index in 0..cfg.n_copies {
        let mask = sampler.draw(&mut rng);
        let p_one = match &dense {
            None => outcome_probability(&cfg.state, mask)?,
            Some(psi) => psi.outcome_probability(lambda, &set.stabilizer(mask)?)?,
        };
        let outcome = u8::from(rng.random::<f64>() < p_one);
        successes += u64::from(outcome);
        let copies = copy_index + 1;
        let p_e_obs = successes as f64 / copies as f64;
        let delta = p_e_obs - p_s;
        records.push(TraceRecord {
            copy_index,
            observable_mask: mask,
            outcome,
            cumulative_s: successes,
            p_e_obs,
            delta,
            c_min: confidence_min(delta, p_s, copies)?,
        });
    }

    let final_c_min = records.last().and_then(|r| r.c_min);
    let verdict = match final_c_min {
        Some(confidence) => Verdict::Entangled { confidence },
        None => Verdict::Inconclusive,
    };
    Ok(ConfidenceTrace {
        n_qubits: set.n_qubits(),
        separable_bound: p_s,
        uniform_weights: set.is_uniform(),
        target_confidence: cfg.target_confidence,
        records,
        verdict,
        target_met: final_c_min.is_some_and(|c| c >= cfg.target_confidence),
    })
}

/// Runs `trials` independent copies of `cfg`, trial `t` seeded with
/// `derive_seed(cfg.rng_seed, t)`.
pub fn run_trials(cfg: &ProtocolConfig, trials: u64) -> Result<Vec<ConfidenceTrace>> {
    (0..trials)
        .map(|t| {
            let mut trial = cfg.clone();
            trial.rng_seed = derive_seed(cfg.rng_seed, t);
            run_protocol(&trial)
        })
        .collect()
}
