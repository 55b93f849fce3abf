//! Target graph states, the white-noise model, and the stabilizer observable
//! set used by the few-copy protocol.

mod dense;
mod spec;

pub use dense::{outcome_probability_oracle, pauli_trace, DenseState, MAX_DENSE_QUBITS};
pub use spec::{parse_edge_list, parse_named_graph};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::pauli::{PauliString, Sign, StabilizerGroup, MAX_QUBITS};

/// Separable bound of the stabilizer-projector witness translation.
pub const STABILIZER_SEPARABLE_BOUND: f64 = 0.75;

/// Single-qubit Clifford applied after the graph-state circuit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum LocalClifford {
    Identity,
    Hadamard,
}

/// `∏ CZ_e |+⟩^n` followed by optional per-qubit local Cliffords, described
/// by its stabilizer generators `K_a = X_a ∏_{b ∈ N(a)} Z_b` (conjugated by the
/// local Cliffords).
#[derive(Clone, Debug, PartialEq)]
pub struct GraphState {
    n_qubits: usize,
    edges: Vec<(usize, usize)>,
    local_cliffords: Vec<LocalClifford>,
    generators: StabilizerGroup,
}

impl GraphState {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    /// Edges as `(low, high)` pairs in sorted order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn local_cliffords(&self) -> &[LocalClifford] {
        &self.local_cliffords
    }

    pub fn generators(&self) -> &StabilizerGroup {
        &self.generators
    }

    pub fn neighbors(&self, qubit: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |&(a, b)| {
            if a == qubit {
                Some(b)
            } else if b == qubit {
                Some(a)
            } else {
                None
            }
        })
    }

    /// Replaces the local Clifford tags and recomputes the generators.
    pub fn with_local_cliffords(self, local_cliffords: Vec<LocalClifford>) -> Result<Self> {
        if local_cliffords.len() != self.n_qubits {
            return Err(Error::InvalidArgument(format!(
                "{} local Cliffords for {} qubits",
                local_cliffords.len(),
                self.n_qubits
            )));
        }
        assemble(self.n_qubits, self.edges, local_cliffords)
    }
}

fn assemble(
    n_qubits: usize,
    edges: Vec<(usize, usize)>,
    local_cliffords: Vec<LocalClifford>,
) -> Result<GraphState> {
    let mut generators = Vec::with_capacity(n_qubits);
    for a in 0..n_qubits {
        let mut z = 0u64;
        for &(u, v) in &edges {
            if u == a {
                z |= 1 << v;
            } else if v == a {
                z |= 1 << u;
            }
        }
        let mut k = PauliString::from_bits(n_qubits, 1 << a, z, Sign::Plus)?;
        for (q, lc) in local_cliffords.iter().enumerate() {
            if *lc == LocalClifford::Hadamard {
                k = k.conjugate_hadamard(q)?;
            }
        }
        generators.push(k);
    }
    Ok(GraphState {
        n_qubits,
        edges,
        local_cliffords,
        generators: StabilizerGroup::new(generators)?,
    })
}

/// Graph state on `n` qubits for an arbitrary simple graph.
pub fn build_graph_state(edges: &[(usize, usize)], n: usize) -> Result<GraphState> {
    if n == 0 || n > MAX_QUBITS {
        return Err(Error::InvalidQubitCount {
            n_qubits: n,
            max: MAX_QUBITS,
        });
    }
    let mut normalized = Vec::with_capacity(edges.len());
    for &(u, v) in edges {
        if u == v || u >= n || v >= n {
            return Err(Error::InvalidEdge(u, v));
        }
        normalized.push((u.min(v), u.max(v)));
    }
    normalized.sort_unstable();
    if let Some(w) = normalized.windows(2).find(|w| w[0] == w[1]) {
        return Err(Error::InvalidEdge(w[0].0, w[0].1));
    }
    assemble(n, normalized, vec![LocalClifford::Identity; n])
}

/// The path-graph (linear cluster) state on `n ≥ 2` qubits.
pub fn build_linear_cluster(n: usize) -> Result<GraphState> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "a linear cluster needs at least 2 qubits, got {n}"
        )));
    }
    let edges: Vec<_> = (0..n - 1).map(|a| (a, a + 1)).collect();
    build_graph_state(&edges, n)
}

/// `½(|0000⟩ + |0011⟩ + |1100⟩ − |1111⟩)`: the linear 4-cluster with a
/// Hadamard on the two end qubits.
pub fn build_c4_state() -> GraphState {
    use LocalClifford::{Hadamard, Identity};
    build_linear_cluster(4)
        .and_then(|g| g.with_local_cliffords(vec![Hadamard, Identity, Identity, Hadamard]))
        .expect("the 4-qubit cluster is well formed")
}

/// Target graph state mixed with white noise:
/// `ρ = λ 𝟙/2^n + (1 − λ)|C⟩⟨C|`.
#[derive(Clone, Debug, PartialEq)]
pub struct NoisyState {
    target: GraphState,
    lambda: f64,
}

impl NoisyState {
    pub fn new(target: GraphState, lambda: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::InvalidArgument(format!(
                "noise lambda must lie in [0, 1], got {lambda}"
            )));
        }
        Ok(Self { target, lambda })
    }

    pub fn target(&self) -> &GraphState {
        &self.target
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn n_qubits(&self) -> usize {
        self.target.n_qubits
    }
}

/// Sampling weights `ε_i` over the `2^n` observables.
#[derive(Clone, Debug, PartialEq)]
pub enum SamplingWeights {
    Uniform,
    Custom(Vec<f64>),
}

/// The binary observables `M_i = (𝟙 + S_i)/2`, one per stabilizer group
/// element, with their sampling weights and separable bound.
#[derive(Clone, Debug, PartialEq)]
pub struct ObservableSet {
    source_group: StabilizerGroup,
    weights: SamplingWeights,
    separable_bound: f64,
}

impl ObservableSet {
    pub fn n_qubits(&self) -> usize {
        self.source_group.n_qubits()
    }

    pub fn source_group(&self) -> &StabilizerGroup {
        &self.source_group
    }

    pub fn weights(&self) -> &SamplingWeights {
        &self.weights
    }

    pub fn separable_bound(&self) -> f64 {
        self.separable_bound
    }

    pub fn is_uniform(&self) -> bool {
        matches!(self.weights, SamplingWeights::Uniform)
    }

    /// Number of observables, `2^n`, when it fits in a `u64`.
    pub fn len(&self) -> Option<u64> {
        self.source_group.order()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Weight of observable `mask`.
    pub fn weight(&self, mask: u64) -> Result<f64> {
        self.source_group.element(mask)?;
        Ok(match &self.weights {
            SamplingWeights::Uniform => 0.5f64.powi(self.n_qubits() as i32),
            SamplingWeights::Custom(w) => w[mask as usize],
        })
    }

    /// The stabilizer `S_i` behind observable `mask`.
    pub fn stabilizer(&self, mask: u64) -> Result<PauliString> {
        self.source_group.element(mask)
    }

    /// Replaces the uniform default with explicit weights, which must be a
    /// probability vector of length `2^n`.
    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        let expected = self
            .len()
            .filter(|_| self.n_qubits() <= crate::pauli::MAX_ENUMERATION_QUBITS)
            .ok_or(Error::TooManyQubits {
                n_qubits: self.n_qubits(),
                max: crate::pauli::MAX_ENUMERATION_QUBITS,
            })?;
        if weights.len() as u64 != expected {
            return Err(Error::InvalidArgument(format!(
                "{} weights for {expected} observables",
                weights.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidArgument(
                "weights must be finite and nonnegative".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        self.weights = SamplingWeights::Custom(weights);
        Ok(self)
    }
}

/// Translates the projector witness `½𝟙 − |C⟩⟨C|` of a graph state into its
/// `2^n` stabilizer observables, sampled uniformly, with separable bound 3/4.
pub fn observable_set_from_witness(g: &GraphState) -> ObservableSet {
    ObservableSet {
        source_group: g.generators.clone(),
        weights: SamplingWeights::Uniform,
        separable_bound: STABILIZER_SEPARABLE_BOUND,
    }
}

/// `Tr[M_i ρ]` for the white-noise graph-state model: the identity element
/// always answers 1, every other stabilizer answers 1 with probability
/// `1 − λ/2`.
pub fn outcome_probability(s: &NoisyState, obs_mask: u64) -> Result<f64> {
    if let Some(order) = s.target.generators.order() {
        if obs_mask >= order {
            return Err(Error::MaskOutOfRange {
                mask: obs_mask,
                n_qubits: s.n_qubits(),
            });
        }
    }
    Ok(if obs_mask == 0 {
        1.0
    } else {
        1.0 - s.lambda / 2.0
    })
}

/// Average probability of outcome 1 under uniform sampling:
/// `1 + λ(1 − 2^n)/(2·2^n)`.
pub fn expected_p_e(lambda: f64, n: usize) -> f64 {
    1.0 - lambda * (1.0 - 0.5f64.powi(n as i32)) / 2.0
}

/// Largest white-noise fraction with a positive expected deviation from the
/// separable bound, `2^n / (2(2^n − 1))`.
pub fn lambda_limit(n: usize) -> f64 {
    0.5 / (1.0 - 0.5f64.powi(n as i32))
}
