//! Statevector oracle for small registers. Qubit 0 is the most significant
//! bit of the basis index, so `|q0 q1 … q_{n-1}⟩` reads left to right.

use num_complex::Complex64;

use super::{GraphState, LocalClifford, NoisyState};
use crate::error::{Error, Result};
use crate::pauli::PauliString;

pub const MAX_DENSE_QUBITS: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl DenseState {
    pub fn new(n_qubits: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        check_size(n_qubits)?;
        if amplitudes.len() != 1 << n_qubits {
            return Err(Error::InvalidArgument(format!(
                "{} amplitudes for {n_qubits} qubits",
                amplitudes.len()
            )));
        }
        let norm: f64 = amplitudes.iter().map(Complex64::norm_sqr).sum();
        if (norm - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "state norm² is {norm}, expected 1"
            )));
        }
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Runs the preparation circuit: `H^⊗n |0…0⟩`, one CZ per edge, then the
    /// local Cliffords.
    pub fn from_graph(g: &GraphState) -> Result<Self> {
        let n = g.n_qubits();
        check_size(n)?;
        let dim = 1usize << n;
        let amp = Complex64::new((dim as f64).sqrt().recip(), 0.0);
        let mut amplitudes = vec![amp; dim];
        for &(a, b) in g.edges() {
            let (ba, bb) = (bit_of(n, a), bit_of(n, b));
            for (k, v) in amplitudes.iter_mut().enumerate() {
                if k & ba != 0 && k & bb != 0 {
                    *v = -*v;
                }
            }
        }
        let mut state = Self {
            n_qubits: n,
            amplitudes,
        };
        for (q, lc) in g.local_cliffords().iter().enumerate() {
            if *lc == LocalClifford::Hadamard {
                state.apply_hadamard(q);
            }
        }
        Ok(state)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    fn apply_hadamard(&mut self, qubit: usize) {
        let bit = bit_of(self.n_qubits, qubit);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        for k in 0..self.amplitudes.len() {
            if k & bit == 0 {
                let (a0, a1) = (self.amplitudes[k], self.amplitudes[k | bit]);
                self.amplitudes[k] = (a0 + a1) * s;
                self.amplitudes[k | bit] = (a0 - a1) * s;
            }
        }
    }

    /// `P|ψ⟩` as a fresh amplitude vector.
    pub fn apply_pauli(&self, p: &PauliString) -> Result<Vec<Complex64>> {
        self.check_width(p)?;
        let (x, z) = index_masks(p);
        let mut out = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        for (k, a) in self.amplitudes.iter().enumerate() {
            out[k ^ x] = diagonal_factor(p, z, k) * a;
        }
        Ok(out)
    }

    /// `⟨ψ|P|ψ⟩`.
    pub fn expectation(&self, p: &PauliString) -> Result<Complex64> {
        self.check_width(p)?;
        let (x, z) = index_masks(p);
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(k, a)| self.amplitudes[k ^ x].conj() * diagonal_factor(p, z, k) * a)
            .sum())
    }

    /// `⟨ψ|φ⟩`.
    pub fn inner(&self, other: &[Complex64]) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(other)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Probability of outcome 1 for `(𝟙 + S)/2` on `λ𝟙/2^n + (1 − λ)|ψ⟩⟨ψ|`.
    pub fn outcome_probability(&self, lambda: f64, s: &PauliString) -> Result<f64> {
        let dim = (1u64 << self.n_qubits) as f64;
        let trace_term = pauli_trace(s)?.re / dim;
        let pure_term = self.expectation(s)?.re;
        Ok((1.0 + lambda * trace_term + (1.0 - lambda) * pure_term) / 2.0)
    }

    fn check_width(&self, p: &PauliString) -> Result<()> {
        if p.n_qubits() != self.n_qubits {
            return Err(Error::DimensionMismatch {
                left: self.n_qubits,
                right: p.n_qubits(),
            });
        }
        Ok(())
    }
}

/// `Tr[P]`, summed over the diagonal of the dense matrix.
pub fn pauli_trace(p: &PauliString) -> Result<Complex64> {
    check_size(p.n_qubits())?;
    let (x, z) = index_masks(p);
    if x != 0 {
        return Ok(Complex64::new(0.0, 0.0));
    }
    Ok((0..1usize << p.n_qubits())
        .map(|k| diagonal_factor(p, z, k))
        .sum())
}

/// Oracle for [`super::outcome_probability`] that evaluates
/// `(1 + λ Tr[S]/2^n + (1 − λ)⟨C|S|C⟩)/2` on the dense statevector.
pub fn outcome_probability_oracle(s: &NoisyState, obs_mask: u64) -> Result<f64> {
    let psi = DenseState::from_graph(s.target())?;
    let stabilizer = s.target().generators().element(obs_mask)?;
    psi.outcome_probability(s.lambda(), &stabilizer)
}

fn check_size(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_DENSE_QUBITS {
        return Err(Error::TooManyQubits {
            n_qubits,
            max: MAX_DENSE_QUBITS,
        });
    }
    Ok(())
}

fn bit_of(n_qubits: usize, qubit: usize) -> usize {
    1 << (n_qubits - 1 - qubit)
}

fn index_masks(p: &PauliString) -> (usize, usize) {
    let n = p.n_qubits();
    let mut x = 0;
    let mut z = 0;
    for q in 0..n {
        if (p.x_bits() >> q) & 1 == 1 {
            x |= bit_of(n, q);
        }
        if (p.z_bits() >> q) & 1 == 1 {
            z |= bit_of(n, q);
        }
    }
    (x, z)
}

/// The factor picked up by `|k⟩` under `i^phase ⊗ P_q`, written as
/// `i^(phase + #Y) X^x Z^z`.
fn diagonal_factor(p: &PauliString, z_index: usize, k: usize) -> Complex64 {
    let y_count = (p.x_bits() & p.z_bits()).count_ones();
    let parity = (z_index & k).count_ones();
    let power = (p.phase() as u32 + y_count + 2 * parity) % 4;
    Complex64::i().powu(power)
}
