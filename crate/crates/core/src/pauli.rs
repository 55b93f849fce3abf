//! Pauli strings in the symplectic `(x, z)` representation and stabilizer
//! groups built from independent commuting generators.
//!
//! A [`PauliString`] on `n` qubits stores one X bit and one Z bit per qubit
//! plus a global phase `i^k`, `k ∈ {0, 1, 2, 3}`. The operator it denotes is
//! `i^k · P_0 ⊗ P_1 ⊗ … ⊗ P_{n-1}` with each `P_q ∈ {I, X, Y, Z}` chosen by
//! the bit pair `(x_q, z_q)`. Hermitian strings are exactly those with an even
//! phase, and those are the only ones that carry a real [`Sign`].
//!
//! Qubit `q` lives at bit `q` of the masks, and the textual form lists qubit 0
//! first: `"+XZII"` is `X` on qubit 0 and `Z` on qubit 1.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Widest register a [`PauliString`] can hold.
pub const MAX_QUBITS: usize = 64;

/// Largest register for which [`StabilizerGroup::elements`] will materialize
/// the whole group.
pub const MAX_ENUMERATION_QUBITS: usize = 20;

/// A real sign, the exposed phase of a Hermitian Pauli string.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_f64(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: usize,
    x_bits: u64,
    z_bits: u64,
    /// Exponent of `i` in the global phase, modulo 4.
    phase: u8,
}

fn qubit_mask(n_qubits: usize) -> u64 {
    if n_qubits == MAX_QUBITS {
        u64::MAX
    } else {
        (1u64 << n_qubits) - 1
    }
}

fn check_width(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::InvalidQubitCount {
            n_qubits,
            max: MAX_QUBITS,
        });
    }
    Ok(())
}

impl PauliString {
    /// The identity on `n_qubits` qubits with sign `+1`.
    pub fn identity(n_qubits: usize) -> Result<Self> {
        Self::from_bits(n_qubits, 0, 0, Sign::Plus)
    }

    /// Builds a Hermitian string from its X and Z masks. A qubit with both
    /// bits set is a `Y`.
    pub fn from_bits(n_qubits: usize, x_bits: u64, z_bits: u64, sign: Sign) -> Result<Self> {
        check_width(n_qubits)?;
        let mask = qubit_mask(n_qubits);
        if x_bits & !mask != 0 || z_bits & !mask != 0 {
            return Err(Error::InvalidArgument(format!(
                "bit masks {x_bits:#x}/{z_bits:#x} exceed {n_qubits} qubits"
            )));
        }
        let phase = match sign {
            Sign::Plus => 0,
            Sign::Minus => 2,
        };
        Ok(Self {
            n_qubits,
            x_bits,
            z_bits,
            phase,
        })
    }

    /// A single-qubit operator `op ∈ {'I','X','Y','Z'}` on `qubit`, identity
    /// elsewhere.
    pub fn single(n_qubits: usize, qubit: usize, op: char) -> Result<Self> {
        check_width(n_qubits)?;
        if qubit >= n_qubits {
            return Err(Error::QubitOutOfRange { qubit, n_qubits });
        }
        let (x, z) = op_bits(op).ok_or_else(|| {
            Error::ParsePauli(format!("unknown single-qubit operator {op:?}"))
        })?;
        Self::from_bits(
            n_qubits,
            (x as u64) << qubit,
            (z as u64) << qubit,
            Sign::Plus,
        )
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn x_bits(&self) -> u64 {
        self.x_bits
    }

    pub fn z_bits(&self) -> u64 {
        self.z_bits
    }

    /// Exponent `k` of the global phase `i^k`.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase.is_multiple_of(2)
    }

    /// The real sign of a Hermitian string; an imaginary phase is an error.
    pub fn sign(&self) -> Result<Sign> {
        match self.phase {
            0 => Ok(Sign::Plus),
            2 => Ok(Sign::Minus),
            _ => Err(Error::ImaginaryPhase(self.to_string())),
        }
    }

    /// True when the tensor part is the identity, regardless of phase.
    pub fn is_identity_up_to_phase(&self) -> bool {
        self.x_bits == 0 && self.z_bits == 0
    }

    /// Number of qubits carrying a non-identity factor.
    pub fn weight(&self) -> u32 {
        (self.x_bits | self.z_bits).count_ones()
    }

    /// The single-qubit factor on `qubit` as one of `I`, `X`, `Y`, `Z`.
    pub fn op_at(&self, qubit: usize) -> char {
        let x = (self.x_bits >> qubit) & 1 == 1;
        let z = (self.z_bits >> qubit) & 1 == 1;
        match (x, z) {
            (false, false) => 'I',
            (true, false) => 'X',
            (true, true) => 'Y',
            (false, true) => 'Z',
        }
    }

    fn check_same_width(&self, other: &Self) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::DimensionMismatch {
                left: self.n_qubits,
                right: other.n_qubits,
            });
        }
        Ok(())
    }

    /// Operator product `self · other`, phase included.
    pub fn multiply(&self, other: &Self) -> Result<Self> {
        self.check_same_width(other)?;
        // Each Y is stored as i·XZ. Moving the Z block of `self` past the X
        // block of `other` costs a factor (-1) per overlapping qubit.
        let y_left = (self.x_bits & self.z_bits).count_ones();
        let y_right = (other.x_bits & other.z_bits).count_ones();
        let swaps = (self.z_bits & other.x_bits).count_ones();
        let x_bits = self.x_bits ^ other.x_bits;
        let z_bits = self.z_bits ^ other.z_bits;
        let y_out = (x_bits & z_bits).count_ones();
        let phase = (self.phase as u32 + other.phase as u32 + y_left + y_right + 2 * swaps
            + 4 * MAX_QUBITS as u32
            - y_out)
            % 4;
        Ok(Self {
            n_qubits: self.n_qubits,
            x_bits,
            z_bits,
            phase: phase as u8,
        })
    }

    /// True iff the symplectic inner product of the two strings is even.
    pub fn commutes(&self, other: &Self) -> Result<bool> {
        self.check_same_width(other)?;
        let overlap = (self.x_bits & other.z_bits).count_ones()
            + (self.z_bits & other.x_bits).count_ones();
        Ok(overlap.is_multiple_of(2))
    }

    /// Conjugates qubit `qubit` by a Hadamard: `X ↔ Z`, `Y → -Y`.
    pub fn conjugate_hadamard(&self, qubit: usize) -> Result<Self> {
        if qubit >= self.n_qubits {
            return Err(Error::QubitOutOfRange {
                qubit,
                n_qubits: self.n_qubits,
            });
        }
        let bit = 1u64 << qubit;
        let x = self.x_bits & bit;
        let z = self.z_bits & bit;
        let mut out = *self;
        out.x_bits = (self.x_bits & !bit) | if z != 0 { bit } else { 0 };
        out.z_bits = (self.z_bits & !bit) | if x != 0 { bit } else { 0 };
        if x != 0 && z != 0 {
            out.phase = (out.phase + 2) % 4;
        }
        Ok(out)
    }
}

fn op_bits(op: char) -> Option<(bool, bool)> {
    match op {
        'I' => Some((false, false)),
        'X' => Some((true, false)),
        'Y' => Some((true, true)),
        'Z' => Some((false, true)),
        _ => None,
    }
}

impl fmt::Display for PauliString {
    /// Renders `±[IXYZ]{n}`; imaginary phases render as `+i` / `-i`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = match self.phase {
            0 => "+",
            1 => "+i",
            2 => "-",
            _ => "-i",
        };
        f.write_str(prefix)?;
        for q in 0..self.n_qubits {
            write!(f, "{}", self.op_at(q))?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (mut phase, rest) = match s.as_bytes().first() {
            Some(b'+') => (0u8, &s[1..]),
            Some(b'-') => (2u8, &s[1..]),
            _ => (0u8, s),
        };
        let rest = match rest.strip_prefix('i') {
            Some(r) => {
                phase += 1;
                r
            }
            None => rest,
        };
        let n_qubits = rest.chars().count();
        check_width(n_qubits).map_err(|_| {
            Error::ParsePauli(format!("{s:?}: expected 1..={MAX_QUBITS} operators"))
        })?;
        let mut x_bits = 0u64;
        let mut z_bits = 0u64;
        for (q, c) in rest.chars().enumerate() {
            let (x, z) = op_bits(c)
                .ok_or_else(|| Error::ParsePauli(format!("{s:?}: bad operator {c:?}")))?;
            x_bits |= (x as u64) << q;
            z_bits |= (z as u64) << q;
        }
        Ok(Self {
            n_qubits,
            x_bits,
            z_bits,
            phase,
        })
    }
}

/// The abelian group generated by `n` independent, pairwise commuting,
/// Hermitian Pauli strings. Element `mask` is the product of the generators
/// whose bit is set in `mask`, taken in increasing index order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizerGroup {
    n_qubits: usize,
    generators: Vec<PauliString>,
}

impl StabilizerGroup {
    pub fn new(generators: Vec<PauliString>) -> Result<Self> {
        let n_qubits = generators
            .first()
            .map(PauliString::n_qubits)
            .ok_or_else(|| Error::InvalidArgument("empty generator list".into()))?;
        if generators.len() != n_qubits {
            return Err(Error::InvalidArgument(format!(
                "{} generators for {n_qubits} qubits",
                generators.len()
            )));
        }
        for (i, a) in generators.iter().enumerate() {
            a.sign()?;
            for b in &generators[i + 1..] {
                if !a.commutes(b)? {
                    return Err(Error::InvalidArgument(format!(
                        "generators {a} and {b} anticommute"
                    )));
                }
            }
        }
        if symplectic_rank(&generators) != n_qubits {
            return Err(Error::InvalidArgument(
                "generators are not independent".into(),
            ));
        }
        Ok(Self {
            n_qubits,
            generators,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    /// Number of group elements, `2^n`, when it fits in a `u64`.
    pub fn order(&self) -> Option<u64> {
        1u64.checked_shl(self.n_qubits as u32)
    }

    fn check_mask(&self, mask: u64) -> Result<()> {
        match self.order() {
            Some(order) if mask >= order => Err(Error::MaskOutOfRange {
                mask,
                n_qubits: self.n_qubits,
            }),
            _ => Ok(()),
        }
    }

    /// The group element selected by `mask`; mask 0 is the identity.
    pub fn element(&self, mask: u64) -> Result<PauliString> {
        self.check_mask(mask)?;
        let mut acc = PauliString::identity(self.n_qubits)?;
        let mut bits = mask;
        while bits != 0 {
            let k = bits.trailing_zeros() as usize;
            acc = acc.multiply(&self.generators[k])?;
            bits &= bits - 1;
        }
        // Commuting Hermitian factors always multiply to a Hermitian string.
        acc.sign()?;
        Ok(acc)
    }

    /// Every element in mask order. Refuses registers wider than
    /// [`MAX_ENUMERATION_QUBITS`].
    pub fn elements(&self) -> Result<Vec<PauliString>> {
        if self.n_qubits > MAX_ENUMERATION_QUBITS {
            return Err(Error::TooManyQubits {
                n_qubits: self.n_qubits,
                max: MAX_ENUMERATION_QUBITS,
            });
        }
        let order = 1usize << self.n_qubits;
        let mut out = Vec::with_capacity(order);
        out.push(PauliString::identity(self.n_qubits)?);
        // Gray-code style doubling: the elements for masks with top bit k are
        // the earlier ones times generator k.
        for (k, g) in self.generators.iter().enumerate() {
            for i in 0..(1usize << k) {
                let next = out[i].multiply(g)?;
                out.push(next);
            }
        }
        Ok(out)
    }
}

/// Rank over GF(2) of the `(x | z)` rows.
fn symplectic_rank(strings: &[PauliString]) -> usize {
    let mut rows: Vec<u128> = strings
        .iter()
        .map(|p| (p.x_bits as u128) | ((p.z_bits as u128) << 64))
        .collect();
    let mut rank = 0;
    for bit in 0..128 {
        let pivot = (rank..rows.len()).find(|&r| (rows[r] >> bit) & 1 == 1);
        let Some(p) = pivot else { continue };
        rows.swap(rank, p);
        let pivot_row = rows[rank];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && (*row >> bit) & 1 == 1 {
                *row ^= pivot_row;
            }
        }
        rank += 1;
        if rank == rows.len() {
            break;
        }
    }
    rank
}

#[cfg(test)]
pub(crate) mod dense_oracle {
    //! Dense `2^n × 2^n` matrices for checking the symplectic algebra.
    use num_complex::Complex64;

    use super::PauliString;

    pub type Matrix = Vec<Vec<Complex64>>;

    fn single(op: char) -> Matrix {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match op {
            'I' => vec![vec![l, o], vec![o, l]],
            'X' => vec![vec![o, l], vec![l, o]],
            'Y' => vec![vec![o, -i], vec![i, o]],
            'Z' => vec![vec![l, o], vec![o, -l]],
            _ => unreachable!(),
        }
    }

    fn kron(a: &Matrix, b: &Matrix) -> Matrix {
        let (ra, rb) = (a.len(), b.len());
        let mut out = vec![vec![Complex64::new(0.0, 0.0); ra * rb]; ra * rb];
        for i in 0..ra {
            for j in 0..ra {
                for k in 0..rb {
                    for l in 0..rb {
                        out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
                    }
                }
            }
        }
        out
    }

    /// Qubit 0 is the most significant tensor factor.
    pub fn matrix(p: &PauliString) -> Matrix {
        let mut m = single(p.op_at(0));
        for q in 1..p.n_qubits() {
            m = kron(&m, &single(p.op_at(q)));
        }
        let phase = Complex64::i().powu(p.phase() as u32);
        m.iter()
            .map(|row| row.iter().map(|v| v * phase).collect())
            .collect()
    }

    pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
        let n = a.len();
        let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; n];
        for i in 0..n {
            for k in 0..n {
                if a[i][k].norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out[i][j] += a[i][k] * b[k][j];
                }
            }
        }
        out
    }

    pub fn approx_eq(a: &Matrix, b: &Matrix) -> bool {
        a.iter()
            .zip(b)
            .all(|(ra, rb)| ra.iter().zip(rb).all(|(x, y)| (x - y).norm() < 1e-12))
    }
}

#[cfg(test)]
mod tests {
    use super::dense_oracle::{approx_eq, matmul, matrix};
    use super::*;
    use proptest::prelude::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn disjoint_supports_multiply_without_phase() {
        let prod = p("XI").multiply(&p("IX")).unwrap();
        assert_eq!(prod, p("+XX"));
        assert_eq!(prod.sign().unwrap(), Sign::Plus);
    }

    #[test]
    fn pauli_squares_to_identity() {
        for s in ["X", "Y", "Z", "-X", "XYZ"] {
            let a = p(s);
            let sq = a.multiply(&a).unwrap();
            assert!(sq.is_identity_up_to_phase());
            assert_eq!(sq.sign().unwrap(), Sign::Plus, "{s}");
        }
    }

    #[test]
    fn z_times_x_is_i_y() {
        let zx = p("Z").multiply(&p("X")).unwrap();
        assert_eq!(zx.to_string(), "+iY");
        assert!(zx.sign().is_err());
        assert!(approx_eq(
            &matrix(&zx),
            &matmul(&matrix(&p("Z")), &matrix(&p("X")))
        ));
        let sq = zx.multiply(&zx).unwrap();
        assert!(sq.is_identity_up_to_phase());
        assert_eq!(sq.sign().unwrap(), Sign::Minus);
        assert!(approx_eq(&matrix(&sq), &matmul(&matrix(&zx), &matrix(&zx))));
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        assert!(matches!(
            p("X").multiply(&p("XX")),
            Err(Error::DimensionMismatch { left: 1, right: 2 })
        ));
        assert!(p("X").commutes(&p("XX")).is_err());
    }

    #[test]
    fn commutation() {
        assert!(!p("XI").commutes(&p("ZI")).unwrap());
        assert!(p("XX").commutes(&p("ZZ")).unwrap());
        assert!(p("XYZ").commutes(&p("XYZ")).unwrap());
    }

    #[test]
    fn text_round_trip_and_errors() {
        for s in ["+XZII", "-YIZ", "+iX", "-iZZ"] {
            assert_eq!(p(s).to_string(), s);
        }
        assert_eq!(p("XZ").to_string(), "+XZ");
        assert!("+XQ".parse::<PauliString>().is_err());
        assert!("+".parse::<PauliString>().is_err());
    }

    #[test]
    fn hadamard_conjugation_matches_matrices() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for s in ["XZ", "YI", "ZY", "-YY"] {
            let a = p(s);
            let c = a.conjugate_hadamard(0).unwrap();
            // H ⊗ I acting by conjugation.
            let hm = {
                let c0 = num_complex::Complex64::new(h, 0.0);
                let id = matrix(&p("II"));
                let mut m = vec![vec![num_complex::Complex64::new(0.0, 0.0); 4]; 4];
                for i in 0..2 {
                    for j in 0..2 {
                        let hij = if i == 1 && j == 1 { -c0 } else { c0 };
                        for k in 0..2 {
                            for l in 0..2 {
                                m[i * 2 + k][j * 2 + l] = hij * id[k][l];
                            }
                        }
                    }
                }
                m
            };
            let expected = matmul(&matmul(&hm, &matrix(&a)), &hm);
            assert!(approx_eq(&matrix(&c), &expected), "{s} -> {c}");
        }
    }

    #[test]
    fn group_rejects_dependent_or_anticommuting_generators() {
        assert!(StabilizerGroup::new(vec![p("XI"), p("ZI")]).is_err());
        assert!(StabilizerGroup::new(vec![p("XX"), p("XX")]).is_err());
        assert!(StabilizerGroup::new(vec![p("XX")]).is_err());
        assert!(StabilizerGroup::new(vec![p("XZ"), p("ZX")]).is_ok());
    }

    #[test]
    fn group_element_masks() {
        let g = StabilizerGroup::new(vec![p("XZ"), p("ZX")]).unwrap();
        assert_eq!(g.element(0).unwrap(), p("+II"));
        assert_eq!(g.element(1).unwrap(), p("XZ"));
        assert_eq!(g.element(2).unwrap(), p("ZX"));
        assert_eq!(g.element(3).unwrap(), p("+YY"));
        assert!(matches!(
            g.element(4),
            Err(Error::MaskOutOfRange { mask: 4, .. })
        ));
    }

    #[test]
    fn enumeration_agrees_with_on_demand_elements() {
        let g = StabilizerGroup::new(vec![p("XZII"), p("ZXZI"), p("IZXZ"), p("IIZX")]).unwrap();
        let all = g.elements().unwrap();
        assert_eq!(all.len(), 16);
        for (mask, e) in all.iter().enumerate() {
            assert_eq!(*e, g.element(mask as u64).unwrap());
            assert_eq!(e.multiply(e).unwrap(), p("+IIII"));
        }
        let mut distinct = all.clone();
        distinct.sort_by_key(|e| (e.x_bits(), e.z_bits(), e.phase()));
        distinct.dedup();
        assert_eq!(distinct.len(), 16);
    }

    fn arb_pauli(n: usize) -> impl Strategy<Value = PauliString> {
        let mask = (1u64 << n) - 1;
        (any::<u64>(), any::<u64>(), 0u8..4).prop_map(move |(x, z, ph)| PauliString {
            n_qubits: n,
            x_bits: x & mask,
            z_bits: z & mask,
            phase: ph,
        })
    }

    proptest! {
        #[test]
        fn multiplication_is_associative(
            (a, b, c) in (1usize..=20).prop_flat_map(|n| (arb_pauli(n), arb_pauli(n), arb_pauli(n)))
        ) {
            let left = a.multiply(&b).unwrap().multiply(&c).unwrap();
            let right = a.multiply(&b.multiply(&c).unwrap()).unwrap();
            prop_assert_eq!(left, right);
        }

        #[test]
        fn multiplication_is_a_matrix_homomorphism(
            (a, b) in (1usize..=5).prop_flat_map(|n| (arb_pauli(n), arb_pauli(n)))
        ) {
            let prod = a.multiply(&b).unwrap();
            prop_assert!(approx_eq(&matrix(&prod), &matmul(&matrix(&a), &matrix(&b))));
        }

        #[test]
        fn commutes_matches_matrices(
            (a, b) in (1usize..=4).prop_flat_map(|n| (arb_pauli(n), arb_pauli(n)))
        ) {
            let ab = matmul(&matrix(&a), &matrix(&b));
            let ba = matmul(&matrix(&b), &matrix(&a));
            prop_assert_eq!(a.commutes(&b).unwrap(), approx_eq(&ab, &ba));
        }

        #[test]
        fn text_form_round_trips(a in (1usize..=30).prop_flat_map(arb_pauli)) {
            prop_assert_eq!(a.to_string().parse::<PauliString>().unwrap(), a);
        }
    }
}
