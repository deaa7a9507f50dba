//! Dense state vectors over an n-qubit register.
//!
//! Qubits are labelled `1..=n`. Qubit `q` is the `(q - 1)`-th most
//! significant bit of the basis index, so `|110⟩` is index `0b110` and
//! corresponds to the crisp subset `{1, 2}` of a three-element universe.

pub mod kernels;
mod structure;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::outcome::OutcomeDistribution;

pub use structure::{bloch_point, BlochPoint};

/// Register capacity used when nothing else is configured.
pub const DEFAULT_QUBIT_CAP: usize = 24;

/// Tolerance for unitarity and normalization checks.
pub const UNITARY_TOL: f64 = 1e-10;

/// Singular values at or below this are treated as zero.
pub const RANK_TOL: f64 = 1e-8;

/// Norms below this are treated as zero.
pub const DEGENERATE_NORM: f64 = 1e-10;

/// Upper bound on the number of qubits a construction may allocate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QubitCap(pub usize);

impl Default for QubitCap {
    fn default() -> Self {
        QubitCap(DEFAULT_QUBIT_CAP)
    }
}

impl QubitCap {
    pub fn check(self, requested: usize) -> Result<()> {
        if requested > self.0 {
            Err(Error::CapExceeded { requested, cap: self.0 })
        } else {
            Ok(())
        }
    }
}

/// A 2×2 unitary, rows and columns ordered `(|0⟩, |1⟩)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SingleQubitGate {
    matrix: kernels::Matrix2,
}

impl SingleQubitGate {
    /// Validates unitarity (`‖M·M† − I‖∞ ≤ 1e-10`).
    pub fn new(matrix: [[Complex64; 2]; 2]) -> Result<Self> {
        let mut worst: f64 = 0.0;
        for r in 0..2 {
            for c in 0..2 {
                let dot = matrix[r][0] * matrix[c][0].conj() + matrix[r][1] * matrix[c][1].conj();
                let expected = if r == c { 1.0 } else { 0.0 };
                worst = worst.max((dot - expected).norm());
            }
        }
        if !worst.is_finite() || worst > UNITARY_TOL {
            return Err(Error::NonUnitary(worst));
        }
        Ok(SingleQubitGate { matrix })
    }

    pub fn from_real(m: [[f64; 2]; 2]) -> Result<Self> {
        let c = |x: f64| Complex64::new(x, 0.0);
        Self::new([[c(m[0][0]), c(m[0][1])], [c(m[1][0]), c(m[1][1])]])
    }

    pub fn identity() -> Self {
        Self::from_real([[1.0, 0.0], [0.0, 1.0]]).expect("identity is unitary")
    }

    /// Pauli-X, the NOT gate.
    pub fn not() -> Self {
        Self::from_real([[0.0, 1.0], [1.0, 0.0]]).expect("X is unitary")
    }

    pub fn hadamard() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        Self::from_real([[h, h], [h, -h]]).expect("H is unitary")
    }

    /// Diagonal phase gate `diag(1, e^{iφ})`.
    pub fn phase(phi: f64) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        Self::new([[one, zero], [zero, Complex64::from_polar(1.0, phi)]]).expect("phase is unitary")
    }

    pub fn matrix(&self) -> &[[Complex64; 2]; 2] {
        &self.matrix
    }

    /// Image of `|0⟩`, i.e. the first column.
    pub fn apply_to_zero(&self) -> [Complex64; 2] {
        [self.matrix[0][0], self.matrix[1][0]]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩` on `n_qubits` qubits.
    pub fn ground_state(n_qubits: usize, cap: QubitCap) -> Result<Self> {
        Self::basis_state_index(n_qubits, 0, cap)
    }

    /// The computational basis state with the given basis index.
    pub fn basis_state_index(n_qubits: usize, index: usize, cap: QubitCap) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::EmptyRegister);
        }
        cap.check(n_qubits)?;
        let len = 1usize << n_qubits;
        if index >= len {
            return Err(Error::InvalidBitstring(format!("index {index} on {n_qubits} qubits")));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); len];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(StateVector { n_qubits, amps })
    }

    /// The computational basis state `|bits⟩`, qubit 1 first.
    pub fn basis_state(bits: &[bool], cap: QubitCap) -> Result<Self> {
        Self::basis_state_index(bits.len(), bits_to_index(bits), cap)
    }

    /// Wraps raw amplitudes without normalizing them. The length must be a
    /// power of two and every entry finite.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        let len = amps.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::BadAmplitudeLength(len));
        }
        if let Some(i) = amps.iter().position(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite(i));
        }
        Ok(StateVector { n_qubits: len.trailing_zeros() as usize, amps })
    }

    /// Builds a state from an amplitude function over basis indices.
    pub(crate) fn tabulate<F>(n_qubits: usize, amp: F) -> Self
    where
        F: Fn(usize) -> Complex64 + Sync + Send,
    {
        StateVector { n_qubits, amps: kernels::tabulate(1 << n_qubits, amp) }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.amps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.amps.is_empty()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amps
    }

    pub fn amplitude(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm(&self) -> f64 {
        kernels::norm_sqr(&self.amps).sqrt()
    }

    /// Rescales to unit norm, failing on (numerically) zero vectors.
    pub fn normalized(mut self) -> Result<Self> {
        let norm = self.norm();
        if norm < DEGENERATE_NORM {
            return Err(Error::DegenerateState(norm));
        }
        kernels::scale(&mut self.amps, 1.0 / norm);
        Ok(self)
    }

    /// LSB shift of the bit that stores qubit `q`.
    pub fn shift_of(&self, q: usize) -> Result<usize> {
        if q == 0 || q > self.n_qubits {
            return Err(Error::QubitOutOfRange { index: q, n_qubits: self.n_qubits });
        }
        Ok(self.n_qubits - q)
    }

    pub fn apply_single(&self, gate: &SingleQubitGate, target: usize) -> Result<Self> {
        let mut out = self.clone();
        out.apply_single_in_place(gate, target)?;
        Ok(out)
    }

    pub fn apply_single_in_place(&mut self, gate: &SingleQubitGate, target: usize) -> Result<()> {
        let shift = self.shift_of(target)?;
        kernels::apply_controlled(&mut self.amps, 0, shift, &gate.matrix);
        Ok(())
    }

    /// Applies `gate` to `target` on the basis components where every
    /// control qubit is 1.
    pub fn apply_controlled(&self, gate: &SingleQubitGate, controls: &[usize], target: usize) -> Result<Self> {
        let mut out = self.clone();
        out.apply_controlled_in_place(gate, controls, target)?;
        Ok(out)
    }

    pub fn apply_controlled_in_place(
        &mut self,
        gate: &SingleQubitGate,
        controls: &[usize],
        target: usize,
    ) -> Result<()> {
        let shift = self.shift_of(target)?;
        let mut mask = 0usize;
        for &c in controls {
            let bit = 1usize << self.shift_of(c)?;
            if c == target || mask & bit != 0 {
                return Err(Error::QubitCollision(c));
            }
            mask |= bit;
        }
        kernels::apply_controlled(&mut self.amps, mask, shift, &gate.matrix);
        Ok(())
    }

    /// `⟨self|other⟩`, conjugate-linear in `self`.
    pub fn inner_product(&self, other: &StateVector) -> Result<Complex64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::SizeMismatch { expected: self.n_qubits, found: other.n_qubits });
        }
        Ok(kernels::inner_product(&self.amps, &other.amps))
    }

    pub fn basis_probability(&self, bits: &[bool]) -> Result<f64> {
        if bits.len() != self.n_qubits {
            return Err(Error::SizeMismatch { expected: self.n_qubits, found: bits.len() });
        }
        Ok(self.amps[bits_to_index(bits)].norm_sqr())
    }

    /// Tensor product `self ⊗ other`; `self` occupies the leading qubits.
    pub fn tensor(&self, other: &StateVector, cap: QubitCap) -> Result<Self> {
        let n = self.n_qubits + other.n_qubits;
        cap.check(n)?;
        let shift = other.n_qubits;
        let low = (1usize << shift) - 1;
        Ok(Self::tabulate(n, |i| self.amps[i >> shift] * other.amps[i & low]))
    }

    /// Appends `extra` qubits in `|0⟩` after the existing ones.
    pub fn pad_zeros(&self, extra: usize, cap: QubitCap) -> Result<Self> {
        let n = self.n_qubits + extra;
        cap.check(n)?;
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n];
        for (i, a) in self.amps.iter().enumerate() {
            amps[i << extra] = *a;
        }
        Ok(StateVector { n_qubits: n, amps })
    }

    /// Probability that qubit `q` reads 1.
    pub fn qubit_probability(&self, q: usize) -> Result<f64> {
        let shift = self.shift_of(q)?;
        let bit = 1usize << shift;
        let total = kernels::norm_sqr(&self.amps);
        let ones: f64 = self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit != 0)
            .map(|(_, a)| a.norm_sqr())
            .sum();
        Ok(ones / total)
    }

    /// Born distribution of the listed qubits, indexed by the outcome
    /// integer whose most significant bit is `targets[0]`.
    pub fn marginal_probabilities(&self, targets: &[usize]) -> Result<Vec<f64>> {
        let shifts = self.distinct_shifts(targets)?;
        let mut probs = vec![0.0; 1 << shifts.len()];
        for (i, a) in self.amps.iter().enumerate() {
            probs[gather_bits(i, &shifts)] += a.norm_sqr();
        }
        let total: f64 = probs.iter().sum();
        if total < DEGENERATE_NORM * DEGENERATE_NORM {
            return Err(Error::DegenerateState(total.sqrt()));
        }
        probs.iter_mut().for_each(|p| *p /= total);
        Ok(probs)
    }

    fn distinct_shifts(&self, targets: &[usize]) -> Result<Vec<usize>> {
        let mut seen = 0usize;
        targets
            .iter()
            .map(|&q| {
                let shift = self.shift_of(q)?;
                if seen & (1 << shift) != 0 {
                    return Err(Error::QubitCollision(q));
                }
                seen |= 1 << shift;
                Ok(shift)
            })
            .collect()
    }

    /// Measures `targets` in the computational basis. Returns the outcome
    /// bits (in `targets` order) and the renormalized post-measurement
    /// state.
    pub fn measure_qubits<R: Rng + ?Sized>(&self, targets: &[usize], rng: &mut R) -> Result<(Vec<bool>, StateVector)> {
        let norm = self.norm();
        if norm < DEGENERATE_NORM {
            return Err(Error::DegenerateState(norm));
        }
        let shifts = self.distinct_shifts(targets)?;
        let probs = self.marginal_probabilities(targets)?;
        let cumulative = cumulate(&probs);
        let outcome = kernels::locate(&cumulative, &[rng.random::<f64>() * cumulative[cumulative.len() - 1]])[0];

        let kept = probs[outcome];
        let scale = 1.0 / (kept.sqrt() * norm);
        let zero = Complex64::new(0.0, 0.0);
        let collapsed = Self::tabulate(self.n_qubits, |i| {
            if gather_bits(i, &shifts) == outcome {
                self.amps[i] * scale
            } else {
                zero
            }
        });
        let bits = (0..targets.len()).map(|k| outcome >> (targets.len() - 1 - k) & 1 == 1).collect();
        Ok((bits, collapsed))
    }

    /// Draws `shots` full-register measurements; counts are keyed by
    /// bitstring, qubit 1 leftmost.
    pub fn sample_distribution<R: Rng + ?Sized>(&self, rng: &mut R, shots: u64) -> Result<OutcomeDistribution> {
        if shots == 0 {
            return Err(Error::ZeroShots);
        }
        let probs: Vec<f64> = self.amps.iter().map(|a| a.norm_sqr()).collect();
        let n = self.n_qubits;
        let counts = sample_indices(&probs, rng, shots)?;
        Ok(OutcomeDistribution::from_counts(
            shots,
            counts.into_iter().map(|(i, c)| (index_to_bitstring(i, n), c)),
        ))
    }

    /// Rank of the coefficient matrix across the cut `left | rest`.
    pub fn schmidt_rank(&self, left: &[usize]) -> Result<usize> {
        structure::schmidt_rank(self, left)
    }

    /// Single-qubit factors whose tensor product reproduces the state (up
    /// to global phase), or `None` when the state is entangled.
    pub fn factor_product_state(&self, tol: f64) -> Option<Vec<StateVector>> {
        structure::factor_product_state(self, tol)
    }

    /// Reduced density matrix of one qubit as `(ρ00, ρ11, ρ10)`.
    pub fn reduced_qubit(&self, q: usize) -> Result<(f64, f64, Complex64)> {
        structure::reduced_qubit(self, q)
    }

    /// Largest entrywise distance `|self_i − other_i|`.
    pub fn max_abs_diff(&self, other: &StateVector) -> Result<f64> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::SizeMismatch { expected: self.n_qubits, found: other.n_qubits });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Entrywise distance after aligning `other`'s global phase to `self`.
    pub fn distance_up_to_phase(&self, other: &StateVector) -> Result<f64> {
        let overlap = other.inner_product(self)?;
        let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { Complex64::new(1.0, 0.0) };
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b * phase).norm())
            .fold(0.0, f64::max))
    }
}

fn gather_bits(index: usize, shifts: &[usize]) -> usize {
    shifts.iter().fold(0, |acc, &s| (acc << 1) | (index >> s & 1))
}

pub(crate) fn cumulate(weights: &[f64]) -> Vec<f64> {
    let mut acc = 0.0;
    weights
        .iter()
        .map(|w| {
            acc += w;
            acc
        })
        .collect()
}

/// Samples `shots` indices from unnormalized `weights`, returning sorted
/// `(index, count)` pairs. Uniform draws are taken sequentially from `rng`
/// so the result depends only on the seed.
pub(crate) fn sample_indices<R: Rng + ?Sized>(weights: &[f64], rng: &mut R, shots: u64) -> Result<Vec<(usize, u64)>> {
    let cumulative = cumulate(weights);
    let total = cumulative.last().copied().unwrap_or(0.0);
    if total.is_nan() || total <= DEGENERATE_NORM * DEGENERATE_NORM {
        return Err(Error::DegenerateState(total.max(0.0).sqrt()));
    }
    let draws: Vec<f64> = (0..shots).map(|_| rng.random::<f64>() * total).collect();
    let mut hits = kernels::locate(&cumulative, &draws);
    hits.sort_unstable();
    let mut counts: Vec<(usize, u64)> = Vec::new();
    for h in hits {
        match counts.last_mut() {
            Some((i, c)) if *i == h => *c += 1,
            _ => counts.push((h, 1)),
        }
    }
    Ok(counts)
}

/// Basis index of a bitstring, first bit most significant.
pub fn bits_to_index(bits: &[bool]) -> usize {
    bits.iter().fold(0, |acc, &b| (acc << 1) | b as usize)
}

pub fn index_to_bits(index: usize, n: usize) -> Vec<bool> {
    (0..n).map(|k| index >> (n - 1 - k) & 1 == 1).collect()
}

pub fn index_to_bitstring(index: usize, n: usize) -> String {
    (0..n).map(|k| if index >> (n - 1 - k) & 1 == 1 { '1' } else { '0' }).collect()
}

/// Parses a `0`/`1` string, first character = qubit 1.
pub fn parse_bitstring(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::InvalidBitstring(s.to_string())),
        })
        .collect()
}
