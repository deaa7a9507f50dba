//! Quantum fuzzy sets: encoded fuzzy sets, connectives as gates, the
//! square fuzzifier, the centre-of-mass defuzzifier and superpositions.

mod layout;
mod oracle;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuzzy::{CrispSubset, FuzzySet};
use crate::statevec::{QubitCap, SingleQubitGate, StateVector, UNITARY_TOL};

pub use layout::{RegisterLayout, Segment};
pub use oracle::{apply_com_oracle, com_readout, defuzzify, fuz_isometry, fuz_linear, fuz_window, u_com};

/// A normalized register state together with the layout that says which
/// qubits carry the set's value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "QfsRepr", into = "QfsRepr")]
pub struct QuantumFuzzySet {
    state: StateVector,
    layout: RegisterLayout,
}

#[derive(Serialize, Deserialize)]
struct QfsRepr {
    layout: RegisterLayout,
    universe_size: usize,
    amplitudes: Vec<[f64; 2]>,
}

impl TryFrom<QfsRepr> for QuantumFuzzySet {
    type Error = Error;

    fn try_from(r: QfsRepr) -> Result<Self> {
        let amps = r.amplitudes.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        let q = QuantumFuzzySet::new(StateVector::from_amplitudes(amps)?, r.layout)?;
        if q.universe_size() != r.universe_size {
            return Err(Error::SizeMismatch { expected: r.universe_size, found: q.universe_size() });
        }
        Ok(q)
    }
}

impl From<QuantumFuzzySet> for QfsRepr {
    fn from(q: QuantumFuzzySet) -> Self {
        QfsRepr {
            universe_size: q.universe_size(),
            amplitudes: q.state.amplitudes().iter().map(|a| [a.re, a.im]).collect(),
            layout: q.layout,
        }
    }
}

impl QuantumFuzzySet {
    /// Checks that the layout covers the register and the state has unit
    /// norm (within 1e-10).
    pub fn new(state: StateVector, layout: RegisterLayout) -> Result<Self> {
        if layout.total_qubits() != state.n_qubits() {
            return Err(Error::SizeMismatch { expected: layout.total_qubits(), found: state.n_qubits() });
        }
        let norm = state.norm();
        if (norm - 1.0).abs() > UNITARY_TOL {
            return Err(Error::DegenerateState(norm));
        }
        Ok(QuantumFuzzySet { state, layout })
    }

    /// A bare `N`-qubit register whose single segment is the value.
    pub fn from_state(state: StateVector) -> Result<Self> {
        let layout = RegisterLayout::single("value", state.n_qubits())?;
        Self::new(state, layout)
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    pub fn layout(&self) -> &RegisterLayout {
        &self.layout
    }

    pub fn into_state(self) -> StateVector {
        self.state
    }

    pub fn universe_size(&self) -> usize {
        self.layout.value_segment().len
    }

    pub fn total_qubits(&self) -> usize {
        self.state.n_qubits()
    }

    pub fn value_qubits(&self) -> Vec<usize> {
        self.layout.value_qubits()
    }

    /// Probability that each value qubit reads 1.
    pub fn value_marginals(&self) -> Vec<f64> {
        self.value_qubits()
            .into_iter()
            .map(|q| self.state.qubit_probability(q).expect("value qubit in range"))
            .collect()
    }
}

/// Real rotation about the y axis with `G|0⟩ = √(1−p)|0⟩ + √p|1⟩`, i.e. by
/// the angle `2·asin(√p)`.
pub fn rotation_gate(p: f64) -> Result<SingleQubitGate> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidMembership { element: 0, value: p });
    }
    let (c, s) = ((1.0 - p).sqrt(), p.sqrt());
    SingleQubitGate::from_real([[c, -s], [s, c]])
}

/// Prepares `|s_f⟩` by rotating each qubit of `|0…0⟩` with
/// [`rotation_gate`]`(f(i))`.
pub fn encode(f: &FuzzySet, cap: QubitCap) -> Result<QuantumFuzzySet> {
    let mut state = StateVector::ground_state(f.universe_size(), cap)?;
    for (i, &m) in f.memberships().iter().enumerate() {
        state.apply_single_in_place(&rotation_gate(m)?, i + 1)?;
    }
    QuantumFuzzySet::from_state(state)
}

/// Amplitude of the crisp subset `s` in `|s_f⟩`.
pub fn expansion_coeff(f: &FuzzySet, s: &CrispSubset) -> Result<f64> {
    if f.universe_size() != s.universe_size() {
        return Err(Error::SizeMismatch { expected: f.universe_size(), found: s.universe_size() });
    }
    Ok(f.memberships()
        .iter()
        .zip(s.bits())
        .map(|(&m, &b)| if b { m.sqrt() } else { (1.0 - m).sqrt() })
        .product())
}

/// NOT on every value qubit.
pub fn qnot(q: &QuantumFuzzySet) -> QuantumFuzzySet {
    let mut state = q.state.clone();
    let x = SingleQubitGate::not();
    for v in q.value_qubits() {
        state.apply_single_in_place(&x, v).expect("value qubit in range");
    }
    QuantumFuzzySet { state, layout: q.layout.clone() }
}

/// Toffoli AND: `a ⊗ b ⊗ |0^N⟩` followed by one Toffoli per element with
/// controls on the two value qubits and the target in the new `out`
/// segment. Both inputs stay in the register.
pub fn qand(a: &QuantumFuzzySet, b: &QuantumFuzzySet, cap: QubitCap) -> Result<QuantumFuzzySet> {
    let (mut state, layout) = and_register(a, b, cap)?;
    toffoli_layer(&mut state, &layout);
    QuantumFuzzySet::new(state, layout)
}

/// OR as `¬(¬a ∧ ¬b)`. The input value qubits are flipped back after the
/// Toffoli layer so the retained inputs still hold `a` and `b`.
pub fn qor(a: &QuantumFuzzySet, b: &QuantumFuzzySet, cap: QubitCap) -> Result<QuantumFuzzySet> {
    let (mut state, layout) = and_register(a, b, cap)?;
    let x = SingleQubitGate::not();
    let inputs = input_value_qubits(&layout);
    for &q in &inputs {
        state.apply_single_in_place(&x, q)?;
    }
    toffoli_layer(&mut state, &layout);
    for q in layout.value_qubits().into_iter().chain(inputs) {
        state.apply_single_in_place(&x, q)?;
    }
    QuantumFuzzySet::new(state, layout)
}

fn and_register(a: &QuantumFuzzySet, b: &QuantumFuzzySet, cap: QubitCap) -> Result<(StateVector, RegisterLayout)> {
    let n = a.universe_size();
    if b.universe_size() != n {
        return Err(Error::SizeMismatch { expected: n, found: b.universe_size() });
    }
    cap.check(a.total_qubits() + b.total_qubits() + n)?;
    let layout = RegisterLayout::joined(&a.layout, &b.layout)?.with_appended("out", n)?;
    let state = a.state.tensor(&b.state, cap)?.pad_zeros(n, cap)?;
    Ok((state, layout))
}

/// Value qubits of the two operands inside a joined layout.
fn input_value_qubits(layout: &RegisterLayout) -> Vec<usize> {
    let segs = layout.segments();
    let out = &segs[segs.len() - 1];
    // The operand value segments are the last `a.` and last `b.` segments.
    let last_a = segs.iter().rev().find(|s| s.name.starts_with("a.")).expect("a segment");
    let last_b = segs.iter().rev().find(|s| s.name.starts_with("b.")).expect("b segment");
    debug_assert_eq!(last_a.len, out.len);
    last_a.qubits().chain(last_b.qubits()).collect()
}

fn toffoli_layer(state: &mut StateVector, layout: &RegisterLayout) {
    let inputs = input_value_qubits(layout);
    let n = layout.value_segment().len;
    let x = SingleQubitGate::not();
    for (i, target) in layout.value_qubits().into_iter().enumerate() {
        state
            .apply_controlled_in_place(&x, &[inputs[i], inputs[n + i]], target)
            .expect("distinct qubits in range");
    }
}

/// Result of [`superpose`]: the renormalized set and the norm of the raw
/// linear combination.
#[derive(Debug, Clone, PartialEq)]
pub struct Superposition {
    pub set: QuantumFuzzySet,
    pub raw_norm: f64,
}

/// `Σ cᵢ |s_{fᵢ}⟩`, renormalized.
pub fn superpose(terms: &[(Complex64, FuzzySet)], cap: QubitCap) -> Result<Superposition> {
    let (_, first) = terms.first().ok_or(Error::EmptySuperposition)?;
    let n = first.universe_size();
    cap.check(n)?;
    let mut acc = vec![Complex64::new(0.0, 0.0); 1 << n];
    for (c, f) in terms {
        if f.universe_size() != n {
            return Err(Error::SizeMismatch { expected: n, found: f.universe_size() });
        }
        let encoded = encode(f, cap)?;
        for (a, x) in acc.iter_mut().zip(encoded.state.amplitudes()) {
            *a += c * x;
        }
    }
    let raw = StateVector::from_amplitudes(acc)?;
    let raw_norm = raw.norm();
    let set = QuantumFuzzySet::from_state(raw.normalized()?)?;
    Ok(Superposition { set, raw_norm })
}
