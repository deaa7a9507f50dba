//! Orthogonality of encoded sets, entanglement reports and canonicalization
//! of unentangled quantum fuzzy sets.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fuzzy::{oracle_distribution, FuzzySet};
use crate::qfs::{encode, QuantumFuzzySet};
use crate::statevec::{bloch_point, BlochPoint, QubitCap, StateVector, RANK_TOL};

/// Orthogonality threshold on inner products.
pub const ORTHOGONAL_TOL: f64 = 1e-10;

/// Largest universe [`sampling_vs_oracle`] accepts.
pub const SAMPLING_ORACLE_LIMIT: usize = 12;

/// Phases smaller than this in magnitude are reported as exactly zero.
const PHASE_SNAP: f64 = 1e-10;

/// `⟨s_f|s_g⟩ = ∏ᵢ [√(f(i)g(i)) + √((1−f(i))(1−g(i)))]`.
pub fn cfs_inner(f: &FuzzySet, g: &FuzzySet) -> Result<f64> {
    if f.universe_size() != g.universe_size() {
        return Err(Error::SizeMismatch { expected: f.universe_size(), found: g.universe_size() });
    }
    Ok(f.memberships()
        .iter()
        .zip(g.memberships())
        .map(|(&a, &b)| (a * b).sqrt() + ((1.0 - a) * (1.0 - b)).sqrt())
        .product())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalityVerdict {
    pub orthogonal: bool,
    /// An element where one set is exactly 0 and the other exactly 1.
    pub witness: Option<usize>,
    pub inner_product_value: Complex64,
}

/// Two encoded sets are orthogonal exactly when some element is crisply in
/// one and crisply out of the other.
pub fn check_orthogonality(f: &FuzzySet, g: &FuzzySet) -> Result<OrthogonalityVerdict> {
    let inner = cfs_inner(f, g)?;
    let witness = f
        .memberships()
        .iter()
        .zip(g.memberships())
        .position(|(&a, &b)| (a == 0.0 && b == 1.0) || (a == 1.0 && b == 0.0))
        .map(|i| i + 1);
    Ok(OrthogonalityVerdict {
        orthogonal: witness.is_some(),
        witness,
        inner_product_value: Complex64::new(inner, 0.0),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntanglementReport {
    /// Schmidt rank of each value qubit against the rest of the register.
    pub per_qubit_schmidt_ranks: Vec<usize>,
    pub is_product: bool,
    pub canonical_fuzzy_set: Option<FuzzySet>,
    /// Relative phase `arg(b) − arg(a)` of each factor `a|0⟩ + b|1⟩`, in
    /// `(−π, π]`.
    pub phases: Option<Vec<f64>>,
}

/// Splits a quantum fuzzy set into per-qubit Schmidt ranks and, when every
/// value qubit is unentangled, the fuzzy set reached by rotating each
/// factor back to the zero-phase meridian.
pub fn entanglement_report(q: &QuantumFuzzySet) -> EntanglementReport {
    let state = q.state();
    let values = q.value_qubits();
    let ranks: Vec<usize> = values
        .iter()
        .map(|&v| if state.n_qubits() == 1 { 1 } else { state.schmidt_rank(&[v]).expect("value qubit in range") })
        .collect();
    let is_product = ranks.iter().all(|&r| r == 1);
    if !is_product {
        return EntanglementReport { per_qubit_schmidt_ranks: ranks, is_product, canonical_fuzzy_set: None, phases: None };
    }
    let mut memberships = Vec::with_capacity(values.len());
    let mut phases = Vec::with_capacity(values.len());
    for &v in &values {
        let (_, p1, coherence) = state.reduced_qubit(v).expect("value qubit in range");
        memberships.push(p1.clamp(0.0, 1.0));
        phases.push(snap_phase(coherence));
    }
    EntanglementReport {
        per_qubit_schmidt_ranks: ranks,
        is_product,
        canonical_fuzzy_set: Some(FuzzySet::new(memberships).expect("clamped memberships")),
        phases: Some(phases),
    }
}

fn snap_phase(coherence: Complex64) -> f64 {
    if coherence.norm() <= RANK_TOL * RANK_TOL {
        return 0.0;
    }
    let mut phi = coherence.arg();
    if phi <= -std::f64::consts::PI {
        phi += 2.0 * std::f64::consts::PI;
    }
    if phi.abs() < PHASE_SNAP {
        0.0
    } else {
        phi
    }
}

/// Undoes recorded relative phases by applying `diag(1, e^{−iφ})` to each
/// value qubit.
pub fn remove_phases(q: &QuantumFuzzySet, phases: &[f64]) -> Result<StateVector> {
    let values = q.value_qubits();
    if phases.len() != values.len() {
        return Err(Error::SizeMismatch { expected: values.len(), found: phases.len() });
    }
    let mut state = q.state().clone();
    for (&v, &phi) in values.iter().zip(phases) {
        state.apply_single_in_place(&crate::statevec::SingleQubitGate::phase(-phi), v)?;
    }
    Ok(state)
}

/// Bloch coordinates of every value-qubit factor, when the value segment
/// is unentangled.
pub fn bloch_points(q: &QuantumFuzzySet) -> Option<Vec<BlochPoint>> {
    let report = entanglement_report(q);
    let set = report.canonical_fuzzy_set?;
    let phases = report.phases?;
    set.memberships()
        .iter()
        .zip(&phases)
        .map(|(&mu, &phi)| {
            let factor = StateVector::from_amplitudes(vec![
                Complex64::new((1.0 - mu).sqrt(), 0.0),
                Complex64::from_polar(mu.sqrt(), phi),
            ])
            .ok()?;
            bloch_point(&factor).ok()
        })
        .collect()
}

/// Total-variation distance between sampled measurements of `encode(f)` and
/// the exact crisp-subset distribution.
pub fn sampling_vs_oracle<R: Rng + ?Sized>(f: &FuzzySet, rng: &mut R, shots: u64) -> Result<f64> {
    if f.universe_size() > SAMPLING_ORACLE_LIMIT {
        return Err(Error::UniverseTooLarge { size: f.universe_size(), limit: SAMPLING_ORACLE_LIMIT });
    }
    let sampled = encode(f, QubitCap::default())?.state().sample_distribution(rng, shots)?;
    let exact = oracle_distribution(f)?;
    Ok(sampled.total_variation(&exact).clamp(0.0, 1.0))
}
