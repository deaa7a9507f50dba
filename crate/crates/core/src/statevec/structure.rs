use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{StateVector, RANK_TOL};
use crate::error::{Error, Result};

pub(super) fn schmidt_rank(state: &StateVector, left: &[usize]) -> Result<usize> {
    let n = state.n_qubits();
    if left.is_empty() || left.len() >= n {
        return Err(Error::InvalidBipartition(format!(
            "left side must be a nonempty proper subset of 1..={n}, got {left:?}"
        )));
    }
    let mut left_shifts = Vec::with_capacity(left.len());
    let mut seen = 0usize;
    for &q in left {
        let shift = state.shift_of(q)?;
        if seen & (1 << shift) != 0 {
            return Err(Error::InvalidBipartition(format!("qubit {q} listed twice")));
        }
        seen |= 1 << shift;
        left_shifts.push(shift);
    }
    let right_shifts: Vec<usize> = (0..n).rev().filter(|s| seen & (1 << s) == 0).collect();

    let rows = 1usize << left_shifts.len();
    let cols = 1usize << right_shifts.len();
    let amps = state.amplitudes();
    let gather = |index: usize, shifts: &[usize]| shifts.iter().fold(0, |acc, &s| (acc << 1) | (index >> s & 1));

    // Singular values are invariant under transposition; keep the short side
    // as rows so the decomposition works on the smaller Gram dimension.
    let (short, long, short_is_left) = if rows <= cols { (rows, cols, true) } else { (cols, rows, false) };
    let mut m = DMatrix::<Complex64>::zeros(short, long);
    for (i, a) in amps.iter().enumerate() {
        let (l, r) = (gather(i, &left_shifts), gather(i, &right_shifts));
        if short_is_left {
            m[(l, r)] = *a;
        } else {
            m[(r, l)] = *a;
        }
    }
    let singular = m.singular_values();
    Ok(singular.iter().filter(|&&s| s > RANK_TOL).count().max(1))
}

pub(super) fn reduced_qubit(state: &StateVector, q: usize) -> Result<(f64, f64, Complex64)> {
    let bit = 1usize << state.shift_of(q)?;
    let amps = state.amplitudes();
    let mut p0 = 0.0;
    let mut p1 = 0.0;
    let mut coherence = Complex64::new(0.0, 0.0);
    for (i, a) in amps.iter().enumerate() {
        if i & bit == 0 {
            let b = amps[i | bit];
            p0 += a.norm_sqr();
            p1 += b.norm_sqr();
            coherence += b * a.conj();
        }
    }
    let total = p0 + p1;
    Ok((p0 / total, p1 / total, coherence / total))
}

pub(super) fn factor_product_state(state: &StateVector, tol: f64) -> Option<Vec<StateVector>> {
    let n = state.n_qubits();
    if n > 1 {
        for q in 1..=n {
            if schmidt_rank(state, &[q]).ok()? != 1 {
                return None;
            }
        }
    }
    let factors: Vec<StateVector> = (1..=n)
        .map(|q| {
            let (p0, p1, coherence) = reduced_qubit(state, q).expect("qubit in range");
            let phase = if coherence.norm() > 0.0 { coherence / coherence.norm() } else { Complex64::new(1.0, 0.0) };
            let a0 = Complex64::new(p0.max(0.0).sqrt(), 0.0);
            let a1 = if p0 > 0.0 { phase * p1.max(0.0).sqrt() } else { Complex64::new(p1.max(0.0).sqrt(), 0.0) };
            StateVector::from_amplitudes(vec![a0, a1]).expect("two finite amplitudes")
        })
        .collect();

    let product = StateVector::tabulate(n, |i| {
        factors
            .iter()
            .enumerate()
            .fold(Complex64::new(1.0, 0.0), |acc, (k, f)| acc * f.amplitude(i >> (n - 1 - k) & 1))
    });
    let scale = state.norm();
    let target = StateVector::tabulate(n, |i| state.amplitude(i) / scale);
    match target.distance_up_to_phase(&product) {
        Ok(d) if d <= tol => Some(factors),
        _ => None,
    }
}

/// Cartesian coordinates on the Bloch sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochPoint {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

/// Bloch coordinates of a single-qubit state.
///
/// For `cos θ|0⟩ + e^{iφ} sin θ|1⟩` (after removing the global phase of the
/// `|0⟩` coefficient) this is `(sin 2θ cos φ, sin 2θ sin φ, cos 2θ)`,
/// evaluated as `x + iy = 2·conj(a)·b`, `z = |a|² − |b|²` so that no
/// trigonometric round trip is involved. Any phase is accepted.
pub fn bloch_point(q: &StateVector) -> Result<BlochPoint> {
    if q.n_qubits() != 1 {
        return Err(Error::SizeMismatch { expected: 1, found: q.n_qubits() });
    }
    let norm = q.norm();
    if norm < super::DEGENERATE_NORM {
        return Err(Error::DegenerateState(norm));
    }
    let a = q.amplitude(0) / norm;
    let b = q.amplitude(1) / norm;
    let xy = 2.0 * a.conj() * b;
    Ok(BlochPoint { x: xy.re, y: xy.im, z: a.norm_sqr() - b.norm_sqr() })
}
