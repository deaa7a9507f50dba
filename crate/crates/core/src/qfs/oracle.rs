//! Square-window fuzzification and centre-of-mass defuzzification.

use num_complex::Complex64;
use rand::Rng;

use super::QuantumFuzzySet;
use crate::error::{Error, Result};
use crate::fuzzy::{com_index, CrispSubset};
use crate::outcome::OutcomeDistribution;
use crate::statevec::{kernels, sample_indices, QubitCap, StateVector, DEGENERATE_NORM};

/// Bits within distance `k` of some set bit of `bits` (an `n`-bit mask).
pub fn fuz_window(bits: usize, k: usize, n: usize) -> usize {
    let full = if n == usize::BITS as usize { usize::MAX } else { (1usize << n) - 1 };
    let mut window = bits;
    for d in 1..=k.min(n) {
        window |= (bits << d) | (bits >> d);
    }
    window & full
}

/// Adds `scale · 2^{-|window|/2}` to every `out[base | sub]` with `sub ⊆ window`.
fn spread(out: &mut [Complex64], base: usize, window: usize, scale: Complex64) {
    let amp = scale * 0.5f64.powf(window.count_ones() as f64 / 2.0);
    let mut sub = window;
    loop {
        out[base | sub] += amp;
        if sub == 0 {
            break;
        }
        sub = (sub - 1) & window;
    }
}

/// The linear (non-unitary) fuzzifier: basis state `|α⟩` goes to the product
/// state with `(|0⟩+|1⟩)/√2` on every qubit within distance `k` of a set bit
/// of `α` and `|0⟩` elsewhere.
///
/// With `renormalize` the image is scaled to unit norm; an image that
/// cancels to zero is reported as [`Error::DegenerateState`].
pub fn fuz_linear(state: &StateVector, k: usize, renormalize: bool) -> Result<StateVector> {
    let n = state.n_qubits();
    // Images depend only on the window, so collect amplitude per window first.
    let mut by_window = vec![Complex64::new(0.0, 0.0); 1 << n];
    for (alpha, a) in state.amplitudes().iter().enumerate() {
        if *a != Complex64::new(0.0, 0.0) {
            by_window[fuz_window(alpha, k, n)] += a;
        }
    }
    let mut out = vec![Complex64::new(0.0, 0.0); 1 << n];
    for (window, c) in by_window.iter().enumerate() {
        if *c != Complex64::new(0.0, 0.0) {
            spread(&mut out, 0, window, *c);
        }
    }
    let image = StateVector::from_amplitudes(out)?;
    if renormalize {
        let norm = image.norm();
        if norm < DEGENERATE_NORM {
            return Err(Error::DegenerateState(norm));
        }
        return image.normalized();
    }
    Ok(image)
}

/// Fuzzifier that keeps its input: appends `N` fresh qubits and maps
/// `|α⟩|0^N⟩ ↦ |α⟩ ⊗ FUZ|α⟩`, `α` being the value bits. Images of distinct
/// `α` stay orthogonal, so this is an isometry on the padded subspace. The
/// appended segment `fuz` becomes the value.
pub fn fuz_isometry(q: &QuantumFuzzySet, k: usize, cap: QubitCap) -> Result<QuantumFuzzySet> {
    let n_val = q.universe_size();
    let n_in = q.total_qubits();
    cap.check(n_in + n_val)?;
    let value_shifts: Vec<usize> = q.value_qubits().iter().map(|&v| n_in - v).collect();

    let mut out = vec![Complex64::new(0.0, 0.0); 1 << (n_in + n_val)];
    for (i, a) in q.state().amplitudes().iter().enumerate() {
        if *a != Complex64::new(0.0, 0.0) {
            let alpha = value_shifts.iter().fold(0, |acc, &s| (acc << 1) | (i >> s & 1));
            spread(&mut out, i << n_val, fuz_window(alpha, k, n_val), *a);
        }
    }
    let layout = q.layout().with_appended("fuz", n_val)?;
    QuantumFuzzySet::new(StateVector::from_amplitudes(out)?, layout)
}

/// One-hot mask (over `n` bits, element 1 most significant) of the centre
/// of mass of the `n`-bit subset `u`; zero for the empty subset.
fn com_mask(u: usize, n: usize) -> usize {
    match com_index(&CrispSubset::from_index(n, u)) {
        0 => 0,
        c => 1 << (n - c),
    }
}

/// Reversible centre-of-mass oracle `|u⟩|v⟩ ↦ |u⟩|v ⊕ COM(u)⟩` with `u`
/// read from `input` and `v` from `output` (1-based qubit lists of equal
/// length, first = element 1). Self-inverse.
pub fn apply_com_oracle(state: &StateVector, input: &[usize], output: &[usize]) -> Result<StateVector> {
    if input.len() != output.len() {
        return Err(Error::SizeMismatch { expected: input.len(), found: output.len() });
    }
    let n = input.len();
    let mut used = 0usize;
    let mut shift_list = |qs: &[usize]| -> Result<Vec<usize>> {
        qs.iter()
            .map(|&q| {
                let s = state.shift_of(q)?;
                if used & (1 << s) != 0 {
                    return Err(Error::QubitCollision(q));
                }
                used |= 1 << s;
                Ok(s)
            })
            .collect()
    };
    let in_shifts = shift_list(input)?;
    let out_shifts = shift_list(output)?;

    // COM values tabulated once per input pattern, then scattered onto the
    // output bit positions.
    let flips: Vec<usize> = (0..1usize << n)
        .map(|u| {
            let mask = com_mask(u, n);
            out_shifts
                .iter()
                .enumerate()
                .filter(|(k, _)| mask >> (n - 1 - k) & 1 == 1)
                .fold(0, |acc, (_, &s)| acc | 1 << s)
        })
        .collect();
    let amps = kernels::permute(state.amplitudes(), |i| {
        let u = in_shifts.iter().fold(0, |acc, &s| (acc << 1) | (i >> s & 1));
        i ^ flips[u]
    });
    StateVector::from_amplitudes(amps)
}

/// [`apply_com_oracle`] on a `2n`-qubit register with `u` the first half and
/// `v` the second.
pub fn u_com(state: &StateVector) -> Result<StateVector> {
    let total = state.n_qubits();
    if !total.is_multiple_of(2) {
        return Err(Error::OddRegister(total));
    }
    let n = total / 2;
    let input: Vec<usize> = (1..=n).collect();
    let output: Vec<usize> = (n + 1..=total).collect();
    apply_com_oracle(state, &input, &output)
}

/// Exact distribution of the defuzzifier readout: pads `N` qubits, applies
/// the COM oracle from the value segment into them and returns the Born
/// distribution of the decoded index (0 for an all-zero readout).
pub fn com_readout(q: &QuantumFuzzySet, cap: QubitCap) -> Result<Vec<f64>> {
    let n = q.universe_size();
    let total = q.total_qubits();
    let padded = q.state().pad_zeros(n, cap)?;
    let output: Vec<usize> = (total + 1..=total + n).collect();
    let after = apply_com_oracle(&padded, &q.value_qubits(), &output)?;
    let marginal = after.marginal_probabilities(&output)?;
    let mut by_index = vec![0.0; n + 1];
    for (pattern, p) in marginal.into_iter().enumerate() {
        if p == 0.0 {
            continue;
        }
        let index = match pattern.count_ones() {
            0 => 0,
            1 => n - pattern.trailing_zeros() as usize,
            // Unreachable from a zero pad: COM writes at most one bit.
            _ => unreachable!("COM oracle wrote a non one-hot pattern {pattern:b}"),
        };
        by_index[index] += p;
    }
    Ok(by_index)
}

/// Probabilistic defuzzification: every trial pads the register, applies
/// the COM oracle and measures the padded qubits. Trials are independent
/// and identically prepared, so they are drawn from the readout
/// distribution of a single preparation.
pub fn defuzzify<R: Rng + ?Sized>(
    q: &QuantumFuzzySet,
    rng: &mut R,
    trials: u64,
    cap: QubitCap,
) -> Result<OutcomeDistribution> {
    if trials == 0 {
        return Err(Error::ZeroShots);
    }
    let readout = com_readout(q, cap)?;
    let counts = sample_indices(&readout, rng, trials)?;
    Ok(OutcomeDistribution::from_counts(trials, counts.into_iter().map(|(i, c)| (i.to_string(), c))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fuzzy::{com_pushforward, FuzzySet};
    use crate::qfs::encode;
    use crate::rng::seeded_rng;
    use proptest::prelude::*;

    const EXACT: f64 = 1e-12;
    const H: f64 = std::f64::consts::FRAC_1_SQRT_2;

    fn cap() -> QubitCap {
        QubitCap::default()
    }

    fn basis(bits: &str) -> StateVector {
        StateVector::basis_state(&crate::statevec::parse_bitstring(bits).unwrap(), cap()).unwrap()
    }

    fn product(factors: &[[f64; 2]]) -> StateVector {
        let n = factors.len();
        StateVector::tabulate(n, |i| {
            let v: f64 = factors.iter().enumerate().map(|(k, f)| f[i >> (n - 1 - k) & 1]).product();
            Complex64::new(v, 0.0)
        })
    }

    #[test]
    fn window_masks() {
        assert_eq!(fuz_window(0b00100, 1, 5), 0b01110);
        assert_eq!(fuz_window(0b10000, 2, 5), 0b11100);
        assert_eq!(fuz_window(0, 3, 5), 0);
        assert_eq!(fuz_window(0b1, 0, 3), 0b1);
    }

    #[test]
    fn fuz_linear_examples() {
        let plus = [H, H];
        let zero = [1.0, 0.0];
        let out = fuz_linear(&basis("00100"), 1, false).unwrap();
        assert!(out.max_abs_diff(&product(&[zero, plus, plus, plus, zero])).unwrap() <= EXACT);
        assert_eq!(fuz_linear(&basis("000"), 1, false).unwrap(), basis("000"));
        let out = fuz_linear(&basis("10"), 0, false).unwrap();
        assert!(out.max_abs_diff(&product(&[plus, zero])).unwrap() <= EXACT);
    }

    #[test]
    fn fuz_linear_cancellation() {
        // FUZ|10⟩ = FUZ|01⟩ = |++⟩ for k = 1.
        let diff = StateVector::from_amplitudes(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(H, 0.0),
            Complex64::new(-H, 0.0),
            Complex64::new(0.0, 0.0),
        ])
        .unwrap();
        assert!(fuz_linear(&diff, 1, false).unwrap().norm() <= EXACT);
        assert!(matches!(fuz_linear(&diff, 1, true), Err(Error::DegenerateState(_))));
        // The same two inputs merge to norm √2 before renormalizing.
        let sum = StateVector::from_amplitudes(vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(H, 0.0),
            Complex64::new(H, 0.0),
            Complex64::new(0.0, 0.0),
        ])
        .unwrap();
        let raw = fuz_linear(&sum, 1, false).unwrap();
        assert!((raw.norm() - 2f64.sqrt()).abs() <= EXACT);
        assert!((fuz_linear(&sum, 1, true).unwrap().norm() - 1.0).abs() <= EXACT);
    }

    #[test]
    fn fuz_isometry_examples() {
        let q = QuantumFuzzySet::from_state(basis("1")).unwrap();
        let out = fuz_isometry(&q, 0, cap()).unwrap();
        assert!(out.state().max_abs_diff(&product(&[[0.0, 1.0], [H, H]])).unwrap() <= EXACT);
        assert_eq!(out.value_qubits(), vec![2]);

        let q = QuantumFuzzySet::from_state(basis("000")).unwrap();
        assert_eq!(fuz_isometry(&q, 2, cap()).unwrap().state(), &basis("000000"));

        let wide = QuantumFuzzySet::from_state(StateVector::ground_state(13, cap()).unwrap()).unwrap();
        assert!(matches!(fuz_isometry(&wide, 1, cap()), Err(Error::CapExceeded { requested: 26, .. })));
    }

    #[test]
    fn u_com_examples() {
        assert_eq!(u_com(&basis("01000000")).unwrap(), basis("01000100"));
        assert_eq!(u_com(&basis("00000000")).unwrap(), basis("00000000"));
        assert_eq!(u_com(&basis("01100000")).unwrap(), basis("01100100"));
        assert_eq!(u_com(&basis("1101")).unwrap(), basis("1111"));
        assert!(matches!(u_com(&basis("010")), Err(Error::OddRegister(3))));
    }

    #[test]
    fn u_com_is_self_inverse_permutation() {
        for n in 1..=4 {
            let total = 2 * n;
            let mut hit = vec![false; 1 << total];
            for i in 0..1usize << total {
                let img = u_com(&StateVector::basis_state_index(total, i, cap()).unwrap()).unwrap();
                let nonzero: Vec<usize> = (0..img.len()).filter(|&j| img.amplitude(j) != Complex64::new(0.0, 0.0)).collect();
                assert_eq!(nonzero.len(), 1);
                assert_eq!(img.amplitude(nonzero[0]), Complex64::new(1.0, 0.0));
                assert!(!hit[nonzero[0]]);
                hit[nonzero[0]] = true;
                assert_eq!(u_com(&img).unwrap().amplitude(i), Complex64::new(1.0, 0.0));
            }
        }
    }

    #[test]
    fn defuzzify_examples() {
        let mut rng = seeded_rng(5);
        let crisp = encode(&FuzzySet::new(vec![1.0, 0.0, 0.0, 0.0]).unwrap(), cap()).unwrap();
        assert_eq!(defuzzify(&crisp, &mut rng, 500, cap()).unwrap().count("1"), Some(500));
        let last = encode(&FuzzySet::new(vec![0.0, 1.0]).unwrap(), cap()).unwrap();
        assert_eq!(defuzzify(&last, &mut rng, 77, cap()).unwrap().count("2"), Some(77));
        assert!(matches!(defuzzify(&last, &mut rng, 0, cap()), Err(Error::ZeroShots)));

        let half = encode(&FuzzySet::new(vec![0.5, 0.5]).unwrap(), cap()).unwrap();
        let sampled = defuzzify(&half, &mut rng, 100_000, cap()).unwrap();
        let exact = OutcomeDistribution::exact([("0", 0.25), ("1", 0.5), ("2", 0.25)]);
        assert!(sampled.total_variation(&exact) < 0.01);
    }

    #[test]
    fn defuzzify_respects_cap() {
        let q = encode(&FuzzySet::new(vec![0.5; 13]).unwrap(), cap()).unwrap();
        assert!(matches!(defuzzify(&q, &mut seeded_rng(0), 1, cap()), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn readout_on_grown_register() {
        // COM reads only the value segment, not the retained AND inputs.
        let f = FuzzySet::new(vec![0.5, 0.5]).unwrap();
        let q = encode(&f, cap()).unwrap();
        let anded = crate::qfs::qand(&q, &q, cap()).unwrap();
        let readout = com_readout(&anded, cap()).unwrap();
        let quarter = FuzzySet::new(vec![0.25, 0.25]).unwrap();
        let exact = com_pushforward(&quarter).unwrap();
        for (i, p) in readout.iter().enumerate() {
            assert!((p - exact.probability(&i.to_string())).abs() <= EXACT);
        }
    }

    fn memberships(max: usize) -> impl Strategy<Value = Vec<f64>> {
        (1..=max).prop_flat_map(|n| prop::collection::vec(0.0f64..=1.0, n))
    }

    fn amps(n: usize) -> impl Strategy<Value = Vec<Complex64>> {
        prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0).prop_map(|(r, i)| Complex64::new(r, i)), 1 << n)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn readout_matches_pushforward(m in memberships(5)) {
            let f = FuzzySet::new(m).unwrap();
            let readout = com_readout(&encode(&f, cap()).unwrap(), cap()).unwrap();
            let exact = com_pushforward(&f).unwrap();
            for (i, p) in readout.iter().enumerate() {
                prop_assert!((p - exact.probability(&i.to_string())).abs() <= EXACT);
            }
        }

        #[test]
        fn fuz_linear_is_linear(
            (a, b) in (1usize..=5).prop_flat_map(|n| (amps(n), amps(n))),
            alpha in (-1.0f64..1.0, -1.0f64..1.0),
            beta in (-1.0f64..1.0, -1.0f64..1.0),
            k in 0usize..3,
        ) {
            let (alpha, beta) = (Complex64::new(alpha.0, alpha.1), Complex64::new(beta.0, beta.1));
            let mix: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| alpha * x + beta * y).collect();
            let sa = StateVector::from_amplitudes(a).unwrap();
            let sb = StateVector::from_amplitudes(b).unwrap();
            let lhs = fuz_linear(&StateVector::from_amplitudes(mix).unwrap(), k, false).unwrap();
            let fa = fuz_linear(&sa, k, false).unwrap();
            let fb = fuz_linear(&sb, k, false).unwrap();
            let rhs: Vec<Complex64> = fa.amplitudes().iter().zip(fb.amplitudes()).map(|(x, y)| alpha * x + beta * y).collect();
            prop_assert!(lhs.max_abs_diff(&StateVector::from_amplitudes(rhs).unwrap()).unwrap() <= EXACT);
        }

        #[test]
        fn fuz_isometry_preserves_norm(a in (1usize..=5).prop_flat_map(amps), k in 0usize..3) {
            let s = StateVector::from_amplitudes(a).unwrap().normalized().unwrap();
            let q = QuantumFuzzySet::from_state(s).unwrap();
            let out = fuz_isometry(&q, k, cap()).unwrap();
            prop_assert!((out.state().norm() - 1.0).abs() <= 1e-10);
        }
    }
}
