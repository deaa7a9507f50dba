//! Amplitude-array kernels.
//!
//! Every kernel exists in a sequential form ([`seq`]) and, with the
//! `parallel` feature, a rayon form ([`par`]). Reductions are computed per
//! fixed-size chunk and the chunk partials are combined left to right in
//! both forms, so the two paths return bit-identical results regardless of
//! thread count.
//!
//! Bit positions here are LSB-based shifts into the basis index; the
//! translation from 1-based qubit labels happens in the caller.

use num_complex::Complex64;

pub type Matrix2 = [[Complex64; 2]; 2];

/// Chunk length used by every reduction.
pub const REDUCE_CHUNK: usize = 1 << 12;

/// Below this many amplitudes the dispatchers stay sequential.
pub const PAR_THRESHOLD: usize = 1 << 14;

#[inline]
fn rotate(m: &Matrix2, a0: &mut Complex64, a1: &mut Complex64) {
    let x0 = *a0;
    let x1 = *a1;
    *a0 = m[0][0] * x0 + m[0][1] * x1;
    *a1 = m[1][0] * x0 + m[1][1] * x1;
}

pub mod seq {
    use super::*;

    pub fn apply_single(amps: &mut [Complex64], shift: usize, m: &Matrix2) {
        apply_controlled(amps, 0, shift, m);
    }

    /// Applies `m` to the target bit on every basis pair whose index has all
    /// bits of `control_mask` set.
    pub fn apply_controlled(amps: &mut [Complex64], control_mask: usize, shift: usize, m: &Matrix2) {
        let half = 1usize << shift;
        for (b, block) in amps.chunks_mut(2 * half).enumerate() {
            let base = b * 2 * half;
            let (lo, hi) = block.split_at_mut(half);
            for (j, (a0, a1)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                if (base + j) & control_mask == control_mask {
                    rotate(m, a0, a1);
                }
            }
        }
    }

    pub fn inner_product(a: &[Complex64], b: &[Complex64]) -> Complex64 {
        a.chunks(REDUCE_CHUNK)
            .zip(b.chunks(REDUCE_CHUNK))
            .map(|(ca, cb)| chunk_inner(ca, cb))
            .fold(Complex64::new(0.0, 0.0), |acc, x| acc + x)
    }

    pub fn norm_sqr(a: &[Complex64]) -> f64 {
        a.chunks(REDUCE_CHUNK).map(chunk_norm_sqr).fold(0.0, |acc, x| acc + x)
    }

    pub fn scale(a: &mut [Complex64], factor: f64) {
        a.iter_mut().for_each(|x| *x *= factor);
    }

    /// Output amplitude `i` is input amplitude `source(i)`.
    pub fn permute<F>(a: &[Complex64], source: F) -> Vec<Complex64>
    where
        F: Fn(usize) -> usize,
    {
        (0..a.len()).map(|i| a[source(i)]).collect()
    }

    /// Amplitude `i` is `amp(i)`.
    pub fn tabulate<F>(len: usize, amp: F) -> Vec<Complex64>
    where
        F: Fn(usize) -> Complex64,
    {
        (0..len).map(amp).collect()
    }

    /// Index of the first cumulative weight strictly greater than each draw.
    pub fn locate(cumulative: &[f64], draws: &[f64]) -> Vec<usize> {
        draws.iter().map(|&u| super::search(cumulative, u)).collect()
    }
}

#[cfg(feature = "parallel")]
pub mod par {
    use super::*;
    use rayon::prelude::*;

    const MIN_LEN: usize = 1 << 10;

    pub fn apply_single(amps: &mut [Complex64], shift: usize, m: &Matrix2) {
        apply_controlled(amps, 0, shift, m);
    }

    pub fn apply_controlled(amps: &mut [Complex64], control_mask: usize, shift: usize, m: &Matrix2) {
        let half = 1usize << shift;
        let kernel = |base: usize, lo: &mut [Complex64], hi: &mut [Complex64]| {
            for (j, (a0, a1)) in lo.iter_mut().zip(hi.iter_mut()).enumerate() {
                if (base + j) & control_mask == control_mask {
                    rotate(m, a0, a1);
                }
            }
        };
        if half >= MIN_LEN {
            // Few large blocks: split each block's halves into parallel runs.
            for (b, block) in amps.chunks_mut(2 * half).enumerate() {
                let base = b * 2 * half;
                let (lo, hi) = block.split_at_mut(half);
                lo.par_chunks_mut(MIN_LEN)
                    .zip(hi.par_chunks_mut(MIN_LEN))
                    .enumerate()
                    .for_each(|(c, (l, h))| kernel(base + c * MIN_LEN, l, h));
            }
        } else {
            amps.par_chunks_mut(2 * half)
                .with_min_len((MIN_LEN / (2 * half)).max(1))
                .enumerate()
                .for_each(|(b, block)| {
                    let (lo, hi) = block.split_at_mut(half);
                    kernel(b * 2 * half, lo, hi);
                });
        }
    }

    pub fn inner_product(a: &[Complex64], b: &[Complex64]) -> Complex64 {
        let partials: Vec<Complex64> = a
            .par_chunks(REDUCE_CHUNK)
            .zip(b.par_chunks(REDUCE_CHUNK))
            .map(|(ca, cb)| chunk_inner(ca, cb))
            .collect();
        partials.into_iter().fold(Complex64::new(0.0, 0.0), |acc, x| acc + x)
    }

    pub fn norm_sqr(a: &[Complex64]) -> f64 {
        let partials: Vec<f64> = a.par_chunks(REDUCE_CHUNK).map(chunk_norm_sqr).collect();
        partials.into_iter().fold(0.0, |acc, x| acc + x)
    }

    pub fn scale(a: &mut [Complex64], factor: f64) {
        a.par_iter_mut().with_min_len(MIN_LEN).for_each(|x| *x *= factor);
    }

    pub fn permute<F>(a: &[Complex64], source: F) -> Vec<Complex64>
    where
        F: Fn(usize) -> usize + Sync + Send,
    {
        (0..a.len())
            .into_par_iter()
            .with_min_len(MIN_LEN)
            .map(|i| a[source(i)])
            .collect()
    }

    pub fn tabulate<F>(len: usize, amp: F) -> Vec<Complex64>
    where
        F: Fn(usize) -> Complex64 + Sync + Send,
    {
        (0..len).into_par_iter().with_min_len(MIN_LEN).map(amp).collect()
    }

    pub fn locate(cumulative: &[f64], draws: &[f64]) -> Vec<usize> {
        draws
            .par_iter()
            .with_min_len(MIN_LEN)
            .map(|&u| super::search(cumulative, u))
            .collect()
    }
}

fn chunk_inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter()
        .zip(b)
        .fold(Complex64::new(0.0, 0.0), |acc, (x, y)| acc + x.conj() * y)
}

fn chunk_norm_sqr(a: &[Complex64]) -> f64 {
    a.iter().fold(0.0, |acc, x| acc + x.norm_sqr())
}

fn search(cumulative: &[f64], u: f64) -> usize {
    let i = cumulative.partition_point(|&c| c <= u);
    // Draws past the last cumulative value (rounding) land on the last
    // outcome with nonzero weight.
    if i < cumulative.len() {
        return i;
    }
    let last = *cumulative.last().unwrap_or(&0.0);
    cumulative.partition_point(|&c| c < last).min(cumulative.len().saturating_sub(1))
}

// Dispatchers used by the rest of the crate.

pub fn apply_controlled(amps: &mut [Complex64], control_mask: usize, shift: usize, m: &Matrix2) {
    #[cfg(feature = "parallel")]
    if amps.len() >= PAR_THRESHOLD {
        return par::apply_controlled(amps, control_mask, shift, m);
    }
    seq::apply_controlled(amps, control_mask, shift, m)
}

pub fn inner_product(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    #[cfg(feature = "parallel")]
    if a.len() >= PAR_THRESHOLD {
        return par::inner_product(a, b);
    }
    seq::inner_product(a, b)
}

pub fn norm_sqr(a: &[Complex64]) -> f64 {
    #[cfg(feature = "parallel")]
    if a.len() >= PAR_THRESHOLD {
        return par::norm_sqr(a);
    }
    seq::norm_sqr(a)
}

pub fn scale(a: &mut [Complex64], factor: f64) {
    #[cfg(feature = "parallel")]
    if a.len() >= PAR_THRESHOLD {
        return par::scale(a, factor);
    }
    seq::scale(a, factor)
}

pub fn permute<F>(a: &[Complex64], source: F) -> Vec<Complex64>
where
    F: Fn(usize) -> usize + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if a.len() >= PAR_THRESHOLD {
        return par::permute(a, source);
    }
    seq::permute(a, source)
}

pub fn tabulate<F>(len: usize, amp: F) -> Vec<Complex64>
where
    F: Fn(usize) -> Complex64 + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if len >= PAR_THRESHOLD {
        return par::tabulate(len, amp);
    }
    seq::tabulate(len, amp)
}

pub fn locate(cumulative: &[f64], draws: &[f64]) -> Vec<usize> {
    #[cfg(feature = "parallel")]
    if draws.len() >= PAR_THRESHOLD {
        return par::locate(cumulative, draws);
    }
    seq::locate(cumulative, draws)
}
