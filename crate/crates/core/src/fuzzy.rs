//! Classical fuzzy sets over `{1..N}` with the probabilistic connectives,
//! the square fuzzifier and centre-of-mass defuzzification.
//!
//! [`oracle_distribution`] enumerates every crisp subset and is the
//! reference the quantum side is checked against.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::outcome::OutcomeDistribution;
use crate::statevec::index_to_bitstring;

/// Largest universe [`oracle_distribution`] will enumerate.
pub const ORACLE_LIMIT: usize = 20;

/// Membership function `f: {1..N} → [0, 1]`; element `i` is stored at
/// position `i − 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FuzzySetRepr", into = "FuzzySetRepr")]
pub struct FuzzySet {
    memberships: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct FuzzySetRepr {
    universe_size: usize,
    memberships: Vec<f64>,
}

impl TryFrom<FuzzySetRepr> for FuzzySet {
    type Error = Error;

    fn try_from(r: FuzzySetRepr) -> Result<Self> {
        if r.memberships.len() != r.universe_size {
            return Err(Error::SizeMismatch { expected: r.universe_size, found: r.memberships.len() });
        }
        FuzzySet::new(r.memberships)
    }
}

impl From<FuzzySet> for FuzzySetRepr {
    fn from(f: FuzzySet) -> Self {
        FuzzySetRepr { universe_size: f.universe_size(), memberships: f.memberships }
    }
}

impl FuzzySet {
    pub fn new(memberships: Vec<f64>) -> Result<Self> {
        if memberships.is_empty() {
            return Err(Error::EmptyRegister);
        }
        for (i, &m) in memberships.iter().enumerate() {
            if !(0.0..=1.0).contains(&m) {
                return Err(Error::InvalidMembership { element: i + 1, value: m });
            }
        }
        Ok(FuzzySet { memberships })
    }

    /// The crisp set with the given characteristic function.
    pub fn crisp(bits: &[bool]) -> Result<Self> {
        Self::new(bits.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect())
    }

    pub fn universe_size(&self) -> usize {
        self.memberships.len()
    }

    pub fn memberships(&self) -> &[f64] {
        &self.memberships
    }

    /// Membership of element `i` (1-based).
    pub fn membership(&self, i: usize) -> f64 {
        self.memberships[i - 1]
    }

    fn check_same_universe(&self, other: &FuzzySet) -> Result<()> {
        if self.universe_size() != other.universe_size() {
            return Err(Error::SizeMismatch { expected: self.universe_size(), found: other.universe_size() });
        }
        Ok(())
    }

    fn zip_with(&self, other: &FuzzySet, op: impl Fn(f64, f64) -> f64) -> Result<FuzzySet> {
        self.check_same_universe(other)?;
        let memberships = self.memberships.iter().zip(&other.memberships).map(|(&a, &b)| op(a, b)).collect();
        Ok(FuzzySet { memberships })
    }
}

pub fn complement(f: &FuzzySet) -> FuzzySet {
    FuzzySet { memberships: f.memberships.iter().map(|m| 1.0 - m).collect() }
}

/// Probabilistic intersection `f(i)·g(i)`.
pub fn intersect(f: &FuzzySet, g: &FuzzySet) -> Result<FuzzySet> {
    f.zip_with(g, |a, b| a * b)
}

/// Probabilistic sum `f + g − f·g`, the De Morgan dual of [`intersect`].
pub fn union(f: &FuzzySet, g: &FuzzySet) -> Result<FuzzySet> {
    // Clamp guards against a 1 + ε result from rounding.
    f.zip_with(g, |a, b| (a + b - a * b).clamp(0.0, 1.0))
}

/// Square window of half-width `k` around `crisp_index`, membership ½
/// inside (clipped to the universe), 0 outside.
pub fn classical_fuzzify(crisp_index: usize, k: usize, universe_size: usize) -> Result<FuzzySet> {
    if crisp_index == 0 || crisp_index > universe_size {
        return Err(Error::ElementOutOfRange { index: crisp_index, universe_size });
    }
    let memberships = (1..=universe_size)
        .map(|j| if j.abs_diff(crisp_index) <= k { 0.5 } else { 0.0 })
        .collect();
    FuzzySet::new(memberships)
}

/// Characteristic function of a crisp subset; bit `i − 1` is element `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "CrispSubsetRepr", into = "CrispSubsetRepr")]
pub struct CrispSubset {
    bits: Vec<bool>,
}

#[derive(Serialize, Deserialize)]
struct CrispSubsetRepr {
    universe_size: usize,
    bits: String,
}

impl TryFrom<CrispSubsetRepr> for CrispSubset {
    type Error = Error;

    fn try_from(r: CrispSubsetRepr) -> Result<Self> {
        let bits = crate::statevec::parse_bitstring(&r.bits)?;
        if bits.len() != r.universe_size {
            return Err(Error::SizeMismatch { expected: r.universe_size, found: bits.len() });
        }
        Ok(CrispSubset { bits })
    }
}

impl From<CrispSubset> for CrispSubsetRepr {
    fn from(s: CrispSubset) -> Self {
        CrispSubsetRepr { universe_size: s.bits.len(), bits: s.to_bitstring() }
    }
}

impl CrispSubset {
    pub fn new(bits: Vec<bool>) -> Self {
        CrispSubset { bits }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Ok(CrispSubset { bits: crate::statevec::parse_bitstring(s)? })
    }

    /// Subset of `{1..universe_size}` holding the listed elements.
    pub fn from_elements(universe_size: usize, elements: &[usize]) -> Result<Self> {
        let mut bits = vec![false; universe_size];
        for &e in elements {
            if e == 0 || e > universe_size {
                return Err(Error::ElementOutOfRange { index: e, universe_size });
            }
            bits[e - 1] = true;
        }
        Ok(CrispSubset { bits })
    }

    /// Subset whose bitstring, element 1 first, is the binary form of `index`.
    pub fn from_index(universe_size: usize, index: usize) -> Self {
        CrispSubset { bits: crate::statevec::index_to_bits(index, universe_size) }
    }

    pub fn universe_size(&self) -> usize {
        self.bits.len()
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn contains(&self, i: usize) -> bool {
        self.bits[i - 1]
    }

    pub fn to_bitstring(&self) -> String {
        self.bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
    }

    pub fn reversed(&self) -> CrispSubset {
        CrispSubset { bits: self.bits.iter().rev().copied().collect() }
    }
}

/// Centre of mass `⌊Σ i·bits(i) / Σ bits(i)⌋`, or 0 for the empty set.
pub fn com_index(bits: &CrispSubset) -> usize {
    let (moment, mass) = bits
        .bits
        .iter()
        .enumerate()
        .filter(|(_, &b)| b)
        .fold((0usize, 0usize), |(m, w), (i, _)| (m + i + 1, w + 1));
    moment.checked_div(mass).unwrap_or(0)
}

/// The centre-of-mass formula with the sum of all indices as denominator,
/// `⌊Σ i·bits(i) / Σᵢ i⌋`. Kept for comparison with [`com_index`].
pub fn com_index_literal(bits: &CrispSubset) -> usize {
    let n = bits.universe_size();
    let moment: usize = bits.bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i + 1).sum();
    moment / (n * (n + 1) / 2)
}

/// `p(S) = ∏_{i∈S} f(i) · ∏_{i∉S} (1 − f(i))`.
pub fn crisp_subset_probability(f: &FuzzySet, s: &CrispSubset) -> Result<f64> {
    if f.universe_size() != s.universe_size() {
        return Err(Error::SizeMismatch { expected: f.universe_size(), found: s.universe_size() });
    }
    Ok(f.memberships
        .iter()
        .zip(&s.bits)
        .map(|(&m, &b)| if b { m } else { 1.0 - m })
        .product())
}

/// Exact collapse distribution over all `2^N` crisp subsets, keyed by
/// bitstring.
pub fn oracle_distribution(f: &FuzzySet) -> Result<OutcomeDistribution> {
    let n = f.universe_size();
    if n > ORACLE_LIMIT {
        return Err(Error::UniverseTooLarge { size: n, limit: ORACLE_LIMIT });
    }
    let entries = (0..1usize << n).map(|index| {
        let s = CrispSubset::from_index(n, index);
        let p = crisp_subset_probability(f, &s).expect("same universe");
        (index_to_bitstring(index, n), p)
    });
    Ok(OutcomeDistribution::exact(entries))
}

/// Exact distribution of [`com_index`] when `f` collapses to a crisp
/// subset, keyed by the decimal index.
pub fn com_pushforward(f: &FuzzySet) -> Result<OutcomeDistribution> {
    let n = f.universe_size();
    if n > ORACLE_LIMIT {
        return Err(Error::UniverseTooLarge { size: n, limit: ORACLE_LIMIT });
    }
    let mut by_index = vec![0.0; n + 1];
    for index in 0..1usize << n {
        let s = CrispSubset::from_index(n, index);
        by_index[com_index(&s)] += crisp_subset_probability(f, &s)?;
    }
    Ok(OutcomeDistribution::exact(by_index.into_iter().enumerate().map(|(i, p)| (i.to_string(), p))))
}
