use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Outcomes keyed by label (a bitstring or a crisp index), either as exact
/// probabilities or as sample counts. Keys iterate in lexicographic order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeDistribution {
    Exact { probabilities: BTreeMap<String, f64> },
    Counts { shots: u64, counts: BTreeMap<String, u64> },
}

impl OutcomeDistribution {
    /// Exact distribution; zero-probability entries are dropped.
    pub fn exact<K: Into<String>>(entries: impl IntoIterator<Item = (K, f64)>) -> Self {
        let mut probabilities = BTreeMap::new();
        for (k, p) in entries {
            if p != 0.0 {
                *probabilities.entry(k.into()).or_insert(0.0) += p;
            }
        }
        OutcomeDistribution::Exact { probabilities }
    }

    pub fn from_counts<K: Into<String>>(shots: u64, entries: impl IntoIterator<Item = (K, u64)>) -> Self {
        let mut counts = BTreeMap::new();
        for (k, c) in entries {
            *counts.entry(k.into()).or_insert(0) += c;
        }
        OutcomeDistribution::Counts { shots, counts }
    }

    pub fn len(&self) -> usize {
        match self {
            OutcomeDistribution::Exact { probabilities } => probabilities.len(),
            OutcomeDistribution::Counts { counts, .. } => counts.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn count(&self, key: &str) -> Option<u64> {
        match self {
            OutcomeDistribution::Counts { counts, .. } => counts.get(key).copied(),
            OutcomeDistribution::Exact { .. } => None,
        }
    }

    /// Probability (or empirical frequency) of `key`; 0 when absent.
    pub fn probability(&self, key: &str) -> f64 {
        match self {
            OutcomeDistribution::Exact { probabilities } => probabilities.get(key).copied().unwrap_or(0.0),
            OutcomeDistribution::Counts { shots, counts } => {
                counts.get(key).map_or(0.0, |&c| c as f64 / *shots as f64)
            }
        }
    }

    pub fn probabilities(&self) -> BTreeMap<String, f64> {
        match self {
            OutcomeDistribution::Exact { probabilities } => probabilities.clone(),
            OutcomeDistribution::Counts { shots, counts } => {
                counts.iter().map(|(k, &c)| (k.clone(), c as f64 / *shots as f64)).collect()
            }
        }
    }

    pub fn total(&self) -> f64 {
        self.probabilities().values().sum()
    }

    /// Half the L1 distance between the two (normalized) distributions.
    pub fn total_variation(&self, other: &OutcomeDistribution) -> f64 {
        let a = self.probabilities();
        let b = other.probabilities();
        let keys: std::collections::BTreeSet<&String> = a.keys().chain(b.keys()).collect();
        0.5 * keys
            .into_iter()
            .map(|k| (a.get(k).unwrap_or(&0.0) - b.get(k).unwrap_or(&0.0)).abs())
            .sum::<f64>()
    }
}
