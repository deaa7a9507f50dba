use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Read};
use std::path::Path;

use qfuzzy::qfs::RegisterLayout;
use qfuzzy::{Complex64, FuzzySet, QuantumFuzzySet, QubitCap, StateVector};
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ModeArg {
    Classical,
    Quantum,
}

/// Pipeline file accepted by `eval`.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineSpec {
    pub universe_size: usize,
    pub sets: BTreeMap<String, Vec<f64>>,
    pub expression: String,
    #[serde(default)]
    pub mode: Option<ModeArg>,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub trials: Option<u64>,
    #[serde(default)]
    pub qubit_cap: Option<usize>,
}

impl PipelineSpec {
    pub fn bindings(&self) -> Result<BTreeMap<String, FuzzySet>, CliError> {
        self.sets
            .iter()
            .map(|(name, m)| {
                let set = FuzzySet::new(m.clone()).map_err(|e| CliError::validation(format!("set {name}: {e}")))?;
                if set.universe_size() != self.universe_size {
                    return Err(CliError::validation(format!(
                        "set {name} has {} memberships but universe_size is {}",
                        set.universe_size(),
                        self.universe_size
                    )));
                }
                Ok((name.clone(), set))
            })
            .collect()
    }
}

/// A register state as written by `encode`. The layout may be omitted, in
/// which case the whole register is the value segment.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StateInput {
    pub amplitudes: Vec<[f64; 2]>,
    #[serde(default)]
    pub layout: Option<RegisterLayout>,
    #[serde(default)]
    pub universe_size: Option<usize>,
}

impl StateInput {
    pub fn into_set(self, cap: QubitCap) -> Result<QuantumFuzzySet, CliError> {
        let len = self.amplitudes.len();
        if len.is_power_of_two() {
            cap.check(len.trailing_zeros() as usize)?;
        }
        let amps = self.amplitudes.into_iter().map(|[re, im]| Complex64::new(re, im)).collect();
        let state = StateVector::from_amplitudes(amps)?;
        let q = match self.layout {
            Some(layout) => QuantumFuzzySet::new(state, layout)?,
            None => QuantumFuzzySet::from_state(state)?,
        };
        if let Some(n) = self.universe_size {
            if n != q.universe_size() {
                return Err(CliError::validation(format!(
                    "universe_size {n} does not match the value segment width {}",
                    q.universe_size()
                )));
            }
        }
        Ok(q)
    }
}

pub fn read_text(path: Option<&Path>) -> Result<String, CliError> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| CliError::validation(format!("cannot read {}: {e}", p.display()))),
        None => {
            let mut buf = String::new();
            io::stdin()
                .read_to_string(&mut buf)
                .map_err(|e| CliError::validation(format!("cannot read standard input: {e}")))?;
            Ok(buf)
        }
    }
}

pub fn parse_json<T: DeserializeOwned>(text: &str, what: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::validation(format!("invalid {what}: {e}")))
}
