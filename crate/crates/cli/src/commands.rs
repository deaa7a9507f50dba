use std::collections::BTreeMap;

use qfuzzy::analysis::{bloch_points, entanglement_report, EntanglementReport};
use qfuzzy::expr::{evaluate, parse, pretty_print, ClassicalValue, Environment, Mode, QuantumValue, Value};
use qfuzzy::qfs::{encode, RegisterLayout};
use qfuzzy::rng::seeded_rng;
use qfuzzy::statevec::BlochPoint;
use qfuzzy::{FuzzySet, OutcomeDistribution, QuantumFuzzySet, QubitCap};
use serde::Serialize;

use crate::error::CliError;
use crate::input::{parse_json, ModeArg, PipelineSpec, StateInput};

pub const DEFAULT_TRIALS: u64 = 10_000;

/// Flag values that override the pipeline file when present.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub mode: Option<ModeArg>,
    pub qubit_cap: Option<usize>,
}

pub fn cmd_encode(text: &str, cap: QubitCap) -> Result<QuantumFuzzySet, CliError> {
    let set: FuzzySet = parse_json(text, "fuzzy set")?;
    Ok(encode(&set, cap)?)
}

#[derive(Debug, Serialize)]
pub struct EvalOutput {
    pub mode: &'static str,
    pub expression: String,
    pub seed: u64,
    pub trials: u64,
    pub result: EvalResult,
}

#[derive(Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EvalResult {
    FuzzySet(FuzzySet),
    Distribution { distribution: OutcomeDistribution },
    QuantumState(StateSummary),
}

#[derive(Debug, Serialize)]
pub struct StateSummary {
    pub universe_size: usize,
    pub total_qubits: usize,
    pub layout: RegisterLayout,
    pub value_marginals: Vec<f64>,
    pub entanglement: EntanglementReport,
}

pub fn cmd_eval(text: &str, over: &Overrides) -> Result<EvalOutput, CliError> {
    let spec: PipelineSpec = parse_json(text, "pipeline spec")?;
    let bindings = spec.bindings()?;
    let mode = over.mode.or(spec.mode).unwrap_or(ModeArg::Classical);
    let seed = over.seed.or(spec.seed).unwrap_or(0);
    let trials = over.trials.or(spec.trials).unwrap_or(DEFAULT_TRIALS);
    if trials == 0 {
        return Err(CliError::validation("trials must be at least 1"));
    }
    let cap = QubitCap(over.qubit_cap.or(spec.qubit_cap).unwrap_or(QubitCap::default().0));

    let ast = parse(&spec.expression)?;
    let env = Environment::new(spec.universe_size, bindings, to_mode(mode))?
        .with_seed(seed)
        .with_trials(trials)
        .with_cap(cap);
    let result = match evaluate(&ast, &env)? {
        Value::Classical(ClassicalValue::Set(f)) => EvalResult::FuzzySet(f),
        Value::Classical(ClassicalValue::Distribution(d)) | Value::Quantum(QuantumValue::Distribution(d)) => {
            EvalResult::Distribution { distribution: d }
        }
        Value::Quantum(QuantumValue::Set(q)) => EvalResult::QuantumState(StateSummary {
            universe_size: q.universe_size(),
            total_qubits: q.total_qubits(),
            layout: q.layout().clone(),
            value_marginals: q.value_marginals(),
            entanglement: entanglement_report(&q),
        }),
    };
    Ok(EvalOutput {
        mode: match mode {
            ModeArg::Classical => "classical",
            ModeArg::Quantum => "quantum",
        },
        expression: pretty_print(&ast),
        seed,
        trials,
        result,
    })
}

fn to_mode(m: ModeArg) -> Mode {
    match m {
        ModeArg::Classical => Mode::Classical,
        ModeArg::Quantum => Mode::Quantum,
    }
}

#[derive(Debug, Serialize)]
pub struct ReportOutput {
    #[serde(flatten)]
    pub report: EntanglementReport,
    pub bloch_points: Option<Vec<BlochPoint>>,
}

pub fn cmd_report(text: &str, cap: QubitCap) -> Result<ReportOutput, CliError> {
    let q = parse_json::<StateInput>(text, "state")?.into_set(cap)?;
    Ok(ReportOutput { report: entanglement_report(&q), bloch_points: bloch_points(&q) })
}

#[derive(Debug, Serialize)]
pub struct SampleOutput {
    pub seed: u64,
    pub shots: u64,
    pub counts: BTreeMap<String, u64>,
}

pub fn cmd_sample(text: &str, shots: u64, seed: u64, cap: QubitCap) -> Result<SampleOutput, CliError> {
    if shots == 0 {
        return Err(CliError::validation("shots must be at least 1"));
    }
    let q = parse_json::<StateInput>(text, "state")?.into_set(cap)?;
    let mut rng = seeded_rng(seed);
    match q.state().sample_distribution(&mut rng, shots)? {
        OutcomeDistribution::Counts { shots, counts } => Ok(SampleOutput { seed, shots, counts }),
        OutcomeDistribution::Exact { .. } => unreachable!("sampling yields counts"),
    }
}
