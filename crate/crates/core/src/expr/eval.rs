use std::collections::BTreeMap;

use num_complex::Complex64;

use super::{Expr, ExprError, ExprKind};
use crate::fuzzy::{classical_fuzzify, com_pushforward, complement, intersect, union, FuzzySet};
use crate::outcome::OutcomeDistribution;
use crate::qfs::{defuzzify, encode, fuz_isometry, qand, qnot, qor, superpose, QuantumFuzzySet};
use crate::rng::seeded_rng;
use crate::statevec::{QubitCap, StateVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Classical,
    Quantum,
}

/// Bindings and run parameters for one evaluation.
#[derive(Debug, Clone)]
pub struct Environment {
    universe_size: usize,
    bindings: BTreeMap<String, FuzzySet>,
    pub mode: Mode,
    pub seed: u64,
    pub trials: u64,
    pub cap: QubitCap,
}

impl Environment {
    /// All bound sets must share `universe_size`.
    pub fn new(universe_size: usize, bindings: BTreeMap<String, FuzzySet>, mode: Mode) -> Result<Self, ExprError> {
        for (name, f) in &bindings {
            if f.universe_size() != universe_size {
                return Err(ExprError::Binding { name: name.clone(), expected: universe_size, found: f.universe_size() });
            }
        }
        Ok(Environment { universe_size, bindings, mode, seed: 0, trials: 10_000, cap: QubitCap::default() })
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_trials(mut self, trials: u64) -> Self {
        self.trials = trials;
        self
    }

    pub fn with_cap(mut self, cap: QubitCap) -> Self {
        self.cap = cap;
        self
    }

    pub fn with_mode(mut self, mode: Mode) -> Self {
        self.mode = mode;
        self
    }

    pub fn universe_size(&self) -> usize {
        self.universe_size
    }

    pub fn bindings(&self) -> &BTreeMap<String, FuzzySet> {
        &self.bindings
    }

    fn lookup(&self, name: &str, e: &Expr) -> Result<&FuzzySet, ExprError> {
        self.bindings.get(name).ok_or_else(|| ExprError::Unbound { name: name.to_string(), pos: e.pos })
    }

    fn fuzzified(&self, index: usize, k: usize, e: &Expr) -> Result<FuzzySet, ExprError> {
        if index == 0 || index > self.universe_size {
            return Err(ExprError::FuzIndex { index, universe_size: self.universe_size, pos: e.pos });
        }
        Ok(classical_fuzzify(index, k, self.universe_size)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ClassicalValue {
    Set(FuzzySet),
    Distribution(OutcomeDistribution),
}

#[derive(Debug, Clone, PartialEq)]
pub enum QuantumValue {
    Set(QuantumFuzzySet),
    Distribution(OutcomeDistribution),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Classical(ClassicalValue),
    Quantum(QuantumValue),
}

/// Evaluates in the environment's mode.
pub fn evaluate(ast: &Expr, env: &Environment) -> Result<Value, ExprError> {
    match env.mode {
        Mode::Classical => eval_classical(ast, env).map(Value::Classical),
        Mode::Quantum => eval_quantum(ast, env).map(Value::Quantum),
    }
}

/// Splits off a top-level DEFUZ and rejects DEFUZ anywhere below it.
fn split_defuz(ast: &Expr) -> Result<(bool, &Expr), ExprError> {
    let (top, body) = match &ast.kind {
        ExprKind::Defuz(inner) => (true, inner.as_ref()),
        _ => (false, ast),
    };
    reject_defuz(body)?;
    Ok((top, body))
}

fn reject_defuz(e: &Expr) -> Result<(), ExprError> {
    match &e.kind {
        ExprKind::Defuz(_) => Err(ExprError::NestedDefuz { pos: e.pos }),
        ExprKind::Ident(_) | ExprKind::Fuz { .. } => Ok(()),
        ExprKind::Not(a) => reject_defuz(a),
        ExprKind::And(a, b) | ExprKind::Or(a, b) => reject_defuz(a).and_then(|_| reject_defuz(b)),
        ExprKind::Superpose(terms) => terms.iter().try_for_each(|(_, t)| reject_defuz(t)),
    }
}

/// Membership arithmetic; a top-level DEFUZ yields the exact distribution
/// of the centre-of-mass index.
pub fn eval_classical(ast: &Expr, env: &Environment) -> Result<ClassicalValue, ExprError> {
    let (defuz, body) = split_defuz(ast)?;
    let set = classical_set(body, env)?;
    if defuz {
        Ok(ClassicalValue::Distribution(com_pushforward(&set)?))
    } else {
        Ok(ClassicalValue::Set(set))
    }
}

fn classical_set(e: &Expr, env: &Environment) -> Result<FuzzySet, ExprError> {
    Ok(match &e.kind {
        ExprKind::Ident(name) => env.lookup(name, e)?.clone(),
        ExprKind::Not(a) => complement(&classical_set(a, env)?),
        ExprKind::And(a, b) => intersect(&classical_set(a, env)?, &classical_set(b, env)?)?,
        ExprKind::Or(a, b) => union(&classical_set(a, env)?, &classical_set(b, env)?)?,
        ExprKind::Fuz { index, k } => env.fuzzified(*index, *k, e)?,
        ExprKind::Superpose(_) => return Err(ExprError::SuperposeInClassical { pos: e.pos }),
        ExprKind::Defuz(_) => return Err(ExprError::NestedDefuz { pos: e.pos }),
    })
}

/// Register simulation; a top-level DEFUZ samples the centre-of-mass
/// readout `env.trials` times from a generator seeded with `env.seed`.
pub fn eval_quantum(ast: &Expr, env: &Environment) -> Result<QuantumValue, ExprError> {
    let (defuz, body) = split_defuz(ast)?;
    let set = quantum_set(body, env)?;
    if defuz {
        let mut rng = seeded_rng(env.seed);
        Ok(QuantumValue::Distribution(defuzzify(&set, &mut rng, env.trials, env.cap)?))
    } else {
        Ok(QuantumValue::Set(set))
    }
}

fn quantum_set(e: &Expr, env: &Environment) -> Result<QuantumFuzzySet, ExprError> {
    Ok(match &e.kind {
        ExprKind::Ident(name) => encode(env.lookup(name, e)?, env.cap)?,
        ExprKind::Not(a) => qnot(&quantum_set(a, env)?),
        ExprKind::And(a, b) => qand(&quantum_set(a, env)?, &quantum_set(b, env)?, env.cap)?,
        ExprKind::Or(a, b) => qor(&quantum_set(a, env)?, &quantum_set(b, env)?, env.cap)?,
        ExprKind::Fuz { index, k } => {
            let n = env.universe_size;
            if *index == 0 || *index > n {
                return Err(ExprError::FuzIndex { index: *index, universe_size: n, pos: e.pos });
            }
            let crisp = StateVector::basis_state_index(n, 1 << (n - index), env.cap)?;
            fuz_isometry(&QuantumFuzzySet::from_state(crisp)?, *k, env.cap)?
        }
        ExprKind::Superpose(terms) => {
            let leaves = terms
                .iter()
                .map(|(c, t)| {
                    let f = match &t.kind {
                        ExprKind::Ident(name) => env.lookup(name, t)?.clone(),
                        ExprKind::Fuz { index, k } => env.fuzzified(*index, *k, t)?,
                        _ => return Err(ExprError::SuperposeOperand { pos: t.pos }),
                    };
                    Ok((Complex64::new(*c, 0.0), f))
                })
                .collect::<Result<Vec<_>, ExprError>>()?;
            superpose(&leaves, env.cap)?.set
        }
        ExprKind::Defuz(_) => return Err(ExprError::NestedDefuz { pos: e.pos }),
    })
}
