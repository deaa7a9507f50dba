use std::collections::BTreeMap;

use qfuzzy::analysis::entanglement_report;
use qfuzzy::expr::{eval_classical, eval_quantum, parse, ClassicalValue, Environment, ExprError, Mode, QuantumValue};
use qfuzzy::qfs::encode;
use qfuzzy::{Error, FuzzySet, OutcomeDistribution, QuantumFuzzySet, QubitCap};

type Bindings<'a> = &'a [(&'a str, &'a [f64])];

fn env(sets: Bindings, mode: Mode) -> Environment {
    let n = sets[0].1.len();
    let bindings: BTreeMap<String, FuzzySet> =
        sets.iter().map(|(k, m)| (k.to_string(), FuzzySet::new(m.to_vec()).unwrap())).collect();
    Environment::new(n, bindings, mode).unwrap()
}

fn quantum_set(text: &str, env: &Environment) -> QuantumFuzzySet {
    match eval_quantum(&parse(text).unwrap(), env).unwrap() {
        QuantumValue::Set(q) => q,
        other => panic!("expected a set, got {other:?}"),
    }
}

#[test]
fn classical_and_quantum_defuz_agree_in_distribution() {
    let cases: [(&str, Bindings); 4] = [
        ("DEFUZ(A)", &[("A", &[0.5, 0.5])]),
        ("DEFUZ(A AND NOT B)", &[("A", &[0.9, 0.4, 0.7]), ("B", &[0.2, 0.5, 0.1])]),
        ("DEFUZ(A OR B)", &[("A", &[0.1, 0.3, 0.2, 0.6]), ("B", &[0.3, 0.0, 0.8, 0.1])]),
        ("DEFUZ(FUZ(2, 1))", &[("A", &[0.0, 0.0, 0.0, 0.0])]),
    ];
    for (text, sets) in cases {
        let ast = parse(text).unwrap();
        let classical = env(sets, Mode::Classical);
        let ClassicalValue::Distribution(exact) = eval_classical(&ast, &classical).unwrap() else {
            panic!("classical DEFUZ must give a distribution");
        };
        let quantum = classical.clone().with_mode(Mode::Quantum).with_seed(42).with_trials(100_000);
        let QuantumValue::Distribution(sampled) = eval_quantum(&ast, &quantum).unwrap() else {
            panic!("quantum DEFUZ must give a distribution");
        };
        let tv = sampled.total_variation(&exact);
        assert!(tv < 0.02, "{text}: TV {tv}");
    }
}

#[test]
fn classical_defuz_example() {
    let e = env(&[("A", &[0.5, 0.5])], Mode::Classical);
    let got = eval_classical(&parse("DEFUZ(A)").unwrap(), &e).unwrap();
    let want = OutcomeDistribution::exact([("0", 0.25), ("1", 0.5), ("2", 0.25)]);
    assert_eq!(got, ClassicalValue::Distribution(want));
}

#[test]
fn quantum_defuz_is_reproducible() {
    let e = env(&[("A", &[0.3, 0.6, 0.8])], Mode::Quantum).with_seed(9).with_trials(5000);
    let ast = parse("DEFUZ(NOT A)").unwrap();
    assert_eq!(eval_quantum(&ast, &e).unwrap(), eval_quantum(&ast, &e).unwrap());
}

#[test]
fn bell_like_superposition_is_entangled() {
    let e = env(&[("A", &[1.0, 0.0]), ("B", &[0.0, 1.0])], Mode::Quantum);
    let q = quantum_set("SUPERPOSE(0.7071*A, 0.7071*B)", &e);
    let report = entanglement_report(&q);
    assert_eq!(report.per_qubit_schmidt_ranks, vec![2, 2]);
    assert!(!report.is_product);
    assert!(report.canonical_fuzzy_set.is_none());
}

#[test]
fn double_negation_restores_the_encoding() {
    let e = env(&[("A", &[0.15, 0.5, 0.95])], Mode::Quantum);
    let q = quantum_set("NOT NOT A", &e);
    let direct = encode(&FuzzySet::new(vec![0.15, 0.5, 0.95]).unwrap(), QubitCap::default()).unwrap();
    assert!(q.state().max_abs_diff(direct.state()).unwrap() <= 1e-12);
}

#[test]
fn grown_registers_keep_value_segment_last() {
    let e = env(&[("A", &[0.5, 0.2]), ("B", &[0.5, 0.9])], Mode::Quantum);
    let q = quantum_set("A AND B OR NOT A", &e);
    let last = q.layout().segments().last().unwrap().clone();
    assert_eq!(last.name, "out");
    assert_eq!(q.universe_size(), 2);
    assert_eq!(q.total_qubits(), 2 + 2 + 2 + 2 + 2);
    let expected = [0.25 + 0.5 - 0.25 * 0.5, 0.18 + 0.8 - 0.18 * 0.8];
    for (p, want) in q.value_marginals().iter().zip(expected) {
        assert!((p - want).abs() < 1e-12);
    }
}

#[test]
fn cap_errors_report_requested_and_allowed() {
    let e = env(&[("A", &[0.5, 0.5, 0.5])], Mode::Quantum).with_cap(QubitCap(8));
    let err = eval_quantum(&parse("A AND A").unwrap(), &e).unwrap_err();
    assert_eq!(err, ExprError::Core(Error::CapExceeded { requested: 9, cap: 8 }));
    assert_eq!(err.to_string(), "requested 9 qubits but the register cap is 8");
}

#[test]
fn semantic_errors_carry_positions() {
    let c = env(&[("A", &[0.5])], Mode::Classical);
    let msg = |text: &str, e: &Environment| eval_classical(&parse(text).unwrap(), e).unwrap_err().to_string();
    assert_eq!(msg("A AND C", &c), "unbound identifier C at 1:7");
    assert_eq!(msg("NOT DEFUZ(A)", &c), "DEFUZ at 1:5 must be the outermost operator");
    assert_eq!(msg("SUPERPOSE(1 * A)", &c), "SUPERPOSE at 1:1 is only available in quantum mode");
    assert_eq!(msg("FUZ(2, 0)", &c), "FUZ index 2 at 1:1 is outside the universe 1..=1");
    let q = c.clone().with_mode(Mode::Quantum);
    let err = eval_quantum(&parse("SUPERPOSE(1 * A, 1 * (A AND A))").unwrap(), &q).unwrap_err();
    assert_eq!(err.to_string(), "SUPERPOSE term at 1:25 must be an identifier or a FUZ leaf");
}

#[test]
fn quantum_sets_round_trip_through_json() {
    let e = env(&[("A", &[0.3, 0.7]), ("B", &[0.6, 0.1])], Mode::Quantum);
    let q = quantum_set("A OR B", &e);
    let text = serde_json::to_string(&q).unwrap();
    let back: QuantumFuzzySet = serde_json::from_str(&text).unwrap();
    assert_eq!(back, q);
}
