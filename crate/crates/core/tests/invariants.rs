use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use qfa_core::automata::{parse_word, Automaton, Symbol};
use qfa_core::builders::{build_m0p, build_m0q, build_m2p, build_m2q, M1Params};
use qfa_core::number_theory::odd_primes;
use qfa_core::Error;

fn word_strategy() -> impl Strategy<Value = String> {
    prop::collection::vec(prop::sample::select(vec!['0', '1', '#']), 0..24).prop_map(|v| v.into_iter().collect())
}

fn quantum_machines() -> Vec<Automaton<Complex64>> {
    vec![
        build_m0q::<f64>(&odd_primes(3)).unwrap(),
        build_m2q::<f64>(&M1Params::new(2, 2), false).unwrap(),
        build_m2q::<f64>(&M1Params::new(2, 3), true).unwrap(),
    ]
}

fn classical_machines() -> Vec<Automaton<f64>> {
    vec![
        build_m0p::<f64>(&odd_primes(3)).unwrap(),
        build_m2p::<f64>(&M1Params::new(2, 3), true).unwrap(),
    ]
}

/// Undefined columns are the only acceptable run failure on arbitrary input.
fn tolerated(e: &Error) -> bool {
    matches!(e, Error::IncompleteSpec { .. })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn probability_is_conserved(word in word_strategy()) {
        let symbols = parse_word(&word).unwrap();
        for m in quantum_machines() {
            match m.run(&symbols) {
                Ok(r) => {
                    let total = r.p_accept + r.p_reject + r.p_residual;
                    prop_assert!((total - 1.0).abs() < 1e-9, "{} sums to {}", word, total);
                }
                Err(e) => prop_assert!(tolerated(&e), "{}", e),
            }
        }
        for m in classical_machines() {
            match m.run(&symbols) {
                Ok(r) => {
                    let total = r.p_accept + r.p_reject + r.p_residual;
                    prop_assert!((total - 1.0).abs() < 1e-12, "{} sums to {}", word, total);
                }
                Err(e) => prop_assert!(tolerated(&e), "{}", e),
            }
        }
    }

    #[test]
    fn exact_classical_runs_conserve_exactly(word in word_strategy()) {
        let m = build_m0p::<BigRational>(&odd_primes(3)).unwrap();
        if let Ok(r) = m.run(&parse_word(&word).unwrap()) {
            prop_assert!(r.p_accept + r.p_reject + r.p_residual == BigRational::one());
        }
    }

    #[test]
    fn halting_mass_only_grows(word in word_strategy()) {
        let symbols = parse_word(&word).unwrap();
        let m = build_m2q::<f64>(&M1Params::new(2, 3), true).unwrap();
        let probe: Vec<usize> = (0..symbols.len() + 2).collect();
        let Ok(snaps) = m.trace(&symbols, &probe) else { return Ok(()) };
        for w in snaps.windows(2) {
            prop_assert!(w[1].p_accept >= w[0].p_accept);
            prop_assert!(w[1].p_reject >= w[0].p_reject);
            prop_assert!(w[1].live_mass() <= w[0].live_mass() + 1e-12);
        }
    }

    #[test]
    fn runs_are_deterministic(word in word_strategy()) {
        let symbols = parse_word(&word).unwrap();
        for m in quantum_machines() {
            let a = m.run(&symbols).map_err(|e| e.to_string());
            let b = m.run(&symbols).map_err(|e| e.to_string());
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn dump_round_trip_preserves_runs(word in word_strategy()) {
        let symbols = parse_word(&word).unwrap();
        for m in quantum_machines() {
            let back = Automaton::<Complex64>::from_json(&m.to_json().unwrap()).unwrap();
            prop_assert_eq!(
                m.run(&symbols).map_err(|e| e.to_string()),
                back.run(&symbols).map_err(|e| e.to_string())
            );
        }
        for m in classical_machines() {
            let back = Automaton::<f64>::from_json(&m.to_json().unwrap()).unwrap();
            prop_assert_eq!(
                m.run(&symbols).map_err(|e| e.to_string()),
                back.run(&symbols).map_err(|e| e.to_string())
            );
        }
    }
}

#[test]
fn dump_round_trip_is_byte_stable() {
    for m in quantum_machines() {
        let text = m.to_json().unwrap();
        assert_eq!(Automaton::<Complex64>::from_json(&text).unwrap().to_json().unwrap(), text);
    }
}

#[test]
fn endmarkers_inside_words_are_refused() {
    let m = build_m0p::<f64>(&odd_primes(1)).unwrap();
    assert!(m.run(&[Symbol::Bit0, Symbol::RightEnd]).is_err());
}
