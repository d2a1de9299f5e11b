//! Property-based invariants: kernel/oracle agreement, pad involution,
//! parser round-trips, and expansion error bounds.

use std::f64::consts::PI;

use hbqc_core::angle::{digit_count, expand, reconstruct};
use hbqc_core::dense::dense_oracle_apply;
use hbqc_core::pauli::{decrypt_pauli, encrypt, PauliKeySet};
use hbqc_core::statevector::{fidelity_up_to_phase, GateKind, Statevector};
use hbqc_core::transpiler::{parse_circuit, serialize_circuit, Circuit};
use proptest::prelude::*;

fn arb_state(num_qubits: usize) -> impl Strategy<Value = Statevector> {
    proptest::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 1 << num_qubits).prop_filter_map(
        "norm too small",
        |parts| {
            let norm: f64 = parts.iter().map(|(re, im)| re * re + im * im).sum::<f64>().sqrt();
            if norm < 1e-3 {
                return None;
            }
            let amps = parts
                .iter()
                .map(|&(re, im)| num_complex::Complex64::new(re / norm, im / norm))
                .collect();
            Statevector::from_amplitudes(amps).ok()
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kernel_matches_dense_oracle(
        n in 2usize..=5,
        seed in any::<u64>(),
        gate_pick in 0usize..9,
    ) {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let sv = Statevector::random(n, &mut rng);
        let gate = match gate_pick {
            0 => GateKind::H(0),
            1 => GateKind::X(n - 1),
            2 => GateKind::Z(n / 2),
            3 => GateKind::S(0),
            4 => GateKind::T(n - 1),
            5 => GateKind::Rz(n / 2, 1.618),
            6 => GateKind::Cx(0, n - 1),
            7 => GateKind::Cz(n - 1, 0),
            _ => GateKind::Swap(0, n - 1),
        };
        let fast = sv.apply_gate(&gate).unwrap();
        let slow = dense_oracle_apply(&sv, &gate).unwrap();
        for (a, b) in fast.amplitudes().iter().zip(slow.amplitudes()) {
            prop_assert!((a - b).norm() < 1e-10);
        }
    }

    #[test]
    fn pad_is_involutive(sv in arb_state(2), pattern in 0u64..16) {
        let keys = PauliKeySet::from_bit_pattern(2, pattern, 0);
        let back = decrypt_pauli(&encrypt(&sv, &keys).unwrap(), &keys).unwrap();
        prop_assert!(fidelity_up_to_phase(&sv, &back).unwrap() >= 1.0 - 1e-10);
        for (a, b) in sv.amplitudes().iter().zip(back.amplitudes()) {
            prop_assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn parser_round_trips(
        n in 1usize..=4,
        gates_seed in proptest::collection::vec(any::<u32>(), 0..12),
    ) {
        // derive gates from seeds so indices are always valid for n
        let gates: Vec<GateKind> = gates_seed
            .iter()
            .filter_map(|&s| {
                let q = (s as usize / 7) % n;
                Some(match s % 8 {
                    0 => GateKind::H(q),
                    1 => GateKind::X(q),
                    2 => GateKind::Z(q),
                    3 => GateKind::S(q),
                    4 => GateKind::T(q),
                    5 => GateKind::Rz(q, f64::from(s % 1000) / 99.0 - 5.0),
                    _ if n > 1 => {
                        let p = (q + 1 + (s as usize / 11) % (n - 1)) % n;
                        if s % 8 == 6 { GateKind::Cx(q, p) } else { GateKind::Cz(q, p) }
                    }
                    _ => GateKind::H(q),
                })
            })
            .collect();
        let c = Circuit::new(n, gates).unwrap();
        let back = parse_circuit(&serialize_circuit(&c)).unwrap();
        prop_assert_eq!(back.num_qubits, c.num_qubits);
        prop_assert_eq!(back.gates, c.gates);
    }

    #[test]
    fn expansion_bound_and_digit_domain(
        theta in -4.0 * PI..4.0 * PI,
        eps_exp in -9.0..-0.5f64,
    ) {
        let epsilon = 10f64.powf(eps_exp).min(PI / 2.0);
        let e = expand(theta, epsilon).unwrap();
        prop_assert_eq!(e.digits.len(), digit_count(epsilon));
        prop_assert!(e.digits.iter().all(|d| (-1..=1).contains(d)));
        prop_assert!((reconstruct(&e) - theta).abs() <= epsilon);
        let m = e.digits.len();
        prop_assert!(e.delegation_rounds() <= m * m);
    }
}
