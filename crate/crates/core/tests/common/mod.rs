// shared by several test targets; not every target uses every helper
#![allow(dead_code)]

use hbqc_core::statevector::{GateKind, Statevector};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Random circuit over the server set {H, CZ, Rz(dyadic)}.
pub fn random_server_circuit(
    num_qubits: usize,
    len: usize,
    rng: &mut ChaCha8Rng,
) -> Vec<GateKind> {
    (0..len)
        .map(|_| {
            let q = rng.gen_range(0..num_qubits);
            match rng.gen_range(0..3) {
                0 => GateKind::H(q),
                1 if num_qubits > 1 => {
                    let mut p = rng.gen_range(0..num_qubits);
                    while p == q {
                        p = rng.gen_range(0..num_qubits);
                    }
                    GateKind::Cz(q, p)
                }
                _ => {
                    let m = rng.gen_range(1..=4);
                    let sign = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                    GateKind::Rz(q, sign * std::f64::consts::PI / f64::from(1 << m))
                }
            }
        })
        .collect()
}

/// Random working-register state tensored with a |0⟩ ancilla.
pub fn random_input_with_ancilla(working_qubits: usize, rng: &mut ChaCha8Rng) -> Statevector {
    Statevector::random(working_qubits, rng).tensor(&Statevector::zero(1))
}
