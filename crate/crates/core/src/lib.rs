//! Half-blind quantum computation over the quantum one-time pad.
//!
//! A client that can only apply X, Z, Swap, and measurements delegates a
//! circuit to a server capable of {H, CZ, Rz}. Every round the client pads
//! the register with fresh random Paulis, the server computes on ciphertext,
//! and the client rewrites the pad across the gate to decrypt. Rotation
//! gates are decrypted recursively — Rz(θ) owes a conditional Rz(2θ) — with
//! ancilla-swap decoy rounds keeping the server's view independent of the
//! keys. Arbitrary angles go through a signed-dyadic expansion with digits
//! in {−1, 0, 1}.
//!
//! The crate bundles the statevector engine with an independent dense-matrix
//! oracle, the pad algebra, the protocol actors and transcripts, a circuit
//! transpiler onto the server set, and closed-form synthesis cost models.
//!
//! With the default `parallel` feature the key-ensemble enumerations, audits,
//! and benchmark sweeps fan out over rayon; disabling it yields a fully
//! sequential build with identical results.

pub mod angle;
pub mod cost;
pub mod dense;
pub mod density;
pub mod error;
pub mod pauli;
pub mod protocol;
pub mod statevector;
pub mod transpiler;

pub use error::{Error, Result};
pub use statevector::{fidelity_up_to_phase, GateKind, Statevector};
