//! Quantum one-time-pad keys, the encryption/decryption layers, the
//! key-update rules for the server gate set, and the exhaustive blindness
//! check.
//!
//! One operator-order convention is used throughout: the encryption layer on
//! qubit q is the operator Z_q^b X_q^a, i.e. the client applies X^a first and
//! Z^b second. Decryption applies Z^b first and X^a second, which composes
//! with encryption to the identity with no phase. Key-update rules that
//! introduce a global phase when the pad is pushed through a gate report that
//! phase explicitly so the engine can keep matrix-level bookkeeping exact.

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::statevector::{GateKind, Statevector};

/// One qubit's pad: X exponent `a`, Z exponent `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct QubitKey {
    pub a: u8,
    pub b: u8,
}

impl QubitKey {
    pub fn new(a: u8, b: u8) -> Self {
        debug_assert!(a <= 1 && b <= 1);
        QubitKey { a, b }
    }

    pub fn is_identity(&self) -> bool {
        self.a == 0 && self.b == 0
    }
}

/// Per-round pad for a full register: one (a, b) pair per qubit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliKeySet {
    keys: Vec<QubitKey>,
    round_index: usize,
}

impl PauliKeySet {
    pub fn new(keys: Vec<QubitKey>, round_index: usize) -> Self {
        PauliKeySet { keys, round_index }
    }

    pub fn width(&self) -> usize {
        self.keys.len()
    }

    pub fn round_index(&self) -> usize {
        self.round_index
    }

    pub fn key(&self, qubit: usize) -> QubitKey {
        self.keys[qubit]
    }

    pub fn keys(&self) -> &[QubitKey] {
        &self.keys
    }

    pub fn set_key(&mut self, qubit: usize, k: QubitKey) {
        self.keys[qubit] = k;
    }

    /// Decodes a key set from the low 2·width bits of `pattern`
    /// (bit 2q = a_q, bit 2q+1 = b_q). Used by exhaustive enumerations.
    pub fn from_bit_pattern(width: usize, pattern: u64, round_index: usize) -> Self {
        let keys = (0..width)
            .map(|q| QubitKey {
                a: ((pattern >> (2 * q)) & 1) as u8,
                b: ((pattern >> (2 * q + 1)) & 1) as u8,
            })
            .collect();
        PauliKeySet { keys, round_index }
    }
}

/// Draws 2·width independent uniform bits; deterministic under a fixed seed.
pub fn gen_keys<R: Rng>(width: usize, rng: &mut R, round_index: usize) -> Result<PauliKeySet> {
    if width == 0 {
        return Err(Error::InvalidParameter("key width must be >= 1".into()));
    }
    let keys = (0..width)
        .map(|_| QubitKey {
            a: rng.gen_range(0..=1u8),
            b: rng.gen_range(0..=1u8),
        })
        .collect();
    Ok(PauliKeySet { keys, round_index })
}

fn check_width(state: &Statevector, keys: &PauliKeySet) -> Result<()> {
    if state.num_qubits() != keys.width() {
        return Err(Error::Contract(format!(
            "key width {} does not match register width {}",
            keys.width(),
            state.num_qubits()
        )));
    }
    Ok(())
}

/// Applies the pad ⊗_q Z_q^{b_q} X_q^{a_q} (X first, then Z, per qubit).
pub fn encrypt(state: &Statevector, keys: &PauliKeySet) -> Result<Statevector> {
    let mut out = state.clone();
    encrypt_in_place(&mut out, keys)?;
    Ok(out)
}

pub fn encrypt_in_place(state: &mut Statevector, keys: &PauliKeySet) -> Result<()> {
    check_width(state, keys)?;
    for (q, k) in keys.keys().iter().enumerate() {
        if k.a == 1 {
            state.apply_gate_in_place(&GateKind::X(q))?;
        }
        if k.b == 1 {
            state.apply_gate_in_place(&GateKind::Z(q))?;
        }
    }
    Ok(())
}

/// Inverse pad: Z^{b_q} first, then X^{a_q}, per qubit. Exact inverse of
/// `encrypt` with no residual phase.
pub fn decrypt_pauli(state: &Statevector, keys: &PauliKeySet) -> Result<Statevector> {
    let mut out = state.clone();
    decrypt_pauli_in_place(&mut out, keys)?;
    Ok(out)
}

pub fn decrypt_pauli_in_place(state: &mut Statevector, keys: &PauliKeySet) -> Result<()> {
    check_width(state, keys)?;
    for (q, k) in keys.keys().iter().enumerate() {
        if k.b == 1 {
            state.apply_gate_in_place(&GateKind::Z(q))?;
        }
        if k.a == 1 {
            state.apply_gate_in_place(&GateKind::X(q))?;
        }
    }
    Ok(())
}

// --- key-update rules -------------------------------------------------
//
// Each rule rewrites the pad across a server gate U so that
// U · (Z^b X^a) = phase · (Z^{b'} X^{a'}) · U as exact matrices. The phase
// is a unit scalar returned by the matching *_phase function.

/// H: (a, b) → (b, a).
pub fn update_h(k: QubitKey) -> QubitKey {
    QubitKey { a: k.b, b: k.a }
}

/// Phase introduced by pushing the pad through H: (−1)^{ab}.
pub fn update_h_phase(k: QubitKey) -> Complex64 {
    if k.a & k.b == 1 {
        Complex64::new(-1.0, 0.0)
    } else {
        Complex64::new(1.0, 0.0)
    }
}

/// S (phase gate): (a, b) → (a, a⊕b).
pub fn update_s(k: QubitKey) -> QubitKey {
    QubitKey {
        a: k.a,
        b: k.a ^ k.b,
    }
}

/// Phase introduced by pushing the pad through S: (−i)^a.
pub fn update_s_phase(k: QubitKey) -> Complex64 {
    if k.a == 1 {
        Complex64::new(0.0, -1.0)
    } else {
        Complex64::new(1.0, 0.0)
    }
}

/// CX(control, target): control (a,b) → (a, b⊕d), target (c,d) → (a⊕c, d).
/// No phase is introduced.
pub fn update_cx(control: QubitKey, target: QubitKey) -> (QubitKey, QubitKey) {
    (
        QubitKey {
            a: control.a,
            b: control.b ^ target.b,
        },
        QubitKey {
            a: control.a ^ target.a,
            b: target.b,
        },
    )
}

/// CZ: (a,b) → (a, b⊕c), (c,d) → (c, d⊕a).
pub fn update_cz(k1: QubitKey, k2: QubitKey) -> (QubitKey, QubitKey) {
    (
        QubitKey {
            a: k1.a,
            b: k1.b ^ k2.a,
        },
        QubitKey {
            a: k2.a,
            b: k2.b ^ k1.a,
        },
    )
}

/// Phase introduced by pushing the two pads through CZ: (−1)^{a·c}.
pub fn update_cz_phase(k1: QubitKey, k2: QubitKey) -> Complex64 {
    if k1.a & k2.a == 1 {
        Complex64::new(-1.0, 0.0)
    } else {
        Complex64::new(1.0, 0.0)
    }
}

/// Result of pushing the pad through Rz(θ): the pad itself survives
/// unchanged, and when a = 1 an Rz(2θ) correction is still owed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeyUpdate {
    pub new_key: QubitKey,
    /// Angle of the still-pending rotation correction; present iff a = 1.
    pub pending_correction: Option<f64>,
}

/// Rz(θ): keys unchanged; a pending Rz(2θ) correction iff a = 1.
pub fn update_rz(k: QubitKey, theta: f64) -> KeyUpdate {
    KeyUpdate {
        new_key: k,
        pending_correction: (k.a == 1).then_some(2.0 * theta),
    }
}

// --- blindness --------------------------------------------------------

/// Exhaustive qubit bound for `blindness_check`.
pub const BLINDNESS_MAX_QUBITS: usize = 4;

/// Enumerates all 2^{2n} key sets, encrypts `plain_state` under each,
/// averages the projectors with equal weights, and returns the trace
/// distance of that average to I/2^n. A properly blind pad yields a value
/// below 1e-9.
pub fn blindness_check(plain_state: &Statevector) -> Result<f64> {
    #[cfg(feature = "parallel")]
    {
        blindness_check_par(plain_state)
    }
    #[cfg(not(feature = "parallel"))]
    {
        blindness_check_seq(plain_state)
    }
}

fn blindness_inputs(plain_state: &Statevector) -> Result<(usize, u64)> {
    let n = plain_state.num_qubits();
    if n > BLINDNESS_MAX_QUBITS {
        return Err(Error::ResourceBound(format!(
            "blindness check enumerates 4^n key sets; n = {n} exceeds the {BLINDNESS_MAX_QUBITS}-qubit bound"
        )));
    }
    Ok((n, 1u64 << (2 * n)))
}

fn blindness_distance(
    plain_state: &Statevector,
    acc: nalgebra::DMatrix<Complex64>,
    count: u64,
) -> f64 {
    let dim = plain_state.amplitudes().len();
    let avg = acc / Complex64::new(count as f64, 0.0);
    let mixed = crate::density::DensityMatrix::maximally_mixed(dim);
    crate::density::trace_distance_raw(&(avg - mixed.entries()))
}

pub fn blindness_check_seq(plain_state: &Statevector) -> Result<f64> {
    let (n, count) = blindness_inputs(plain_state)?;
    let dim = plain_state.amplitudes().len();
    let mut acc = nalgebra::DMatrix::<Complex64>::zeros(dim, dim);
    for pattern in 0..count {
        let keys = PauliKeySet::from_bit_pattern(n, pattern, 0);
        let enc = encrypt(plain_state, &keys)?;
        acc += crate::density::projector_sum(dim, std::iter::once(&enc));
    }
    Ok(blindness_distance(plain_state, acc, count))
}

#[cfg(feature = "parallel")]
pub fn blindness_check_par(plain_state: &Statevector) -> Result<f64> {
    use rayon::prelude::*;
    let (n, count) = blindness_inputs(plain_state)?;
    let dim = plain_state.amplitudes().len();
    let acc = (0..count)
        .into_par_iter()
        .map(|pattern| {
            let keys = PauliKeySet::from_bit_pattern(n, pattern, 0);
            let enc = encrypt(plain_state, &keys).expect("width checked");
            crate::density::projector_sum(dim, std::iter::once(&enc))
        })
        .reduce(
            || nalgebra::DMatrix::<Complex64>::zeros(dim, dim),
            |a, b| a + b,
        );
    Ok(blindness_distance(plain_state, acc, count))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dense;
    use crate::statevector::fidelity_up_to_phase;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gen_keys_deterministic_and_sized() {
        let a = gen_keys(3, &mut ChaCha8Rng::seed_from_u64(9), 0).unwrap();
        let b = gen_keys(3, &mut ChaCha8Rng::seed_from_u64(9), 0).unwrap();
        assert_eq!(a, b);
        assert_eq!(gen_keys(2, &mut ChaCha8Rng::seed_from_u64(1), 0).unwrap().width(), 2);
        assert!(matches!(
            gen_keys(0, &mut ChaCha8Rng::seed_from_u64(1), 0),
            Err(Error::InvalidParameter(_))
        ));
    }

    #[test]
    fn gen_keys_uniform_bits() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let mut a_sum = 0u32;
        let mut b_sum = 0u32;
        for _ in 0..10_000 {
            let ks = gen_keys(1, &mut rng, 0).unwrap();
            a_sum += u32::from(ks.key(0).a);
            b_sum += u32::from(ks.key(0).b);
        }
        for sum in [a_sum, b_sum] {
            let mean = f64::from(sum) / 10_000.0;
            assert!((0.48..=0.52).contains(&mean), "bit mean {mean}");
        }
    }

    #[test]
    fn identity_keys_leave_state_unchanged() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let sv = Statevector::random(2, &mut rng);
        let keys = PauliKeySet::new(vec![QubitKey::default(); 2], 0);
        assert_eq!(encrypt(&sv, &keys).unwrap(), sv);
        assert_eq!(decrypt_pauli(&sv, &keys).unwrap(), sv);
    }

    #[test]
    fn x_key_flips_basis_state() {
        let zero = Statevector::basis(1, 0).unwrap();
        let keys = PauliKeySet::new(vec![QubitKey::new(1, 0)], 0);
        let enc = encrypt(&zero, &keys).unwrap();
        assert!((enc.amplitudes()[1].re - 1.0).abs() < 1e-12);
    }

    #[test]
    fn encrypt_decrypt_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for _ in 0..20 {
            let sv = Statevector::random(2, &mut rng);
            let keys = gen_keys(2, &mut rng, 0).unwrap();
            let back = decrypt_pauli(&encrypt(&sv, &keys).unwrap(), &keys).unwrap();
            assert!(fidelity_up_to_phase(&sv, &back).unwrap() >= 1.0 - 1e-10);
            // the composition is exact, not merely phase-equal
            for (x, y) in sv.amplitudes().iter().zip(back.amplitudes()) {
                assert!((x - y).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn decrypt_matches_dense_oracle_order() {
        // (a=1, b=1): decryption must act as X·Z (Z first, then X).
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let sv = Statevector::random(1, &mut rng);
        let keys = PauliKeySet::new(vec![QubitKey::new(1, 1)], 0);
        let got = decrypt_pauli(&sv, &keys).unwrap();
        let xz = dense::x_block() * dense::z_block();
        let v = nalgebra::DVector::from_column_slice(sv.amplitudes());
        let want = xz * v;
        for (g, w) in got.amplitudes().iter().zip(want.iter()) {
            assert!((g - w).norm() < 1e-12);
        }
    }

    #[test]
    fn update_rule_examples() {
        // H per Eq.-style table
        assert_eq!(update_h(QubitKey::new(0, 0)), QubitKey::new(0, 0));
        assert_eq!(update_h(QubitKey::new(1, 0)), QubitKey::new(0, 1));
        assert_eq!(update_h(QubitKey::new(1, 1)), QubitKey::new(1, 1));
        // S
        assert_eq!(update_s(QubitKey::new(0, 0)), QubitKey::new(0, 0));
        assert_eq!(update_s(QubitKey::new(1, 0)), QubitKey::new(1, 1));
        assert_eq!(update_s(QubitKey::new(1, 1)), QubitKey::new(1, 0));
        // CX
        assert_eq!(
            update_cx(QubitKey::new(0, 0), QubitKey::new(0, 0)),
            (QubitKey::new(0, 0), QubitKey::new(0, 0))
        );
        assert_eq!(
            update_cx(QubitKey::new(1, 0), QubitKey::new(0, 1)),
            (QubitKey::new(1, 1), QubitKey::new(1, 1))
        );
        assert_eq!(
            update_cx(QubitKey::new(0, 1), QubitKey::new(1, 0)),
            (QubitKey::new(0, 1), QubitKey::new(1, 0))
        );
        // CZ
        assert_eq!(
            update_cz(QubitKey::new(0, 0), QubitKey::new(0, 0)),
            (QubitKey::new(0, 0), QubitKey::new(0, 0))
        );
        assert_eq!(
            update_cz(QubitKey::new(1, 0), QubitKey::new(0, 1)),
            (QubitKey::new(1, 0), QubitKey::new(0, 0))
        );
        assert_eq!(
            update_cz(QubitKey::new(1, 1), QubitKey::new(1, 1)),
            (QubitKey::new(1, 0), QubitKey::new(1, 0))
        );
    }

    #[test]
    fn update_rz_pending_correction() {
        let k = QubitKey::new(0, 1);
        assert_eq!(update_rz(k, 0.7).pending_correction, None);
        let k = QubitKey::new(1, 0);
        let up = update_rz(k, std::f64::consts::FRAC_PI_4);
        assert_eq!(up.new_key, k);
        let pending = up.pending_correction.unwrap();
        assert!((pending - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
        // θ = π/2 → pending Rz(π), which is a client-side Z up to phase
        let up = update_rz(k, std::f64::consts::FRAC_PI_2);
        assert!((up.pending_correction.unwrap() - std::f64::consts::PI).abs() < 1e-15);
    }

    #[test]
    fn blindness_single_qubit_zero() {
        let zero = Statevector::basis(1, 0).unwrap();
        assert!(blindness_check(&zero).unwrap() < 1e-12);
    }

    #[test]
    fn blindness_random_and_entangled() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let random2 = Statevector::random(2, &mut rng);
        assert!(blindness_check(&random2).unwrap() < 1e-9);

        // Bell state (|00⟩ + |11⟩)/√2
        let bell = Statevector::zero(2)
            .apply_gate(&GateKind::H(0))
            .unwrap()
            .apply_gate(&GateKind::Cx(0, 1))
            .unwrap();
        assert!(blindness_check(&bell).unwrap() < 1e-9);
    }

    #[test]
    fn blindness_resource_bound() {
        let big = Statevector::zero(5);
        assert!(matches!(
            blindness_check(&big),
            Err(Error::ResourceBound(_))
        ));
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn blindness_seq_par_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(10);
        let sv = Statevector::random(2, &mut rng);
        let a = blindness_check_seq(&sv).unwrap();
        let b = blindness_check_par(&sv).unwrap();
        assert!((a - b).abs() < 1e-12);
    }
}
