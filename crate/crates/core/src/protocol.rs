//! Client and server actors, the simulated quantum channel, transcripts, and
//! the encrypt-compute-decrypt protocol with decoy-masked recursive Rz
//! decryption.
//!
//! One protocol round sends the full encrypted register to the server, lets
//! it apply the scheduled gate set for that depth, and decrypts the reply
//! with the rewritten pad. Rotation gates owe a conditional Rz(2θ)
//! correction which the client cannot perform itself; the correction is
//! delegated in the next round, halving the exponent each time until the
//! ±π/2 base case, whose own correction is a client-side Z. Once the streak
//! of correction keys ends, the client swaps the working qubit with the
//! ancilla so the remaining scheduled rotations land on a dummy — the
//! server-visible gate sequence never depends on the keys.

use std::collections::VecDeque;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::angle;
use crate::density;
use crate::error::{Error, Result};
use crate::pauli::{self, PauliKeySet};
use crate::statevector::{GateKind, Statevector};

/// Gate kinds the server is able (and allowed) to perform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ServerOp {
    H { qubit: usize },
    Cz { a: usize, b: usize },
    Rz { qubit: usize, angle: f64 },
}

impl ServerOp {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            ServerOp::H { qubit } | ServerOp::Rz { qubit, .. } => vec![qubit],
            ServerOp::Cz { a, b } => vec![a, b],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ServerOp::H { .. } => "h",
            ServerOp::Cz { .. } => "cz",
            ServerOp::Rz { .. } => "rz",
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match self {
            ServerOp::Rz { angle, .. } => Some(*angle),
            _ => None,
        }
    }

    fn as_gate(&self) -> GateKind {
        match *self {
            ServerOp::H { qubit } => GateKind::H(qubit),
            ServerOp::Cz { a, b } => GateKind::Cz(a, b),
            ServerOp::Rz { qubit, angle } => GateKind::Rz(qubit, angle),
        }
    }
}

/// A scheduled server gate: operation plus its depth slot in 𝒥.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ServerGate {
    pub op: ServerOp,
    pub depth: usize,
}

/// Accepts exactly the server set {H, CZ, Rz}; rejects everything else.
pub fn server_capability_guard(gate: &GateKind) -> bool {
    matches!(
        gate,
        GateKind::H(_) | GateKind::Cz(_, _) | GateKind::Rz(_, _)
    )
}

/// Converts a client-level gate into a server operation when the server is
/// capable of it.
pub fn server_op_from_gate(gate: &GateKind) -> Option<ServerOp> {
    match *gate {
        GateKind::H(q) => Some(ServerOp::H { qubit: q }),
        GateKind::Cz(a, b) => Some(ServerOp::Cz { a, b }),
        GateKind::Rz(q, theta) => Some(ServerOp::Rz {
            qubit: q,
            angle: theta,
        }),
        _ => None,
    }
}

/// Streak tracker for consecutive a = 1 correction keys in a rotation
/// recursion. Transitions only Inactive→{Active, Exhausted} and
/// Active→Exhausted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunOfOneState {
    Inactive,
    Active,
    Exhausted,
}

impl RunOfOneState {
    fn observe(self, correction_key: u8) -> Self {
        match (self, correction_key) {
            (RunOfOneState::Inactive, 1) => RunOfOneState::Active,
            (RunOfOneState::Inactive, _) => RunOfOneState::Exhausted,
            (RunOfOneState::Active, 1) => RunOfOneState::Active,
            (RunOfOneState::Active, _) => RunOfOneState::Exhausted,
            (RunOfOneState::Exhausted, _) => RunOfOneState::Exhausted,
        }
    }

    pub fn is_exhausted(self) -> bool {
        self == RunOfOneState::Exhausted
    }
}

// --- computation set ----------------------------------------------------

/// Executor-level view of one schedule slot.
#[derive(Debug, Clone, PartialEq)]
pub enum ProtocolStep {
    /// All H/CZ gates sharing one depth (disjoint qubits, same kind).
    Clifford { depth: usize, ops: Vec<ServerOp> },
    /// A dyadic rotation Rz(sign·π/2^exponent) whose recursion occupies
    /// `exponent` consecutive depths starting at `start_depth`.
    RzExact {
        qubit: usize,
        sign: i8,
        exponent: u32,
        start_depth: usize,
    },
    /// A non-dyadic rotation delegated through the signed-dyadic expansion
    /// at run time; holds a single schedule slot.
    RzApprox {
        qubit: usize,
        angle: f64,
        depth: usize,
    },
}

/// The depth-ordered server gate schedule 𝒥 plus the executor view of it.
#[derive(Debug, Clone)]
pub struct ComputationSet {
    entries: Vec<ServerGate>,
    steps: Vec<ProtocolStep>,
    n_prime: usize,
    d_prime: usize,
}

impl ComputationSet {
    /// Assembles a schedule from executor steps. Depths must come out
    /// contiguous from 0 and every qubit must fit under `n_prime` with the
    /// highest index reserved for the ancilla.
    pub fn assemble(steps: Vec<ProtocolStep>, n_prime: usize) -> Result<Self> {
        if n_prime < 2 {
            return Err(Error::InvalidCircuit(
                "computation set needs at least one working qubit and one ancilla".into(),
            ));
        }
        let ancilla = n_prime - 1;
        let mut entries: Vec<ServerGate> = Vec::new();
        for step in &steps {
            match step {
                ProtocolStep::Clifford { depth, ops } => {
                    if ops.is_empty() {
                        return Err(Error::InvalidCircuit("empty depth slot".into()));
                    }
                    for op in ops {
                        entries.push(ServerGate {
                            op: *op,
                            depth: *depth,
                        });
                    }
                }
                ProtocolStep::RzExact {
                    qubit,
                    sign,
                    exponent,
                    start_depth,
                } => {
                    if *exponent == 0 || !matches!(sign, 1 | -1) {
                        return Err(Error::InvalidCircuit(
                            "dyadic rotation needs exponent >= 1 and sign ±1".into(),
                        ));
                    }
                    if *qubit == ancilla {
                        return Err(Error::InvalidCircuit(
                            "rotation scheduled on the ancilla qubit".into(),
                        ));
                    }
                    for k in 0..*exponent {
                        entries.push(ServerGate {
                            op: ServerOp::Rz {
                                qubit: *qubit,
                                angle: chain_angle(*sign, *exponent, k),
                            },
                            depth: *start_depth + k as usize,
                        });
                    }
                }
                ProtocolStep::RzApprox { qubit, angle, depth } => {
                    if *qubit == ancilla {
                        return Err(Error::InvalidCircuit(
                            "rotation scheduled on the ancilla qubit".into(),
                        ));
                    }
                    entries.push(ServerGate {
                        op: ServerOp::Rz {
                            qubit: *qubit,
                            angle: *angle,
                        },
                        depth: *depth,
                    });
                }
            }
        }
        for e in &entries {
            for q in e.op.qubits() {
                if q >= n_prime {
                    return Err(Error::InvalidCircuit(format!(
                        "qubit {q} out of range for n' = {n_prime}"
                    )));
                }
            }
        }
        entries.sort_by_key(|e| (e.depth, e.op.qubits()[0]));
        let d_prime = entries.iter().map(|e| e.depth + 1).max().unwrap_or(0);
        let mut seen = vec![false; d_prime];
        for e in &entries {
            seen[e.depth] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidCircuit("schedule has an empty depth".into()));
        }
        Ok(ComputationSet {
            entries,
            steps,
            n_prime,
            d_prime,
        })
    }

    pub fn entries(&self) -> &[ServerGate] {
        &self.entries
    }

    pub fn steps(&self) -> &[ProtocolStep] {
        &self.steps
    }

    /// Total qubits including the ancilla (always the highest index).
    pub fn n_prime(&self) -> usize {
        self.n_prime
    }

    pub fn ancilla_index(&self) -> usize {
        self.n_prime - 1
    }

    /// Total schedule depth D′.
    pub fn d_prime(&self) -> usize {
        self.d_prime
    }

    /// Encryption bits the schedule budget calls for: 2·n′·D′.
    pub fn key_budget(&self) -> usize {
        2 * self.n_prime * self.d_prime
    }

    /// Unencrypted reference execution: applies each logical operation
    /// directly. A dyadic recursion collapses to its single source rotation
    /// and an approximate slot applies the exact angle, so this is the
    /// ideal-circuit oracle the protocol output is compared against.
    pub fn execute_directly(&self, input: &Statevector) -> Result<Statevector> {
        if input.num_qubits() != self.n_prime {
            return Err(Error::Contract(format!(
                "input width {} does not match n' = {}",
                input.num_qubits(),
                self.n_prime
            )));
        }
        let mut sv = input.clone();
        for step in &self.steps {
            match step {
                ProtocolStep::Clifford { ops, .. } => {
                    for op in ops {
                        sv.apply_gate_in_place(&op.as_gate())?;
                    }
                }
                ProtocolStep::RzExact {
                    qubit,
                    sign,
                    exponent,
                    ..
                } => {
                    let theta = f64::from(*sign) * PI / (1u64 << exponent) as f64;
                    sv.apply_gate_in_place(&GateKind::Rz(*qubit, theta))?;
                }
                ProtocolStep::RzApprox { qubit, angle, .. } => {
                    sv.apply_gate_in_place(&GateKind::Rz(*qubit, *angle))?;
                }
            }
        }
        Ok(sv)
    }
}

/// Angle requested at recursion round k (0-based) of an m-round chain:
/// sign·π/2^{m−k}, ending at the ±π/2 base case.
pub fn chain_angle(sign: i8, m: u32, k: u32) -> f64 {
    f64::from(sign) * PI / (1u64 << (m - k)) as f64
}

// --- transcript -----------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    ToServer,
    ToClient,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TranscriptEntry {
    pub round_index: usize,
    pub direction: Direction,
    /// Gates requested in this round; empty for server→client replies.
    pub requested: Vec<ServerGate>,
    /// Size of the quantum payload in qubits (the full register).
    pub qubit_count: usize,
}

/// Record of every client↔server exchange.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Transcript {
    entries: Vec<TranscriptEntry>,
}

impl Transcript {
    pub fn entries(&self) -> &[TranscriptEntry] {
        &self.entries
    }

    /// Number of to-server messages.
    pub fn total_rounds(&self) -> usize {
        self.entries
            .iter()
            .filter(|e| e.direction == Direction::ToServer)
            .count()
    }

    fn push_to_server(&mut self, requested: Vec<ServerGate>, qubit_count: usize) -> usize {
        debug_assert!(matches!(
            self.entries.last().map(|e| e.direction),
            None | Some(Direction::ToClient)
        ));
        let round_index = self.total_rounds();
        self.entries.push(TranscriptEntry {
            round_index,
            direction: Direction::ToServer,
            requested,
            qubit_count,
        });
        round_index
    }

    fn push_to_client(&mut self, round_index: usize, qubit_count: usize) {
        debug_assert!(matches!(
            self.entries.last().map(|e| e.direction),
            Some(Direction::ToServer)
        ));
        self.entries.push(TranscriptEntry {
            round_index,
            direction: Direction::ToClient,
            requested: Vec::new(),
            qubit_count,
        });
    }

    fn format_entry(e: &TranscriptEntry, out: &mut String) {
        let dir = match e.direction {
            Direction::ToServer => "c2s",
            Direction::ToClient => "s2c",
        };
        if e.requested.is_empty() {
            let _ = writeln!(
                out,
                "round={} dir={} gate=- qubits=- angle=-",
                e.round_index, dir
            );
            return;
        }
        // same-kind gates share a round; emit one line with all targets
        let name = e.requested[0].op.name();
        let qubits: Vec<String> = e
            .requested
            .iter()
            .flat_map(|g| g.op.qubits())
            .map(|q| q.to_string())
            .collect();
        let angle = match e.requested[0].op.angle() {
            Some(a) => format!("{a:.16e}"),
            None => "-".to_string(),
        };
        let _ = writeln!(
            out,
            "round={} dir={} gate={} qubits={} angle={}",
            e.round_index,
            dir,
            name,
            qubits.join(","),
            angle
        );
    }

    /// Line-delimited export, one entry per line, alternating directions.
    pub fn export(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            Self::format_entry(e, &mut out);
        }
        out
    }

    /// The classical view of the server: only the to-server request lines.
    pub fn request_lines(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            if e.direction == Direction::ToServer {
                Self::format_entry(e, &mut out);
            }
        }
        out
    }
}

// --- client state and key sourcing -----------------------------------------

/// Where per-round pads come from: a seeded generator, or a pre-planned
/// script (used by forced-key tests and the exhaustive audits).
#[derive(Debug, Clone)]
pub enum KeySource {
    Random(ChaCha8Rng),
    Scripted(VecDeque<PauliKeySet>),
}

impl KeySource {
    pub fn seeded(seed: u64) -> Self {
        KeySource::Random(ChaCha8Rng::seed_from_u64(seed))
    }

    pub fn from_rng(rng: ChaCha8Rng) -> Self {
        KeySource::Random(rng)
    }

    pub fn scripted(rounds: Vec<PauliKeySet>) -> Self {
        KeySource::Scripted(rounds.into())
    }

    fn draw(&mut self, width: usize, round_index: usize) -> Result<PauliKeySet> {
        match self {
            KeySource::Random(rng) => pauli::gen_keys(width, rng, round_index),
            KeySource::Scripted(rounds) => {
                let ks = rounds.pop_front().ok_or_else(|| {
                    Error::Contract("scripted key source exhausted".into())
                })?;
                if ks.width() != width {
                    return Err(Error::Contract(format!(
                        "scripted key width {} does not match register width {width}",
                        ks.width()
                    )));
                }
                Ok(PauliKeySet::new(ks.keys().to_vec(), round_index))
            }
        }
    }
}

/// The client's side of a protocol session.
#[derive(Debug)]
pub struct ClientState {
    register: Statevector,
    keys: KeySource,
    key_history: Vec<PauliKeySet>,
    /// Unit scalar γ with ideal_state = γ · register: accumulates the
    /// physically irrelevant global phases from client-side shortcuts
    /// (Z in place of Rz(±π), decoy rotations on the ancilla).
    phase_accumulator: Complex64,
    ancilla_index: usize,
    decoys_enabled: bool,
}

impl ClientState {
    pub fn new(register: Statevector, ancilla_index: usize, keys: KeySource) -> Result<Self> {
        if ancilla_index >= register.num_qubits() {
            return Err(Error::Contract(format!(
                "ancilla index {ancilla_index} out of range for {}-qubit register",
                register.num_qubits()
            )));
        }
        Ok(ClientState {
            register,
            keys,
            key_history: Vec::new(),
            phase_accumulator: Complex64::new(1.0, 0.0),
            ancilla_index,
            decoys_enabled: true,
        })
    }

    pub fn register(&self) -> &Statevector {
        &self.register
    }

    pub fn phase_accumulator(&self) -> Complex64 {
        self.phase_accumulator
    }

    /// γ · register — the state the direct circuit would have produced,
    /// global phase included.
    pub fn ideal_register(&self) -> Statevector {
        let mut sv = self.register.clone();
        sv.scale_in_place(self.phase_accumulator);
        sv
    }

    pub fn ancilla_index(&self) -> usize {
        self.ancilla_index
    }

    pub fn key_history(&self) -> &[PauliKeySet] {
        &self.key_history
    }

    /// Total encryption bits drawn so far (2·n′ per round).
    pub fn key_bits_consumed(&self) -> usize {
        self.key_history
            .iter()
            .map(|ks| 2 * ks.width())
            .sum()
    }

    /// Disables decoy rounds. Negative-control only: the server-visible
    /// request stream then leaks the correction-key streak length.
    pub fn set_decoys_enabled(&mut self, enabled: bool) {
        self.decoys_enabled = enabled;
    }
}

// --- engine -----------------------------------------------------------------

struct Engine<'a> {
    client: &'a mut ClientState,
    transcript: &'a mut Transcript,
    /// Captured to-server messages (post-encryption), for the audits.
    messages: Option<&'a mut Vec<Statevector>>,
}

impl<'a> Engine<'a> {
    fn new(client: &'a mut ClientState, transcript: &'a mut Transcript) -> Self {
        Engine {
            client,
            transcript,
            messages: None,
        }
    }

    /// One encrypt-compute-decrypt exchange. Returns the pad drawn for the
    /// round so rotation chains can read their correction key.
    fn exchange(&mut self, ops: &[ServerOp]) -> Result<PauliKeySet> {
        debug_assert!(!ops.is_empty());
        debug_assert!(disjoint_qubits(ops));
        let width = self.client.register.num_qubits();
        let round = self.transcript.total_rounds();
        let keys = self.client.keys.draw(width, round)?;

        pauli::encrypt_in_place(&mut self.client.register, &keys)?;
        if let Some(sink) = self.messages.as_deref_mut() {
            sink.push(self.client.register.clone());
        }
        let gates: Vec<ServerGate> = ops
            .iter()
            .map(|op| ServerGate { op: *op, depth: round })
            .collect();
        let round = self.transcript.push_to_server(gates, width);

        // server side: honest application of exactly the requested gates
        for op in ops {
            self.client.register.apply_gate_in_place(&op.as_gate())?;
        }
        self.transcript.push_to_client(round, width);

        // client side: rewrite the pad across the gates, then strip it
        let mut updated = keys.clone();
        let mut phase = Complex64::new(1.0, 0.0);
        for op in ops {
            match *op {
                ServerOp::H { qubit } => {
                    let k = updated.key(qubit);
                    phase *= pauli::update_h_phase(k);
                    updated.set_key(qubit, pauli::update_h(k));
                }
                ServerOp::Cz { a, b } => {
                    let (k1, k2) = (updated.key(a), updated.key(b));
                    phase *= pauli::update_cz_phase(k1, k2);
                    let (k1, k2) = pauli::update_cz(k1, k2);
                    updated.set_key(a, k1);
                    updated.set_key(b, k2);
                }
                // pad survives a rotation unchanged; the Rz(2θ) correction
                // is the chain driver's job
                ServerOp::Rz { .. } => {}
            }
        }
        pauli::decrypt_pauli_in_place(&mut self.client.register, &updated)?;
        self.client.phase_accumulator *= phase.conj();
        self.client.key_history.push(keys.clone());
        Ok(keys)
    }

    /// Runs the m-round recursion delegating Rz(sign·π/2^m) on `qubit`.
    ///
    /// Round k requests Rz(sign·π/2^{m−k}) no matter what the keys are.
    /// While the correction streak lives, the rotations land on the real
    /// qubit; from the first a = 0 on, the client swaps in the ancilla and
    /// the remaining rounds are decoys.
    fn run_rz_chain(&mut self, qubit: usize, sign: i8, m: u32) -> Result<()> {
        if m == 0 {
            return Err(Error::InvalidParameter(
                "rotation exponent m must be >= 1".into(),
            ));
        }
        if !matches!(sign, 1 | -1) {
            return Err(Error::InvalidParameter(format!(
                "rotation sign must be ±1, got {sign}"
            )));
        }
        let ancilla = self.client.ancilla_index;
        if qubit == ancilla {
            return Err(Error::Contract(
                "cannot delegate a rotation on the ancilla qubit".into(),
            ));
        }
        if !self.client.register.qubit_is_zero(ancilla)? {
            return Err(Error::Contract(
                "ancilla qubit is not prepared in |0⟩".into(),
            ));
        }

        let mut run_of_one = RunOfOneState::Inactive;
        let mut swapped = false;
        for k in 0..m {
            if run_of_one.is_exhausted() && !swapped {
                // streak stopped in an earlier round: the working qubit is
                // done, so hide the remaining rounds behind the ancilla
                if self.client.decoys_enabled {
                    self.client
                        .register
                        .apply_gate_in_place(&GateKind::Swap(qubit, ancilla))?;
                    swapped = true;
                } else {
                    break;
                }
            }
            let angle = chain_angle(sign, m, k);
            let keys = self.exchange(&[ServerOp::Rz { qubit, angle }])?;
            let a = keys.key(qubit).a;

            if swapped {
                // decoy round: the rotation hit the swapped-in |a⟩ basis
                // state and contributed only the phase e^{i(2a−1)·angle/2}
                let gained = Complex64::from_polar(1.0, (2.0 * f64::from(a) - 1.0) * angle / 2.0);
                self.client.phase_accumulator *= gained.conj();
            } else if k == m - 1 {
                // base case ±π/2: pending Rz^a(±π) is a client-side Z^a
                // up to the tracked phase e^{∓iaπ/2}
                if a == 1 {
                    self.client
                        .register
                        .apply_gate_in_place(&GateKind::Z(qubit))?;
                    self.client.phase_accumulator *=
                        Complex64::from_polar(1.0, -f64::from(sign) * FRAC_PI_2);
                }
            } else {
                run_of_one = run_of_one.observe(a);
            }
        }
        if swapped {
            self.client
                .register
                .apply_gate_in_place(&GateKind::Swap(qubit, ancilla))?;
        }
        Ok(())
    }

    /// Algorithm for an arbitrary angle: pπ handled by a client-side Z (odd
    /// p) plus tracked phase, then one recursion per nonzero signed-dyadic
    /// digit.
    fn run_rz_arbitrary(&mut self, qubit: usize, theta: f64, epsilon: f64) -> Result<()> {
        let expansion = angle::expand(theta, epsilon)?;
        if expansion.p != 0 {
            if expansion.p.rem_euclid(2) == 1 {
                self.client
                    .register
                    .apply_gate_in_place(&GateKind::Z(qubit))?;
            }
            // Rz(pπ) = e^{−ipπ/2}·Z^{p mod 2}; the scalar is exact in ℤ/4
            self.client.phase_accumulator *= match expansion.p.rem_euclid(4) {
                0 => Complex64::new(1.0, 0.0),
                1 => Complex64::new(0.0, -1.0),
                2 => Complex64::new(-1.0, 0.0),
                _ => Complex64::new(0.0, 1.0),
            };
        }
        for (m, digit) in expansion.nonzero_digits() {
            self.run_rz_chain(qubit, digit, m)?;
        }
        Ok(())
    }
}

fn disjoint_qubits(ops: &[ServerOp]) -> bool {
    let mut seen = std::collections::HashSet::new();
    ops.iter()
        .flat_map(|op| op.qubits())
        .all(|q| seen.insert(q))
}

// --- public operations -------------------------------------------------------

/// Delegates Rz(sign·π/2^m) on `qubit` through the m-round recursion.
/// Returns the final register and the exchange transcript; the request
/// sequence is identical for every key draw.
pub fn delegate_rz_exact(
    client: &mut ClientState,
    sign: i8,
    m: u32,
    qubit: usize,
) -> Result<(Statevector, Transcript)> {
    let mut transcript = Transcript::default();
    Engine::new(client, &mut transcript).run_rz_chain(qubit, sign, m)?;
    Ok((client.register.clone(), transcript))
}

/// Delegates Rz(theta) to precision `epsilon` via the signed-dyadic
/// expansion; total rounds ≤ ⌈log2(π/ε)⌉².
pub fn delegate_rz_arbitrary(
    client: &mut ClientState,
    theta: f64,
    epsilon: f64,
    qubit: usize,
) -> Result<(Statevector, Transcript)> {
    let mut transcript = Transcript::default();
    Engine::new(client, &mut transcript).run_rz_arbitrary(qubit, theta, epsilon)?;
    Ok((client.register.clone(), transcript))
}

/// Output of a full protocol run.
#[derive(Debug)]
pub struct RunOutput {
    pub final_state: Statevector,
    pub transcript: Transcript,
    /// Per-round to-server messages; populated only when capture was
    /// requested.
    pub messages: Vec<Statevector>,
    /// Total encryption bits the client drew.
    pub key_bits_consumed: usize,
    pub phase_accumulator: Complex64,
}

/// Runs the full encrypt-compute-decrypt protocol over a computation set.
pub fn run_protocol(
    circuit: &ComputationSet,
    input: &Statevector,
    epsilon: f64,
    rng: ChaCha8Rng,
) -> Result<(Statevector, Transcript)> {
    let out = run_protocol_with(circuit, input, epsilon, KeySource::from_rng(rng), true, false)?;
    Ok((out.final_state, out.transcript))
}

/// Full-control variant: explicit key source, decoy policy, and optional
/// message capture for the audits.
pub fn run_protocol_with(
    circuit: &ComputationSet,
    input: &Statevector,
    epsilon: f64,
    keys: KeySource,
    decoys_enabled: bool,
    capture_messages: bool,
) -> Result<RunOutput> {
    if input.num_qubits() != circuit.n_prime() {
        return Err(Error::Contract(format!(
            "input width {} does not match n' = {}",
            input.num_qubits(),
            circuit.n_prime()
        )));
    }
    if !(epsilon > 0.0 && epsilon <= PI / 2.0) {
        return Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, pi/2], got {epsilon}"
        )));
    }
    let mut client = ClientState::new(input.clone(), circuit.ancilla_index(), keys)?;
    client.set_decoys_enabled(decoys_enabled);
    let mut transcript = Transcript::default();
    let mut messages = Vec::new();
    {
        let mut engine = Engine::new(&mut client, &mut transcript);
        if capture_messages {
            engine.messages = Some(&mut messages);
        }
        for step in circuit.steps() {
            match step {
                ProtocolStep::Clifford { ops, .. } => {
                    engine.exchange(ops)?;
                }
                ProtocolStep::RzExact {
                    qubit,
                    sign,
                    exponent,
                    ..
                } => {
                    engine.run_rz_chain(*qubit, *sign, *exponent)?;
                }
                ProtocolStep::RzApprox { qubit, angle, .. } => {
                    engine.run_rz_arbitrary(*qubit, *angle, epsilon)?;
                }
            }
        }
    }
    Ok(RunOutput {
        final_state: client.register().clone(),
        transcript,
        messages,
        key_bits_consumed: client.key_bits_consumed(),
        phase_accumulator: client.phase_accumulator(),
    })
}

// --- blindness audit -----------------------------------------------------------

/// Trace-distance bound for the quantum view of an audited round.
pub const AUDIT_DISTANCE_BOUND: f64 = 1e-9;

/// Cap on total key bits enumerated by the exhaustive audit (2^bits runs).
pub const AUDIT_MAX_KEY_BITS: u32 = 20;

#[derive(Debug, Clone)]
pub struct RoundAudit {
    pub round_index: usize,
    /// Trace distance between the round's message ensemble average and
    /// I/2^{n′}.
    pub trace_distance: f64,
    /// Histories that reached this round (all of them, unless decoys were
    /// disabled).
    pub histories: u64,
}

/// Result of the exhaustive server-view audit.
#[derive(Debug, Clone)]
pub struct BlindnessReport {
    pub per_round: Vec<RoundAudit>,
    pub max_trace_distance: f64,
    /// Check (i): every round's message ensemble is maximally mixed.
    pub quantum_view_blind: bool,
    /// Check (ii): the classical request stream is identical across all key
    /// draws.
    pub classical_view_uniform: bool,
    pub histories: u64,
    pub reference_requests: String,
}

fn scripted_history(n_prime: usize, rounds: usize, pattern: u64) -> KeySource {
    let bits_per_round = 2 * n_prime;
    let sets = (0..rounds)
        .map(|r| {
            PauliKeySet::from_bit_pattern(n_prime, pattern >> (r * bits_per_round), r)
        })
        .collect();
    KeySource::scripted(sets)
}

struct AuditAccum {
    sums: Vec<nalgebra::DMatrix<Complex64>>,
    counts: Vec<u64>,
    uniform: bool,
}

impl AuditAccum {
    fn identity(rounds: usize, dim: usize) -> Self {
        AuditAccum {
            sums: vec![nalgebra::DMatrix::zeros(dim, dim); rounds],
            counts: vec![0; rounds],
            uniform: true,
        }
    }

    fn merge(mut self, other: AuditAccum) -> Self {
        for (a, b) in self.sums.iter_mut().zip(other.sums) {
            *a += b;
        }
        for (a, b) in self.counts.iter_mut().zip(other.counts) {
            *a += b;
        }
        self.uniform &= other.uniform;
        self
    }
}

/// Audits the server's view of a protocol run: enumerates every key history
/// exhaustively, replays the protocol under each, and checks that (i) each
/// round's to-server message ensemble averages to I/2^{n′} and (ii) the
/// classical request stream never varies.
pub fn transcript_blindness_audit(
    circuit: &ComputationSet,
    input: &Statevector,
    epsilon: f64,
) -> Result<BlindnessReport> {
    transcript_blindness_audit_with(circuit, input, epsilon, true)
}

/// Audit variant with the decoy policy under caller control; disabling
/// decoys is the negative control that demonstrates the classical leak.
pub fn transcript_blindness_audit_with(
    circuit: &ComputationSet,
    input: &Statevector,
    epsilon: f64,
    decoys_enabled: bool,
) -> Result<BlindnessReport> {
    if circuit.n_prime() > 3 {
        return Err(Error::ResourceBound(format!(
            "audit enumerates 4^(n'·rounds) histories; n' = {} exceeds the 3-qubit bound",
            circuit.n_prime()
        )));
    }
    // canonical round count and reference classical view: with decoys on,
    // both are key-independent, so any key draw serves as the reference
    let reference = run_protocol_with(circuit, input, epsilon, KeySource::seeded(0), true, false)?;
    let rounds = reference.transcript.total_rounds();
    let total_bits = 2 * circuit.n_prime() * rounds;
    if total_bits as u32 > AUDIT_MAX_KEY_BITS {
        return Err(Error::ResourceBound(format!(
            "audit needs 2^{total_bits} histories, above the 2^{AUDIT_MAX_KEY_BITS} cap"
        )));
    }
    let histories: u64 = 1 << total_bits;
    let dim = 1usize << circuit.n_prime();
    let reference_requests = reference.transcript.request_lines();

    let replay = |pattern: u64| -> AuditAccum {
        let mut acc = AuditAccum::identity(rounds, dim);
        let out = run_protocol_with(
            circuit,
            input,
            epsilon,
            scripted_history(circuit.n_prime(), rounds, pattern),
            decoys_enabled,
            true,
        )
        .expect("audit replay cannot fail on a validated circuit");
        for (r, msg) in out.messages.iter().enumerate() {
            acc.sums[r] += density::projector_sum(dim, std::iter::once(msg));
            acc.counts[r] += 1;
        }
        acc.uniform = out.transcript.request_lines() == reference_requests;
        acc
    };

    #[cfg(feature = "parallel")]
    let acc = {
        use rayon::prelude::*;
        (0..histories)
            .into_par_iter()
            .map(replay)
            .reduce(|| AuditAccum::identity(rounds, dim), AuditAccum::merge)
    };
    #[cfg(not(feature = "parallel"))]
    let acc = (0..histories)
        .map(replay)
        .fold(AuditAccum::identity(rounds, dim), AuditAccum::merge);

    let mixed = density::DensityMatrix::maximally_mixed(dim);
    let mut per_round = Vec::with_capacity(rounds);
    let mut max_td: f64 = 0.0;
    for r in 0..rounds {
        let count = acc.counts[r];
        let avg = &acc.sums[r] / Complex64::new(count as f64, 0.0);
        let td = density::trace_distance_raw(&(avg - mixed.entries()));
        max_td = max_td.max(td);
        per_round.push(RoundAudit {
            round_index: r,
            trace_distance: td,
            histories: count,
        });
    }
    Ok(BlindnessReport {
        max_trace_distance: max_td,
        quantum_view_blind: per_round
            .iter()
            .all(|r| r.trace_distance < AUDIT_DISTANCE_BOUND),
        classical_view_uniform: acc.uniform,
        per_round,
        histories,
        reference_requests,
    })
}
