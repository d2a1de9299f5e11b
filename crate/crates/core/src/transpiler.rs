//! Circuit representation, the line-oriented text format, rewriting to the
//! {H, CZ, Rz} server set, Euler Z-X-Z decomposition, and computation-set
//! construction.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::angle;
use crate::dense;
use crate::error::{Error, Result};
use crate::protocol::{ComputationSet, ProtocolStep, ServerOp};
use crate::statevector::GateKind;

/// An ordered gate list on a fixed-width register. `global_phase` carries
/// the exact scalar relating this circuit's unitary to the unitary it was
/// rewritten from (1 for freshly parsed circuits), so phase-exact dense
/// comparisons stay possible after transpilation.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    pub num_qubits: usize,
    pub gates: Vec<GateKind>,
    pub global_phase: Complex64,
}

impl Circuit {
    pub fn new(num_qubits: usize, gates: Vec<GateKind>) -> Result<Self> {
        if num_qubits == 0 {
            return Err(Error::InvalidCircuit("circuit needs at least one qubit".into()));
        }
        for g in &gates {
            g.validate(num_qubits)?;
        }
        Ok(Circuit {
            num_qubits,
            gates,
            global_phase: Complex64::new(1.0, 0.0),
        })
    }

    /// Dense unitary of the gate list times the tracked global phase;
    /// equals the unitary of the circuit this one was rewritten from.
    pub fn unitary(&self) -> Result<DMatrix<Complex64>> {
        Ok(dense::circuit_unitary(&self.gates, self.num_qubits)? * self.global_phase)
    }
}

// --- text format ---------------------------------------------------------
//
// First non-comment line: `qubits <n>`. Then one gate per line:
// h/x/z/s/t <q> | rz <q> <angle> | cx <c> <t> | cz <q1> <q2>.
// `#` starts a comment; blank lines are ignored.

/// Parses the circuit text format, reporting the 1-based line number on
/// errors.
pub fn parse_circuit(text: &str) -> Result<Circuit> {
    let mut num_qubits: Option<usize> = None;
    let mut gates = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let word = parts.next().unwrap();
        let args: Vec<&str> = parts.collect();
        let err = |message: String| Error::Parse {
            line: line_no,
            message,
        };

        if num_qubits.is_none() {
            if word != "qubits" {
                return Err(err(format!("expected `qubits <n>`, found `{word}`")));
            }
            let n: usize = args
                .first()
                .ok_or_else(|| err("missing qubit count".into()))?
                .parse()
                .map_err(|_| err(format!("bad qubit count `{}`", args[0])))?;
            if n == 0 {
                return Err(err("qubit count must be >= 1".into()));
            }
            num_qubits = Some(n);
            continue;
        }
        let n = num_qubits.unwrap();

        let parse_qubit = |s: &str| -> Result<usize> {
            let q: usize = s
                .parse()
                .map_err(|_| err(format!("bad qubit index `{s}`")))?;
            if q >= n {
                return Err(err(format!("qubit index {q} out of range (n = {n})")));
            }
            Ok(q)
        };
        let expect_arity = |want: usize| -> Result<()> {
            if args.len() != want {
                return Err(err(format!(
                    "gate `{word}` takes {want} argument(s), got {}",
                    args.len()
                )));
            }
            Ok(())
        };

        let gate = match word {
            "h" | "x" | "z" | "s" | "t" => {
                expect_arity(1)?;
                let q = parse_qubit(args[0])?;
                match word {
                    "h" => GateKind::H(q),
                    "x" => GateKind::X(q),
                    "z" => GateKind::Z(q),
                    "s" => GateKind::S(q),
                    _ => GateKind::T(q),
                }
            }
            "rz" => {
                expect_arity(2)?;
                let q = parse_qubit(args[0])?;
                let theta: f64 = args[1]
                    .parse()
                    .map_err(|_| err(format!("malformed angle `{}`", args[1])))?;
                if !theta.is_finite() {
                    return Err(err(format!("angle must be finite, got `{}`", args[1])));
                }
                GateKind::Rz(q, theta)
            }
            "cx" | "cz" => {
                expect_arity(2)?;
                let a = parse_qubit(args[0])?;
                let b = parse_qubit(args[1])?;
                if a == b {
                    return Err(err(format!("gate `{word}` needs two distinct qubits")));
                }
                if word == "cx" {
                    GateKind::Cx(a, b)
                } else {
                    GateKind::Cz(a, b)
                }
            }
            other => return Err(err(format!("unknown gate `{other}`"))),
        };
        gates.push(gate);
    }
    let num_qubits =
        num_qubits.ok_or_else(|| Error::Parse { line: 1, message: "empty circuit text".into() })?;
    Circuit::new(num_qubits, gates)
}

/// Emits the text format; angles carry 17 significant digits so parsing the
/// output reproduces the circuit bit-exactly.
pub fn serialize_circuit(c: &Circuit) -> String {
    let mut out = format!("qubits {}\n", c.num_qubits);
    for g in &c.gates {
        let line = match *g {
            GateKind::H(q) => format!("h {q}"),
            GateKind::X(q) => format!("x {q}"),
            GateKind::Z(q) => format!("z {q}"),
            GateKind::S(q) => format!("s {q}"),
            GateKind::T(q) => format!("t {q}"),
            GateKind::Rz(q, theta) => format!("rz {q} {theta:.16e}"),
            GateKind::Cx(a, b) => format!("cx {a} {b}"),
            GateKind::Cz(a, b) => format!("cz {a} {b}"),
            GateKind::Swap(a, b) => format!("swap {a} {b}"),
        };
        out.push_str(&line);
        out.push('\n');
    }
    out
}

// --- server-set rewriting ---------------------------------------------------

/// Rewrites a circuit onto the server set {H, CZ, Rz}:
/// X → H·Rz(π)·H, Z → Rz(π), S → Rz(π/2), T → Rz(π/4),
/// CX → H(target)·CZ·H(target). Pure phase-gate substitutions shift the
/// unitary by a known scalar, accumulated into `global_phase` so the
/// rewritten circuit's phased unitary equals the input's exactly.
pub fn to_server_set(c: &Circuit) -> Result<Circuit> {
    let mut gates = Vec::with_capacity(c.gates.len() * 2);
    let mut phase = c.global_phase;
    for g in &c.gates {
        match *g {
            GateKind::H(q) => gates.push(GateKind::H(q)),
            GateKind::Cz(a, b) => gates.push(GateKind::Cz(a, b)),
            GateKind::Rz(q, theta) => gates.push(GateKind::Rz(q, theta)),
            // Z = i·Rz(π)
            GateKind::Z(q) => {
                gates.push(GateKind::Rz(q, PI));
                phase *= Complex64::new(0.0, 1.0);
            }
            // X = i·H·Rz(π)·H
            GateKind::X(q) => {
                gates.extend([GateKind::H(q), GateKind::Rz(q, PI), GateKind::H(q)]);
                phase *= Complex64::new(0.0, 1.0);
            }
            // S = e^{iπ/4}·Rz(π/2)
            GateKind::S(q) => {
                gates.push(GateKind::Rz(q, FRAC_PI_2));
                phase *= Complex64::from_polar(1.0, FRAC_PI_4);
            }
            // T = e^{iπ/8}·Rz(π/4)
            GateKind::T(q) => {
                gates.push(GateKind::Rz(q, FRAC_PI_4));
                phase *= Complex64::from_polar(1.0, PI / 8.0);
            }
            // CX = H₂·CZ·H₂, exactly
            GateKind::Cx(ctrl, tgt) => {
                gates.extend([
                    GateKind::H(tgt),
                    GateKind::Cz(ctrl, tgt),
                    GateKind::H(tgt),
                ]);
            }
            GateKind::Swap(_, _) => {
                return Err(Error::UnsupportedGate(
                    "swap has no server-set rewrite".into(),
                ))
            }
        }
    }
    Ok(Circuit {
        num_qubits: c.num_qubits,
        gates,
        global_phase: phase,
    })
}

// --- Euler Z-X-Z decomposition ------------------------------------------------

/// Angles of U = e^{iφ}·Rz(α)·Rx(β)·Rz(γ) with β ∈ [0, π] and
/// α, γ, φ ∈ (−π, π]; degenerate β ∈ {0, π} resolves to γ = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerAngles {
    pub phi: f64,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
}

fn wrap_angle(x: f64) -> f64 {
    // into (−π, π]
    let mut y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y -= 2.0 * PI;
    }
    y
}

impl EulerAngles {
    /// e^{iφ}·Rz(α)·Rx(β)·Rz(γ) as a dense 2×2 matrix (Rx(β) = H·Rz(β)·H).
    pub fn reconstruct(&self) -> DMatrix<Complex64> {
        let rx = dense::h_block() * dense::rz_block(self.beta) * dense::h_block();
        let u = dense::rz_block(self.alpha) * rx * dense::rz_block(self.gamma);
        u * Complex64::from_polar(1.0, self.phi)
    }
}

/// Decomposes a 2×2 unitary into Z-X-Z Euler angles. The reconstruction
/// matches the input within 1e-9 elementwise.
pub fn euler_zxz(u: &DMatrix<Complex64>) -> Result<EulerAngles> {
    if u.shape() != (2, 2) {
        return Err(Error::InvalidParameter("expected a 2x2 matrix".into()));
    }
    dense::require_unitary(u, 1e-9)?;
    let (u00, u01, u10, u11) = (u[(0, 0)], u[(0, 1)], u[(1, 0)], u[(1, 1)]);
    // |u00| = cos(β/2), |u10| = sin(β/2)
    let beta = 2.0 * u10.norm().atan2(u00.norm());
    const DEGENERATE: f64 = 1e-12;

    let (alpha, gamma) = if u10.norm() < DEGENERATE {
        // diagonal: U = e^{iφ}·Rz(α+γ), canonical γ = 0
        (wrap_angle(u11.arg() - u00.arg()), 0.0)
    } else if u00.norm() < DEGENERATE {
        // anti-diagonal (β = π): canonical γ = 0, u10/u01 = e^{i(α−γ)}
        (wrap_angle((u10 / u01).arg()), 0.0)
    } else {
        // generic: arg(u10) − arg(u00) = α − π/2 and
        //          arg(u11) − arg(u10) = γ + π/2, both φ-free
        let alpha = wrap_angle(u10.arg() - u00.arg() + FRAC_PI_2);
        let gamma = wrap_angle(u11.arg() - u10.arg() - FRAC_PI_2);
        (alpha, gamma)
    };

    // recover φ from whichever entry is better conditioned
    let half = Complex64::from_polar(1.0, (alpha + gamma) / 2.0);
    let phi = if u00.norm() >= u10.norm() {
        (u00 * half).arg()
    } else {
        let diff = Complex64::from_polar(1.0, (alpha - gamma) / 2.0);
        (u10 * Complex64::new(0.0, 1.0) / diff).arg()
    };
    let angles = EulerAngles {
        phi: wrap_angle(phi),
        alpha,
        beta,
        gamma,
    };
    let err = dense::max_abs_diff(&angles.reconstruct(), u);
    if err > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "euler decomposition failed to reconstruct input (error {err})"
        )));
    }
    Ok(angles)
}

// --- computation set construction ----------------------------------------------

/// Builds the depth-ordered computation set 𝒥 from a server-set circuit.
///
/// Gates pack as-soon-as-possible: each lands at the earliest depth where
/// its qubits are free, joining a depth only with gates of the same kind.
/// A dyadic Rz(±π/2^m) expands into its m scheduled recursion rounds on m
/// consecutive depths; rotation delegations are serialized (one shared
/// ancilla), so rotation slots are exclusive across all wires. One ancilla
/// is appended as the highest qubit index, giving n′ = num_qubits + 1.
pub fn build_computation_set(c: &Circuit) -> Result<ComputationSet> {
    let n_prime = c.num_qubits + 1;
    let mut wire_free = vec![0usize; c.num_qubits];
    // depth ranges claimed by rotation chains, plus per-depth gate kind
    let mut rotation_ranges: Vec<(usize, usize)> = Vec::new();
    let mut depth_kind: Vec<&'static str> = Vec::new();
    let mut clifford_at: std::collections::BTreeMap<usize, Vec<ServerOp>> =
        std::collections::BTreeMap::new();
    let mut rotation_barrier = 0usize;
    let mut steps: Vec<ProtocolStep> = Vec::new();

    let note_kind = |depth: usize, kind: &'static str, depth_kind: &mut Vec<&'static str>| {
        if depth_kind.len() <= depth {
            depth_kind.resize(depth + 1, "");
        }
        depth_kind[depth] = kind;
    };

    for g in &c.gates {
        let op = match crate::protocol::server_op_from_gate(g) {
            Some(op) => op,
            None => {
                return Err(Error::InvalidCircuit(format!(
                    "gate `{}` is outside the server set",
                    g.name()
                )))
            }
        };
        if let ServerOp::Rz { qubit, angle } = op {
            if angle == 0.0 {
                continue; // identity rotation carries no schedule slot
            }
            // rotation delegations are serialized and exclusive: start at
            // the global frontier so no other gate shares their depths
            let start = wire_free
                .iter()
                .copied()
                .chain([rotation_barrier, depth_kind.len()])
                .max()
                .unwrap_or(0);
            match angle::dyadic_exponent(angle) {
                Some((sign, m)) => {
                    for k in 0..m as usize {
                        note_kind(start + k, "rz", &mut depth_kind);
                    }
                    rotation_ranges.push((start, start + m as usize));
                    rotation_barrier = start + m as usize;
                    wire_free[qubit] = rotation_barrier;
                    steps.push(ProtocolStep::RzExact {
                        qubit,
                        sign,
                        exponent: m,
                        start_depth: start,
                    });
                }
                None => {
                    note_kind(start, "rz", &mut depth_kind);
                    rotation_ranges.push((start, start + 1));
                    rotation_barrier = start + 1;
                    wire_free[qubit] = rotation_barrier;
                    steps.push(ProtocolStep::RzApprox {
                        qubit,
                        angle,
                        depth: start,
                    });
                }
            }
        } else {
            // H or CZ: earliest depth where the wires are free, skipping
            // rotation slots and joining a depth only with the same kind
            let kind = op.name();
            let qs = op.qubits();
            let mut d = qs.iter().map(|&q| wire_free[q]).max().unwrap_or(0);
            loop {
                if let Some(&(_, end)) = rotation_ranges.iter().find(|&&(s, e)| d >= s && d < e) {
                    d = end;
                    continue;
                }
                let occupied = depth_kind.get(d).copied().unwrap_or("");
                if occupied.is_empty() || occupied == kind {
                    break;
                }
                d += 1;
            }
            note_kind(d, kind, &mut depth_kind);
            for &q in &qs {
                wire_free[q] = d + 1;
            }
            clifford_at.entry(d).or_default().push(op);
        }
    }

    for (depth, ops) in clifford_at {
        steps.push(ProtocolStep::Clifford { depth, ops });
    }
    steps.sort_by_key(|s| match s {
        ProtocolStep::Clifford { depth, .. } => *depth,
        ProtocolStep::RzExact { start_depth, .. } => *start_depth,
        ProtocolStep::RzApprox { depth, .. } => *depth,
    });
    ComputationSet::assemble(steps, n_prime)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::protocol::ServerGate;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parse_basic_circuit() {
        let c = parse_circuit("qubits 2\nh 0\ncx 0 1\n").unwrap();
        assert_eq!(c.num_qubits, 2);
        assert_eq!(c.gates, vec![GateKind::H(0), GateKind::Cx(0, 1)]);
    }

    #[test]
    fn parse_rz_angle() {
        let c = parse_circuit("qubits 1\nrz 0 0.39269908").unwrap();
        match c.gates[0] {
            GateKind::Rz(0, theta) => assert!((theta - PI / 8.0).abs() < 1e-7),
            ref g => panic!("unexpected gate {g:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        match parse_circuit("qubits 1\nfoo 0") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_circuit("qubits 2\nh 0\ncx 0 5") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
        match parse_circuit("qubits 1\nrz 0 abc") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn comments_and_blanks_ignored() {
        let c = parse_circuit("# header\n\nqubits 2\nh 0   # inline\n\ncz 0 1\n").unwrap();
        assert_eq!(c.gates.len(), 2);
    }

    #[test]
    fn serialize_round_trip() {
        let c = Circuit::new(
            3,
            vec![
                GateKind::H(0),
                GateKind::Rz(1, 0.123456789012345),
                GateKind::T(2),
                GateKind::Cx(0, 2),
                GateKind::Cz(1, 2),
            ],
        )
        .unwrap();
        let back = parse_circuit(&serialize_circuit(&c)).unwrap();
        assert_eq!(back.num_qubits, c.num_qubits);
        assert_eq!(back.gates, c.gates);
    }

    #[test]
    fn server_set_rewrites() {
        let c = Circuit::new(2, vec![GateKind::Cx(0, 1)]).unwrap();
        let s = to_server_set(&c).unwrap();
        assert_eq!(
            s.gates,
            vec![GateKind::H(1), GateKind::Cz(0, 1), GateKind::H(1)]
        );

        let c = Circuit::new(1, vec![GateKind::T(0)]).unwrap();
        let s = to_server_set(&c).unwrap();
        assert_eq!(s.gates, vec![GateKind::Rz(0, FRAC_PI_4)]);

        let c = Circuit::new(
            2,
            vec![GateKind::H(0), GateKind::Rz(0, PI / 8.0), GateKind::Cx(0, 1)],
        )
        .unwrap();
        let s = to_server_set(&c).unwrap();
        assert_eq!(
            s.gates,
            vec![
                GateKind::H(0),
                GateKind::Rz(0, PI / 8.0),
                GateKind::H(1),
                GateKind::Cz(0, 1),
                GateKind::H(1),
            ]
        );
    }

    #[test]
    fn server_set_preserves_unitary_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(91);
        for _ in 0..50 {
            let n = rng.gen_range(1..=3);
            let mut gates = Vec::new();
            for _ in 0..rng.gen_range(1..=10) {
                let q = rng.gen_range(0..n);
                gates.push(match rng.gen_range(0..8) {
                    0 => GateKind::H(q),
                    1 => GateKind::X(q),
                    2 => GateKind::Z(q),
                    3 => GateKind::S(q),
                    4 => GateKind::T(q),
                    5 => GateKind::Rz(q, rng.gen_range(-3.0..3.0)),
                    _ => {
                        if n == 1 {
                            GateKind::H(q)
                        } else {
                            let mut p = rng.gen_range(0..n);
                            while p == q {
                                p = rng.gen_range(0..n);
                            }
                            if rng.gen_bool(0.5) {
                                GateKind::Cx(q, p)
                            } else {
                                GateKind::Cz(q, p)
                            }
                        }
                    }
                });
            }
            let c = Circuit::new(n, gates).unwrap();
            let s = to_server_set(&c).unwrap();
            for g in &s.gates {
                assert!(crate::protocol::server_capability_guard(g));
            }
            let err = dense::max_abs_diff(&c.unitary().unwrap(), &s.unitary().unwrap());
            assert!(err < 1e-9, "unitary drift {err}");
        }
    }

    #[test]
    fn swap_is_unsupported() {
        let c = Circuit::new(2, vec![GateKind::Swap(0, 1)]).unwrap();
        match to_server_set(&c) {
            Err(Error::UnsupportedGate(msg)) => assert!(msg.contains("swap")),
            other => panic!("expected unsupported-gate error, got {other:?}"),
        }
    }

    #[test]
    fn euler_identity_and_diagonal() {
        let id = dense::identity(2);
        let e = euler_zxz(&id).unwrap();
        assert!(e.phi.abs() < 1e-12);
        assert!(e.alpha.abs() < 1e-12);
        assert!(e.beta.abs() < 1e-12);
        assert!(e.gamma.abs() < 1e-12);

        let rz = dense::rz_block(0.7);
        let e = euler_zxz(&rz).unwrap();
        assert!(e.beta.abs() < 1e-9);
        assert_eq!(e.gamma, 0.0);
        assert!((e.alpha - 0.7).abs() < 1e-9);
    }

    #[test]
    fn euler_hadamard_and_random() {
        let h = dense::h_block();
        let e = euler_zxz(&h).unwrap();
        assert!(dense::max_abs_diff(&e.reconstruct(), &h) < 1e-9);

        let mut rng = ChaCha8Rng::seed_from_u64(14);
        for _ in 0..100 {
            // random unitary: product of a few elementary blocks and a phase
            let mut u = dense::identity(2) * Complex64::from_polar(1.0, rng.gen_range(-3.0..3.0));
            for _ in 0..4 {
                u *= match rng.gen_range(0..3) {
                    0 => dense::h_block(),
                    1 => dense::rz_block(rng.gen_range(-3.0..3.0)),
                    _ => dense::h_block() * dense::rz_block(rng.gen_range(-3.0..3.0)),
                };
            }
            let e = euler_zxz(&u).unwrap();
            assert!(e.beta >= 0.0 && e.beta <= PI);
            assert!(dense::max_abs_diff(&e.reconstruct(), &u) < 1e-9, "{e:?}");
        }
    }

    #[test]
    fn euler_rejects_non_unitary() {
        let m = dense::identity(2) * Complex64::new(2.0, 0.0);
        assert!(matches!(euler_zxz(&m), Err(Error::InvalidParameter(_))));
    }

    fn depths_of(entries: &[ServerGate]) -> Vec<usize> {
        entries.iter().map(|e| e.depth).collect()
    }

    #[test]
    fn worked_example_schedule() {
        // transpiled [H(0), Rz(0,π/8), CX(0,1)] → 𝒥 with D′=6, n′=3
        let c = Circuit::new(
            2,
            vec![GateKind::H(0), GateKind::Rz(0, PI / 8.0), GateKind::Cx(0, 1)],
        )
        .unwrap();
        let set = build_computation_set(&to_server_set(&c).unwrap()).unwrap();
        assert_eq!(set.n_prime(), 3);
        assert_eq!(set.d_prime(), 6);
        assert_eq!(set.key_budget(), 36);
        assert_eq!(depths_of(set.entries()), vec![0, 0, 1, 2, 3, 4, 5]);
        let names: Vec<&str> = set.entries().iter().map(|e| e.op.name()).collect();
        assert_eq!(names, vec!["h", "h", "rz", "rz", "rz", "cz", "h"]);
        let angles: Vec<f64> = set
            .entries()
            .iter()
            .filter_map(|e| e.op.angle())
            .collect();
        assert!((angles[0] - PI / 8.0).abs() < 1e-15);
        assert!((angles[1] - PI / 4.0).abs() < 1e-15);
        assert!((angles[2] - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn single_h_schedule() {
        let c = Circuit::new(1, vec![GateKind::H(0)]).unwrap();
        let set = build_computation_set(&c).unwrap();
        assert_eq!(set.d_prime(), 1);
        assert_eq!(set.n_prime(), 2);
        assert_eq!(set.key_budget(), 4);
    }

    #[test]
    fn dyadic_rotation_expands() {
        let c = Circuit::new(1, vec![GateKind::Rz(0, FRAC_PI_4)]).unwrap();
        let set = build_computation_set(&c).unwrap();
        assert_eq!(set.d_prime(), 2);
        let angles: Vec<f64> = set
            .entries()
            .iter()
            .filter_map(|e| e.op.angle())
            .collect();
        assert!((angles[0] - FRAC_PI_4).abs() < 1e-15);
        assert!((angles[1] - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn non_server_gate_rejected() {
        let c = Circuit::new(1, vec![GateKind::T(0)]).unwrap();
        assert!(matches!(
            build_computation_set(&c),
            Err(Error::InvalidCircuit(_))
        ));
    }
}
