//! Independent dense-matrix route for cross-checking the statevector
//! kernels: every gate is built as a full 2^n × 2^n matrix from Kronecker
//! products of 2×2 blocks and identities, then applied by plain
//! matrix-vector multiplication.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::statevector::{GateKind, Statevector};

type CMat = DMatrix<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(dim: usize) -> CMat {
    CMat::identity(dim, dim)
}

pub fn h_block() -> CMat {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    CMat::from_row_slice(2, 2, &[c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)])
}

pub fn x_block() -> CMat {
    CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)])
}

pub fn z_block() -> CMat {
    CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(-1.0, 0.0)])
}

pub fn s_block() -> CMat {
    CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 1.0)])
}

pub fn t_block() -> CMat {
    let t = Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    CMat::from_row_slice(2, 2, &[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), t])
}

/// Rz(θ) = diag(e^{−iθ/2}, e^{+iθ/2}).
pub fn rz_block(theta: f64) -> CMat {
    CMat::from_diagonal(&nalgebra::DVector::from_vec(vec![
        Complex64::from_polar(1.0, -theta / 2.0),
        Complex64::from_polar(1.0, theta / 2.0),
    ]))
}

fn proj(bit: usize) -> CMat {
    let mut m = CMat::zeros(2, 2);
    m[(bit, bit)] = c(1.0, 0.0);
    m
}

/// Embeds a 2×2 block on `qubit` inside an n-qubit register:
/// I_{2^q} ⊗ block ⊗ I_{2^{n−1−q}} (qubit 0 is the leftmost factor).
pub fn embed_single(block: &CMat, qubit: usize, num_qubits: usize) -> CMat {
    let left = identity(1 << qubit);
    let right = identity(1 << (num_qubits - 1 - qubit));
    left.kronecker(block).kronecker(&right)
}

/// Full 2^n × 2^n unitary of a gate.
pub fn gate_unitary(gate: &GateKind, num_qubits: usize) -> Result<CMat> {
    gate.validate(num_qubits)?;
    let m = match *gate {
        GateKind::H(q) => embed_single(&h_block(), q, num_qubits),
        GateKind::X(q) => embed_single(&x_block(), q, num_qubits),
        GateKind::Z(q) => embed_single(&z_block(), q, num_qubits),
        GateKind::S(q) => embed_single(&s_block(), q, num_qubits),
        GateKind::T(q) => embed_single(&t_block(), q, num_qubits),
        GateKind::Rz(q, theta) => embed_single(&rz_block(theta), q, num_qubits),
        GateKind::Cx(ctrl, tgt) => {
            embed_single(&proj(0), ctrl, num_qubits)
                + embed_single(&proj(1), ctrl, num_qubits)
                    * embed_single(&x_block(), tgt, num_qubits)
        }
        GateKind::Cz(a, b) => {
            embed_single(&proj(0), a, num_qubits)
                + embed_single(&proj(1), a, num_qubits) * embed_single(&z_block(), b, num_qubits)
        }
        GateKind::Swap(a, b) => {
            let cx_ab = gate_unitary(&GateKind::Cx(a, b), num_qubits)?;
            let cx_ba = gate_unitary(&GateKind::Cx(b, a), num_qubits)?;
            &cx_ab * cx_ba * &cx_ab
        }
    };
    Ok(m)
}

/// Ordered product of a gate list as one dense unitary (first gate applied
/// first, i.e. rightmost in the product).
pub fn circuit_unitary(gates: &[GateKind], num_qubits: usize) -> Result<CMat> {
    let mut u = identity(1 << num_qubits);
    for g in gates {
        u = gate_unitary(g, num_qubits)? * u;
    }
    Ok(u)
}

/// Applies a gate through the dense-matrix route. Independent of the
/// bit-kernel path in `Statevector::apply_gate`.
pub fn dense_oracle_apply(state: &Statevector, gate: &GateKind) -> Result<Statevector> {
    let u = gate_unitary(gate, state.num_qubits())?;
    let v = nalgebra::DVector::from_column_slice(state.amplitudes());
    let out = u * v;
    Statevector::from_amplitudes(out.iter().copied().collect())
}

/// Largest elementwise magnitude difference between two matrices.
pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    assert_eq!(a.shape(), b.shape(), "shape mismatch");
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Checks U†U = I within `tol`.
pub fn is_unitary(u: &CMat, tol: f64) -> bool {
    let (r, cdim) = u.shape();
    if r != cdim {
        return false;
    }
    max_abs_diff(&(u.adjoint() * u), &identity(r)) <= tol
}

/// Error for callers that require a unitary input.
pub fn require_unitary(u: &CMat, tol: f64) -> Result<()> {
    if !is_unitary(u, tol) {
        return Err(Error::InvalidParameter(
            "matrix is not unitary within tolerance".into(),
        ));
    }
    Ok(())
}
