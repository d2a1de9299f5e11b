//! Density matrices, ensemble averaging, and the trace-distance metric used
//! by the blindness audits.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::statevector::Statevector;

const HERMITICITY_TOL: f64 = 1e-9;
const TRACE_TOL: f64 = 1e-9;
const PSD_TOL: f64 = 1e-9;

/// A dim × dim density operator (Hermitian, trace one, PSD within
/// tolerance).
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    dim: usize,
    entries: DMatrix<Complex64>,
}

impl DensityMatrix {
    /// Wraps a matrix after validating the density-operator invariants.
    pub fn new(entries: DMatrix<Complex64>) -> Result<Self> {
        let (r, c) = entries.shape();
        if r != c || !r.is_power_of_two() {
            return Err(Error::InvalidParameter(format!(
                "density matrix must be square with power-of-two dim, got {r}x{c}"
            )));
        }
        let herm_err = crate::dense::max_abs_diff(&entries, &entries.adjoint());
        if herm_err > HERMITICITY_TOL {
            return Err(Error::InvalidState(format!(
                "matrix is not Hermitian: max deviation {herm_err}"
            )));
        }
        let trace: Complex64 = entries.diagonal().iter().sum();
        if (trace.re - 1.0).abs() > TRACE_TOL || trace.im.abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {trace} is not 1")));
        }
        let dm = DensityMatrix { dim: r, entries };
        if dm.eigenvalues().iter().any(|&l| l < -PSD_TOL) {
            return Err(Error::InvalidState(
                "matrix has an eigenvalue below -1e-9".into(),
            ));
        }
        Ok(dm)
    }

    /// I / dim.
    pub fn maximally_mixed(dim: usize) -> Self {
        let scale = Complex64::new(1.0 / dim as f64, 0.0);
        DensityMatrix {
            dim,
            entries: DMatrix::identity(dim, dim) * scale,
        }
    }

    /// |ψ⟩⟨ψ|.
    pub fn projector(state: &Statevector) -> Self {
        let v = DVector::from_column_slice(state.amplitudes());
        let entries = &v * v.adjoint();
        DensityMatrix {
            dim: v.len(),
            entries,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entries(&self) -> &DMatrix<Complex64> {
        &self.entries
    }

    /// Eigenvalues of the (Hermitian) matrix, unsorted.
    pub fn eigenvalues(&self) -> Vec<f64> {
        self.entries
            .clone()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .copied()
            .collect()
    }
}

/// Σ w_i |ψ_i⟩⟨ψ_i| for nonnegative weights summing to 1.
pub fn density_average(states: &[Statevector], weights: &[f64]) -> Result<DensityMatrix> {
    if states.is_empty() || states.len() != weights.len() {
        return Err(Error::InvalidParameter(
            "states and weights must be nonempty and equal length".into(),
        ));
    }
    let dim = states[0].amplitudes().len();
    if states.iter().any(|s| s.amplitudes().len() != dim) {
        return Err(Error::Contract("states have mixed dimensions".into()));
    }
    if weights.iter().any(|&w| w < 0.0) {
        return Err(Error::InvalidParameter("weights must be nonnegative".into()));
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "weights sum to {total}, expected 1"
        )));
    }
    let mut acc = DMatrix::<Complex64>::zeros(dim, dim);
    for (s, &w) in states.iter().zip(weights) {
        let v = DVector::from_column_slice(s.amplitudes());
        acc += (&v * v.adjoint()) * Complex64::new(w, 0.0);
    }
    DensityMatrix::new(acc)
}

/// Accumulates Σ |ψ_i⟩⟨ψ_i| projector sums without per-state weights; used
/// by the exhaustive key-ensemble audits which normalize at the end.
pub fn projector_sum<'a, I: IntoIterator<Item = &'a Statevector>>(
    dim: usize,
    states: I,
) -> DMatrix<Complex64> {
    let mut acc = DMatrix::<Complex64>::zeros(dim, dim);
    for s in states {
        let v = DVector::from_column_slice(s.amplitudes());
        acc += &v * v.adjoint();
    }
    acc
}

/// (1/2) Σ |eig(ρ − σ)| — the trace distance.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim != sigma.dim {
        return Err(Error::Contract(format!(
            "dimension mismatch: {} vs {}",
            rho.dim, sigma.dim
        )));
    }
    let diff = rho.entries() - sigma.entries();
    Ok(trace_distance_raw(&diff))
}

/// Trace distance of a Hermitian difference matrix that is already formed.
pub fn trace_distance_raw(diff: &DMatrix<Complex64>) -> f64 {
    0.5 * diff
        .clone()
        .symmetric_eigen()
        .eigenvalues
        .iter()
        .map(|l| l.abs())
        .sum::<f64>()
}
