//! Dense statevector simulation of few-qubit registers.
//!
//! Basis-state labels are big-endian: qubit 0 is the leftmost (most
//! significant) bit of the index, so for a 2-qubit register |10⟩ lives at
//! amplitude index `0b10`. All gates use the convention
//! Rz(θ) = diag(e^{−iθ/2}, e^{+iθ/2}).

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

/// Tolerance for norm and invariant checks.
pub const NORM_TOL: f64 = 1e-9;

/// A gate acting on a statevector. Qubit indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    H(usize),
    X(usize),
    Z(usize),
    S(usize),
    T(usize),
    Rz(usize, f64),
    Cx(usize, usize),
    Cz(usize, usize),
    Swap(usize, usize),
}

impl GateKind {
    /// Qubits the gate acts on, in declaration order.
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            GateKind::H(q)
            | GateKind::X(q)
            | GateKind::Z(q)
            | GateKind::S(q)
            | GateKind::T(q)
            | GateKind::Rz(q, _) => vec![q],
            GateKind::Cx(a, b) | GateKind::Cz(a, b) | GateKind::Swap(a, b) => vec![a, b],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateKind::H(_) => "h",
            GateKind::X(_) => "x",
            GateKind::Z(_) => "z",
            GateKind::S(_) => "s",
            GateKind::T(_) => "t",
            GateKind::Rz(..) => "rz",
            GateKind::Cx(..) => "cx",
            GateKind::Cz(..) => "cz",
            GateKind::Swap(..) => "swap",
        }
    }

    /// Checks index bounds, index distinctness, and angle finiteness
    /// against a register of `num_qubits` qubits.
    pub fn validate(&self, num_qubits: usize) -> Result<()> {
        let qs = self.qubits();
        for &q in &qs {
            if q >= num_qubits {
                return Err(Error::Contract(format!(
                    "qubit index {q} out of range for {num_qubits}-qubit register"
                )));
            }
        }
        if qs.len() == 2 && qs[0] == qs[1] {
            return Err(Error::Contract(format!(
                "gate {} uses qubit {} twice",
                self.name(),
                qs[0]
            )));
        }
        if let GateKind::Rz(_, theta) = self {
            if !theta.is_finite() {
                return Err(Error::InvalidParameter(format!(
                    "rz angle must be finite, got {theta}"
                )));
            }
        }
        Ok(())
    }
}

/// Complex amplitude vector over `n` qubits; the sole carrier of quantum
/// state. Immutable through the public API except via explicit
/// `apply_*_in_place` calls.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl Statevector {
    /// |0…0⟩ on `num_qubits` qubits.
    pub fn zero(num_qubits: usize) -> Self {
        assert!(num_qubits >= 1, "register needs at least one qubit");
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << num_qubits];
        amps[0] = Complex64::new(1.0, 0.0);
        Statevector { num_qubits, amps }
    }

    /// Computational basis state |index⟩ (big-endian labels).
    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        if index >= 1 << num_qubits {
            return Err(Error::Contract(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut sv = Statevector::zero(num_qubits);
        sv.amps[0] = Complex64::new(0.0, 0.0);
        sv.amps[index] = Complex64::new(1.0, 0.0);
        Ok(sv)
    }

    /// Builds a register from raw amplitudes; the length must be a power of
    /// two and the squared-magnitude sum must be 1 within 1e-9.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self> {
        if amps.is_empty() || !amps.len().is_power_of_two() {
            return Err(Error::InvalidState(format!(
                "amplitude count {} is not a power of two",
                amps.len()
            )));
        }
        let num_qubits = amps.len().trailing_zeros() as usize;
        if num_qubits == 0 {
            return Err(Error::InvalidState("register needs at least one qubit".into()));
        }
        let sv = Statevector { num_qubits, amps };
        let norm = sv.norm();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidState(format!(
                "state norm {norm} deviates from 1 beyond {NORM_TOL}"
            )));
        }
        Ok(sv)
    }

    /// Haar-ish random normalized state: i.i.d. complex Gaussian amplitudes,
    /// normalized. Good enough for property tests.
    pub fn random<R: Rng>(num_qubits: usize, rng: &mut R) -> Self {
        use rand::distributions::Distribution;
        let normal = rand_distr_normal();
        let mut amps: Vec<Complex64> = (0..1usize << num_qubits)
            .map(|_| Complex64::new(normal.sample(rng), normal.sample(rng)))
            .collect();
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        for a in &mut amps {
            *a /= norm;
        }
        Statevector { num_qubits, amps }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// ⟨self|other⟩.
    pub fn inner(&self, other: &Statevector) -> Result<Complex64> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::Contract(format!(
                "dimension mismatch: {} vs {} qubits",
                self.num_qubits, other.num_qubits
            )));
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Tensor product self ⊗ other (other's qubits appended after self's).
    pub fn tensor(&self, other: &Statevector) -> Statevector {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        Statevector {
            num_qubits: self.num_qubits + other.num_qubits,
            amps,
        }
    }

    /// Applies `gate`, returning the new state; the input is unmodified.
    pub fn apply_gate(&self, gate: &GateKind) -> Result<Statevector> {
        let mut out = self.clone();
        out.apply_gate_in_place(gate)?;
        Ok(out)
    }

    /// In-place variant used by the protocol engine's hot loops.
    pub fn apply_gate_in_place(&mut self, gate: &GateKind) -> Result<()> {
        gate.validate(self.num_qubits)?;
        let n = self.num_qubits;
        // Bit position of qubit q within an amplitude index.
        let sh = |q: usize| n - 1 - q;
        match *gate {
            GateKind::H(q) => kernels::apply_single(&mut self.amps, sh(q), kernels::H_MAT),
            GateKind::X(q) => kernels::apply_single(&mut self.amps, sh(q), kernels::X_MAT),
            GateKind::Z(q) => kernels::apply_diag(
                &mut self.amps,
                sh(q),
                Complex64::new(1.0, 0.0),
                Complex64::new(-1.0, 0.0),
            ),
            GateKind::S(q) => kernels::apply_diag(
                &mut self.amps,
                sh(q),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 1.0),
            ),
            GateKind::T(q) => kernels::apply_diag(
                &mut self.amps,
                sh(q),
                Complex64::new(1.0, 0.0),
                Complex64::from_polar(1.0, std::f64::consts::FRAC_PI_4),
            ),
            GateKind::Rz(q, theta) => kernels::apply_diag(
                &mut self.amps,
                sh(q),
                Complex64::from_polar(1.0, -theta / 2.0),
                Complex64::from_polar(1.0, theta / 2.0),
            ),
            GateKind::Cx(c, t) => kernels::apply_cx(&mut self.amps, sh(c), sh(t)),
            GateKind::Cz(a, b) => kernels::apply_cz(&mut self.amps, sh(a), sh(b)),
            GateKind::Swap(a, b) => kernels::apply_swap(&mut self.amps, sh(a), sh(b)),
        }
        Ok(())
    }

    /// Multiplies every amplitude by a scalar (used for tracked global
    /// phases; the caller is responsible for keeping |c| = 1).
    pub fn scale_in_place(&mut self, c: Complex64) {
        for a in &mut self.amps {
            *a *= c;
        }
    }

    /// Probability of reading 1 on `qubit`.
    pub fn probability_one(&self, qubit: usize) -> Result<f64> {
        if qubit >= self.num_qubits {
            return Err(Error::Contract(format!(
                "qubit index {qubit} out of range"
            )));
        }
        let shift = self.num_qubits - 1 - qubit;
        Ok(self
            .amps
            .iter()
            .enumerate()
            .filter(|(i, _)| (i >> shift) & 1 == 1)
            .map(|(_, a)| a.norm_sqr())
            .sum())
    }

    /// Born-rule measurement of one qubit. Returns the outcome bit and the
    /// renormalized collapsed state; the input is unmodified.
    pub fn measure<R: Rng>(&self, qubit: usize, rng: &mut R) -> Result<(u8, Statevector)> {
        let norm = self.norm();
        if (norm - 1.0).abs() > 1e-6 {
            return Err(Error::InvalidState(format!(
                "cannot measure a state with norm {norm}"
            )));
        }
        let p_one = self.probability_one(qubit)?;
        let outcome = u8::from(rng.gen::<f64>() < p_one);
        let shift = self.num_qubits - 1 - qubit;
        let mut amps = self.amps.clone();
        let mut kept = 0.0;
        for (i, a) in amps.iter_mut().enumerate() {
            if ((i >> shift) & 1) as u8 == outcome {
                kept += a.norm_sqr();
            } else {
                *a = Complex64::new(0.0, 0.0);
            }
        }
        let scale = 1.0 / kept.sqrt();
        for a in &mut amps {
            *a *= scale;
        }
        Ok((
            outcome,
            Statevector {
                num_qubits: self.num_qubits,
                amps,
            },
        ))
    }

    /// True when `qubit` is |0⟩ with certainty (within tolerance).
    pub fn qubit_is_zero(&self, qubit: usize) -> Result<bool> {
        Ok(self.probability_one(qubit)? < 1e-18)
    }
}

/// |⟨a|b⟩| — overlap magnitude, insensitive to global phase.
pub fn fidelity_up_to_phase(a: &Statevector, b: &Statevector) -> Result<f64> {
    Ok(a.inner(b)?.norm())
}

fn rand_distr_normal() -> impl rand::distributions::Distribution<f64> {
    // Box-Muller via two uniforms; avoids a rand_distr dependency.
    struct BoxMuller;
    impl rand::distributions::Distribution<f64> for BoxMuller {
        fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
            let u: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
            let v: f64 = rng.gen();
            (-2.0 * u.ln()).sqrt() * (2.0 * std::f64::consts::PI * v).cos()
        }
    }
    BoxMuller
}

/// Gate application kernels over raw amplitude slices.
///
/// Each kernel has a sequential implementation and, with the `parallel`
/// feature, a rayon one; the undecorated entry points dispatch on slice
/// length so small registers skip the fork-join overhead. The `_seq`/`_par`
/// variants stay public for the criterion benches.
pub mod kernels {
    use num_complex::Complex64;

    #[cfg(feature = "parallel")]
    use rayon::prelude::*;

    /// States below this amplitude count always run sequentially.
    pub const PAR_THRESHOLD: usize = 1 << 13;

    pub const H_MAT: [Complex64; 4] = {
        let h = Complex64 {
            re: std::f64::consts::FRAC_1_SQRT_2,
            im: 0.0,
        };
        let nh = Complex64 {
            re: -std::f64::consts::FRAC_1_SQRT_2,
            im: 0.0,
        };
        [h, h, h, nh]
    };

    pub const X_MAT: [Complex64; 4] = {
        let zero = Complex64 { re: 0.0, im: 0.0 };
        let one = Complex64 { re: 1.0, im: 0.0 };
        [zero, one, one, zero]
    };

    #[inline]
    fn single_on_chunk(chunk: &mut [Complex64], stride: usize, u: &[Complex64; 4]) {
        let (lo, hi) = chunk.split_at_mut(stride);
        for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
            let x = *a;
            let y = *b;
            *a = u[0] * x + u[1] * y;
            *b = u[2] * x + u[3] * y;
        }
    }

    /// u = [u00, u01, u10, u11] row-major on the qubit at bit `shift`.
    pub fn apply_single_seq(amps: &mut [Complex64], shift: usize, u: [Complex64; 4]) {
        let stride = 1 << shift;
        for chunk in amps.chunks_exact_mut(2 * stride) {
            single_on_chunk(chunk, stride, &u);
        }
    }

    #[cfg(feature = "parallel")]
    pub fn apply_single_par(amps: &mut [Complex64], shift: usize, u: [Complex64; 4]) {
        let stride = 1 << shift;
        amps.par_chunks_exact_mut(2 * stride)
            .for_each(|chunk| single_on_chunk(chunk, stride, &u));
    }

    pub fn apply_single(amps: &mut [Complex64], shift: usize, u: [Complex64; 4]) {
        #[cfg(feature = "parallel")]
        if amps.len() >= PAR_THRESHOLD {
            return apply_single_par(amps, shift, u);
        }
        apply_single_seq(amps, shift, u);
    }

    /// Diagonal gate diag(d0, d1) on the qubit at bit `shift`.
    pub fn apply_diag_seq(amps: &mut [Complex64], shift: usize, d0: Complex64, d1: Complex64) {
        for (i, a) in amps.iter_mut().enumerate() {
            if (i >> shift) & 1 == 0 {
                *a *= d0;
            } else {
                *a *= d1;
            }
        }
    }

    #[cfg(feature = "parallel")]
    pub fn apply_diag_par(amps: &mut [Complex64], shift: usize, d0: Complex64, d1: Complex64) {
        amps.par_iter_mut().enumerate().for_each(|(i, a)| {
            if (i >> shift) & 1 == 0 {
                *a *= d0;
            } else {
                *a *= d1;
            }
        });
    }

    pub fn apply_diag(amps: &mut [Complex64], shift: usize, d0: Complex64, d1: Complex64) {
        #[cfg(feature = "parallel")]
        if amps.len() >= PAR_THRESHOLD {
            return apply_diag_par(amps, shift, d0, d1);
        }
        apply_diag_seq(amps, shift, d0, d1);
    }

    #[inline]
    fn cx_on_chunk(chunk: &mut [Complex64], base: usize, t_stride: usize, c_shift: usize) {
        for off in 0..t_stride {
            if ((base + off) >> c_shift) & 1 == 1 {
                chunk.swap(off, off + t_stride);
            }
        }
    }

    pub fn apply_cx_seq(amps: &mut [Complex64], c_shift: usize, t_shift: usize) {
        let t_stride = 1 << t_shift;
        for (ci, chunk) in amps.chunks_exact_mut(2 * t_stride).enumerate() {
            cx_on_chunk(chunk, ci * 2 * t_stride, t_stride, c_shift);
        }
    }

    #[cfg(feature = "parallel")]
    pub fn apply_cx_par(amps: &mut [Complex64], c_shift: usize, t_shift: usize) {
        let t_stride = 1 << t_shift;
        amps.par_chunks_exact_mut(2 * t_stride)
            .enumerate()
            .for_each(|(ci, chunk)| cx_on_chunk(chunk, ci * 2 * t_stride, t_stride, c_shift));
    }

    pub fn apply_cx(amps: &mut [Complex64], c_shift: usize, t_shift: usize) {
        #[cfg(feature = "parallel")]
        if amps.len() >= PAR_THRESHOLD {
            return apply_cx_par(amps, c_shift, t_shift);
        }
        apply_cx_seq(amps, c_shift, t_shift);
    }

    pub fn apply_cz_seq(amps: &mut [Complex64], shift_a: usize, shift_b: usize) {
        for (i, a) in amps.iter_mut().enumerate() {
            if (i >> shift_a) & 1 == 1 && (i >> shift_b) & 1 == 1 {
                *a = -*a;
            }
        }
    }

    #[cfg(feature = "parallel")]
    pub fn apply_cz_par(amps: &mut [Complex64], shift_a: usize, shift_b: usize) {
        amps.par_iter_mut().enumerate().for_each(|(i, a)| {
            if (i >> shift_a) & 1 == 1 && (i >> shift_b) & 1 == 1 {
                *a = -*a;
            }
        });
    }

    pub fn apply_cz(amps: &mut [Complex64], shift_a: usize, shift_b: usize) {
        #[cfg(feature = "parallel")]
        if amps.len() >= PAR_THRESHOLD {
            return apply_cz_par(amps, shift_a, shift_b);
        }
        apply_cz_seq(amps, shift_a, shift_b);
    }

    #[inline]
    fn swap_on_chunk(chunk: &mut [Complex64], base: usize, hi: usize, lo: usize) {
        let hi_stride = 1 << hi;
        let delta = hi_stride - (1 << lo);
        for off in 0..hi_stride {
            let i = base + off;
            // pair (hi=0, lo=1) with (hi=1, lo=0); both live in this chunk
            if (i >> lo) & 1 == 1 {
                chunk.swap(off, off + delta);
            }
        }
    }

    pub fn apply_swap_seq(amps: &mut [Complex64], shift_a: usize, shift_b: usize) {
        let hi = shift_a.max(shift_b);
        let lo = shift_a.min(shift_b);
        let chunk_len = 2 << hi;
        for (ci, chunk) in amps.chunks_exact_mut(chunk_len).enumerate() {
            swap_on_chunk(chunk, ci * chunk_len, hi, lo);
        }
    }

    #[cfg(feature = "parallel")]
    pub fn apply_swap_par(amps: &mut [Complex64], shift_a: usize, shift_b: usize) {
        let hi = shift_a.max(shift_b);
        let lo = shift_a.min(shift_b);
        let chunk_len = 2 << hi;
        amps.par_chunks_exact_mut(chunk_len)
            .enumerate()
            .for_each(|(ci, chunk)| swap_on_chunk(chunk, ci * chunk_len, hi, lo));
    }

    pub fn apply_swap(amps: &mut [Complex64], shift_a: usize, shift_b: usize) {
        #[cfg(feature = "parallel")]
        if amps.len() >= PAR_THRESHOLD {
            return apply_swap_par(amps, shift_a, shift_b);
        }
        apply_swap_seq(amps, shift_a, shift_b);
    }
}
