//! Dense state-vector reference for a handful of qubits.
//!
//! Basis index convention: qubit 0 is the most significant bit, so `|10⟩`
//! means qubit 0 is 1 and qubit 1 is 0.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::phase::Angle;

pub const MAX_QUBITS: usize = 10;
const NORM_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct QuantumState {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl QuantumState {
    /// `|0…0⟩` on `n_qubits` qubits.
    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        check_width(n_qubits)?;
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::usage(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Ok(QuantumState {
            n_qubits,
            amplitudes,
        })
    }

    /// Wrap an amplitude vector; it must already be normalized.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim < 2 || !dim.is_power_of_two() {
            return Err(Error::usage(format!(
                "amplitude vector length {dim} is not 2^n with n >= 1"
            )));
        }
        let n_qubits = dim.trailing_zeros() as usize;
        check_width(n_qubits)?;
        let state = QuantumState {
            n_qubits,
            amplitudes,
        };
        let norm = state.norm_sqr();
        if (norm - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::domain(format!(
                "amplitudes are not normalized (sum |a|^2 = {norm})"
            )));
        }
        Ok(state)
    }

    /// Scale an arbitrary non-zero vector to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 0.0) {
            return Err(Error::domain(
                "cannot normalize a zero or non-finite vector",
            ));
        }
        Self::from_amplitudes(amplitudes.into_iter().map(|a| a / norm).collect())
    }

    /// `(|01⟩ − |10⟩)/√2`.
    pub fn singlet() -> Self {
        let z = Complex64::new(0.0, 0.0);
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        QuantumState {
            n_qubits: 2,
            amplitudes: vec![z, s, -s, z],
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &QuantumState) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    fn mask(&self, qubit: usize) -> usize {
        1 << (self.n_qubits - 1 - qubit)
    }

    fn check_qubit(&self, qubit: usize) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(Error::usage(format!(
                "qubit {qubit} out of range for {} qubits",
                self.n_qubits
            )));
        }
        Ok(())
    }

    /// Apply a 2×2 operator `[[m00, m01], [m10, m11]]` to one qubit.
    fn apply_single(&self, qubit: usize, m: [[Complex64; 2]; 2]) -> QuantumState {
        let mask = self.mask(qubit);
        let mut out = self.amplitudes.clone();
        for i in 0..self.amplitudes.len() {
            if i & mask == 0 {
                let a0 = self.amplitudes[i];
                let a1 = self.amplitudes[i | mask];
                out[i] = m[0][0] * a0 + m[0][1] * a1;
                out[i | mask] = m[1][0] * a0 + m[1][1] * a1;
            }
        }
        QuantumState {
            n_qubits: self.n_qubits,
            amplitudes: out,
        }
    }
}

fn check_width(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 || n_qubits > MAX_QUBITS {
        return Err(Error::usage(format!(
            "qubit count must be in 1..={MAX_QUBITS}, got {n_qubits}"
        )));
    }
    Ok(())
}

fn real(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

/// Unitary Hadamard `(1/√2)[[1, 1], [1, −1]]` on `target`.
pub fn apply_hadamard(state: &QuantumState, target: usize) -> Result<QuantumState> {
    state.check_qubit(target)?;
    let h = real(FRAC_1_SQRT_2);
    Ok(state.apply_single(target, [[h, h], [h, -h]]))
}

/// Swap the amplitudes of basis states that differ only in `target`
/// wherever `control` is 1.
pub fn apply_cnot(state: &QuantumState, control: usize, target: usize) -> Result<QuantumState> {
    state.check_qubit(control)?;
    state.check_qubit(target)?;
    if control == target {
        return Err(Error::usage(format!(
            "CNOT control and target must differ (both {control})"
        )));
    }
    let cmask = state.mask(control);
    let tmask = state.mask(target);
    let mut out = state.amplitudes.clone();
    for (i, slot) in out.iter_mut().enumerate() {
        if i & cmask != 0 {
            *slot = state.amplitudes[i ^ tmask];
        }
    }
    Ok(QuantumState {
        n_qubits: state.n_qubits,
        amplitudes: out,
    })
}

/// Spin measurement along `theta` in the X–Z plane: `cos θ·Z + sin θ·X`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Observable {
    pub theta: Angle,
}

impl Observable {
    pub fn new(theta: Angle) -> Self {
        Observable { theta }
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        let (s, c) = self.theta.radians().sin_cos();
        [[real(c), real(s)], [real(s), real(-c)]]
    }
}

/// `⟨ψ| A ⊗ B |ψ⟩` for observables on qubits `qa` and `qb`.
pub fn expectation_pair(
    state: &QuantumState,
    a: Observable,
    qa: usize,
    b: Observable,
    qb: usize,
) -> Result<f64> {
    state.check_qubit(qa)?;
    state.check_qubit(qb)?;
    if qa == qb {
        return Err(Error::usage("pair expectation needs two distinct qubits"));
    }
    let applied = state
        .apply_single(qa, a.matrix())
        .apply_single(qb, b.matrix());
    Ok(state.inner(&applied).re)
}

/// Singlet correlation `⟨A(a) ⊗ B(b)⟩`, computed from the state vector.
pub fn singlet_correlation(a: Angle, b: Angle) -> f64 {
    expectation_pair(
        &QuantumState::singlet(),
        Observable::new(a),
        0,
        Observable::new(b),
        1,
    )
    .expect("two-qubit singlet has qubits 0 and 1")
}

/// CHSH combination `E(a1,b1) − E(a1,b2) + E(a2,b1) + E(a2,b2)` over singlet
/// correlations.
pub fn chsh_quantum(a1: Angle, a2: Angle, b1: Angle, b2: Angle) -> f64 {
    singlet_correlation(a1, b1) - singlet_correlation(a1, b2)
        + singlet_correlation(a2, b1)
        + singlet_correlation(a2, b2)
}
