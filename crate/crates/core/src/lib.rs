//! Virtual qubits built from one shared random phase.
//!
//! Each qubit reads a dichotomic signal `a(α, t) = sign cos(Φ(t) + α)` off a
//! phase `Φ(t)` uniform on [0, 2π). Two signals at offset `Δα` correlate as
//! the triangular function `1 − 2|Δα|/π`, which caps the CHSH value at 2.
//! The [`oracle`] module computes the quantum counterparts exactly, where
//! the singlet reaches `2√2`.
//!
//! - [`phase`]: angles, phase models, reproducible and splittable streams
//! - [`signal`]: the signal algorithm and its correlation
//! - [`register`]: post-selected initialization, Hadamard and CNOT on virtual qubits
//! - [`stats`]: correlation curves, CHSH, KS uniformity
//! - [`oracle`]: dense state-vector reference
//! - [`cli`]: the `phasebit` experiment runner

pub mod cli;
pub mod error;
pub mod oracle;
pub mod phase;
pub mod register;
pub mod signal;
pub mod stats;

pub use error::{Error, Result};
pub use phase::{
    make_phase_stream, wrap_angle, Angle, PhaseKind, PhaseModel, PhaseSample, PhaseStream,
};
pub use signal::{
    analytic_correlation, conditional_same_color_probability, dichotomic, estimate_correlation,
    CorrelationEstimate, DichotomicValue,
};
