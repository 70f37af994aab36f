//! C ABI for phasebit.
//!
//! Every fallible function returns a [`PbStatus`] and writes results through
//! out-pointers. Streams and registers are opaque handles created by `*_new`
//! and released with the matching `*_free`. After a non-OK status,
//! [`pb_last_error_message`] describes the failure on the calling thread.

#![allow(clippy::missing_safety_doc)]

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use phasebit::oracle;
use phasebit::register::{Bit, QubitState, VirtualRegister};
use phasebit::stats::{self, ChshAngles, ChshSampling};
use phasebit::{Angle, CorrelationEstimate, Error, PhaseKind, PhaseModel, PhaseStream};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PbStatus {
    Ok = 0,
    DomainError = 1,
    UsageError = 2,
    ConfigError = 3,
    IoError = 4,
    NullPointer = 5,
    Panic = 6,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PbPhaseKind {
    IidUniform = 0,
    OscillatorEnsemble = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PbChshSampling {
    SharedTrials = 0,
    IndependentStreams = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PbPhaseModel {
    pub kind: PbPhaseKind,
    pub seed: u64,
    pub ensemble_size: u32,
    pub frequency_spread: f64,
    pub burn_in: u64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PbCorrelationEstimate {
    pub mean: f64,
    /// Named to avoid the `stderr` macro from <stdio.h>.
    pub std_error: f64,
    pub n: u64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct PbChshResult {
    /// a1, a2, b1, b2 in canonical form.
    pub angles: [f64; 4],
    /// E(a1,b1), E(a1,b2), E(a2,b1), E(a2,b2).
    pub terms: [PbCorrelationEstimate; 4],
    pub s_value: f64,
    pub s_stderr: f64,
}

/// Opaque phase stream handle.
pub struct PbPhaseStream(PhaseStream);

/// Opaque virtual register handle.
pub struct PbRegister(VirtualRegister);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> PbStatus {
    match e {
        Error::Domain(_) => PbStatus::DomainError,
        Error::Usage(_) => PbStatus::UsageError,
        Error::Config(_) => PbStatus::ConfigError,
        Error::Io(_) => PbStatus::IoError,
    }
}

enum Fail {
    Lib(Error),
    Null(&'static str),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail::Lib(e)
    }
}

/// Run `f`, translating errors and panics into status codes.
fn guard<F: FnOnce() -> Result<(), Fail>>(f: F) -> PbStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PbStatus::Ok,
        Ok(Err(Fail::Lib(e))) => {
            set_last_error(e.to_string());
            status_of(&e)
        }
        Ok(Err(Fail::Null(what))) => {
            set_last_error(format!("null pointer: {what}"));
            PbStatus::NullPointer
        }
        Err(_) => {
            set_last_error("internal panic".to_string());
            PbStatus::Panic
        }
    }
}

unsafe fn out<'a, T>(p: *mut T, what: &'static str) -> Result<&'a mut T, Fail> {
    p.as_mut().ok_or(Fail::Null(what))
}

unsafe fn input<'a, T>(p: *const T, what: &'static str) -> Result<&'a T, Fail> {
    p.as_ref().ok_or(Fail::Null(what))
}

unsafe fn slice<'a, T>(p: *const T, len: usize, what: &'static str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(Fail::Null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

impl From<&PbPhaseModel> for PhaseModel {
    fn from(m: &PbPhaseModel) -> Self {
        PhaseModel {
            kind: match m.kind {
                PbPhaseKind::IidUniform => PhaseKind::IidUniform,
                PbPhaseKind::OscillatorEnsemble => PhaseKind::OscillatorEnsemble,
            },
            seed: m.seed,
            ensemble_size: m.ensemble_size,
            frequency_spread: m.frequency_spread,
            burn_in: m.burn_in,
        }
    }
}

impl From<CorrelationEstimate> for PbCorrelationEstimate {
    fn from(e: CorrelationEstimate) -> Self {
        PbCorrelationEstimate {
            mean: e.mean,
            std_error: e.stderr,
            n: e.n,
        }
    }
}

/// Reads `a1, a2, b1, b2` from a 4-element array.
unsafe fn chsh_angles(p: *const f64) -> Result<ChshAngles, Fail> {
    let a = slice(p, 4, "angles")?;
    Ok(ChshAngles::from_radians([a[0], a[1], a[2], a[3]])?)
}

/// Message for the most recent failure on this thread, or NULL. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn pb_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

#[no_mangle]
pub extern "C" fn pb_version() -> *const c_char {
    static VERSION: &CStr =
        match CStr::from_bytes_with_nul(concat!(env!("CARGO_PKG_VERSION"), "\0").as_bytes()) {
            Ok(v) => v,
            Err(_) => panic!("version string"),
        };
    VERSION.as_ptr()
}

/// Default IID-uniform model for `seed`.
#[no_mangle]
pub extern "C" fn pb_phase_model_iid(seed: u64) -> PbPhaseModel {
    PbPhaseModel {
        kind: PbPhaseKind::IidUniform,
        seed,
        ensemble_size: PhaseModel::DEFAULT_ENSEMBLE_SIZE,
        frequency_spread: PhaseModel::DEFAULT_FREQUENCY_SPREAD,
        burn_in: PhaseModel::DEFAULT_BURN_IN,
    }
}

#[no_mangle]
pub unsafe extern "C" fn pb_wrap_angle(x: f64, out_radians: *mut f64) -> PbStatus {
    guard(|| {
        *out(out_radians, "out_radians")? = phasebit::wrap_angle(x)?.radians();
        Ok(())
    })
}

/// `+1` or `-1`: sign of cos(phi + alpha), with +1 on the tie.
#[no_mangle]
pub extern "C" fn pb_dichotomic(phi: f64, alpha: f64) -> i32 {
    i32::from(phasebit::signal::dichotomic_raw(phi, alpha).value())
}

#[no_mangle]
pub unsafe extern "C" fn pb_analytic_correlation(delta: f64, out_value: *mut f64) -> PbStatus {
    guard(|| {
        *out(out_value, "out_value")? = phasebit::analytic_correlation(delta)?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn pb_conditional_same_color_probability(
    delta: f64,
    out_value: *mut f64,
) -> PbStatus {
    guard(|| {
        *out(out_value, "out_value")? = phasebit::conditional_same_color_probability(delta)?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn pb_phase_stream_new(
    model: *const PbPhaseModel,
    out_stream: *mut *mut PbPhaseStream,
) -> PbStatus {
    guard(|| {
        let model = PhaseModel::from(input(model, "model")?);
        let slot = out(out_stream, "out_stream")?;
        *slot = Box::into_raw(Box::new(PbPhaseStream(model.stream()?)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn pb_phase_stream_free(stream: *mut PbPhaseStream) {
    if !stream.is_null() {
        drop(Box::from_raw(stream));
    }
}

/// Next sample. Returns `UsageError` when a bounded stream is exhausted.
#[no_mangle]
pub unsafe extern "C" fn pb_phase_stream_next(
    stream: *mut PbPhaseStream,
    out_t: *mut u64,
    out_phi: *mut f64,
) -> PbStatus {
    guard(|| {
        let s = out(stream, "stream")?;
        let (t, phi) = (out(out_t, "out_t")?, out(out_phi, "out_phi")?);
        let sample =
            s.0.next()
                .ok_or_else(|| Error::Usage("phase stream exhausted".into()))?;
        *t = sample.t;
        *phi = sample.phi;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn pb_phase_stream_position(stream: *const PbPhaseStream) -> u64 {
    stream.as_ref().map_or(0, |s| s.0.position())
}

/// New handle over chunk `index` of a `chunks`-way split of the next `n` trials.
#[no_mangle]
pub unsafe extern "C" fn pb_phase_stream_substream(
    stream: *const PbPhaseStream,
    n: u64,
    chunks: usize,
    index: usize,
    out_stream: *mut *mut PbPhaseStream,
) -> PbStatus {
    guard(|| {
        let s = input(stream, "stream")?;
        let slot = out(out_stream, "out_stream")?;
        let sub = s.0.window(n).substream(chunks, index)?;
        *slot = Box::into_raw(Box::new(PbPhaseStream(sub)));
        Ok(())
    })
}

/// Estimate the correlation over the next `n` trials; the stream is not advanced.
#[no_mangle]
pub unsafe extern "C" fn pb_estimate_correlation(
    stream: *const PbPhaseStream,
    alpha1: f64,
    alpha2: f64,
    n: u64,
    workers: usize,
    out_estimate: *mut PbCorrelationEstimate,
) -> PbStatus {
    guard(|| {
        let s = input(stream, "stream")?;
        let dst = out(out_estimate, "out_estimate")?;
        let e = phasebit::signal::estimate_correlation_par(
            &s.0,
            Angle::new(alpha1)?,
            Angle::new(alpha2)?,
            n,
            workers,
        )?;
        *dst = e.into();
        Ok(())
    })
}

/// Register of `n_qubits` balanced qubits at `angles`, reading a fresh
/// stream of `model`.
#[no_mangle]
pub unsafe extern "C" fn pb_register_new(
    model: *const PbPhaseModel,
    angles: *const f64,
    n_qubits: usize,
    signal_index: usize,
    out_register: *mut *mut PbRegister,
) -> PbStatus {
    guard(|| {
        let model = PhaseModel::from(input(model, "model")?);
        let angles = slice(angles, n_qubits, "angles")?
            .iter()
            .map(|&a| Angle::new(a))
            .collect::<Result<Vec<_>, _>>()?;
        let slot = out(out_register, "out_register")?;
        let reg = VirtualRegister::balanced(&angles, signal_index, model.stream()?)?;
        *slot = Box::into_raw(Box::new(PbRegister(reg)));
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn pb_register_free(register: *mut PbRegister) {
    if !register.is_null() {
        drop(Box::from_raw(register));
    }
}

#[no_mangle]
pub unsafe extern "C" fn pb_register_len(register: *const PbRegister) -> usize {
    register.as_ref().map_or(0, |r| r.0.len())
}

#[no_mangle]
pub unsafe extern "C" fn pb_register_set_definite(
    register: *mut PbRegister,
    qubit: usize,
    bit: u8,
) -> PbStatus {
    guard(|| {
        let r = out(register, "register")?;
        r.0.set_qubit(qubit, QubitState::Definite(Bit::try_from(bit)?))?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn pb_register_set_balanced(
    register: *mut PbRegister,
    qubit: usize,
    alpha: f64,
) -> PbStatus {
    guard(|| {
        let r = out(register, "register")?;
        r.0.set_qubit(qubit, QubitState::Balanced(Angle::new(alpha)?))?;
        Ok(())
    })
}

/// Virtual-qubit Hadamard on one qubit.
#[no_mangle]
pub unsafe extern "C" fn pb_register_hadamard(
    register: *mut PbRegister,
    qubit: usize,
    default_alpha: f64,
) -> PbStatus {
    guard(|| {
        let r = out(register, "register")?;
        r.0.apply_hadamard(qubit, Angle::new(default_alpha)?)?;
        Ok(())
    })
}

/// One trial. `out_bits` must hold `pb_register_len` bytes.
#[no_mangle]
pub unsafe extern "C" fn pb_register_measure_trial(
    register: *mut PbRegister,
    out_bits: *mut u8,
    out_accepted: *mut bool,
) -> PbStatus {
    guard(|| {
        let r = out(register, "register")?;
        if out_bits.is_null() {
            return Err(Fail::Null("out_bits"));
        }
        let accepted = out(out_accepted, "out_accepted")?;
        let rec = r.0.measure_trial();
        let dst = std::slice::from_raw_parts_mut(out_bits, rec.bits.len());
        for (d, b) in dst.iter_mut().zip(&rec.bits) {
            *d = b.as_u8();
        }
        *accepted = rec.accepted;
        Ok(())
    })
}

/// Run `trials` trials and keep the accepted ones.
///
/// Writes up to `capacity` accepted records into `out_bits` as a row-major
/// `records × n_qubits` byte matrix (may be NULL when `capacity` is 0) and
/// their trial indices into `out_t` (may be NULL). `out_accepted` receives
/// the total accepted count, which can exceed `capacity`.
#[no_mangle]
pub unsafe extern "C" fn pb_register_initialize(
    register: *mut PbRegister,
    trials: u64,
    workers: usize,
    out_bits: *mut u8,
    out_t: *mut u64,
    capacity: usize,
    out_accepted: *mut usize,
) -> PbStatus {
    guard(|| {
        let r = out(register, "register")?;
        let total = out(out_accepted, "out_accepted")?;
        if capacity > 0 && out_bits.is_null() {
            return Err(Fail::Null("out_bits"));
        }
        let width = r.0.len();
        let records = r.0.initialize_par(trials, workers)?;
        let keep = records.len().min(capacity);
        if keep > 0 {
            let bits = std::slice::from_raw_parts_mut(out_bits, keep * width);
            for (row, rec) in bits.chunks_mut(width).zip(&records) {
                for (d, b) in row.iter_mut().zip(&rec.bits) {
                    *d = b.as_u8();
                }
            }
            if !out_t.is_null() {
                let ts = std::slice::from_raw_parts_mut(out_t, keep);
                for (d, rec) in ts.iter_mut().zip(&records) {
                    *d = rec.t;
                }
            }
        }
        *total = records.len();
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn pb_cnot(control_bit: u8, target_bit: u8, out_bit: *mut u8) -> PbStatus {
    guard(|| {
        *out(out_bit, "out_bit")? = phasebit::register::cnot(control_bit, target_bit)?;
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn pb_analytic_chsh(angles: *const f64, out_s: *mut f64) -> PbStatus {
    guard(|| {
        let a = chsh_angles(angles)?;
        *out(out_s, "out_s")? = stats::analytic_chsh(a);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn pb_chsh_classical(
    model: *const PbPhaseModel,
    angles: *const f64,
    n: u64,
    sampling: PbChshSampling,
    workers: usize,
    out_result: *mut PbChshResult,
) -> PbStatus {
    guard(|| {
        let model = PhaseModel::from(input(model, "model")?);
        let a = chsh_angles(angles)?;
        let dst = out(out_result, "out_result")?;
        let sampling = match sampling {
            PbChshSampling::SharedTrials => ChshSampling::SharedTrials,
            PbChshSampling::IndependentStreams => ChshSampling::IndependentStreams,
        };
        let r = stats::chsh_classical(&model, a, n, sampling, workers)?;
        *dst = PbChshResult {
            angles: [a.a1, a.a2, a.b1, a.b2].map(Angle::radians),
            terms: r.terms.map(Into::into),
            s_value: r.s_value,
            s_stderr: r.s_stderr,
        };
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn pb_singlet_correlation(a: f64, b: f64, out_value: *mut f64) -> PbStatus {
    guard(|| {
        *out(out_value, "out_value")? = oracle::singlet_correlation(Angle::new(a)?, Angle::new(b)?);
        Ok(())
    })
}

#[no_mangle]
pub unsafe extern "C" fn pb_chsh_quantum(angles: *const f64, out_s: *mut f64) -> PbStatus {
    guard(|| {
        let a = chsh_angles(angles)?;
        *out(out_s, "out_s")? = oracle::chsh_quantum(a.a1, a.a2, a.b1, a.b2);
        Ok(())
    })
}

/// KS statistic against the uniform law on [0, 2π) and its 1% critical value.
#[no_mangle]
pub unsafe extern "C" fn pb_ks_uniformity(
    samples: *const f64,
    len: usize,
    out_statistic: *mut f64,
    out_critical_1pct: *mut f64,
) -> PbStatus {
    guard(|| {
        let s = slice(samples, len, "samples")?;
        let (stat, crit) = (
            out(out_statistic, "out_statistic")?,
            out(out_critical_1pct, "out_critical_1pct")?,
        );
        let r = stats::ks_uniformity(s)?;
        *stat = r.statistic;
        *crit = r.critical_1pct;
        Ok(())
    })
}
