//! Virtual qubit register: N qubits reading one shared phase stream.
//!
//! A trial draws one phase sample and reads every balanced qubit off it.
//! Trials where the signal qubit comes up red (bit 1) are discarded at
//! initialization; the survivors are the initialized records.

use std::fmt;

use crate::error::{Error, Result};
use crate::phase::{map_chunks, Angle, PhaseStream};
use crate::signal::dichotomic_raw;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bit {
    Zero,
    One,
}

impl Bit {
    #[inline]
    pub fn as_u8(self) -> u8 {
        match self {
            Bit::Zero => 0,
            Bit::One => 1,
        }
    }

    #[inline]
    pub fn flip(self) -> Bit {
        match self {
            Bit::Zero => Bit::One,
            Bit::One => Bit::Zero,
        }
    }
}

impl TryFrom<u8> for Bit {
    type Error = Error;

    fn try_from(v: u8) -> Result<Bit> {
        match v {
            0 => Ok(Bit::Zero),
            1 => Ok(Bit::One),
            other => Err(Error::domain(format!("bit must be 0 or 1, got {other}"))),
        }
    }
}

impl fmt::Display for Bit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_u8())
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum QubitState {
    /// Reads the same bit on every trial.
    Definite(Bit),
    /// Reads `a(α, t)` off the shared phase: green (0) or red (1).
    Balanced(Angle),
}

/// Hadamard on a virtual qubit.
///
/// A balanced qubit becomes definite `|0⟩`; either definite value becomes
/// balanced at `default_alpha`. This map is not invertible: applying it twice
/// to `|1⟩` yields `|0⟩`, unlike the unitary in [`crate::oracle`].
pub fn hadamard(q: QubitState, default_alpha: Angle) -> QubitState {
    match q {
        QubitState::Balanced(_) => QubitState::Definite(Bit::Zero),
        QubitState::Definite(_) => QubitState::Balanced(default_alpha),
    }
}

/// Controlled NOT on realized bit values: `target XOR control`.
pub fn cnot(control_bit: u8, target_bit: u8) -> Result<u8> {
    let c = Bit::try_from(control_bit)?;
    let t = Bit::try_from(target_bit)?;
    Ok(cnot_bits(c, t).as_u8())
}

#[inline]
pub fn cnot_bits(control: Bit, target: Bit) -> Bit {
    match control {
        Bit::One => target.flip(),
        Bit::Zero => target,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TrialRecord {
    pub t: u64,
    pub bits: Vec<Bit>,
    pub signal_index: usize,
    /// `bits[signal_index] == Bit::Zero`.
    pub accepted: bool,
}

impl TrialRecord {
    fn new(t: u64, bits: Vec<Bit>, signal_index: usize) -> Self {
        let accepted = bits[signal_index] == Bit::Zero;
        TrialRecord {
            t,
            bits,
            signal_index,
            accepted,
        }
    }
}

/// Replace each record's target bit with `cnot(control, target)`.
///
/// The acceptance verdict is recomputed, so it stays consistent if the target
/// happens to be the signal qubit.
pub fn apply_cnot_to_records(
    records: &[TrialRecord],
    control: usize,
    target: usize,
) -> Result<Vec<TrialRecord>> {
    if control == target {
        return Err(Error::usage(format!(
            "CNOT control and target must differ (both {control})"
        )));
    }
    records
        .iter()
        .map(|r| {
            let width = r.bits.len();
            if control >= width || target >= width {
                return Err(Error::usage(format!(
                    "CNOT indices ({control}, {target}) out of range for {width} qubits"
                )));
            }
            let mut bits = r.bits.clone();
            bits[target] = cnot_bits(bits[control], bits[target]);
            Ok(TrialRecord::new(r.t, bits, r.signal_index))
        })
        .collect()
}

/// N virtual qubits in one coherence zone.
#[derive(Clone, Debug)]
pub struct VirtualRegister {
    qubits: Vec<QubitState>,
    signal_index: usize,
    stream: PhaseStream,
}

impl VirtualRegister {
    pub fn new(qubits: Vec<QubitState>, signal_index: usize, stream: PhaseStream) -> Result<Self> {
        if qubits.is_empty() {
            return Err(Error::usage("register needs at least one qubit"));
        }
        if signal_index >= qubits.len() {
            return Err(Error::usage(format!(
                "signal index {signal_index} out of range for {} qubits",
                qubits.len()
            )));
        }
        Ok(VirtualRegister {
            qubits,
            signal_index,
            stream,
        })
    }

    /// All qubits balanced at the given angles.
    pub fn balanced(angles: &[Angle], signal_index: usize, stream: PhaseStream) -> Result<Self> {
        Self::new(
            angles.iter().copied().map(QubitState::Balanced).collect(),
            signal_index,
            stream,
        )
    }

    pub fn qubits(&self) -> &[QubitState] {
        &self.qubits
    }

    pub fn len(&self) -> usize {
        self.qubits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.qubits.is_empty()
    }

    pub fn signal_index(&self) -> usize {
        self.signal_index
    }

    pub fn stream(&self) -> &PhaseStream {
        &self.stream
    }

    pub fn set_qubit(&mut self, index: usize, state: QubitState) -> Result<()> {
        let len = self.qubits.len();
        let slot = self
            .qubits
            .get_mut(index)
            .ok_or_else(|| Error::usage(format!("qubit {index} out of range for {len} qubits")))?;
        *slot = state;
        Ok(())
    }

    pub fn apply_hadamard(&mut self, index: usize, default_alpha: Angle) -> Result<()> {
        let q = *self
            .qubits
            .get(index)
            .ok_or_else(|| Error::usage(format!("qubit {index} out of range")))?;
        self.qubits[index] = hadamard(q, default_alpha);
        Ok(())
    }

    /// Draw one shared phase sample and read every qubit off it.
    pub fn measure_trial(&mut self) -> TrialRecord {
        let sample = self.stream.next().expect("register phase stream exhausted");
        read_trial(&self.qubits, self.signal_index, sample.t, sample.phi)
    }

    /// Run `trials` trials and keep the accepted ones (signal qubit green).
    pub fn initialize(&mut self, trials: u64) -> Result<Vec<TrialRecord>> {
        self.initialize_par(trials, 1)
    }

    /// As [`initialize`](Self::initialize) over `workers` threads; the output
    /// does not depend on `workers`.
    pub fn initialize_par(&mut self, trials: u64, workers: usize) -> Result<Vec<TrialRecord>> {
        if trials == 0 {
            return Err(Error::usage("initialize needs at least one trial"));
        }
        let qubits = &self.qubits;
        let signal = self.signal_index;
        let chunks = map_chunks(&self.stream, trials, workers, |chunk| {
            chunk
                .map(|s| read_trial(qubits, signal, s.t, s.phi))
                .filter(|r| r.accepted)
                .collect::<Vec<_>>()
        })?;
        self.stream.advance(trials);
        Ok(chunks.into_iter().flatten().collect())
    }
}

fn read_trial(qubits: &[QubitState], signal_index: usize, t: u64, phi: f64) -> TrialRecord {
    let bits = qubits
        .iter()
        .map(|q| match *q {
            QubitState::Definite(b) => b,
            QubitState::Balanced(alpha) => {
                if dichotomic_raw(phi, alpha.radians()).bit() == 0 {
                    Bit::Zero
                } else {
                    Bit::One
                }
            }
        })
        .collect();
    TrialRecord::new(t, bits, signal_index)
}
