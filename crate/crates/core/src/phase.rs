//! Angles and the shared random phase.
//!
//! Every virtual qubit reads the same phase sample on a given trial, so the
//! phase stream is the single source of randomness in the crate. Streams are
//! counter-addressed: the sample for trial `t` is a pure function of the
//! model and `t`, which is what lets a run be split across workers and still
//! reproduce the serial result bit for bit.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};

/// An angle in radians, always stored in canonical form (−π, π].
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Default)]
pub struct Angle(f64);

impl Angle {
    pub const ZERO: Angle = Angle(0.0);

    pub fn new(radians: f64) -> Result<Angle> {
        wrap_angle(radians)
    }

    #[inline]
    pub fn radians(self) -> f64 {
        self.0
    }

    /// Magnitude of the canonical representative, in [0, π].
    #[inline]
    pub fn abs(self) -> f64 {
        self.0.abs()
    }

    #[inline]
    pub(crate) fn from_finite(x: f64) -> Angle {
        debug_assert!(x.is_finite());
        Angle(wrap_finite(x))
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Angle {
    type Output = Angle;
    fn add(self, rhs: Angle) -> Angle {
        Angle::from_finite(self.0 + rhs.0)
    }
}

impl Sub for Angle {
    type Output = Angle;
    fn sub(self, rhs: Angle) -> Angle {
        Angle::from_finite(self.0 - rhs.0)
    }
}

impl Neg for Angle {
    type Output = Angle;
    fn neg(self) -> Angle {
        Angle::from_finite(-self.0)
    }
}

/// Reduce `x` to its representative in (−π, π].
pub fn wrap_angle(x: f64) -> Result<Angle> {
    if !x.is_finite() {
        return Err(Error::domain(format!("angle must be finite, got {x}")));
    }
    Ok(Angle(wrap_finite(x)))
}

fn wrap_finite(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if r > PI {
        r - TAU
    } else {
        r
    }
}

/// Reduce a finite `x` to [0, 2π).
pub fn wrap_positive(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    // rem_euclid adds TAU to tiny negative remainders, which can round up to TAU
    if r >= TAU {
        0.0
    } else {
        r
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PhaseKind {
    /// Independent uniform draw on [0, 2π) per trial.
    IidUniform,
    /// Sum of `J` oscillators with fixed random frequencies, read at integer times.
    OscillatorEnsemble,
}

impl PhaseKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PhaseKind::IidUniform => "iid",
            PhaseKind::OscillatorEnsemble => "oscillator",
        }
    }
}

impl std::str::FromStr for PhaseKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "iid" | "iid_uniform" | "iiduniform" | "uniform" => Ok(PhaseKind::IidUniform),
            "oscillator" | "oscillator_ensemble" | "oscillatorensemble" | "ensemble" => {
                Ok(PhaseKind::OscillatorEnsemble)
            }
            other => Err(Error::config(format!("unknown phase model kind `{other}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PhaseModel {
    pub kind: PhaseKind,
    pub seed: u64,
    /// Number of oscillators `J` (ensemble only).
    pub ensemble_size: u32,
    /// Frequencies are drawn uniformly from (0, frequency_spread] (ensemble only).
    pub frequency_spread: f64,
    /// Trials discarded before the first emitted sample (ensemble only).
    pub burn_in: u64,
}

impl PhaseModel {
    pub const DEFAULT_ENSEMBLE_SIZE: u32 = 32;
    pub const DEFAULT_FREQUENCY_SPREAD: f64 = 1.0;
    pub const DEFAULT_BURN_IN: u64 = 1000;

    pub fn iid(seed: u64) -> Self {
        PhaseModel {
            kind: PhaseKind::IidUniform,
            seed,
            ensemble_size: Self::DEFAULT_ENSEMBLE_SIZE,
            frequency_spread: Self::DEFAULT_FREQUENCY_SPREAD,
            burn_in: Self::DEFAULT_BURN_IN,
        }
    }

    pub fn oscillator(seed: u64, ensemble_size: u32, frequency_spread: f64, burn_in: u64) -> Self {
        PhaseModel {
            kind: PhaseKind::OscillatorEnsemble,
            seed,
            ensemble_size,
            frequency_spread,
            burn_in,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.kind == PhaseKind::OscillatorEnsemble {
            if self.ensemble_size == 0 {
                return Err(Error::config("ensemble_size must be at least 1"));
            }
            if !(self.frequency_spread.is_finite() && self.frequency_spread > 0.0) {
                return Err(Error::config(format!(
                    "frequency_spread must be a positive finite number, got {}",
                    self.frequency_spread
                )));
            }
        }
        Ok(())
    }

    pub fn stream(&self) -> Result<PhaseStream> {
        make_phase_stream(self)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaseSample {
    pub t: u64,
    /// Always in [0, 2π).
    pub phi: f64,
}

#[derive(Clone, Debug)]
enum Source {
    /// ChaCha8 keyed by the seed; trial `t` consumes words `2t` and `2t + 1`.
    Iid(Box<ChaCha8Rng>),
    Oscillator {
        frequencies: Arc<[f64]>,
        burn_in: u64,
    },
}

/// A position in the phase sequence of one model, optionally bounded.
///
/// Cloning is cheap. A single stream must not be advanced from two threads;
/// split it with [`PhaseStream::substream`] instead.
#[derive(Clone, Debug)]
pub struct PhaseStream {
    source: Source,
    pos: u64,
    end: Option<u64>,
}

pub fn make_phase_stream(model: &PhaseModel) -> Result<PhaseStream> {
    model.validate()?;
    let source = match model.kind {
        PhaseKind::IidUniform => Source::Iid(Box::new(ChaCha8Rng::seed_from_u64(model.seed))),
        PhaseKind::OscillatorEnsemble => {
            let mut rng = ChaCha8Rng::seed_from_u64(model.seed);
            rng.set_stream(1);
            let frequencies: Vec<f64> = (0..model.ensemble_size)
                .map(|_| model.frequency_spread * (1.0 - unit_f64(rng.next_u64())))
                .collect();
            Source::Oscillator {
                frequencies: frequencies.into(),
                burn_in: model.burn_in,
            }
        }
    };
    Ok(PhaseStream {
        source,
        pos: 0,
        end: None,
    })
}

/// Map 64 random bits to [0, 1) using the top 53.
#[inline]
fn unit_f64(bits: u64) -> f64 {
    (bits >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

impl PhaseStream {
    /// Index of the next trial this stream will emit.
    pub fn position(&self) -> u64 {
        self.pos
    }

    /// Remaining samples, or `None` for an unbounded stream.
    pub fn remaining(&self) -> Option<u64> {
        self.end.map(|e| e - self.pos)
    }

    /// The next `n` trials as a bounded stream; `self` is left untouched.
    pub fn window(&self, n: u64) -> PhaseStream {
        let mut w = self.clone();
        w.end = Some(self.pos + n);
        w
    }

    /// Jump to trial index `t`.
    pub fn seek(&mut self, t: u64) {
        self.pos = t;
        if let Source::Iid(rng) = &mut self.source {
            rng.set_word_pos(u128::from(t) * 2);
        }
    }

    pub fn advance(&mut self, n: u64) {
        self.seek(self.pos + n);
    }

    /// Chunk `index` of a `chunks`-way contiguous split of this bounded stream.
    ///
    /// Chunk sizes differ by at most one, earlier chunks take the remainder,
    /// and the chunks taken in order reproduce the serial stream exactly.
    pub fn substream(&self, chunks: usize, index: usize) -> Result<PhaseStream> {
        let total = self
            .remaining()
            .ok_or_else(|| Error::usage("cannot partition an unbounded phase stream"))?;
        if chunks == 0 {
            return Err(Error::usage("chunk count must be at least 1"));
        }
        if index >= chunks {
            return Err(Error::usage(format!(
                "chunk index {index} out of range for {chunks} chunks"
            )));
        }
        let chunks = chunks as u64;
        let index = index as u64;
        let base = total / chunks;
        let extra = total % chunks;
        let start = self.pos + index * base + index.min(extra);
        let len = base + u64::from(index < extra);
        let mut sub = self.clone();
        sub.seek(start);
        sub.end = Some(start + len);
        Ok(sub)
    }

    pub fn split(&self, chunks: usize) -> Result<Vec<PhaseStream>> {
        (0..chunks.max(1))
            .map(|i| self.substream(chunks, i))
            .collect()
    }

    /// Draw the next phase value. Panics only if a bounded stream is exhausted.
    #[inline]
    pub fn next_phi(&mut self) -> f64 {
        self.next().expect("phase stream exhausted").phi
    }

    fn sample_current(&mut self) -> f64 {
        match &mut self.source {
            Source::Iid(rng) => unit_f64(rng.next_u64()) * TAU,
            Source::Oscillator {
                frequencies,
                burn_in,
            } => {
                let time = (*burn_in + self.pos) as f64;
                let total: f64 = frequencies.iter().map(|w| wrap_positive(w * time)).sum();
                wrap_positive(total)
            }
        }
    }
}

impl Iterator for PhaseStream {
    type Item = PhaseSample;

    fn next(&mut self) -> Option<PhaseSample> {
        if self.end.is_some_and(|e| self.pos >= e) {
            return None;
        }
        let phi = self.sample_current();
        let sample = PhaseSample { t: self.pos, phi };
        self.pos += 1;
        Some(sample)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        match self.remaining() {
            Some(r) => {
                let r = usize::try_from(r).unwrap_or(usize::MAX);
                (r, Some(r))
            }
            None => (usize::MAX, None),
        }
    }
}

/// Run `f` on each of `workers` contiguous chunks of the next `n` trials and
/// return the per-chunk results in chunk order.
///
/// Callers combine the results with exact (integer) arithmetic so the final
/// answer does not depend on `workers`.
pub fn map_chunks<T, F>(stream: &PhaseStream, n: u64, workers: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(PhaseStream) -> T + Sync,
{
    if workers == 0 {
        return Err(Error::usage("worker count must be at least 1"));
    }
    let window = stream.window(n);
    if workers == 1 {
        return Ok(vec![f(window)]);
    }
    let parts = window.split(workers)?;
    let f = &f;
    Ok(std::thread::scope(|scope| {
        let handles: Vec<_> = parts
            .into_iter()
            .map(|part| scope.spawn(move || f(part)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("phase worker panicked"))
            .collect()
    }))
}
