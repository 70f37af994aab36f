//! Correlation curves, CHSH experiments on the classical model, and a
//! Kolmogorov–Smirnov uniformity check for phase samples.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::phase::{map_chunks, Angle, PhaseModel};
use crate::signal::{dichotomic_raw, estimate_correlation_par, triangular, CorrelationEstimate};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CurvePoint {
    pub delta: Angle,
    pub analytic: f64,
    pub estimated: CorrelationEstimate,
}

/// Estimate `M(Δα)` with `α₁ = 0, α₂ = Δα` at each grid point.
///
/// Point `i` reads trials `[i·n, (i+1)·n)` of the model's stream, so the
/// points are statistically independent of each other.
pub fn correlation_curve(
    model: &PhaseModel,
    deltas: &[Angle],
    n: u64,
    workers: usize,
) -> Result<Vec<CurvePoint>> {
    if deltas.is_empty() {
        return Err(Error::usage("correlation curve needs at least one delta"));
    }
    if n == 0 {
        return Err(Error::usage("correlation curve needs n >= 1"));
    }
    let mut stream = model.stream()?;
    deltas
        .iter()
        .map(|&delta| {
            let estimated = estimate_correlation_par(&stream, Angle::ZERO, delta, n, workers)?;
            stream.advance(n);
            Ok(CurvePoint {
                delta,
                analytic: triangular(delta),
                estimated,
            })
        })
        .collect()
}

/// `n + 1` evenly spaced deltas from 0 to π inclusive.
pub fn delta_grid(n: usize) -> Vec<Angle> {
    let n = n.max(1);
    (0..=n)
        .map(|i| Angle::new(std::f64::consts::PI * i as f64 / n as f64).expect("finite"))
        .collect()
}

/// Measurement settings `(a1, a2, b1, b2)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChshAngles {
    pub a1: Angle,
    pub a2: Angle,
    pub b1: Angle,
    pub b2: Angle,
}

impl ChshAngles {
    pub fn new(a1: Angle, a2: Angle, b1: Angle, b2: Angle) -> Self {
        ChshAngles { a1, a2, b1, b2 }
    }

    pub fn from_radians(r: [f64; 4]) -> Result<Self> {
        Ok(ChshAngles {
            a1: Angle::new(r[0])?,
            a2: Angle::new(r[1])?,
            b1: Angle::new(r[2])?,
            b2: Angle::new(r[3])?,
        })
    }

    /// `(0, π/2, π/4, 3π/4)`, where the triangular correlator reaches 2.
    pub fn standard() -> Self {
        use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};
        Self::from_radians([0.0, FRAC_PI_2, FRAC_PI_4, 3.0 * FRAC_PI_4]).expect("finite")
    }

    /// Setting pairs in term order: (a1,b1), (a1,b2), (a2,b1), (a2,b2).
    pub fn pairs(&self) -> [(Angle, Angle); 4] {
        [
            (self.a1, self.b1),
            (self.a1, self.b2),
            (self.a2, self.b1),
            (self.a2, self.b2),
        ]
    }
}

/// Combine four correlators with the CHSH signs `+ − + +`.
#[inline]
pub fn chsh_combination(e: [f64; 4]) -> f64 {
    e[0] - e[1] + e[2] + e[3]
}

/// How the four correlators of a classical CHSH run are sampled.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ChshSampling {
    /// Each trial yields all four products from one phase sample.
    #[default]
    SharedTrials,
    /// Term `k` reads its own trial window `[k·n, (k+1)·n)`.
    IndependentStreams,
}

impl ChshSampling {
    pub fn as_str(self) -> &'static str {
        match self {
            ChshSampling::SharedTrials => "shared",
            ChshSampling::IndependentStreams => "independent",
        }
    }
}

impl std::str::FromStr for ChshSampling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "shared" => Ok(ChshSampling::SharedTrials),
            "independent" => Ok(ChshSampling::IndependentStreams),
            other => Err(Error::config(format!("unknown chsh sampling `{other}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChshResult {
    pub angles: ChshAngles,
    pub terms: [CorrelationEstimate; 4],
    pub s_value: f64,
    pub s_stderr: f64,
}

impl ChshResult {
    pub fn from_terms(angles: ChshAngles, terms: [CorrelationEstimate; 4]) -> Self {
        let s_value = chsh_combination(terms.map(|t| t.mean));
        let s_stderr = terms
            .iter()
            .map(|t| t.stderr * t.stderr)
            .sum::<f64>()
            .sqrt();
        ChshResult {
            angles,
            terms,
            s_value,
            s_stderr,
        }
    }
}

/// Closed-form CHSH value of the triangular correlator.
pub fn analytic_chsh(angles: ChshAngles) -> f64 {
    chsh_combination(angles.pairs().map(|(a, b)| triangular(a - b)))
}

/// Monte Carlo CHSH value of the shared-phase model.
pub fn chsh_classical(
    model: &PhaseModel,
    angles: ChshAngles,
    n: u64,
    sampling: ChshSampling,
    workers: usize,
) -> Result<ChshResult> {
    if n == 0 {
        return Err(Error::usage("chsh needs n >= 1"));
    }
    let stream = model.stream()?;
    let pairs = angles.pairs();
    let terms = match sampling {
        ChshSampling::SharedTrials => {
            let rad = pairs.map(|(a, b)| (a.radians(), b.radians()));
            let sums = map_chunks(&stream, n, workers, |chunk| {
                let mut acc = [0i64; 4];
                for s in chunk {
                    for (slot, &(a, b)) in acc.iter_mut().zip(&rad) {
                        *slot += i64::from(
                            dichotomic_raw(s.phi, a).value() * dichotomic_raw(s.phi, b).value(),
                        );
                    }
                }
                acc
            })?;
            let mut total = [0i64; 4];
            for part in sums {
                for (t, p) in total.iter_mut().zip(part) {
                    *t += p;
                }
            }
            let mut terms = [ZERO_ESTIMATE; 4];
            for (slot, sum) in terms.iter_mut().zip(total) {
                *slot = CorrelationEstimate::from_sum(sum, n)?;
            }
            terms
        }
        ChshSampling::IndependentStreams => {
            let mut terms = [ZERO_ESTIMATE; 4];
            let mut s = stream;
            for (slot, (a, b)) in terms.iter_mut().zip(pairs) {
                *slot = estimate_correlation_par(&s, a, b, n, workers)?;
                s.advance(n);
            }
            terms
        }
    };
    Ok(ChshResult::from_terms(angles, terms))
}

const ZERO_ESTIMATE: CorrelationEstimate = CorrelationEstimate {
    mean: 0.0,
    stderr: 0.0,
    n: 0,
};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct KsResult {
    pub statistic: f64,
    /// Large-sample 1% critical value `1.63/√n`.
    pub critical_1pct: f64,
}

impl KsResult {
    pub fn passes(&self) -> bool {
        self.statistic < self.critical_1pct
    }
}

pub const KS_MIN_SAMPLES: usize = 100;

/// One-sample KS statistic of `samples` against the uniform law on [0, 2π).
pub fn ks_uniformity(samples: &[f64]) -> Result<KsResult> {
    let n = samples.len();
    if n < KS_MIN_SAMPLES {
        return Err(Error::usage(format!(
            "KS test needs at least {KS_MIN_SAMPLES} samples, got {n}"
        )));
    }
    if let Some(bad) = samples.iter().find(|x| !(0.0..TAU).contains(*x)) {
        return Err(Error::domain(format!("sample {bad} outside [0, 2pi)")));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let nf = n as f64;
    let statistic = sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let cdf = x / TAU;
            let above = (i + 1) as f64 / nf - cdf;
            let below = cdf - i as f64 / nf;
            above.max(below)
        })
        .fold(0.0, f64::max);
    Ok(KsResult {
        statistic,
        critical_1pct: 1.63 / nf.sqrt(),
    })
}
