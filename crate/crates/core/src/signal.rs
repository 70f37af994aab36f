//! Dichotomic signals `a(α, t) = sign cos(Φ(t) + α)` and their correlations.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::phase::{map_chunks, wrap_angle, Angle, PhaseSample, PhaseStream};

/// A ±1 signal value. `+1` reads as green / bit 0, `−1` as red / bit 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DichotomicValue {
    Plus,
    Minus,
}

impl DichotomicValue {
    #[inline]
    pub fn value(self) -> i8 {
        match self {
            DichotomicValue::Plus => 1,
            DichotomicValue::Minus => -1,
        }
    }

    #[inline]
    pub fn bit(self) -> u8 {
        match self {
            DichotomicValue::Plus => 0,
            DichotomicValue::Minus => 1,
        }
    }

    pub fn from_bit(bit: u8) -> Result<Self> {
        match bit {
            0 => Ok(DichotomicValue::Plus),
            1 => Ok(DichotomicValue::Minus),
            b => Err(Error::domain(format!("bit must be 0 or 1, got {b}"))),
        }
    }
}

impl std::ops::Neg for DichotomicValue {
    type Output = DichotomicValue;
    fn neg(self) -> DichotomicValue {
        match self {
            DichotomicValue::Plus => DichotomicValue::Minus,
            DichotomicValue::Minus => DichotomicValue::Plus,
        }
    }
}

/// Sign of `cos(phi + alpha)`, with the measure-zero tie resolved to `+1`.
#[inline]
pub fn dichotomic_raw(phi: f64, alpha: f64) -> DichotomicValue {
    if (phi + alpha).cos() >= 0.0 {
        DichotomicValue::Plus
    } else {
        DichotomicValue::Minus
    }
}

#[inline]
pub fn dichotomic(sample: PhaseSample, alpha: Angle) -> DichotomicValue {
    dichotomic_raw(sample.phi, alpha.radians())
}

/// Triangular correlator `M(Δα) = 1 − 2|Δα|/π`, with Δα wrapped to (−π, π].
pub fn analytic_correlation(delta: f64) -> Result<f64> {
    Ok(triangular(wrap_angle(delta)?))
}

#[inline]
pub(crate) fn triangular(delta: Angle) -> f64 {
    1.0 - 2.0 * delta.abs() / PI
}

/// Probability that `a(α + Δα)` equals `a(α)`, i.e. `(1 + M(Δα)) / 2`.
pub fn conditional_same_color_probability(delta: f64) -> Result<f64> {
    Ok(1.0 - wrap_angle(delta)?.abs() / PI)
}

/// Mean of `n` products of ±1 values with its normal-approximation error.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelationEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub n: u64,
}

impl CorrelationEstimate {
    /// `sum` is the signed sum of the `n` products, so |sum| ≤ n and
    /// `sum ≡ n (mod 2)`.
    pub fn from_sum(sum: i64, n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::usage(
                "correlation estimate needs at least one sample",
            ));
        }
        if sum.unsigned_abs() > n || (sum.unsigned_abs() % 2) != (n % 2) {
            return Err(Error::domain(format!(
                "sum {sum} is not a sum of {n} values in {{-1, +1}}"
            )));
        }
        let mean = sum as f64 / n as f64;
        let stderr = ((1.0 - mean * mean).max(0.0) / n as f64).sqrt();
        Ok(CorrelationEstimate { mean, stderr, n })
    }

    /// Number of `+1` products, `(n + n·mean) / 2`.
    pub fn agreements(&self) -> u64 {
        ((self.n as f64 + self.n as f64 * self.mean) / 2.0).round() as u64
    }
}

/// Estimate `⟨a(α₁)a(α₂)⟩` over the next `n` trials of `stream`.
///
/// The stream itself is not advanced; the same stream always gives the same
/// estimate.
pub fn estimate_correlation(
    stream: &PhaseStream,
    alpha1: Angle,
    alpha2: Angle,
    n: u64,
) -> Result<CorrelationEstimate> {
    estimate_correlation_par(stream, alpha1, alpha2, n, 1)
}

/// As [`estimate_correlation`], splitting the trials over `workers` threads.
/// The result is identical for every worker count.
pub fn estimate_correlation_par(
    stream: &PhaseStream,
    alpha1: Angle,
    alpha2: Angle,
    n: u64,
    workers: usize,
) -> Result<CorrelationEstimate> {
    if n == 0 {
        return Err(Error::usage("estimate_correlation needs n >= 1"));
    }
    let (a1, a2) = (alpha1.radians(), alpha2.radians());
    let sums = map_chunks(stream, n, workers, |chunk| {
        chunk
            .map(|s| {
                let p = dichotomic_raw(s.phi, a1).value() * dichotomic_raw(s.phi, a2).value();
                i64::from(p)
            })
            .sum::<i64>()
    })?;
    CorrelationEstimate::from_sum(sums.into_iter().sum(), n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::phase::PhaseModel;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn sample(phi: f64) -> PhaseSample {
        PhaseSample { t: 0, phi }
    }

    fn angle(x: f64) -> Angle {
        Angle::new(x).unwrap()
    }

    #[test]
    fn dichotomic_examples() {
        assert_eq!(dichotomic(sample(0.0), angle(0.0)).value(), 1);
        assert_eq!(dichotomic(sample(PI), angle(0.0)).value(), -1);
        assert_eq!(dichotomic(sample(0.0), angle(FRAC_PI_4)).value(), 1);
        assert_eq!(dichotomic(sample(FRAC_PI_2), angle(0.0)).value(), 1);
    }

    #[test]
    fn bit_mapping() {
        assert_eq!(DichotomicValue::Plus.bit(), 0);
        assert_eq!(DichotomicValue::Minus.bit(), 1);
        assert_eq!(
            DichotomicValue::from_bit(1).unwrap(),
            DichotomicValue::Minus
        );
        assert!(DichotomicValue::from_bit(2).is_err());
        assert_eq!(-DichotomicValue::Plus, DichotomicValue::Minus);
    }

    #[test]
    fn analytic_examples() {
        assert_eq!(analytic_correlation(0.0).unwrap(), 1.0);
        assert_eq!(analytic_correlation(PI).unwrap(), -1.0);
        assert!(analytic_correlation(FRAC_PI_2).unwrap().abs() < 1e-15);
        assert!((analytic_correlation(FRAC_PI_4).unwrap() - 0.5).abs() < 1e-15);
        assert!(analytic_correlation(1.5 * PI).unwrap().abs() < 1e-15);
        assert!(analytic_correlation(f64::NAN).is_err());
    }

    #[test]
    fn same_color_examples() {
        assert_eq!(conditional_same_color_probability(0.0).unwrap(), 1.0);
        assert_eq!(conditional_same_color_probability(PI).unwrap(), 0.0);
        assert!((conditional_same_color_probability(FRAC_PI_4).unwrap() - 0.75).abs() < 1e-15);
        assert!(conditional_same_color_probability(f64::INFINITY).is_err());
    }

    /// Exact agreement measure: a(φ+α₂) = a(φ+α₁) on the set of φ where
    /// cos(φ+α₁) and cos(φ+α₂) share a sign. Integrate by bisecting the
    /// sign-change points on a fine grid, independent of the closed form.
    fn agreement_measure(delta: f64) -> f64 {
        let steps = 200_000;
        let h = 2.0 * PI / steps as f64;
        let mut same = 0.0;
        for i in 0..steps {
            let x = (i as f64 + 0.5) * h;
            if (x.cos() >= 0.0) == ((x + delta).cos() >= 0.0) {
                same += h;
            }
        }
        same / (2.0 * PI)
    }

    #[test]
    fn same_color_matches_quadrature() {
        for &d in &[0.0, FRAC_PI_4, FRAC_PI_2, 2.0, PI, 1.5 * PI, -0.3] {
            let q = agreement_measure(d);
            let c = conditional_same_color_probability(d).unwrap();
            assert!(
                (q - c).abs() < 1e-4,
                "delta {d}: quadrature {q} closed form {c}"
            );
        }
    }

    #[test]
    fn monte_carlo_three_halves_pi() {
        // 3π/2 wraps to −π/2, so the signals are uncorrelated
        let stream = PhaseModel::iid(42).stream().unwrap();
        let est = estimate_correlation(&stream, angle(0.0), angle(1.5 * PI), 100_000).unwrap();
        assert!(est.mean.abs() <= 4.0 * est.stderr, "{est:?}");
    }

    #[test]
    fn estimator_identical_and_opposite() {
        let stream = PhaseModel::iid(1).stream().unwrap();
        let e = estimate_correlation(&stream, angle(0.3), angle(0.3), 1000).unwrap();
        assert_eq!((e.mean, e.stderr, e.n), (1.0, 0.0, 1000));
        let e = estimate_correlation(&stream, angle(0.3), angle(0.3 + PI), 1000).unwrap();
        assert_eq!((e.mean, e.stderr), (-1.0, 0.0));
    }

    #[test]
    fn estimator_pi_over_four() {
        let stream = PhaseModel::iid(2024).stream().unwrap();
        let e =
            estimate_correlation(&stream, angle(0.1), angle(0.1 + FRAC_PI_4), 1_000_000).unwrap();
        assert!((e.mean - 0.5).abs() <= 4.0 * e.stderr, "{e:?}");
    }

    #[test]
    fn estimator_rejects_zero_trials() {
        let stream = PhaseModel::iid(1).stream().unwrap();
        assert!(matches!(
            estimate_correlation(&stream, Angle::ZERO, Angle::ZERO, 0),
            Err(Error::Usage(_))
        ));
    }

    #[test]
    fn estimator_worker_independent() {
        let stream = PhaseModel::iid(77).stream().unwrap();
        let a = estimate_correlation_par(&stream, angle(0.0), angle(1.0), 10_001, 1).unwrap();
        for w in [2, 3, 4, 7] {
            let b = estimate_correlation_par(&stream, angle(0.0), angle(1.0), 10_001, w).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn from_sum_validates_parity() {
        assert!(CorrelationEstimate::from_sum(1, 2).is_err());
        assert!(CorrelationEstimate::from_sum(5, 3).is_err());
        let e = CorrelationEstimate::from_sum(2, 4).unwrap();
        assert_eq!(e.agreements(), 3);
        assert!((e.stderr - (0.75f64 / 4.0).sqrt()).abs() < 1e-15);
    }
}
