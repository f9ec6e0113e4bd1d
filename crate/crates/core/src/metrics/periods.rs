use alloc::vec::Vec;

use super::pitch::F0Contour;
use crate::audio::AudioBuffer;
use crate::error::{Error, Result};
use crate::sequence::{F0_MAX, F0_MIN};

/// Glottal-cycle lengths (seconds) and peak amplitudes.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct PeriodSequence {
    periods: Vec<f64>,
    amplitudes: Vec<f64>,
}

impl PeriodSequence {
    pub fn new(periods: Vec<f64>, amplitudes: Vec<f64>) -> Result<Self> {
        if periods.len() != amplitudes.len() {
            return Err(Error::LengthMismatch(periods.len(), amplitudes.len()));
        }
        let (lo, hi) = (1.0 / F0_MAX, 1.0 / F0_MIN);
        if let Some(&t) = periods.iter().find(|&&t| !(lo..=hi).contains(&t)) {
            return Err(Error::Invalid(alloc::format!("period {t} s outside [{lo}, {hi}]")));
        }
        if amplitudes.iter().any(|&a| !a.is_finite() || a < 0.0) {
            return Err(Error::Invalid("amplitudes must be finite and non-negative".into()));
        }
        Ok(Self { periods, amplitudes })
    }

    pub fn periods(&self) -> &[f64] {
        &self.periods
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn len(&self) -> usize {
        self.periods.len()
    }

    pub fn is_empty(&self) -> bool {
        self.periods.is_empty()
    }

    pub fn jitter_ppq5(&self) -> Result<f64> {
        jitter_ppq5(&self.periods)
    }

    pub fn shimmer_local(&self) -> Result<f64> {
        shimmer_local(&self.amplitudes)
    }
}

/// Peak-picking period marker.
///
/// Inside each voiced run, the first landmark is the largest `|x|` within
/// one expected period of the run start; each next landmark is the largest
/// `|x|` in `prev + [0.8, 1.25] * sr / F0(prev)`. Period `i` spans landmarks
/// `i` and `i + 1` and takes the amplitude of landmark `i`. A run ends when
/// the search window leaves it or holds only zeros. Runs are processed
/// independently, so no period crosses an unvoiced gap.
pub fn extract_periods(buf: &AudioBuffer, f0: &F0Contour) -> Result<PeriodSequence> {
    let x = buf.samples();
    let sr = buf.sample_rate() as f64;
    let shortest = libm::ceil(sr / F0_MAX) as usize;
    let longest = libm::floor(sr / F0_MIN) as usize;

    let mut periods = Vec::new();
    let mut amplitudes = Vec::new();
    let mut any_voiced = false;
    let mut n = 0;
    while n < x.len() {
        if f0.at_sample(n) <= 0.0 {
            n += 1;
            continue;
        }
        let start = n;
        while n < x.len() && f0.at_sample(n) > 0.0 {
            n += 1;
        }
        any_voiced = true;
        let end = n;

        let first_span = libm::round(sr / f0.at_sample(start)) as usize;
        let mut prev = argmax_abs(x, start, (start + first_span).min(end) - 1);
        loop {
            let expected = sr / f0.at_sample(prev);
            let lo = (prev + libm::ceil(0.8 * expected) as usize).max(prev + shortest);
            let hi = (prev + libm::floor(1.25 * expected) as usize).min(prev + longest).min(end - 1);
            if lo > hi {
                break;
            }
            let next = argmax_abs(x, lo, hi);
            if x[next] == 0.0 {
                // no excitation left in this run
                break;
            }
            periods.push((next - prev) as f64 / sr);
            amplitudes.push(x[prev].abs());
            prev = next;
        }
    }
    if !any_voiced {
        return Err(Error::NoVoicedRegion);
    }
    PeriodSequence::new(periods, amplitudes)
}

/// Index of the first maximum of `|x|` on `lo..=hi`.
fn argmax_abs(x: &[f64], lo: usize, hi: usize) -> usize {
    let mut best = lo;
    for i in lo..=hi {
        if x[i].abs() > x[best].abs() {
            best = i;
        }
    }
    best
}

/// Five-point period perturbation quotient, in percent.
///
/// The numerator averages `|T_i - mean(T_{i-2..=i+2})|` over every index
/// with a complete five-point window (`i = 2..=N-3`, zero-based) but divides
/// by `N - 1`; the denominator is the mean period.
pub fn jitter_ppq5(periods: &[f64]) -> Result<f64> {
    let n = periods.len();
    if n < 5 {
        return Err(Error::TooFewPeriods { needed: 5, found: n });
    }
    // sum of (T_i - T_k) over the window is exactly zero for constant input
    let dev: f64 =
        (2..n - 2).map(|i| (periods[i - 2..=i + 2].iter().map(|&t| periods[i] - t).sum::<f64>() / 5.0).abs()).sum();
    let mean = periods.iter().sum::<f64>() / n as f64;
    if mean <= 0.0 {
        return Err(Error::Invalid("mean period must be positive".into()));
    }
    Ok(dev / (n - 1) as f64 / mean * 100.0)
}

/// Mean absolute difference of consecutive amplitudes over mean amplitude.
pub fn shimmer_local(amplitudes: &[f64]) -> Result<f64> {
    let n = amplitudes.len();
    if n < 2 {
        return Err(Error::TooFewPeriods { needed: 2, found: n });
    }
    let mean = amplitudes.iter().sum::<f64>() / n as f64;
    if mean <= 0.0 {
        return Err(Error::ZeroAmplitude);
    }
    let diff = amplitudes.windows(2).map(|w| (w[0] - w[1]).abs()).sum::<f64>() / (n - 1) as f64;
    Ok(diff / mean)
}
