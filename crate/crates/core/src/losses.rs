//! Objective kernels: multi-resolution spectral loss, log-F0 loss, the
//! jitter/shimmer matching losses, the prosody-leakage loss and their
//! weighted total. All are plain functions of their inputs.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::audio::AudioBuffer;
use crate::error::{Error, Result};
use crate::fft::Fft;
use crate::metrics::{analyze_periods, jitter_ppq5, shimmer_local, AnalysisConfig, F0Contour, PeriodSequence};
use crate::sequence::FeatureSequence;

/// Guard added to magnitudes before taking logs.
pub const SPECTRAL_EPS: f64 = 1e-7;

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralConfig {
    pub resolutions: Vec<usize>,
    pub overlap_fraction: f64,
}

impl Default for SpectralConfig {
    /// FFT sizes 64..=1024 with 75% overlap.
    fn default() -> Self {
        Self { resolutions: vec![64, 128, 256, 512, 1024], overlap_fraction: 0.75 }
    }
}

impl SpectralConfig {
    fn validate(&self) -> Result<()> {
        if self.resolutions.is_empty() {
            return Err(Error::BadConfig("no spectral resolutions".into()));
        }
        if let Some(r) = self.resolutions.iter().find(|r| !r.is_power_of_two() || **r < 32) {
            return Err(Error::BadConfig(alloc::format!("resolution {r} is not a power of two >= 32")));
        }
        if !(0.0..1.0).contains(&self.overlap_fraction) {
            return Err(Error::BadConfig("overlap fraction must be in [0, 1)".into()));
        }
        Ok(())
    }

    fn hop(&self, size: usize) -> usize {
        (libm::round(size as f64 * (1.0 - self.overlap_fraction)) as usize).max(1)
    }
}

/// The two halves of the spectral loss, each averaged over resolutions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralTerms {
    /// Mean `|log(S_x + eps) - log(S_y + eps)|`.
    pub log_magnitude: f64,
    /// `||S_x - S_y||_F / ||S_x||_F`.
    pub convergence: f64,
}

impl SpectralTerms {
    pub fn total(&self) -> f64 {
        self.log_magnitude + self.convergence
    }
}

fn magnitude_frames(x: &[f64], size: usize, hop: usize, fft: &Fft, window: &[f64]) -> Vec<f64> {
    let n_frames = (x.len() - size) / hop + 1;
    let mut out = Vec::with_capacity(n_frames * (size / 2 + 1));
    let mut frame = vec![0.0; size];
    for f in 0..n_frames {
        for (i, v) in frame.iter_mut().enumerate() {
            *v = x[f * hop + i] * window[i];
        }
        out.extend(fft.real_forward(&frame).iter().map(|c| c.norm()));
    }
    out
}

pub fn spectral_loss_terms(x: &[f64], y: &[f64], cfg: &SpectralConfig) -> Result<SpectralTerms> {
    cfg.validate()?;
    if x.len() != y.len() {
        return Err(Error::LengthMismatch(x.len(), y.len()));
    }
    let largest = *cfg.resolutions.iter().max().unwrap();
    if x.len() < largest {
        return Err(Error::TooShort(alloc::format!("{} samples < resolution {largest}", x.len())));
    }
    let mut log_sum = 0.0;
    let mut sc_sum = 0.0;
    for &size in &cfg.resolutions {
        let hop = cfg.hop(size);
        let fft = Fft::new(size);
        // periodic Hann
        let window: Vec<f64> = (0..size).map(|i| 0.5 - 0.5 * libm::cos(2.0 * PI * i as f64 / size as f64)).collect();
        let sx = magnitude_frames(x, size, hop, &fft, &window);
        let sy = magnitude_frames(y, size, hop, &fft, &window);
        let log_term = sx
            .iter()
            .zip(&sy)
            .map(|(a, b)| (libm::log(a + SPECTRAL_EPS) - libm::log(b + SPECTRAL_EPS)).abs())
            .sum::<f64>()
            / sx.len() as f64;
        let diff = libm::sqrt(sx.iter().zip(&sy).map(|(a, b)| (a - b) * (a - b)).sum::<f64>());
        let ref_norm = libm::sqrt(sx.iter().map(|a| a * a).sum::<f64>());
        log_sum += log_term;
        sc_sum += if diff == 0.0 { 0.0 } else { diff / ref_norm.max(SPECTRAL_EPS) };
    }
    let n = cfg.resolutions.len() as f64;
    Ok(SpectralTerms { log_magnitude: log_sum / n, convergence: sc_sum / n })
}

/// Multi-resolution spectral loss: per resolution, Hann-windowed STFT
/// magnitudes compared by mean log-magnitude L1 plus spectral convergence,
/// then averaged over resolutions.
pub fn spectral_loss(x: &[f64], y: &[f64], cfg: &SpectralConfig) -> Result<f64> {
    spectral_loss_terms(x, y, cfg).map(|t| t.total())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct F0Loss {
    pub value: f64,
    /// Frames voiced in both contours; 0 means the value is a placeholder.
    pub joint_frames: usize,
}

impl F0Loss {
    pub fn no_overlap(&self) -> bool {
        self.joint_frames == 0
    }
}

/// Mean `|ln F0_pred - ln F0_src|` over frames voiced in both contours.
pub fn f0_loss(pred: &F0Contour, src: &F0Contour) -> Result<F0Loss> {
    if pred.len() != src.len() {
        return Err(Error::LengthMismatch(pred.len(), src.len()));
    }
    let (sum, count) = pred
        .values()
        .iter()
        .zip(src.values())
        .filter(|(&p, &s)| p > 0.0 && s > 0.0)
        .fold((0.0, 0usize), |(acc, n), (&p, &s)| (acc + (libm::log(p) - libm::log(s)).abs(), n + 1));
    let value = if count == 0 { 0.0 } else { sum / count as f64 };
    Ok(F0Loss { value, joint_frames: count })
}

pub fn jitter_loss_from_periods(a: &PeriodSequence, b: &PeriodSequence) -> Result<f64> {
    Ok((jitter_ppq5(a.periods())? - jitter_ppq5(b.periods())?).abs())
}

pub fn shimmer_loss_from_periods(a: &PeriodSequence, b: &PeriodSequence) -> Result<f64> {
    Ok((shimmer_local(a.amplitudes())? - shimmer_local(b.amplitudes())?).abs())
}

/// `|ppq5(x) - ppq5(y)|` with periods extracted from the audio.
pub fn jitter_loss(x: &AudioBuffer, y: &AudioBuffer, cfg: &AnalysisConfig) -> Result<f64> {
    jitter_loss_from_periods(&analyze_periods(x, cfg)?, &analyze_periods(y, cfg)?)
}

/// `|shimmer(x) - shimmer(y)|` with periods extracted from the audio.
pub fn shimmer_loss(x: &AudioBuffer, y: &AudioBuffer, cfg: &AnalysisConfig) -> Result<f64> {
    shimmer_loss_from_periods(&analyze_periods(x, cfg)?, &analyze_periods(y, cfg)?)
}

/// Mean absolute difference of two encoder outputs over their common
/// leading frames.
pub fn prosody_leak_loss(r1: &FeatureSequence, r2: &FeatureSequence) -> Result<f64> {
    if r1.dim() != r2.dim() {
        return Err(Error::DimMismatch { expected: r1.dim(), got: r2.dim() });
    }
    let t = r1.len().min(r2.len());
    if t == 0 {
        return Err(Error::Empty);
    }
    let n = t * r1.dim();
    let sum: f64 = r1.as_slice()[..n].iter().zip(&r2.as_slice()[..n]).map(|(a, b)| (a - b).abs()).sum();
    Ok(sum / n as f64)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossWeights {
    pub spectral: f64,
    pub jitter: f64,
    pub shimmer: f64,
    pub prosody: f64,
    pub f0: f64,
}

impl Default for LossWeights {
    fn default() -> Self {
        Self { spectral: 1.0, jitter: 10.0, shimmer: 0.1, prosody: 0.1, f0: 1.0 }
    }
}

impl LossWeights {
    pub fn validate(&self) -> Result<()> {
        let all = [self.spectral, self.jitter, self.shimmer, self.prosody, self.f0];
        if all.iter().all(|w| w.is_finite() && *w >= 0.0) {
            Ok(())
        } else {
            Err(Error::BadConfig("loss weights must be finite and non-negative".into()))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LossComponents {
    pub spectral: f64,
    pub jitter: f64,
    pub shimmer: f64,
    pub prosody: f64,
    pub f0: f64,
}

/// `w_s L_s + w_jit L_jit + w_shim L_shim + w_pro L_pro + w_f0 L_f0`.
pub fn total_loss(c: &LossComponents, w: &LossWeights) -> Result<f64> {
    w.validate()?;
    if ![c.spectral, c.jitter, c.shimmer, c.prosody, c.f0].iter().all(|v| v.is_finite()) {
        return Err(Error::NonFinite("loss components"));
    }
    Ok(w.spectral * c.spectral + w.jitter * c.jitter + w.shimmer * c.shimmer + w.prosody * c.prosody + w.f0 * c.f0)
}
