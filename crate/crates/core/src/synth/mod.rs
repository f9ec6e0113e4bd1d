//! Subtractive harmonic-plus-noise synthesiser.
//!
//! A band-limited sawtooth (F0-driven) and uniform noise are each shaped by
//! per-frame zero-phase FIR filters and summed.

mod filter;
mod harmonic;
mod noise;

pub use filter::{filters_from_params, ltv_fir_filter, FirBank};
pub use harmonic::{render_harmonics, synth_harmonic_unfiltered, upsample_f0, HarmonicState};
pub use noise::synth_noise;

use crate::audio::AudioBuffer;
use crate::error::{Error, Result};
use crate::sequence::SynthParamsSeq;

pub const DEFAULT_SAMPLE_RATE: u32 = 16_000;
pub const DEFAULT_HARMONICS: usize = 150;
pub const DEFAULT_FFT_SIZE: usize = 1024;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SynthConfig {
    pub sample_rate: u32,
    pub n_harmonics: usize,
    pub frame_hop: usize,
    pub fft_size_filter: usize,
    pub noise_seed: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            sample_rate: DEFAULT_SAMPLE_RATE,
            n_harmonics: DEFAULT_HARMONICS,
            frame_hop: 160,
            fft_size_filter: DEFAULT_FFT_SIZE,
            noise_seed: 0,
        }
    }
}

impl SynthConfig {
    pub fn with_hop(frame_hop: usize) -> Self {
        Self { frame_hop, ..Self::default() }
    }

    /// Checks that segments of `frame_hop` samples convolved with the
    /// longest filter (`2 * max_filter_params - 1` taps) fit the FFT without
    /// circular wrap-around.
    pub fn validate(&self, max_filter_params: usize) -> Result<()> {
        if self.sample_rate == 0 || self.n_harmonics == 0 || self.frame_hop == 0 {
            return Err(Error::BadConfig("sample rate, harmonics and hop must be positive".into()));
        }
        let n = self.fft_size_filter;
        if !n.is_power_of_two() {
            return Err(Error::BadConfig(alloc::format!("filter fft size {n} is not a power of two")));
        }
        let taps = 2 * max_filter_params.max(1) - 1;
        if n < 2 * self.frame_hop || n < self.frame_hop + taps - 1 {
            return Err(Error::BadConfig(alloc::format!(
                "filter fft size {n} too small for hop {} and {taps} taps",
                self.frame_hop
            )));
        }
        Ok(())
    }
}

/// Renders `params` to audio: `ltv(harmonic source, psi_h) + ltv(noise, psi_s)`.
pub fn synthesize(params: &SynthParamsSeq, cfg: &SynthConfig) -> Result<AudioBuffer> {
    if params.hop_samples() as usize != cfg.frame_hop {
        return Err(Error::BadConfig(alloc::format!(
            "parameter hop {} differs from synthesiser hop {}",
            params.hop_samples(),
            cfg.frame_hop
        )));
    }
    cfg.validate(params.harmonic_len().max(params.noise_len()))?;
    if params.is_empty() {
        return AudioBuffer::new(alloc::vec::Vec::new(), cfg.sample_rate);
    }
    let hop = cfg.frame_hop;
    let source = synth_harmonic_unfiltered(params.f0_hz(), hop, cfg.sample_rate, cfg.n_harmonics)?;
    let harm_bank = filters_from_params(params.psi_h(), params.harmonic_len(), cfg.fft_size_filter)?;
    let harmonic = ltv_fir_filter(&source, &harm_bank, hop)?;

    let noise = synth_noise(source.len(), cfg.noise_seed);
    let noise_bank = filters_from_params(params.psi_s(), params.noise_len(), cfg.fft_size_filter)?;
    let stochastic = ltv_fir_filter(&noise, &noise_bank, hop)?;

    let out = harmonic.iter().zip(&stochastic).map(|(h, s)| h + s).collect();
    AudioBuffer::new(out, cfg.sample_rate)
}
