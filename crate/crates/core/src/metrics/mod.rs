//! Pitch tracking, period marking, clinical perturbation measures and the
//! hand-crafted prosody features.

mod periods;
mod pitch;
mod prosody;

pub use periods::{extract_periods, jitter_ppq5, shimmer_local, PeriodSequence};
pub use pitch::{extract_f0, F0Contour, SILENCE_RMS, VOICING_THRESHOLD};
pub use prosody::{log_f0_znorm, loudness, pcc, LOUDNESS_FLOOR};

use crate::audio::AudioBuffer;
use crate::error::Result;

/// Frame length and hop used when metrics are derived from audio.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AnalysisConfig {
    pub frame_len: usize,
    pub hop: usize,
}

impl Default for AnalysisConfig {
    /// 50 ms frames (two periods of 40 Hz at 16 kHz) every 10 ms.
    fn default() -> Self {
        Self { frame_len: 800, hop: 160 }
    }
}

/// `extract_f0` followed by `extract_periods`.
pub fn analyze_periods(buf: &AudioBuffer, cfg: &AnalysisConfig) -> Result<PeriodSequence> {
    let f0 = extract_f0(buf, cfg.frame_len, cfg.hop)?;
    extract_periods(buf, &f0)
}
