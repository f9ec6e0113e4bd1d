use alloc::vec::Vec;

use crate::audio::AudioBuffer;
use crate::error::{Error, Result};
use crate::sequence::{F0_MAX, F0_MIN};

/// Normalized autocorrelation peak needed to call a frame voiced.
pub const VOICING_THRESHOLD: f64 = 0.5;
/// Frames quieter than this RMS are unvoiced.
pub const SILENCE_RMS: f64 = 1e-4;
/// A local maximum within this fraction of the global peak wins if it has
/// the shortest lag; this avoids picking period multiples.
const PEAK_PICK_RATIO: f64 = 0.9;

/// Frame-rate F0 in Hz, 0 for unvoiced frames. Frame `t` is centred on
/// sample `t * hop + hop / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct F0Contour {
    values: Vec<f64>,
    hop_samples: u32,
    sample_rate: u32,
}

impl F0Contour {
    pub fn new(values: Vec<f64>, hop_samples: u32, sample_rate: u32) -> Result<Self> {
        if hop_samples == 0 || sample_rate == 0 {
            return Err(Error::Invalid("hop and sample rate must be positive".into()));
        }
        for &v in &values {
            crate::sequence::check_f0(v)?;
        }
        Ok(Self { values, hop_samples, sample_rate })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn hop_samples(&self) -> u32 {
        self.hop_samples
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn voiced_count(&self) -> usize {
        self.values.iter().filter(|&&v| v > 0.0).count()
    }

    /// F0 governing sample `n`.
    pub fn at_sample(&self, n: usize) -> f64 {
        if self.values.is_empty() {
            return 0.0;
        }
        self.values[(n / self.hop_samples as usize).min(self.values.len() - 1)]
    }

    /// First `len` frames.
    pub fn truncated(&self, len: usize) -> Self {
        Self { values: self.values[..len.min(self.values.len())].to_vec(), ..*self }
    }
}

/// Samples of the `frame_len` window centred on frame `t`, cropped to the buffer.
pub(crate) fn centred_frame(x: &[f64], t: usize, frame_len: usize, hop: usize) -> &[f64] {
    let centre = (t * hop + hop / 2) as isize;
    let start = (centre - (frame_len / 2) as isize).max(0) as usize;
    let end = (centre - (frame_len / 2) as isize + frame_len as isize).max(0) as usize;
    &x[start.min(x.len())..end.min(x.len())]
}

/// Autocorrelation pitch tracker.
///
/// Per frame the normalized autocorrelation
/// `r(tau) = sum x[n] x[n+tau] / sqrt(sum x[n]^2 * sum x[n+tau]^2)` is
/// evaluated over lags for 40..2000 Hz. A frame is voiced when the peak
/// exceeds 0.5 and its RMS exceeds 1e-4. The pitch lag is the shortest
/// local maximum within 90% of the peak, refined by a parabola through its
/// neighbours.
pub fn extract_f0(buf: &AudioBuffer, frame_len: usize, hop: usize) -> Result<F0Contour> {
    let sr = buf.sample_rate() as f64;
    let min_frame = libm::ceil(2.0 * sr / F0_MIN) as usize;
    if frame_len < min_frame {
        return Err(Error::TooShort(alloc::format!("frame length {frame_len} < {min_frame} samples")));
    }
    if hop == 0 {
        return Err(Error::Invalid("hop must be positive".into()));
    }
    if buf.len() < frame_len {
        return Err(Error::TooShort(alloc::format!("{} samples shorter than one {frame_len}-sample frame", buf.len())));
    }
    let x = buf.samples();
    let n_frames = x.len().div_ceil(hop);
    let min_lag = libm::ceil(sr / F0_MAX) as usize;
    let max_lag = libm::floor(sr / F0_MIN) as usize;

    let values = (0..n_frames).map(|t| frame_f0(centred_frame(x, t, frame_len, hop), sr, min_lag, max_lag)).collect();
    F0Contour::new(values, hop as u32, buf.sample_rate())
}

fn frame_f0(frame: &[f64], sr: f64, min_lag: usize, max_lag: usize) -> f64 {
    let len = frame.len();
    if len == 0 {
        return 0.0;
    }
    let energy: f64 = frame.iter().map(|v| v * v).sum();
    if libm::sqrt(energy / len as f64) <= SILENCE_RMS {
        return 0.0;
    }
    let max_lag = max_lag.min(len / 2);
    if max_lag < min_lag + 2 {
        return 0.0;
    }
    // prefix sums of squares for the two overlapping energies
    let mut prefix = Vec::with_capacity(len + 1);
    prefix.push(0.0);
    for v in frame {
        prefix.push(prefix.last().unwrap() + v * v);
    }
    let lo = min_lag - 1;
    let hi = max_lag + 1;
    let r: Vec<f64> = (lo..=hi)
        .map(|tau| {
            let n = len - tau;
            let num: f64 = frame[..n].iter().zip(&frame[tau..]).map(|(a, b)| a * b).sum();
            let e0 = prefix[n];
            let e1 = prefix[len] - prefix[tau];
            let den = libm::sqrt(e0 * e1);
            if den > 0.0 {
                num / den
            } else {
                0.0
            }
        })
        .collect();
    // r[i] is lag lo + i; search lags min_lag..=max_lag
    let search = 1..r.len() - 1;
    let peak = search.clone().map(|i| r[i]).fold(f64::NEG_INFINITY, f64::max);
    if peak <= VOICING_THRESHOLD {
        return 0.0;
    }
    let best = search
        .clone()
        .find(|&i| i > 1 && i < r.len() - 2 && r[i] >= PEAK_PICK_RATIO * peak && r[i] > r[i - 1] && r[i] >= r[i + 1])
        .unwrap_or_else(|| search.clone().find(|&i| r[i] == peak).unwrap());

    let (a, b, c) = (r[best - 1], r[best], r[best + 1]);
    let curv = a - 2.0 * b + c;
    let shift = if curv < 0.0 { (0.5 * (a - c) / curv).clamp(-0.5, 0.5) } else { 0.0 };
    let lag = (lo + best) as f64 + shift;
    let f0 = sr / lag;
    if (F0_MIN..=F0_MAX).contains(&f0) {
        f0
    } else {
        0.0
    }
}
