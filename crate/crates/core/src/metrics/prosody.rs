use alloc::vec::Vec;

use super::pitch::{centred_frame, F0Contour};
use crate::audio::AudioBuffer;
use crate::error::{Error, Result};
use crate::sequence::FeatureSequence;

/// Additive floor inside the loudness logarithm.
pub const LOUDNESS_FLOOR: f64 = 1e-7;

/// Frame loudness `20 log10(rms + 1e-7)` in dB, one frame per hop, each
/// frame centred like [`super::extract_f0`] and cropped to the buffer.
pub fn loudness(buf: &AudioBuffer, frame_len: usize, hop: usize) -> Result<FeatureSequence> {
    if frame_len == 0 || hop == 0 {
        return Err(Error::Invalid("frame length and hop must be positive".into()));
    }
    let x = buf.samples();
    let values: Vec<f64> = (0..x.len().div_ceil(hop))
        .map(|t| {
            let f = centred_frame(x, t, frame_len, hop);
            let rms =
                if f.is_empty() { 0.0 } else { libm::sqrt(f.iter().map(|v| v * v).sum::<f64>() / f.len() as f64) };
            20.0 * libm::log10(rms + LOUDNESS_FLOOR)
        })
        .collect();
    FeatureSequence::new(values, 1, hop as u32)
}

fn is_degenerate(std: f64, mean: f64) -> bool {
    std <= 1e-12 * mean.abs().max(1.0)
}

/// Per-utterance z-normalised `ln F0` over voiced frames (population
/// statistics); unvoiced frames map to 0.
pub fn log_f0_znorm(f0: &F0Contour) -> Result<FeatureSequence> {
    let logs: Vec<f64> = f0.values().iter().filter(|&&v| v > 0.0).map(|&v| libm::log(v)).collect();
    if logs.is_empty() {
        return Err(Error::AllUnvoiced);
    }
    let n = logs.len() as f64;
    let mean = logs.iter().sum::<f64>() / n;
    let std = libm::sqrt(logs.iter().map(|l| (l - mean) * (l - mean)).sum::<f64>() / n);
    if is_degenerate(std, mean) {
        return Err(Error::ZeroVariance);
    }
    let values = f0.values().iter().map(|&v| if v > 0.0 { (libm::log(v) - mean) / std } else { 0.0 }).collect();
    FeatureSequence::new(values, 1, f0.hop_samples())
}

/// Pearson correlation of two F0 contours over frames voiced in both.
pub fn pcc(a: &F0Contour, b: &F0Contour) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch(a.len(), b.len()));
    }
    let pairs: Vec<(f64, f64)> =
        a.values().iter().zip(b.values()).filter(|(&x, &y)| x > 0.0 && y > 0.0).map(|(&x, &y)| (x, y)).collect();
    if pairs.len() < 2 {
        return Err(Error::NoOverlap);
    }
    let n = pairs.len() as f64;
    let ma = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let mb = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sab, mut saa, mut sbb) = (0.0, 0.0, 0.0);
    for &(x, y) in &pairs {
        let (dx, dy) = (x - ma, y - mb);
        sab += dx * dy;
        saa += dx * dx;
        sbb += dy * dy;
    }
    if is_degenerate(libm::sqrt(saa / n), ma) || is_degenerate(libm::sqrt(sbb / n), mb) {
        return Err(Error::ZeroVariance);
    }
    Ok((sab / libm::sqrt(saa * sbb)).clamp(-1.0, 1.0))
}
