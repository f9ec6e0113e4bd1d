//! Band-limited sawtooth source: `sum_j sin(phi_j) / j` over the harmonics
//! that stay below Nyquist.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::sequence::check_f0;

/// Phase accumulators of the harmonic oscillator bank, each kept in `[0, 2pi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicState {
    phases: Vec<f64>,
}

impl HarmonicState {
    pub fn new(n_harmonics: usize) -> Self {
        Self { phases: vec![0.0; n_harmonics] }
    }

    pub fn n_harmonics(&self) -> usize {
        self.phases.len()
    }

    /// Phase of harmonic `j` (1-based) is `phases()[j - 1]`.
    pub fn phases(&self) -> &[f64] {
        &self.phases
    }
}

/// Expands frame-rate F0 to one value per sample.
///
/// Frame `t` is anchored at the centre of its hop, `(t + 0.5) * hop`. Between
/// two voiced anchors F0 is linearly interpolated; if either neighbour is
/// unvoiced the nearer frame's value is held. Samples before the first or
/// after the last anchor take that frame's value.
pub fn upsample_f0(f0: &[f64], hop: usize) -> Vec<f64> {
    let t_frames = f0.len();
    let n = t_frames * hop;
    let mut out = Vec::with_capacity(n);
    let half = hop as f64 / 2.0;
    for i in 0..n {
        let p = i as f64;
        let v = if p <= half {
            f0[0]
        } else if p >= (t_frames - 1) as f64 * hop as f64 + half {
            f0[t_frames - 1]
        } else {
            let pos = (p - half) / hop as f64;
            let t = (libm::floor(pos) as usize).min(t_frames - 2);
            let frac = pos - t as f64;
            let (a, b) = (f0[t], f0[t + 1]);
            if a == 0.0 || b == 0.0 {
                if frac < 0.5 {
                    a
                } else {
                    b
                }
            } else {
                a + (b - a) * frac
            }
        };
        out.push(v);
    }
    out
}

/// Renders the unfiltered harmonic source for per-sample F0 values,
/// continuing from (and updating) `state`.
///
/// Harmonic `j` contributes `sin(phi_j) / j` only while `j * f0 < sr / 2`.
/// Every accumulator then advances by `2 pi j f0 / sr`. Unvoiced samples
/// (`f0 == 0`) are silent and leave the phases untouched.
pub fn render_harmonics(f0_per_sample: &[f64], sample_rate: u32, state: &mut HarmonicState) -> Vec<f64> {
    let sr = sample_rate as f64;
    let nyquist = sr / 2.0;
    let mut out = Vec::with_capacity(f0_per_sample.len());
    for &f in f0_per_sample {
        if f <= 0.0 {
            out.push(0.0);
            continue;
        }
        let step = TAU * f / sr;
        let mut acc = 0.0;
        for (idx, phase) in state.phases.iter_mut().enumerate() {
            let j = (idx + 1) as f64;
            if j * f < nyquist {
                acc += libm::sin(*phase) / j;
            }
            let mut next = *phase + j * step;
            if next >= TAU {
                next -= TAU * libm::floor(next / TAU);
                // floor can land exactly on TAU after rounding
                if next >= TAU {
                    next = 0.0;
                }
            }
            *phase = next;
        }
        out.push(acc);
    }
    out
}

/// Frame-rate entry point: validates F0, upsamples, and renders from zero phase.
pub fn synth_harmonic_unfiltered(f0_hz: &[f64], hop: usize, sample_rate: u32, n_harmonics: usize) -> Result<Vec<f64>> {
    if f0_hz.is_empty() {
        return Err(Error::Empty);
    }
    for &f in f0_hz {
        check_f0(f)?;
    }
    let per_sample = upsample_f0(f0_hz, hop);
    let mut state = HarmonicState::new(n_harmonics);
    Ok(render_harmonics(&per_sample, sample_rate, &mut state))
}
