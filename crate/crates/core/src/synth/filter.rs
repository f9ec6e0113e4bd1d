//! Frequency-sampled zero-phase FIR filters and their time-varying
//! overlap-add application.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::error::{Error, Result};
use crate::fft::{Complex64, Fft};

/// One zero-phase FIR per frame, kept both as taps and as the (real)
/// frequency response on an `fft_size` grid.
///
/// Taps are stored for lags `-(F-1)..=F-1`, so `taps(t)[F-1]` is lag 0.
#[derive(Debug, Clone, PartialEq)]
pub struct FirBank {
    fft_size: usize,
    half_len: usize,
    taps: Vec<f64>,
    responses: Vec<f64>,
}

impl FirBank {
    pub fn len(&self) -> usize {
        if self.tap_len() == 0 {
            0
        } else {
            self.taps.len() / self.tap_len()
        }
    }

    pub fn is_empty(&self) -> bool {
        self.taps.is_empty()
    }

    pub fn fft_size(&self) -> usize {
        self.fft_size
    }

    /// `2F - 1`.
    pub fn tap_len(&self) -> usize {
        2 * self.half_len + 1
    }

    /// Index of lag zero inside a tap row.
    pub fn center(&self) -> usize {
        self.half_len
    }

    pub fn taps(&self, frame: usize) -> &[f64] {
        let n = self.tap_len();
        &self.taps[frame * n..(frame + 1) * n]
    }

    /// Real response at bins `0..=fft_size/2`.
    pub fn response(&self, frame: usize) -> &[f64] {
        let n = self.fft_size / 2 + 1;
        &self.responses[frame * n..(frame + 1) * n]
    }
}

/// Converts rows of `n_params` log-magnitudes into windowed zero-phase FIRs.
///
/// Row values sample `ln |H|` at `n_params` evenly spaced frequencies from DC
/// to Nyquist inclusive. Magnitudes are linearly interpolated onto the
/// `fft_size/2 + 1` bins, inverse transformed with zero phase, and the
/// centred response is truncated by a Hann window to `2 n_params - 1` taps.
pub fn filters_from_params(rows: &[f64], n_params: usize, fft_size: usize) -> Result<FirBank> {
    if n_params == 0 {
        return Err(Error::BadConfig("filter must have at least one parameter".into()));
    }
    if !fft_size.is_power_of_two() || fft_size < 2 * n_params {
        return Err(Error::BadConfig(alloc::format!(
            "fft size {fft_size} must be a power of two of at least {}",
            2 * n_params
        )));
    }
    if !rows.len().is_multiple_of(n_params) {
        return Err(Error::SizeMismatch(alloc::format!("{} parameters is not a multiple of {n_params}", rows.len())));
    }
    if rows.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("filter parameters"));
    }

    let fft = Fft::new(fft_size);
    let bins = fft_size / 2 + 1;
    let half_len = n_params - 1;
    let window: Vec<f64> =
        (0..=half_len).map(|lag| 0.5 * (1.0 + libm::cos(PI * lag as f64 / n_params as f64))).collect();

    let n_frames = rows.len() / n_params;
    let mut taps = Vec::with_capacity(n_frames * (2 * half_len + 1));
    let mut responses = Vec::with_capacity(n_frames * bins);
    let mut spectrum = vec![Complex64::new(0.0, 0.0); bins];
    let mut circ = vec![Complex64::new(0.0, 0.0); fft_size];

    for row in rows.chunks_exact(n_params) {
        let mags: Vec<f64> = row.iter().map(|&v| libm::exp(v)).collect();
        for (k, s) in spectrum.iter_mut().enumerate() {
            *s = Complex64::new(interp(&mags, k as f64 / (bins - 1) as f64), 0.0);
        }
        let ir = fft.real_inverse(&spectrum);

        let start = taps.len();
        taps.resize(start + 2 * half_len + 1, 0.0);
        let row_taps = &mut taps[start..];
        for c in circ.iter_mut() {
            *c = Complex64::new(0.0, 0.0);
        }
        for lag in 0..=half_len {
            let w = window[lag];
            let pos = ir[lag] * w;
            row_taps[half_len + lag] = pos;
            circ[lag].re = pos;
            if lag > 0 {
                let neg = ir[fft_size - lag] * w;
                row_taps[half_len - lag] = neg;
                circ[fft_size - lag].re = neg;
            }
        }
        fft.forward(&mut circ);
        responses.extend(circ[..bins].iter().map(|c| c.re));
    }

    Ok(FirBank { fft_size, half_len, taps, responses })
}

/// Linear interpolation of `values` sampled on `[0, 1]` at position `u`.
fn interp(values: &[f64], u: f64) -> f64 {
    if values.len() == 1 {
        return values[0];
    }
    let pos = u * (values.len() - 1) as f64;
    let i = (libm::floor(pos) as usize).min(values.len() - 2);
    let frac = pos - i as f64;
    values[i] * (1.0 - frac) + values[i + 1] * frac
}

/// Filters `signal` hop by hop: segment `t` (samples `t*hop .. (t+1)*hop`)
/// is convolved with frame `t`'s zero-phase FIR in the frequency domain and
/// the result, including its pre- and post-ringing, is overlap-added into
/// the output. Output length equals input length.
pub fn ltv_fir_filter(signal: &[f64], bank: &FirBank, hop: usize) -> Result<Vec<f64>> {
    if hop == 0 {
        return Err(Error::BadConfig("hop must be positive".into()));
    }
    if bank.len() * hop < signal.len() {
        return Err(Error::SizeMismatch(alloc::format!(
            "{} filter frames x hop {hop} does not cover {} samples",
            bank.len(),
            signal.len()
        )));
    }
    let n = bank.fft_size();
    if hop + bank.tap_len() - 1 > n {
        return Err(Error::BadConfig(alloc::format!(
            "fft size {n} too small for hop {hop} and {} taps",
            bank.tap_len()
        )));
    }
    let fft = Fft::new(n);
    let half = bank.center();
    let len = signal.len();
    let mut out = vec![0.0; len];
    let mut buf = vec![Complex64::new(0.0, 0.0); n];

    for (t, seg) in signal.chunks(hop).enumerate() {
        for c in buf.iter_mut() {
            *c = Complex64::new(0.0, 0.0);
        }
        for (c, &x) in buf.iter_mut().zip(seg) {
            c.re = x;
        }
        fft.forward(&mut buf);
        let resp = bank.response(t);
        buf[0] *= resp[0];
        buf[n / 2] *= resp[n / 2];
        for k in 1..n / 2 {
            buf[k] *= resp[k];
            buf[n - k] *= resp[k];
        }
        fft.inverse(&mut buf);

        // relative output index m in [-half, seg.len() + half)
        let base = (t * hop) as isize;
        let lo = -(half as isize);
        let hi = (seg.len() + half) as isize;
        for m in lo..hi {
            let idx = base + m;
            if idx < 0 || idx >= len as isize {
                continue;
            }
            out[idx as usize] += buf[m.rem_euclid(n as isize) as usize].re;
        }
    }
    Ok(out)
}
