//! Frame-major containers shared by the mapper, the network and the
//! synthesiser.

use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Number of harmonic-branch filter parameters per frame.
pub const HARMONIC_FILTER_LEN: usize = 176;
/// Number of noise-branch filter parameters per frame.
pub const NOISE_FILTER_LEN: usize = 80;
/// Lowest and highest admissible voiced F0 in Hz.
pub const F0_MIN: f64 = 40.0;
pub const F0_MAX: f64 = 2000.0;

fn check_finite(data: &[f64], what: &'static str) -> Result<()> {
    if data.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// A `T x D` matrix of per-frame feature vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureSequence {
    data: Vec<f64>,
    dim: usize,
    hop_samples: u32,
}

impl FeatureSequence {
    pub fn new(data: Vec<f64>, dim: usize, hop_samples: u32) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid("feature dimension must be at least 1".into()));
        }
        if hop_samples == 0 {
            return Err(Error::Invalid("hop must be at least 1 sample".into()));
        }
        if !data.len().is_multiple_of(dim) {
            return Err(Error::SizeMismatch(alloc::format!("{} values is not a multiple of dim {dim}", data.len())));
        }
        check_finite(&data, "feature sequence")?;
        Ok(Self { data, dim, hop_samples })
    }

    pub fn empty(dim: usize, hop_samples: u32) -> Result<Self> {
        Self::new(Vec::new(), dim, hop_samples)
    }

    pub fn from_frames<I, F>(frames: I, dim: usize, hop_samples: u32) -> Result<Self>
    where
        I: IntoIterator<Item = F>,
        F: AsRef<[f64]>,
    {
        let mut data = Vec::new();
        for f in frames {
            let f = f.as_ref();
            if f.len() != dim {
                return Err(Error::DimMismatch { expected: dim, got: f.len() });
            }
            data.extend_from_slice(f);
        }
        Self::new(data, dim, hop_samples)
    }

    /// Number of frames `T`.
    pub fn len(&self) -> usize {
        self.data.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn hop_samples(&self) -> u32 {
        self.hop_samples
    }

    pub fn frame(&self, t: usize) -> &[f64] {
        &self.data[t * self.dim..(t + 1) * self.dim]
    }

    pub fn frames(&self) -> core::slice::ChunksExact<'_, f64> {
        self.data.chunks_exact(self.dim)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }
}

/// Target-speaker phone vectors queried by the mapper. No vector is all-zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PhonePool {
    vectors: Vec<f64>,
    dim: usize,
    source_id: String,
}

impl PhonePool {
    pub fn new(vectors: Vec<f64>, dim: usize, source_id: impl Into<String>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::Invalid("pool dimension must be at least 1".into()));
        }
        if vectors.is_empty() {
            return Err(Error::EmptyPool);
        }
        if !vectors.len().is_multiple_of(dim) {
            return Err(Error::SizeMismatch(alloc::format!("{} values is not a multiple of dim {dim}", vectors.len())));
        }
        check_finite(&vectors, "phone pool")?;
        if vectors.chunks_exact(dim).any(|v| v.iter().all(|&x| x == 0.0)) {
            return Err(Error::ZeroVector);
        }
        Ok(Self { vectors, dim, source_id: source_id.into() })
    }

    pub fn len(&self) -> usize {
        self.vectors.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn source_id(&self) -> &str {
        &self.source_id
    }

    pub fn vector(&self, i: usize) -> &[f64] {
        &self.vectors[i * self.dim..(i + 1) * self.dim]
    }

    pub fn vectors(&self) -> core::slice::ChunksExact<'_, f64> {
        self.vectors.chunks_exact(self.dim)
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.vectors
    }
}

/// Per-frame synthesiser controls: F0 plus harmonic and noise filter rows.
#[derive(Debug, Clone, PartialEq)]
pub struct SynthParamsSeq {
    f0_hz: Vec<f64>,
    psi_h: Vec<f64>,
    psi_s: Vec<f64>,
    harmonic_len: usize,
    noise_len: usize,
    hop_samples: u32,
}

impl SynthParamsSeq {
    pub fn new(
        f0_hz: Vec<f64>,
        psi_h: Vec<f64>,
        harmonic_len: usize,
        psi_s: Vec<f64>,
        noise_len: usize,
        hop_samples: u32,
    ) -> Result<Self> {
        if harmonic_len == 0 || noise_len == 0 {
            return Err(Error::Invalid("filter lengths must be positive".into()));
        }
        if hop_samples == 0 {
            return Err(Error::Invalid("hop must be at least 1 sample".into()));
        }
        let t = f0_hz.len();
        if psi_h.len() != t * harmonic_len || psi_s.len() != t * noise_len {
            return Err(Error::SizeMismatch(alloc::format!(
                "{t} frames but filter data of {} and {} values",
                psi_h.len(),
                psi_s.len()
            )));
        }
        for &f in &f0_hz {
            check_f0(f)?;
        }
        check_finite(&psi_h, "harmonic filter parameters")?;
        check_finite(&psi_s, "noise filter parameters")?;
        Ok(Self { f0_hz, psi_h, psi_s, harmonic_len, noise_len, hop_samples })
    }

    pub fn len(&self) -> usize {
        self.f0_hz.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f0_hz.is_empty()
    }

    pub fn f0_hz(&self) -> &[f64] {
        &self.f0_hz
    }

    /// Row-major `T x F_h` harmonic filter parameters.
    pub fn psi_h(&self) -> &[f64] {
        &self.psi_h
    }

    /// Row-major `T x F_s` noise filter parameters.
    pub fn psi_s(&self) -> &[f64] {
        &self.psi_s
    }

    pub fn harmonic_len(&self) -> usize {
        self.harmonic_len
    }

    pub fn noise_len(&self) -> usize {
        self.noise_len
    }

    pub fn hop_samples(&self) -> u32 {
        self.hop_samples
    }
}

/// Accepts 0 (unvoiced) or a value in `[F0_MIN, F0_MAX]`.
pub fn check_f0(f: f64) -> Result<()> {
    if f == 0.0 || (F0_MIN..=F0_MAX).contains(&f) {
        Ok(())
    } else {
        Err(Error::BadF0(f))
    }
}
