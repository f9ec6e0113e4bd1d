//! Little-endian binary containers.
//!
//! Every file starts with a 4-byte magic and a `u32` version (currently 1).
//! All counts are `u32`; payloads are `f32`, row-major.
//!
//! | magic  | header after version                  | payload                        |
//! |--------|---------------------------------------|--------------------------------|
//! | `DQF1` | `T, D, hop`                           | `T*D` features                 |
//! | `DQP1` | `P, D, id_len, id bytes (UTF-8)`      | `P*D` pool vectors             |
//! | `DQS1` | `T, F_h, F_s, hop`                    | `T` F0, `T*F_h` psi_h, `T*F_s` psi_s |
//! | `DQW1` | `count`, then per tensor: `name_len, name, rank, dims[rank]` | `prod(dims)` values |
//!
//! Readers reject a wrong magic, an unknown version, short files and trailing bytes.

use std::path::Path;

use anonvox_core::{FeatureSequence, PhonePool, SynthParamsSeq, Tensor, WeightBundle};

pub const VERSION: u32 = 1;
pub const FEATURE_MAGIC: [u8; 4] = *b"DQF1";
pub const POOL_MAGIC: [u8; 4] = *b"DQP1";
pub const PARAMS_MAGIC: [u8; 4] = *b"DQS1";
pub const WEIGHTS_MAGIC: [u8; 4] = *b"DQW1";

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("bad magic: expected {expected:?}, found {found:?}")]
    BadMagic { expected: String, found: String },
    #[error("unsupported version {0}")]
    VersionMismatch(u32),
    #[error("file is truncated")]
    TruncatedFile,
    #[error("{0} unexpected trailing bytes")]
    TrailingData(usize),
    #[error("invalid content: {0}")]
    Invalid(String),
}

impl From<anonvox_core::Error> for FormatError {
    fn from(e: anonvox_core::Error) -> Self {
        FormatError::Invalid(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, FormatError>;

struct Writer(Vec<u8>);

impl Writer {
    fn new(magic: [u8; 4]) -> Self {
        let mut w = Writer(magic.to_vec());
        w.u32(VERSION);
        w
    }

    fn u32(&mut self, v: u32) {
        self.0.extend_from_slice(&v.to_le_bytes());
    }

    fn count(&mut self, v: usize, what: &str) -> Result<()> {
        let v = u32::try_from(v).map_err(|_| FormatError::Invalid(format!("{what} does not fit in u32")))?;
        self.u32(v);
        Ok(())
    }

    fn f64s(&mut self, xs: &[f64], what: &str) -> Result<()> {
        for &x in xs {
            let f = x as f32;
            if !f.is_finite() {
                return Err(FormatError::Invalid(format!("{what} contains a value not representable as finite f32")));
            }
            self.0.extend_from_slice(&f.to_le_bytes());
        }
        Ok(())
    }

    fn f32s(&mut self, xs: &[f32]) {
        for &x in xs {
            self.0.extend_from_slice(&x.to_le_bytes());
        }
    }
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn open(buf: &'a [u8], magic: [u8; 4]) -> Result<Self> {
        if buf.len() < 4 {
            return Err(FormatError::TruncatedFile);
        }
        if buf[..4] != magic {
            return Err(FormatError::BadMagic {
                expected: String::from_utf8_lossy(&magic).into_owned(),
                found: String::from_utf8_lossy(&buf[..4]).into_owned(),
            });
        }
        let mut r = Reader { buf, pos: 4 };
        let v = r.u32()?;
        if v != VERSION {
            return Err(FormatError::VersionMismatch(v));
        }
        Ok(r)
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        let end = self.pos.checked_add(n).ok_or(FormatError::TruncatedFile)?;
        let s = self.buf.get(self.pos..end).ok_or(FormatError::TruncatedFile)?;
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn usize(&mut self) -> Result<usize> {
        Ok(self.u32()? as usize)
    }

    fn f32s(&mut self, n: usize) -> Result<Vec<f32>> {
        let bytes = self.take(n.checked_mul(4).ok_or(FormatError::TruncatedFile)?)?;
        Ok(bytes.chunks_exact(4).map(|c| f32::from_le_bytes(c.try_into().unwrap())).collect())
    }

    fn f64s(&mut self, n: usize) -> Result<Vec<f64>> {
        Ok(self.f32s(n)?.into_iter().map(f64::from).collect())
    }

    fn finish(self) -> Result<()> {
        match self.buf.len() - self.pos {
            0 => Ok(()),
            extra => Err(FormatError::TrailingData(extra)),
        }
    }
}

fn product(dims: &[usize]) -> Result<usize> {
    dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d)).ok_or(FormatError::TruncatedFile)
}

pub fn encode_features(seq: &FeatureSequence) -> Result<Vec<u8>> {
    let mut w = Writer::new(FEATURE_MAGIC);
    w.count(seq.len(), "frame count")?;
    w.count(seq.dim(), "feature dimension")?;
    w.u32(seq.hop_samples());
    w.f64s(seq.as_slice(), "features")?;
    Ok(w.0)
}

pub fn decode_features(buf: &[u8]) -> Result<FeatureSequence> {
    let mut r = Reader::open(buf, FEATURE_MAGIC)?;
    let (t, d, hop) = (r.usize()?, r.usize()?, r.u32()?);
    let data = r.f64s(product(&[t, d])?)?;
    r.finish()?;
    Ok(FeatureSequence::new(data, d, hop)?)
}

pub fn encode_pool(pool: &PhonePool) -> Result<Vec<u8>> {
    let mut w = Writer::new(POOL_MAGIC);
    w.count(pool.len(), "pool size")?;
    w.count(pool.dim(), "pool dimension")?;
    let id = pool.source_id().as_bytes();
    w.count(id.len(), "source id length")?;
    w.0.extend_from_slice(id);
    w.f64s(pool.as_slice(), "pool vectors")?;
    Ok(w.0)
}

pub fn decode_pool(buf: &[u8]) -> Result<PhonePool> {
    let mut r = Reader::open(buf, POOL_MAGIC)?;
    let (p, d, id_len) = (r.usize()?, r.usize()?, r.usize()?);
    let id = std::str::from_utf8(r.take(id_len)?)
        .map_err(|_| FormatError::Invalid("source id is not UTF-8".into()))?
        .to_owned();
    let data = r.f64s(product(&[p, d])?)?;
    r.finish()?;
    Ok(PhonePool::new(data, d, id)?)
}

pub fn encode_params(params: &SynthParamsSeq) -> Result<Vec<u8>> {
    let mut w = Writer::new(PARAMS_MAGIC);
    w.count(params.len(), "frame count")?;
    w.count(params.harmonic_len(), "harmonic filter length")?;
    w.count(params.noise_len(), "noise filter length")?;
    w.u32(params.hop_samples());
    w.f64s(params.f0_hz(), "F0")?;
    w.f64s(params.psi_h(), "harmonic filter parameters")?;
    w.f64s(params.psi_s(), "noise filter parameters")?;
    Ok(w.0)
}

pub fn decode_params(buf: &[u8]) -> Result<SynthParamsSeq> {
    let mut r = Reader::open(buf, PARAMS_MAGIC)?;
    let (t, fh, fs, hop) = (r.usize()?, r.usize()?, r.usize()?, r.u32()?);
    let f0 = r.f64s(t)?;
    let psi_h = r.f64s(product(&[t, fh])?)?;
    let psi_s = r.f64s(product(&[t, fs])?)?;
    r.finish()?;
    Ok(SynthParamsSeq::new(f0, psi_h, fh, psi_s, fs, hop)?)
}

pub fn encode_weights(bundle: &WeightBundle) -> Result<Vec<u8>> {
    bundle.validate()?;
    let mut w = Writer::new(WEIGHTS_MAGIC);
    w.count(bundle.tensors.len(), "tensor count")?;
    for t in &bundle.tensors {
        w.count(t.name.len(), "tensor name length")?;
        w.0.extend_from_slice(t.name.as_bytes());
        w.count(t.shape.len(), "tensor rank")?;
        for &d in &t.shape {
            w.count(d, "tensor dimension")?;
        }
        w.f32s(&t.data);
    }
    Ok(w.0)
}

pub fn decode_weights(buf: &[u8]) -> Result<WeightBundle> {
    let mut r = Reader::open(buf, WEIGHTS_MAGIC)?;
    let count = r.usize()?;
    let mut tensors = Vec::new();
    for _ in 0..count {
        let name_len = r.usize()?;
        let name = std::str::from_utf8(r.take(name_len)?)
            .map_err(|_| FormatError::Invalid("tensor name is not UTF-8".into()))?
            .to_owned();
        let rank = r.usize()?;
        let shape = (0..rank).map(|_| r.usize()).collect::<Result<Vec<_>>>()?;
        let data = r.f32s(product(&shape)?)?;
        tensors.push(Tensor::new(name, shape, data));
    }
    r.finish()?;
    let bundle = WeightBundle::new(tensors);
    bundle.validate()?;
    Ok(bundle)
}

/// The four-byte magic at the start of `buf`, if present.
pub fn sniff(buf: &[u8]) -> Option<[u8; 4]> {
    buf.get(..4).map(|m| m.try_into().unwrap())
}

macro_rules! file_io {
    ($read:ident, $write:ident, $decode:ident, $encode:ident, $ty:ty) => {
        pub fn $read(path: impl AsRef<Path>) -> Result<$ty> {
            $decode(&std::fs::read(path)?)
        }

        pub fn $write(path: impl AsRef<Path>, value: &$ty) -> Result<()> {
            std::fs::write(path, $encode(value)?)?;
            Ok(())
        }
    };
}

file_io!(read_features, write_features, decode_features, encode_features, FeatureSequence);
file_io!(read_pool, write_pool, decode_pool, encode_pool, PhonePool);
file_io!(read_params, write_params, decode_params, encode_params, SynthParamsSeq);
file_io!(read_weights, write_weights, decode_weights, encode_weights, WeightBundle);
