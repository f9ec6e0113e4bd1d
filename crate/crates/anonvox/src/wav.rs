//! Mono 16-bit PCM WAV reading and writing.

use std::fs::File;
use std::io::{BufReader, Read};
use std::path::Path;

use anonvox_core::AudioBuffer;

/// Sample rate the conversion pipeline works at.
pub const PIPELINE_RATE: u32 = 16_000;

const FULL_SCALE: f64 = 32768.0;

#[derive(Debug, thiserror::Error)]
pub enum WavError {
    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),
    #[error("not a RIFF/WAVE file")]
    NotWav,
    #[error("unsupported encoding: {0}")]
    UnsupportedEncoding(String),
    #[error("sample rate {got} Hz, expected {expected} Hz")]
    WrongRate { expected: u32, got: u32 },
    #[error("malformed WAV: {0}")]
    Malformed(String),
}

impl From<hound::Error> for WavError {
    fn from(e: hound::Error) -> Self {
        match e {
            hound::Error::IoError(io) => WavError::Io(io),
            hound::Error::Unsupported => WavError::UnsupportedEncoding("unsupported WAV variant".into()),
            other => WavError::Malformed(other.to_string()),
        }
    }
}

/// Reads a mono PCM16 file; samples are scaled by `1/32768`.
pub fn read_wav(path: impl AsRef<Path>) -> Result<AudioBuffer, WavError> {
    let mut file = BufReader::new(File::open(path.as_ref())?);
    let mut magic = [0u8; 12];
    if file.read_exact(&mut magic).is_err() || &magic[0..4] != b"RIFF" || &magic[8..12] != b"WAVE" {
        return Err(WavError::NotWav);
    }
    let reader = hound::WavReader::open(path.as_ref())?;
    let spec = reader.spec();
    if spec.channels != 1 {
        return Err(WavError::UnsupportedEncoding(format!("{} channels", spec.channels)));
    }
    if spec.sample_format != hound::SampleFormat::Int || spec.bits_per_sample != 16 {
        return Err(WavError::UnsupportedEncoding(format!(
            "{:?} {}-bit samples",
            spec.sample_format, spec.bits_per_sample
        )));
    }
    let samples =
        reader.into_samples::<i16>().map(|s| s.map(|v| v as f64 / FULL_SCALE)).collect::<Result<Vec<_>, _>>()?;
    AudioBuffer::new(samples, spec.sample_rate).map_err(|e| WavError::Malformed(e.to_string()))
}

/// Reads a WAV and insists on the pipeline's 16 kHz rate.
pub fn read_wav_16k(path: impl AsRef<Path>) -> Result<AudioBuffer, WavError> {
    let buf = read_wav(path)?;
    if buf.sample_rate() != PIPELINE_RATE {
        return Err(WavError::WrongRate { expected: PIPELINE_RATE, got: buf.sample_rate() });
    }
    Ok(buf)
}

/// Quantises one amplitude: clamp to `[-1, 1 - 2^-15]`, scale, round.
pub fn quantize(x: f64) -> i16 {
    let clamped = x.clamp(-1.0, 1.0 - 1.0 / FULL_SCALE);
    (clamped * FULL_SCALE).round() as i16
}

/// Writes a mono PCM16 file.
pub fn write_wav(path: impl AsRef<Path>, buf: &AudioBuffer) -> Result<(), WavError> {
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: buf.sample_rate(),
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let mut writer = hound::WavWriter::create(path, spec)?;
    {
        let mut w = writer.get_i16_writer(buf.len() as u32);
        for &s in buf.samples() {
            w.write_sample(quantize(s));
        }
        w.flush()?;
    }
    writer.finalize()?;
    Ok(())
}
