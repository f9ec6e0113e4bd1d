#![no_std]
extern crate alloc;

pub mod audio;
pub mod error;
pub mod fft;
pub mod fusion;
pub mod losses;
pub mod mapper;
pub mod metrics;
pub mod sequence;
pub mod synth;
pub mod weights;

pub use audio::AudioBuffer;
pub use error::{Error, Result};
pub use sequence::{FeatureSequence, PhonePool, SynthParamsSeq};
pub use weights::{Tensor, WeightBundle};
