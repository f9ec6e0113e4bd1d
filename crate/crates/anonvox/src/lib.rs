//! File formats, WAV I/O and the command-line pipeline around [`anonvox_core`].

pub mod cli;
pub mod formats;
pub mod wav;

pub use anonvox_core as core;
