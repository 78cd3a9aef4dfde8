//! Unified single-codebook neural audio codec.
//!
//! The crate implements an encoder-quantizer-decoder codec over STFT
//! features with a conformer backbone, a nested domain-partitioned
//! codebook, multi-domain teacher distillation, VQ-GAN training losses, a
//! training pipeline, and a bit-exact token bitstream, along with the
//! probes and metrics used to analyze codebook usage.

pub mod audio;
pub mod error;
pub mod util;

pub mod dsp;

pub use audio::{AudioSegment, DomainLabel};
pub use error::{AuvError, Result};
