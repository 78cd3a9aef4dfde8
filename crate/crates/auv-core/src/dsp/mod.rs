//! Signal-processing frontend: WAV I/O, STFT/iSTFT analysis-synthesis, and
//! mel spectrograms.

pub mod fft;
pub mod mel;
pub mod stft;
pub mod wav;

pub use mel::{filterbank, mel_spectrogram, MelConfig};
pub use stft::{istft, stft, ComplexSpectrogram, StftConfig, WindowKind};
pub use wav::{load_wav, write_wav};
