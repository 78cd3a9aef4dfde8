//! Mel filterbank and log-mel spectrogram extraction.

use serde::{Deserialize, Serialize};

use crate::audio::AudioSegment;
use crate::dsp::stft::{stft, StftConfig};
use crate::error::{AuvError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MelConfig {
    pub n_mels: usize,
    pub f_min: f64,
    pub f_max: f64,
    /// Floor added before the log compression.
    pub log_eps: f64,
    pub stft: StftConfig,
}

impl Default for MelConfig {
    fn default() -> Self {
        Self {
            n_mels: 80,
            f_min: 0.0,
            f_max: 8000.0,
            log_eps: 1e-5,
            stft: StftConfig::default(),
        }
    }
}

impl MelConfig {
    pub fn validate(&self, sample_rate: u32) -> Result<()> {
        self.stft.validate()?;
        if self.n_mels == 0 {
            return Err(AuvError::Config("n_mels must be > 0".into()));
        }
        if !(self.f_min >= 0.0 && self.f_min < self.f_max) {
            return Err(AuvError::Config(format!(
                "invalid mel range [{}, {}]",
                self.f_min, self.f_max
            )));
        }
        if self.f_max > sample_rate as f64 / 2.0 {
            return Err(AuvError::Config(format!(
                "f_max {} exceeds nyquist {}",
                self.f_max,
                sample_rate as f64 / 2.0
            )));
        }
        Ok(())
    }
}

fn hz_to_mel(f: f64) -> f64 {
    2595.0 * (1.0 + f / 700.0).log10()
}

fn mel_to_hz(m: f64) -> f64 {
    700.0 * (10f64.powf(m / 2595.0) - 1.0)
}

/// Triangular mel filterbank, `n_mels x bins`, row-major.
pub fn filterbank(cfg: &MelConfig, sample_rate: u32) -> Vec<f64> {
    let bins = cfg.stft.bins();
    let mel_lo = hz_to_mel(cfg.f_min);
    let mel_hi = hz_to_mel(cfg.f_max);
    let edges: Vec<f64> = (0..cfg.n_mels + 2)
        .map(|i| mel_to_hz(mel_lo + (mel_hi - mel_lo) * i as f64 / (cfg.n_mels + 1) as f64))
        .collect();
    let mut fb = vec![0.0; cfg.n_mels * bins];
    for m in 0..cfg.n_mels {
        let (lo, center, hi) = (edges[m], edges[m + 1], edges[m + 2]);
        for k in 0..bins {
            let f = k as f64 * sample_rate as f64 / cfg.stft.n_fft as f64;
            let w = if f <= lo || f >= hi {
                0.0
            } else if f <= center {
                (f - lo) / (center - lo)
            } else {
                (hi - f) / (hi - center)
            };
            fb[m * bins + k] = w;
        }
    }
    fb
}

/// Band edges `(lo, hi)` in Hz for each mel filter.
pub fn band_edges(cfg: &MelConfig) -> Vec<(f64, f64)> {
    let mel_lo = hz_to_mel(cfg.f_min);
    let mel_hi = hz_to_mel(cfg.f_max);
    let edges: Vec<f64> = (0..cfg.n_mels + 2)
        .map(|i| mel_to_hz(mel_lo + (mel_hi - mel_lo) * i as f64 / (cfg.n_mels + 1) as f64))
        .collect();
    (0..cfg.n_mels).map(|m| (edges[m], edges[m + 2])).collect()
}

/// Log-compressed mel spectrogram, `frames x n_mels`, row-major. Energies are
/// power-spectrum values aggregated by the filterbank, then `ln(x + eps)`.
pub fn mel_spectrogram(segment: &AudioSegment, cfg: &MelConfig) -> Result<Vec<f64>> {
    cfg.validate(segment.sample_rate)?;
    let spec = stft(segment, &cfg.stft)?;
    let fb = filterbank(cfg, segment.sample_rate);
    let bins = spec.bins;
    let mut out = vec![0.0; spec.frames * cfg.n_mels];
    for t in 0..spec.frames {
        for m in 0..cfg.n_mels {
            let mut e = 0.0;
            for k in 0..bins {
                let i = t * bins + k;
                let p = spec.re[i] * spec.re[i] + spec.im[i] * spec.im[i];
                e += fb[m * bins + k] * p;
            }
            out[t * cfg.n_mels + m] = (e + cfg.log_eps).ln();
        }
    }
    Ok(out)
}
