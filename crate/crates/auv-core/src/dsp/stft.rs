//! STFT analysis and least-squares iSTFT synthesis.
//!
//! Framing contract: the signal is right-padded with zeros to a multiple of
//! the hop, so a length-L input always yields `T = ceil(L / hop)` frames.
//! With centered framing, frame `t` is the window around original sample
//! `t * hop`. Synthesis overlap-adds windowed inverse frames and divides by
//! the accumulated squared window, which inverts the analysis exactly
//! wherever the window coverage is positive.

use serde::{Deserialize, Serialize};

use crate::audio::AudioSegment;
use crate::dsp::fft;
use crate::error::{AuvError, Result};
use crate::util::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowKind {
    Hann,
    Rectangular,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StftConfig {
    pub n_fft: usize,
    pub win_length: usize,
    pub hop_length: usize,
    pub window: WindowKind,
    pub center: bool,
}

impl Default for StftConfig {
    fn default() -> Self {
        // 1024-point Hann at hop 320: 50 frames per second at 16 kHz.
        Self {
            n_fft: 1024,
            win_length: 1024,
            hop_length: 320,
            window: WindowKind::Hann,
            center: true,
        }
    }
}

impl StftConfig {
    pub fn validate(&self) -> Result<()> {
        if self.hop_length == 0 {
            return Err(AuvError::Config("hop_length must be > 0".into()));
        }
        if self.win_length > self.n_fft {
            return Err(AuvError::Config(format!(
                "win_length {} exceeds n_fft {}",
                self.win_length, self.n_fft
            )));
        }
        if self.hop_length > self.win_length {
            return Err(AuvError::Config(format!(
                "hop_length {} exceeds win_length {}",
                self.hop_length, self.win_length
            )));
        }
        Ok(())
    }

    pub fn bins(&self) -> usize {
        self.n_fft / 2 + 1
    }

    /// Frames produced for a signal of `len` samples.
    pub fn num_frames(&self, len: usize) -> usize {
        len.div_ceil(self.hop_length)
    }
}

/// Complex spectrogram, `frames x bins`, row-major, split into real and
/// imaginary planes.
#[derive(Debug, Clone)]
pub struct ComplexSpectrogram {
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    pub frames: usize,
    pub bins: usize,
    pub sample_rate: u32,
    /// Length of the signal this spectrogram was computed from, used to trim
    /// the synthesis output.
    pub original_len: usize,
    pub config: StftConfig,
}

impl ComplexSpectrogram {
    pub fn magnitude(&self, t: usize, k: usize) -> f64 {
        let i = t * self.bins + k;
        (self.re[i] * self.re[i] + self.im[i] * self.im[i]).sqrt()
    }
}

/// Precomputed framing state shared by the forward, inverse, and adjoint
/// paths (the autodiff spectral ops reuse it).
pub(crate) struct StftKernel {
    pub n_fft: usize,
    pub hop: usize,
    pub window: Vec<f64>,
    pub center: bool,
}

impl StftKernel {
    pub fn new(cfg: &StftConfig) -> Result<Self> {
        cfg.validate()?;
        let mut window = vec![0.0; cfg.n_fft];
        let offset = (cfg.n_fft - cfg.win_length) / 2;
        for i in 0..cfg.win_length {
            window[offset + i] = match cfg.window {
                // Periodic Hann.
                WindowKind::Hann => {
                    let x = 2.0 * std::f64::consts::PI * i as f64 / cfg.win_length as f64;
                    0.5 * (1.0 - x.cos())
                }
                WindowKind::Rectangular => 1.0,
            };
        }
        Ok(Self {
            n_fft: cfg.n_fft,
            hop: cfg.hop_length,
            window,
            center: cfg.center,
        })
    }

    pub fn num_frames(&self, len: usize) -> usize {
        len.div_ceil(self.hop)
    }

    fn lead_pad(&self) -> usize {
        if self.center {
            self.n_fft / 2
        } else {
            0
        }
    }

    /// Signal padded for analysis: centering pad, then right pad to a hop
    /// multiple plus one window of tail room.
    fn padded(&self, x: &[f64]) -> Vec<f64> {
        let frames = self.num_frames(x.len());
        let padded_len = self.lead_pad() + (frames.saturating_sub(1)) * self.hop + self.n_fft;
        let mut p = vec![0.0; padded_len];
        p[self.lead_pad()..self.lead_pad() + x.len()].copy_from_slice(x);
        p
    }

    /// Forward transform. Returns `(re, im)` planes of shape `frames x bins`.
    pub fn forward(&self, x: &[f64]) -> (Vec<f64>, Vec<f64>, usize) {
        let frames = self.num_frames(x.len());
        let bins = self.n_fft / 2 + 1;
        let padded = self.padded(x);
        let rows = par::map_indexed(frames, frames * self.n_fft * 16, |t| {
            let start = t * self.hop;
            let mut frame = vec![0.0; self.n_fft];
            for (i, f) in frame.iter_mut().enumerate() {
                *f = padded[start + i] * self.window[i];
            }
            let mut re = vec![0.0; bins];
            let mut im = vec![0.0; bins];
            fft::rfft(&frame, &mut re, &mut im);
            (re, im)
        });
        let mut re = Vec::with_capacity(frames * bins);
        let mut im = Vec::with_capacity(frames * bins);
        for (r, i) in rows {
            re.extend_from_slice(&r);
            im.extend_from_slice(&i);
        }
        (re, im, frames)
    }

    /// Adjoint of [`forward`]: maps spectrum cotangents back to a signal
    /// cotangent of length `len`.
    pub fn adjoint_forward(&self, g_re: &[f64], g_im: &[f64], frames: usize, len: usize) -> Vec<f64> {
        let bins = self.n_fft / 2 + 1;
        let grads = par::map_indexed(frames, frames * self.n_fft * 16, |t| {
            let mut frame = vec![0.0; self.n_fft];
            fft::rfft_adjoint(
                &g_re[t * bins..(t + 1) * bins],
                &g_im[t * bins..(t + 1) * bins],
                &mut frame,
            );
            for (i, f) in frame.iter_mut().enumerate() {
                *f *= self.window[i];
            }
            frame
        });
        let padded_len = self.lead_pad() + (frames.saturating_sub(1)) * self.hop + self.n_fft;
        let mut acc = vec![0.0; padded_len];
        for (t, frame) in grads.iter().enumerate() {
            let start = t * self.hop;
            for (i, g) in frame.iter().enumerate() {
                acc[start + i] += g;
            }
        }
        acc[self.lead_pad()..self.lead_pad() + len].to_vec()
    }

    /// Squared-window overlap sum over the padded domain.
    fn window_norm(&self, frames: usize) -> Vec<f64> {
        let padded_len = self.lead_pad() + (frames.saturating_sub(1)) * self.hop + self.n_fft;
        let mut wsum = vec![0.0; padded_len.max(self.n_fft)];
        for t in 0..frames {
            let start = t * self.hop;
            for (i, w) in self.window.iter().enumerate() {
                wsum[start + i] += w * w;
            }
        }
        for w in wsum.iter_mut() {
            *w = w.max(1e-12);
        }
        wsum
    }

    /// Least-squares inverse. Returns `frames * hop` samples corresponding to
    /// the unpadded signal region.
    pub fn inverse(&self, re: &[f64], im: &[f64], frames: usize) -> Vec<f64> {
        let bins = self.n_fft / 2 + 1;
        let rows = par::map_indexed(frames, frames * self.n_fft * 16, |t| {
            let mut frame = vec![0.0; self.n_fft];
            fft::irfft(&re[t * bins..(t + 1) * bins], &im[t * bins..(t + 1) * bins], &mut frame);
            for (i, f) in frame.iter_mut().enumerate() {
                *f *= self.window[i];
            }
            frame
        });
        let wsum = self.window_norm(frames);
        let mut acc = vec![0.0; wsum.len()];
        for (t, frame) in rows.iter().enumerate() {
            let start = t * self.hop;
            for (i, f) in frame.iter().enumerate() {
                acc[start + i] += f;
            }
        }
        let lead = self.lead_pad();
        (0..frames * self.hop)
            .map(|i| acc[lead + i] / wsum[lead + i])
            .collect()
    }

    /// Adjoint of [`inverse`]: maps a signal cotangent (length
    /// `frames * hop`) back to spectrum cotangents.
    pub fn adjoint_inverse(&self, g: &[f64], frames: usize) -> (Vec<f64>, Vec<f64>) {
        let bins = self.n_fft / 2 + 1;
        let wsum = self.window_norm(frames);
        let lead = self.lead_pad();
        let mut gp = vec![0.0; wsum.len()];
        for (i, &v) in g.iter().enumerate() {
            gp[lead + i] = v / wsum[lead + i];
        }
        let rows = par::map_indexed(frames, frames * self.n_fft * 16, |t| {
            let start = t * self.hop;
            let mut frame = vec![0.0; self.n_fft];
            for (i, f) in frame.iter_mut().enumerate() {
                *f = gp[start + i] * self.window[i];
            }
            let mut re = vec![0.0; bins];
            let mut im = vec![0.0; bins];
            fft::irfft_adjoint(&frame, &mut re, &mut im);
            (re, im)
        });
        let mut g_re = Vec::with_capacity(frames * bins);
        let mut g_im = Vec::with_capacity(frames * bins);
        for (r, i) in rows {
            g_re.extend_from_slice(&r);
            g_im.extend_from_slice(&i);
        }
        (g_re, g_im)
    }
}

/// Short-time Fourier transform of a segment.
pub fn stft(segment: &AudioSegment, cfg: &StftConfig) -> Result<ComplexSpectrogram> {
    if segment.is_empty() {
        return Err(AuvError::InvalidAudio("empty segment".into()));
    }
    let kernel = StftKernel::new(cfg)?;
    let (re, im, frames) = kernel.forward(&segment.samples);
    Ok(ComplexSpectrogram {
        re,
        im,
        frames,
        bins: cfg.bins(),
        sample_rate: segment.sample_rate,
        original_len: segment.len(),
        config: cfg.clone(),
    })
}

/// Inverse STFT. Reconstructs `frames * hop` samples and trims to the
/// spectrogram's recorded original length.
pub fn istft(spec: &ComplexSpectrogram, cfg: &StftConfig) -> Result<AudioSegment> {
    if spec.config != *cfg {
        return Err(AuvError::Config(
            "spectrogram was produced with a different stft config".into(),
        ));
    }
    let kernel = StftKernel::new(cfg)?;
    let mut samples = kernel.inverse(&spec.re, &spec.im, spec.frames);
    samples.truncate(spec.original_len);
    AudioSegment::new(samples, spec.sample_rate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn noise(len: usize, seed: u64) -> AudioSegment {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        AudioSegment::new((0..len).map(|_| rng.gen_range(-1.0..1.0)).collect(), 16000).unwrap()
    }

    fn rel_l2(a: &[f64], b: &[f64]) -> f64 {
        let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
        let den: f64 = a.iter().map(|x| x * x).sum();
        (num / den.max(1e-300)).sqrt()
    }

    #[test]
    fn one_second_at_hop_320_gives_50_frames() {
        let seg = noise(16000, 1);
        let spec = stft(&seg, &StftConfig::default()).unwrap();
        assert_eq!(spec.frames, 50);
        assert_eq!(spec.bins, 513);
    }

    #[test]
    fn zero_input_gives_zero_spectrogram() {
        let seg = AudioSegment::new(vec![0.0; 4000], 16000).unwrap();
        let spec = stft(&seg, &StftConfig::default()).unwrap();
        assert!(spec.re.iter().chain(spec.im.iter()).all(|&v| v == 0.0));
    }

    #[test]
    fn sine_peak_lands_in_expected_bin() {
        // bin = f * n_fft / sr = 1000 * 1024 / 16000 = 64
        let sr = 16000u32;
        let samples: Vec<f64> = (0..16000)
            .map(|i| (2.0 * std::f64::consts::PI * 1000.0 * i as f64 / sr as f64).sin())
            .collect();
        let seg = AudioSegment::new(samples, sr).unwrap();
        let spec = stft(&seg, &StftConfig::default()).unwrap();
        let t = spec.frames / 2;
        let peak = (0..spec.bins)
            .max_by(|&a, &b| {
                spec.magnitude(t, a)
                    .partial_cmp(&spec.magnitude(t, b))
                    .unwrap()
            })
            .unwrap();
        assert_eq!(peak, 64);

        // Cross-check that frame magnitudes agree with a naive windowed DFT.
        let kernel = StftKernel::new(&StftConfig::default()).unwrap();
        let padded = kernel.padded(&seg.samples);
        let start = t * kernel.hop;
        let n = kernel.n_fft;
        let mut er = 0.0;
        let mut ei = 0.0;
        for i in 0..n {
            let v = padded[start + i] * kernel.window[i];
            let th = -2.0 * std::f64::consts::PI * (64 * i) as f64 / n as f64;
            er += v * th.cos();
            ei += v * th.sin();
        }
        let naive = (er * er + ei * ei).sqrt();
        assert!((spec.magnitude(t, 64) - naive).abs() < 1e-6 * naive.max(1.0));
    }

    #[test]
    fn round_trip_is_near_perfect() {
        let seg = noise(16000, 2);
        let cfg = StftConfig::default();
        let spec = stft(&seg, &cfg).unwrap();
        let rec = istft(&spec, &cfg).unwrap();
        assert_eq!(rec.len(), seg.len());
        assert!(rel_l2(&seg.samples, &rec.samples) < 1e-5);
    }

    #[test]
    fn round_trip_trims_to_original_length() {
        // 16100 samples is not a hop multiple; output must still match.
        let seg = noise(16100, 3);
        let cfg = StftConfig::default();
        let rec = istft(&stft(&seg, &cfg).unwrap(), &cfg).unwrap();
        assert_eq!(rec.len(), 16100);
        assert!(rel_l2(&seg.samples, &rec.samples) < 1e-5);
    }

    #[test]
    fn zero_spectrogram_synthesizes_silence() {
        let seg = noise(3200, 4);
        let cfg = StftConfig::default();
        let mut spec = stft(&seg, &cfg).unwrap();
        spec.re.iter_mut().for_each(|v| *v = 0.0);
        spec.im.iter_mut().for_each(|v| *v = 0.0);
        let rec = istft(&spec, &cfg).unwrap();
        assert!(rec.samples.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn config_mismatch_is_rejected() {
        let seg = noise(3200, 5);
        let cfg = StftConfig::default();
        let spec = stft(&seg, &cfg).unwrap();
        let other = StftConfig {
            hop_length: 160,
            ..cfg
        };
        assert!(istft(&spec, &other).is_err());
    }

    #[test]
    fn stft_is_linear_in_the_input() {
        let seg = noise(5000, 6);
        let scaled = AudioSegment::new(seg.samples.iter().map(|v| v * 3.5).collect(), 16000).unwrap();
        let cfg = StftConfig::default();
        let a = stft(&seg, &cfg).unwrap();
        let b = stft(&scaled, &cfg).unwrap();
        for (x, y) in a.re.iter().zip(b.re.iter()) {
            assert!((x * 3.5 - y).abs() <= 1e-6 * y.abs().max(1e-9));
        }
        for (x, y) in a.im.iter().zip(b.im.iter()) {
            assert!((x * 3.5 - y).abs() <= 1e-6 * y.abs().max(1e-9));
        }
    }

    #[test]
    fn frame_count_law_holds() {
        let cfg = StftConfig::default();
        for len in [1usize, 319, 320, 321, 15999, 16000, 16001, 50000] {
            let t = cfg.num_frames(len);
            assert!(t * cfg.hop_length >= len);
            assert!(len > (t - 1) * cfg.hop_length);
        }
    }

    #[test]
    fn invalid_configs_are_rejected() {
        let mut cfg = StftConfig::default();
        cfg.hop_length = 0;
        assert!(cfg.validate().is_err());
        let mut cfg = StftConfig::default();
        cfg.win_length = 2048;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn kernel_adjoints_match_inner_products() {
        // <A x, g> == <x, A^T g> for the framed transforms as wholes.
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let cfg = StftConfig {
            n_fft: 64,
            win_length: 64,
            hop_length: 16,
            window: WindowKind::Hann,
            center: true,
        };
        let kernel = StftKernel::new(&cfg).unwrap();
        let len = 100;
        let x: Vec<f64> = (0..len).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (re, im, frames) = kernel.forward(&x);
        let g_re: Vec<f64> = (0..re.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let g_im: Vec<f64> = (0..im.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let lhs: f64 = re
            .iter()
            .zip(&g_re)
            .chain(im.iter().zip(&g_im))
            .map(|(a, b)| a * b)
            .sum();
        let adj = kernel.adjoint_forward(&g_re, &g_im, frames, len);
        let rhs: f64 = x.iter().zip(&adj).map(|(a, b)| a * b).sum();
        assert!((lhs - rhs).abs() < 1e-9 * lhs.abs().max(1.0));

        let out = kernel.inverse(&re, &im, frames);
        let gy: Vec<f64> = (0..out.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let lhs: f64 = out.iter().zip(&gy).map(|(a, b)| a * b).sum();
        let (a_re, a_im) = kernel.adjoint_inverse(&gy, frames);
        // Zero out the slots inverse() never reads (imag DC/Nyquist).
        let bins = cfg.bins();
        let mut dot = 0.0;
        for t in 0..frames {
            for k in 0..bins {
                let i = t * bins + k;
                dot += re[i] * a_re[i];
                if k != 0 && k != bins - 1 {
                    dot += im[i] * a_im[i];
                }
            }
        }
        assert!((lhs - dot).abs() < 1e-9 * lhs.abs().max(1.0));
    }
}
