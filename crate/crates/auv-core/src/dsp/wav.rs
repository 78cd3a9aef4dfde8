//! WAV file reading and writing (RIFF PCM16 / float32 in, PCM16 out).

use std::path::Path;

use crate::audio::AudioSegment;
use crate::error::{AuvError, Result};

fn wav_err(path: &Path, message: impl Into<String>) -> AuvError {
    AuvError::Wav {
        path: path.to_path_buf(),
        message: message.into(),
    }
}

/// Loads a mono WAV file. Multi-channel input is an error unless `downmix`
/// is set, in which case channels are averaged. PCM16 samples are scaled by
/// 1/32768; float32 samples are taken as-is. The declared sample rate is
/// preserved, never resampled.
pub fn load_wav(path: impl AsRef<Path>, downmix: bool) -> Result<AudioSegment> {
    let path = path.as_ref();
    let mut reader =
        hound::WavReader::open(path).map_err(|e| wav_err(path, format!("unreadable: {e}")))?;
    let spec = reader.spec();
    let channels = spec.channels as usize;
    if channels == 0 {
        return Err(wav_err(path, "zero channels"));
    }
    if channels > 1 && !downmix {
        return Err(wav_err(
            path,
            format!("{channels} channels; pass --downmix to average them"),
        ));
    }

    let interleaved: Vec<f64> = match (spec.sample_format, spec.bits_per_sample) {
        (hound::SampleFormat::Int, 16) => reader
            .samples::<i16>()
            .map(|s| s.map(|v| v as f64 / 32768.0))
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| wav_err(path, format!("bad sample data: {e}")))?,
        (hound::SampleFormat::Float, 32) => reader
            .samples::<f32>()
            .map(|s| s.map(|v| v as f64))
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| wav_err(path, format!("bad sample data: {e}")))?,
        (fmt, bits) => {
            return Err(wav_err(
                path,
                format!("unsupported encoding {fmt:?}/{bits}-bit (want PCM16 or float32)"),
            ))
        }
    };

    if interleaved.is_empty() {
        return Err(wav_err(path, "zero-length audio"));
    }

    let samples = if channels == 1 {
        interleaved
    } else {
        interleaved
            .chunks(channels)
            .map(|frame| frame.iter().sum::<f64>() / channels as f64)
            .collect()
    };

    AudioSegment::new(samples, spec.sample_rate)
}

/// Writes a segment as mono PCM16. Samples outside `[-1, 1]` are clipped;
/// the number of clipped samples is returned so callers can warn.
pub fn write_wav(segment: &AudioSegment, path: impl AsRef<Path>) -> Result<usize> {
    let path = path.as_ref();
    if segment.is_empty() {
        return Err(wav_err(path, "refusing to write empty segment"));
    }
    if let Some(i) = segment.samples.iter().position(|s| !s.is_finite()) {
        return Err(wav_err(path, format!("non-finite sample at index {i}")));
    }
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: segment.sample_rate,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let mut writer = hound::WavWriter::create(path, spec)
        .map_err(|e| wav_err(path, format!("unwritable: {e}")))?;
    let mut clipped = 0usize;
    for &s in &segment.samples {
        let v = (s * 32768.0).round();
        let q = if v > 32767.0 {
            clipped += 1;
            32767
        } else if v < -32768.0 {
            clipped += 1;
            -32768
        } else {
            v as i16
        };
        writer
            .write_sample(q)
            .map_err(|e| wav_err(path, format!("write failed: {e}")))?;
    }
    writer
        .finalize()
        .map_err(|e| wav_err(path, format!("finalize failed: {e}")))?;
    Ok(clipped)
}
