//! Core audio types shared across the crate.

use serde::{Deserialize, Serialize};

use crate::error::{AuvError, Result};

/// The four audio domains the codec is trained on. The set is closed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainLabel {
    Speech,
    Vocal,
    Music,
    Other,
}

impl DomainLabel {
    pub const ALL: [DomainLabel; 4] = [
        DomainLabel::Speech,
        DomainLabel::Vocal,
        DomainLabel::Music,
        DomainLabel::Other,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            DomainLabel::Speech => "speech",
            DomainLabel::Vocal => "vocal",
            DomainLabel::Music => "music",
            DomainLabel::Other => "other",
        }
    }
}

impl std::str::FromStr for DomainLabel {
    type Err = AuvError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "speech" => Ok(DomainLabel::Speech),
            "vocal" => Ok(DomainLabel::Vocal),
            "music" => Ok(DomainLabel::Music),
            "other" => Ok(DomainLabel::Other),
            _ => Err(AuvError::Config(format!(
                "unknown domain {s:?} (expected one of speech, vocal, music, other)"
            ))),
        }
    }
}

impl std::fmt::Display for DomainLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Mono PCM audio. Samples are dimensionless amplitudes, nominally in
/// `[-1, 1]`. The domain label is present on training material and may be
/// absent at inference.
#[derive(Debug, Clone)]
pub struct AudioSegment {
    pub samples: Vec<f64>,
    pub sample_rate: u32,
    pub domain: Option<DomainLabel>,
}

impl AudioSegment {
    pub fn new(samples: Vec<f64>, sample_rate: u32) -> Result<Self> {
        if sample_rate == 0 {
            return Err(AuvError::InvalidAudio("sample_rate must be > 0".into()));
        }
        if let Some(i) = samples.iter().position(|s| !s.is_finite()) {
            return Err(AuvError::InvalidAudio(format!(
                "non-finite sample at index {i}"
            )));
        }
        Ok(Self {
            samples,
            sample_rate,
            domain: None,
        })
    }

    pub fn with_domain(mut self, domain: DomainLabel) -> Self {
        self.domain = Some(domain);
        self
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_sec(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::str::FromStr;

    #[test]
    fn domain_round_trip() {
        for d in DomainLabel::ALL {
            assert_eq!(DomainLabel::from_str(d.as_str()).unwrap(), d);
        }
        assert!(DomainLabel::from_str("song").is_err());
    }

    #[test]
    fn rejects_non_finite() {
        assert!(AudioSegment::new(vec![0.0, f64::NAN], 16000).is_err());
        assert!(AudioSegment::new(vec![0.0], 0).is_err());
    }
}
